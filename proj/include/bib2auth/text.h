// Copyright 2026 The Bib2Auth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BIB2AUTH_TEXT_H_
#define BIB2AUTH_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace bib2auth {

// Appends the UTF-8 encoding of a code point.
void AppendUtf8(char32_t code_point, std::string *out);

// Splits UTF-8 text into code points. Invalid bytes decode to U+FFFD so the
// result is total.
std::vector<char32_t> DecodeUtf8(std::string_view text);

// Byte length of the UTF-8 sequence starting with lead byte c (1 for invalid
// lead bytes).
int Utf8SequenceLength(unsigned char c);

// Lowercases ASCII and the Latin-1 Supplement / Latin Extended-A letters;
// everything else passes through.
char32_t FoldCase(char32_t c);
std::string FoldCase(std::string_view text);

}  // namespace bib2auth

#endif  // BIB2AUTH_TEXT_H_
