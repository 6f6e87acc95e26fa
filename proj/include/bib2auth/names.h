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

#ifndef BIB2AUTH_NAMES_H_
#define BIB2AUTH_NAMES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bib2auth {

// Citation styles a name can be rendered in.
enum class VariantStyle {
  kFull,              // First Middle Last
  kLastCommaFirst,    // Last, First
  kInitialLast,       // F. Last
  kLastCommaInitial,  // Last, F.
  kFirstInitialLast,  // First L.
  kInitialsLast,      // F. M. Last (names with middle tokens only)
};

std::string_view VariantStyleName(VariantStyle style);
std::optional<VariantStyle> ParseVariantStyle(std::string_view name);

struct NameVariant {
  VariantStyle style = VariantStyle::kFull;
  std::string rendered;

  bool operator==(const NameVariant &) const = default;
};

// Tokens of a name (first, middles..., last), with a trailing four-digit
// disambiguation suffix removed. Case and diacritics are kept. Throws
// "empty name" for blank input.
std::vector<std::string> NormalizeName(std::string_view raw);

// First code point of a token followed by '.'.
std::string Initial(std::string_view token);

NameVariant RenderVariant(const std::vector<std::string> &tokens,
                          VariantStyle style);

// One token: FULL only. Two tokens: the five two-part styles. Three or more:
// those five plus INITIALS_LAST. Order follows the VariantStyle enum.
std::vector<NameVariant> GenerateVariants(
    const std::vector<std::string> &tokens);

}  // namespace bib2auth

#endif  // BIB2AUTH_NAMES_H_
