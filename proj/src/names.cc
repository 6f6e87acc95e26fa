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

#include "bib2auth/names.h"

#include <algorithm>

#include "bib2auth/core.h"
#include "bib2auth/text.h"

namespace bib2auth {

std::string_view VariantStyleName(VariantStyle style) {
  switch (style) {
    case VariantStyle::kFull:
      return "FULL";
    case VariantStyle::kLastCommaFirst:
      return "LAST_COMMA_FIRST";
    case VariantStyle::kInitialLast:
      return "INITIAL_LAST";
    case VariantStyle::kLastCommaInitial:
      return "LAST_COMMA_INITIAL";
    case VariantStyle::kFirstInitialLast:
      return "FIRST_INITIAL_LAST";
    case VariantStyle::kInitialsLast:
      return "INITIALS_LAST";
  }
  return "FULL";
}

std::optional<VariantStyle> ParseVariantStyle(std::string_view name) {
  for (VariantStyle s :
       {VariantStyle::kFull, VariantStyle::kLastCommaFirst,
        VariantStyle::kInitialLast, VariantStyle::kLastCommaInitial,
        VariantStyle::kFirstInitialLast, VariantStyle::kInitialsLast}) {
    if (VariantStyleName(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<std::string> NormalizeName(std::string_view raw) {
  std::string name = DisplayName(raw);
  if (name.empty()) throw Error("empty name");
  std::vector<std::string> tokens;
  size_t start = 0;
  while (start < name.size()) {
    size_t end = name.find(' ', start);
    if (end == std::string::npos) end = name.size();
    tokens.push_back(name.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

std::string Initial(std::string_view token) {
  if (token.empty()) return ".";
  size_t len = std::min<size_t>(
      Utf8SequenceLength(static_cast<unsigned char>(token[0])), token.size());
  std::string out(token.substr(0, len));
  out.push_back('.');
  return out;
}

NameVariant RenderVariant(const std::vector<std::string> &tokens,
                          VariantStyle style) {
  if (tokens.empty()) throw Error("empty name");
  auto full = [&] {
    std::string s;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i) s.push_back(' ');
      s += tokens[i];
    }
    return s;
  };
  if (tokens.size() == 1) {
    if (style != VariantStyle::kFull) {
      throw Error("single-token name '" + tokens[0] + "' only has FULL style");
    }
    return {style, tokens[0]};
  }
  const std::string &first = tokens.front();
  const std::string &last = tokens.back();
  switch (style) {
    case VariantStyle::kFull:
      return {style, full()};
    case VariantStyle::kLastCommaFirst:
      return {style, last + ", " + first};
    case VariantStyle::kInitialLast:
      return {style, Initial(first) + " " + last};
    case VariantStyle::kLastCommaInitial:
      return {style, last + ", " + Initial(first)};
    case VariantStyle::kFirstInitialLast:
      return {style, first + " " + Initial(last)};
    case VariantStyle::kInitialsLast: {
      if (tokens.size() < 3) return RenderVariant(tokens, VariantStyle::kInitialLast);
      std::string s;
      for (size_t i = 0; i + 1 < tokens.size(); ++i) s += Initial(tokens[i]) + " ";
      return {style, s + last};
    }
  }
  throw Error("unknown variant style");
}

std::vector<NameVariant> GenerateVariants(
    const std::vector<std::string> &tokens) {
  if (tokens.empty()) throw Error("empty name");
  if (tokens.size() == 1) return {RenderVariant(tokens, VariantStyle::kFull)};
  std::vector<NameVariant> out;
  for (VariantStyle s :
       {VariantStyle::kFull, VariantStyle::kLastCommaFirst,
        VariantStyle::kInitialLast, VariantStyle::kLastCommaInitial,
        VariantStyle::kFirstInitialLast}) {
    out.push_back(RenderVariant(tokens, s));
  }
  if (tokens.size() >= 3) {
    out.push_back(RenderVariant(tokens, VariantStyle::kInitialsLast));
  }
  return out;
}

}  // namespace bib2auth
