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

#ifndef BIB2AUTH_HASH_H_
#define BIB2AUTH_HASH_H_

#include <cstdint>
#include <span>
#include <string_view>

namespace bib2auth {

inline constexpr uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr uint64_t kFnvPrime = 1099511628211ULL;

// 64-bit FNV-1a.
constexpr uint64_t Fnv1a64(std::string_view bytes,
                           uint64_t state = kFnvOffsetBasis) {
  for (char c : bytes) {
    state ^= static_cast<uint8_t>(c);
    state *= kFnvPrime;
  }
  return state;
}

inline uint64_t Fnv1a64(std::span<const uint8_t> bytes,
                        uint64_t state = kFnvOffsetBasis) {
  for (uint8_t b : bytes) {
    state ^= b;
    state *= kFnvPrime;
  }
  return state;
}

// Combines two hashes (splitmix64 finalizer over the xor).
constexpr uint64_t MixHash(uint64_t a, uint64_t b) {
  uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace bib2auth

#endif  // BIB2AUTH_HASH_H_
