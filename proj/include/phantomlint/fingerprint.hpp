/*
 * Copyright (C) 2026 The phantomlint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace phantomlint {

// FNV-1a, 64 bit. Content identification only, not cryptographic.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string content_fingerprint(std::string_view bytes) {
  static const char *hex = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out = "fnv1a:";
  for (int shift = 60; shift >= 0; shift -= 4)
    out.push_back(hex[(h >> shift) & 0xF]);
  return out;
}

} // namespace phantomlint
