// Copyright 2026 The Stylo Authors.
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

// UTF-8 helpers. Character counts throughout the toolkit are Unicode code
// points, not bytes.

#ifndef STYLO_UTF8_H_
#define STYLO_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace stylo::utf8 {

// Invalid sequences decode to U+FFFD, one per offending byte.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
void append(std::string& out, char32_t c);

size_t length(std::string_view s);

// Drops the first n code points.
std::string drop_prefix(std::string_view s, size_t n);

// Letter classification covering ASCII and Latin-1 Supplement, which is
// enough for Danish text.
bool is_letter(char32_t c);
bool is_upper(char32_t c);
char32_t to_lower(char32_t c);

inline bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v' || c == 0xA0;
}

}  // namespace stylo::utf8

#endif  // STYLO_UTF8_H_
