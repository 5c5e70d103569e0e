// Copyright 2026 The vidcheck Authors.
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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace vidcheck {

// Trims ASCII whitespace and folds internal runs into one space.
std::string collapse_whitespace(std::string_view text);

// Code points in a UTF-8 string; stray continuation bytes are not counted.
std::size_t utf8_length(std::string_view text) noexcept;

// Longest prefix holding at most max_chars code points. Never ends inside a
// multi-byte sequence.
std::string_view utf8_prefix(std::string_view text, std::size_t max_chars) noexcept;

std::string to_lower_ascii(std::string_view text);

}  // namespace vidcheck
