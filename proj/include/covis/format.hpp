// Copyright 2026 The covis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace covis {

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// Strict full-string parses; throw DataError naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
std::uint64_t parse_uint(std::string_view s, std::string_view what);

// 64-bit FNV-1a, stable across platforms.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace covis
