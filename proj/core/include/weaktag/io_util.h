// Copyright 2026 The weaktag Authors.
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

#ifndef WEAKTAG_IO_UTIL_H_
#define WEAKTAG_IO_UTIL_H_

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>

namespace weaktag {

// 64-bit FNV-1a. Stable across platforms; used for feature hashing, config
// hashes and per-sentence RNG streams.
uint64_t fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer, used to derive independent seeds.
uint64_t mix64(uint64_t x);

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_double(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Lower-case hex rendering of a 64-bit value, zero padded.
std::string hex64(uint64_t value);

// Opens a file or throws DataError naming the path.
std::ifstream open_input(const std::string& path);
std::ofstream open_output(const std::string& path);

// Reads a whole file into a string.
std::string read_file(const std::string& path);

// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

// First line of every JSONL artifact: {"_meta": {...}}. Readers skip it.
bool is_meta_line(std::string_view line);

}  // namespace weaktag

#endif  // WEAKTAG_IO_UTIL_H_
