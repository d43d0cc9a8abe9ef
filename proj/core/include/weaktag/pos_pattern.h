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

#ifndef WEAKTAG_POS_PATTERN_H_
#define WEAKTAG_POS_PATTERN_H_

#include <regex>
#include <span>
#include <string>
#include <string_view>

#include "weaktag/corpus.h"

namespace weaktag {

// Adjective/noun runs ending in at least one noun.
inline constexpr std::string_view kDefaultNounPhrasePattern =
    "(JJ.*|NN.*)* (NN.*)+";

// A regular expression over sequences of POS tags.
//
// Syntax: a whitespace-separated sequence of elements. An element is either
// a bare tag expression (`NN.*`, `DT`) that matches exactly one tag, or a
// parenthesized alternation of elements `(JJ.*|NN.*)` optionally followed by
// one of the quantifiers `*`, `+`, `?`. Within a tag expression `.` matches
// any character of a tag and `*`, `+`, `?`, `[...]` keep their regex meaning.
// Quantifiers apply to tags only through parentheses: `(NN)+`.
class PosPattern {
 public:
  // Throws ConfigError on malformed patterns.
  static PosPattern compile(std::string_view pattern);

  // True if the whole tag sequence matches.
  bool matches(std::span<const std::string> tags) const;
  bool matches(const Sentence& sentence, int begin, int end) const;

  const std::string& source() const { return source_; }
  const std::string& regex_source() const { return regex_source_; }

 private:
  PosPattern(std::string source, std::string regex_source);

  std::string source_;
  std::string regex_source_;
  std::regex regex_;
};

}  // namespace weaktag

#endif  // WEAKTAG_POS_PATTERN_H_
