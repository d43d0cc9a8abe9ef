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

#ifndef WEAKTAG_PHRASE_MATCHER_H_
#define WEAKTAG_PHRASE_MATCHER_H_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "weaktag/corpus.h"

namespace weaktag {

// Token-level trie over lexicon terms. Reports every (begin, end) token span
// of a sentence whose normalized form is a term, together with the indices
// of the lexicons containing it.
class PhraseMatcher {
 public:
  struct Match {
    int begin = 0;
    int end = 0;
    std::vector<int> lexicons;  // indices into the constructor's list
  };

  explicit PhraseMatcher(std::span<const Lexicon> lexicons);

  // Matches sorted by (begin, end).
  std::vector<Match> find_all(const Sentence& sentence) const;

  int max_term_tokens() const { return max_tokens_; }

 private:
  struct Node {
    std::unordered_map<std::string, int> next;
    std::vector<int> lexicons;
  };
  struct Trie {
    std::vector<Node> nodes{Node()};
    void insert(const std::string& term, int lexicon);
  };

  Trie folded_;  // case-insensitive lexicons
  Trie exact_;   // case-sensitive lexicons
  int max_tokens_ = 0;
};

// Keeps only matches not strictly contained in another match of the list.
std::vector<PhraseMatcher::Match> longest_matches(
    const std::vector<PhraseMatcher::Match>& matches);

}  // namespace weaktag

#endif  // WEAKTAG_PHRASE_MATCHER_H_
