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

#include "weaktag/phrase_matcher.h"

#include <algorithm>
#include <map>

namespace weaktag {

void PhraseMatcher::Trie::insert(const std::string& term, int lexicon) {
  int node = 0;
  size_t pos = 0;
  while (pos <= term.size()) {
    size_t space = term.find(' ', pos);
    if (space == std::string::npos) space = term.size();
    std::string word = term.substr(pos, space - pos);
    auto it = nodes[node].next.find(word);
    if (it == nodes[node].next.end()) {
      int id = static_cast<int>(nodes.size());
      nodes[node].next.emplace(word, id);
      nodes.emplace_back();
      node = id;
    } else {
      node = it->second;
    }
    pos = space + 1;
  }
  auto& ids = nodes[node].lexicons;
  if (ids.empty() || ids.back() != lexicon) ids.push_back(lexicon);
}

PhraseMatcher::PhraseMatcher(std::span<const Lexicon> lexicons) {
  for (size_t i = 0; i < lexicons.size(); ++i) {
    const Lexicon& lex = lexicons[i];
    Trie& trie = lex.case_sensitive() ? exact_ : folded_;
    for (const std::string& term : lex.terms()) {
      trie.insert(term, static_cast<int>(i));
    }
    max_tokens_ = std::max(max_tokens_, lex.max_term_tokens());
  }
}

std::vector<PhraseMatcher::Match> PhraseMatcher::find_all(
    const Sentence& sentence) const {
  std::map<std::pair<int, int>, std::vector<int>> found;
  const int n = sentence.size();
  std::vector<std::string> folded(n);
  for (int i = 0; i < n; ++i) folded[i] = normalize_term(sentence.tokens[i].text);

  auto walk = [&](const Trie& trie, bool exact) {
    if (trie.nodes[0].next.empty()) return;
    for (int b = 0; b < n; ++b) {
      int node = 0;
      for (int e = b; e < n; ++e) {
        const std::string& word =
            exact ? sentence.tokens[e].text : folded[e];
        auto it = trie.nodes[node].next.find(word);
        if (it == trie.nodes[node].next.end()) break;
        node = it->second;
        const auto& lexs = trie.nodes[node].lexicons;
        if (!lexs.empty()) {
          auto& slot = found[{b, e + 1}];
          slot.insert(slot.end(), lexs.begin(), lexs.end());
        }
      }
    }
  };
  walk(folded_, false);
  walk(exact_, true);

  std::vector<Match> out;
  out.reserve(found.size());
  for (auto& [span, lexs] : found) {
    std::sort(lexs.begin(), lexs.end());
    lexs.erase(std::unique(lexs.begin(), lexs.end()), lexs.end());
    out.push_back(Match{span.first, span.second, std::move(lexs)});
  }
  return out;
}

std::vector<PhraseMatcher::Match> longest_matches(
    const std::vector<PhraseMatcher::Match>& matches) {
  std::vector<PhraseMatcher::Match> out;
  for (const auto& m : matches) {
    bool contained = false;
    for (const auto& other : matches) {
      if (&other == &m) continue;
      if (other.begin <= m.begin && m.end <= other.end &&
          (other.end - other.begin) > (m.end - m.begin)) {
        contained = true;
        break;
      }
    }
    if (!contained) out.push_back(m);
  }
  return out;
}

}  // namespace weaktag
