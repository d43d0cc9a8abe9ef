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

#include "weaktag/candidates.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <tuple>

#include "json.hpp"
#include "weaktag/error.h"
#include "weaktag/io_util.h"
#include "weaktag/phrase_matcher.h"
#include "weaktag/pos_pattern.h"

namespace weaktag {

using json = nlohmann::json;

CandidateSet CandidateSet::from_spans(std::string generator_name, int k_max,
                                      const Corpus& corpus,
                                      std::vector<SpanRef> spans) {
  auto key = [](const SpanRef& s) {
    return std::tie(s.doc_pos, s.sent_pos, s.token_start, s.token_end);
  };
  std::sort(spans.begin(), spans.end(),
            [&](const SpanRef& a, const SpanRef& b) { return key(a) < key(b); });
  spans.erase(std::unique(spans.begin(), spans.end(),
                          [&](const SpanRef& a, const SpanRef& b) {
                            return key(a) == key(b);
                          }),
              spans.end());

  CandidateSet set;
  set.generator_name_ = std::move(generator_name);
  set.k_max_ = k_max;
  set.candidates_.reserve(spans.size());
  for (const SpanRef& span : spans) {
    const Document& doc = corpus.documents()[span.doc_pos];
    const Sentence& sentence = doc.sentences[span.sent_pos];
    Candidate c;
    c.id = static_cast<int>(set.candidates_.size());
    c.doc_id = doc.doc_id;
    c.sent_index = sentence.sent_index;
    c.token_start = span.token_start;
    c.token_end = span.token_end;
    c.char_start = sentence.tokens[span.token_start].char_start;
    c.char_end = sentence.tokens[span.token_end - 1].char_end;
    c.text = span_text(sentence, span.token_start, span.token_end);
    set.candidates_.push_back(std::move(c));
  }
  set.build_groups();
  return set;
}

CandidateSet CandidateSet::from_candidates(std::string generator_name,
                                           int k_max,
                                           std::vector<Candidate> candidates) {
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].id != static_cast<int>(i)) {
      throw DataError("candidate ids must be dense and ordered; found id " +
                      std::to_string(candidates[i].id) + " at position " +
                      std::to_string(i));
    }
  }
  CandidateSet set;
  set.generator_name_ = std::move(generator_name);
  set.k_max_ = k_max;
  set.candidates_ = std::move(candidates);
  set.build_groups();
  return set;
}

void CandidateSet::build_groups() {
  groups_.clear();
  group_of_.assign(candidates_.size(), -1);
  for (const Candidate& c : candidates_) {
    if (groups_.empty() || groups_.back().doc_id != c.doc_id ||
        groups_.back().sent_index != c.sent_index) {
      groups_.push_back({c.doc_id, c.sent_index, c.id, c.id});
    } else if (c.token_start <
                   candidates_[groups_.back().last - 1].token_start ||
               (c.token_start ==
                    candidates_[groups_.back().last - 1].token_start &&
                c.token_end <= candidates_[groups_.back().last - 1].token_end)) {
      throw DataError("candidates out of order or duplicated at id " +
                      std::to_string(c.id));
    }
    groups_.back().last = c.id + 1;
    group_of_[c.id] = static_cast<int>(groups_.size()) - 1;
  }
}

CandidateSet generate_kgram(const Corpus& corpus, int k_max) {
  if (k_max < 1 || k_max > 10) {
    throw ConfigError("k_max must lie in [1, 10], got " + std::to_string(k_max));
  }
  std::vector<SpanRef> spans;
  const auto& docs = corpus.documents();
  for (size_t d = 0; d < docs.size(); ++d) {
    for (size_t s = 0; s < docs[d].sentences.size(); ++s) {
      const int n = docs[d].sentences[s].size();
      for (int b = 0; b < n; ++b) {
        for (int e = b + 1; e <= std::min(n, b + k_max); ++e) {
          spans.push_back({static_cast<int>(d), static_cast<int>(s), b, e});
        }
      }
    }
  }
  return CandidateSet::from_spans("kgram", k_max, corpus, std::move(spans));
}

MatchMode parse_match_mode(std::string_view name) {
  if (name == "all_matches") return MatchMode::kAllMatches;
  if (name == "longest_match") return MatchMode::kLongestMatch;
  throw ConfigError("unknown match mode '" + std::string(name) + "'");
}

CandidateSet generate_dictionary(const Corpus& corpus,
                                 std::span<const Lexicon> lexicons,
                                 MatchMode mode) {
  std::vector<Lexicon> positives;
  for (const Lexicon& lex : lexicons) {
    if (lex.polarity() > 0) positives.push_back(lex);
  }
  if (positives.empty()) {
    throw ConfigError("dictionary generator needs a positive lexicon");
  }
  PhraseMatcher matcher(positives);
  std::vector<SpanRef> spans;
  const auto& docs = corpus.documents();
  for (size_t d = 0; d < docs.size(); ++d) {
    for (size_t s = 0; s < docs[d].sentences.size(); ++s) {
      auto matches = matcher.find_all(docs[d].sentences[s]);
      if (mode == MatchMode::kLongestMatch) matches = longest_matches(matches);
      for (const auto& m : matches) {
        spans.push_back({static_cast<int>(d), static_cast<int>(s), m.begin,
                         m.end});
      }
    }
  }
  return CandidateSet::from_spans("dict", matcher.max_term_tokens(), corpus,
                                  std::move(spans));
}

CandidateSet generate_noun_phrase(const Corpus& corpus, int k_max,
                                  std::string_view pattern) {
  if (k_max < 1 || k_max > 10) {
    throw ConfigError("k_max must lie in [1, 10], got " + std::to_string(k_max));
  }
  PosPattern compiled = PosPattern::compile(
      pattern.empty() ? kDefaultNounPhrasePattern : pattern);
  std::vector<SpanRef> spans;
  const auto& docs = corpus.documents();
  for (size_t d = 0; d < docs.size(); ++d) {
    for (size_t s = 0; s < docs[d].sentences.size(); ++s) {
      const Sentence& sentence = docs[d].sentences[s];
      const int n = sentence.size();
      for (int b = 0; b < n; ++b) {
        for (int e = b + 1; e <= std::min(n, b + k_max); ++e) {
          if (compiled.matches(sentence, b, e)) {
            spans.push_back({static_cast<int>(d), static_cast<int>(s), b, e});
          }
        }
      }
    }
  }
  return CandidateSet::from_spans("np", k_max, corpus, std::move(spans));
}

void write_candidates(const CandidateSet& set, std::ostream& out,
                      const std::string& config_hash) {
  json meta = {{"generator", set.generator_name()}, {"k_max", set.k_max()}};
  if (!config_hash.empty()) meta["config_hash"] = config_hash;
  out << json{{"_meta", meta}}.dump() << '\n';
  for (const Candidate& c : set.candidates()) {
    json record = {{"id", c.id},
                   {"doc_id", c.doc_id},
                   {"sent", c.sent_index},
                   {"tok_start", c.token_start},
                   {"tok_end", c.token_end},
                   {"text", c.text}};
    out << record.dump() << '\n';
  }
}

CandidateSet read_candidates(std::istream& in, const Corpus& corpus) {
  std::string generator = "unknown";
  int k_max = 0;
  std::vector<Candidate> candidates;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json record = json::parse(line);
      if (record.contains("_meta")) {
        generator = record["_meta"].value("generator", generator);
        k_max = record["_meta"].value("k_max", k_max);
        continue;
      }
      Candidate c;
      c.id = record.at("id").get<int>();
      c.doc_id = record.at("doc_id").get<std::string>();
      c.sent_index = record.at("sent").get<int>();
      c.token_start = record.at("tok_start").get<int>();
      c.token_end = record.at("tok_end").get<int>();
      const Sentence* sentence = corpus.find_sentence(c.doc_id, c.sent_index);
      if (sentence == nullptr) {
        throw DataError("unknown sentence (" + c.doc_id + ", " +
                        std::to_string(c.sent_index) + ")");
      }
      if (c.token_start < 0 || c.token_start >= c.token_end ||
          c.token_end > sentence->size()) {
        throw DataError("span out of sentence bounds");
      }
      c.char_start = sentence->tokens[c.token_start].char_start;
      c.char_end = sentence->tokens[c.token_end - 1].char_end;
      c.text = span_text(*sentence, c.token_start, c.token_end);
      k_max = std::max(k_max, c.length());
      candidates.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw DataError("candidates line " + std::to_string(line_no) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError("candidates line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return CandidateSet::from_candidates(generator, k_max, std::move(candidates));
}

CandidateSet load_candidates(const std::string& path, const Corpus& corpus) {
  std::ifstream in = open_input(path);
  return read_candidates(in, corpus);
}

}  // namespace weaktag
