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

// Candidate mention spans and the generators that enumerate them.

#ifndef WEAKTAG_CANDIDATES_H_
#define WEAKTAG_CANDIDATES_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weaktag/corpus.h"

namespace weaktag {

struct Candidate {
  int id = 0;
  std::string doc_id;
  int sent_index = 0;
  int token_start = 0;
  int token_end = 0;  // exclusive
  int char_start = 0;
  int char_end = 0;
  std::string text;

  int length() const { return token_end - token_start; }
  bool overlaps(const Candidate& other) const {
    return token_start < other.token_end && other.token_start < token_end;
  }
  // Strict containment: covers `other` and is longer.
  bool contains(const Candidate& other) const {
    return token_start <= other.token_start && other.token_end <= token_end &&
           length() > other.length();
  }
};

// A span before id assignment.
struct SpanRef {
  int doc_pos = 0;  // document position in the corpus
  int sent_pos = 0;  // sentence position in the document
  int token_start = 0;
  int token_end = 0;
};

// Candidates of one generator, ordered by (document order, sentence order,
// token_start, token_end) with dense ids 0..N-1 in that order.
class CandidateSet {
 public:
  struct SentenceGroup {
    std::string doc_id;
    int sent_index = 0;
    int first = 0;  // candidate id range [first, last)
    int last = 0;
  };

  CandidateSet() = default;

  // Sorts, removes duplicate spans and assigns ids. Derives char offsets and
  // surface text from `corpus`.
  static CandidateSet from_spans(std::string generator_name, int k_max,
                                 const Corpus& corpus,
                                 std::vector<SpanRef> spans);

  // Wraps already-built candidates (e.g. read from disk); ids must be dense
  // and in canonical order. Throws DataError otherwise.
  static CandidateSet from_candidates(std::string generator_name, int k_max,
                                      std::vector<Candidate> candidates);

  const std::string& generator_name() const { return generator_name_; }
  int k_max() const { return k_max_; }
  size_t size() const { return candidates_.size(); }
  bool empty() const { return candidates_.empty(); }
  const Candidate& operator[](size_t id) const { return candidates_[id]; }
  const std::vector<Candidate>& candidates() const { return candidates_; }
  const std::vector<SentenceGroup>& groups() const { return groups_; }

  // Group index of a candidate.
  int group_of(int candidate_id) const { return group_of_[candidate_id]; }

 private:
  void build_groups();

  std::string generator_name_;
  int k_max_ = 0;
  std::vector<Candidate> candidates_;
  std::vector<SentenceGroup> groups_;
  std::vector<int> group_of_;
};

// Every contiguous span of 1..k_max tokens. k_max must lie in [1, 10].
CandidateSet generate_kgram(const Corpus& corpus, int k_max);

enum class MatchMode { kAllMatches, kLongestMatch };
MatchMode parse_match_mode(std::string_view name);

// Spans whose normalized form is a term of a positive-polarity lexicon.
// Throws ConfigError when no positive lexicon is supplied.
CandidateSet generate_dictionary(const Corpus& corpus,
                                 std::span<const Lexicon> lexicons,
                                 MatchMode mode);

// Every span of at most k_max tokens whose POS sequence matches `pattern`
// (default: kDefaultNounPhrasePattern). This includes all matching sub-spans
// of maximal noun phrases.
CandidateSet generate_noun_phrase(const Corpus& corpus, int k_max,
                                  std::string_view pattern);

// Candidate JSONL: a {"_meta": ...} header then one object per candidate
// {"id","doc_id","sent","tok_start","tok_end","text"}.
void write_candidates(const CandidateSet& set, std::ostream& out,
                      const std::string& config_hash = "");
// Char offsets are recomputed from `corpus`; spans must fit their sentence.
CandidateSet read_candidates(std::istream& in, const Corpus& corpus);
CandidateSet load_candidates(const std::string& path, const Corpus& corpus);

}  // namespace weaktag

#endif  // WEAKTAG_CANDIDATES_H_
