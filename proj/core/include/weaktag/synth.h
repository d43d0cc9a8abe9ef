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

// Synthetic corpora with known mentions, and planted labeling functions that
// vote exactly as the label model assumes.
//
// Mentions are "MOD* HEAD" phrases over pseudo-words. Every mention type has
// its own head word, so two lexicon terms can only overlap when a type's
// suffixes were added to the lexicon (nesting). Heads end in one of a few
// disease-like endings; other words never do.

#ifndef WEAKTAG_SYNTH_H_
#define WEAKTAG_SYNTH_H_

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "weaktag/candidates.h"
#include "weaktag/corpus.h"
#include "weaktag/label_matrix.h"
#include "weaktag/mention.h"

namespace weaktag {

struct SyntheticSpec {
  uint64_t seed = 7;
  int n_docs = 100;
  int min_sentences = 3;
  int max_sentences = 6;
  double test_fraction = 0.2;  // trailing documents marked "test"
  int n_types = 300;           // distinct mention strings
  int n_modifiers = 60;
  int n_fillers = 200;
  // Weights of mention lengths 1, 2, ...
  std::vector<double> length_weights = {0.3, 0.4, 0.3};
  int max_slots = 3;           // phrase slots per sentence
  double mention_rate = 0.6;   // chance a slot holds a mention
  double generic_rate = 0.15;  // chance a non-mention slot holds a generic term
  // Chance a filler slot drops its determiner ("of treatment").
  double bare_filler_rate = 0.0;
  // Fraction of multi-token types whose suffixes are lexicon terms.
  double nesting_rate = 0.5;
  // Fraction of types whose full string is a lexicon term.
  double lexicon_recall = 0.7;
  // Generic words ("disorder"-like) added to the positive lexicon.
  int n_generic = 5;
  // Filler nouns listed in the negative lexicon.
  int n_negative_terms = 40;

  // Throws ConfigError on invalid values.
  void validate() const;
  static SyntheticSpec from_json(const std::string& text);
  std::string to_json() const;
};

struct MentionType {
  std::vector<std::string> tokens;
  bool in_lexicon = false;
  bool nested = false;
};

struct SyntheticData {
  Corpus corpus;
  std::vector<Mention> gold;
  std::vector<Lexicon> lexicons;  // positive "disease", negative "nondisease"
  std::set<std::string> stopwords;
  std::vector<MentionType> types;
};

SyntheticData generate_corpus(const SyntheticSpec& spec);

// Endings shared by every head word.
const std::vector<std::string>& synthetic_head_endings();

// A spanset with known outcome: members are candidate ids, longest first;
// truth is a column (members.size() is NONE).
struct OracleSpanset {
  std::vector<int> members;
  int truth = 0;
};

struct OracleSet {
  Corpus corpus;
  CandidateSet candidates;
  std::vector<OracleSpanset> spansets;
};

// n spansets, one per sentence, each with K in [k_min, k_max] nested
// members. Truth is uniform over members and NONE when K = 2 and uniform
// over members when K > 2.
OracleSet random_oracle(int n, int k_min, int k_max, uint64_t seed);

// Overlap components of `candidates`; truth is the member equal to a gold
// mention, else NONE.
std::vector<OracleSpanset> oracle_from_gold(const CandidateSet& candidates,
                                            const std::vector<Mention>& gold);

struct PlantedLf {
  std::string name;
  double accuracy = 0.8;
  double coverage = 1.0;
};

// Each LF votes on a spanset with probability `coverage`, choosing the true
// column with probability `accuracy` and otherwise a uniformly drawn other
// column. A member column is a +1 on that member; NONE is a -1 on the sole
// member and is only expressible when K = 2, so K > 2 spansets with a NONE
// truth receive no votes and wrong votes there go to members.
LabelMatrix generate_votes(const std::vector<PlantedLf>& lfs,
                           const std::vector<OracleSpanset>& spansets,
                           int n_candidates, uint64_t seed);

}  // namespace weaktag

#endif  // WEAKTAG_SYNTH_H_
