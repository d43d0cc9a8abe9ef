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

// Exact-match mention scoring, baselines and labeling-function diagnostics.

#ifndef WEAKTAG_EVAL_H_
#define WEAKTAG_EVAL_H_

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "weaktag/candidates.h"
#include "weaktag/corpus.h"
#include "weaktag/genmodel.h"
#include "weaktag/label_matrix.h"
#include "weaktag/mention.h"

namespace weaktag {

struct ScoreReport {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Duplicates within pred or gold count once.
ScoreReport score_mentions(std::span<const Mention> pred,
                           std::span<const Mention> gold);

// Only mentions whose sentence lies in `corpus`.
std::vector<Mention> restrict_to(std::span<const Mention> mentions,
                                 const Corpus& corpus);

// Longest matches of the positive lexicons, minus matches made entirely of
// stopwords. Stopwords are compared lower-cased.
std::vector<Mention> lexicon_baseline(const Corpus& corpus,
                                      std::span<const Lexicon> lexicons,
                                      const std::set<std::string>& stopwords = {});

std::set<std::string> load_stopwords(const std::string& path);

// Per-spanset winners under majority vote (NONE on ties).
std::vector<Mention> majority_vote(std::span<const Spanset> spansets,
                                   const CandidateSet& candidates);

// Per-spanset argmax of the model marginals.
std::vector<Mention> model_argmax(std::span<const Spanset> spansets,
                                  const LfModel& model,
                                  const CandidateSet& candidates);
std::vector<Mention> marginals_argmax(std::span<const SpansetMarginal> marginals,
                                      const CandidateSet& candidates);

// Independent-candidate model: every labeled candidate whose positive
// probability exceeds 0.5.
std::vector<Mention> binary_predictions(const LfModel& model,
                                        const CandidateSet& candidates,
                                        const LabelMatrix& matrix);

Mention to_mention(const Candidate& candidate);

struct LfStats {
  std::string name;
  double coverage = 0.0;  // labeled candidates / all candidates
  double overlap = 0.0;   // labeled candidates also labeled by another LF
  double conflict = 0.0;  // labeled candidates given the opposite label by another LF
  int n_labeled = 0;
  int n_positive = 0;
  int n_negative = 0;
  std::optional<double> accuracy;  // against gold, when supplied
  int n_gold_scored = 0;
  std::optional<double> alpha;  // fitted accuracy, when a model is supplied
};

struct LfReport {
  std::vector<LfStats> lfs;
  int n_candidates = 0;
  int n_spansets = 0;
};

// overlap/conflict are fractions of the candidates the LF labels. Accuracy
// is scored over labeled candidates that overlap a gold mention: +1 is
// correct on an exact gold span, -1 is correct on any other span.
LfReport lf_report(const LabelMatrix& matrix, const CandidateSet& candidates,
                   std::span<const Spanset> spansets,
                   std::optional<std::span<const Mention>> gold = std::nullopt,
                   const LfModel* model = nullptr);

void write_lf_report_table(const LfReport& report, std::ostream& out);
std::string lf_report_json(const LfReport& report);

std::string score_json(const ScoreReport& score);
std::string format_score_row(const std::string& system, const ScoreReport& s);

// Mentions in the candidate JSONL schema.
void write_mentions(std::span<const Mention> mentions, std::ostream& out,
                    const std::string& config_hash = "");
std::vector<Mention> read_mentions(std::istream& in);
std::vector<Mention> load_mentions(const std::string& path);

}  // namespace weaktag

#endif  // WEAKTAG_EVAL_H_
