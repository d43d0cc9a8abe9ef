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

// Labeling functions: deterministic rules mapping a candidate to -1
// (negative), 0 (abstain) or +1 (positive), the generators that instantiate
// them from lexicons and corpus statistics, and the matrix builder.

#ifndef WEAKTAG_LABELING_H_
#define WEAKTAG_LABELING_H_

#include <cstdint>
#include <memory>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "weaktag/candidates.h"
#include "weaktag/corpus.h"
#include "weaktag/label_matrix.h"

namespace weaktag {

enum class LfKind {
  kLexiconMember,
  kTailWord,
  kAbbrvDef,
  kIdfFilter,
  kDfFilter,
  kPhraseFragment,
  kChildrenCascade,
  kComposition,
  kCustomRule,
};

const char* lf_kind_name(LfKind kind);

// Read-only view of the candidates being labeled and their sentences.
class LfContext {
 public:
  LfContext(const Corpus& corpus, const CandidateSet& candidates);

  const Corpus& corpus() const { return *corpus_; }
  const CandidateSet& candidates() const { return *candidates_; }
  const Candidate& candidate(int id) const { return (*candidates_)[id]; }
  const Sentence& sentence(int candidate_id) const {
    return *group_sentences_[candidates_->group_of(candidate_id)];
  }

 private:
  const Corpus* corpus_;
  const CandidateSet* candidates_;
  std::vector<const Sentence*> group_sentences_;
};

class LabelingFunction {
 public:
  LabelingFunction(std::string name, LfKind kind, int polarity_hint)
      : name_(std::move(name)), kind_(kind), polarity_hint_(polarity_hint) {}
  virtual ~LabelingFunction() = default;

  const std::string& name() const { return name_; }
  LfKind kind() const { return kind_; }
  // +1, -1, or 0 for mixed.
  int polarity_hint() const { return polarity_hint_; }

  // Label of a single candidate.
  virtual int label(const LfContext& ctx, int candidate_id) const = 0;

  // Labels of every candidate. A candidate whose evaluation throws is
  // recorded as an abstain and counted in `*failures`.
  virtual std::vector<int8_t> label_all(const LfContext& ctx,
                                        int* failures) const;

 private:
  std::string name_;
  LfKind kind_;
  int polarity_hint_;
};

using LfPtr = std::shared_ptr<const LabelingFunction>;

// One LF per lexicon: the lexicon's polarity when the normalized candidate
// text is a term, else abstain.
std::vector<LfPtr> gen_lexicon_lfs(std::span<const Lexicon> lexicons);

// One LF per lexicon: the lexicon's polarity when the candidate's last token
// is a single-token term.
std::vector<LfPtr> gen_tailword_lfs(std::span<const Lexicon> lexicons);

// True if `short_form` abbreviates `long_form`: its letters and digits occur
// in order in the long form with the first at a word start, or its letters
// are a permutation of the long form's word initials ("DM" for "myotonic
// dystrophy").
bool is_abbreviation_of(std::string_view short_form, std::string_view long_form);

// Parenthetical definitions "LONG ( SHORT )" where LONG is a lexicon term.
// The short form takes that lexicon's polarity everywhere in the document.
LfPtr gen_abbrv_lf(std::span<const Lexicon> lexicons, const Corpus& corpus);

// Direction of the document-frequency filter.
enum class DfDirection {
  kRejectAbove,      // -1 when df > threshold (too common)
  kRejectAtOrBelow,  // -1 when df <= threshold (too rare)
};

DfDirection parse_df_direction(std::string_view name);

// IDF filter (-1 when idf <= idf_threshold) and DF filter. Candidates whose
// n-gram is absent from `stats` get an abstain.
LfPtr gen_idf_filter_lf(std::shared_ptr<const CorpusStats> stats,
                        double idf_threshold);
LfPtr gen_df_filter_lf(std::shared_ptr<const CorpusStats> stats,
                       int df_threshold,
                       DfDirection direction = DfDirection::kRejectAbove);
std::vector<LfPtr> gen_filter_lfs(std::shared_ptr<const CorpusStats> stats,
                                  double idf_threshold, int df_threshold,
                                  DfDirection direction = DfDirection::kRejectAbove);

// -1 when the candidate's last token is tagged JJ, JJR or JJS.
LfPtr gen_phrase_fragment_lf();

// +1 on every candidate that `base` labels +1 and that no base-positive
// candidate strictly contains; `vote_on_children` on every candidate of the
// sentence strictly nested inside such a candidate.
LfPtr gen_children_cascade(LfPtr base, int vote_on_children = -1,
                           std::string name = "");

enum class Combiner {
  kAndAgree,  // a's label iff a and b emit the same non-zero label
  kAUnlessB,  // a's label unless b emits a non-zero label
};

Combiner parse_combiner(std::string_view name);

LfPtr compose(LfPtr a, LfPtr b, Combiner combiner, std::string name = "");

// Temporal modifiers shipped as the default head-token set. Extend per task.
const std::vector<std::string>& default_temporal_modifiers();

struct CustomRule {
  enum class Type { kHeadTokenInSet, kSurfaceRegex, kContextWindow };
  enum class Side { kLeft, kRight, kBoth };

  Type type = Type::kHeadTokenInSet;
  int label = -1;
  std::vector<std::string> tokens;  // compared lower-cased
  std::string pattern;              // surface regex (ECMAScript, search)
  int window = 3;
  Side side = Side::kLeft;
};

// Throws ConfigError on invalid regexes, labels or windows.
LfPtr gen_custom_rule(const CustomRule& rule, std::string name);

// Runs every LF over every candidate with up to `jobs` worker threads and
// collects the non-abstain outputs. Output does not depend on `jobs`.
LabelMatrix apply_lfs(std::span<const LfPtr> lfs, const CandidateSet& candidates,
                      const Corpus& corpus, int jobs = 1);

}  // namespace weaktag

#endif  // WEAKTAG_LABELING_H_
