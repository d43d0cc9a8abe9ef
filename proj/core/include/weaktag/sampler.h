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

// Turns spanset marginals into tagger training data: sampled BIO sequences
// and per-token soft targets.

#ifndef WEAKTAG_SAMPLER_H_
#define WEAKTAG_SAMPLER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weaktag/candidates.h"
#include "weaktag/corpus.h"
#include "weaktag/genmodel.h"

namespace weaktag {

enum class Tag : uint8_t { kO = 0, kB = 1, kI = 2 };

char tag_char(Tag tag);
Tag parse_tag(std::string_view text);  // "B", "I", "O"; also "B-X", "I-X"

// No I after O or at the sentence start.
bool is_valid_bio(std::span<const Tag> tags);

// [begin, end) token ranges of the B I* runs.
std::vector<std::pair<int, int>> spans_from_tags(std::span<const Tag> tags);
std::vector<Tag> tags_from_spans(int length,
                                 std::span<const std::pair<int, int>> spans);

struct TaggedSentence {
  std::string doc_id;
  int sent_index = 0;
  int sample_index = 0;
  double weight = 1.0;
  std::vector<Tag> tags;
};

struct SoftLabeledSentence {
  std::string doc_id;
  int sent_index = 0;
  std::vector<double> q;        // inside-mention probability per token
  std::vector<double> q_begin;  // mention-start probability per token
};

struct SampleOptions {
  int num_samples = 10;
  uint64_t seed = 13;
  int jobs = 1;
  // Sentences that lost spansets to the size cap.
  std::vector<std::pair<std::string, int>> dropped_sentences;
  // Record per-spanset outcome counts (before masking) in the result.
  bool record_counts = false;
};

struct SampleResult {
  // Sentence-major, sample-minor, in corpus order.
  std::vector<TaggedSentence> sentences;
  int masked_draws = 0;          // member draws discarded by overlap masking
  int all_dropped_sentences = 0;  // emitted all-O because of the size cap
  // counts[i][j]: draws of column j for marginals[i].
  std::vector<std::vector<int>> counts;
};

// One draw per spanset per sample; spansets of a sentence are taken in hull
// order and a drawn member overlapping an earlier drawn member is discarded.
// Each sentence has its own RNG stream keyed by (seed, doc_id, sent_index).
// Throws DataError when marginals do not fit the corpus or candidates.
SampleResult sample_dataset(std::span<const SpansetMarginal> marginals,
                            const CandidateSet& candidates, const Corpus& corpus,
                            const SampleOptions& options = {});

// q(token) = sum of p over members covering the token, clipped to [0, 1].
// q_begin(token) = sum of p over members starting at the token.
std::vector<SoftLabeledSentence> soft_labels(
    std::span<const SpansetMarginal> marginals, const CandidateSet& candidates,
    const Corpus& corpus);

// CoNLL: "# sample=k doc=D sent=S weight=w" then TOKEN<TAB>POS<TAB>TAG lines
// and a blank line per sequence.
void write_samples(std::span<const TaggedSentence> samples, const Corpus& corpus,
                   std::ostream& out, const std::string& config_hash = "");
std::vector<TaggedSentence> read_samples(std::istream& in);
std::vector<TaggedSentence> load_samples(const std::string& path);

// JSONL {"doc_id","sent","q":[...],"q_begin":[...]}.
void write_soft_labels(std::span<const SoftLabeledSentence> labels,
                       std::ostream& out, const std::string& config_hash = "");
std::vector<SoftLabeledSentence> read_soft_labels(std::istream& in);
std::vector<SoftLabeledSentence> load_soft_labels(const std::string& path);

}  // namespace weaktag

#endif  // WEAKTAG_SAMPLER_H_
