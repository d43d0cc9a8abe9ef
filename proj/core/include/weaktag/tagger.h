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

// Linear BIO tagger over hashed sparse features.
//
// sampled_hard trains a weighted linear-chain CRF (L2, L-BFGS) on sampled tag
// sequences. noise_aware_soft trains a per-token softmax over {O, B, I}
// against the soft targets q_B = q_begin, q_I = q - q_begin, q_O = 1 - q and
// decodes with the same masked Viterbi. Hash collisions are tolerated.

#ifndef WEAKTAG_TAGGER_H_
#define WEAKTAG_TAGGER_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "weaktag/corpus.h"
#include "weaktag/mention.h"
#include "weaktag/phrase_matcher.h"
#include "weaktag/sampler.h"

namespace weaktag {

enum class TaggerMode { kSampledHard, kNoiseAwareSoft };

TaggerMode parse_tagger_mode(std::string_view name);
const char* tagger_mode_name(TaggerMode mode);

// Feature strings per token, before hashing.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(std::vector<Lexicon> lexicons = {});

  std::vector<std::vector<std::string>> extract(const Sentence& sentence) const;
  // Hashed into [0, 2^hash_bits).
  std::vector<std::vector<uint32_t>> extract_hashed(const Sentence& sentence,
                                                    int hash_bits) const;

  const std::vector<Lexicon>& lexicons() const { return lexicons_; }

 private:
  std::vector<Lexicon> lexicons_;
  PhraseMatcher matcher_;
};

// "Xxxx" -> "Xx", "IL-2" -> "X-d".
std::string word_shape(std::string_view token);

struct TaggerOptions {
  TaggerMode mode = TaggerMode::kSampledHard;
  double l2 = 1.0;
  int max_iters = 150;
  int hash_bits = 20;
  uint64_t seed = 13;
  int jobs = 1;  // prediction only
};

class TaggerModel {
 public:
  static constexpr int kTags = 3;  // indexed by Tag
  using TagScores = std::array<double, kTags>;

  TaggerModel() = default;
  TaggerModel(TaggerMode mode, int hash_bits, std::vector<Lexicon> lexicons);

  TaggerMode mode() const { return mode_; }
  int hash_bits() const { return hash_bits_; }
  const FeatureExtractor& features() const { return extractor_; }

  // Per-token emission scores.
  std::vector<TagScores> emissions(const Sentence& sentence) const;
  // Best valid BIO sequence.
  std::vector<Tag> decode(const Sentence& sentence) const;

  std::unordered_map<uint32_t, TagScores>& weights() { return weights_; }
  const std::unordered_map<uint32_t, TagScores>& weights() const {
    return weights_;
  }
  TagScores& start() { return start_; }
  const TagScores& start() const { return start_; }
  std::array<TagScores, kTags>& transitions() { return trans_; }
  const std::array<TagScores, kTags>& transitions() const { return trans_; }

  void write(std::ostream& out, const std::string& config_hash = "") const;
  static TaggerModel read(std::istream& in);
  static TaggerModel load(const std::string& path);

  bool operator==(const TaggerModel& other) const;

 private:
  TaggerMode mode_ = TaggerMode::kSampledHard;
  int hash_bits_ = 20;
  FeatureExtractor extractor_;
  std::unordered_map<uint32_t, TagScores> weights_;
  TagScores start_{};
  std::array<TagScores, kTags> trans_{};
};

using TrainingData =
    std::variant<std::vector<TaggedSentence>, std::vector<SoftLabeledSentence>>;

struct TrainReport {
  int iterations = 0;
  double objective = 0.0;
  size_t sequences = 0;  // after merging identical samples
  size_t features = 0;
};

// Throws ConfigError when the data kind does not match options.mode and
// DataError when the data is empty or does not fit the corpus.
TaggerModel train_tagger(const Corpus& corpus, const TrainingData& data,
                         std::vector<Lexicon> lexicons,
                         const TaggerOptions& options = {},
                         TrainReport* report = nullptr);

// Mentions of every sentence in corpus order.
std::vector<Mention> predict_mentions(const TaggerModel& model,
                                      const Corpus& corpus, int jobs = 1);

}  // namespace weaktag

#endif  // WEAKTAG_TAGGER_H_
