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

// Declarative experiment configs and the end-to-end pipeline:
// ingest -> stats -> candgen -> label -> fit -> marginals -> sample -> train
// -> tag -> eval. Every artifact records the config hash.

#ifndef WEAKTAG_PIPELINE_H_
#define WEAKTAG_PIPELINE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "weaktag/candidates.h"
#include "weaktag/corpus.h"
#include "weaktag/genmodel.h"
#include "weaktag/labeling.h"
#include "weaktag/mention.h"
#include "weaktag/synth.h"
#include "weaktag/tagger.h"

namespace weaktag {

struct LexiconBlock {
  std::string name;
  std::string path;        // empty when taken from the synthetic generator
  bool synthetic = false;
  int polarity = 1;
  bool case_sensitive = false;
};

struct CandidateBlock {
  std::string kind = "noun_phrase";  // kgram | dictionary | noun_phrase
  int k_max = 4;
  std::string pattern;               // noun_phrase; empty = default
  std::string mode = "longest_match";  // dictionary
};

struct LfBlock {
  std::string kind;  // lexicon tailword abbrv idf_filter df_filter
                     // phrase_fragment cascade compose custom
  std::string name;  // overrides the generated name (single-LF kinds)
  std::vector<std::string> lexicons;
  double threshold = 0.0;
  std::string direction = "reject_above";
  std::string base;  // cascade
  int vote_on_children = -1;
  std::string a, b;  // compose
  std::string combiner = "a_unless_b";
  CustomRule rule;   // custom
  bool emit = true;  // false: only referenced by other blocks
};

struct ExperimentConfig {
  std::string source_path;  // config file, if loaded from disk
  std::string base_dir;     // relative paths resolve against this
  std::string name = "experiment";
  std::string output_dir = "out";

  std::string corpus_path;
  std::string corpus_format = "jsonl";
  std::string synthetic_spec;  // path of a synthetic spec instead of a corpus

  std::vector<LexiconBlock> lexicons;
  bool stats_enabled = false;
  int stats_max_ngram = 4;
  CandidateBlock candidates;
  std::vector<LfBlock> lfs;

  std::string fit_mode = "multinomial";  // or binary
  FitOptions fit;
  int k_max_cap = 16;

  int num_samples = 10;
  uint64_t sample_seed = 13;

  TaggerOptions tagger;

  std::string gold_path;  // "synthetic" for generated gold
  std::string stopwords_path;  // "synthetic" for generated stopwords

  int jobs = 1;

  // Canonical JSON the hash is computed from.
  std::string canonical_json;

  std::string resolve(const std::string& path) const;
  std::string hash() const;
};

// Parses without touching the file system; throws ConfigError listing every
// problem found.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Static checks including path existence. Empty when valid.
std::vector<std::string> validate_config(const ExperimentConfig& config);

struct LoadedInputs {
  Corpus corpus;
  std::vector<Lexicon> lexicons;
  std::optional<std::vector<Mention>> gold;
  std::set<std::string> stopwords;
};

LoadedInputs load_inputs(const ExperimentConfig& config);

// Builds the LF list of the config; only blocks with emit = true are
// returned, in block order.
std::vector<LfPtr> build_lfs(const ExperimentConfig& config,
                             const std::vector<Lexicon>& lexicons,
                             const Corpus& corpus,
                             std::shared_ptr<const CorpusStats> stats);

CandidateSet generate_candidates(const CandidateBlock& block, const Corpus& corpus,
                                 const std::vector<Lexicon>& lexicons);

struct PipelineSummary {
  std::string config_hash;
  std::vector<std::string> artifacts;
  std::string json;  // the summary written to summary.json
  std::string text;  // human-readable summary
  std::optional<double> tagger_f1;
  std::optional<double> lexicon_f1;
  double seconds = 0.0;
};

// Runs every stage; throws the stage's error type with the stage name and the
// artifacts completed so far in the message.
PipelineSummary run_pipeline(const ExperimentConfig& config, bool quiet = true);

// Sentences of the documents used for training (train split, or unsplit).
Corpus training_documents(const Corpus& corpus);
// Held-out documents (test split); the whole corpus when there is none.
Corpus evaluation_documents(const Corpus& corpus);

}  // namespace weaktag

#endif  // WEAKTAG_PIPELINE_H_
