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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "weaktag/candidates.h"
#include "weaktag/corpus.h"
#include "weaktag/eval.h"
#include "weaktag/genmodel.h"
#include "weaktag/labeling.h"
#include "weaktag/pipeline.h"
#include "weaktag/sampler.h"
#include "weaktag/synth.h"

namespace weaktag {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Sentence tagged_sentence(const std::string& doc_id, int idx, const std::string& text) {
  Sentence s;
  s.doc_id = doc_id;
  s.sent_index = idx;
  std::istringstream in(text);
  std::string item;
  int offset = 0;
  while (in >> item) {
    const size_t slash = item.rfind('/');
    std::string word = item.substr(0, slash);
    s.tokens.push_back({word, item.substr(slash + 1), offset,
                        offset + static_cast<int>(word.size())});
    offset += static_cast<int>(word.size()) + 1;
  }
  return s;
}

Corpus single_sentence_corpus(const std::string& text) {
  Document d;
  d.doc_id = "d0";
  d.sentences.push_back(tagged_sentence("d0", 0, text));
  Corpus c;
  c.add_document(std::move(d));
  return c;
}

std::vector<Mention> oracle_gold(const OracleSet& o) {
  std::vector<Mention> gold;
  for (const OracleSpanset& s : o.spansets) {
    if (s.truth < static_cast<int>(s.members.size())) {
      gold.push_back(to_mention(o.candidates[s.members[s.truth]]));
    }
  }
  return gold;
}

// 1. Planted accuracies are recovered from agreements alone.
Outcome planted_recovery() {
  const auto t0 = Clock::now();
  OracleSet o = random_oracle(5000, 2, 4, 101);
  std::vector<PlantedLf> lfs;
  for (int i = 0; i < 10; ++i) {
    lfs.push_back({"lf" + std::to_string(i), 0.6 + 0.35 * i / 9.0, 0.5 + 0.05 * i});
  }
  LabelMatrix lm = generate_votes(lfs, o.spansets, o.candidates.size(), 202);
  auto spansets = partition_spansets(o.candidates, lm).spansets;
  LfModel model = fit(spansets, lm.lf_names());
  double worst = 0.0;
  for (size_t i = 0; i < lfs.size(); ++i) {
    worst = std::max(worst, std::abs(model.accuracies[i] - lfs[i].accuracy));
  }
  const double secs = seconds_since(t0);
  return {worst <= 0.05 && secs < 30.0,
          fmt("max |fitted - planted| = %.4f (<= 0.05) in %.2f s (< 30 s)", worst, secs)};
}

struct NestedModels {
  double multinomial_f1 = 0.0;
  double binary_f1 = 0.0;
  double max_marginal_gap = 0.0;
  bool any_overlap = false;
};

NestedModels compare_under_nesting(double nesting_rate) {
  SyntheticSpec spec;
  spec.n_docs = 300;
  spec.nesting_rate = nesting_rate;
  SyntheticData data = generate_corpus(spec);
  CandidateSet cands =
      generate_dictionary(data.corpus, data.lexicons, MatchMode::kAllMatches);
  std::vector<LfPtr> lfs = gen_lexicon_lfs(data.lexicons);
  LfPtr disease = lfs[0];
  lfs.push_back(gen_children_cascade(disease));
  CustomRule morph;
  morph.type = CustomRule::Type::kSurfaceRegex;
  morph.pattern = "(itis|emia|osis|pathy|oma|algia)$";
  morph.label = 1;
  lfs.push_back(gen_custom_rule(morph, "morph"));
  LabelMatrix lm = apply_lfs(lfs, cands, data.corpus, 1);

  NestedModels out;
  auto spansets = partition_spansets(cands, lm).spansets;
  for (const Spanset& s : spansets) out.any_overlap |= s.members.size() > 1;
  FitOptions opts;
  opts.prior = ClassPrior::kEmpirical;
  LfModel multi = fit(spansets, lm.lf_names(), opts);
  LfModel binary = fit_binary_baseline(cands, lm, opts);
  out.multinomial_f1 = score_mentions(model_argmax(spansets, multi, cands), data.gold).f1;
  out.binary_f1 = score_mentions(binary_predictions(binary, cands, lm), data.gold).f1;

  if (!out.any_overlap) {
    std::vector<double> by_candidate(cands.size(), -1.0);
    for (const Spanset& s : binary_spansets(cands, lm)) {
      by_candidate[s.members[0]] = marginals(s, binary)[0];
    }
    for (const Spanset& s : spansets) {
      const double p = marginals(s, multi)[0];
      out.max_marginal_gap =
          std::max(out.max_marginal_gap, std::abs(p - by_candidate[s.members[0]]));
    }
  }
  return out;
}

// 2. Mutual exclusion helps when lexicon terms nest.
Outcome multinomial_vs_binary() {
  NestedModels nested = compare_under_nesting(0.8);
  NestedModels flat = compare_under_nesting(0.0);
  const double gain = 100.0 * (nested.multinomial_f1 - nested.binary_f1);
  const bool pass = gain >= 2.0 && !flat.any_overlap && flat.max_marginal_gap <= 1e-6;
  return {pass,
          fmt("nesting 0.8: multinomial F1 %.1f vs binary %.1f (gain %.1f >= 2); "
              "nesting 0: max marginal gap %.2e (<= 1e-6)%s",
              100.0 * nested.multinomial_f1, 100.0 * nested.binary_f1, gain,
              flat.max_marginal_gap, flat.any_overlap ? ", but spansets overlap" : "")};
}

// 3. Fitted model versus majority vote.
Outcome model_vs_majority() {
  OracleSet o = random_oracle(3000, 2, 3, 303);
  std::vector<Mention> gold = oracle_gold(o);
  std::vector<PlantedLf> mixed = {{"g1", 0.95, 0.7}, {"g2", 0.9, 0.7},
                                  {"w1", 0.6, 0.8},  {"w2", 0.6, 0.8},
                                  {"w3", 0.6, 0.8},  {"w4", 0.62, 0.8}};
  LabelMatrix lm = generate_votes(mixed, o.spansets, o.candidates.size(), 404);
  auto spansets = partition_spansets(o.candidates, lm).spansets;
  LfModel model = fit(spansets, lm.lf_names());
  const double model_f1 = score_mentions(model_argmax(spansets, model, o.candidates), gold).f1;
  const double mv_f1 = score_mentions(majority_vote(spansets, o.candidates), gold).f1;

  std::vector<PlantedLf> same;
  for (int i = 0; i < 7; ++i) same.push_back({"h" + std::to_string(i), 0.75, 0.8});
  LabelMatrix hm = generate_votes(same, o.spansets, o.candidates.size(), 505);
  auto hspansets = partition_spansets(o.candidates, hm).spansets;
  LfModel hmodel = fit(hspansets, hm.lf_names());
  int untied = 0, disagree = 0;
  for (const Spanset& s : hspansets) {
    const std::vector<double> mass = s.votes.column_sums();
    const double top = *std::max_element(mass.begin(), mass.end());
    if (std::count_if(mass.begin(), mass.end(),
                      [&](double m) { return std::abs(m - top) < 1e-12; }) > 1) {
      continue;
    }
    ++untied;
    const int best = static_cast<int>(std::max_element(mass.begin(), mass.end()) -
                                      mass.begin());
    disagree += argmax_column(marginals(s, hmodel)) != best;
  }
  const double gap = 100.0 * (model_f1 - mv_f1);
  return {gap >= 1.0 && disagree == 0,
          fmt("heterogeneous: model F1 %.1f vs MV %.1f (gap %.1f >= 1); "
              "homogeneous: %d of %d untied spansets differ from MV (0)",
              100.0 * model_f1, 100.0 * mv_f1, gap, disagree, untied)};
}

struct CountCheck {
  int spansets = 0;
  int checks = 0;
  int outside = 0;
  double worst = 0.0;
};

CountCheck check_counts(std::span<const SpansetMarginal> margs, const CandidateSet& cands,
                        const Corpus& corpus) {
  SampleOptions big;
  big.num_samples = 10000;
  big.record_counts = true;
  SampleResult r = sample_dataset(margs, cands, corpus, big);
  CountCheck out;
  out.spansets = static_cast<int>(margs.size());
  for (size_t i = 0; i < margs.size(); ++i) {
    for (size_t j = 0; j < margs[i].p.size(); ++j) {
      const double p = margs[i].p[j];
      const double sd = std::sqrt(big.num_samples * p * (1.0 - p));
      const double dev = std::abs(r.counts[i][j] - big.num_samples * p);
      ++out.checks;
      if (dev > 3.0 * sd + 1e-9) ++out.outside;
      if (sd > 0) out.worst = std::max(out.worst, dev / sd);
    }
  }
  return out;
}

// 4. Sampled outcome frequencies track the marginals; samples are valid BIO.
// Every spanset of a small planted fixture must land within 3 sd; on a large
// fixture the share of counts beyond 3 sd must stay near its nominal 0.27%.
Outcome sampling_fidelity() {
  OracleSet o = random_oracle(20, 2, 4, 44);
  LabelMatrix om = generate_votes({{"a", 0.8, 0.7}, {"b", 0.7, 0.6}, {"c", 0.6, 0.9}},
                                  o.spansets, o.candidates.size(), 45);
  auto ospansets = partition_spansets(o.candidates, om).spansets;
  auto omargs = compute_marginals(ospansets, fit(ospansets, om.lf_names()));
  CountCheck small = check_counts(omargs, o.candidates, o.corpus);

  SyntheticSpec spec;
  spec.n_docs = 20;
  spec.nesting_rate = 0.8;
  SyntheticData data = generate_corpus(spec);
  CandidateSet cands = generate_noun_phrase(data.corpus, 4, "");
  std::vector<LfPtr> lfs = gen_lexicon_lfs(data.lexicons);
  lfs.push_back(gen_children_cascade(lfs[0]));
  lfs.push_back(gen_phrase_fragment_lf());
  LabelMatrix lm = apply_lfs(lfs, cands, data.corpus, 1);
  auto spansets = partition_spansets(cands, lm).spansets;
  auto margs = compute_marginals(spansets, fit(spansets, lm.lf_names()));
  CountCheck large = check_counts(margs, cands, data.corpus);
  const double rate = static_cast<double>(large.outside) / large.checks;

  SampleResult ten = sample_dataset(margs, cands, data.corpus);
  int invalid = 0;
  for (const TaggedSentence& s : ten.sentences) invalid += !is_valid_bio(s.tags);
  return {small.outside == 0 && rate <= 0.01 && invalid == 0 && !ten.sentences.empty(),
          fmt("%d planted spansets: %d of %d counts beyond 3 sd (worst %.2f sd); "
              "%d synthetic spansets: %.2f%% beyond 3 sd (<= 1%%); "
              "%d of %zu default samples invalid BIO",
              small.spansets, small.outside, small.checks, small.worst, large.spansets,
              100.0 * rate, invalid, ten.sentences.size())};
}

bool non_decreasing(const std::vector<double>& trace, double slack) {
  for (size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] < trace[i - 1] - slack) return false;
  }
  return true;
}

// 5. Marginals are distributions; EM never moves backwards.
Outcome invariants() {
  std::vector<std::function<std::pair<std::vector<Spanset>, std::vector<std::string>>()>>
      fixtures;
  auto planted = [](int k_min, int k_max, uint64_t seed) {
    return [=] {
      OracleSet o = random_oracle(2000, k_min, k_max, seed);
      std::vector<PlantedLf> lfs = {{"a", 0.9, 0.8}, {"b", 0.7, 0.6}, {"c", 0.65, 0.9},
                                    {"d", 0.8, 0.5}};
      LabelMatrix lm = generate_votes(lfs, o.spansets, o.candidates.size(), seed + 1);
      return std::make_pair(partition_spansets(o.candidates, lm).spansets, lm.lf_names());
    };
  };
  fixtures.push_back(planted(2, 2, 1));
  fixtures.push_back(planted(2, 5, 2));
  fixtures.push_back([] {
    SyntheticSpec spec;
    spec.n_docs = 200;
    SyntheticData data = generate_corpus(spec);
    CandidateSet cands = generate_noun_phrase(data.corpus, 4, "");
    std::vector<LfPtr> lfs = gen_lexicon_lfs(data.lexicons);
    for (LfPtr lf : gen_tailword_lfs(data.lexicons)) lfs.push_back(lf);
    lfs.push_back(gen_children_cascade(lfs[0]));
    lfs.push_back(gen_phrase_fragment_lf());
    LabelMatrix lm = apply_lfs(lfs, cands, data.corpus, 1);
    return std::make_pair(partition_spansets(cands, lm).spansets, lm.lf_names());
  });

  double worst_sum = 0.0;
  int runs = 0, bad_traces = 0;
  for (const auto& make : fixtures) {
    auto [spansets, names] = make();
    for (ClassPrior prior : {ClassPrior::kUniform, ClassPrior::kEmpirical}) {
      for (double smoothing : {2.0, 0.0}) {
        FitOptions opts;
        opts.prior = prior;
        opts.smoothing_a = opts.smoothing_b = smoothing;
        LfModel model = fit(spansets, names, opts);
        ++runs;
        const auto& trace =
            smoothing > 0 ? model.report.objective_trace : model.report.log_likelihood_trace;
        bad_traces += !non_decreasing(trace, 1e-8);
        for (const SpansetMarginal& m : compute_marginals(spansets, model)) {
          double sum = 0.0;
          for (double p : m.p) sum += p;
          worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        }
      }
    }
  }
  return {worst_sum <= 1e-9 && bad_traces == 0,
          fmt("max |sum p - 1| = %.2e (<= 1e-9); %d of %d EM traces decrease", worst_sum,
              bad_traces, runs)};
}

// 6. Three nested hypertension spans.
Outcome hypertension_fixture() {
  Corpus corpus =
      single_sentence_corpus("primary/JJ pulmonary/JJ hypertension/NN is/VBZ rare/JJ ./.");
  CandidateSet cands = generate_noun_phrase(corpus, 4, "");
  std::vector<Lexicon> lex = {Lexicon(
      "disease", 1,
      {"primary pulmonary hypertension", "pulmonary hypertension", "hypertension"})};
  std::vector<LfPtr> lfs = gen_lexicon_lfs(lex);
  lfs.push_back(gen_children_cascade(lfs[0]));
  LabelMatrix lm = apply_lfs(lfs, cands, corpus, 1);
  auto spansets = partition_spansets(cands, lm).spansets;
  LfModel model = fit(spansets, lm.lf_names());
  std::string top = "(none)";
  if (spansets.size() == 1) {
    int col = argmax_column(marginals(spansets[0], model));
    if (col < static_cast<int>(spansets[0].members.size())) {
      top = cands[spansets[0].members[col]].text;
    }
  }

  std::vector<LfPtr> lexicon_only = gen_lexicon_lfs(lex);
  LabelMatrix plain = apply_lfs(lexicon_only, cands, corpus, 1);
  LfModel common = make_model(plain.lf_names(), 0.7);
  int binary_above = 0;
  for (const Spanset& s : binary_spansets(cands, plain)) {
    binary_above += marginals(s, common)[0] > 0.5;
  }
  int multi_above = 0;
  for (const Spanset& s : partition_spansets(cands, plain).spansets) {
    auto p = marginals(s, common);
    for (size_t j = 0; j + 1 < p.size(); ++j) multi_above += p[j] > 0.5;
  }
  return {top == "primary pulmonary hypertension" && binary_above >= 2 && multi_above <= 1,
          fmt("with cascade argmax '%s'; without cascade at alpha 0.7: binary %d spans "
              "above 0.5 (>= 2), multinomial %d (<= 1)",
              top.c_str(), binary_above, multi_above)};
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig bundled_config(const fs::path& out_dir) {
  ExperimentConfig c =
      load_config(std::string(WEAKTAG_SOURCE_DIR) + "/configs/synthetic_disease.json");
  c.output_dir = out_dir.string();
  c.jobs = 1;
  c.fit.jobs = 1;
  c.tagger.jobs = 1;
  return c;
}

// 7 and 8 share the first run.
struct Runs {
  fs::path first, second;
  PipelineSummary summary;
  double seconds = 0.0;
  std::string error;
};

Runs run_bundled_twice() {
  Runs r;
  const fs::path base = fs::temp_directory_path() / "weaktag_acceptance";
  fs::remove_all(base);
  r.first = base / "run1";
  r.second = base / "run2";
  try {
    const auto t0 = Clock::now();
    r.summary = run_pipeline(bundled_config(r.first));
    r.seconds = seconds_since(t0);
    run_pipeline(bundled_config(r.second));
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

Outcome end_to_end(const Runs& r) {
  if (!r.error.empty()) return {false, "pipeline failed: " + r.error};
  if (!r.summary.tagger_f1 || !r.summary.lexicon_f1) return {false, "no scores reported"};
  const double tagger = 100.0 * *r.summary.tagger_f1;
  const double lexicon = 100.0 * *r.summary.lexicon_f1;
  return {r.seconds < 60.0 && tagger >= lexicon + 10.0,
          fmt("%.1f s (< 60 s); tagger F1 %.1f vs lexicon %.1f (margin %.1f >= 10)",
              r.seconds, tagger, lexicon, tagger - lexicon)};
}

Outcome determinism(const Runs& r) {
  if (!r.error.empty()) return {false, "pipeline failed: " + r.error};
  std::vector<std::string> differing;
  for (const char* name : {"label_matrix.txt", "model.txt", "samples.conll", "tagger.model"}) {
    const std::string a = read_bytes(r.first / name);
    if (a.empty() || a != read_bytes(r.second / name)) differing.push_back(name);
  }
  std::string detail = "label_matrix.txt, model.txt, samples.conll, tagger.model ";
  if (differing.empty()) return {true, detail + "byte-identical across two runs"};
  for (const std::string& d : differing) detail += "; differs: " + d;
  return {false, detail};
}

// 9. k-gram candidate counts against sum over k of (n - k + 1).
Outcome kgram_counts() {
  std::mt19937_64 rng(909);
  int mismatches = 0;
  long total = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = static_cast<int>(rng() % 31);
    const int k_max = 1 + static_cast<int>(rng() % 8);
    std::string text;
    for (int t = 0; t < n; ++t) text += "w" + std::to_string(rng() % 50) + "/NN ";
    Document d;
    d.doc_id = "s" + std::to_string(i);
    d.sentences.push_back(tagged_sentence(d.doc_id, 0, text));
    Corpus c;
    c.add_document(std::move(d));
    long expected = 0;
    for (int k = 1; k <= k_max; ++k) expected += std::max(0, n - k + 1);
    const long got = generate_kgram(c, k_max).size();
    mismatches += got != expected;
    total += expected;
  }
  return {mismatches == 0,
          fmt("%d of 100 random sentences mismatch (%ld candidates expected)", mismatches,
              total)};
}

}  // namespace
}  // namespace weaktag

int main() {
  using namespace weaktag;
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  Runs runs;
  bool ran = false;
  auto bundled = [&]() -> const Runs& {
    if (!ran) {
      runs = run_bundled_twice();
      ran = true;
    }
    return runs;
  };
  criteria.emplace_back("planted accuracy recovery", planted_recovery);
  criteria.emplace_back("multinomial beats binary under nesting", multinomial_vs_binary);
  criteria.emplace_back("label model beats majority vote", model_vs_majority);
  criteria.emplace_back("sampling fidelity", sampling_fidelity);
  criteria.emplace_back("normalization and EM invariants", invariants);
  criteria.emplace_back("nested hypertension fixture", hypertension_fixture);
  criteria.emplace_back("end-to-end synthetic pipeline", [&] { return end_to_end(bundled()); });
  criteria.emplace_back("determinism", [&] { return determinism(bundled()); });
  criteria.emplace_back("k-gram candidate counts", kgram_counts);

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
