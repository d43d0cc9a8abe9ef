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

#include <map>

#include <benchmark/benchmark.h>

#include "weaktag/candidates.h"
#include "weaktag/genmodel.h"
#include "weaktag/labeling.h"
#include "weaktag/sampler.h"
#include "weaktag/synth.h"
#include "weaktag/tagger.h"

namespace weaktag {
namespace {

const SyntheticData& corpus_of(int n_docs) {
  static std::map<int, SyntheticData> cache;
  auto it = cache.find(n_docs);
  if (it == cache.end()) {
    SyntheticSpec spec;
    spec.n_docs = n_docs;
    it = cache.emplace(n_docs, generate_corpus(spec)).first;
  }
  return it->second;
}

std::vector<LfPtr> standard_lfs(const SyntheticData& d) {
  std::vector<LfPtr> lfs = gen_lexicon_lfs(d.lexicons);
  lfs.push_back(gen_children_cascade(lfs[0]));
  lfs.push_back(gen_phrase_fragment_lf());
  return lfs;
}

void BM_NounPhraseCandidates(benchmark::State& state) {
  const SyntheticData& d = corpus_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_noun_phrase(d.corpus, 4, ""));
  state.SetItemsProcessed(state.iterations() * d.corpus.num_tokens());
}
BENCHMARK(BM_NounPhraseCandidates)->Arg(100)->Arg(1000);

void BM_DictionaryCandidates(benchmark::State& state) {
  const SyntheticData& d = corpus_of(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generate_dictionary(d.corpus, d.lexicons, MatchMode::kAllMatches));
  }
  state.SetItemsProcessed(state.iterations() * d.corpus.num_tokens());
}
BENCHMARK(BM_DictionaryCandidates)->Arg(100)->Arg(1000);

void BM_ApplyLfs(benchmark::State& state) {
  const SyntheticData& d = corpus_of(1000);
  CandidateSet cands = generate_noun_phrase(d.corpus, 4, "");
  std::vector<LfPtr> lfs = standard_lfs(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_lfs(lfs, cands, d.corpus, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * cands.size());
}
BENCHMARK(BM_ApplyLfs)->Arg(1)->Arg(4)->UseRealTime();

void BM_FitPlanted(benchmark::State& state) {
  OracleSet o = random_oracle(static_cast<int>(state.range(0)), 2, 4, 1);
  std::vector<PlantedLf> planted;
  for (int i = 0; i < 10; ++i) {
    planted.push_back({"lf" + std::to_string(i), 0.6 + 0.035 * i, 0.5 + 0.05 * i});
  }
  LabelMatrix lm = generate_votes(planted, o.spansets, o.candidates.size(), 2);
  auto spansets = partition_spansets(o.candidates, lm).spansets;
  for (auto _ : state) benchmark::DoNotOptimize(fit(spansets, lm.lf_names()));
  state.SetItemsProcessed(state.iterations() * spansets.size());
}
BENCHMARK(BM_FitPlanted)->Arg(1000)->Arg(5000);

void BM_Sample(benchmark::State& state) {
  const SyntheticData& d = corpus_of(1000);
  CandidateSet cands = generate_noun_phrase(d.corpus, 4, "");
  LabelMatrix lm = apply_lfs(standard_lfs(d), cands, d.corpus);
  auto spansets = partition_spansets(cands, lm).spansets;
  auto margs = compute_marginals(spansets, fit(spansets, lm.lf_names()));
  for (auto _ : state) benchmark::DoNotOptimize(sample_dataset(margs, cands, d.corpus));
  state.SetItemsProcessed(state.iterations() * d.corpus.num_sentences() * 10);
}
BENCHMARK(BM_Sample);

void BM_TaggerDecode(benchmark::State& state) {
  const SyntheticData& d = corpus_of(100);
  std::vector<TaggedSentence> gold;
  for (const Document& doc : d.corpus.documents()) {
    for (const Sentence& s : doc.sentences) {
      gold.push_back({doc.doc_id, s.sent_index, 0, 1.0, std::vector<Tag>(s.size(), Tag::kO)});
    }
  }
  for (const Mention& m : d.gold) {
    for (TaggedSentence& t : gold) {
      if (t.doc_id == m.doc_id && t.sent_index == m.sent_index) {
        for (int i = m.token_start; i < m.token_end; ++i) {
          t.tags[i] = i == m.token_start ? Tag::kB : Tag::kI;
        }
      }
    }
  }
  TaggerOptions opts;
  opts.max_iters = 30;
  opts.hash_bits = 16;
  TaggerModel model = train_tagger(d.corpus, gold, d.lexicons, opts);
  for (auto _ : state) benchmark::DoNotOptimize(predict_mentions(model, d.corpus));
  state.SetItemsProcessed(state.iterations() * d.corpus.num_tokens());
}
BENCHMARK(BM_TaggerDecode);

}  // namespace
}  // namespace weaktag

BENCHMARK_MAIN();
