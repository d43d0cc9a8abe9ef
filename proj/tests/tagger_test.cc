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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"
#include "weaktag/error.h"
#include "weaktag/lbfgs.h"
#include "weaktag/sampler.h"
#include "weaktag/tagger.h"

namespace weaktag {
namespace {

using testing::make_corpus;
using enum Tag;

// Sentences "the X is here ." where X is a disease word tagged B.
Corpus training_corpus() {
  std::vector<std::vector<std::string>> docs;
  for (const char* w : {"fever", "rash", "cough", "asthma", "gout", "mumps"}) {
    docs.push_back({std::string("the/DT ") + w + "/NN is/VBZ here/RB ./.",
                    "nothing/NN is/VBZ here/RB ./."});
  }
  return make_corpus(docs);
}

std::vector<TaggedSentence> gold_samples(const Corpus& c) {
  std::vector<TaggedSentence> out;
  for (const Document& d : c.documents()) {
    out.push_back({d.doc_id, 0, 0, 1.0, {kO, kB, kO, kO, kO}});
    out.push_back({d.doc_id, 1, 0, 1.0, {kO, kO, kO, kO}});
  }
  return out;
}

TEST(Features, ShapeAndContext) {
  EXPECT_EQ(word_shape("BRCA1"), "Xd");
  EXPECT_EQ(word_shape("Il-2a"), "Xx-dx");
  Sentence s = testing::make_sentence("d", 0, "Fever/NN is/VBZ");
  FeatureExtractor fx;
  auto f = fx.extract(s);
  ASSERT_EQ(f.size(), 2u);
  auto has = [&](int i, const std::string& name) {
    return std::find(f[i].begin(), f[i].end(), name) != f[i].end();
  };
  EXPECT_TRUE(has(0, "lw=fever"));
  EXPECT_TRUE(has(0, "p=NN"));
  EXPECT_TRUE(has(1, "w-1=fever"));
  auto hashed = fx.extract_hashed(s, 10);
  for (const auto& tok : hashed) {
    for (uint32_t h : tok) EXPECT_LT(h, 1u << 10);
  }
}

TEST(Features, LexiconFlags) {
  FeatureExtractor fx({Lexicon("disease", 1, {"pulmonary hypertension"})});
  Sentence s = testing::make_sentence("d", 0, testing::kHypertension);
  auto f = fx.extract(s);
  auto has = [&](int i, const std::string& prefix) {
    for (const auto& x : f[i]) {
      if (x.rfind(prefix, 0) == 0) return true;
    }
    return false;
  };
  EXPECT_TRUE(has(1, "lxB="));
  EXPECT_TRUE(has(2, "lxL="));
  EXPECT_FALSE(has(0, "lx"));
}

TEST(Tagger, SeparableCaseGeneralizesToHeldOutCopies) {
  Corpus c = training_corpus();
  TaggerModel model = train_tagger(c, gold_samples(c), {});
  Corpus held = make_corpus({{"the/DT fever/NN is/VBZ here/RB ./."}});
  auto em = model.emissions(held.documents()[0].sentences[0]);
  EXPECT_GT(em[1][static_cast<int>(kB)], em[1][static_cast<int>(kO)]);
  EXPECT_EQ(model.decode(held.documents()[0].sentences[0]),
            (std::vector<Tag>{kO, kB, kO, kO, kO}));
}

TEST(Tagger, RecoversModalTrainingTagsAndHandlesUnseenTokens) {
  Corpus c = training_corpus();
  TaggerModel model = train_tagger(c, gold_samples(c), {});
  auto mentions = predict_mentions(model, c);
  EXPECT_EQ(mentions.size(), 6u);
  Sentence unseen = testing::make_sentence("x", 0, "zzq/NN Qq-9/XX the/DT blorp/NN");
  EXPECT_TRUE(is_valid_bio(model.decode(unseen)));
}

TEST(Tagger, AllOutsideDataPredictsNothing) {
  Corpus c = training_corpus();
  std::vector<TaggedSentence> data;
  for (const Document& d : c.documents()) {
    data.push_back({d.doc_id, 0, 0, 1.0, std::vector<Tag>(5, kO)});
  }
  TaggerModel model = train_tagger(c, data, {});
  EXPECT_TRUE(predict_mentions(model, c).empty());
}

TEST(Tagger, WeightLinearity) {
  Corpus c = training_corpus();
  std::vector<TaggedSentence> once = gold_samples(c);
  std::vector<TaggedSentence> twice;
  for (TaggedSentence s : once) {
    s.weight = 0.5;
    twice.push_back(s);
    s.sample_index = 1;
    twice.push_back(s);
  }
  TaggerModel a = train_tagger(c, once, {});
  TaggerModel b = train_tagger(c, twice, {});
  std::stringstream sa, sb;
  a.write(sa);
  b.write(sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Tagger, SoftWithCrispTargetsMatchesHard) {
  Corpus c = training_corpus();
  std::vector<SoftLabeledSentence> soft;
  for (const TaggedSentence& s : gold_samples(c)) {
    SoftLabeledSentence x{s.doc_id, s.sent_index, {}, {}};
    for (Tag t : s.tags) {
      x.q.push_back(t == kO ? 0.0 : 1.0);
      x.q_begin.push_back(t == kB ? 1.0 : 0.0);
    }
    soft.push_back(x);
  }
  TaggerOptions so;
  so.mode = TaggerMode::kNoiseAwareSoft;
  TaggerModel hard = train_tagger(c, gold_samples(c), {});
  TaggerModel noisy = train_tagger(c, soft, {}, so);
  Corpus probe = make_corpus({{"the/DT rash/NN is/VBZ here/RB ./.", "nothing/NN is/VBZ here/RB ./."},
                              {"the/DT cough/NN is/VBZ here/RB ./."}});
  EXPECT_EQ(predict_mentions(hard, probe), predict_mentions(noisy, probe));
  EXPECT_EQ(predict_mentions(noisy, probe).size(), 2u);
}

TEST(Tagger, ModelFileRoundTrip) {
  Corpus c = training_corpus();
  TaggerOptions opts;
  opts.hash_bits = 12;
  TaggerModel model =
      train_tagger(c, gold_samples(c), {Lexicon("d", 1, {"fever", "gout"})}, opts);
  std::stringstream ss;
  model.write(ss, "h");
  TaggerModel back = TaggerModel::read(ss);
  EXPECT_TRUE(back == model);
  EXPECT_EQ(predict_mentions(back, c), predict_mentions(model, c));
  std::stringstream bad("format weaktag-tagger 1\nmode sampled_hard\nhash_bits 99\n");
  EXPECT_THROW(TaggerModel::read(bad), DataError);
}

TEST(Tagger, Errors) {
  Corpus c = training_corpus();
  TaggerOptions soft;
  soft.mode = TaggerMode::kNoiseAwareSoft;
  EXPECT_THROW(train_tagger(c, gold_samples(c), {}, soft), ConfigError);
  EXPECT_THROW(train_tagger(c, std::vector<TaggedSentence>{}, {}), DataError);
  std::vector<TaggedSentence> wrong = {{"d0", 0, 0, 1.0, {kO}}};
  EXPECT_THROW(train_tagger(c, wrong, {}), DataError);
  TaggerOptions bits;
  bits.hash_bits = 40;
  EXPECT_THROW(train_tagger(c, gold_samples(c), {}, bits), ConfigError);
  EXPECT_THROW(parse_tagger_mode("lstm"), ConfigError);
}

TEST(Lbfgs, MinimizesRosenbrock) {
  Objective f = [](const std::vector<double>& x, std::vector<double>& g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  std::vector<double> x = {-1.2, 1.0};
  LbfgsOptions opts;
  opts.max_iters = 500;
  opts.rel_tol = 0.0;
  opts.grad_tol = 1e-8;
  LbfgsResult r = minimize_lbfgs(f, x, opts);
  EXPECT_NEAR(x[0], 1.0, 1e-4);
  EXPECT_NEAR(x[1], 1.0, 1e-4);
  EXPECT_LT(r.value, 1e-8);
}

TEST(Lbfgs, QuadraticInFewSteps) {
  Objective f = [](const std::vector<double>& x, std::vector<double>& g) {
    double v = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - static_cast<double>(i);
      v += (i + 1) * d * d;
      g[i] = 2.0 * (i + 1) * d;
    }
    return v;
  };
  std::vector<double> x(5, 0.0);
  LbfgsResult r = minimize_lbfgs(f, x, {});
  EXPECT_TRUE(r.converged);
  for (size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], static_cast<double>(i), 1e-5);
}

}  // namespace
}  // namespace weaktag
