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
#include <map>
#include <memory>
#include <stdexcept>

#include <gtest/gtest.h>

#include "test_util.h"
#include "weaktag/candidates.h"
#include "weaktag/error.h"
#include "weaktag/labeling.h"

namespace weaktag {
namespace {

using testing::kHypertension;
using testing::one_sentence;

// Index of the candidate with `text` (first occurrence).
int find(const CandidateSet& set, const std::string& text) {
  for (const Candidate& c : set.candidates()) {
    if (c.text == text) return c.id;
  }
  ADD_FAILURE() << "no candidate '" << text << "'";
  return -1;
}

// Fixed label per candidate text; everything else abstains.
class TableLf : public LabelingFunction {
 public:
  TableLf(std::string name, std::map<std::string, int> table)
      : LabelingFunction(std::move(name), LfKind::kCustomRule, 0),
        table_(std::move(table)) {}
  int label(const LfContext& ctx, int id) const override {
    auto it = table_.find(ctx.candidate(id).text);
    return it == table_.end() ? 0 : it->second;
  }

 private:
  std::map<std::string, int> table_;
};

class ThrowingLf : public LabelingFunction {
 public:
  ThrowingLf() : LabelingFunction("boom", LfKind::kCustomRule, 0) {}
  int label(const LfContext& ctx, int id) const override {
    if (ctx.candidate(id).length() == 1) throw std::runtime_error("boom");
    return 1;
  }
};

struct Fixture {
  Corpus corpus;
  CandidateSet cands;
  std::unique_ptr<LfContext> ctx;
  explicit Fixture(const std::string& tagged, int k = 3)
      : corpus(one_sentence(tagged)), cands(generate_kgram(corpus, k)),
        ctx(std::make_unique<LfContext>(corpus, cands)) {}
  int at(const LfPtr& lf, const std::string& text) const {
    return lf->label(*ctx, find(cands, text));
  }
};

TEST(LexiconLf, PositiveNegativeAndAbstain) {
  Fixture f("hypertension/NN and/CC BRCA1/NN");
  std::vector<Lexicon> lex = {Lexicon("disease", 1, {"hypertension"}),
                              Lexicon("gene", -1, {"BRCA1"})};
  auto lfs = gen_lexicon_lfs(lex);
  ASSERT_EQ(lfs.size(), 2u);
  EXPECT_EQ(lfs[0]->name(), "lexicon:disease");
  EXPECT_EQ(f.at(lfs[0], "hypertension"), 1);
  EXPECT_EQ(f.at(lfs[1], "hypertension"), 0);
  EXPECT_EQ(f.at(lfs[1], "BRCA1"), -1);
}

TEST(TailWordLf, TailTokenMembership) {
  Fixture f("recurrent/JJ carcinoma/NN of/IN skin/NN");
  std::vector<Lexicon> lex = {Lexicon("disease", 1, {"carcinoma", "skin lesion"})};
  auto lf = gen_tailword_lfs(lex)[0];
  EXPECT_EQ(f.at(lf, "recurrent carcinoma"), 1);
  EXPECT_EQ(f.at(lf, "carcinoma"), 1);
  EXPECT_EQ(f.at(lf, "of skin"), 0);
  // A single-token candidate behaves like the lexicon LF over unigram terms.
  auto member = gen_lexicon_lfs(lex)[0];
  for (const Candidate& c : f.cands.candidates()) {
    if (c.length() == 1) {
      EXPECT_EQ(lf->label(*f.ctx, c.id), member->label(*f.ctx, c.id));
    }
  }
}

TEST(AbbrvLf, ParentheticalDefinition) {
  Corpus c = testing::make_corpus(
      {{"Myotonic/JJ dystrophy/NN (/( DM/NN )/) is/VBZ rare/JJ", "DM/NN is/VBZ inherited/VBN"},
       {"DM/NN again/RB"}});
  CandidateSet cands = generate_kgram(c, 2);
  LfContext ctx(c, cands);
  std::vector<Lexicon> lex = {Lexicon("disease", 1, {"myotonic dystrophy"})};
  LfPtr lf = gen_abbrv_lf(lex, c);
  int hits = 0;
  for (const Candidate& cand : cands.candidates()) {
    int l = lf->label(ctx, cand.id);
    if (cand.text == "DM" && cand.doc_id == "d0") {
      EXPECT_EQ(l, 1);
      ++hits;
    } else {
      EXPECT_EQ(l, 0) << cand.doc_id << " " << cand.text;
    }
  }
  EXPECT_EQ(hits, 2);
}

TEST(AbbrvLf, LettersMustFollowLongForm) {
  EXPECT_TRUE(is_abbreviation_of("DM", "myotonic dystrophy"));
  EXPECT_TRUE(is_abbreviation_of("PPH", "primary pulmonary hypertension"));
  EXPECT_FALSE(is_abbreviation_of("XQ", "myotonic dystrophy"));
  Corpus c = one_sentence("Myotonic/JJ dystrophy/NN (/( XQ/NN )/)");
  CandidateSet cands = generate_kgram(c, 1);
  LfContext ctx(c, cands);
  std::vector<Lexicon> lex = {Lexicon("disease", 1, {"myotonic dystrophy"})};
  LfPtr lf = gen_abbrv_lf(lex, c);
  EXPECT_EQ(lf->label(ctx, find(cands, "XQ")), 0);
}

std::shared_ptr<CorpusStats> stats_with(const std::string& term, int df, int n) {
  return std::make_shared<CorpusStats>(n, 4, std::unordered_map<std::string, int>{{term, df}});
}

TEST(FilterLf, IdfThresholdIsInclusive) {
  Fixture f("carcinoma/NN");
  // idf = ln(n / df); choose n so idf is 3.2 or exactly 4.0.
  const int df = 1000;
  auto low = stats_with("carcinoma", df, static_cast<int>(std::round(df * std::exp(3.2))));
  EXPECT_EQ(f.at(gen_idf_filter_lf(low, 4.0), "carcinoma"), -1);
  CorpusStats exact(1, 4, {{"carcinoma", 1}});
  auto four = std::make_shared<CorpusStats>(exact);
  EXPECT_EQ(f.at(gen_idf_filter_lf(four, 0.0), "carcinoma"), -1);  // idf 0 <= 0
  auto high = stats_with("carcinoma", 1, 1000);
  EXPECT_EQ(f.at(gen_idf_filter_lf(high, 4.0), "carcinoma"), 0);
  auto unseen = stats_with("other", 1, 10);
  EXPECT_EQ(f.at(gen_idf_filter_lf(unseen, 4.0), "carcinoma"), 0);
}

TEST(FilterLf, IdfBoundaryAtFour) {
  Fixture f("carcinoma/NN");
  // Smallest document count whose idf reaches 4.0 is above the boundary;
  // a threshold equal to the computed idf must still reject.
  auto s = stats_with("carcinoma", 3, 164);
  double idf = *s->idf("carcinoma");
  EXPECT_EQ(f.at(gen_idf_filter_lf(s, idf), "carcinoma"), -1);
  EXPECT_EQ(f.at(gen_idf_filter_lf(s, idf - 1e-9), "carcinoma"), 0);
}

TEST(FilterLf, DfDirections) {
  Fixture f("carcinoma/NN");
  auto s = stats_with("carcinoma", 5, 10);
  EXPECT_EQ(f.at(gen_df_filter_lf(s, 4, DfDirection::kRejectAbove), "carcinoma"), -1);
  EXPECT_EQ(f.at(gen_df_filter_lf(s, 5, DfDirection::kRejectAbove), "carcinoma"), 0);
  EXPECT_EQ(f.at(gen_df_filter_lf(s, 5, DfDirection::kRejectAtOrBelow), "carcinoma"), -1);
  EXPECT_EQ(f.at(gen_df_filter_lf(s, 4, DfDirection::kRejectAtOrBelow), "carcinoma"), 0);
  EXPECT_THROW(gen_idf_filter_lf(nullptr, 1.0), ConfigError);
}

TEST(PhraseFragmentLf, AdjectiveTails) {
  Fixture f("acute/JJ renal/JJ failure/NN pulmonary/JJ hypertension/NN");
  LfPtr lf = gen_phrase_fragment_lf();
  EXPECT_EQ(f.at(lf, "pulmonary"), -1);
  EXPECT_EQ(f.at(lf, "hypertension"), 0);
  EXPECT_EQ(f.at(lf, "acute renal"), -1);
  EXPECT_EQ(f.at(lf, "renal failure"), 0);
}

TEST(CascadeLf, HypertensionLongestMatch) {
  Fixture f(kHypertension);
  std::vector<Lexicon> lex = {Lexicon("disease", 1,
                                      {"hypertension", "pulmonary hypertension",
                                       "primary pulmonary hypertension"})};
  LfPtr cascade = gen_children_cascade(gen_lexicon_lfs(lex)[0]);
  EXPECT_EQ(cascade->name(), "cascade(lexicon:disease)");
  EXPECT_EQ(f.at(cascade, "primary pulmonary hypertension"), 1);
  EXPECT_EQ(f.at(cascade, "pulmonary hypertension"), -1);
  EXPECT_EQ(f.at(cascade, "hypertension"), -1);
  // Nested non-matches inside the longest span are children too.
  EXPECT_EQ(f.at(cascade, "primary"), -1);
  EXPECT_EQ(f.at(cascade, "is rare"), 0);

  LabelMatrix m = apply_lfs(std::vector<LfPtr>{cascade}, f.cands, f.corpus);
  EXPECT_EQ(m.label(find(f.cands, "primary pulmonary hypertension"), 0), 1);
  EXPECT_EQ(m.label(find(f.cands, "pulmonary hypertension"), 0), -1);
  EXPECT_EQ(m.label(find(f.cands, "hypertension"), 0), -1);
}

TEST(CascadeLf, NoMatchAbstainsAndDisjointMatchesBothPositive) {
  std::vector<Lexicon> lex = {Lexicon("disease", 1, {"hypertension", "fever", "rash"})};
  LfPtr cascade = gen_children_cascade(gen_lexicon_lfs(lex)[0]);
  Fixture empty("cough/NN is/VBZ high/JJ");
  for (const Candidate& c : empty.cands.candidates()) {
    EXPECT_EQ(cascade->label(*empty.ctx, c.id), 0);
  }
  Fixture two("fever/NN and/CC rash/NN");
  EXPECT_EQ(two.at(cascade, "fever"), 1);
  EXPECT_EQ(two.at(cascade, "rash"), 1);
}

TEST(CascadeLf, NeverPositiveOnNestedPair) {
  Fixture f("a/NN b/NN c/NN d/NN e/NN", 5);
  std::map<std::string, int> table;
  for (const Candidate& c : f.cands.candidates()) {
    if ((c.token_start + c.token_end) % 2 == 0) table[c.text] = 1;
  }
  LfPtr neg = gen_children_cascade(std::make_shared<TableLf>("t", table), -1);
  for (const Candidate& a : f.cands.candidates()) {
    for (const Candidate& b : f.cands.candidates()) {
      if (a.contains(b)) {
        EXPECT_FALSE(neg->label(*f.ctx, a.id) == 1 && neg->label(*f.ctx, b.id) == 1);
      }
    }
  }
  EXPECT_THROW(gen_children_cascade(nullptr), ConfigError);
}

TEST(ComposeLf, TruthTables) {
  Fixture f("x/NN");
  const int id = 0;
  for (int a : {-1, 0, 1}) {
    for (int b : {-1, 0, 1}) {
      LfPtr la = std::make_shared<TableLf>("a", std::map<std::string, int>{{"x", a}});
      LfPtr lb = std::make_shared<TableLf>("b", std::map<std::string, int>{{"x", b}});
      const int agree = (a != 0 && a == b) ? a : 0;
      const int unless = b != 0 ? 0 : a;
      EXPECT_EQ(compose(la, lb, Combiner::kAndAgree)->label(*f.ctx, id), agree)
          << a << " " << b;
      EXPECT_EQ(compose(la, lb, Combiner::kAUnlessB)->label(*f.ctx, id), unless)
          << a << " " << b;
    }
  }
  LfPtr la = std::make_shared<TableLf>("a", std::map<std::string, int>{});
  EXPECT_EQ(compose(la, la, Combiner::kAndAgree)->name(), "and(a,a)");
  EXPECT_EQ(compose(la, la, Combiner::kAUnlessB)->name(), "unless(a,a)");
}

TEST(CustomRuleLf, TemporalModifierRegexAndContext) {
  Fixture f("recurrent/JJ carcinoma/NN with/IN 123/CD");
  CustomRule head;
  head.type = CustomRule::Type::kHeadTokenInSet;
  head.tokens = default_temporal_modifiers();
  LfPtr temporal = gen_custom_rule(head, "temporal");
  EXPECT_EQ(f.at(temporal, "recurrent carcinoma"), -1);
  EXPECT_EQ(f.at(temporal, "carcinoma"), 0);

  CustomRule digits;
  digits.type = CustomRule::Type::kSurfaceRegex;
  digits.pattern = "^[0-9]+$";
  EXPECT_EQ(f.at(gen_custom_rule(digits, "digits"), "123"), -1);
  EXPECT_EQ(f.at(gen_custom_rule(digits, "digits"), "carcinoma"), 0);

  Fixture g("allergies/NNS include/VBP the/DT penicillin/NN ./. aspirin/NN");
  CustomRule ctx;
  ctx.type = CustomRule::Type::kContextWindow;
  ctx.tokens = {"allergies"};
  ctx.window = 3;
  ctx.side = CustomRule::Side::kLeft;
  LfPtr allergy = gen_custom_rule(ctx, "allergy");
  EXPECT_EQ(g.at(allergy, "penicillin"), -1);
  EXPECT_EQ(g.at(allergy, "aspirin"), 0);

  CustomRule bad;
  bad.type = CustomRule::Type::kSurfaceRegex;
  bad.pattern = "(";
  EXPECT_THROW(gen_custom_rule(bad, "bad"), ConfigError);
}

TEST(ApplyLfs, SingleEntryAndEmpty) {
  Corpus c = one_sentence("fever/NN");
  CandidateSet cands = generate_kgram(c, 1);
  std::vector<LfPtr> lfs = gen_lexicon_lfs(std::vector<Lexicon>{Lexicon("d", 1, {"fever"})});
  LabelMatrix m = apply_lfs(lfs, cands, c);
  ASSERT_EQ(m.num_entries(), 1u);
  EXPECT_EQ(m.entries()[0], (LabelEntry{0, 0, 1}));
  LabelMatrix empty = apply_lfs(std::vector<LfPtr>{}, cands, c);
  EXPECT_EQ(empty.num_entries(), 0u);
  EXPECT_EQ(empty.n_lfs(), 0);
}

TEST(ApplyLfs, FailuresAbstainAndAreCounted) {
  Corpus c = one_sentence("a/NN b/NN c/NN");
  CandidateSet cands = generate_kgram(c, 2);
  std::vector<LfPtr> lfs = {std::make_shared<ThrowingLf>()};
  LabelMatrix m = apply_lfs(lfs, cands, c);
  EXPECT_EQ(m.failures(), 3);
  EXPECT_EQ(m.num_entries(), 2u);
}

TEST(ApplyLfs, PermutingLfsPermutesColumnsAndJobsDoNotMatter) {
  Corpus c = testing::make_corpus({{kHypertension, "fever/NN and/CC rash/NN"}, {"rash/NN"}});
  CandidateSet cands = generate_kgram(c, 3);
  std::vector<Lexicon> lex = {Lexicon("disease", 1, {"hypertension", "rash"}),
                              Lexicon("neg", -1, {"fever", "rare"})};
  std::vector<LfPtr> lfs = gen_lexicon_lfs(lex);
  lfs.push_back(gen_phrase_fragment_lf());
  lfs.push_back(gen_children_cascade(lfs[0]));
  std::vector<LfPtr> rev(lfs.rbegin(), lfs.rend());
  LabelMatrix a = apply_lfs(lfs, cands, c, 1);
  LabelMatrix b = apply_lfs(rev, cands, c, 3);
  const int m = a.n_lfs();
  for (size_t id = 0; id < cands.size(); ++id) {
    for (int lf = 0; lf < m; ++lf) {
      EXPECT_EQ(a.label(static_cast<int>(id), lf), b.label(static_cast<int>(id), m - 1 - lf));
    }
  }
  EXPECT_EQ(apply_lfs(lfs, cands, c, 4), a);
  EXPECT_LE(a.density(), 1.0);
}

TEST(LabelMatrixFile, RoundTripAndValidation) {
  LabelMatrix m(3, {"x", "y"}, {{0, 0, 1}, {2, 1, -1}});
  std::stringstream ss;
  m.write(ss, "h");
  EXPECT_EQ(LabelMatrix::read(ss), m);
  EXPECT_THROW(LabelMatrix(1, {"x"}, {{0, 0, 1}, {0, 0, -1}}), DataError);
  EXPECT_THROW(LabelMatrix(1, {"x"}, {{0, 1, 1}}), DataError);
  EXPECT_THROW(LabelMatrix(1, {"x"}, {{0, 0, 2}}), DataError);
}

}  // namespace
}  // namespace weaktag
