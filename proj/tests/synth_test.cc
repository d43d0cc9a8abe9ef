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
#include <sstream>

#include <gtest/gtest.h>

#include "weaktag/candidates.h"
#include "weaktag/error.h"
#include "weaktag/eval.h"
#include "weaktag/labeling.h"
#include "weaktag/synth.h"

namespace weaktag {
namespace {

SyntheticSpec small_spec() {
  SyntheticSpec s;
  s.n_docs = 60;
  s.n_types = 80;
  return s;
}

std::string joined(const std::vector<std::string>& tokens, size_t from = 0) {
  std::string out;
  for (size_t i = from; i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

TEST(SynthCorpus, Deterministic) {
  SyntheticData a = generate_corpus(small_spec());
  SyntheticData b = generate_corpus(small_spec());
  std::ostringstream sa, sb;
  write_corpus_jsonl(a.corpus, sa);
  write_corpus_jsonl(b.corpus, sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.gold, b.gold);
  SyntheticSpec other = small_spec();
  other.seed = 8;
  std::ostringstream sc;
  write_corpus_jsonl(generate_corpus(other).corpus, sc);
  EXPECT_NE(sa.str(), sc.str());
}

TEST(SynthCorpus, EmptyCorpus) {
  SyntheticSpec s = small_spec();
  s.n_docs = 0;
  SyntheticData d = generate_corpus(s);
  EXPECT_TRUE(d.corpus.documents().empty());
  EXPECT_TRUE(d.gold.empty());
}

TEST(SynthCorpus, GoldMatchesTokensAndEndsInHeads) {
  SyntheticData d = generate_corpus(small_spec());
  ASSERT_FALSE(d.gold.empty());
  const auto& endings = synthetic_head_endings();
  auto is_head = [&](const std::string& w) {
    for (const std::string& e : endings) {
      if (w.size() > e.size() && w.compare(w.size() - e.size(), e.size(), e) == 0) {
        return true;
      }
    }
    return false;
  };
  std::map<std::pair<std::string, int>, const Sentence*> index;
  for (const Document& doc : d.corpus.documents()) {
    for (const Sentence& s : doc.sentences) index[{doc.doc_id, s.sent_index}] = &s;
  }
  std::set<std::pair<std::pair<std::string, int>, int>> heads_in_gold;
  for (const Mention& m : d.gold) {
    const Sentence& s = *index.at({m.doc_id, m.sent_index});
    std::vector<std::string> toks;
    for (int t = m.token_start; t < m.token_end; ++t) toks.push_back(s.tokens[t].text);
    EXPECT_EQ(joined(toks), m.text);
    EXPECT_EQ(s.tokens[m.token_end - 1].pos, "NN");
    EXPECT_TRUE(is_head(toks.back())) << toks.back();
    heads_in_gold.insert({{m.doc_id, m.sent_index}, m.token_end - 1});
  }
  for (const auto& [key, s] : index) {
    for (int t = 0; t < s->size(); ++t) {
      if (is_head(s->tokens[t].text)) {
        EXPECT_TRUE(heads_in_gold.count({key, t}));
      }
    }
  }
}

TEST(SynthCorpus, SplitAndLexicons) {
  SyntheticData d = generate_corpus(small_spec());
  int test_docs = 0;
  for (const Document& doc : d.corpus.documents()) test_docs += doc.split == Split::kTest;
  EXPECT_EQ(test_docs, 12);
  ASSERT_EQ(d.lexicons.size(), 2u);
  EXPECT_EQ(d.lexicons[0].name(), "disease");
  EXPECT_EQ(d.lexicons[0].polarity(), 1);
  EXPECT_EQ(d.lexicons[1].polarity(), -1);
  for (const MentionType& t : d.types) {
    if (t.in_lexicon) {
      EXPECT_TRUE(d.lexicons[0].contains(joined(t.tokens)));
    }
  }
  EXPECT_FALSE(d.stopwords.empty());
}

TEST(SynthCorpus, NestingZeroHasNoOverlappingDictionaryMatches) {
  SyntheticSpec s = small_spec();
  s.nesting_rate = 0.0;
  SyntheticData d = generate_corpus(s);
  CandidateSet c = generate_dictionary(d.corpus, d.lexicons, MatchMode::kAllMatches);
  ASSERT_GT(c.size(), 0);
  for (const auto& group : c.groups()) {
    for (int i = group.first; i < group.last; ++i) {
      for (int j = i + 1; j < group.last; ++j) {
        EXPECT_FALSE(c[i].token_start < c[j].token_end &&
                     c[j].token_start < c[i].token_end);
      }
    }
  }
}

TEST(SynthCorpus, FullNestingListsEverySuffix) {
  SyntheticSpec s = small_spec();
  s.nesting_rate = 1.0;
  s.length_weights = {0.0, 0.0, 1.0};
  SyntheticData d = generate_corpus(s);
  for (const MentionType& t : d.types) {
    ASSERT_EQ(t.tokens.size(), 3u);
    EXPECT_TRUE(t.nested);
    EXPECT_TRUE(d.lexicons[0].contains(joined(t.tokens, 1)));
    EXPECT_TRUE(d.lexicons[0].contains(joined(t.tokens, 2)));
  }
}

TEST(SynthSpec, JsonRoundTripAndValidation) {
  SyntheticSpec s = small_spec();
  s.bare_filler_rate = 0.25;
  SyntheticSpec back = SyntheticSpec::from_json(s.to_json());
  EXPECT_EQ(back.to_json(), s.to_json());
  s.mention_rate = 1.5;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(SyntheticSpec::from_json("{\"n_docs\": -1}"), ConfigError);
  EXPECT_THROW(SyntheticSpec::from_json("{\"sparkle\": 1}"), ConfigError);
}

TEST(Oracle, ShapesAndTruth) {
  OracleSet o = random_oracle(2000, 2, 4, 3);
  ASSERT_EQ(o.spansets.size(), 2000u);
  int k2 = 0, k2_none = 0;
  for (const OracleSpanset& s : o.spansets) {
    const int k = static_cast<int>(s.members.size()) + 1;
    ASSERT_GE(k, 2);
    ASSERT_LE(k, 4);
    for (size_t m = 1; m < s.members.size(); ++m) {
      EXPECT_GT(o.candidates[s.members[m - 1]].length(),
                o.candidates[s.members[m]].length());
    }
    if (k == 2) {
      ++k2;
      k2_none += s.truth == 1;
    } else {
      EXPECT_LT(s.truth, k - 1);
    }
  }
  const double sigma = std::sqrt(k2 * 0.25);
  EXPECT_NEAR(k2_none, k2 * 0.5, 3 * sigma);
  EXPECT_THROW(random_oracle(5, 1, 3, 0), ConfigError);
}

TEST(Oracle, FromGold) {
  OracleSet o = random_oracle(3, 3, 3, 1);
  std::vector<Mention> gold = {to_mention(o.candidates[1])};
  auto spansets = oracle_from_gold(o.candidates, gold);
  ASSERT_EQ(spansets.size(), 3u);
  EXPECT_EQ(spansets[0].truth, 1);
  EXPECT_EQ(spansets[1].truth, 2);
}

TEST(PlantedVotes, PerfectLfsVoteTheTruth) {
  OracleSet o = random_oracle(500, 2, 2, 4);
  LabelMatrix lm = generate_votes({{"a", 1.0, 1.0}}, o.spansets, o.candidates.size(), 9);
  ASSERT_EQ(lm.num_entries(), 500u);
  for (const OracleSpanset& s : o.spansets) {
    EXPECT_EQ(lm.label(s.members[0], 0), s.truth == 0 ? 1 : -1);
  }
}

TEST(PlantedVotes, CoinFlipAndCoverageFrequencies) {
  const int n = 4000;
  OracleSet o = random_oracle(n, 2, 2, 5);
  LabelMatrix lm = generate_votes({{"coin", 0.5, 1.0}, {"sparse", 0.9, 0.3}}, o.spansets,
                                  o.candidates.size(), 10);
  int coin_right = 0, sparse_votes = 0, sparse_right = 0;
  for (const OracleSpanset& s : o.spansets) {
    const int want = s.truth == 0 ? 1 : -1;
    coin_right += lm.label(s.members[0], 0) == want;
    const int v = lm.label(s.members[0], 1);
    if (v != 0) {
      ++sparse_votes;
      sparse_right += v == want;
    }
  }
  EXPECT_NEAR(coin_right, n * 0.5, 3 * std::sqrt(n * 0.25));
  EXPECT_NEAR(sparse_votes, n * 0.3, 3 * std::sqrt(n * 0.3 * 0.7));
  EXPECT_NEAR(sparse_right, sparse_votes * 0.9, 3 * std::sqrt(sparse_votes * 0.09));
  EXPECT_THROW(generate_votes({{"bad", 1.2, 1.0}}, o.spansets, o.candidates.size(), 1),
               ConfigError);
}

TEST(PlantedVotes, WrongVotesOnLargerSpansetsGoToOtherMembers) {
  OracleSet o = random_oracle(300, 4, 4, 6);
  LabelMatrix lm = generate_votes({{"never", 0.0, 1.0}}, o.spansets, o.candidates.size(), 2);
  for (const OracleSpanset& s : o.spansets) {
    int positives = 0;
    for (size_t m = 0; m < s.members.size(); ++m) {
      const int v = lm.label(s.members[m], 0);
      EXPECT_NE(v, -1);
      if (v == 1) {
        ++positives;
        EXPECT_NE(static_cast<int>(m), s.truth);
      }
    }
    EXPECT_EQ(positives, 1);
  }
}

}  // namespace
}  // namespace weaktag
