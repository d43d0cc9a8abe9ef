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

#include "weaktag/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "json.hpp"
#include "weaktag/error.h"
#include "weaktag/io_util.h"

namespace weaktag {

using json = nlohmann::json;

namespace {

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(mix64(seed)) {}
  double uniform() { return unit_double(engine_()); }
  size_t pick(size_t n) {
    return std::min(n - 1, static_cast<size_t>(uniform() * static_cast<double>(n)));
  }
  bool chance(double p) { return uniform() < p; }
  size_t weighted(const std::vector<double>& w) {
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    double u = uniform() * total;
    for (size_t i = 0; i < w.size(); ++i) {
      if (u < w[i]) return i;
      u -= w[i];
    }
    return w.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

class WordFactory {
 public:
  explicit WordFactory(Rng& rng) : rng_(rng) {}

  std::string make(const std::string& ending) {
    static const std::string kConsonants = "bcdfghklmnprstvz";
    static const std::string kVowels = "aeiou";
    for (;;) {
      std::string w;
      const size_t syllables = 2 + rng_.pick(2);
      for (size_t s = 0; s < syllables; ++s) {
        w.push_back(kConsonants[rng_.pick(kConsonants.size())]);
        w.push_back(kVowels[rng_.pick(kVowels.size())]);
      }
      w += ending;
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Rng& rng_;
  std::unordered_set<std::string> used_;
};

}  // namespace

const std::vector<std::string>& synthetic_head_endings() {
  static const std::vector<std::string> kEndings = {"itis", "emia", "osis",
                                                    "pathy", "oma", "algia"};
  return kEndings;
}

void SyntheticSpec::validate() const {
  auto prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string("synthetic spec: ") + name +
                        " must be in [0, 1]");
    }
  };
  prob(test_fraction, "test_fraction");
  prob(mention_rate, "mention_rate");
  prob(generic_rate, "generic_rate");
  prob(bare_filler_rate, "bare_filler_rate");
  prob(nesting_rate, "nesting_rate");
  prob(lexicon_recall, "lexicon_recall");
  if (n_docs < 0) throw ConfigError("synthetic spec: n_docs must be >= 0");
  if (min_sentences < 1 || max_sentences < min_sentences) {
    throw ConfigError("synthetic spec: need 1 <= min_sentences <= max_sentences");
  }
  if (n_types < 1 || n_fillers < 1 || n_generic < 1 || max_slots < 1) {
    throw ConfigError(
        "synthetic spec: n_types, n_fillers, n_generic and max_slots must be >= 1");
  }
  if (n_negative_terms < 0 || n_negative_terms > n_fillers) {
    throw ConfigError("synthetic spec: n_negative_terms must be in [0, n_fillers]");
  }
  if (length_weights.empty() ||
      std::any_of(length_weights.begin(), length_weights.end(),
                  [](double w) { return !(w >= 0.0); }) ||
      std::accumulate(length_weights.begin(), length_weights.end(), 0.0) <= 0.0) {
    throw ConfigError("synthetic spec: length_weights must be non-negative, not all 0");
  }
  if (static_cast<int>(length_weights.size()) - 1 > n_modifiers) {
    throw ConfigError("synthetic spec: not enough modifiers for the longest mention");
  }
}

SyntheticSpec SyntheticSpec::from_json(const std::string& text) {
  SyntheticSpec s;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("synthetic spec must be a JSON object");
  const json known = json::parse(s.to_json());
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("synthetic spec: unknown key '" + key + "'");
  }
  try {
    s.seed = j.value("seed", s.seed);
    s.n_docs = j.value("n_docs", s.n_docs);
    s.min_sentences = j.value("min_sentences", s.min_sentences);
    s.max_sentences = j.value("max_sentences", s.max_sentences);
    s.test_fraction = j.value("test_fraction", s.test_fraction);
    s.n_types = j.value("n_types", s.n_types);
    s.n_modifiers = j.value("n_modifiers", s.n_modifiers);
    s.n_fillers = j.value("n_fillers", s.n_fillers);
    s.length_weights = j.value("length_weights", s.length_weights);
    s.max_slots = j.value("max_slots", s.max_slots);
    s.mention_rate = j.value("mention_rate", s.mention_rate);
    s.generic_rate = j.value("generic_rate", s.generic_rate);
    s.bare_filler_rate = j.value("bare_filler_rate", s.bare_filler_rate);
    s.nesting_rate = j.value("nesting_rate", s.nesting_rate);
    s.lexicon_recall = j.value("lexicon_recall", s.lexicon_recall);
    s.n_generic = j.value("n_generic", s.n_generic);
    s.n_negative_terms = j.value("n_negative_terms", s.n_negative_terms);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::string SyntheticSpec::to_json() const {
  return json{{"seed", seed},
              {"n_docs", n_docs},
              {"min_sentences", min_sentences},
              {"max_sentences", max_sentences},
              {"test_fraction", test_fraction},
              {"n_types", n_types},
              {"n_modifiers", n_modifiers},
              {"n_fillers", n_fillers},
              {"length_weights", length_weights},
              {"max_slots", max_slots},
              {"mention_rate", mention_rate},
              {"generic_rate", generic_rate},
              {"bare_filler_rate", bare_filler_rate},
              {"nesting_rate", nesting_rate},
              {"lexicon_recall", lexicon_recall},
              {"n_generic", n_generic},
              {"n_negative_terms", n_negative_terms}}
      .dump(2);
}

SyntheticData generate_corpus(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  WordFactory words(rng);
  const auto& endings = synthetic_head_endings();
  static const std::vector<std::string> kAdjEndings = {"al", "ic", "ary", "ous", "ive"};
  static const std::vector<std::string> kNounEndings = {"er", "ment", "ion", "ness",
                                                        "ure"};

  std::vector<std::string> modifiers, fillers, verbs, generics;
  for (int i = 0; i < spec.n_modifiers; ++i) {
    modifiers.push_back(words.make(kAdjEndings[rng.pick(kAdjEndings.size())]));
  }
  for (int i = 0; i < spec.n_fillers; ++i) {
    fillers.push_back(words.make(kNounEndings[rng.pick(kNounEndings.size())]));
  }
  for (int i = 0; i < 30; ++i) verbs.push_back(words.make("es"));
  for (int i = 0; i < spec.n_generic; ++i) generics.push_back(words.make("ity"));

  SyntheticData data;
  for (int i = 0; i < spec.n_types; ++i) {
    MentionType t;
    const size_t length = 1 + rng.weighted(spec.length_weights);
    std::vector<size_t> mods;
    while (mods.size() + 1 < length) {
      size_t m = rng.pick(modifiers.size());
      if (std::find(mods.begin(), mods.end(), m) == mods.end()) mods.push_back(m);
    }
    for (size_t m : mods) t.tokens.push_back(modifiers[m]);
    t.tokens.push_back(words.make(endings[rng.pick(endings.size())]));
    t.in_lexicon = rng.chance(spec.lexicon_recall);
    t.nested = length >= 2 && rng.chance(spec.nesting_rate);
    data.types.push_back(std::move(t));
  }

  std::vector<std::string> positive_terms;
  for (const MentionType& t : data.types) {
    auto join = [&](size_t from) {
      std::string s;
      for (size_t k = from; k < t.tokens.size(); ++k) {
        if (!s.empty()) s.push_back(' ');
        s += t.tokens[k];
      }
      return s;
    };
    if (t.in_lexicon) positive_terms.push_back(join(0));
    if (t.nested) {
      for (size_t k = 1; k < t.tokens.size(); ++k) positive_terms.push_back(join(k));
    }
  }
  for (const std::string& g : generics) {
    positive_terms.push_back(g);
    data.stopwords.insert(g);
  }
  std::vector<std::string> negative_terms(fillers.begin(),
                                          fillers.begin() + spec.n_negative_terms);
  data.lexicons.emplace_back("disease", 1, positive_terms);
  if (!negative_terms.empty()) {
    data.lexicons.emplace_back("nondisease", -1, negative_terms);
  }

  static const std::vector<std::string> kPreps = {"of", "with", "in", "for"};
  static const std::vector<std::string> kDets = {"the", "a", "this"};
  const int n_test =
      static_cast<int>(std::lround(spec.test_fraction * spec.n_docs));
  for (int d = 0; d < spec.n_docs; ++d) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof(id), "syn%05d", d);
    doc.doc_id = id;
    doc.split = d >= spec.n_docs - n_test ? Split::kTest : Split::kTrain;
    int offset = 0;
    const int n_sent =
        spec.min_sentences +
        static_cast<int>(rng.pick(spec.max_sentences - spec.min_sentences + 1));
    for (int si = 0; si < n_sent; ++si) {
      Sentence s;
      s.doc_id = doc.doc_id;
      s.sent_index = si;
      auto push = [&](const std::string& text, const char* pos) {
        s.tokens.push_back({text, pos, offset, offset + static_cast<int>(text.size())});
        offset += static_cast<int>(text.size()) + 1;
      };
      push(kDets[rng.pick(kDets.size())], "DT");
      push(fillers[rng.pick(fillers.size())], "NN");
      push(verbs[rng.pick(verbs.size())], "VBZ");
      const int slots = 1 + static_cast<int>(rng.pick(spec.max_slots));
      for (int k = 0; k < slots; ++k) {
        if (k > 0 && rng.chance(0.5)) push("and", "CC");
        push(kPreps[rng.pick(kPreps.size())], "IN");
        if (rng.chance(spec.mention_rate)) {
          const MentionType& t = data.types[rng.pick(data.types.size())];
          const int begin = s.size();
          for (size_t j = 0; j < t.tokens.size(); ++j) {
            push(t.tokens[j], j + 1 == t.tokens.size() ? "NN" : "JJ");
          }
          data.gold.push_back({s.doc_id, si, begin, s.size(),
                               span_text(s, begin, s.size())});
        } else if (rng.chance(spec.generic_rate)) {
          push(kDets[rng.pick(kDets.size())], "DT");
          push(generics[rng.pick(generics.size())], "NN");
        } else {
          if (!rng.chance(spec.bare_filler_rate)) push(kDets[rng.pick(kDets.size())], "DT");
          push(fillers[rng.pick(fillers.size())], "NN");
        }
      }
      push(".", ".");
      doc.sentences.push_back(std::move(s));
    }
    data.corpus.add_document(std::move(doc));
  }
  return data;
}

OracleSet random_oracle(int n, int k_min, int k_max, uint64_t seed) {
  if (n < 0 || k_min < 2 || k_max < k_min) {
    throw ConfigError("random_oracle needs n >= 0 and 2 <= k_min <= k_max");
  }
  Rng rng(seed);
  OracleSet out;
  Document doc;
  doc.doc_id = "oracle";
  std::vector<SpanRef> spans;
  std::vector<int> ks;
  int offset = 0;
  for (int i = 0; i < n; ++i) {
    const int k = k_min + static_cast<int>(rng.pick(k_max - k_min + 1));
    ks.push_back(k);
    Sentence s;
    s.doc_id = doc.doc_id;
    s.sent_index = i;
    for (int t = 0; t < k - 1; ++t) {
      std::string text = "w" + std::to_string(t);
      s.tokens.push_back({text, "NN", offset, offset + static_cast<int>(text.size())});
      offset += static_cast<int>(text.size()) + 1;
    }
    for (int b = 0; b < k - 1; ++b) spans.push_back({0, i, b, k - 1});
    doc.sentences.push_back(std::move(s));
  }
  if (n > 0) out.corpus.add_document(std::move(doc));
  out.candidates = CandidateSet::from_spans("oracle", k_max - 1, out.corpus,
                                            std::move(spans));
  int next = 0;
  for (int i = 0; i < n; ++i) {
    OracleSpanset s;
    for (int m = 0; m < ks[i] - 1; ++m) s.members.push_back(next++);
    s.truth = ks[i] == 2 ? static_cast<int>(rng.pick(2))
                         : static_cast<int>(rng.pick(ks[i] - 1));
    out.spansets.push_back(std::move(s));
  }
  return out;
}

std::vector<OracleSpanset> oracle_from_gold(const CandidateSet& candidates,
                                            const std::vector<Mention>& gold) {
  std::set<Mention> gold_set(gold.begin(), gold.end());
  std::vector<OracleSpanset> out;
  for (const auto& group : candidates.groups()) {
    const int n = group.last - group.first;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (candidates[group.first + a].overlaps(candidates[group.first + b])) {
          int ra = find(a), rb = find(b);
          if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
        }
      }
    }
    std::vector<std::vector<int>> comps(n);
    for (int a = 0; a < n; ++a) comps[find(a)].push_back(group.first + a);
    std::vector<OracleSpanset> local;
    for (auto& members : comps) {
      if (members.empty()) continue;
      std::sort(members.begin(), members.end(), [&](int a, int b) {
        const Candidate& ca = candidates[a];
        const Candidate& cb = candidates[b];
        if (ca.length() != cb.length()) return ca.length() > cb.length();
        return ca.token_start < cb.token_start;
      });
      OracleSpanset s;
      s.members = members;
      s.truth = static_cast<int>(members.size());
      for (size_t j = 0; j < members.size(); ++j) {
        const Candidate& c = candidates[members[j]];
        if (gold_set.count({c.doc_id, c.sent_index, c.token_start, c.token_end, ""})) {
          s.truth = static_cast<int>(j);
          break;
        }
      }
      local.push_back(std::move(s));
    }
    std::sort(local.begin(), local.end(),
              [&](const OracleSpanset& a, const OracleSpanset& b) {
                auto start = [&](const OracleSpanset& s) {
                  int v = 1 << 30;
                  for (int c : s.members) v = std::min(v, candidates[c].token_start);
                  return v;
                };
                return start(a) < start(b);
              });
    for (auto& s : local) out.push_back(std::move(s));
  }
  return out;
}

LabelMatrix generate_votes(const std::vector<PlantedLf>& lfs,
                           const std::vector<OracleSpanset>& spansets,
                           int n_candidates, uint64_t seed) {
  std::vector<std::string> names;
  for (const PlantedLf& lf : lfs) {
    if (!(lf.accuracy >= 0.0 && lf.accuracy <= 1.0 && lf.coverage >= 0.0 &&
          lf.coverage <= 1.0)) {
      throw ConfigError("planted LF " + lf.name +
                        ": accuracy and coverage must be in [0, 1]");
    }
    names.push_back(lf.name);
  }
  Rng rng(seed);
  std::vector<LabelEntry> entries;
  for (const OracleSpanset& s : spansets) {
    const int k = static_cast<int>(s.members.size()) + 1;
    const int none = k - 1;
    for (size_t i = 0; i < lfs.size(); ++i) {
      if (!rng.chance(lfs[i].coverage)) continue;
      const bool correct = rng.chance(lfs[i].accuracy);
      if (k > 2 && s.truth == none) continue;
      int column = s.truth;
      if (!correct) {
        if (k == 2) {
          column = 1 - s.truth;
        } else {
          column = static_cast<int>(rng.pick(k - 2));
          if (column >= s.truth) ++column;
        }
      }
      const int lf = static_cast<int>(i);
      if (column == none) {
        entries.push_back({s.members[0], lf, -1});
      } else {
        entries.push_back({s.members[column], lf, 1});
      }
    }
  }
  return LabelMatrix(n_candidates, std::move(names), std::move(entries));
}

}  // namespace weaktag
