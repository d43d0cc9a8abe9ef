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

#include "weaktag/eval.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "weaktag/error.h"
#include "weaktag/io_util.h"
#include "weaktag/phrase_matcher.h"

namespace weaktag {

using json = nlohmann::json;

ScoreReport score_mentions(std::span<const Mention> pred,
                           std::span<const Mention> gold) {
  std::set<Mention> p(pred.begin(), pred.end());
  std::set<Mention> g(gold.begin(), gold.end());
  ScoreReport r;
  for (const Mention& m : p) {
    if (g.count(m)) ++r.tp;
  }
  r.fp = static_cast<int>(p.size()) - r.tp;
  r.fn = static_cast<int>(g.size()) - r.tp;
  r.precision = p.empty() ? 0.0 : static_cast<double>(r.tp) / p.size();
  r.recall = g.empty() ? 0.0 : static_cast<double>(r.tp) / g.size();
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

std::vector<Mention> restrict_to(std::span<const Mention> mentions,
                                 const Corpus& corpus) {
  std::vector<Mention> out;
  for (const Mention& m : mentions) {
    if (corpus.find_sentence(m.doc_id, m.sent_index) != nullptr) out.push_back(m);
  }
  return out;
}

Mention to_mention(const Candidate& c) {
  return {c.doc_id, c.sent_index, c.token_start, c.token_end, c.text};
}

std::vector<Mention> lexicon_baseline(const Corpus& corpus,
                                      std::span<const Lexicon> lexicons,
                                      const std::set<std::string>& stopwords) {
  std::vector<Lexicon> positive;
  for (const Lexicon& lex : lexicons) {
    if (lex.polarity() > 0) positive.push_back(lex);
  }
  std::vector<Mention> out;
  if (positive.empty()) return out;
  PhraseMatcher matcher(positive);
  for (const Document& doc : corpus.documents()) {
    for (const Sentence& s : doc.sentences) {
      for (const auto& m : longest_matches(matcher.find_all(s))) {
        bool all_stop = true;
        for (int t = m.begin; t < m.end && all_stop; ++t) {
          all_stop = stopwords.count(normalize_term(s.tokens[t].text)) > 0;
        }
        if (all_stop || stopwords.count(span_key(s, m.begin, m.end))) continue;
        out.push_back({s.doc_id, s.sent_index, m.begin, m.end,
                       span_text(s, m.begin, m.end)});
      }
    }
  }
  return out;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in = open_input(path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string term = normalize_term(line);
    if (term.empty() || term[0] == '#') continue;
    out.insert(term);
  }
  return out;
}

std::vector<Mention> majority_vote(std::span<const Spanset> spansets,
                                   const CandidateSet& candidates) {
  std::vector<Mention> out;
  for (const Spanset& s : spansets) {
    int column = majority_vote_column(s);
    if (column != s.none_column()) {
      out.push_back(to_mention(candidates[s.members[column]]));
    }
  }
  return out;
}

std::vector<Mention> model_argmax(std::span<const Spanset> spansets,
                                  const LfModel& model,
                                  const CandidateSet& candidates) {
  std::vector<Mention> out;
  for (const Spanset& s : spansets) {
    std::vector<double> p = marginals(s, model);
    int column = argmax_column(p);
    if (column != s.none_column()) {
      out.push_back(to_mention(candidates[s.members[column]]));
    }
  }
  return out;
}

std::vector<Mention> marginals_argmax(std::span<const SpansetMarginal> marginals,
                                      const CandidateSet& candidates) {
  std::vector<Mention> out;
  for (const SpansetMarginal& m : marginals) {
    int column = argmax_column(m.p);
    if (column < static_cast<int>(m.members.size())) {
      out.push_back(to_mention(candidates[m.members[column]]));
    }
  }
  return out;
}

std::vector<Mention> binary_predictions(const LfModel& model,
                                        const CandidateSet& candidates,
                                        const LabelMatrix& matrix) {
  std::vector<Mention> out;
  for (const Spanset& s : binary_spansets(candidates, matrix)) {
    if (marginals(s, model)[0] > 0.5) {
      out.push_back(to_mention(candidates[s.members[0]]));
    }
  }
  return out;
}

LfReport lf_report(const LabelMatrix& matrix, const CandidateSet& candidates,
                   std::span<const Spanset> spansets,
                   std::optional<std::span<const Mention>> gold,
                   const LfModel* model) {
  const int m = matrix.n_lfs();
  LfReport report;
  report.n_candidates = matrix.n_candidates();
  report.n_spansets = static_cast<int>(spansets.size());
  std::vector<int> overlap(m, 0), conflict(m, 0), correct(m, 0), scored(m, 0);
  report.lfs.resize(m);

  std::set<Mention> gold_set;
  std::map<std::pair<std::string, int>, std::vector<std::pair<int, int>>> gold_spans;
  if (gold) {
    for (const Mention& g : *gold) {
      gold_set.insert(g);
      gold_spans[{g.doc_id, g.sent_index}].emplace_back(g.token_start, g.token_end);
    }
  }

  for (int c = 0; c < matrix.n_candidates(); ++c) {
    auto row = matrix.row(c);
    bool pos = false, neg = false;
    for (const LabelEntry& e : row) (e.label > 0 ? pos : neg) = true;
    bool gold_overlap = false;
    bool is_gold = false;
    if (gold) {
      const Candidate& cand = candidates[c];
      auto it = gold_spans.find({cand.doc_id, cand.sent_index});
      if (it != gold_spans.end()) {
        for (auto [b, e] : it->second) {
          gold_overlap |= cand.token_start < e && b < cand.token_end;
        }
      }
      is_gold = gold_set.count(to_mention(cand)) > 0;
    }
    for (const LabelEntry& e : row) {
      LfStats& s = report.lfs[e.lf];
      ++s.n_labeled;
      (e.label > 0 ? s.n_positive : s.n_negative)++;
      if (row.size() > 1) ++overlap[e.lf];
      if (e.label > 0 ? neg : pos) ++conflict[e.lf];
      if (gold_overlap) {
        ++scored[e.lf];
        if ((e.label > 0) == is_gold) ++correct[e.lf];
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    LfStats& s = report.lfs[i];
    s.name = matrix.lf_names()[i];
    if (report.n_candidates > 0) {
      s.coverage = static_cast<double>(s.n_labeled) / report.n_candidates;
    }
    if (s.n_labeled > 0) {
      s.overlap = static_cast<double>(overlap[i]) / s.n_labeled;
      s.conflict = static_cast<double>(conflict[i]) / s.n_labeled;
    }
    s.n_gold_scored = scored[i];
    if (gold && scored[i] > 0) {
      s.accuracy = static_cast<double>(correct[i]) / scored[i];
    }
    if (model != nullptr && i < model->n_lfs()) s.alpha = model->accuracies[i];
  }
  return report;
}

namespace {

std::string fixed(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_lf_report_table(const LfReport& report, std::ostream& out) {
  size_t width = 4;
  for (const LfStats& s : report.lfs) width = std::max(width, s.name.size());
  auto pad = [](std::string s, size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  out << pad("name", width)
      << "  labeled  pos      neg      coverage overlap  conflict accuracy alpha\n";
  for (const LfStats& s : report.lfs) {
    out << pad(s.name, width) << "  " << pad(std::to_string(s.n_labeled), 8) << ' '
        << pad(std::to_string(s.n_positive), 8) << ' '
        << pad(std::to_string(s.n_negative), 8) << ' '
        << pad(fixed(s.coverage), 8) << ' ' << pad(fixed(s.overlap), 8) << ' '
        << pad(fixed(s.conflict), 8) << ' '
        << pad(s.accuracy ? fixed(*s.accuracy) : "-", 8) << ' '
        << (s.alpha ? fixed(*s.alpha) : "-") << '\n';
  }
  out << "candidates " << report.n_candidates << ", spansets "
      << report.n_spansets << '\n';
}

std::string lf_report_json(const LfReport& report) {
  json lfs = json::array();
  for (const LfStats& s : report.lfs) {
    json j = {{"name", s.name},
              {"coverage", s.coverage},
              {"overlap", s.overlap},
              {"conflict", s.conflict},
              {"labeled", s.n_labeled},
              {"positive", s.n_positive},
              {"negative", s.n_negative},
              {"gold_scored", s.n_gold_scored}};
    j["accuracy"] = s.accuracy ? json(*s.accuracy) : json(nullptr);
    j["alpha"] = s.alpha ? json(*s.alpha) : json(nullptr);
    lfs.push_back(std::move(j));
  }
  return json{{"candidates", report.n_candidates},
              {"spansets", report.n_spansets},
              {"lfs", lfs}}
      .dump(2);
}

std::string score_json(const ScoreReport& s) {
  return json{{"tp", s.tp},
              {"fp", s.fp},
              {"fn", s.fn},
              {"precision", s.precision},
              {"recall", s.recall},
              {"f1", s.f1}}
      .dump();
}

std::string format_score_row(const std::string& system, const ScoreReport& s) {
  std::string name = system;
  name.resize(std::max<size_t>(name.size(), 12), ' ');
  return name + "  P " + fixed(100 * s.precision, 1) + "  R " +
         fixed(100 * s.recall, 1) + "  F1 " + fixed(100 * s.f1, 1) + "  (tp " +
         std::to_string(s.tp) + ", fp " + std::to_string(s.fp) + ", fn " +
         std::to_string(s.fn) + ")";
}

void write_mentions(std::span<const Mention> mentions, std::ostream& out,
                    const std::string& config_hash) {
  json meta = {{"kind", "mentions"}};
  if (!config_hash.empty()) meta["config_hash"] = config_hash;
  out << json{{"_meta", meta}}.dump() << '\n';
  int id = 0;
  for (const Mention& m : mentions) {
    out << json{{"id", id++},
                {"doc_id", m.doc_id},
                {"sent", m.sent_index},
                {"tok_start", m.token_start},
                {"tok_end", m.token_end},
                {"text", m.text}}
               .dump()
        << '\n';
  }
}

std::vector<Mention> read_mentions(std::istream& in) {
  std::vector<Mention> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos ||
        is_meta_line(line)) {
      continue;
    }
    try {
      json r = json::parse(line);
      Mention m;
      m.doc_id = r.at("doc_id").get<std::string>();
      m.sent_index = r.at("sent").get<int>();
      m.token_start = r.at("tok_start").get<int>();
      m.token_end = r.at("tok_end").get<int>();
      m.text = r.value("text", "");
      if (m.token_start < 0 || m.token_end <= m.token_start) {
        throw DataError("empty or negative span");
      }
      out.push_back(std::move(m));
    } catch (const json::exception& e) {
      throw DataError("mentions line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("mentions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Mention> load_mentions(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_mentions(in);
}

}  // namespace weaktag
