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

#include "weaktag/sampler.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "weaktag/error.h"
#include "weaktag/io_util.h"

namespace weaktag {

using json = nlohmann::json;

char tag_char(Tag tag) {
  switch (tag) {
    case Tag::kB: return 'B';
    case Tag::kI: return 'I';
    case Tag::kO: return 'O';
  }
  return 'O';
}

Tag parse_tag(std::string_view text) {
  if (text == "O") return Tag::kO;
  if (text == "B" || text.starts_with("B-")) return Tag::kB;
  if (text == "I" || text.starts_with("I-")) return Tag::kI;
  throw DataError("unknown tag '" + std::string(text) + "'");
}

bool is_valid_bio(std::span<const Tag> tags) {
  Tag prev = Tag::kO;
  for (Tag t : tags) {
    if (t == Tag::kI && prev == Tag::kO) return false;
    prev = t;
  }
  return true;
}

std::vector<std::pair<int, int>> spans_from_tags(std::span<const Tag> tags) {
  std::vector<std::pair<int, int>> spans;
  const int n = static_cast<int>(tags.size());
  for (int i = 0; i < n; ++i) {
    if (tags[i] != Tag::kB) continue;
    int end = i + 1;
    while (end < n && tags[end] == Tag::kI) ++end;
    spans.emplace_back(i, end);
  }
  return spans;
}

std::vector<Tag> tags_from_spans(int length,
                                 std::span<const std::pair<int, int>> spans) {
  std::vector<Tag> tags(length, Tag::kO);
  for (auto [b, e] : spans) {
    if (b < 0 || e > length || b >= e) throw DataError("span outside sentence");
    tags[b] = Tag::kB;
    for (int i = b + 1; i < e; ++i) tags[i] = Tag::kI;
  }
  return tags;
}

namespace {

struct SentenceRef {
  const Sentence* sentence;
  std::vector<int> marginals;  // indices, hull order
};

std::vector<SentenceRef> index_sentences(
    std::span<const SpansetMarginal> marginals, const CandidateSet& candidates,
    const Corpus& corpus) {
  std::vector<SentenceRef> refs;
  std::map<std::pair<std::string, int>, size_t> position;
  for (const Document& doc : corpus.documents()) {
    for (const Sentence& s : doc.sentences) {
      position[{s.doc_id, s.sent_index}] = refs.size();
      refs.push_back({&s, {}});
    }
  }
  auto hull_start = [&](int m) {
    int start = 1 << 30;
    for (int c : marginals[m].members) {
      start = std::min(start, candidates[c].token_start);
    }
    return start;
  };
  for (size_t i = 0; i < marginals.size(); ++i) {
    const SpansetMarginal& m = marginals[i];
    std::string where = "spanset " + std::to_string(m.spanset_id);
    auto it = position.find({m.doc_id, m.sent_index});
    if (it == position.end()) {
      throw DataError(where + " refers to unknown sentence " + m.doc_id + "/" +
                      std::to_string(m.sent_index));
    }
    if (m.members.empty() || m.p.size() != m.members.size() + 1) {
      throw DataError(where + " has malformed members or probabilities");
    }
    double total = 0.0;
    for (double v : m.p) {
      if (!(v >= 0.0)) throw DataError(where + " has a negative probability");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-6) {
      throw DataError(where + " probabilities do not sum to 1");
    }
    const int n_tokens = refs[it->second].sentence->size();
    for (int c : m.members) {
      if (c < 0 || c >= static_cast<int>(candidates.size())) {
        throw DataError(where + " references unknown candidate " +
                        std::to_string(c));
      }
      const Candidate& cand = candidates[c];
      if (cand.doc_id != m.doc_id || cand.sent_index != m.sent_index ||
          cand.token_end > n_tokens) {
        throw DataError(where + " member " + std::to_string(c) +
                        " lies outside its sentence");
      }
    }
    refs[it->second].marginals.push_back(static_cast<int>(i));
  }
  for (SentenceRef& ref : refs) {
    std::stable_sort(ref.marginals.begin(), ref.marginals.end(),
                     [&](int a, int b) { return hull_start(a) < hull_start(b); });
  }
  return refs;
}

uint64_t sentence_seed(uint64_t seed, const Sentence& s) {
  return mix64(mix64(seed) ^ fnv1a64(s.doc_id) ^
               mix64(static_cast<uint64_t>(s.sent_index) + 0x9e3779b97f4a7c15ULL));
}

}  // namespace

SampleResult sample_dataset(std::span<const SpansetMarginal> marginals,
                            const CandidateSet& candidates, const Corpus& corpus,
                            const SampleOptions& options) {
  if (options.num_samples < 1) throw ConfigError("num_samples must be >= 1");
  std::vector<SentenceRef> refs = index_sentences(marginals, candidates, corpus);
  std::set<std::pair<std::string, int>> dropped(
      options.dropped_sentences.begin(), options.dropped_sentences.end());

  SampleResult result;
  const int n = options.num_samples;
  result.sentences.resize(refs.size() * n);
  if (options.record_counts) {
    result.counts.resize(marginals.size());
    for (size_t i = 0; i < marginals.size(); ++i) {
      result.counts[i].assign(marginals[i].p.size(), 0);
    }
  }
  std::vector<int> masked(refs.size(), 0);

  auto work = [&](size_t worker, size_t n_workers) {
    std::vector<bool> taken;
    for (size_t r = worker; r < refs.size(); r += n_workers) {
      const Sentence& sentence = *refs[r].sentence;
      std::mt19937_64 rng(sentence_seed(options.seed, sentence));
      for (int k = 0; k < n; ++k) {
        TaggedSentence& out = result.sentences[r * n + k];
        out.doc_id = sentence.doc_id;
        out.sent_index = sentence.sent_index;
        out.sample_index = k;
        out.weight = 1.0 / n;
        out.tags.assign(sentence.size(), Tag::kO);
        taken.assign(sentence.size(), false);
        for (int mi : refs[r].marginals) {
          const SpansetMarginal& m = marginals[mi];
          const double u = unit_double(rng());
          int column = static_cast<int>(m.p.size()) - 1;
          double acc = 0.0;
          for (size_t j = 0; j + 1 < m.p.size(); ++j) {
            acc += m.p[j];
            if (u < acc) {
              column = static_cast<int>(j);
              break;
            }
          }
          if (options.record_counts) ++result.counts[mi][column];
          if (column == static_cast<int>(m.members.size())) continue;
          const Candidate& c = candidates[m.members[column]];
          bool clash = false;
          for (int t = c.token_start; t < c.token_end; ++t) clash |= taken[t];
          if (clash) {
            ++masked[r];
            continue;
          }
          out.tags[c.token_start] = Tag::kB;
          taken[c.token_start] = true;
          for (int t = c.token_start + 1; t < c.token_end; ++t) {
            out.tags[t] = Tag::kI;
            taken[t] = true;
          }
        }
      }
    }
  };
  const size_t n_workers =
      std::clamp<size_t>(options.jobs, 1, std::max<size_t>(refs.size(), 1));
  if (n_workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (size_t w = 0; w < n_workers; ++w) threads.emplace_back(work, w, n_workers);
    for (auto& t : threads) t.join();
  }
  for (size_t r = 0; r < refs.size(); ++r) {
    result.masked_draws += masked[r];
    const Sentence& s = *refs[r].sentence;
    if (refs[r].marginals.empty() && dropped.count({s.doc_id, s.sent_index})) {
      ++result.all_dropped_sentences;
    }
  }
  return result;
}

std::vector<SoftLabeledSentence> soft_labels(
    std::span<const SpansetMarginal> marginals, const CandidateSet& candidates,
    const Corpus& corpus) {
  std::vector<SentenceRef> refs = index_sentences(marginals, candidates, corpus);
  std::vector<SoftLabeledSentence> out;
  out.reserve(refs.size());
  for (const SentenceRef& ref : refs) {
    SoftLabeledSentence s;
    s.doc_id = ref.sentence->doc_id;
    s.sent_index = ref.sentence->sent_index;
    s.q.assign(ref.sentence->size(), 0.0);
    s.q_begin.assign(ref.sentence->size(), 0.0);
    for (int mi : ref.marginals) {
      const SpansetMarginal& m = marginals[mi];
      for (size_t j = 0; j < m.members.size(); ++j) {
        const Candidate& c = candidates[m.members[j]];
        s.q_begin[c.token_start] += m.p[j];
        for (int t = c.token_start; t < c.token_end; ++t) s.q[t] += m.p[j];
      }
    }
    for (double& v : s.q) v = std::clamp(v, 0.0, 1.0);
    for (size_t t = 0; t < s.q.size(); ++t) {
      s.q_begin[t] = std::clamp(s.q_begin[t], 0.0, s.q[t]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_samples(std::span<const TaggedSentence> samples, const Corpus& corpus,
                   std::ostream& out, const std::string& config_hash) {
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  for (const TaggedSentence& t : samples) {
    const Sentence* s = corpus.find_sentence(t.doc_id, t.sent_index);
    if (s == nullptr || s->size() != static_cast<int>(t.tags.size())) {
      throw DataError("sample for " + t.doc_id + "/" +
                      std::to_string(t.sent_index) + " does not match corpus");
    }
    out << "# sample=" << t.sample_index << " doc=" << t.doc_id
        << " sent=" << t.sent_index << " weight=" << format_double(t.weight)
        << '\n';
    for (int i = 0; i < s->size(); ++i) {
      out << s->tokens[i].text << '\t' << s->tokens[i].pos << '\t'
          << tag_char(t.tags[i]) << '\n';
    }
    out << '\n';
  }
}

std::vector<TaggedSentence> read_samples(std::istream& in) {
  std::vector<TaggedSentence> out;
  std::string line;
  int line_no = 0;
  bool open = false;
  auto bad = [&](const std::string& what) {
    return DataError("samples line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("# sample=")) {
      TaggedSentence t;
      std::istringstream fields(line.substr(2));
      std::string field;
      bool have_doc = false, have_sent = false;
      while (fields >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw bad("malformed header field");
        std::string key = field.substr(0, eq);
        std::string value = field.substr(eq + 1);
        try {
          if (key == "sample") {
            t.sample_index = std::stoi(value);
          } else if (key == "doc") {
            t.doc_id = value;
            have_doc = true;
          } else if (key == "sent") {
            t.sent_index = std::stoi(value);
            have_sent = true;
          } else if (key == "weight") {
            t.weight = std::stod(value);
          }
        } catch (const std::logic_error&) {
          throw bad("bad value for " + key);
        }
      }
      if (!have_doc || !have_sent) throw bad("header needs doc= and sent=");
      out.push_back(std::move(t));
      open = true;
      continue;
    }
    if (line.empty()) {
      open = false;
      continue;
    }
    if (line[0] == '#') continue;
    if (!open) throw bad("token line outside a sample");
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw bad("expected TOKEN<TAB>POS<TAB>TAG");
    out.back().tags.push_back(parse_tag(line.substr(tab + 1)));
  }
  for (const TaggedSentence& t : out) {
    if (!is_valid_bio(t.tags)) {
      throw DataError("invalid BIO sequence for " + t.doc_id + "/" +
                      std::to_string(t.sent_index));
    }
  }
  return out;
}

std::vector<TaggedSentence> load_samples(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_samples(in);
}

void write_soft_labels(std::span<const SoftLabeledSentence> labels,
                       std::ostream& out, const std::string& config_hash) {
  json meta = {{"kind", "soft_labels"}};
  if (!config_hash.empty()) meta["config_hash"] = config_hash;
  out << json{{"_meta", meta}}.dump() << '\n';
  for (const SoftLabeledSentence& s : labels) {
    out << json{{"doc_id", s.doc_id},
                {"sent", s.sent_index},
                {"q", s.q},
                {"q_begin", s.q_begin}}
               .dump()
        << '\n';
  }
}

std::vector<SoftLabeledSentence> read_soft_labels(std::istream& in) {
  std::vector<SoftLabeledSentence> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos ||
        is_meta_line(line)) {
      continue;
    }
    try {
      json record = json::parse(line);
      SoftLabeledSentence s;
      s.doc_id = record.at("doc_id").get<std::string>();
      s.sent_index = record.at("sent").get<int>();
      s.q = record.at("q").get<std::vector<double>>();
      if (record.contains("q_begin")) {
        s.q_begin = record.at("q_begin").get<std::vector<double>>();
      } else {
        // Without start mass, every inside token after an outside one starts.
        s.q_begin.assign(s.q.size(), 0.0);
        for (size_t t = 0; t < s.q.size(); ++t) {
          s.q_begin[t] = std::max(0.0, s.q[t] - (t > 0 ? s.q[t - 1] : 0.0));
        }
      }
      if (s.q_begin.size() != s.q.size()) {
        throw DataError("q and q_begin differ in length");
      }
      for (size_t t = 0; t < s.q.size(); ++t) {
        if (!(s.q[t] >= 0.0 && s.q[t] <= 1.0) ||
            !(s.q_begin[t] >= 0.0 && s.q_begin[t] <= s.q[t] + 1e-12)) {
          throw DataError("soft target outside [0, 1]");
        }
      }
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw DataError("soft labels line " + std::to_string(line_no) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError("soft labels line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return out;
}

std::vector<SoftLabeledSentence> load_soft_labels(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_soft_labels(in);
}

}  // namespace weaktag
