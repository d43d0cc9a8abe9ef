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

#include "weaktag/tagger.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "weaktag/error.h"
#include "weaktag/io_util.h"
#include "weaktag/lbfgs.h"

namespace weaktag {

namespace {

constexpr int kT = TaggerModel::kTags;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kO = static_cast<int>(Tag::kO);
constexpr int kB = static_cast<int>(Tag::kB);
constexpr int kI = static_cast<int>(Tag::kI);

bool allowed(int prev, int cur) { return !(prev == kO && cur == kI); }

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

double log_sum_exp(const double* v, int n) {
  double top = kNegInf;
  for (int i = 0; i < n; ++i) top = std::max(top, v[i]);
  if (top == kNegInf) return kNegInf;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(v[i] - top);
  return top + std::log(s);
}

}  // namespace

TaggerMode parse_tagger_mode(std::string_view name) {
  if (name == "sampled_hard") return TaggerMode::kSampledHard;
  if (name == "noise_aware_soft") return TaggerMode::kNoiseAwareSoft;
  throw ConfigError("unknown tagger mode '" + std::string(name) + "'");
}

const char* tagger_mode_name(TaggerMode mode) {
  return mode == TaggerMode::kSampledHard ? "sampled_hard" : "noise_aware_soft";
}

std::string word_shape(std::string_view token) {
  std::string shape;
  for (char c : token) {
    char s = c;
    if (c >= 'A' && c <= 'Z') {
      s = 'X';
    } else if (c >= 'a' && c <= 'z') {
      s = 'x';
    } else if (c >= '0' && c <= '9') {
      s = 'd';
    }
    if (shape.empty() || shape.back() != s) shape.push_back(s);
  }
  return shape;
}

FeatureExtractor::FeatureExtractor(std::vector<Lexicon> lexicons)
    : lexicons_(std::move(lexicons)), matcher_(lexicons_) {}

std::vector<std::vector<std::string>> FeatureExtractor::extract(
    const Sentence& sentence) const {
  const int n = sentence.size();
  std::vector<std::string> lower(n);
  for (int i = 0; i < n; ++i) lower[i] = lower_ascii(sentence.tokens[i].text);
  std::vector<std::vector<std::string>> out(n);
  for (int i = 0; i < n; ++i) {
    const Token& tok = sentence.tokens[i];
    auto& f = out[i];
    f.push_back("b");
    f.push_back("w=" + tok.text);
    f.push_back("lw=" + lower[i]);
    f.push_back("sh=" + word_shape(tok.text));
    f.push_back("p=" + tok.pos);
    const std::string& lw = lower[i];
    for (size_t k = 1; k <= 4 && k <= lw.size(); ++k) {
      f.push_back("pf" + std::to_string(k) + "=" + lw.substr(0, k));
      f.push_back("sf" + std::to_string(k) + "=" + lw.substr(lw.size() - k));
    }
    const std::string padded = "^" + lw + "$";
    for (size_t k = 0; k + 3 <= padded.size(); ++k) {
      f.push_back("c3=" + padded.substr(k, 3));
    }
    for (int off : {-2, -1, 1, 2}) {
      const int j = i + off;
      const std::string at = std::to_string(off);
      if (j < 0) {
        f.push_back("w" + at + "=<s>");
      } else if (j >= n) {
        f.push_back("w" + at + "=</s>");
      } else {
        f.push_back("w" + at + "=" + lower[j]);
        f.push_back("p" + at + "=" + sentence.tokens[j].pos);
      }
    }
    f.push_back("p-1|p=" + (i > 0 ? sentence.tokens[i - 1].pos : "<s>") + "|" +
                tok.pos);
  }
  if (!lexicons_.empty()) {
    for (const auto& m : matcher_.find_all(sentence)) {
      for (int l : m.lexicons) {
        const std::string& name = lexicons_[l].name();
        out[m.begin].push_back("lxB=" + name);
        for (int t = m.begin + 1; t < m.end; ++t) out[t].push_back("lxI=" + name);
        out[m.end - 1].push_back("lxL=" + name);
      }
    }
  }
  return out;
}

std::vector<std::vector<uint32_t>> FeatureExtractor::extract_hashed(
    const Sentence& sentence, int hash_bits) const {
  const uint64_t mask = (uint64_t{1} << hash_bits) - 1;
  auto strings = extract(sentence);
  std::vector<std::vector<uint32_t>> out(strings.size());
  for (size_t i = 0; i < strings.size(); ++i) {
    out[i].reserve(strings[i].size());
    for (const std::string& s : strings[i]) {
      out[i].push_back(static_cast<uint32_t>(fnv1a64(s) & mask));
    }
  }
  return out;
}

TaggerModel::TaggerModel(TaggerMode mode, int hash_bits,
                         std::vector<Lexicon> lexicons)
    : mode_(mode), hash_bits_(hash_bits), extractor_(std::move(lexicons)) {
  if (hash_bits < 8 || hash_bits > 28) {
    throw ConfigError("hash_bits must be in [8, 28]");
  }
}

std::vector<TaggerModel::TagScores> TaggerModel::emissions(
    const Sentence& sentence) const {
  auto feats = extractor_.extract_hashed(sentence, hash_bits_);
  std::vector<TagScores> out(feats.size(), TagScores{});
  for (size_t t = 0; t < feats.size(); ++t) {
    for (uint32_t b : feats[t]) {
      auto it = weights_.find(b);
      if (it == weights_.end()) continue;
      for (int y = 0; y < kT; ++y) out[t][y] += it->second[y];
    }
  }
  return out;
}

namespace {

std::vector<Tag> viterbi(const std::vector<TaggerModel::TagScores>& em,
                         const TaggerModel::TagScores& start,
                         const std::array<TaggerModel::TagScores, kT>& trans) {
  const int n = static_cast<int>(em.size());
  if (n == 0) return {};
  std::vector<std::array<double, kT>> score(n);
  std::vector<std::array<int, kT>> back(n);
  for (int y = 0; y < kT; ++y) {
    score[0][y] = y == kI ? kNegInf : start[y] + em[0][y];
  }
  for (int t = 1; t < n; ++t) {
    for (int y = 0; y < kT; ++y) {
      double best = kNegInf;
      int arg = kO;
      for (int p = 0; p < kT; ++p) {
        if (!allowed(p, y) || score[t - 1][p] == kNegInf) continue;
        double s = score[t - 1][p] + trans[p][y];
        if (s > best) {
          best = s;
          arg = p;
        }
      }
      score[t][y] = best + em[t][y];
      back[t][y] = arg;
    }
  }
  int y = 0;
  for (int k = 1; k < kT; ++k) {
    if (score[n - 1][k] > score[n - 1][y]) y = k;
  }
  std::vector<Tag> tags(n);
  for (int t = n - 1; t >= 0; --t) {
    tags[t] = static_cast<Tag>(y);
    if (t > 0) y = back[t][y];
  }
  return tags;
}

}  // namespace

std::vector<Tag> TaggerModel::decode(const Sentence& sentence) const {
  return viterbi(emissions(sentence), start_, trans_);
}

bool TaggerModel::operator==(const TaggerModel& other) const {
  if (mode_ != other.mode_ || hash_bits_ != other.hash_bits_ ||
      start_ != other.start_ || trans_ != other.trans_ ||
      weights_ != other.weights_) {
    return false;
  }
  const auto& a = extractor_.lexicons();
  const auto& b = other.extractor_.lexicons();
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].name() != b[i].name() || a[i].terms() != b[i].terms()) return false;
  }
  return true;
}

void TaggerModel::write(std::ostream& out, const std::string& config_hash) const {
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << "format weaktag-tagger 1\n";
  out << "mode " << tagger_mode_name(mode_) << '\n';
  out << "hash_bits " << hash_bits_ << '\n';
  for (const Lexicon& lex : extractor_.lexicons()) {
    out << "lexicon " << lex.polarity() << ' ' << (lex.case_sensitive() ? 1 : 0)
        << ' ' << lex.size() << ' ' << lex.name() << '\n';
    for (const std::string& term : lex.terms()) out << term << '\n';
  }
  out << "start";
  for (double v : start_) out << ' ' << format_double(v);
  out << "\ntransitions";
  for (const auto& row : trans_) {
    for (double v : row) out << ' ' << format_double(v);
  }
  std::vector<uint32_t> buckets;
  buckets.reserve(weights_.size());
  for (const auto& [b, w] : weights_) buckets.push_back(b);
  std::sort(buckets.begin(), buckets.end());
  out << "\nweights " << buckets.size() << '\n';
  for (uint32_t b : buckets) {
    const TagScores& w = weights_.at(b);
    out << b << ' ' << format_double(w[0]) << ' ' << format_double(w[1]) << ' '
        << format_double(w[2]) << '\n';
  }
}

TaggerModel TaggerModel::read(std::istream& in) {
  std::string line;
  TaggerMode mode = TaggerMode::kSampledHard;
  int hash_bits = 20;
  bool saw_format = false;
  std::vector<Lexicon> lexicons;
  TagScores start{};
  std::array<TagScores, kT> trans{};
  std::unordered_map<uint32_t, TagScores> weights;
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw DataError("tagger model: " + what);
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "format") {
      std::string name;
      int version = 0;
      fields >> name >> version;
      need(name == "weaktag-tagger" && version == 1, "unsupported format");
      saw_format = true;
    } else if (key == "mode") {
      std::string v;
      fields >> v;
      mode = parse_tagger_mode(v);
    } else if (key == "hash_bits") {
      fields >> hash_bits;
      need(!fields.fail() && hash_bits >= 8 && hash_bits <= 28, "bad hash_bits");
    } else if (key == "lexicon") {
      int polarity = 0, case_sensitive = 0;
      size_t n = 0;
      fields >> polarity >> case_sensitive >> n;
      std::string name;
      std::getline(fields >> std::ws, name);
      std::vector<std::string> terms(n);
      for (size_t i = 0; i < n; ++i) {
        need(static_cast<bool>(std::getline(in, terms[i])), "truncated lexicon");
      }
      lexicons.emplace_back(name, polarity, terms, case_sensitive != 0);
    } else if (key == "start") {
      for (double& v : start) fields >> v;
      need(!fields.fail(), "bad start line");
    } else if (key == "transitions") {
      for (auto& row : trans) {
        for (double& v : row) fields >> v;
      }
      need(!fields.fail(), "bad transitions line");
    } else if (key == "weights") {
      size_t n = 0;
      fields >> n;
      for (size_t i = 0; i < n; ++i) {
        need(static_cast<bool>(std::getline(in, line)), "truncated weights");
        std::istringstream w(line);
        uint32_t b = 0;
        TagScores s{};
        w >> b >> s[0] >> s[1] >> s[2];
        need(!w.fail(), "bad weight line");
        need(b < (1u << hash_bits), "weight bucket out of range");
        weights[b] = s;
      }
    } else {
      throw DataError("tagger model: unknown key '" + key + "'");
    }
  }
  need(saw_format, "missing format line");
  TaggerModel model(mode, hash_bits, std::move(lexicons));
  model.start_ = start;
  model.trans_ = trans;
  model.weights_ = std::move(weights);
  return model;
}

TaggerModel TaggerModel::load(const std::string& path) {
  std::ifstream in = open_input(path);
  return read(in);
}

namespace {

struct Instance {
  int sentence = 0;  // index into Problem::features
  double weight = 0.0;
  std::vector<int> tags;                  // hard
  std::vector<std::array<double, kT>> q;  // soft targets
};

struct Problem {
  std::vector<std::vector<std::vector<int>>> features;  // dense ids per token
  std::vector<uint32_t> buckets;                        // dense id -> bucket
  std::vector<Instance> instances;
  int n_features() const { return static_cast<int>(buckets.size()); }
  size_t start_offset() const { return buckets.size() * kT; }
  size_t trans_offset() const { return start_offset() + kT; }
  size_t n_params() const { return trans_offset() + kT * kT; }
};

const Sentence& lookup(const Corpus& corpus, const std::string& doc_id,
                       int sent_index, size_t length) {
  const Sentence* s = corpus.find_sentence(doc_id, sent_index);
  if (s == nullptr) {
    throw DataError("training sentence " + doc_id + "/" +
                    std::to_string(sent_index) + " is not in the corpus");
  }
  if (static_cast<size_t>(s->size()) != length) {
    throw DataError("training labels for " + doc_id + "/" +
                    std::to_string(sent_index) + " do not match its length");
  }
  return *s;
}

class ProblemBuilder {
 public:
  ProblemBuilder(const Corpus& corpus, const FeatureExtractor& extractor,
                 int hash_bits)
      : corpus_(corpus), extractor_(extractor), hash_bits_(hash_bits) {}

  int sentence(const std::string& doc_id, int sent_index, size_t length) {
    auto key = std::make_pair(doc_id, sent_index);
    auto it = sentence_ids_.find(key);
    if (it != sentence_ids_.end()) return it->second;
    const Sentence& s = lookup(corpus_, doc_id, sent_index, length);
    auto hashed = extractor_.extract_hashed(s, hash_bits_);
    std::vector<std::vector<int>> dense(hashed.size());
    for (size_t t = 0; t < hashed.size(); ++t) {
      for (uint32_t b : hashed[t]) {
        auto [pos, inserted] =
            bucket_ids_.try_emplace(b, static_cast<int>(problem.buckets.size()));
        if (inserted) problem.buckets.push_back(b);
        dense[t].push_back(pos->second);
      }
    }
    int id = static_cast<int>(problem.features.size());
    problem.features.push_back(std::move(dense));
    sentence_ids_.emplace(std::move(key), id);
    return id;
  }

  Problem problem;

 private:
  struct PairHash {
    size_t operator()(const std::pair<std::string, int>& k) const {
      return fnv1a64(k.first) ^ mix64(static_cast<uint64_t>(k.second));
    }
  };
  const Corpus& corpus_;
  const FeatureExtractor& extractor_;
  int hash_bits_;
  std::unordered_map<std::pair<std::string, int>, int, PairHash> sentence_ids_;
  std::unordered_map<uint32_t, int> bucket_ids_;
};

void add_emissions(const std::vector<double>& x,
                   const std::vector<std::vector<int>>& feats,
                   std::vector<std::array<double, kT>>& em) {
  em.assign(feats.size(), {0.0, 0.0, 0.0});
  for (size_t t = 0; t < feats.size(); ++t) {
    for (int f : feats[t]) {
      const double* w = &x[static_cast<size_t>(f) * kT];
      for (int y = 0; y < kT; ++y) em[t][y] += w[y];
    }
  }
}

// Negative weighted conditional log-likelihood of a linear-chain CRF whose
// transition matrix forbids O -> I and a leading I.
double crf_objective(const Problem& pb, double l2, const std::vector<double>& x,
                     std::vector<double>& g) {
  std::fill(g.begin(), g.end(), 0.0);
  double f = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    f += 0.5 * l2 * x[i] * x[i];
    g[i] = l2 * x[i];
  }
  const double* start = &x[pb.start_offset()];
  const double* trans = &x[pb.trans_offset()];
  double* g_start = &g[pb.start_offset()];
  double* g_trans = &g[pb.trans_offset()];
  std::vector<std::array<double, kT>> em, alpha, beta;
  for (const Instance& inst : pb.instances) {
    const auto& feats = pb.features[inst.sentence];
    const int n = static_cast<int>(feats.size());
    if (n == 0) continue;
    add_emissions(x, feats, em);
    alpha.assign(n, {kNegInf, kNegInf, kNegInf});
    beta.assign(n, {0.0, 0.0, 0.0});
    for (int y = 0; y < kT; ++y) {
      if (y != kI) alpha[0][y] = start[y] + em[0][y];
    }
    double buf[kT];
    for (int t = 1; t < n; ++t) {
      for (int y = 0; y < kT; ++y) {
        for (int p = 0; p < kT; ++p) {
          buf[p] = allowed(p, y) ? alpha[t - 1][p] + trans[p * kT + y] : kNegInf;
        }
        alpha[t][y] = log_sum_exp(buf, kT) + em[t][y];
      }
    }
    for (int t = n - 2; t >= 0; --t) {
      for (int p = 0; p < kT; ++p) {
        for (int y = 0; y < kT; ++y) {
          buf[y] = allowed(p, y) ? trans[p * kT + y] + em[t + 1][y] + beta[t + 1][y]
                                 : kNegInf;
        }
        beta[t][p] = log_sum_exp(buf, kT);
      }
    }
    const double log_z = log_sum_exp(alpha[n - 1].data(), kT);
    double gold = start[inst.tags[0]] + em[0][inst.tags[0]];
    for (int t = 1; t < n; ++t) {
      gold += trans[inst.tags[t - 1] * kT + inst.tags[t]] + em[t][inst.tags[t]];
    }
    const double w = inst.weight;
    f += w * (log_z - gold);

    for (int t = 0; t < n; ++t) {
      double marg[kT];
      for (int y = 0; y < kT; ++y) {
        marg[y] = std::exp(alpha[t][y] + beta[t][y] - log_z);
      }
      marg[inst.tags[t]] -= 1.0;
      for (int fid : feats[t]) {
        double* gw = &g[static_cast<size_t>(fid) * kT];
        for (int y = 0; y < kT; ++y) gw[y] += w * marg[y];
      }
      if (t == 0) {
        for (int y = 0; y < kT; ++y) g_start[y] += w * marg[y];
      } else {
        for (int p = 0; p < kT; ++p) {
          if (alpha[t - 1][p] == kNegInf) continue;
          for (int y = 0; y < kT; ++y) {
            if (!allowed(p, y)) continue;
            g_trans[p * kT + y] +=
                w * std::exp(alpha[t - 1][p] + trans[p * kT + y] + em[t][y] +
                             beta[t][y] - log_z);
          }
        }
        g_trans[inst.tags[t - 1] * kT + inst.tags[t]] -= w;
      }
    }
  }
  return f;
}

// Weighted per-token cross-entropy against soft targets.
double soft_objective(const Problem& pb, double l2, const std::vector<double>& x,
                      std::vector<double>& g) {
  std::fill(g.begin(), g.end(), 0.0);
  double f = 0.0;
  const size_t n_feature_params = pb.start_offset();
  for (size_t i = 0; i < n_feature_params; ++i) {
    f += 0.5 * l2 * x[i] * x[i];
    g[i] = l2 * x[i];
  }
  std::vector<std::array<double, kT>> em;
  for (const Instance& inst : pb.instances) {
    const auto& feats = pb.features[inst.sentence];
    add_emissions(x, feats, em);
    for (size_t t = 0; t < feats.size(); ++t) {
      const double log_z = log_sum_exp(em[t].data(), kT);
      double diff[kT];
      for (int y = 0; y < kT; ++y) {
        const double q = inst.q[t][y];
        if (q > 0.0) f -= inst.weight * q * (em[t][y] - log_z);
        diff[y] = inst.weight * (std::exp(em[t][y] - log_z) - q);
      }
      for (int fid : feats[t]) {
        double* gw = &g[static_cast<size_t>(fid) * kT];
        for (int y = 0; y < kT; ++y) gw[y] += diff[y];
      }
    }
  }
  return f;
}

}  // namespace

TaggerModel train_tagger(const Corpus& corpus, const TrainingData& data,
                         std::vector<Lexicon> lexicons,
                         const TaggerOptions& options, TrainReport* report) {
  const bool hard = std::holds_alternative<std::vector<TaggedSentence>>(data);
  if (hard != (options.mode == TaggerMode::kSampledHard)) {
    throw ConfigError(std::string("tagger mode ") + tagger_mode_name(options.mode) +
                      " does not match the training data (" +
                      (hard ? "sampled tag sequences" : "soft labels") + ")");
  }
  if (options.l2 < 0.0) throw ConfigError("l2 must be non-negative");
  TaggerModel model(options.mode, options.hash_bits, std::move(lexicons));
  ProblemBuilder builder(corpus, model.features(), options.hash_bits);
  Problem& pb = builder.problem;

  if (hard) {
    const auto& samples = std::get<std::vector<TaggedSentence>>(data);
    if (samples.empty()) throw DataError("no training sequences");
    std::unordered_map<std::string, size_t> merged;
    for (const TaggedSentence& s : samples) {
      if (!is_valid_bio(s.tags)) {
        throw DataError("invalid BIO sequence for " + s.doc_id + "/" +
                        std::to_string(s.sent_index));
      }
      if (!(s.weight >= 0.0)) throw DataError("negative sample weight");
      int sid = builder.sentence(s.doc_id, s.sent_index, s.tags.size());
      std::string key = std::to_string(sid) + ":";
      for (Tag t : s.tags) key.push_back(tag_char(t));
      auto [it, inserted] = merged.try_emplace(key, pb.instances.size());
      if (inserted) {
        Instance inst;
        inst.sentence = sid;
        for (Tag t : s.tags) inst.tags.push_back(static_cast<int>(t));
        pb.instances.push_back(std::move(inst));
      }
      pb.instances[it->second].weight += s.weight;
    }
  } else {
    const auto& soft = std::get<std::vector<SoftLabeledSentence>>(data);
    if (soft.empty()) throw DataError("no soft-labeled sentences");
    for (const SoftLabeledSentence& s : soft) {
      if (s.q_begin.size() != s.q.size()) {
        throw DataError("q and q_begin differ in length");
      }
      Instance inst;
      inst.sentence = builder.sentence(s.doc_id, s.sent_index, s.q.size());
      inst.weight = 1.0;
      for (size_t t = 0; t < s.q.size(); ++t) {
        const double q = std::clamp(s.q[t], 0.0, 1.0);
        const double qb = std::clamp(s.q_begin[t], 0.0, q);
        std::array<double, kT> target{};
        target[kO] = 1.0 - q;
        target[kB] = qb;
        target[kI] = q - qb;
        inst.q.push_back(target);
      }
      pb.instances.push_back(std::move(inst));
    }
  }

  std::vector<double> x(pb.n_params(), 0.0);
  Objective objective = [&](const std::vector<double>& params,
                            std::vector<double>& grad) {
    return hard ? crf_objective(pb, options.l2, params, grad)
                : soft_objective(pb, options.l2, params, grad);
  };
  LbfgsOptions lopts;
  lopts.max_iters = options.max_iters;
  LbfgsResult res = minimize_lbfgs(objective, x, lopts);

  for (int f = 0; f < pb.n_features(); ++f) {
    TaggerModel::TagScores w{x[f * kT], x[f * kT + 1], x[f * kT + 2]};
    if (w[0] != 0.0 || w[1] != 0.0 || w[2] != 0.0) model.weights()[pb.buckets[f]] = w;
  }
  if (hard) {
    for (int y = 0; y < kT; ++y) {
      model.start()[y] = x[pb.start_offset() + y];
      for (int p = 0; p < kT; ++p) {
        model.transitions()[p][y] = x[pb.trans_offset() + p * kT + y];
      }
    }
  }
  if (report != nullptr) {
    report->iterations = res.iterations;
    report->objective = res.value;
    report->sequences = pb.instances.size();
    report->features = pb.buckets.size();
  }
  return model;
}

std::vector<Mention> predict_mentions(const TaggerModel& model,
                                      const Corpus& corpus, int jobs) {
  std::vector<const Sentence*> sentences;
  for (const Document& doc : corpus.documents()) {
    for (const Sentence& s : doc.sentences) sentences.push_back(&s);
  }
  std::vector<std::vector<Mention>> per(sentences.size());
  auto work = [&](size_t worker, size_t n_workers) {
    for (size_t i = worker; i < sentences.size(); i += n_workers) {
      const Sentence& s = *sentences[i];
      std::vector<Tag> tags = model.decode(s);
      for (auto [b, e] : spans_from_tags(tags)) {
        per[i].push_back({s.doc_id, s.sent_index, b, e, span_text(s, b, e)});
      }
    }
  };
  const size_t n_workers =
      std::clamp<size_t>(jobs, 1, std::max<size_t>(sentences.size(), 1));
  if (n_workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (size_t w = 0; w < n_workers; ++w) threads.emplace_back(work, w, n_workers);
    for (auto& t : threads) t.join();
  }
  std::vector<Mention> out;
  for (auto& v : per) {
    for (auto& m : v) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace weaktag
