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

#include "weaktag/genmodel.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "weaktag/error.h"
#include "weaktag/io_util.h"

namespace weaktag {

using json = nlohmann::json;

std::vector<std::vector<double>> VoteMatrix::dense() const {
  std::vector<std::vector<double>> out(n_lfs_, std::vector<double>(k_, 0.0));
  for (const VoteRow& row : rows_) out[row.lf] = row.mass;
  return out;
}

std::vector<double> VoteMatrix::column_sums() const {
  std::vector<double> sums(k_, 0.0);
  for (const VoteRow& row : rows_) {
    for (int j = 0; j < k_; ++j) sums[j] += row.mass[j];
  }
  return sums;
}

VoteMatrix build_vote_matrix(const Spanset& spanset, const LabelMatrix& matrix) {
  const int k = spanset.k();
  std::map<int, std::pair<std::vector<double>, int>> rows;
  for (int j = 0; j < static_cast<int>(spanset.members.size()); ++j) {
    for (const LabelEntry& e : matrix.row(spanset.members[j])) {
      auto& [mass, votes] = rows[e.lf];
      if (mass.empty()) mass.assign(k, 0.0);
      ++votes;
      if (e.label > 0) {
        mass[j] += 1.0;
      } else {
        const double spread = 1.0 / (k - 1);
        for (int c = 0; c < k; ++c) {
          if (c != j) mass[c] += spread;
        }
      }
    }
  }
  VoteMatrix out(matrix.n_lfs(), k);
  for (auto& [lf, entry] : rows) {
    auto& [mass, votes] = entry;
    if (votes > 1) {
      for (double& v : mass) v /= votes;
    }
    out.add_row(VoteRow{lf, std::move(mass)});
  }
  return out;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Draft {
  std::vector<int> members;
  int hull_start = 0;
  int hull_end = 0;
};

}  // namespace

PartitionResult partition_spansets(const CandidateSet& candidates,
                                   const LabelMatrix& matrix,
                                   const PartitionOptions& options) {
  if (matrix.n_candidates() != static_cast<int>(candidates.size())) {
    throw DataError("label matrix has " + std::to_string(matrix.n_candidates()) +
                    " rows but there are " + std::to_string(candidates.size()) +
                    " candidates");
  }
  PartitionResult result;
  for (const auto& group : candidates.groups()) {
    std::vector<int> positives;
    std::vector<int> negatives;
    for (int c = group.first; c < group.last; ++c) {
      if (matrix.has_positive(c)) {
        positives.push_back(c);
      } else if (matrix.has_negative(c)) {
        negatives.push_back(c);
      } else {
        ++result.unlabeled_removed;
      }
    }
    if (positives.empty() && negatives.empty()) continue;

    DisjointSets sets(static_cast<int>(positives.size()));
    for (size_t a = 0; a < positives.size(); ++a) {
      for (size_t b = a + 1; b < positives.size(); ++b) {
        if (candidates[positives[a]].overlaps(candidates[positives[b]])) {
          sets.unite(static_cast<int>(a), static_cast<int>(b));
        }
      }
    }
    std::map<int, Draft> by_root;
    for (size_t a = 0; a < positives.size(); ++a) {
      const Candidate& c = candidates[positives[a]];
      Draft& d = by_root[sets.find(static_cast<int>(a))];
      if (d.members.empty()) {
        d.hull_start = c.token_start;
        d.hull_end = c.token_end;
      }
      d.members.push_back(c.id);
      d.hull_start = std::min(d.hull_start, c.token_start);
      d.hull_end = std::max(d.hull_end, c.token_end);
    }
    std::vector<Draft> seeds;
    for (auto& [root, d] : by_root) seeds.push_back(std::move(d));
    const size_t n_seeds = seeds.size();
    std::vector<std::pair<int, int>> seed_hulls;
    for (const Draft& d : seeds) seed_hulls.emplace_back(d.hull_start, d.hull_end);

    // Candidate ids within a group are already in (token_start, token_end)
    // order.
    std::vector<Draft> singletons;
    for (int c : negatives) {
      const Candidate& cand = candidates[c];
      int hits = 0;
      size_t target = 0;
      for (size_t s = 0; s < n_seeds; ++s) {
        if (cand.token_start < seed_hulls[s].second &&
            seed_hulls[s].first < cand.token_end) {
          ++hits;
          target = s;
        }
      }
      if (hits == 1) {
        Draft& d = seeds[target];
        d.members.push_back(c);
        d.hull_start = std::min(d.hull_start, cand.token_start);
        d.hull_end = std::max(d.hull_end, cand.token_end);
      } else if (hits >= 2) {
        ++result.bridging_skipped;
      } else {
        singletons.push_back(Draft{{c}, cand.token_start, cand.token_end});
      }
    }
    for (Draft& d : singletons) seeds.push_back(std::move(d));
    std::sort(seeds.begin(), seeds.end(), [](const Draft& a, const Draft& b) {
      return a.hull_start != b.hull_start ? a.hull_start < b.hull_start
                                          : a.hull_end < b.hull_end;
    });

    bool dropped_here = false;
    for (Draft& d : seeds) {
      if (static_cast<int>(d.members.size()) + 1 > options.k_max_cap) {
        ++result.dropped_over_cap;
        dropped_here = true;
        continue;
      }
      std::sort(d.members.begin(), d.members.end(), [&](int a, int b) {
        const Candidate& ca = candidates[a];
        const Candidate& cb = candidates[b];
        if (ca.length() != cb.length()) return ca.length() > cb.length();
        return ca.token_start < cb.token_start;
      });
      Spanset s;
      s.id = static_cast<int>(result.spansets.size());
      s.doc_id = group.doc_id;
      s.sent_index = group.sent_index;
      s.members = std::move(d.members);
      s.hull_start = d.hull_start;
      s.hull_end = d.hull_end;
      s.votes = build_vote_matrix(s, matrix);
      result.spansets.push_back(std::move(s));
    }
    if (dropped_here) {
      result.dropped_sentences.emplace_back(group.doc_id, group.sent_index);
    }
  }
  return result;
}

ClassPrior parse_class_prior(std::string_view name) {
  if (name == "uniform") return ClassPrior::kUniform;
  if (name == "empirical") return ClassPrior::kEmpirical;
  throw ConfigError("unknown class prior '" + std::string(name) + "'");
}

const char* class_prior_name(ClassPrior prior) {
  return prior == ClassPrior::kUniform ? "uniform" : "empirical";
}

double LfModel::weight(int lf, int k) const {
  const double a = accuracies[lf];
  return std::log(a * (k - 1) / (1.0 - a));
}

std::vector<double> LfModel::log_prior(int k) const {
  if (prior == ClassPrior::kUniform) {
    return std::vector<double>(k, -std::log(static_cast<double>(k)));
  }
  std::vector<double> out(k, std::log((1.0 - none_prior) / (k - 1)));
  out[k - 1] = std::log(none_prior);
  return out;
}

LfModel make_model(std::vector<std::string> lf_names, double accuracy,
                   ClassPrior prior) {
  LfModel model;
  model.accuracies.assign(lf_names.size(), accuracy);
  model.abstain_rates.assign(lf_names.size(), 0.0);
  model.lf_names = std::move(lf_names);
  model.prior = prior;
  return model;
}

namespace {

// Column scores w . X + ln prior; returns the log normalizer.
double spanset_scores(const Spanset& s, const LfModel& model,
                      std::vector<double>& scores) {
  const int k = s.k();
  scores = model.log_prior(k);
  for (const VoteRow& row : s.votes.rows()) {
    const double w = model.weight(row.lf, k);
    for (int j = 0; j < k; ++j) scores[j] += w * row.mass[j];
  }
  double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double v : scores) sum += std::exp(v - top);
  return top + std::log(sum);
}

}  // namespace

std::vector<double> marginals(const Spanset& spanset, const LfModel& model) {
  std::vector<double> scores;
  double log_z = spanset_scores(spanset, model, scores);
  for (double& v : scores) v = std::exp(v - log_z);
  return scores;
}

int argmax_column(std::span<const double> p) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(p.size()); ++j) {
    if (p[j] > p[best]) best = j;
  }
  return best;
}

int majority_vote_column(const Spanset& spanset) {
  std::vector<double> sums = spanset.votes.column_sums();
  const int none = spanset.none_column();
  double top = *std::max_element(sums.begin(), sums.end());
  constexpr double kEps = 1e-12;
  int best = -1;
  for (int j = 0; j < static_cast<int>(sums.size()); ++j) {
    if (sums[j] >= top - kEps) {
      if (best >= 0 || j == none) return none;
      best = j;
    }
  }
  return best < 0 ? none : best;
}

namespace {

constexpr size_t kChunk = 256;

struct Stats {
  std::vector<double> agree;
  std::vector<double> votes;
  double log_likelihood = 0.0;
};

// E-step over [begin, end): posterior agreement per LF and log-likelihood.
void accumulate(std::span<const Spanset> spansets, size_t begin, size_t end,
                const LfModel& model, Stats& out) {
  std::vector<double> scores;
  for (size_t i = begin; i < end; ++i) {
    const Spanset& s = spansets[i];
    const int k = s.k();
    double log_z = spanset_scores(s, model, scores);
    double offset = 0.0;
    for (const VoteRow& row : s.votes.rows()) {
      const double a = model.accuracies[row.lf];
      offset += std::log((1.0 - a) / (k - 1));
    }
    out.log_likelihood += log_z + offset;
    for (double& v : scores) v = std::exp(v - log_z);
    for (const VoteRow& row : s.votes.rows()) {
      double agreement = 0.0;
      for (int j = 0; j < k; ++j) agreement += scores[j] * row.mass[j];
      out.agree[row.lf] += agreement;
      out.votes[row.lf] += 1.0;
    }
  }
}

// Chunk boundaries do not depend on `jobs`, and chunk partials are reduced
// in order, so results are identical for any worker count.
Stats expectation(std::span<const Spanset> spansets, const LfModel& model,
                  int jobs) {
  const int m = model.n_lfs();
  const size_t n_chunks = (spansets.size() + kChunk - 1) / kChunk;
  std::vector<Stats> partial(n_chunks);
  for (Stats& p : partial) {
    p.agree.assign(m, 0.0);
    p.votes.assign(m, 0.0);
  }
  auto work = [&](size_t worker, size_t n_workers) {
    for (size_t c = worker; c < n_chunks; c += n_workers) {
      accumulate(spansets, c * kChunk,
                 std::min(spansets.size(), (c + 1) * kChunk), model,
                 partial[c]);
    }
  };
  size_t n_workers = std::clamp<size_t>(jobs, 1, std::max<size_t>(n_chunks, 1));
  if (n_workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (size_t w = 0; w < n_workers; ++w) threads.emplace_back(work, w, n_workers);
    for (auto& t : threads) t.join();
  }
  Stats total;
  total.agree.assign(m, 0.0);
  total.votes.assign(m, 0.0);
  for (const Stats& p : partial) {
    for (int i = 0; i < m; ++i) {
      total.agree[i] += p.agree[i];
      total.votes[i] += p.votes[i];
    }
    total.log_likelihood += p.log_likelihood;
  }
  return total;
}

double smoothed_objective(const Stats& stats, const LfModel& model,
                          const FitOptions& options) {
  double obj = stats.log_likelihood;
  for (double a : model.accuracies) {
    obj += options.smoothing_a * std::log(a) +
           options.smoothing_b * std::log(1.0 - a);
  }
  return obj;
}

}  // namespace

LfModel fit(std::span<const Spanset> spansets,
            const std::vector<std::string>& lf_names,
            const FitOptions& options) {
  const int m = static_cast<int>(lf_names.size());
  if (m < 1) throw ConfigError("fit needs at least one labeling function");
  if (!(options.clamp_low > 0.0 && options.clamp_high < 1.0 &&
        options.clamp_low < options.clamp_high)) {
    throw ConfigError("accuracy clamp must satisfy 0 < low < high < 1");
  }
  size_t total_votes = 0;
  std::vector<size_t> voting_spansets(m, 0);
  for (const Spanset& s : spansets) {
    for (const VoteRow& row : s.votes.rows()) {
      if (row.lf < 0 || row.lf >= m) {
        throw DataError("vote row for LF " + std::to_string(row.lf) +
                        " outside the model");
      }
      ++voting_spansets[row.lf];
      ++total_votes;
    }
  }
  if (spansets.empty() || total_votes == 0) {
    throw DataError("empty supervision");
  }

  LfModel model = make_model(lf_names, std::clamp(options.init_accuracy,
                                                  options.clamp_low,
                                                  options.clamp_high),
                             options.prior);
  model.seed = options.seed;
  for (int i = 0; i < m; ++i) {
    model.abstain_rates[i] =
        1.0 - static_cast<double>(voting_spansets[i]) / spansets.size();
  }
  if (options.prior == ClassPrior::kEmpirical) {
    size_t none = 0;
    for (const Spanset& s : spansets) {
      if (majority_vote_column(s) == s.none_column()) ++none;
    }
    model.none_prior = std::clamp(static_cast<double>(none) / spansets.size(),
                                  options.clamp_low, options.clamp_high);
  }

  FitReport& report = model.report;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    Stats stats = expectation(spansets, model, options.jobs);
    report.log_likelihood_trace.push_back(stats.log_likelihood);
    report.objective_trace.push_back(smoothed_objective(stats, model, options));
    double delta = 0.0;
    for (int i = 0; i < m; ++i) {
      double updated = (stats.agree[i] + options.smoothing_a) /
                       (stats.votes[i] + options.smoothing_a + options.smoothing_b);
      updated = std::clamp(updated, options.clamp_low, options.clamp_high);
      delta = std::max(delta, std::abs(updated - model.accuracies[i]));
      model.accuracies[i] = updated;
    }
    report.iterations = iter + 1;
    if (delta < options.tol) {
      report.converged = true;
      break;
    }
  }
  Stats final_stats = expectation(spansets, model, options.jobs);
  report.log_likelihood = final_stats.log_likelihood;
  report.objective = smoothed_objective(final_stats, model, options);
  report.log_likelihood_trace.push_back(report.log_likelihood);
  report.objective_trace.push_back(report.objective);
  model.fitted = true;
  return model;
}

std::vector<Spanset> binary_spansets(const CandidateSet& candidates,
                                     const LabelMatrix& matrix) {
  std::vector<Spanset> out;
  for (const Candidate& c : candidates.candidates()) {
    if (matrix.row(c.id).empty()) continue;
    Spanset s;
    s.id = static_cast<int>(out.size());
    s.doc_id = c.doc_id;
    s.sent_index = c.sent_index;
    s.members = {c.id};
    s.hull_start = c.token_start;
    s.hull_end = c.token_end;
    s.votes = build_vote_matrix(s, matrix);
    out.push_back(std::move(s));
  }
  return out;
}

LfModel fit_binary_baseline(const CandidateSet& candidates,
                            const LabelMatrix& matrix,
                            const FitOptions& options) {
  std::vector<Spanset> singles = binary_spansets(candidates, matrix);
  LfModel model = fit(singles, matrix.lf_names(), options);
  model.binary_mode = true;
  return model;
}

std::vector<SpansetMarginal> compute_marginals(std::span<const Spanset> spansets,
                                               const LfModel& model) {
  std::vector<SpansetMarginal> out;
  out.reserve(spansets.size());
  for (const Spanset& s : spansets) {
    out.push_back({s.id, s.doc_id, s.sent_index, s.members, marginals(s, model)});
  }
  return out;
}

void LfModel::write(std::ostream& out, const std::string& config_hash) const {
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << "format weaktag-lfmodel 1\n";
  out << "mode " << (binary_mode ? "binary" : "multinomial") << '\n';
  out << "prior " << class_prior_name(prior) << '\n';
  out << "none_prior " << format_double(none_prior) << '\n';
  out << "fitted " << (fitted ? "true" : "false") << '\n';
  out << "seed " << seed << '\n';
  out << "iterations " << report.iterations << '\n';
  out << "converged " << (report.converged ? "true" : "false") << '\n';
  out << "log_likelihood " << format_double(report.log_likelihood) << '\n';
  out << "objective " << format_double(report.objective) << '\n';
  out << "n_lfs " << n_lfs() << '\n';
  for (int i = 0; i < n_lfs(); ++i) {
    out << "lf " << i << ' ' << format_double(accuracies[i]) << ' '
        << format_double(abstain_rates[i]) << ' ' << lf_names[i] << '\n';
  }
}

LfModel LfModel::read(std::istream& in) {
  LfModel model;
  std::string line;
  int declared = -1;
  bool saw_format = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "format") {
      std::string name;
      int version = 0;
      fields >> name >> version;
      if (name != "weaktag-lfmodel" || version != 1) {
        throw DataError("unsupported model format '" + line + "'");
      }
      saw_format = true;
    } else if (key == "mode") {
      std::string v;
      fields >> v;
      model.binary_mode = v == "binary";
    } else if (key == "prior") {
      std::string v;
      fields >> v;
      model.prior = parse_class_prior(v);
    } else if (key == "none_prior") {
      fields >> model.none_prior;
    } else if (key == "fitted") {
      std::string v;
      fields >> v;
      model.fitted = v == "true";
    } else if (key == "seed") {
      fields >> model.seed;
    } else if (key == "iterations") {
      fields >> model.report.iterations;
    } else if (key == "converged") {
      std::string v;
      fields >> v;
      model.report.converged = v == "true";
    } else if (key == "log_likelihood") {
      fields >> model.report.log_likelihood;
    } else if (key == "objective") {
      fields >> model.report.objective;
    } else if (key == "n_lfs") {
      fields >> declared;
    } else if (key == "lf") {
      int index = -1;
      double alpha = 0.0, abstain = 0.0;
      fields >> index >> alpha >> abstain;
      std::string name;
      std::getline(fields >> std::ws, name);
      if (!fields.eof() && fields.fail()) throw DataError("bad lf line: " + line);
      if (index != model.n_lfs()) throw DataError("lf lines out of order");
      if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DataError("accuracy outside (0, 1) for LF " + name);
      }
      model.accuracies.push_back(alpha);
      model.abstain_rates.push_back(abstain);
      model.lf_names.push_back(name);
    } else {
      throw DataError("unknown model key '" + key + "'");
    }
  }
  if (!saw_format) throw DataError("model file lacks a format line");
  if (declared != model.n_lfs()) throw DataError("model LF count mismatch");
  return model;
}

LfModel LfModel::load(const std::string& path) {
  std::ifstream in = open_input(path);
  return read(in);
}

void write_marginals(std::span<const SpansetMarginal> marginals,
                     std::ostream& out, const std::string& config_hash) {
  json meta = {{"kind", "marginals"}};
  if (!config_hash.empty()) meta["config_hash"] = config_hash;
  out << json{{"_meta", meta}}.dump() << '\n';
  for (const SpansetMarginal& m : marginals) {
    json record = {{"spanset_id", m.spanset_id},
                   {"doc_id", m.doc_id},
                   {"sent", m.sent_index},
                   {"members", m.members},
                   {"p", m.p}};
    out << record.dump() << '\n';
  }
}

std::vector<SpansetMarginal> read_marginals(std::istream& in) {
  std::vector<SpansetMarginal> out;
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
      SpansetMarginal m;
      m.spanset_id = record.at("spanset_id").get<int>();
      m.doc_id = record.at("doc_id").get<std::string>();
      m.sent_index = record.at("sent").get<int>();
      m.members = record.at("members").get<std::vector<int>>();
      m.p = record.at("p").get<std::vector<double>>();
      if (m.p.size() != m.members.size() + 1) {
        throw DataError("p must have one entry per member plus NONE");
      }
      out.push_back(std::move(m));
    } catch (const json::exception& e) {
      throw DataError("marginals line " + std::to_string(line_no) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError("marginals line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return out;
}

std::vector<SpansetMarginal> load_marginals(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_marginals(in);
}

}  // namespace weaktag
