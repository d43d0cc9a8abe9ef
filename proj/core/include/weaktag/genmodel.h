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

// Multinomial generative label model over spansets.
//
// Overlapping labeled candidates of a sentence are grouped into a spanset
// with K = members + 1 outcomes, the last being NONE. Each labeling function
// contributes one row of the M x K vote matrix:
//
//   positive vote on member j   -> one-hot on column j
//   negative vote on member j   -> 1/(K-1) on every other column
//   several votes by one LF     -> rows summed, then scaled to mass 1
//
// With one accuracy alpha_i per LF, the posterior over outcomes is
//
//   P(Y = j) ∝ prior_j * exp(sum_i w_i(K) * X[i][j]),
//   w_i(K) = ln(alpha_i * (K - 1) / (1 - alpha_i)),
//
// which equals the posterior of the model in which LF i puts alpha_i on the
// true column and (1 - alpha_i) / (K - 1) on each other column. The
// accuracies are fitted by EM on the marginal likelihood of all spansets.

#ifndef WEAKTAG_GENMODEL_H_
#define WEAKTAG_GENMODEL_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weaktag/candidates.h"
#include "weaktag/label_matrix.h"

namespace weaktag {

struct VoteRow {
  int lf = 0;
  std::vector<double> mass;  // K entries summing to 1
};

// Sparse M x K matrix: abstaining LFs have no row.
class VoteMatrix {
 public:
  VoteMatrix() = default;
  VoteMatrix(int n_lfs, int k) : n_lfs_(n_lfs), k_(k) {}

  int n_lfs() const { return n_lfs_; }
  int k() const { return k_; }
  const std::vector<VoteRow>& rows() const { return rows_; }
  void add_row(VoteRow row) { rows_.push_back(std::move(row)); }

  // Dense M x K copy with zero rows for abstaining LFs.
  std::vector<std::vector<double>> dense() const;
  // Unweighted column sums (the majority-vote score of each outcome).
  std::vector<double> column_sums() const;

 private:
  int n_lfs_ = 0;
  int k_ = 0;
  std::vector<VoteRow> rows_;
};

struct Spanset {
  int id = 0;
  std::string doc_id;
  int sent_index = 0;
  // Candidate ids, longest first then by token_start. NONE is column
  // members.size().
  std::vector<int> members;
  int hull_start = 0;
  int hull_end = 0;
  VoteMatrix votes;

  int k() const { return static_cast<int>(members.size()) + 1; }
  int none_column() const { return static_cast<int>(members.size()); }
};

struct PartitionOptions {
  int k_max_cap = 16;
};

struct PartitionResult {
  std::vector<Spanset> spansets;
  int dropped_over_cap = 0;
  int bridging_skipped = 0;
  int unlabeled_removed = 0;
  // (doc_id, sent_index) of sentences that lost a spanset to the cap.
  std::vector<std::pair<std::string, int>> dropped_sentences;
};

// Groups labeled candidates into spansets:
//  1. connected components of the overlap graph over candidates with at
//     least one positive label seed the spansets;
//  2. negative-only candidates, in (sentence, token_start, token_end) order,
//     join the single seed whose hull they overlap, are skipped when they
//     overlap two or more seed hulls, and otherwise form a singleton;
//  3. unlabeled candidates are removed;
//  4. spansets with K > k_max_cap are dropped and counted.
// Vote matrices are filled in.
PartitionResult partition_spansets(const CandidateSet& candidates,
                                   const LabelMatrix& matrix,
                                   const PartitionOptions& options = {});

// Member order fixes the column order; NONE is last.
VoteMatrix build_vote_matrix(const Spanset& spanset, const LabelMatrix& matrix);

enum class ClassPrior { kUniform, kEmpirical };

ClassPrior parse_class_prior(std::string_view name);
const char* class_prior_name(ClassPrior prior);

struct FitReport {
  int iterations = 0;
  bool converged = false;
  double log_likelihood = 0.0;  // marginal log-likelihood at the final alpha
  // log-likelihood plus the Beta pseudo-count term; EM never decreases it.
  double objective = 0.0;
  std::vector<double> objective_trace;
  std::vector<double> log_likelihood_trace;
};

struct LfModel {
  std::vector<std::string> lf_names;
  std::vector<double> accuracies;
  std::vector<double> abstain_rates;
  ClassPrior prior = ClassPrior::kUniform;
  // Prior probability of NONE under the empirical prior.
  double none_prior = 0.5;
  bool fitted = false;
  bool binary_mode = false;
  uint64_t seed = 0;
  FitReport report;

  int n_lfs() const { return static_cast<int>(accuracies.size()); }
  // w_i(K) = ln(alpha_i * (K - 1) / (1 - alpha_i)).
  double weight(int lf, int k) const;
  // ln prior over the K outcomes.
  std::vector<double> log_prior(int k) const;

  // Plain-text key/value file.
  void write(std::ostream& out, const std::string& config_hash = "") const;
  static LfModel read(std::istream& in);
  static LfModel load(const std::string& path);
};

// An unfitted model with every accuracy set to `accuracy`.
LfModel make_model(std::vector<std::string> lf_names, double accuracy,
                   ClassPrior prior = ClassPrior::kUniform);

// Softmax over columns of w . X + ln prior. Sums to 1.
std::vector<double> marginals(const Spanset& spanset, const LfModel& model);

// Column with the largest marginal; ties go to the lowest index.
int argmax_column(std::span<const double> p);

// Unique column with the largest unweighted vote mass, or NONE when the
// maximum is shared or attained by NONE.
int majority_vote_column(const Spanset& spanset);

struct FitOptions {
  double tol = 1e-6;
  int max_iters = 500;
  double init_accuracy = 0.7;
  double smoothing_a = 2.0;  // pseudo-agreements
  double smoothing_b = 2.0;  // pseudo-disagreements
  double clamp_low = 0.01;
  double clamp_high = 0.99;
  ClassPrior prior = ClassPrior::kUniform;
  uint64_t seed = 13;
  int jobs = 1;
};

// EM over alpha maximizing the smoothed marginal likelihood. Throws
// DataError("empty supervision") when no LF votes on any spanset.
LfModel fit(std::span<const Spanset> spansets,
            const std::vector<std::string>& lf_names,
            const FitOptions& options = {});

// Every labeled candidate as its own K = 2 spanset, no mutual exclusion.
std::vector<Spanset> binary_spansets(const CandidateSet& candidates,
                                     const LabelMatrix& matrix);

// The independent-candidate model: same EM on binary_spansets().
LfModel fit_binary_baseline(const CandidateSet& candidates,
                            const LabelMatrix& matrix,
                            const FitOptions& options = {});

struct SpansetMarginal {
  int spanset_id = 0;
  std::string doc_id;
  int sent_index = 0;
  std::vector<int> members;
  std::vector<double> p;  // members then NONE
};

std::vector<SpansetMarginal> compute_marginals(std::span<const Spanset> spansets,
                                               const LfModel& model);

// {"spanset_id","doc_id","sent","members":[...],"p":[...]} per line.
void write_marginals(std::span<const SpansetMarginal> marginals,
                     std::ostream& out, const std::string& config_hash = "");
std::vector<SpansetMarginal> read_marginals(std::istream& in);
std::vector<SpansetMarginal> load_marginals(const std::string& path);

}  // namespace weaktag

#endif  // WEAKTAG_GENMODEL_H_
