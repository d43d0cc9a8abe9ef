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

#ifndef WEAKTAG_LABEL_MATRIX_H_
#define WEAKTAG_LABEL_MATRIX_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace weaktag {

struct LabelEntry {
  int candidate = 0;
  int lf = 0;
  int8_t label = 0;  // -1 or +1

  bool operator==(const LabelEntry&) const = default;
};

// Sparse N x M matrix over {-1, 0, +1}; zeros (abstains) are not stored.
// Entries are kept sorted by (candidate, lf) with per-row offsets.
class LabelMatrix {
 public:
  LabelMatrix() = default;

  // Validates ranges, labels and uniqueness; throws DataError.
  LabelMatrix(int n_candidates, std::vector<std::string> lf_names,
              std::vector<LabelEntry> entries);

  int n_candidates() const { return n_candidates_; }
  int n_lfs() const { return static_cast<int>(lf_names_.size()); }
  const std::vector<std::string>& lf_names() const { return lf_names_; }
  const std::vector<LabelEntry>& entries() const { return entries_; }
  size_t num_entries() const { return entries_.size(); }

  std::span<const LabelEntry> row(int candidate) const;
  int label(int candidate, int lf) const;
  bool has_positive(int candidate) const;
  bool has_negative(int candidate) const;

  // entries / (N * M), 0 for an empty shape.
  double density() const;

  // Number of (candidate, lf) evaluations that threw and were recorded as
  // abstains.
  int failures() const { return failures_; }
  void set_failures(int n) { failures_ = n; }

  // Text format:
  //   [# config_hash=<hex>]
  //   N <n> M <m>
  //   LF <j> <name>          (one per labeling function)
  //   <cand_id> <lf_id> <label>
  void write(std::ostream& out, const std::string& config_hash = "") const;
  static LabelMatrix read(std::istream& in);
  static LabelMatrix load(const std::string& path);

  bool operator==(const LabelMatrix& other) const {
    return n_candidates_ == other.n_candidates_ &&
           lf_names_ == other.lf_names_ && entries_ == other.entries_;
  }

 private:
  int n_candidates_ = 0;
  std::vector<std::string> lf_names_;
  std::vector<LabelEntry> entries_;
  std::vector<size_t> row_offsets_;
  int failures_ = 0;
};

}  // namespace weaktag

#endif  // WEAKTAG_LABEL_MATRIX_H_
