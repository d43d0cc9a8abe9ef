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

#include "weaktag/label_matrix.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "weaktag/error.h"
#include "weaktag/io_util.h"

namespace weaktag {

LabelMatrix::LabelMatrix(int n_candidates, std::vector<std::string> lf_names,
                         std::vector<LabelEntry> entries)
    : n_candidates_(n_candidates), lf_names_(std::move(lf_names)),
      entries_(std::move(entries)) {
  if (n_candidates_ < 0) throw DataError("negative candidate count");
  std::sort(entries_.begin(), entries_.end(),
            [](const LabelEntry& a, const LabelEntry& b) {
              return a.candidate != b.candidate ? a.candidate < b.candidate
                                                : a.lf < b.lf;
            });
  const int m = n_lfs();
  for (size_t i = 0; i < entries_.size(); ++i) {
    const LabelEntry& e = entries_[i];
    if (e.candidate < 0 || e.candidate >= n_candidates_ || e.lf < 0 ||
        e.lf >= m) {
      throw DataError("label entry (" + std::to_string(e.candidate) + ", " +
                      std::to_string(e.lf) + ") out of range");
    }
    if (e.label != 1 && e.label != -1) {
      throw DataError("label entry (" + std::to_string(e.candidate) + ", " +
                      std::to_string(e.lf) + ") has label " +
                      std::to_string(e.label));
    }
    if (i > 0 && entries_[i - 1].candidate == e.candidate &&
        entries_[i - 1].lf == e.lf) {
      throw DataError("duplicate label entry (" + std::to_string(e.candidate) +
                      ", " + std::to_string(e.lf) + ")");
    }
  }
  row_offsets_.assign(n_candidates_ + 1, 0);
  for (const LabelEntry& e : entries_) ++row_offsets_[e.candidate + 1];
  for (int c = 0; c < n_candidates_; ++c) row_offsets_[c + 1] += row_offsets_[c];
}

std::span<const LabelEntry> LabelMatrix::row(int candidate) const {
  return std::span<const LabelEntry>(entries_.data() + row_offsets_[candidate],
                                     row_offsets_[candidate + 1] -
                                         row_offsets_[candidate]);
}

int LabelMatrix::label(int candidate, int lf) const {
  for (const LabelEntry& e : row(candidate)) {
    if (e.lf == lf) return e.label;
  }
  return 0;
}

bool LabelMatrix::has_positive(int candidate) const {
  for (const LabelEntry& e : row(candidate)) {
    if (e.label > 0) return true;
  }
  return false;
}

bool LabelMatrix::has_negative(int candidate) const {
  for (const LabelEntry& e : row(candidate)) {
    if (e.label < 0) return true;
  }
  return false;
}

double LabelMatrix::density() const {
  const double cells = static_cast<double>(n_candidates_) * n_lfs();
  return cells > 0 ? static_cast<double>(entries_.size()) / cells : 0.0;
}

void LabelMatrix::write(std::ostream& out,
                        const std::string& config_hash) const {
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << "N " << n_candidates_ << " M " << n_lfs() << '\n';
  for (int j = 0; j < n_lfs(); ++j) out << "LF " << j << ' ' << lf_names_[j] << '\n';
  for (const LabelEntry& e : entries_) {
    out << e.candidate << ' ' << e.lf << ' ' << static_cast<int>(e.label)
        << '\n';
  }
}

LabelMatrix LabelMatrix::read(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1, m = -1;
  std::vector<std::string> names;
  std::vector<LabelEntry> entries;
  auto bad = [&](const std::string& what) {
    return DataError("label matrix line " + std::to_string(line_no) + ": " +
                     what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    if (line.starts_with("N ")) {
      std::string tag_n, tag_m;
      fields >> tag_n >> n >> tag_m >> m;
      if (!fields || tag_m != "M" || n < 0 || m < 0) throw bad("bad header");
      names.assign(m, "");
      continue;
    }
    if (n < 0) throw bad("missing 'N <n> M <m>' header");
    if (line.starts_with("LF ")) {
      std::string tag;
      int j = -1;
      fields >> tag >> j;
      std::string name;
      std::getline(fields >> std::ws, name);
      if (j < 0 || j >= m) throw bad("LF index out of range");
      names[j] = name;
      continue;
    }
    LabelEntry e;
    int label = 0;
    fields >> e.candidate >> e.lf >> label;
    if (!fields) throw bad("expected 'cand_id lf_id label'");
    e.label = static_cast<int8_t>(label);
    entries.push_back(e);
  }
  if (n < 0) throw DataError("label matrix lacks a header");
  return LabelMatrix(n, std::move(names), std::move(entries));
}

LabelMatrix LabelMatrix::load(const std::string& path) {
  std::ifstream in = open_input(path);
  return read(in);
}

}  // namespace weaktag
