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

#ifndef WEAKTAG_LBFGS_H_
#define WEAKTAG_LBFGS_H_

#include <functional>
#include <vector>

namespace weaktag {

// Returns f(x) and writes the gradient into `grad` (same size as x).
using Objective =
    std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

struct LbfgsOptions {
  int memory = 7;
  int max_iters = 100;
  double grad_tol = 1e-5;  // stop when |g| <= grad_tol * max(1, |x|)
  double rel_tol = 1e-7;   // stop when the relative decrease falls below this
};

struct LbfgsResult {
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// Minimizes f from `x` in place using limited-memory BFGS with a
// backtracking Armijo line search.
LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double>& x,
                           const LbfgsOptions& options = {});

}  // namespace weaktag

#endif  // WEAKTAG_LBFGS_H_
