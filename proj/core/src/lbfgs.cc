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

#include "weaktag/lbfgs.h"

#include <cmath>
#include <deque>

namespace weaktag {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double>& x,
                           const LbfgsOptions& options) {
  const size_t n = x.size();
  LbfgsResult result;
  std::vector<double> g(n), g_new(n), x_new(n), d(n);
  double fx = f(x, g);
  ++result.evaluations;

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> history;
  std::vector<double> alpha(options.memory);

  for (int iter = 0; iter < options.max_iters; ++iter) {
    const double gnorm = std::sqrt(dot(g, g));
    if (gnorm <= options.grad_tol * std::max(1.0, std::sqrt(dot(x, x)))) {
      result.converged = true;
      break;
    }
    // Two-loop recursion.
    d = g;
    for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
      alpha[i] = history[i].rho * dot(history[i].s, d);
      for (size_t k = 0; k < n; ++k) d[k] -= alpha[i] * history[i].y[k];
    }
    double gamma = 1.0 / std::max(gnorm, 1.0);
    if (!history.empty()) {
      const Pair& last = history.back();
      gamma = dot(last.s, last.y) / dot(last.y, last.y);
    }
    for (double& v : d) v *= gamma;
    for (size_t i = 0; i < history.size(); ++i) {
      double beta = history[i].rho * dot(history[i].y, d);
      for (size_t k = 0; k < n; ++k) d[k] += history[i].s[k] * (alpha[i] - beta);
    }
    for (double& v : d) v = -v;
    double slope = dot(g, d);
    if (slope >= 0.0) {
      history.clear();
      for (size_t k = 0; k < n; ++k) d[k] = -g[k] / std::max(gnorm, 1.0);
      slope = dot(g, d);
    }

    double step = 1.0;
    double f_new = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (size_t k = 0; k < n; ++k) x_new[k] = x[k] + step * d[k];
      f_new = f(x_new, g_new);
      ++result.evaluations;
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (size_t k = 0; k < n; ++k) {
      p.s[k] = x_new[k] - x[k];
      p.y[k] = g_new[k] - g[k];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-12) {
      p.rho = 1.0 / sy;
      history.push_back(std::move(p));
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }
    const double decrease = fx - f_new;
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    result.iterations = iter + 1;
    if (decrease <= options.rel_tol * std::max(1.0, std::abs(fx))) {
      result.converged = true;
      break;
    }
  }
  result.value = fx;
  return result;
}

}  // namespace weaktag
