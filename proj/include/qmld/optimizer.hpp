// Copyright 2026 The qmld authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "qmld/common.hpp"
#include "qmld/rng.hpp"

namespace qmld {

using Objective = std::function<double(const std::vector<double>&)>;

/// Result of one local descent.
struct LocalResult {
  std::vector<double> params;
  double value = 0.0;
  long evaluations = 0;
};

/// Default budget for one local descent and the simplex-diameter tolerance at
/// which it stops early.  The budget is the knob that trades optimization
/// quality for wall time; experiments may override it in their config.
inline constexpr long kDefaultEvalsPerRun = 200;
inline constexpr double kDefaultSimplexTol = 1e-6;

/// Initial simplex edge length (radians, the parameters being angles).
inline constexpr double kSimplexStep = 0.25;

/// Derivative-free Nelder-Mead descent with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).  Unconstrained:
/// vertices may leave the start box.  Stops when `max_evals` objective calls
/// are spent or the simplex L-inf diameter drops below `tol`.
inline LocalResult minimize_local(const Objective& f, std::vector<double> start,
                                  long max_evals = kDefaultEvalsPerRun,
                                  double tol = kDefaultSimplexTol,
                                  double step = kSimplexStep) {
  const std::size_t dim = start.size();
  if (dim == 0) throw std::invalid_argument("minimize_local: empty start point");
  if (max_evals < 1) throw std::invalid_argument("minimize_local: max_evals must be positive");

  struct Vertex {
    std::vector<double> x;
    double fx;
  };
  long evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };

  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back({start, eval(start)});
  for (std::size_t i = 0; i < dim && evals < max_evals; ++i) {
    std::vector<double> x = start;
    x[i] += step;
    simplex.push_back({x, eval(x)});
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; };
  std::sort(simplex.begin(), simplex.end(), by_value);

  while (evals < max_evals && simplex.size() == dim + 1) {
    // convergence: L-inf diameter of the simplex
    double diameter = 0.0;
    for (std::size_t v = 1; v < simplex.size(); ++v) {
      for (std::size_t i = 0; i < dim; ++i) {
        diameter = std::max(diameter, std::abs(simplex[v].x[i] - simplex[0].x[i]));
      }
    }
    if (diameter < tol) break;

    std::vector<double> centroid(dim, 0.0);  // of all but the worst vertex
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    const Vertex& worst = simplex.back();
    std::vector<double> reflected(dim);
    for (std::size_t i = 0; i < dim; ++i) reflected[i] = 2.0 * centroid[i] - worst.x[i];
    const double fr = eval(reflected);

    if (fr < simplex[0].fx) {
      // try to expand further along the same direction
      std::vector<double> expanded(dim);
      for (std::size_t i = 0; i < dim; ++i) expanded[i] = centroid[i] + 2.0 * (reflected[i] - centroid[i]);
      if (evals < max_evals) {
        const double fe = eval(expanded);
        simplex.back() = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
      } else {
        simplex.back() = {reflected, fr};
      }
    } else if (fr < simplex[dim - 1].fx) {
      simplex.back() = {reflected, fr};
    } else {
      // contraction toward the centroid, from the better of worst/reflected
      const bool outside = fr < worst.fx;
      const std::vector<double>& anchor = outside ? reflected : worst.x;
      std::vector<double> contracted(dim);
      for (std::size_t i = 0; i < dim; ++i) contracted[i] = centroid[i] + 0.5 * (anchor[i] - centroid[i]);
      if (evals >= max_evals) break;
      const double fc = eval(contracted);
      if (fc < std::min(fr, worst.fx)) {
        simplex.back() = {contracted, fc};
      } else {
        // shrink everything toward the best vertex
        for (std::size_t v = 1; v < simplex.size() && evals < max_evals; ++v) {
          for (std::size_t i = 0; i < dim; ++i) {
            simplex[v].x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
          }
          simplex[v].fx = eval(simplex[v].x);
        }
      }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
  }

  std::sort(simplex.begin(), simplex.end(), by_value);
  return {simplex[0].x, simplex[0].fx, evals};
}

/// Outcome of a multi-start search.
struct OptimizationRun {
  std::vector<double> best_params;
  double best_value = 0.0;
  long total_evaluations = 0;
  /// Best value seen after each restart (non-increasing, length = runs);
  /// lets experiments read off "best after r runs" without re-running.
  std::vector<double> best_by_run;
};

/// Start box for the angle parameters.
inline constexpr double kStartBoxLow = 0.0;
inline constexpr double kStartBoxHigh = std::numbers::pi;

/// Repeated local descents from uniform random points in [0, pi]^dim.
/// Restart r uses the sub-seed mix_seed(seed, r), so any prefix of the runs
/// is reproducible independently of how many follow.
inline OptimizationRun multi_start(const Objective& f, int dim, int runs,
                                   long evals_per_run = kDefaultEvalsPerRun,
                                   double tol = kDefaultSimplexTol,
                                   std::uint64_t seed = 0) {
  if (dim < 1) throw std::invalid_argument("multi_start: dimension must be positive");
  if (runs < 1) throw std::invalid_argument("multi_start: runs must be positive");
  OptimizationRun out;
  out.best_by_run.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<double> start(static_cast<std::size_t>(dim));
    for (double& x : start) x = rng.uniform(kStartBoxLow, kStartBoxHigh);
    LocalResult local = minimize_local(f, std::move(start), evals_per_run, tol);
    out.total_evaluations += local.evaluations;
    if (r == 0 || local.value < out.best_value) {
      out.best_value = local.value;
      out.best_params = std::move(local.params);
    }
    out.best_by_run.push_back(out.best_value);
  }
  return out;
}

}  // namespace qmld
