// Copyright 2026 The openqdyn Authors
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

#include "openqdyn/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace openqdyn::optimize {

namespace {

using Point = std::vector<double>;

Point affine(const Point& a, const Point& b, double t) {  // a + t (b - a)
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

}  // namespace

NelderMeadResult nelderMead(const std::function<double(const std::vector<double>&)>& f,
                            std::vector<double> start, const NelderMeadOptions& opt) {
  const std::size_t n = start.size();
  NelderMeadResult best{start, f(start), 1};

  for (int round = 0; round <= opt.restarts && best.evaluations < opt.maxEvaluations; ++round) {
    const double step = opt.initialStep / std::pow(4.0, round);
    std::vector<Point> simplex(n + 1, best.x);
    std::vector<double> values(n + 1, best.value);
    for (std::size_t i = 0; i < n; ++i) {
      simplex[i + 1][i] += step;
      values[i + 1] = f(simplex[i + 1]);
      ++best.evaluations;
    }
    std::vector<std::size_t> order(n + 1);
    while (best.evaluations < opt.maxEvaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
      const std::size_t lo = order.front();
      const std::size_t hi = order.back();
      const std::size_t second = order[n - 1];

      double diameter = 0.0;
      for (std::size_t k = 0; k <= n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[lo][i]));
      if (values[hi] - values[lo] <= opt.fTolerance && diameter <= opt.xTolerance) break;
      if (diameter <= 1e-15) break;

      Point centroid(n, 0.0);
      for (std::size_t k = 0; k <= n; ++k) {
        if (k == hi) continue;
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
      }
      const Point reflected = affine(centroid, simplex[hi], -1.0);
      const double fr = f(reflected);
      ++best.evaluations;
      if (fr < values[lo]) {
        const Point expanded = affine(centroid, simplex[hi], -2.0);
        const double fe = f(expanded);
        ++best.evaluations;
        if (fe < fr) {
          simplex[hi] = expanded;
          values[hi] = fe;
        } else {
          simplex[hi] = reflected;
          values[hi] = fr;
        }
        continue;
      }
      if (fr < values[second]) {
        simplex[hi] = reflected;
        values[hi] = fr;
        continue;
      }
      const bool outside = fr < values[hi];
      const Point contracted = affine(centroid, outside ? reflected : simplex[hi], 0.5);
      const double fc = f(contracted);
      ++best.evaluations;
      if (fc < (outside ? fr : values[hi])) {
        simplex[hi] = contracted;
        values[hi] = fc;
        continue;
      }
      for (std::size_t k = 0; k <= n; ++k) {
        if (k == lo) continue;
        simplex[k] = affine(simplex[lo], simplex[k], 0.5);
        values[k] = f(simplex[k]);
        ++best.evaluations;
      }
    }
    const auto it = std::min_element(values.begin(), values.end());
    if (*it <= best.value) {
      best.value = *it;
      best.x = simplex[static_cast<std::size_t>(it - values.begin())];
    }
  }
  return best;
}

}  // namespace openqdyn::optimize
