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

#ifndef OPENQDYN_OPTIMIZE_HPP_
#define OPENQDYN_OPTIMIZE_HPP_

#include <functional>
#include <vector>

namespace openqdyn::optimize {

struct NelderMeadOptions {
  double initialStep = 0.05;
  double fTolerance = 1e-12;  // stop when the simplex spread in f falls below
  double xTolerance = 1e-12;  // ... and its diameter falls below this
  int maxEvaluations = 4000;
  int restarts = 2;           // fresh simplices around the incumbent
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

/// Derivative-free minimization with the standard reflection / expansion /
/// contraction / shrink coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelderMead(const std::function<double(const std::vector<double>&)>& f,
                            std::vector<double> start, const NelderMeadOptions& opt = {});

}  // namespace openqdyn::optimize

#endif  // OPENQDYN_OPTIMIZE_HPP_
