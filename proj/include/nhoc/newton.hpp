// Copyright 2026 The nhoc Authors
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

#ifndef NHOC_NEWTON_HPP_
#define NHOC_NEWTON_HPP_

#include <functional>
#include <stdexcept>
#include <string>

#include "nhoc/types.hpp"

namespace nhoc {

// Iteration cap reached or a non-finite residual.
class NewtonDivergence : public std::runtime_error {
 public:
  NewtonDivergence(const std::string& what, double last_residual,
                   int iterations)
      : std::runtime_error(what),
        last_residual_(last_residual),
        iterations_(iterations) {}

  double last_residual() const { return last_residual_; }
  int iterations() const { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

class SingularJacobian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iters = 50;
  // Forward/backward step for the central-difference Jacobian fallback.
  double fd_step = 1e-7;
};

struct NewtonResult {
  Vec solution;
  int iterations = 0;
  double residual_norm = 0.0;  // infinity norm
};

using ResidualFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<Mat(const Vec&)>;

// Dense Newton iteration until |F(x)|_inf <= tol. An empty `jacobian` selects
// central differences with step options.fd_step.
NewtonResult newton_solve(const ResidualFn& residual,
                          const JacobianFn& jacobian, Vec guess,
                          const NewtonOptions& options = {});

}  // namespace nhoc

#endif  // NHOC_NEWTON_HPP_
