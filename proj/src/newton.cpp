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

#include "nhoc/newton.hpp"

#include <cmath>

#include "nhoc/geometry.hpp"

namespace nhoc {

NewtonResult newton_solve(const ResidualFn& residual,
                          const JacobianFn& jacobian, Vec guess,
                          const NewtonOptions& options) {
  NewtonResult out;
  out.solution = std::move(guess);
  Vec r = residual(out.solution);
  out.residual_norm = max_abs(r);

  while (true) {
    if (!std::isfinite(out.residual_norm)) {
      throw NewtonDivergence("newton: non-finite residual", out.residual_norm,
                             out.iterations);
    }
    if (out.residual_norm <= options.tol) return out;
    if (out.iterations >= options.max_iters) {
      throw NewtonDivergence(
          "newton: no convergence after " + std::to_string(out.iterations) +
              " iterations (residual " + std::to_string(out.residual_norm) +
              ")",
          out.residual_norm, out.iterations);
    }

    const Mat jac =
        jacobian ? jacobian(out.solution)
                 : geometry::central_difference_jacobian(
                       residual, out.solution, options.fd_step);
    const Eigen::FullPivLU<Mat> lu(jac);
    if (!lu.isInvertible()) {
      throw SingularJacobian("newton: singular Jacobian at iteration " +
                             std::to_string(out.iterations));
    }
    out.solution -= lu.solve(r);
    ++out.iterations;
    r = residual(out.solution);
    out.residual_norm = max_abs(r);
  }
}

}  // namespace nhoc
