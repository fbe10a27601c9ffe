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

#ifndef NHOC_TYPES_HPP_
#define NHOC_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nhoc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Raised when the blocks handed to an operation disagree in size.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_size(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": size " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

inline double max_abs(const Vec& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace nhoc

#endif  // NHOC_TYPES_HPP_
