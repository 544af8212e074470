/* Copyright 2026 The panotrack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PANOTRACK_ASSIGNMENT_HPP_
#define PANOTRACK_ASSIGNMENT_HPP_

#include <cstddef>
#include <utility>
#include <vector>

namespace panotrack {

// Dense row-major matrix used for affinities.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using Assignment = std::vector<std::pair<std::size_t, std::size_t>>;

// Maximum-total-similarity matching of min(rows, cols) pairs (Hungarian
// method on the negated matrix, shortest augmenting paths with potentials).
// Pairs are returned sorted by row. Among equal-cost alternatives the
// augmenting search prefers lower column indices, so results are
// deterministic.
Assignment solve_assignment(const Matrix& similarity);

}  // namespace panotrack

#endif  // PANOTRACK_ASSIGNMENT_HPP_
