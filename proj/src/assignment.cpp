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

#include "panotrack/assignment.hpp"

#include <algorithm>
#include <limits>

namespace panotrack {
namespace {

// Minimum-cost assignment of every row of an n x m cost matrix (n <= m).
// 1-based potentials formulation; returns col_of_row (0-based).
std::vector<std::size_t> min_cost_rows(const Matrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> row_of_col(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of_col[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (row_of_col[j] != 0) col_of_row[row_of_col[j] - 1] = j - 1;
  }
  return col_of_row;
}

}  // namespace

Assignment solve_assignment(const Matrix& similarity) {
  Assignment pairs;
  if (similarity.empty()) return pairs;

  const bool transposed = similarity.rows() > similarity.cols();
  const std::size_t n = transposed ? similarity.cols() : similarity.rows();
  const std::size_t m = transposed ? similarity.rows() : similarity.cols();
  Matrix cost(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      cost(r, c) = transposed ? -similarity(c, r) : -similarity(r, c);
    }
  }

  const std::vector<std::size_t> col_of_row = min_cost_rows(cost);
  pairs.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (transposed) {
      pairs.emplace_back(col_of_row[r], r);
    } else {
      pairs.emplace_back(r, col_of_row[r]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace panotrack
