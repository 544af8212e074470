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

// Exhaustive maximum-weight matching over all injections of the smaller side
// into the larger one.

#ifndef PANOTRACK_TESTS_ORACLES_ASSIGNMENT_ORACLE_HPP_
#define PANOTRACK_TESTS_ORACLES_ASSIGNMENT_ORACLE_HPP_

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using Table = std::vector<std::vector<double>>;

inline double best_assignment_total(const Table& sim) {
  const std::size_t rows = sim.size();
  const std::size_t cols = rows ? sim[0].size() : 0;
  if (rows == 0 || cols == 0) return 0.0;
  const bool wide = cols >= rows;
  const std::size_t small = wide ? rows : cols;
  const std::size_t large = wide ? cols : rows;
  // Permute the larger side; its first `small` entries pair with 0..small-1.
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t k = 0; k < small; ++k) {
      total += wide ? sim[k][perm[k]] : sim[perm[k]][k];
    }
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracle

#endif  // PANOTRACK_TESTS_ORACLES_ASSIGNMENT_ORACLE_HPP_
