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

// Brute-force association score: materializes every tube as an explicit set
// of (frame, point) pairs and intersects every gt tube with every predicted
// tube. Per-frame size filtering removes the small gt instance-frames from
// both sides.

#ifndef PANOTRACK_TESTS_ORACLES_LSTQ_ORACLE_HPP_
#define PANOTRACK_TESTS_ORACLES_LSTQ_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

struct LabeledFrame {
  std::vector<std::uint32_t> semantic;  // raw ids
  std::vector<std::uint32_t> instance;
};

// Learning classes of the raw ids the tests use.
inline int learning_of(std::uint32_t raw) {
  switch (raw) {
    case 0: return 0;
    case 10: return 1;
    case 11: return 2;
    case 15: return 3;
    case 18: return 4;
    case 20: return 5;
    case 30: return 6;
    case 31: return 7;
    case 32: return 8;
    case 40: return 9;
    case 50: return 13;
    case 70: return 15;
    default: throw std::invalid_argument("oracle: unsupported raw id");
  }
}

inline bool things(int learning) { return learning >= 1 && learning <= 8; }

using Element = std::pair<std::size_t, std::size_t>;  // frame, point

inline double brute_force_s_assoc(const std::vector<LabeledFrame>& gt,
                                  const std::vector<LabeledFrame>& pred,
                                  std::size_t min_points) {
  std::map<std::pair<int, std::uint32_t>, std::set<Element>> gt_tubes;
  std::map<std::uint32_t, std::set<Element>> pred_tubes;
  for (std::size_t f = 0; f < gt.size(); ++f) {
    std::map<std::pair<int, std::uint32_t>, std::size_t> size;
    for (std::size_t i = 0; i < gt[f].semantic.size(); ++i) {
      const int c = learning_of(gt[f].semantic[i]);
      if (things(c) && gt[f].instance[i] != 0) ++size[{c, gt[f].instance[i]}];
    }
    for (std::size_t i = 0; i < gt[f].semantic.size(); ++i) {
      const int gc = learning_of(gt[f].semantic[i]);
      if (gc == 0) continue;
      const bool gt_inst = things(gc) && gt[f].instance[i] != 0;
      if (gt_inst && size[{gc, gt[f].instance[i]}] < min_points) continue;
      if (gt_inst) gt_tubes[{gc, gt[f].instance[i]}].insert({f, i});
      const int pc = learning_of(pred[f].semantic[i]);
      if (things(pc) && pred[f].instance[i] != 0) {
        pred_tubes[pred[f].instance[i]].insert({f, i});
      }
    }
  }
  if (gt_tubes.empty()) return pred_tubes.empty() ? 1.0 : 0.0;

  double total = 0.0;
  for (const auto& [gk, t] : gt_tubes) {
    double inner = 0.0;
    for (const auto& [pk, s] : pred_tubes) {
      std::vector<Element> both;
      std::set_intersection(t.begin(), t.end(), s.begin(), s.end(),
                            std::back_inserter(both));
      if (both.empty()) continue;
      const double tpa = static_cast<double>(both.size());
      const double iou =
          tpa / (static_cast<double>(s.size()) + static_cast<double>(t.size()) - tpa);
      inner += tpa * iou;
    }
    total += inner / static_cast<double>(t.size());
  }
  return total / static_cast<double>(gt_tubes.size());
}

}  // namespace oracle

#endif  // PANOTRACK_TESTS_ORACLES_LSTQ_ORACLE_HPP_
