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

// LiDAR Segmentation and Tracking Quality.
//
//   S_cls   = mean over classes of point IoU TP / (TP + FP + FN), accumulated
//             over every frame.
//   S_assoc = 1/|T| sum_t 1/|t| sum_{s : s ∩ t != 0} |s ∩ t| * IoU(s, t),
//             where t ranges over ground-truth 4D tubes and s over predicted
//             tubes, IoU(s, t) = |s ∩ t| / (|s| + |t| - |s ∩ t|).
//   LSTQ    = sqrt(S_assoc * S_cls).
//
// Labels are raw SemanticKITTI ids; they are mapped to the 19 learning
// classes and points whose ground truth maps to 0 are ignored entirely.
// Ground-truth tubes are keyed by (learning class, instance id), predicted
// tubes by instance id over Things-class points. Ground-truth instances
// smaller than `min_points` are dropped from the association term only.

#ifndef PANOTRACK_METRICS_HPP_
#define PANOTRACK_METRICS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "panotrack/frame.hpp"
#include "panotrack/semantic.hpp"

namespace panotrack {

enum class SizeFilter {
  kPerFrame,  // drop gt instance-frames with fewer than min_points points
  kPerTube,   // drop whole gt tubes with fewer than min_points points
};

struct LstqOptions {
  std::size_t min_points = 1;
  SizeFilter filter = SizeFilter::kPerFrame;
};

struct ClassScore {
  LearningClass cls = 0;
  std::optional<double> iou;      // S_cls term; absent if class never seen
  std::optional<double> s_assoc;  // absent for classes without gt tubes
  std::optional<double> lstq;     // present when both terms are
  std::size_t tubes = 0;
};

struct ScoreRow {
  double s_assoc = 0.0;
  double s_cls = 0.0;
  double lstq = 0.0;
};

struct LstqReport {
  LstqOptions options;
  std::vector<ClassScore> classes;  // ascending learning class
  ScoreRow overall;                 // S_cls over all present classes
  ScoreRow things;                  // S_cls over present Things classes
  std::size_t num_tubes = 0;
};

// Mergeable sufficient statistics. Tube keys carry a sequence tag so that
// accumulators of different sequences combine without id clashes.
class LstqAccumulator {
 public:
  explicit LstqAccumulator(LstqOptions options = {},
                           std::uint32_t sequence_tag = 0);

  // Throws EvaluationError if gt and pred differ in point count.
  void add_frame(const PanopticLabels& gt, const PanopticLabels& pred);

  // Associative and commutative; options must match.
  void merge(const LstqAccumulator& other);

  LstqReport report() const;

 private:
  using GtKey = std::tuple<std::uint32_t, LearningClass, InstanceId>;
  using PredKey = std::pair<std::uint32_t, InstanceId>;

  LstqOptions options_;
  std::uint32_t tag_;
  std::array<std::array<std::uint64_t, kNumLearningClasses>,
             kNumLearningClasses>
      confusion_{};  // [gt][pred]
  std::map<GtKey, std::uint64_t> gt_size_;
  std::map<PredKey, std::uint64_t> pred_size_;
  std::map<std::pair<GtKey, PredKey>, std::uint64_t> inter_;
};

struct ClassIou {
  std::array<std::optional<double>, kNumLearningClasses> per_class;
  double mean = 0.0;
};

// Convenience wrappers over one stream of frames (one sequence).
ClassIou s_cls(std::span<const PanopticLabels> gt,
               std::span<const PanopticLabels> pred);
double s_assoc(std::span<const PanopticLabels> gt,
               std::span<const PanopticLabels> pred, LstqOptions options);
LstqReport lstq(std::span<const PanopticLabels> gt,
                std::span<const PanopticLabels> pred, LstqOptions options);

// Plain-text table: one row per class plus Things / All aggregates.
std::string format_report_text(const LstqReport& report);
// One `key=value` record per row, full precision.
std::string format_report_kv(const LstqReport& report);

struct ReportRow {
  std::string row;  // "things", "all" or a class name
  std::optional<double> lstq, s_assoc, s_cls;
  std::size_t min_points = 0;
};
std::vector<ReportRow> parse_report_kv(std::string_view text);

}  // namespace panotrack

#endif  // PANOTRACK_METRICS_HPP_
