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

// Tracker configuration file. Sections name a class group or `ablation`;
// every key is optional and overrides TrackerConfig::defaults():
//
//   # comment
//   [vehicles]
//   det_split_threshold = 0.7
//   high_match_threshold = -0.2
//   low_match_threshold = -0.5
//   min_hits = 2
//   max_age = 7
//   death_age = 10
//   kalman_p0 = 10 10 10 10 10 10 10 10000 10000 10000
//   kalman_q = 0 0 0 1 1 1 0.3 0.01 0.01 0.01
//   kalman_r = 0.1 0.1 0.1 10000 0.1 0.1 0.1
//   offset_cz = 0.05
//   offset_h = -0.1
//
//   [ablation]
//   use_kalman = true            # false: boxes hold their last detection
//   matching_metric = diou       # or giou
//   use_candidate_state = true   # false: births are active immediately
//   use_score_split = true       # false: all detections go to the first pass

#ifndef PANOTRACK_CONFIG_HPP_
#define PANOTRACK_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "panotrack/tracker.hpp"

namespace panotrack {

// Throws ConfigError with the offending line number on malformed input.
TrackerConfig parse_config(std::string_view text);
TrackerConfig load_config(const std::filesystem::path& path);

// Complete, round-trippable rendering of `config`.
std::string format_config(const TrackerConfig& config);

std::string_view metric_name(SimilarityMetric m);
SimilarityMetric parse_metric(std::string_view name);

}  // namespace panotrack

#endif  // PANOTRACK_CONFIG_HPP_
