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

// Static SVG figures. Output depends only on the input values, so reruns
// produce identical files.

#ifndef PANOTRACK_PLOT_HPP_
#define PANOTRACK_PLOT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "panotrack/metrics.hpp"
#include "panotrack/pipeline.hpp"

namespace panotrack {

// Bird's-eye trajectories, one polyline per track, colored by track. An
// empty summary yields the axes alone.
std::string trajectory_svg(const SequenceSummary& summary);

// Grouped bars of LSTQ per row (class or aggregate); one bar per run.
// `runs` pairs a legend label with that run's report rows.
std::string lstq_bar_svg(
    const std::vector<std::pair<std::string, std::vector<ReportRow>>>& runs);

}  // namespace panotrack

#endif  // PANOTRACK_PLOT_HPP_
