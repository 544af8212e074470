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

#ifndef PANOTRACK_TRACKLET_HPP_
#define PANOTRACK_TRACKLET_HPP_

#include <cstdint>
#include <vector>

#include "panotrack/geometry.hpp"
#include "panotrack/motion.hpp"
#include "panotrack/semantic.hpp"

namespace panotrack {

using TrackId = std::uint32_t;

enum class Lifecycle { kCandidate, kActive };

// Motion model of one class group, with the filter optionally disabled.
struct MotionModel {
  KalmanParams params;
  bool use_kalman = true;

  KalmanState predict(const KalmanState& s) const;
  KalmanState correct(const KalmanState& s, const Box3D& detection) const;
};

struct Tracklet {
  TrackId track_id = 0;
  ClassGroup group = ClassGroup::kVehicles;
  KalmanState kstate;
  Lifecycle lifecycle = Lifecycle::kCandidate;
  int hit_streak = 0;
  int time_since_update = 0;
  int age = 0;
  std::vector<ClassId> class_votes;
  double last_score = 0.0;

  // New candidate seeded by its birth detection (counts as the first hit).
  static Tracklet born(TrackId id, ClassGroup group, const Box3D& detection,
                       const MotionModel& model);

  // Box of the current state, labeled with the majority class.
  Box3D box() const;

  // Advances the state by one frame (age and time since update included).
  void predict(const MotionModel& model);
  void on_match(const Box3D& detection, const MotionModel& model);
  void on_miss();
};

// Most common class among the votes; ties go to the most recent vote.
ClassId majority_class(const Tracklet& t);

}  // namespace panotrack

#endif  // PANOTRACK_TRACKLET_HPP_
