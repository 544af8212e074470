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

#include "panotrack/tracklet.hpp"

#include <algorithm>
#include <unordered_map>

namespace panotrack {

KalmanState MotionModel::predict(const KalmanState& s) const {
  if (!use_kalman) return s;
  return panotrack::predict(s, params);
}

KalmanState MotionModel::correct(const KalmanState& s,
                                 const Box3D& detection) const {
  if (use_kalman) {
    return panotrack::update(s, Measurement::from_box(detection), params);
  }
  // Without motion estimation the box simply follows its last detection.
  KalmanState held = init(detection, params);
  held.P = s.P;
  return held;
}

Tracklet Tracklet::born(TrackId id, ClassGroup group, const Box3D& detection,
                        const MotionModel& model) {
  Tracklet t;
  t.track_id = id;
  t.group = group;
  t.kstate = init(detection, model.params);
  t.lifecycle = Lifecycle::kCandidate;
  t.hit_streak = 1;
  t.time_since_update = 0;
  t.age = 1;
  t.class_votes.push_back(detection.class_id);
  t.last_score = detection.score;
  return t;
}

Box3D Tracklet::box() const {
  Box3D b = kstate.box();
  b.score = last_score;
  b.class_id = class_votes.empty() ? 0 : majority_class(*this);
  return b;
}

void Tracklet::predict(const MotionModel& model) {
  kstate = model.predict(kstate);
  ++age;
  ++time_since_update;
}

void Tracklet::on_match(const Box3D& detection, const MotionModel& model) {
  kstate = model.correct(kstate, detection);
  time_since_update = 0;
  ++hit_streak;
  class_votes.push_back(detection.class_id);
  last_score = detection.score;
}

void Tracklet::on_miss() { hit_streak = 0; }

ClassId majority_class(const Tracklet& t) {
  std::unordered_map<ClassId, int> counts;
  int best_count = 0;
  for (ClassId c : t.class_votes) best_count = std::max(best_count, ++counts[c]);
  // Walk backwards so the most recent of the tied classes wins.
  for (auto it = t.class_votes.rbegin(); it != t.class_votes.rend(); ++it) {
    if (counts[*it] == best_count) return *it;
  }
  return 0;
}

}  // namespace panotrack
