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

// Constant-velocity Kalman filter over box state
//   x = [cx, cy, cz, theta, l, w, h, vx, vy, vz]
// observed through z = [cx, cy, cz, theta, l, w, h]. One step is one LiDAR
// frame, so velocities are in meters per frame.

#ifndef PANOTRACK_MOTION_HPP_
#define PANOTRACK_MOTION_HPP_

#include <Eigen/Core>

#include "panotrack/geometry.hpp"
#include "panotrack/semantic.hpp"

namespace panotrack {

inline constexpr int kStateDim = 10;
inline constexpr int kMeasDim = 7;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;
using MeasVector = Eigen::Matrix<double, kMeasDim, 1>;
using MeasMatrix = Eigen::Matrix<double, kMeasDim, kMeasDim>;
using ObservationMatrix = Eigen::Matrix<double, kMeasDim, kStateDim>;

// Floor applied to l, w, h after every update.
inline constexpr double kMinDimension = 0.01;

struct KalmanState {
  StateVector x = StateVector::Zero();
  StateMatrix P = StateMatrix::Identity();

  // Box view of the first seven state components.
  Box3D box() const;
};

struct Measurement {
  MeasVector z = MeasVector::Zero();

  static Measurement from_box(const Box3D& box);
};

// Measurement bias correction, added to (cz, h) before the update.
struct ZOffset {
  double cz = 0.0;
  double h = 0.0;
};

struct KalmanParams {
  StateMatrix F;
  ObservationMatrix H;
  StateMatrix Q;
  MeasMatrix R;
  StateMatrix P0;
  ZOffset z_offset;

  // Builds F/H from the constant-velocity model and the diagonal noise terms.
  static KalmanParams from_diagonals(const StateVector& p0_diag,
                                     const StateVector& q_diag,
                                     const MeasVector& r_diag, ZOffset offset);
};

// Tuned per-group tables: P0, Q, R diagonals and the z offsets.
KalmanParams params_for_group(ClassGroup group);

// Identity plus unit coupling of (cx, vx), (cy, vy), (cz, vz).
StateMatrix constant_velocity_transition();
// Selects the first seven state components.
ObservationMatrix box_observation();

KalmanState init(const Box3D& detection, const KalmanParams& params);

KalmanState predict(const KalmanState& state, const KalmanParams& params);

// Expects an offset-corrected measurement. Throws FilterError if the
// innovation covariance cannot be factorized.
KalmanState update(const KalmanState& state, const Measurement& z,
                   const KalmanParams& params);

// Shifts cz and h by the group's offsets. Throws InvalidInputError when the
// corrected height is not positive.
Measurement apply_offsets(const Measurement& z, const KalmanParams& params);

// Same correction applied to a box (center z and height).
Box3D apply_offsets(const Box3D& box, const KalmanParams& params);

}  // namespace panotrack

#endif  // PANOTRACK_MOTION_HPP_
