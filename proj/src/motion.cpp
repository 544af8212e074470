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

#include "panotrack/motion.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Cholesky>

#include "panotrack/errors.hpp"

namespace panotrack {
namespace {

enum StateIndex { kCx = 0, kCy, kCz, kTheta, kL, kW, kH, kVx, kVy, kVz };

StateVector diag10(double a0, double a1, double a2, double a3, double a4,
                   double a5, double a6, double a7, double a8, double a9) {
  StateVector v;
  v << a0, a1, a2, a3, a4, a5, a6, a7, a8, a9;
  return v;
}

MeasVector diag7(double a0, double a1, double a2, double a3, double a4,
                 double a5, double a6) {
  MeasVector v;
  v << a0, a1, a2, a3, a4, a5, a6;
  return v;
}

}  // namespace

Box3D KalmanState::box() const {
  Box3D b;
  b.cx = x(kCx);
  b.cy = x(kCy);
  b.cz = x(kCz);
  b.theta = x(kTheta);
  b.l = x(kL);
  b.w = x(kW);
  b.h = x(kH);
  return b;
}

Measurement Measurement::from_box(const Box3D& box) {
  Measurement m;
  m.z << box.cx, box.cy, box.cz, box.theta, box.l, box.w, box.h;
  return m;
}

StateMatrix constant_velocity_transition() {
  StateMatrix F = StateMatrix::Identity();
  F(kCx, kVx) = 1.0;
  F(kCy, kVy) = 1.0;
  F(kCz, kVz) = 1.0;
  return F;
}

ObservationMatrix box_observation() {
  ObservationMatrix H = ObservationMatrix::Zero();
  for (int i = 0; i < kMeasDim; ++i) H(i, i) = 1.0;
  return H;
}

KalmanParams KalmanParams::from_diagonals(const StateVector& p0_diag,
                                          const StateVector& q_diag,
                                          const MeasVector& r_diag,
                                          ZOffset offset) {
  if ((p0_diag.array() < 0).any() || (q_diag.array() < 0).any() ||
      (r_diag.array() < 0).any()) {
    throw ConfigError("Kalman P0, Q and R diagonals must be non-negative");
  }
  KalmanParams p;
  p.F = constant_velocity_transition();
  p.H = box_observation();
  p.P0 = p0_diag.asDiagonal();
  p.Q = q_diag.asDiagonal();
  p.R = r_diag.asDiagonal();
  p.z_offset = offset;
  return p;
}

KalmanParams params_for_group(ClassGroup group) {
  const StateVector p0 =
      diag10(10, 10, 10, 10, 10, 10, 10, 1e4, 1e4, 1e4);
  const MeasVector r = diag7(0.1, 0.1, 0.1, 1e4, 0.1, 0.1, 0.1);
  switch (group) {
    case ClassGroup::kVehicles:
      return KalmanParams::from_diagonals(
          p0, diag10(0, 0, 0, 1, 1, 1, 0.3, 0.01, 0.01, 0.01), r,
          {.cz = 0.05, .h = -0.1});
    case ClassGroup::kBikes:
      return KalmanParams::from_diagonals(
          p0, diag10(0, 0, 0, 1, 1, 1, 0.3, 0.01, 0.01, 0.01), r,
          {.cz = -0.025, .h = 0.0625});
    case ClassGroup::kPedestrian:
      return KalmanParams::from_diagonals(
          p0, diag10(0, 0, 0, 1, 0.4, 0.4, 0.4, 0.01, 0.01, 0.01), r,
          {.cz = 0.028125, .h = -0.1});
  }
  throw ConfigError("unknown class group");
}

KalmanState init(const Box3D& detection, const KalmanParams& params) {
  KalmanState s;
  s.x << detection.cx, detection.cy, detection.cz, detection.theta,
      detection.l, detection.w, detection.h, 0.0, 0.0, 0.0;
  s.P = params.P0;
  return s;
}

KalmanState predict(const KalmanState& state, const KalmanParams& params) {
  KalmanState out;
  out.x = params.F * state.x;
  out.P = params.F * state.P * params.F.transpose() + params.Q;
  return out;
}

KalmanState update(const KalmanState& state, const Measurement& z,
                   const KalmanParams& params) {
  const MeasVector innovation = z.z - params.H * state.x;
  const MeasMatrix S = params.H * state.P * params.H.transpose() + params.R;
  const Eigen::LLT<MeasMatrix> llt(S);
  if (llt.info() != Eigen::Success) {
    throw FilterError("innovation covariance is not positive definite");
  }
  // K = P H^T S^-1, computed as (S^-1 H P)^T since P and S are symmetric.
  const Eigen::Matrix<double, kStateDim, kMeasDim> K =
      llt.solve(params.H * state.P).transpose();

  KalmanState out;
  out.x = state.x + K * innovation;
  out.P = (StateMatrix::Identity() - K * params.H) * state.P;
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  for (int i : {kL, kW, kH}) out.x(i) = std::max(out.x(i), kMinDimension);
  return out;
}

Measurement apply_offsets(const Measurement& z, const KalmanParams& params) {
  Measurement out = z;
  out.z(kCz) += params.z_offset.cz;
  out.z(kH) += params.z_offset.h;
  if (!(out.z(kH) > 0.0)) {
    std::ostringstream msg;
    msg << "measurement height " << z.z(kH) << " becomes " << out.z(kH)
        << " after offset correction";
    throw InvalidInputError(msg.str());
  }
  return out;
}

Box3D apply_offsets(const Box3D& box, const KalmanParams& params) {
  const Measurement m = apply_offsets(Measurement::from_box(box), params);
  Box3D out = box;
  out.cz = m.z(kCz);
  out.h = m.z(kH);
  return out;
}

}  // namespace panotrack
