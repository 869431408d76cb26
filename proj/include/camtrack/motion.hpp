// Copyright 2026 The camtrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CAMTRACK__MOTION_HPP_
#define CAMTRACK__MOTION_HPP_

#include "camtrack/types.hpp"

#include <Eigen/Core>

namespace camtrack
{

enum class MotionModel { kCtra, kBicycle };

/// State layout shared by both motion models:
///   [x, y, z, w, l, h, v, a, yaw, turn]
/// `turn` is the yaw rate (rad/s) for CTRA and the steering angle (rad) for
/// the bicycle model. v is the speed along the heading; for the bicycle model
/// it is the rear-axle speed.
namespace state_index
{
enum : Eigen::Index { kX = 0, kY, kZ, kW, kL, kH, kSpeed, kAccel, kYaw, kTurn };
}

inline constexpr Eigen::Index kStateDim = 10;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;

struct MotionParams
{
  /// Below this |yaw rate| the CTRA step uses the straight-line branch.
  double min_yaw_rate{1e-4};
  /// Below this |curvature| (1/m) the bicycle step uses the straight-line branch.
  double min_curvature{1e-4};
  /// Distance from box center to rear axle as a fraction of box length. The
  /// wheelbase is twice that distance.
  double rear_axle_ratio{0.4};
};

/// Per-component diagonal variances in SI units squared.
struct NoiseProfile
{
  double position{0.1};
  double extent{0.01};
  double speed{0.5};
  double acceleration{0.5};
  double yaw{0.01};
  double turn{0.05};

  StateMatrix diagonal() const;
};

struct KinematicState
{
  MotionModel model{MotionModel::kCtra};
  StateVector mean{StateVector::Zero()};
  StateMatrix covariance{StateMatrix::Identity()};
};

/// Closed-form constant turn rate and acceleration step.
StateVector ctra_transition(const StateVector & s, double dt, const MotionParams & params = {});

/// Kinematic bicycle step about the rear axle with constant steering angle,
/// integrated exactly along the traveled arc.
StateVector bicycle_transition(const StateVector & s, double dt, const MotionParams & params = {});

StateVector transition(
  MotionModel model, const StateVector & s, double dt, const MotionParams & params = {});

/// Analytic Jacobian of `transition` with respect to the state.
StateMatrix transition_jacobian(
  MotionModel model, const StateVector & s, double dt, const MotionParams & params = {});

KinematicState initial_state(
  const Box3D & detection, MotionModel model, const NoiseProfile & initial_covariance);

/// EKF predict: mean through the motion model, P <- F P F^T + Q.
void predict(
  KinematicState & state, double dt, const NoiseProfile & process_noise,
  const MotionParams & params = {});

/// Box described by the state's pose and extents.
Box3D state_box(const KinematicState & state, Category category, double score);

/// Isotropic measurement noise: R = multiplier * I.
struct MeasurementNoise
{
  double multiplier{0.0};

  Eigen::MatrixXd matrix(Eigen::Index dim) const
  {
    return multiplier * Eigen::MatrixXd::Identity(dim, dim);
  }
};

/// Score- and stage-dependent noise: 10^stage * (1 - score)^2.
/// Throws Error(kInvalidArgument) when score is outside [0, 1].
MeasurementNoise measurement_noise(int stage, double score);

/// Ridge added to a singular innovation covariance.
inline constexpr double kInnovationRegularization = 1e-9;

struct UpdateOutcome
{
  bool regularized{false};
};

/// Measurement vector built from a detection: (x, y, z, w, l, h, yaw), plus
/// (vx, vy) when the detection carries a velocity.
Eigen::VectorXd measurement_vector(const Box3D & detection);

/// EKF update with Joseph-form covariance and wrapped yaw innovation. With
/// `flip_yaw` set, a measured yaw more than pi/2 away from the prediction is
/// turned around before computing the innovation.
UpdateOutcome update(
  KinematicState & state, const Box3D & detection, const MeasurementNoise & noise,
  bool flip_yaw = false);

}  // namespace camtrack

#endif  // CAMTRACK__MOTION_HPP_
