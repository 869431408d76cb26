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

#include "camtrack/motion.hpp"

#include "camtrack/error.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace camtrack
{

namespace si = state_index;

namespace
{

// Partial derivatives of one bicycle position output with respect to the
// intermediate quantities of the step.
struct BicyclePartials
{
  double yaw;       // explicit dependence on the initial heading
  double distance;  // traveled arc length
  double curvature;
  double offset;    // rear-axle offset r
  double end_yaw;   // heading after the step
};

struct BicycleStep
{
  double r;
  double curvature;
  double curvature_d_steer;
  double curvature_d_length;
  double distance;
  double yaw0;
  double yaw1;
  bool straight;
};

BicycleStep bicycle_step(const StateVector & s, double dt, const MotionParams & params)
{
  BicycleStep st{};
  const double length = s(si::kL);
  st.r = params.rear_axle_ratio * length;
  const double wheelbase = 2.0 * st.r;
  const double tan_steer = std::tan(s(si::kTurn));
  st.curvature = tan_steer / wheelbase;
  st.curvature_d_steer = (1.0 + tan_steer * tan_steer) / wheelbase;
  st.curvature_d_length = -st.curvature / length;
  st.distance = s(si::kSpeed) * dt + 0.5 * s(si::kAccel) * dt * dt;
  st.yaw0 = s(si::kYaw);
  st.yaw1 = st.yaw0 + st.curvature * st.distance;
  st.straight = std::abs(st.curvature) < params.min_curvature;
  return st;
}

}  // namespace

StateMatrix NoiseProfile::diagonal() const
{
  StateVector d;
  d << position, position, position, extent, extent, extent, speed, acceleration, yaw, turn;
  return d.asDiagonal();
}

StateVector ctra_transition(const StateVector & s, double dt, const MotionParams & params)
{
  const double v = s(si::kSpeed);
  const double a = s(si::kAccel);
  const double yaw = s(si::kYaw);
  const double w = s(si::kTurn);
  const double s0 = std::sin(yaw);
  const double c0 = std::cos(yaw);

  StateVector out = s;
  if (std::abs(w) < params.min_yaw_rate) {
    // Straight line with a first-order yaw-rate correction.
    const double dist = v * dt + 0.5 * a * dt * dt;
    const double lateral = v * dt * dt / 2.0 + a * dt * dt * dt / 3.0;
    out(si::kX) += dist * c0 - w * lateral * s0;
    out(si::kY) += dist * s0 + w * lateral * c0;
  } else {
    const double s1 = std::sin(yaw + w * dt);
    const double c1 = std::cos(yaw + w * dt);
    const double vw = v * w + a * w * dt;
    out(si::kX) += (vw * s1 + a * c1 - v * w * s0 - a * c0) / (w * w);
    out(si::kY) += (-vw * c1 + a * s1 + v * w * c0 - a * s0) / (w * w);
  }
  out(si::kSpeed) = v + a * dt;
  out(si::kYaw) = yaw + w * dt;
  return out;
}

StateVector bicycle_transition(const StateVector & s, double dt, const MotionParams & params)
{
  const BicycleStep st = bicycle_step(s, dt, params);
  const double s0 = std::sin(st.yaw0);
  const double c0 = std::cos(st.yaw0);
  const double s1 = std::sin(st.yaw1);
  const double c1 = std::cos(st.yaw1);

  double rear_x = s(si::kX) - st.r * c0;
  double rear_y = s(si::kY) - st.r * s0;
  if (st.straight) {
    const double bend = 0.5 * st.curvature * st.distance * st.distance;
    rear_x += st.distance * c0 - bend * s0;
    rear_y += st.distance * s0 + bend * c0;
  } else {
    rear_x += (s1 - s0) / st.curvature;
    rear_y -= (c1 - c0) / st.curvature;
  }

  StateVector out = s;
  out(si::kX) = rear_x + st.r * c1;
  out(si::kY) = rear_y + st.r * s1;
  out(si::kSpeed) = s(si::kSpeed) + s(si::kAccel) * dt;
  out(si::kYaw) = st.yaw1;
  return out;
}

StateVector transition(
  MotionModel model, const StateVector & s, double dt, const MotionParams & params)
{
  return model == MotionModel::kCtra ? ctra_transition(s, dt, params)
                                     : bicycle_transition(s, dt, params);
}

namespace
{

StateMatrix ctra_jacobian(const StateVector & s, double dt, const MotionParams & params)
{
  const double v = s(si::kSpeed);
  const double a = s(si::kAccel);
  const double yaw = s(si::kYaw);
  const double w = s(si::kTurn);
  const double s0 = std::sin(yaw);
  const double c0 = std::cos(yaw);
  const double t = dt;

  StateMatrix f = StateMatrix::Identity();
  double dx_dv, dx_da, dx_dyaw, dx_dw, dy_dv, dy_da, dy_dyaw, dy_dw;
  if (std::abs(w) < params.min_yaw_rate) {
    const double dist = v * t + 0.5 * a * t * t;
    const double lateral = v * t * t / 2.0 + a * t * t * t / 3.0;
    const double dx = dist * c0 - w * lateral * s0;
    const double dy = dist * s0 + w * lateral * c0;
    dx_dv = t * c0 - w * (t * t / 2.0) * s0;
    dx_da = (t * t / 2.0) * c0 - w * (t * t * t / 3.0) * s0;
    dx_dyaw = -dy;
    dx_dw = -lateral * s0;
    dy_dv = t * s0 + w * (t * t / 2.0) * c0;
    dy_da = (t * t / 2.0) * s0 + w * (t * t * t / 3.0) * c0;
    dy_dyaw = dx;
    dy_dw = lateral * c0;
  } else {
    const double s1 = std::sin(yaw + w * t);
    const double c1 = std::cos(yaw + w * t);
    const double w2 = w * w;
    const double vw = v * w + a * w * t;
    const double nx = vw * s1 + a * c1 - v * w * s0 - a * c0;
    const double ny = -vw * c1 + a * s1 + v * w * c0 - a * s0;
    dx_dv = (s1 - s0) / w;
    dx_da = (w * t * s1 + c1 - c0) / w2;
    dx_dyaw = -ny / w2;
    dx_dw = (v * (s1 - s0) + w * t * (v + a * t) * c1) / w2 - 2.0 * nx / (w2 * w);
    dy_dv = (c0 - c1) / w;
    dy_da = (-w * t * c1 + s1 - s0) / w2;
    dy_dyaw = nx / w2;
    dy_dw = (v * (c0 - c1) + w * t * (v + a * t) * s1) / w2 - 2.0 * ny / (w2 * w);
  }
  f(si::kX, si::kSpeed) = dx_dv;
  f(si::kX, si::kAccel) = dx_da;
  f(si::kX, si::kYaw) = dx_dyaw;
  f(si::kX, si::kTurn) = dx_dw;
  f(si::kY, si::kSpeed) = dy_dv;
  f(si::kY, si::kAccel) = dy_da;
  f(si::kY, si::kYaw) = dy_dyaw;
  f(si::kY, si::kTurn) = dy_dw;
  f(si::kSpeed, si::kAccel) = t;
  f(si::kYaw, si::kTurn) = t;
  return f;
}

StateMatrix bicycle_jacobian(const StateVector & s, double dt, const MotionParams & params)
{
  const BicycleStep st = bicycle_step(s, dt, params);
  const double s0 = std::sin(st.yaw0);
  const double c0 = std::cos(st.yaw0);
  const double s1 = std::sin(st.yaw1);
  const double c1 = std::cos(st.yaw1);
  const double k = st.curvature;
  const double d = st.distance;
  const double r = st.r;

  BicyclePartials px{};
  BicyclePartials py{};
  if (st.straight) {
    px = {r * s0 - d * s0 - 0.5 * k * d * d * c0, c0 - k * d * s0, -0.5 * d * d * s0, c1 - c0,
          -r * s1};
    py = {-r * c0 + d * c0 - 0.5 * k * d * d * s0, s0 + k * d * c0, 0.5 * d * d * c0, s1 - s0,
          r * c1};
  } else {
    px = {r * s0 - c0 / k, 0.0, -(s1 - s0) / (k * k), c1 - c0, c1 / k - r * s1};
    py = {-r * c0 - s0 / k, 0.0, (c1 - c0) / (k * k), s1 - s0, s1 / k + r * c1};
  }

  const double t = dt;
  StateMatrix f = StateMatrix::Identity();
  const auto fill_row = [&](Eigen::Index row, const BicyclePartials & p, bool is_yaw) {
    const double along = p.distance + p.end_yaw * k;
    const double bend = p.curvature + p.end_yaw * d;
    f(row, si::kYaw) = is_yaw ? 1.0 : p.yaw + p.end_yaw;
    f(row, si::kSpeed) = along * t;
    f(row, si::kAccel) = along * 0.5 * t * t;
    f(row, si::kTurn) = bend * st.curvature_d_steer;
    f(row, si::kL) = p.offset * params.rear_axle_ratio + bend * st.curvature_d_length;
  };
  fill_row(si::kX, px, false);
  fill_row(si::kY, py, false);
  // The heading row is the same chain rule applied to yaw1 = yaw0 + k * d.
  fill_row(si::kYaw, BicyclePartials{0.0, 0.0, 0.0, 0.0, 1.0}, true);
  f(si::kSpeed, si::kAccel) = t;
  return f;
}

}  // namespace

StateMatrix transition_jacobian(
  MotionModel model, const StateVector & s, double dt, const MotionParams & params)
{
  return model == MotionModel::kCtra ? ctra_jacobian(s, dt, params)
                                     : bicycle_jacobian(s, dt, params);
}

KinematicState initial_state(
  const Box3D & detection, MotionModel model, const NoiseProfile & initial_covariance)
{
  KinematicState state;
  state.model = model;
  state.mean.setZero();
  state.mean.head<3>() = detection.center;
  state.mean.segment<3>(si::kW) = detection.size;
  state.mean(si::kYaw) = detection.yaw;
  if (detection.velocity) {
    state.mean(si::kSpeed) = detection.velocity->x() * std::cos(detection.yaw) +
                             detection.velocity->y() * std::sin(detection.yaw);
  }
  state.covariance = initial_covariance.diagonal();
  return state;
}

void predict(
  KinematicState & state, double dt, const NoiseProfile & process_noise,
  const MotionParams & params)
{
  const StateMatrix f = transition_jacobian(state.model, state.mean, dt, params);
  state.mean = transition(state.model, state.mean, dt, params);
  state.mean(si::kYaw) = wrap_angle(state.mean(si::kYaw));
  state.covariance = f * state.covariance * f.transpose() + process_noise.diagonal();
  state.covariance = (0.5 * (state.covariance + state.covariance.transpose())).eval();
}

Box3D state_box(const KinematicState & state, Category category, double score)
{
  constexpr double kMinExtent = 1e-2;
  const auto & m = state.mean;
  const Eigen::Vector3d size = m.segment<3>(si::kW).cwiseMax(kMinExtent);
  const double v = m(si::kSpeed);
  const double yaw = m(si::kYaw);
  return Box3D(
    m.head<3>(), size, yaw, std::clamp(score, 0.0, 1.0), category,
    Eigen::Vector2d(v * std::cos(yaw), v * std::sin(yaw)));
}

MeasurementNoise measurement_noise(int stage, double score)
{
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "measurement noise: score outside [0, 1]");
  }
  if (stage < 0) {
    throw Error(ErrorCode::kInvalidArgument, "measurement noise: negative stage index");
  }
  const double miss = 1.0 - score;
  return MeasurementNoise{std::pow(10.0, stage) * miss * miss};
}

Eigen::VectorXd measurement_vector(const Box3D & detection)
{
  Eigen::VectorXd z(detection.velocity ? 9 : 7);
  z.head<3>() = detection.center;
  z.segment<3>(3) = detection.size;
  z(6) = detection.yaw;
  if (detection.velocity) {
    z.tail<2>() = *detection.velocity;
  }
  return z;
}

UpdateOutcome update(
  KinematicState & state, const Box3D & detection, const MeasurementNoise & noise, bool flip_yaw)
{
  const Eigen::VectorXd z = measurement_vector(detection);
  const Eigen::Index dim = z.size();
  const auto & m = state.mean;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, kStateDim);
  Eigen::VectorXd predicted(dim);
  for (Eigen::Index i = 0; i < 6; ++i) {
    h(i, i) = 1.0;
    predicted(i) = m(i);
  }
  h(6, si::kYaw) = 1.0;
  predicted(6) = m(si::kYaw);
  if (dim == 9) {
    const double c = std::cos(m(si::kYaw));
    const double s = std::sin(m(si::kYaw));
    const double v = m(si::kSpeed);
    predicted(7) = v * c;
    predicted(8) = v * s;
    h(7, si::kSpeed) = c;
    h(7, si::kYaw) = -v * s;
    h(8, si::kSpeed) = s;
    h(8, si::kYaw) = v * c;
  }

  Eigen::VectorXd innovation = z - predicted;
  innovation(6) = wrap_angle(innovation(6));
  if (flip_yaw && std::abs(innovation(6)) > 0.5 * std::numbers::pi) {
    innovation(6) = wrap_angle(innovation(6) + std::numbers::pi);
  }

  const Eigen::MatrixXd r = noise.matrix(dim);
  Eigen::MatrixXd s = h * state.covariance * h.transpose() + r;
  UpdateOutcome outcome;
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    s += kInnovationRegularization * Eigen::MatrixXd::Identity(dim, dim);
    llt.compute(s);
    outcome.regularized = true;
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kInternal, "innovation covariance is not positive definite");
    }
  }
  // K = P H^T S^-1, computed as (S^-1 H P)^T since P and S are symmetric.
  const Eigen::MatrixXd gain = llt.solve(h * state.covariance).transpose();

  state.mean += gain * innovation;
  state.mean(si::kYaw) = wrap_angle(state.mean(si::kYaw));

  const StateMatrix i_kh = StateMatrix::Identity() - gain * h;
  state.covariance =
    i_kh * state.covariance * i_kh.transpose() + gain * r * gain.transpose();
  state.covariance = (0.5 * (state.covariance + state.covariance.transpose())).eval();
  return outcome;
}

}  // namespace camtrack
