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

#include "camtrack/camera.hpp"

#include "camtrack/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace camtrack
{

Camera::Camera(
  const Eigen::Matrix<double, 3, 4> & extrinsic, const Eigen::Matrix3d & intrinsic, int width,
  int height, std::string name)
: extrinsic_(extrinsic), intrinsic_(intrinsic), width_(width), height_(height), name_(std::move(name))
{
  if (!extrinsic_.allFinite() || !intrinsic_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "camera matrices must be finite");
  }
  if (!(intrinsic_(0, 0) > 0.0) || !(intrinsic_(1, 1) > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "intrinsic focal entries must be positive");
  }
  if (std::abs(intrinsic_.determinant()) < 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "intrinsic matrix is singular");
  }
  if (width_ <= 0 || height_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
}

Camera make_ring_camera(
  const Eigen::Vector3d & position, double yaw, double focal, int width, int height,
  std::string name)
{
  Eigen::Matrix3d rotation;
  rotation.row(0) << std::sin(yaw), -std::cos(yaw), 0.0;  // image right
  rotation.row(1) << 0.0, 0.0, -1.0;                      // image down
  rotation.row(2) << std::cos(yaw), std::sin(yaw), 0.0;   // optical axis
  Eigen::Matrix<double, 3, 4> extrinsic;
  extrinsic.leftCols<3>() = rotation;
  extrinsic.col(3) = -rotation * position;
  Eigen::Matrix3d intrinsic;
  intrinsic << focal, 0.0, 0.5 * width, 0.0, focal, 0.5 * height, 0.0, 0.0, 1.0;
  return Camera(extrinsic, intrinsic, width, height, std::move(name));
}

CameraRig::CameraRig(std::vector<Camera> cameras) : cameras_(std::move(cameras))
{
  if (cameras_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "camera rig needs at least one camera");
  }
}

CameraRig CameraRig::drop_last(std::size_t count) const
{
  if (count >= cameras_.size()) {
    throw Error(
      ErrorCode::kInvalidArgument, "cannot drop " + std::to_string(count) + " of " +
                                     std::to_string(cameras_.size()) + " cameras");
  }
  return CameraRig(std::vector<Camera>(cameras_.begin(), cameras_.end() - count));
}

CameraRig make_ring_rig(
  std::size_t count, const Eigen::Vector3d & center, double focal, int width, int height)
{
  std::vector<Camera> cameras;
  cameras.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double yaw = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    cameras.push_back(
      make_ring_camera(center, yaw, focal, width, height, "CAM_" + std::to_string(k)));
  }
  return CameraRig(std::move(cameras));
}

std::array<Eigen::Vector3d, 8> box_corners(const Box3D & box)
{
  const BevPolygon footprint = bev_polygon(box);
  std::array<Eigen::Vector3d, 8> corners;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 & p = footprint.vertices[i];
    corners[i] = Eigen::Vector3d(p.x(), p.y(), box.z_min());
    corners[i + 4] = Eigen::Vector3d(p.x(), p.y(), box.z_max());
  }
  return corners;
}

Box2D project_box(const Box3D & box, const Camera & camera)
{
  double u_min = std::numeric_limits<double>::infinity();
  double v_min = u_min;
  double u_max = -u_min;
  double v_max = -u_min;
  int visible = 0;
  for (const auto & corner : box_corners(box)) {
    const Eigen::Vector3d pc = camera.to_camera(corner);
    if (pc.z() <= kMinProjectionDepth) {
      continue;
    }
    const Eigen::Vector3d uvw = camera.intrinsic() * pc;
    const double u = uvw.x() / uvw.z();
    const double v = uvw.y() / uvw.z();
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
    v_min = std::min(v_min, v);
    v_max = std::max(v_max, v);
    ++visible;
  }
  if (visible < 2) {
    return Box2D::invalid();
  }
  const double u1 = std::max(u_min, 0.0);
  const double v1 = std::max(v_min, 0.0);
  const double u2 = std::min(u_max, static_cast<double>(camera.width()));
  const double v2 = std::min(v_max, static_cast<double>(camera.height()));
  if (!(u2 > u1) || !(v2 > v1)) {
    return Box2D::invalid();
  }
  return Box2D::from_corners(u1, v1, u2, v2);
}

MultiViewState project_all(const Box3D & box, const CameraRig & rig)
{
  MultiViewState state;
  state.reserve(rig.size());
  for (const auto & camera : rig.cameras()) {
    state.push_back(project_box(box, camera));
  }
  return state;
}

CameraSimilarities pairwise_similarity(
  const MultiViewState & a, const MultiViewState & b, ImageMetric metric)
{
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "multi-view states come from different rigs");
  }
  CameraSimilarities out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].valid && b[k].valid) {
      out[k] = image_similarity(metric, a[k], b[k]);
    }
  }
  return out;
}

std::optional<double> fuse(const CameraSimilarities & similarities, FuseMode mode)
{
  double sum = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (const auto & s : similarities) {
    if (!s) {
      continue;
    }
    sum += *s;
    best = std::max(best, *s);
    ++count;
  }
  if (count == 0) {
    return std::nullopt;
  }
  switch (mode) {
    case FuseMode::kSum: return sum;
    case FuseMode::kMax: return best;
    case FuseMode::kAvg: return sum / static_cast<double>(count);
  }
  return std::nullopt;
}

SimilarityMatrix mcas(
  std::span<const MultiViewState> a, std::span<const MultiViewState> b,
  const McasOptions & options)
{
  SimilarityMatrix out(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto fused = fuse(pairwise_similarity(a[i], b[j], options.metric), options.fuse);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        fused.value_or(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

SimilarityMatrix mcas(
  std::span<const Box3D> a, std::span<const Box3D> b, const CameraRig & rig,
  const McasOptions & options)
{
  if (rig.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "MCAS needs a non-empty rig");
  }
  std::vector<MultiViewState> pa;
  std::vector<MultiViewState> pb;
  pa.reserve(a.size());
  pb.reserve(b.size());
  for (const auto & box : a) {
    pa.push_back(project_all(box, rig));
  }
  for (const auto & box : b) {
    pb.push_back(project_all(box, rig));
  }
  return mcas(pa, pb, options);
}

}  // namespace camtrack
