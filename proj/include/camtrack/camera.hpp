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

#ifndef CAMTRACK__CAMERA_HPP_
#define CAMTRACK__CAMERA_HPP_

#include "camtrack/geometry.hpp"
#include "camtrack/types.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace camtrack
{

/// Corners at or below this depth (meters, camera frame) are culled.
inline constexpr double kMinProjectionDepth = 1e-3;

/// Pinhole camera. The extrinsic maps global homogeneous points into the
/// camera frame (z forward, x right, y down).
class Camera
{
public:
  /// Throws Error(kInvalidArgument) on a singular intrinsic, non-positive
  /// focal entries or a non-positive image size.
  Camera(
    const Eigen::Matrix<double, 3, 4> & extrinsic, const Eigen::Matrix3d & intrinsic, int width,
    int height, std::string name = {});

  const Eigen::Matrix<double, 3, 4> & extrinsic() const { return extrinsic_; }
  const Eigen::Matrix3d & intrinsic() const { return intrinsic_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const std::string & name() const { return name_; }

  Eigen::Vector3d to_camera(const Eigen::Vector3d & global) const
  {
    return extrinsic_.leftCols<3>() * global + extrinsic_.col(3);
  }

private:
  Eigen::Matrix<double, 3, 4> extrinsic_;
  Eigen::Matrix3d intrinsic_;
  int width_;
  int height_;
  std::string name_;
};

/// Builds a camera at `position` looking along heading `yaw` (radians,
/// counter-clockwise from global +x) with horizontal optical axis.
Camera make_ring_camera(
  const Eigen::Vector3d & position, double yaw, double focal, int width, int height,
  std::string name = {});

/// Ordered set of cameras; order is stable across a sequence.
class CameraRig
{
public:
  CameraRig() = default;
  explicit CameraRig(std::vector<Camera> cameras);

  std::size_t size() const { return cameras_.size(); }
  bool empty() const { return cameras_.empty(); }
  const Camera & operator[](std::size_t k) const { return cameras_[k]; }
  std::span<const Camera> cameras() const { return cameras_; }

  /// Removes the last `count` cameras. Throws if that would leave none.
  CameraRig drop_last(std::size_t count) const;

private:
  std::vector<Camera> cameras_;
};

/// nuScenes-like ring of `count` cameras spaced evenly in yaw around `center`.
CameraRig make_ring_rig(
  std::size_t count, const Eigen::Vector3d & center = Eigen::Vector3d(0.0, 0.0, 1.5),
  double focal = 1266.0, int width = 1600, int height = 900);

/// The eight corners of a box, bottom face first (CCW), then top face.
std::array<Eigen::Vector3d, 8> box_corners(const Box3D & box);

Box2D project_box(const Box3D & box, const Camera & camera);

/// One Box2D per rig camera, in rig order.
using MultiViewState = std::vector<Box2D>;

MultiViewState project_all(const Box3D & box, const CameraRig & rig);

/// Per-camera similarity; std::nullopt where a camera does not see both boxes.
using CameraSimilarities = std::vector<std::optional<double>>;

enum class FuseMode { kSum, kMax, kAvg };

CameraSimilarities pairwise_similarity(
  const MultiViewState & a, const MultiViewState & b, ImageMetric metric);

/// Aggregates valid entries only; std::nullopt when none are valid.
std::optional<double> fuse(const CameraSimilarities & similarities, FuseMode mode);

/// Dense |A| x |B| similarity matrix. Invalid entries hold NaN.
using SimilarityMatrix = Eigen::MatrixXd;

inline bool is_valid_similarity(double s) { return !std::isnan(s); }

struct McasOptions
{
  ImageMetric metric{ImageMetric::kIou2d};
  FuseMode fuse{FuseMode::kSum};
};

/// Multi-camera appearance similarity between two box sets. Each box is
/// projected exactly once.
SimilarityMatrix mcas(
  std::span<const Box3D> a, std::span<const Box3D> b, const CameraRig & rig,
  const McasOptions & options);

/// Same as above with precomputed projections.
SimilarityMatrix mcas(
  std::span<const MultiViewState> a, std::span<const MultiViewState> b,
  const McasOptions & options);

}  // namespace camtrack

#endif  // CAMTRACK__CAMERA_HPP_
