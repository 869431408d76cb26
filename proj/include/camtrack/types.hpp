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

#ifndef CAMTRACK__TYPES_HPP_
#define CAMTRACK__TYPES_HPP_

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

namespace camtrack
{

/// The seven nuScenes tracking classes, in configuration order.
enum class Category : std::uint8_t {
  kCar = 0,
  kPedestrian,
  kBicycle,
  kMotorcycle,
  kBus,
  kTrailer,
  kTruck,
};

inline constexpr std::size_t kNumCategories = 7;

inline constexpr std::array<Category, kNumCategories> kAllCategories = {
  Category::kCar, Category::kPedestrian, Category::kBicycle, Category::kMotorcycle,
  Category::kBus, Category::kTrailer,    Category::kTruck,
};

constexpr std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

/// One value per category, indexed by `index_of`.
template <class T>
struct PerCategory
{
  std::array<T, kNumCategories> values{};

  T & operator[](Category c) { return values[index_of(c)]; }
  const T & operator[](Category c) const { return values[index_of(c)]; }

  static PerCategory filled(const T & value)
  {
    PerCategory out;
    out.values.fill(value);
    return out;
  }
};

/// nuScenes class name, e.g. "pedestrian".
std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Yaw-rotated 3D box in the global frame.
///
/// `size` is (w, l, h); l runs along the heading. `center.z()` is the
/// geometric center, so the box spans [z - h/2, z + h/2]. Yaw is wrapped on
/// construction and never re-normalized at use sites.
struct Box3D
{
  Eigen::Vector3d center{Eigen::Vector3d::Zero()};
  Eigen::Vector3d size{Eigen::Vector3d::Ones()};
  double yaw{0.0};
  std::optional<Eigen::Vector2d> velocity;
  double score{1.0};
  Category category{Category::kCar};

  Box3D() = default;

  /// Throws Error(kInvalidArgument) if any extent is not strictly positive,
  /// the score is outside [0, 1], or a value is not finite.
  Box3D(
    const Eigen::Vector3d & center, const Eigen::Vector3d & size, double yaw, double score,
    Category category, std::optional<Eigen::Vector2d> velocity = std::nullopt);

  double width() const { return size.x(); }
  double length() const { return size.y(); }
  double height() const { return size.z(); }
  double volume() const { return size.prod(); }
  double z_min() const { return center.z() - 0.5 * size.z(); }
  double z_max() const { return center.z() + 0.5 * size.z(); }
};

/// Axis-aligned image box in pixels. Invalid boxes carry NaN coordinates.
struct Box2D
{
  double u1{std::numeric_limits<double>::quiet_NaN()};
  double v1{std::numeric_limits<double>::quiet_NaN()};
  double u2{std::numeric_limits<double>::quiet_NaN()};
  double v2{std::numeric_limits<double>::quiet_NaN()};
  bool valid{false};

  static Box2D invalid() { return Box2D{}; }
  static Box2D from_corners(double u1, double v1, double u2, double v2)
  {
    return Box2D{u1, v1, u2, v2, true};
  }

  double area() const { return valid ? (u2 - u1) * (v2 - v1) : 0.0; }
};

}  // namespace camtrack

#endif  // CAMTRACK__TYPES_HPP_
