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

#ifndef CAMTRACK__GEOMETRY_HPP_
#define CAMTRACK__GEOMETRY_HPP_

#include "camtrack/types.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace camtrack
{

using Point2 = Eigen::Vector2d;
using Polygon = std::vector<Point2>;

/// Counter-clockwise footprint of a Box3D in the ground plane.
struct BevPolygon
{
  std::array<Point2, 4> vertices;

  std::span<const Point2> points() const { return vertices; }
};

/// Vertices closer than this are merged during clipping.
inline constexpr double kVertexMergeTolerance = 1e-9;

BevPolygon bev_polygon(const Box3D & box);

/// Signed shoelace area; positive for counter-clockwise input.
double polygon_area(std::span<const Point2> polygon);

/// Sutherland-Hodgman clip of a convex polygon against a convex CCW clip polygon.
Polygon clip_convex(std::span<const Point2> subject, std::span<const Point2> clip);

/// Andrew monotone chain hull, CCW, collinear points dropped.
Polygon convex_hull(std::span<const Point2> points);

double iou_bev(const Box3D & a, const Box3D & b);
double giou_bev(const Box3D & a, const Box3D & b);

/// Generalized 3D IoU. The enclosing volume is the BEV hull area times the
/// joint vertical span of both boxes.
double giou_3d(const Box3D & a, const Box3D & b);

double iou_2d(const Box2D & a, const Box2D & b);
double giou_2d(const Box2D & a, const Box2D & b);

/// Multiplies w, l and h by `factor`; throws on factor <= 0.
Box3D scale_box(const Box3D & box, double factor);

enum class BoxMetric { kIouBev, kGiouBev, kGiou3d };

double box_similarity(BoxMetric metric, const Box3D & a, const Box3D & b);

enum class ImageMetric { kIou2d, kGiou2d };

double image_similarity(ImageMetric metric, const Box2D & a, const Box2D & b);

}  // namespace camtrack

#endif  // CAMTRACK__GEOMETRY_HPP_
