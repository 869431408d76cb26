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

#include "camtrack/geometry.hpp"

#include "camtrack/error.hpp"

#include <algorithm>
#include <cmath>

namespace camtrack
{

namespace
{

double cross(const Point2 & o, const Point2 & a, const Point2 & b)
{
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Drops consecutive near-duplicate vertices, including the wrap-around pair.
void merge_close_vertices(Polygon & poly)
{
  Polygon out;
  out.reserve(poly.size());
  for (const auto & p : poly) {
    if (out.empty() || (p - out.back()).norm() > kVertexMergeTolerance) {
      out.push_back(p);
    }
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= kVertexMergeTolerance) {
    out.pop_back();
  }
  poly = std::move(out);
}

double intersection_area(const BevPolygon & a, const BevPolygon & b)
{
  const Polygon inter = clip_convex(a.points(), b.points());
  if (inter.size() < 3) {
    return 0.0;
  }
  return std::max(0.0, polygon_area(inter));
}

double hull_area(const BevPolygon & a, const BevPolygon & b)
{
  std::array<Point2, 8> all;
  std::copy(a.vertices.begin(), a.vertices.end(), all.begin());
  std::copy(b.vertices.begin(), b.vertices.end(), all.begin() + 4);
  return polygon_area(convex_hull(all));
}

}  // namespace

BevPolygon bev_polygon(const Box3D & box)
{
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.length();
  const double hw = 0.5 * box.width();
  // Local corners in CCW order: front-right, front-left, rear-left, rear-right.
  const std::array<Point2, 4> local = {
    Point2{hl, -hw}, Point2{hl, hw}, Point2{-hl, hw}, Point2{-hl, -hw}};
  BevPolygon poly;
  for (std::size_t i = 0; i < 4; ++i) {
    poly.vertices[i] = Point2{
      box.center.x() + c * local[i].x() - s * local[i].y(),
      box.center.y() + s * local[i].x() + c * local[i].y()};
  }
  return poly;
}

double polygon_area(std::span<const Point2> polygon)
{
  if (polygon.size() < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0, n = polygon.size(); i < n; ++i) {
    const Point2 & p = polygon[i];
    const Point2 & q = polygon[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

Polygon clip_convex(std::span<const Point2> subject, std::span<const Point2> clip)
{
  Polygon output(subject.begin(), subject.end());
  for (std::size_t e = 0, n = clip.size(); e < n && !output.empty(); ++e) {
    const Point2 & a = clip[e];
    const Point2 & b = clip[(e + 1) % n];
    const Polygon input = std::move(output);
    output.clear();
    for (std::size_t i = 0, m = input.size(); i < m; ++i) {
      const Point2 & cur = input[i];
      const Point2 & prev = input[(i + m - 1) % m];
      const double d_cur = cross(a, b, cur);
      const double d_prev = cross(a, b, prev);
      const bool cur_in = d_cur >= 0.0;
      const bool prev_in = d_prev >= 0.0;
      if (cur_in != prev_in) {
        const double t = d_prev / (d_prev - d_cur);
        output.push_back(prev + t * (cur - prev));
      }
      if (cur_in) {
        output.push_back(cur);
      }
    }
    merge_close_vertices(output);
  }
  return output;
}

Polygon convex_hull(std::span<const Point2> points)
{
  Polygon pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point2 & p, const Point2 & q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });
  if (pts.size() < 3) {
    return pts;
  }
  Polygon hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto & p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) {
      --k;
    }
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double iou_bev(const Box3D & a, const Box3D & b)
{
  const BevPolygon pa = bev_polygon(a);
  const BevPolygon pb = bev_polygon(b);
  const double inter = intersection_area(pa, pb);
  if (inter <= 0.0) {
    return 0.0;
  }
  const double uni = a.width() * a.length() + b.width() * b.length() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double giou_bev(const Box3D & a, const Box3D & b)
{
  const BevPolygon pa = bev_polygon(a);
  const BevPolygon pb = bev_polygon(b);
  const double inter = intersection_area(pa, pb);
  const double uni = a.width() * a.length() + b.width() * b.length() - inter;
  const double hull = std::max(hull_area(pa, pb), uni);
  const double iou = inter > 0.0 ? inter / uni : 0.0;
  return iou - (hull - uni) / hull;
}

double giou_3d(const Box3D & a, const Box3D & b)
{
  const BevPolygon pa = bev_polygon(a);
  const BevPolygon pb = bev_polygon(b);
  const double inter_bev = intersection_area(pa, pb);
  const double overlap_z =
    std::max(0.0, std::min(a.z_max(), b.z_max()) - std::max(a.z_min(), b.z_min()));
  const double span_z = std::max(a.z_max(), b.z_max()) - std::min(a.z_min(), b.z_min());
  const double inter = inter_bev * overlap_z;
  const double uni = a.volume() + b.volume() - inter;
  const double enclosing = std::max(hull_area(pa, pb) * span_z, uni);
  const double iou = inter > 0.0 ? inter / uni : 0.0;
  return iou - (enclosing - uni) / enclosing;
}

double iou_2d(const Box2D & a, const Box2D & b)
{
  const double iw = std::min(a.u2, b.u2) - std::max(a.u1, b.u1);
  const double ih = std::min(a.v2, b.v2) - std::max(a.v1, b.v1);
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

double giou_2d(const Box2D & a, const Box2D & b)
{
  const double iw = std::max(0.0, std::min(a.u2, b.u2) - std::max(a.u1, b.u1));
  const double ih = std::max(0.0, std::min(a.v2, b.v2) - std::max(a.v1, b.v1));
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  const double enclosing = (std::max(a.u2, b.u2) - std::min(a.u1, b.u1)) *
                           (std::max(a.v2, b.v2) - std::min(a.v1, b.v1));
  return inter / uni - (enclosing - uni) / enclosing;
}

Box3D scale_box(const Box3D & box, double factor)
{
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be positive");
  }
  Box3D scaled = box;
  scaled.size *= factor;
  return scaled;
}

double box_similarity(BoxMetric metric, const Box3D & a, const Box3D & b)
{
  switch (metric) {
    case BoxMetric::kIouBev: return iou_bev(a, b);
    case BoxMetric::kGiouBev: return giou_bev(a, b);
    case BoxMetric::kGiou3d: return giou_3d(a, b);
  }
  return 0.0;
}

double image_similarity(ImageMetric metric, const Box2D & a, const Box2D & b)
{
  return metric == ImageMetric::kIou2d ? iou_2d(a, b) : giou_2d(a, b);
}

}  // namespace camtrack
