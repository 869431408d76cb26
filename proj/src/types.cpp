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

#include "camtrack/types.hpp"

#include "camtrack/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace camtrack
{

const char * error_code_name(ErrorCode code)
{
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kUnknownKey: return "unknown_key";
    case ErrorCode::kMissingCategory: return "missing_category";
    case ErrorCode::kMissingKey: return "missing_key";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kTypeMismatch: return "type_mismatch";
    case ErrorCode::kUnknownCategory: return "unknown_category";
    case ErrorCode::kOutOfOrder: return "out_of_order";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

namespace
{
constexpr std::array<std::string_view, kNumCategories> kCategoryNames = {
  "car", "pedestrian", "bicycle", "motorcycle", "bus", "trailer", "truck",
};
}  // namespace

std::string_view category_name(Category c) { return kCategoryNames[index_of(c)]; }

std::optional<Category> parse_category(std::string_view name)
{
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    if (kCategoryNames[i] == name) {
      return kAllCategories[i];
    }
  }
  return std::nullopt;
}

double wrap_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, two_pi);
  if (wrapped <= -std::numbers::pi) {
    wrapped += two_pi;
  } else if (wrapped > std::numbers::pi) {
    wrapped -= two_pi;
  }
  return wrapped;
}

Box3D::Box3D(
  const Eigen::Vector3d & center_in, const Eigen::Vector3d & size_in, double yaw_in,
  double score_in, Category category_in, std::optional<Eigen::Vector2d> velocity_in)
: center(center_in),
  size(size_in),
  yaw(wrap_angle(yaw_in)),
  velocity(std::move(velocity_in)),
  score(score_in),
  category(category_in)
{
  if (!center.allFinite() || !std::isfinite(yaw_in)) {
    throw Error(ErrorCode::kInvalidArgument, "box pose must be finite");
  }
  if (!(size.array() > 0.0).all() || !size.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "box extents must be strictly positive");
  }
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(
      ErrorCode::kInvalidArgument, "box score must lie in [0, 1], got " + std::to_string(score));
  }
  if (velocity && !velocity->allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "box velocity must be finite");
  }
}

}  // namespace camtrack
