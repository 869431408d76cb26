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

#ifndef CAMTRACK__PREPROCESS_HPP_
#define CAMTRACK__PREPROCESS_HPP_

#include "camtrack/assignment.hpp"
#include "camtrack/camera.hpp"
#include "camtrack/geometry.hpp"
#include "camtrack/types.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace camtrack
{

/// A detection tagged with its index in the raw frame, which serves as its
/// identity for the rest of the frame.
struct Detection
{
  std::size_t index{0};
  Box3D box;
};

/// A predicted tracklet as seen by pre-processing and association.
struct TrackView
{
  std::uint64_t id{0};
  Box3D box;
};

struct NmsSettings
{
  double scale_factor{1.0};
  BoxMetric metric{BoxMetric::kIouBev};
  double threshold{0.08};
};

/// Scaled-box NMS, run independently per category.
///
/// Boxes are ranked by (score desc, center x asc, center y asc, raw index).
/// Suppression decisions use boxes scaled by the category factor; survivors
/// are returned unscaled, grouped by category in category order and ranked
/// within each category.
std::vector<Detection> geometry_filter(
  std::span<const Box3D> raw, const PerCategory<NmsSettings> & settings, int threads = 1);

struct ScoreSplit
{
  std::vector<Detection> high;
  std::vector<Detection> low_coarse;
};

/// score >= threshold[category] goes to `high`; scores below `floor` are dropped.
ScoreSplit score_split(
  std::span<const Detection> filtered, const PerCategory<double> & thresholds, double floor);

/// Detection index -> tracklet id matched by the pseudo visual tracker.
using PreMatchMap = std::map<std::size_t, std::uint64_t>;

struct TrackerFilterResult
{
  std::vector<Detection> recalled;
  PreMatchMap pre_matches;
  std::size_t valid_similarities{0};
};

struct TrackerFilterSettings
{
  PerCategory<double> thresholds{};
  McasOptions mcas{ImageMetric::kIou2d, FuseMode::kSum};
  GatingMode gating{GatingMode::kSolveThenFilter};
};

/// Recalls low-score detections that appearance-match a predicted tracklet.
/// Cost is -MCAS; accepted pairs satisfy cost <= threshold[category].
TrackerFilterResult tracker_filter(
  std::span<const Detection> low_coarse, std::span<const TrackView> tracks, const CameraRig & rig,
  const TrackerFilterSettings & settings, int threads = 1);

/// Per-frame record of the pre-processing partitions.
struct DetectionFrame
{
  double timestamp{0.0};
  std::vector<Box3D> raw;
  std::vector<Detection> filtered;
  std::vector<Detection> high;
  std::vector<Detection> low_coarse;
  std::vector<Detection> low_recalled;
};

}  // namespace camtrack

#endif  // CAMTRACK__PREPROCESS_HPP_
