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

#ifndef CAMTRACK__CONFIG_HPP_
#define CAMTRACK__CONFIG_HPP_

#include "camtrack/assignment.hpp"
#include "camtrack/camera.hpp"
#include "camtrack/geometry.hpp"
#include "camtrack/lifecycle.hpp"
#include "camtrack/motion.hpp"
#include "camtrack/types.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace camtrack
{

struct CategoryConfig
{
  double score_threshold{0.0};           // high/low split
  double scale_factor{1.0};              // geometry filter box scaling
  double tracker_filter_threshold{0.0};  // pseudo visual tracker, cost = -MCAS
  double motion_threshold{0.0};          // first association, cost = 1 - metric
  double appearance_threshold{0.0};      // second association, cost = -MCAS
  BoxMetric nms_metric{BoxMetric::kIouBev};
  double nms_threshold{0.08};
  BoxMetric association_metric{BoxMetric::kGiouBev};
  MotionModel motion_model{MotionModel::kCtra};
  LifecycleConfig lifecycle;
  NoiseProfile process_noise;
  NoiseProfile initial_covariance{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
};

/// Ablation switches. Letters follow the G/P/H/S naming used by the CLI.
struct FeatureFlags
{
  bool geometry_filter{true};        // G: scaled-box NMS (off: plain NMS, scale 1)
  bool tracker_filter{true};         // P: recall low-score detections
  bool heuristic_noise{true};        // H: score/stage-adaptive measurement noise
  bool second_association{true};     // S: appearance matching stage
  bool two_step_verification{true};
  bool stage_factor{true};           // off: stage index forced to 0 in the noise model

  bool operator==(const FeatureFlags &) const = default;
};

/// Parses a comma-separated subset of {G, P, H, S}; unnamed letters are
/// switched off. Verification and stage factor keep their current values.
/// An empty string or "none" selects the baseline.
FeatureFlags parse_flags(std::string_view letters, FeatureFlags base = {});
std::string flags_to_string(const FeatureFlags & flags);

struct TrackerConfig
{
  PerCategory<CategoryConfig> categories;
  double frame_interval{0.5};
  double score_floor{0.01};
  double score_smoothing{0.7};
  double fixed_measurement_noise{0.25};
  McasOptions preprocess_mcas{ImageMetric::kIou2d, FuseMode::kSum};
  McasOptions association_mcas{ImageMetric::kGiou2d, FuseMode::kSum};
  FeatureFlags flags;
  GatingMode gating{GatingMode::kSolveThenFilter};
  bool emit_coasting{false};
  bool yaw_flip_correction{false};
  MotionParams motion;
  int threads{1};

  /// Published per-category hyperparameters and project defaults.
  static TrackerConfig defaults();
};

/// Overlays `document` on the defaults (or, with "inherit_defaults": false,
/// requires a complete document) and validates the result. Diagnostics use
/// ErrorCode kUnknownKey, kMissingCategory, kMissingKey, kTypeMismatch,
/// kOutOfRange or kUnknownCategory.
TrackerConfig load_config(const nlohmann::json & document);
TrackerConfig load_config_string(std::string_view text);
TrackerConfig load_config_file(const std::filesystem::path & path);

nlohmann::json config_to_json(const TrackerConfig & config);

/// Throws Error(kOutOfRange) on the first invalid field.
void validate(const TrackerConfig & config);

}  // namespace camtrack

#endif  // CAMTRACK__CONFIG_HPP_
