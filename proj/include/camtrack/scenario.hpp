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

#ifndef CAMTRACK__SCENARIO_HPP_
#define CAMTRACK__SCENARIO_HPP_

#include "camtrack/camera.hpp"
#include "camtrack/io.hpp"
#include "camtrack/types.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace camtrack
{

struct ScoreModel
{
  double base_min{0.5};     // per-object base score range
  double base_max{0.95};
  double noise_sigma{0.0};  // per-frame score jitter
  double low_rate{0.0};     // chance a true detection scores in the clutter band
  double clutter_min{0.05};
  double clutter_max{0.3};
};

struct RigLayout
{
  std::size_t cameras{6};
  double focal{1266.0};
  int width{1600};
  int height{900};
  double mount_height{1.5};
};

/// Synthetic scene description. Objects travel on concentric circular lanes
/// around the rig at constant speed and turn rate, so truths never cross.
/// Lane gaps are sized from the BEV half-diagonals times `lane_clearance`.
struct ScenarioSpec
{
  std::string scene_name{"synth"};
  std::size_t num_objects{20};
  std::size_t num_frames{100};
  double frame_interval{0.5};
  PerCategory<double> category_mix{{0.4, 0.2, 0.1, 0.1, 0.05, 0.05, 0.1}};
  PerCategory<double> max_speed{{10.0, 1.5, 4.0, 8.0, 8.0, 8.0, 8.0}};
  double min_speed_fraction{0.3};
  double max_yaw_rate{0.3};  // caps speed at max_yaw_rate * lane radius
  double inner_radius{8.0};
  double lane_margin{1.0};
  double lane_clearance{2.5};

  double fp_rate{0.0};             // mean false positives per frame (Poisson)
  double duplicate_fraction{0.5};  // share of false positives that shadow a truth
  double duplicate_offset_min{1.0};
  double duplicate_offset_max{3.0};
  double fn_rate{0.0};             // per object-frame drop probability
  double position_sigma{0.0};
  double extent_sigma{0.0};
  double yaw_sigma{0.0};
  double velocity_sigma{0.0};
  bool emit_velocity{true};
  ScoreModel score;
  RigLayout rig;
};

/// Throws Error(kInvalidArgument) on the first invalid field.
void validate(const ScenarioSpec & spec);

/// Overlays `document` on the defaults. Unknown keys are rejected.
ScenarioSpec parse_scenario_spec(const nlohmann::json & document);
nlohmann::json scenario_spec_to_json(const ScenarioSpec & spec);

struct Scenario
{
  Manifest manifest;
  DetectionSet detections;
  GroundTruthSet ground_truth;
  CameraRig rig;
};

/// Output depends only on (spec, seed).
Scenario generate_scenario(const ScenarioSpec & spec, std::uint64_t seed);

/// Writes manifest.json, detections.json, ground_truth.json and
/// calibration.json into `directory`, creating it if needed.
void write_scenario(const Scenario & scenario, const std::filesystem::path & directory);

}  // namespace camtrack

#endif  // CAMTRACK__SCENARIO_HPP_
