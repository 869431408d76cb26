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
#include "camtrack/geometry.hpp"
#include "camtrack/io.hpp"
#include "camtrack/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <map>

namespace camtrack
{
namespace
{

using nlohmann::json;

TEST(Scenario, DeterministicPerSeed)
{
  ScenarioSpec spec;
  spec.num_frames = 10;
  spec.fp_rate = 1.0;
  spec.position_sigma = 0.2;
  const Scenario a = generate_scenario(spec, 5);
  const Scenario b = generate_scenario(spec, 5);
  const Scenario c = generate_scenario(spec, 6);
  EXPECT_EQ(detections_to_json(a.detections), detections_to_json(b.detections));
  EXPECT_EQ(ground_truth_to_json(a.ground_truth), ground_truth_to_json(b.ground_truth));
  EXPECT_NE(detections_to_json(a.detections), detections_to_json(c.detections));
}

TEST(Scenario, NoiselessDetectionsEqualTruth)
{
  const ScenarioSpec spec;
  const Scenario s = generate_scenario(spec, 1);
  ASSERT_EQ(s.manifest.size(), 1u);
  ASSERT_EQ(s.manifest[0].frames.size(), spec.num_frames);
  EXPECT_EQ(s.rig.size(), 6u);
  for (std::size_t f = 0; f < spec.num_frames; ++f) {
    const FrameInfo & info = s.manifest[0].frames[f];
    EXPECT_DOUBLE_EQ(info.timestamp, f * spec.frame_interval);
    const auto & gts = s.ground_truth.at(info.token);
    const auto & dets = s.detections.at(info.token);
    ASSERT_EQ(gts.size(), spec.num_objects);
    ASSERT_EQ(dets.size(), spec.num_objects);
    for (const auto & d : dets) {
      bool found = false;
      for (const auto & g : gts) {
        if ((g.box.center - d.center).norm() < 1e-12 && g.box.category == d.category) {
          found = true;
          EXPECT_EQ(g.box.size, d.size);
        }
      }
      EXPECT_TRUE(found);
      EXPECT_GE(d.score, spec.score.base_min);
      EXPECT_LE(d.score, spec.score.base_max);
    }
  }
}

TEST(Scenario, TruthsNeverOverlapAndStayVisible)
{
  ScenarioSpec spec;
  spec.num_objects = 30;
  const Scenario s = generate_scenario(spec, 9);
  std::map<std::string, Eigen::Vector3d> last;
  for (const auto & frame : s.manifest[0].frames) {
    const auto & gts = s.ground_truth.at(frame.token);
    for (std::size_t i = 0; i < gts.size(); ++i) {
      for (std::size_t j = i + 1; j < gts.size(); ++j) {
        EXPECT_EQ(iou_bev(gts[i].box, gts[j].box), 0.0);
      }
      int views = 0;
      for (const auto & b : project_all(gts[i].box, s.rig)) views += b.valid;
      EXPECT_GE(views, 1);
      EXPECT_NEAR(gts[i].box.center.z(), 0.5 * gts[i].box.height(), 1e-12);
      // Speed limits hold frame to frame.
      if (const auto it = last.find(gts[i].instance); it != last.end()) {
        const double v = (gts[i].box.center - it->second).norm() / spec.frame_interval;
        EXPECT_LE(v, spec.max_speed[gts[i].box.category] + 1e-9);
      }
      last[gts[i].instance] = gts[i].box.center;
    }
  }
}

TEST(Scenario, MissRateIsBinomial)
{
  ScenarioSpec spec;
  spec.num_objects = 10;
  spec.fn_rate = 0.3;
  const Scenario s = generate_scenario(spec, 4);
  std::size_t detected = 0;
  for (const auto & [token, dets] : s.detections) detected += dets.size();
  const double n = 1000.0;
  const double missed = n - detected;
  EXPECT_NEAR(missed, 0.3 * n, 3.0 * std::sqrt(n * 0.3 * 0.7));
}

TEST(Scenario, FalsePositiveRateIsPoisson)
{
  ScenarioSpec spec;
  spec.num_objects = 5;
  spec.num_frames = 400;
  spec.fp_rate = 2.0;
  const Scenario s = generate_scenario(spec, 11);
  std::size_t total = 0;
  for (const auto & [token, dets] : s.detections) total += dets.size();
  const double fps = total - 5.0 * 400.0;
  EXPECT_NEAR(fps, 800.0, 3.0 * std::sqrt(800.0));
}

TEST(Scenario, SpecJson)
{
  ScenarioSpec spec;
  spec.fp_rate = 0.5;
  spec.score.low_rate = 0.2;
  const json doc = scenario_spec_to_json(spec);
  EXPECT_EQ(scenario_spec_to_json(parse_scenario_spec(doc)), doc);
  EXPECT_EQ(scenario_spec_to_json(parse_scenario_spec(json())), scenario_spec_to_json({}));
  const ScenarioSpec partial = parse_scenario_spec(json{{"num_frames", 7}, {"score", {{"noise_sigma", 0.1}}}});
  EXPECT_EQ(partial.num_frames, 7u);
  EXPECT_EQ(partial.score.noise_sigma, 0.1);
  EXPECT_EQ(partial.num_objects, 20u);

  const auto code_of = [](const json & doc) {
    try {
      parse_scenario_spec(doc);
    } catch (const Error & e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code_of(json{{"bogus", 1}}), ErrorCode::kUnknownKey);
  EXPECT_EQ(code_of(json{{"fn_rate", "x"}}), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of(json{{"fn_rate", 1.5}}), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of(json{{"num_frames", 0}}), ErrorCode::kInvalidArgument);
}

TEST(Scenario, WritesLoadableFiles)
{
  ScenarioSpec spec;
  spec.num_frames = 5;
  const Scenario s = generate_scenario(spec, 2);
  const auto dir = std::filesystem::temp_directory_path() / "camtrack_scenario_test";
  write_scenario(s, dir);
  const auto frames = load_detections(dir / "detections.json", dir / "manifest.json");
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].size(), 5u);
  EXPECT_EQ(load_calibration(dir / "calibration.json").size(), 6u);
  EXPECT_EQ(load_ground_truth(dir / "ground_truth.json").size(), 5u);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace camtrack
