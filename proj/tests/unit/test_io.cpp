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
#include "camtrack/io.hpp"
#include "camtrack/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>

namespace camtrack
{
namespace
{

using nlohmann::json;

ErrorCode code_of(const std::function<void()> & fn)
{
  try {
    fn();
  } catch (const Error & e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInternal;
}

json detection_record(const std::string & token)
{
  return json{
    {"sample_token", token},
    {"translation", {10.0, -2.0, 0.9}},
    {"size", {1.9, 4.6, 1.7}},
    {"rotation", {std::cos(0.25), 0.0, 0.0, std::sin(0.25)}},
    {"velocity", {3.0, 0.5}},
    {"detection_name", "car"},
    {"detection_score", 0.7},
    {"attribute_name", ""}};
}

json wrap(const json & records_by_token)
{
  return json{{"meta", {{"use_camera", true}}}, {"results", records_by_token}};
}

TEST(Quaternion, YawRoundTrip)
{
  for (double yaw = -3.1; yaw < 3.15; yaw += 0.1) {
    const auto q = quaternion_from_yaw(yaw);
    EXPECT_NEAR(yaw_from_quaternion(q[0], q[1], q[2], q[3]), yaw, 1e-12);
  }
  EXPECT_NEAR(yaw_from_quaternion(1, 0, 0, 0), 0.0, 1e-15);
  const double h = std::sqrt(0.5);
  EXPECT_NEAR(yaw_from_quaternion(h, 0, 0, h), std::numbers::pi / 2, 1e-12);
}

TEST(Detections, ParseFields)
{
  const DetectionSet set = parse_detections(wrap({{"s1", {detection_record("s1")}}, {"s2", json::array()}}));
  ASSERT_EQ(set.size(), 2u);
  ASSERT_EQ(set.at("s1").size(), 1u);
  const Box3D & b = set.at("s1")[0];
  EXPECT_EQ(b.center, Eigen::Vector3d(10.0, -2.0, 0.9));
  EXPECT_EQ(b.size, Eigen::Vector3d(1.9, 4.6, 1.7));
  EXPECT_NEAR(b.yaw, 0.5, 1e-12);
  ASSERT_TRUE(b.velocity);
  EXPECT_EQ(*b.velocity, Eigen::Vector2d(3.0, 0.5));
  EXPECT_EQ(b.category, Category::kCar);
  EXPECT_DOUBLE_EQ(b.score, 0.7);
  EXPECT_TRUE(set.at("s2").empty());
}

TEST(Detections, RoundTrip)
{
  const DetectionSet set = parse_detections(wrap({{"s1", {detection_record("s1")}}}));
  const json out = detections_to_json(set);
  EXPECT_TRUE(out["meta"]["use_camera"].get<bool>());
  const DetectionSet again = parse_detections(out);
  const Box3D & a = set.at("s1")[0];
  const Box3D & b = again.at("s1")[0];
  EXPECT_EQ(a.center, b.center);
  EXPECT_NEAR(a.yaw, b.yaw, 1e-12);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(*a.velocity, *b.velocity);
}

TEST(Detections, Rejections)
{
  const auto with = [](const std::function<void(json &)> & edit) {
    json r = detection_record("s1");
    edit(r);
    return wrap({{"s1", {r}}});
  };
  EXPECT_EQ(code_of([&] { parse_detections(with([](json & r) { r.erase("translation"); })); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_detections(with([](json & r) { r["size"] = {1, 2}; })); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_detections(with([](json & r) { r["rotation"] = {1, 0, 0, 0.1}; })); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_detections(with([](json & r) { r["detection_name"] = "van"; })); }),
            ErrorCode::kUnknownCategory);
  EXPECT_EQ(code_of([&] { parse_detections(with([](json & r) { r["size"] = {1, 0, 1}; })); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_detections(with([](json & r) { r["sample_token"] = "s9"; })); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { parse_detections(json{{"meta", {}}}); }), ErrorCode::kParse);
  // A missing score defaults to 1; a null velocity is absent.
  const DetectionSet d = parse_detections(with([](json & r) {
    r.erase("detection_score");
    r["velocity"] = nullptr;
  }));
  EXPECT_EQ(d.at("s1")[0].score, 1.0);
  EXPECT_FALSE(d.at("s1")[0].velocity);
}

TEST(GroundTruth, RoundTripKeepsInstances)
{
  json r = detection_record("s1");
  r["instance_token"] = "instance-3";
  const GroundTruthSet gt = parse_ground_truth(wrap({{"s1", {r}}}));
  ASSERT_EQ(gt.at("s1").size(), 1u);
  EXPECT_EQ(gt.at("s1")[0].instance, "instance-3");
  const GroundTruthSet again = parse_ground_truth(ground_truth_to_json(gt));
  EXPECT_EQ(again.at("s1")[0].instance, "instance-3");
  r.erase("instance_token");
  EXPECT_EQ(code_of([&] { parse_ground_truth(wrap({{"s1", {r}}})); }), ErrorCode::kParse);
}

TEST(Tracking, RoundTrip)
{
  TrackingSet set;
  set["s1"].push_back(
    {Box3D(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 1, 1), 0.3, 0.6, Category::kBus,
           Eigen::Vector2d(1, 0)),
     "17"});
  set["s2"];
  const json doc = tracking_to_json(set);
  EXPECT_EQ(doc["results"]["s1"][0]["tracking_id"], "17");
  EXPECT_EQ(doc["results"]["s1"][0]["tracking_name"], "bus");
  const TrackingSet again = parse_tracking(doc);
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again.at("s1")[0].tracking_id, "17");
  EXPECT_EQ(again.at("s1")[0].box.category, Category::kBus);
  EXPECT_DOUBLE_EQ(again.at("s1")[0].box.score, 0.6);
}

json manifest_doc()
{
  return json{{"scenes",
               {{{"name", "a"},
                 {"frames",
                  {{{"sample_token", "a0"}, {"timestamp", 0.0}},
                   {{"sample_token", "a1"}, {"timestamp", 0.5}}}}},
                {{"name", "b"}, {"frames", {{{"sample_token", "b0"}, {"timestamp", 3.0}}}}}}}};
}

TEST(Manifest, ParseAndValidate)
{
  const Manifest m = parse_manifest(manifest_doc());
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].frames[1].token, "a1");
  EXPECT_EQ(manifest_to_json(m), manifest_doc());

  json dup = manifest_doc();
  dup["scenes"][1]["frames"][0]["sample_token"] = "a0";
  EXPECT_EQ(code_of([&] { parse_manifest(dup); }), ErrorCode::kParse);
  json order = manifest_doc();
  order["scenes"][0]["frames"][1]["timestamp"] = -1.0;
  EXPECT_EQ(code_of([&] { parse_manifest(order); }), ErrorCode::kOutOfOrder);
  EXPECT_EQ(code_of([] { parse_manifest(json::object()); }), ErrorCode::kParse);
}

TEST(Calibration, RoundTripAndErrors)
{
  const CameraRig rig = make_ring_rig(6);
  const json doc = calibration_to_json(rig);
  const CameraRig again = parse_calibration(doc);
  ASSERT_EQ(again.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_TRUE(again[k].extrinsic().isApprox(rig[k].extrinsic()));
    EXPECT_EQ(again[k].intrinsic(), rig[k].intrinsic());
    EXPECT_EQ(again[k].width(), 1600);
    EXPECT_EQ(again[k].name(), rig[k].name());
  }
  json bad = doc;
  bad["cameras"][0]["intrinsic"] = {1, 0, 0};
  EXPECT_EQ(code_of([&] { parse_calibration(bad); }), ErrorCode::kParse);
  bad = doc;
  bad["cameras"][0]["width"] = 10.5;
  EXPECT_EQ(code_of([&] { parse_calibration(bad); }), ErrorCode::kParse);
  bad = doc;
  bad["cameras"][0]["intrinsic"] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(code_of([&] { parse_calibration(bad); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_calibration(json{{"cameras", json::array()}}); }),
            ErrorCode::kInvalidArgument);
}

TEST(GroupFrames, ManifestOrder)
{
  DetectionSet dets = parse_detections(wrap({{"a1", {detection_record("a1")}}}));
  const Manifest m = parse_manifest(manifest_doc());
  const auto scenes = group_frames(dets, m);
  ASSERT_EQ(scenes.size(), 2u);
  ASSERT_EQ(scenes[0].size(), 2u);
  EXPECT_TRUE(scenes[0][0].detections.empty());
  EXPECT_EQ(scenes[0][1].detections.size(), 1u);
  EXPECT_EQ(scenes[0][1].token, "a1");
  EXPECT_DOUBLE_EQ(scenes[1][0].timestamp, 3.0);
  dets["zz"];
  EXPECT_EQ(code_of([&] { group_frames(dets, m); }), ErrorCode::kParse);
}

TEST(ToTrackingSet, EveryTokenPresent)
{
  const Manifest m = parse_manifest(manifest_doc());
  std::vector<std::vector<FrameResult>> results(2);
  results[0].resize(2);
  results[1].resize(1);
  results[0][1].objects.push_back(
    {42, Box3D(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1), 0, 0.5, Category::kCar)});
  const TrackingSet set = to_tracking_set(m, results);
  ASSERT_EQ(set.size(), 3u);
  EXPECT_TRUE(set.at("a0").empty());
  EXPECT_EQ(set.at("a1")[0].tracking_id, "42");
  EXPECT_TRUE(set.at("b0").empty());
}

TEST(Files, ReadWrite)
{
  const auto dir = std::filesystem::temp_directory_path() / "camtrack_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "m.json";
  write_json_file(path, manifest_doc(), -1);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find('\n'), text.size() - 1);
  EXPECT_EQ(load_manifest(path).size(), 2u);
  EXPECT_EQ(code_of([&] { read_json_file(dir / "missing.json"); }), ErrorCode::kIo);
  std::ofstream(dir / "broken.json") << "{";
  EXPECT_EQ(code_of([&] { read_json_file(dir / "broken.json"); }), ErrorCode::kParse);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace camtrack
