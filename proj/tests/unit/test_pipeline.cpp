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
#include "camtrack/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace camtrack
{
namespace
{

Box3D car(double x, double y, double score, double vx = 0.0, double vy = 0.0)
{
  return Box3D(
    Eigen::Vector3d(x, y, 0.8), Eigen::Vector3d(1.8, 4.5, 1.6), std::atan2(vy, vx == 0 && vy == 0 ? 1 : vx),
    score, Category::kCar, Eigen::Vector2d(vx, vy));
}

TEST(Tracker, SingleObjectKeepsOneId)
{
  Tracker tracker(TrackerConfig::defaults(), make_ring_rig(6));
  std::uint64_t id = 0;
  for (int f = 0; f < 20; ++f) {
    const double t = 0.5 * f;
    const std::vector<Box3D> dets = {car(15 + 4 * t, 3, 0.8, 4, 0)};
    const FrameResult r = tracker.process_frame(t, dets);
    ASSERT_EQ(r.objects.size(), 1u) << "frame " << f;
    if (f == 0) id = r.objects[0].id;
    EXPECT_EQ(r.objects[0].id, id);
    EXPECT_NEAR(r.objects[0].box.center.x(), 15 + 4 * t, 0.2);
    EXPECT_DOUBLE_EQ(r.timestamp, t);
  }
  EXPECT_EQ(id, 1u);
}

TEST(Tracker, DeathAfterMisses)
{
  Tracker tracker(TrackerConfig::defaults(), make_ring_rig(6));
  const std::vector<Box3D> one = {car(20, 0, 0.9)};
  tracker.process_frame(0.0, one);
  FrameDiagnostics d;
  // A coasting tracklet is alive but not emitted.
  EXPECT_TRUE(tracker.process_frame(0.5, {}, &d).objects.empty());
  EXPECT_EQ(d.alive_after, 1u);
  EXPECT_EQ(d.deaths, 0u);
  tracker.process_frame(1.0, {}, &d);
  EXPECT_EQ(d.deaths, 1u);
  EXPECT_EQ(d.alive_after, 0u);
  EXPECT_TRUE(tracker.tracklets().empty());
  // The next object gets a fresh id.
  EXPECT_EQ(tracker.process_frame(1.5, one).objects.at(0).id, 2u);
}

TEST(Tracker, RejectsOutOfOrderTimestamps)
{
  Tracker tracker(TrackerConfig::defaults(), make_ring_rig(6));
  tracker.process_frame(1.0, {});
  EXPECT_NO_THROW(tracker.process_frame(1.0, {}));
  try {
    tracker.process_frame(0.5, {});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfOrder);
  }
}

TEST(Tracker, DiagnosticsPartitionDetections)
{
  Tracker tracker(TrackerConfig::defaults(), make_ring_rig(6));
  // Two heavily overlapping cars collapse under NMS; a 0.1 score is low.
  const std::vector<Box3D> dets = {car(20, 0, 0.9), car(20.2, 0, 0.5), car(-20, 5, 0.1),
                                   car(0, -30, 0.005)};
  FrameDiagnostics d;
  const FrameResult r = tracker.process_frame(0.0, dets, &d);
  EXPECT_EQ(d.detections.raw.size(), 4u);
  EXPECT_EQ(d.detections.filtered.size(), 3u);
  EXPECT_EQ(d.detections.high.size(), 1u);
  EXPECT_EQ(d.detections.low_coarse.size(), 1u);
  // With no tracklets nothing is recalled, so the low detection is dropped.
  EXPECT_TRUE(d.detections.low_recalled.empty());
  EXPECT_EQ(d.births, 1u);
  EXPECT_EQ(d.alive_before, 0u);
  EXPECT_EQ(d.alive_after, 1u);
  ASSERT_EQ(r.objects.size(), 1u);
  EXPECT_NEAR(r.objects[0].box.center.x(), 20.0, 1e-9);
}

TEST(Tracker, ScoreSmoothing)
{
  Tracker tracker(TrackerConfig::defaults(), make_ring_rig(6));
  const std::vector<Box3D> a = {car(20, 0, 0.9)};
  const std::vector<Box3D> b = {car(20, 0, 0.5)};
  tracker.process_frame(0.0, a);
  const FrameResult r = tracker.process_frame(0.5, b);
  ASSERT_EQ(r.objects.size(), 1u);
  const double s = tracker.config().score_smoothing;
  EXPECT_NEAR(r.objects[0].box.score, s * 0.9 + (1 - s) * 0.5, 1e-12);
}

// Frame 1 holds a low-score detection behind car A along camera 0's optical
// axis: image-overlapping with A, BEV-disjoint from it. The visual tracker
// pairs it with A, but A is taken in the motion stage, so the appearance
// stage hands it to neighbour B.
struct AdversarialScene
{
  TrackerConfig config = [] {
    TrackerConfig c = TrackerConfig::defaults();
    c.categories[Category::kCar].tracker_filter_threshold = -0.1;
    c.categories[Category::kCar].appearance_threshold = 0.5;
    return c;
  }();
  std::vector<Box3D> frame0 = {car(20, 0, 0.9), car(20, 4, 0.9)};
  std::vector<Box3D> frame1 = {car(20, 0, 0.9), car(25, 1.0, 0.15)};
};

FrameDiagnostics run_adversarial(bool verification)
{
  AdversarialScene scene;
  scene.config.flags.two_step_verification = verification;
  Tracker tracker(scene.config, make_ring_rig(6));
  tracker.process_frame(0.0, scene.frame0);
  FrameDiagnostics d;
  tracker.process_frame(0.5, scene.frame1, &d);
  return d;
}

TEST(Tracker, TwoStepVerification)
{
  const FrameDiagnostics on = run_adversarial(true);
  ASSERT_EQ(on.pre_matches.count(1), 1u);
  EXPECT_EQ(on.pre_matches.at(1), 1u);
  ASSERT_EQ(on.low_score_matches.size(), 1u);
  EXPECT_EQ(on.low_score_matches[0].tracklet, 2u);
  EXPECT_FALSE(on.low_score_matches[0].retained);
  for (const Match & m : on.matches) {
    if (m.low_score) {
      ASSERT_EQ(on.pre_matches.count(m.detection.index), 1u);
      EXPECT_EQ(on.pre_matches.at(m.detection.index), m.tracklet);
    }
  }

  const FrameDiagnostics off = run_adversarial(false);
  ASSERT_EQ(off.low_score_matches.size(), 1u);
  EXPECT_TRUE(off.low_score_matches[0].retained);
  bool inconsistent = false;
  for (const Match & m : off.matches) {
    if (m.low_score) inconsistent |= off.pre_matches.at(m.detection.index) != m.tracklet;
  }
  EXPECT_TRUE(inconsistent);
}

TEST(Tracker, SecondAssociationSwitch)
{
  AdversarialScene scene;
  scene.config.flags.second_association = false;
  Tracker tracker(scene.config, make_ring_rig(6));
  tracker.process_frame(0.0, scene.frame0);
  FrameDiagnostics d;
  tracker.process_frame(0.5, scene.frame1, &d);
  for (const Match & m : d.matches) EXPECT_EQ(m.stage, MatchStage::kMotion);
  EXPECT_TRUE(d.low_score_matches.empty());
}

TEST(RunSequence, MatchesManualLoopAndPrefixesErrors)
{
  const TrackerConfig cfg = TrackerConfig::defaults();
  const CameraRig rig = make_ring_rig(6);
  std::vector<SequenceFrame> frames;
  for (int f = 0; f < 6; ++f) {
    frames.push_back({"t" + std::to_string(f), 0.5 * f, {car(10 + f, 0, 0.8, 2, 0), car(-12, 5, 0.6)}});
  }
  const auto results = run_sequence(frames, rig, cfg);
  Tracker manual(cfg, rig);
  ASSERT_EQ(results.size(), frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const FrameResult r = manual.process_frame(frames[f].timestamp, frames[f].detections);
    ASSERT_EQ(r.objects.size(), results[f].objects.size());
    for (std::size_t k = 0; k < r.objects.size(); ++k) {
      EXPECT_EQ(r.objects[k].id, results[f].objects[k].id);
      EXPECT_EQ(r.objects[k].box.center, results[f].objects[k].box.center);
    }
  }
  frames[3].timestamp = 0.1;
  try {
    run_sequence(frames, rig, cfg);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfOrder);
    EXPECT_NE(std::string(e.what()).find("frame 3"), std::string::npos) << e.what();
  }
}

TEST(Tracker, ThreadCountDoesNotChangeOutput)
{
  TrackerConfig one = TrackerConfig::defaults();
  TrackerConfig four = one;
  four.threads = 4;
  const CameraRig rig = make_ring_rig(6);
  Tracker a(one, rig), b(four, rig);
  for (int f = 0; f < 10; ++f) {
    std::vector<Box3D> dets;
    for (int k = 0; k < 12; ++k) {
      Box3D x = car(8 + 3 * k, (k % 3) * 5.0 - 5, 0.1 + 0.07 * k, 1.0, 0.2);
      x.category = kAllCategories[k % kNumCategories];
      x.center.x() += 0.5 * f;
      dets.push_back(x);
    }
    const FrameResult ra = a.process_frame(0.5 * f, dets);
    const FrameResult rb = b.process_frame(0.5 * f, dets);
    ASSERT_EQ(ra.objects.size(), rb.objects.size());
    for (std::size_t k = 0; k < ra.objects.size(); ++k) {
      EXPECT_EQ(ra.objects[k].id, rb.objects[k].id);
      EXPECT_EQ(ra.objects[k].box.center, rb.objects[k].box.center);
      EXPECT_EQ(ra.objects[k].box.score, rb.objects[k].box.score);
    }
  }
}

}  // namespace
}  // namespace camtrack
