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

#include "camtrack/error.hpp"
#include "camtrack/evaluation.hpp"

#include <gtest/gtest.h>

namespace camtrack
{
namespace
{

Box3D at(double x, double y, double score = 1.0, Category c = Category::kCar)
{
  return Box3D(Eigen::Vector3d(x, y, 0.8), Eigen::Vector3d(1.8, 4.5, 1.6), 0.0, score, c);
}

Manifest three_frames()
{
  return Manifest{SceneInfo{"s", {{"f0", 0.0}, {"f1", 0.5}, {"f2", 1.0}}}};
}

GroundTruthSet one_object()
{
  GroundTruthSet gt;
  for (const char * t : {"f0", "f1", "f2"}) gt[t].push_back({at(10, 0), "g1"});
  return gt;
}

TrackingSet follow(std::vector<std::string> ids, double dx = 0.0)
{
  TrackingSet tracks;
  const char * tokens[] = {"f0", "f1", "f2"};
  for (std::size_t f = 0; f < 3; ++f) {
    if (!ids[f].empty()) tracks[tokens[f]].push_back({at(10 + dx, 0, 0.9), ids[f]});
  }
  return tracks;
}

TEST(Evaluate, PerfectTracking)
{
  const MetricReport r = evaluate(follow({"1", "1", "1"}), one_object(), three_frames());
  const CategoryMetrics & car = r.categories[Category::kCar];
  EXPECT_TRUE(car.present);
  EXPECT_EQ(car.gt, 3u);
  EXPECT_EQ(car.tp, 3u);
  EXPECT_EQ(car.fp + car.fn + car.ids, 0u);
  EXPECT_DOUBLE_EQ(car.mota, 1.0);
  EXPECT_DOUBLE_EQ(car.amota, 1.0);
  EXPECT_DOUBLE_EQ(car.amotp, 0.0);
  EXPECT_DOUBLE_EQ(r.aggregate.amota, 1.0);
  EXPECT_EQ(r.notes.size(), kNumCategories - 1);
}

TEST(Evaluate, IdentitySwitch)
{
  const MetricReport r = evaluate(follow({"1", "2", "2"}), one_object(), three_frames());
  const CategoryMetrics & car = r.categories[Category::kCar];
  EXPECT_EQ(car.ids, 1u);
  EXPECT_EQ(car.tp, 3u);
  EXPECT_NEAR(car.mota, 2.0 / 3.0, 1e-12);
  // At every recall step all three matches are kept; one switch against
  // P = 3 gives MOTAR = min(1, 2 / (3 r)).
  double expected = 0.0;
  for (int k = 1; k <= 40; ++k) expected += std::min(1.0, 2.0 / (3.0 * k / 40.0));
  EXPECT_NEAR(car.amota, expected / 40.0, 1e-12);
}

TEST(Evaluate, SwitchBackCountsTwice)
{
  EXPECT_EQ(
    evaluate(follow({"1", "2", "1"}), one_object(), three_frames()).categories[Category::kCar].ids,
    2u);
}

TEST(Evaluate, ClutterAddsFalsePositive)
{
  TrackingSet tracks = follow({"1", "1", "1"});
  tracks["f1"].push_back({at(40, 0, 0.5), "9"});
  const CategoryMetrics car = evaluate(tracks, one_object(), three_frames()).categories[Category::kCar];
  EXPECT_EQ(car.fp, 1u);
  EXPECT_NEAR(car.mota, 2.0 / 3.0, 1e-12);
  // The clutter scores below every true match and is cut at all thresholds.
  EXPECT_DOUBLE_EQ(car.amota, 1.0);
}

TEST(Evaluate, MissingPredictionAddsFalseNegative)
{
  const CategoryMetrics car =
    evaluate(follow({"1", "1", ""}), one_object(), three_frames()).categories[Category::kCar];
  EXPECT_EQ(car.fn, 1u);
  EXPECT_EQ(car.tp, 2u);
  EXPECT_NEAR(car.mota, 2.0 / 3.0, 1e-12);
  // Recall above 2/3 (k >= 27) is unreachable: those 14 steps score 0 with
  // AMOTP 2.
  EXPECT_NEAR(car.amota, 26.0 / 40.0, 1e-12);
  EXPECT_NEAR(car.amotp, 14.0 * 2.0 / 40.0, 1e-12);
}

TEST(Evaluate, MatchDistance)
{
  const CategoryMetrics near =
    evaluate(follow({"1", "1", "1"}, 1.5), one_object(), three_frames()).categories[Category::kCar];
  EXPECT_EQ(near.tp, 3u);
  EXPECT_NEAR(near.amotp, 1.5, 1e-12);
  const CategoryMetrics edge =
    evaluate(follow({"1", "1", "1"}, 2.0), one_object(), three_frames()).categories[Category::kCar];
  EXPECT_EQ(edge.tp, 3u);
  const CategoryMetrics far =
    evaluate(follow({"1", "1", "1"}, 2.5), one_object(), three_frames()).categories[Category::kCar];
  EXPECT_EQ(far.tp, 0u);
  EXPECT_EQ(far.fp, 3u);
  EXPECT_EQ(far.fn, 3u);
  EXPECT_DOUBLE_EQ(far.mota, 0.0);
  EXPECT_DOUBLE_EQ(far.amota, 0.0);
  EXPECT_DOUBLE_EQ(far.amotp, 2.0);
}

TEST(Evaluate, EmptyResults)
{
  const MetricReport r = evaluate({}, one_object(), three_frames());
  const CategoryMetrics & car = r.categories[Category::kCar];
  EXPECT_EQ(car.fn, 3u);
  EXPECT_DOUBLE_EQ(car.mota, 0.0);
  EXPECT_DOUBLE_EQ(car.amota, 0.0);
  EXPECT_DOUBLE_EQ(car.amotp, 2.0);
}

TEST(Evaluate, ScoreSweepDropsLowClutter)
{
  const Manifest m{SceneInfo{"s", {{"f0", 0.0}}}};
  GroundTruthSet gt;
  gt["f0"] = {{at(0, 10), "a"}, {at(0, 20), "b"}};
  TrackingSet tr;
  tr["f0"] = {{at(0, 10, 0.9), "1"}, {at(0, 20, 0.3), "2"}, {at(0, 40, 0.2), "3"}};
  const CategoryMetrics car = evaluate(tr, gt, m).categories[Category::kCar];
  EXPECT_EQ(car.fp, 1u);
  EXPECT_NEAR(car.mota, 0.5, 1e-12);
  EXPECT_NEAR(car.amota, 1.0, 1e-12);
}

TEST(Evaluate, GreedyByScore)
{
  // The higher-scoring prediction claims the nearer truth first.
  const Manifest m{SceneInfo{"s", {{"f0", 0.0}}}};
  GroundTruthSet gt;
  gt["f0"] = {{at(0, 0), "a"}, {at(0, 3), "b"}};
  TrackingSet tr;
  tr["f0"] = {{at(0, 1.4, 0.4), "1"}, {at(0, 1.6, 0.8), "2"}};
  const CategoryMetrics car = evaluate(tr, gt, m).categories[Category::kCar];
  EXPECT_EQ(car.tp, 2u);
}

TEST(Evaluate, AbsentCategoriesExcluded)
{
  TrackingSet tracks = follow({"1", "1", "1"});
  tracks["f0"].push_back({at(-30, 0, 0.8, Category::kBus), "7"});
  const MetricReport r = evaluate(tracks, one_object(), three_frames());
  EXPECT_FALSE(r.categories[Category::kBus].present);
  EXPECT_EQ(r.categories[Category::kBus].fp, 1u);
  EXPECT_EQ(r.aggregate.fp, 0u);
  EXPECT_DOUBLE_EQ(r.aggregate.amota, 1.0);
  bool noted = false;
  for (const auto & n : r.notes) noted |= n.find("bus") != std::string::npos && n.find("1 prediction") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Evaluate, AggregateIsMeanOverPresent)
{
  GroundTruthSet gt = one_object();
  TrackingSet tracks = follow({"1", "2", "2"});
  for (const char * t : {"f0", "f1", "f2"}) {
    gt[t].push_back({at(-10, 0, 1.0, Category::kPedestrian), "p"});
    tracks[t].push_back({at(-10, 0, 0.9, Category::kPedestrian), "5"});
  }
  const MetricReport r = evaluate(tracks, gt, three_frames());
  const double car = r.categories[Category::kCar].amota;
  EXPECT_NEAR(r.aggregate.amota, 0.5 * (car + 1.0), 1e-12);
  EXPECT_NEAR(r.aggregate.mota, 0.5 * (2.0 / 3.0 + 1.0), 1e-12);
  EXPECT_EQ(r.aggregate.gt, 6u);
  EXPECT_EQ(r.aggregate.ids, 1u);
}

TEST(Evaluate, FramesVisitedInTimestampOrder)
{
  // Listing f2 first must not change the switch count.
  const Manifest shuffled{SceneInfo{"s", {{"f2", 1.0}, {"f0", 0.0}, {"f1", 0.5}}}};
  EXPECT_EQ(
    evaluate(follow({"1", "1", "2"}), one_object(), shuffled).categories[Category::kCar].ids, 1u);
}

TEST(Evaluate, RejectsUnknownTokens)
{
  TrackingSet tracks;
  tracks["nope"];
  EXPECT_THROW(evaluate(tracks, one_object(), three_frames()), Error);
  GroundTruthSet gt = one_object();
  gt["nope"];
  EXPECT_THROW(evaluate({}, gt, three_frames()), Error);
}

TEST(Report, JsonAndTable)
{
  const MetricReport r = evaluate(follow({"1", "1", "1"}), one_object(), three_frames());
  const nlohmann::json j = report_to_json(r);
  EXPECT_DOUBLE_EQ(j["aggregate"]["amota"].get<double>(), 1.0);
  EXPECT_EQ(j["categories"]["car"]["tp"].get<std::size_t>(), 3u);
  EXPECT_FALSE(j["categories"]["bus"]["present"].get<bool>());
  EXPECT_EQ(j["notes"].size(), kNumCategories - 1);
  const std::string t = report_to_table(r);
  EXPECT_NE(t.find("car"), std::string::npos);
  EXPECT_NE(t.find("overall"), std::string::npos);
  EXPECT_EQ(t.find("trailer "), std::string::npos);
}

}  // namespace
}  // namespace camtrack
