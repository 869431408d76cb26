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

#ifndef CAMTRACK__ASSOCIATION_HPP_
#define CAMTRACK__ASSOCIATION_HPP_

#include "camtrack/assignment.hpp"
#include "camtrack/camera.hpp"
#include "camtrack/geometry.hpp"
#include "camtrack/preprocess.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace camtrack
{

/// Stage index used by the noise model: 0 for motion matches, 1 for
/// appearance matches.
enum class MatchStage : int { kMotion = 0, kAppearance = 1 };

struct Match
{
  Detection detection;
  std::uint64_t tracklet{0};
  MatchStage stage{MatchStage::kMotion};
  bool low_score{false};
  double cost{0.0};
};

struct AssociationResult
{
  std::vector<Match> matches;
  std::vector<Detection> unmatched_high;
  std::vector<Detection> unmatched_low;
  std::vector<TrackView> unmatched_tracks;
  /// Low-score matches rejected by two-step verification.
  std::vector<Match> discarded;
  std::size_t valid_similarities{0};
};

struct FirstAssociationSettings
{
  PerCategory<BoxMetric> metric = PerCategory<BoxMetric>::filled(BoxMetric::kGiouBev);
  PerCategory<double> thresholds{};
  GatingMode gating{GatingMode::kSolveThenFilter};
};

/// Motion matching of high-score detections in BEV/3D space with cost
/// 1 - metric. Cross-category pairs are never considered.
AssociationResult first_association(
  std::span<const Detection> high, std::span<const TrackView> tracks,
  const FirstAssociationSettings & settings, int threads = 1);

struct SecondAssociationSettings
{
  PerCategory<double> thresholds{};
  McasOptions mcas{ImageMetric::kGiou2d, FuseMode::kSum};
  GatingMode gating{GatingMode::kSolveThenFilter};
};

/// Appearance matching in image space with cost -MCAS between the remaining
/// high-score detections plus recalled low-score detections and the tracklets
/// left over from the first stage.
AssociationResult second_association(
  std::span<const Detection> unmatched_high, std::span<const Detection> recalled_low,
  std::span<const TrackView> unmatched_tracks, const CameraRig & rig,
  const SecondAssociationSettings & settings, int threads = 1);

struct VerificationResult
{
  std::vector<Match> retained;
  std::vector<Match> discarded;
};

/// Keeps a low-score appearance match only if pre-processing paired the same
/// detection with the same tracklet. High-score matches pass through.
VerificationResult verify_two_step(std::span<const Match> matches, const PreMatchMap & pre_matches);

}  // namespace camtrack

#endif  // CAMTRACK__ASSOCIATION_HPP_
