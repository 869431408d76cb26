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

#ifndef CAMTRACK__PIPELINE_HPP_
#define CAMTRACK__PIPELINE_HPP_

#include "camtrack/association.hpp"
#include "camtrack/camera.hpp"
#include "camtrack/config.hpp"
#include "camtrack/lifecycle.hpp"
#include "camtrack/preprocess.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace camtrack
{

struct TrackedObject
{
  std::uint64_t id{0};
  Box3D box;  ///< box.score holds the tracking score
};

struct FrameResult
{
  double timestamp{0.0};
  std::vector<TrackedObject> objects;
};

/// A low-score appearance match together with the tracklet the pseudo
/// visual tracker paired the same detection with.
struct LowScoreMatchRecord
{
  std::size_t detection{0};
  std::uint64_t tracklet{0};
  std::optional<std::uint64_t> pre_match;
  bool retained{false};
};

/// Optional per-frame instrumentation.
struct FrameDiagnostics
{
  DetectionFrame detections;
  PreMatchMap pre_matches;
  std::vector<Match> matches;  ///< matches used to update tracklets
  std::vector<LowScoreMatchRecord> low_score_matches;
  std::size_t births{0};
  std::size_t deaths{0};
  std::size_t alive_before{0};
  std::size_t alive_after{0};
  std::size_t valid_mcas_entries{0};
};

/// Stateful tracker for one sequence. Not thread-safe; per-category work
/// inside a frame may run on `config.threads` workers.
class Tracker
{
public:
  Tracker(TrackerConfig config, CameraRig rig);

  /// Runs predict, pre-processing, two-stage association, update and
  /// lifecycle for one frame and returns the Active tracklets.
  /// Throws Error(kOutOfOrder) if `timestamp` is earlier than the previous one.
  FrameResult process_frame(
    double timestamp, std::span<const Box3D> detections, FrameDiagnostics * diagnostics = nullptr);

  const std::vector<Tracklet> & tracklets() const { return tracklets_; }
  const TrackerConfig & config() const { return config_; }
  const CameraRig & rig() const { return rig_; }

private:
  TrackerConfig config_;
  CameraRig rig_;
  std::vector<Tracklet> tracklets_;
  IdAllocator ids_;
  std::optional<double> last_timestamp_;
};

struct SequenceFrame
{
  std::string token;
  double timestamp{0.0};
  std::vector<Box3D> detections;
};

/// Folds process_frame over `frames` with a fresh tracker. Errors are
/// rethrown with the frame index prepended.
std::vector<FrameResult> run_sequence(
  std::span<const SequenceFrame> frames, const CameraRig & rig, const TrackerConfig & config);

}  // namespace camtrack

#endif  // CAMTRACK__PIPELINE_HPP_
