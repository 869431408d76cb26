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

#ifndef CAMTRACK__LIFECYCLE_HPP_
#define CAMTRACK__LIFECYCLE_HPP_

#include "camtrack/motion.hpp"
#include "camtrack/preprocess.hpp"
#include "camtrack/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace camtrack
{

enum class TrackStatus { kTentative, kActive, kDead };

const char * status_name(TrackStatus status);

struct Tracklet
{
  std::uint64_t id{0};
  Category category{Category::kCar};
  KinematicState state;
  TrackStatus status{TrackStatus::kTentative};
  int hit_streak{0};
  int miss_streak{0};
  /// Exponentially smoothed detection score, reported as the tracking score.
  double score{0.0};
  double birth_time{0.0};

  Box3D box() const { return state_box(state, category, score); }
  TrackView view() const { return TrackView{id, box()}; }
};

struct LifecycleConfig
{
  int hit_count{2};  ///< consecutive hits that confirm a tentative tracklet
  int max_age{2};    ///< consecutive misses that kill a tracklet
};

/// Hands out strictly increasing tracklet ids starting at 1.
class IdAllocator
{
public:
  std::uint64_t next() { return ++last_; }
  std::uint64_t last() const { return last_; }

private:
  std::uint64_t last_{0};
};

struct TrackInit
{
  MotionModel model{MotionModel::kCtra};
  NoiseProfile initial_covariance{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
};

/// Births: unmatched high-score detections start Active, unmatched low-score
/// detections start Tentative. Ids are assigned in input order, high first.
std::vector<Tracklet> initialize(
  std::span<const Detection> unmatched_high, std::span<const Detection> unmatched_low,
  double timestamp, IdAllocator & ids, const PerCategory<TrackInit> & init);

/// Advances the hit/miss counters by one frame. Throws on a Dead tracklet.
void step(Tracklet & tracklet, bool matched, const LifecycleConfig & config);

/// Union of the three groups without Dead tracklets, ordered by id. Throws
/// Error(kInvalidArgument) on duplicate ids.
std::vector<Tracklet> merge(
  std::vector<Tracklet> newborn, std::vector<Tracklet> matched, std::vector<Tracklet> unmatched);

}  // namespace camtrack

#endif  // CAMTRACK__LIFECYCLE_HPP_
