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

#include "camtrack/lifecycle.hpp"

#include "camtrack/error.hpp"

#include <algorithm>
#include <string>

namespace camtrack
{

const char * status_name(TrackStatus status)
{
  switch (status) {
    case TrackStatus::kTentative: return "tentative";
    case TrackStatus::kActive: return "active";
    case TrackStatus::kDead: return "dead";
  }
  return "unknown";
}

std::vector<Tracklet> initialize(
  std::span<const Detection> unmatched_high, std::span<const Detection> unmatched_low,
  double timestamp, IdAllocator & ids, const PerCategory<TrackInit> & init)
{
  std::vector<Tracklet> born;
  born.reserve(unmatched_high.size() + unmatched_low.size());
  const auto spawn = [&](const Detection & d, TrackStatus status) {
    const TrackInit & cfg = init[d.box.category];
    Tracklet t;
    t.id = ids.next();
    t.category = d.box.category;
    t.state = initial_state(d.box, cfg.model, cfg.initial_covariance);
    t.status = status;
    t.score = d.box.score;
    t.birth_time = timestamp;
    born.push_back(std::move(t));
  };
  for (const auto & d : unmatched_high) {
    spawn(d, TrackStatus::kActive);
  }
  for (const auto & d : unmatched_low) {
    spawn(d, TrackStatus::kTentative);
  }
  return born;
}

void step(Tracklet & tracklet, bool matched, const LifecycleConfig & config)
{
  if (tracklet.status == TrackStatus::kDead) {
    throw Error(
      ErrorCode::kInvalidArgument, "cannot step dead tracklet " + std::to_string(tracklet.id));
  }
  if (matched) {
    ++tracklet.hit_streak;
    tracklet.miss_streak = 0;
    if (tracklet.status == TrackStatus::kTentative && tracklet.hit_streak >= config.hit_count) {
      tracklet.status = TrackStatus::kActive;
    }
    return;
  }
  tracklet.hit_streak = 0;
  ++tracklet.miss_streak;
  if (tracklet.status == TrackStatus::kTentative || tracklet.miss_streak >= config.max_age) {
    tracklet.status = TrackStatus::kDead;
  }
}

std::vector<Tracklet> merge(
  std::vector<Tracklet> newborn, std::vector<Tracklet> matched, std::vector<Tracklet> unmatched)
{
  std::vector<Tracklet> alive;
  alive.reserve(newborn.size() + matched.size() + unmatched.size());
  for (auto * group : {&newborn, &matched, &unmatched}) {
    for (auto & t : *group) {
      alive.push_back(std::move(t));
    }
  }
  std::sort(alive.begin(), alive.end(), [](const Tracklet & a, const Tracklet & b) {
    return a.id < b.id;
  });
  const auto dup = std::adjacent_find(
    alive.begin(), alive.end(), [](const Tracklet & a, const Tracklet & b) { return a.id == b.id; });
  if (dup != alive.end()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate tracklet id " + std::to_string(dup->id));
  }
  std::erase_if(alive, [](const Tracklet & t) { return t.status == TrackStatus::kDead; });
  return alive;
}

}  // namespace camtrack
