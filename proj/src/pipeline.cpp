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

#include "camtrack/pipeline.hpp"

#include "camtrack/error.hpp"

#include <algorithm>
#include <string>

namespace camtrack
{

Tracker::Tracker(TrackerConfig config, CameraRig rig)
: config_(std::move(config)), rig_(std::move(rig))
{
  validate(config_);
  if (rig_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tracker needs a non-empty camera rig");
  }
}

FrameResult Tracker::process_frame(
  double timestamp, std::span<const Box3D> detections, FrameDiagnostics * diagnostics)
{
  if (last_timestamp_ && timestamp < *last_timestamp_) {
    throw Error(
      ErrorCode::kOutOfOrder, "frame timestamp " + std::to_string(timestamp) +
                                " precedes previous frame " + std::to_string(*last_timestamp_));
  }
  const double dt = last_timestamp_ ? timestamp - *last_timestamp_ : 0.0;
  last_timestamp_ = timestamp;

  const FeatureFlags & flags = config_.flags;
  const auto & cats = config_.categories;
  const int threads = config_.threads;
  const std::size_t alive_before = tracklets_.size();

  // (I) predict
  if (dt > 0.0) {
    for (auto & t : tracklets_) {
      predict(t.state, dt, cats[t.category].process_noise, config_.motion);
    }
  }
  std::vector<TrackView> views;
  views.reserve(tracklets_.size());
  for (const auto & t : tracklets_) {
    views.push_back(t.view());
  }

  // (II) pre-processing
  PerCategory<NmsSettings> nms;
  PerCategory<double> score_thresholds;
  TrackerFilterSettings filter_settings{{}, config_.preprocess_mcas, config_.gating};
  FirstAssociationSettings first_settings;
  first_settings.gating = config_.gating;
  SecondAssociationSettings second_settings{{}, config_.association_mcas, config_.gating};
  PerCategory<TrackInit> init;
  for (const Category c : kAllCategories) {
    const CategoryConfig & cc = cats[c];
    nms[c] = NmsSettings{flags.geometry_filter ? cc.scale_factor : 1.0, cc.nms_metric, cc.nms_threshold};
    score_thresholds[c] = cc.score_threshold;
    filter_settings.thresholds[c] = cc.tracker_filter_threshold;
    first_settings.metric[c] = cc.association_metric;
    first_settings.thresholds[c] = cc.motion_threshold;
    second_settings.thresholds[c] = cc.appearance_threshold;
    init[c] = TrackInit{cc.motion_model, cc.initial_covariance};
  }

  const std::vector<Detection> filtered = geometry_filter(detections, nms, threads);
  ScoreSplit split = score_split(filtered, score_thresholds, config_.score_floor);
  TrackerFilterResult recalled;
  if (flags.tracker_filter) {
    recalled = tracker_filter(split.low_coarse, views, rig_, filter_settings, threads);
  }

  // (III) association
  AssociationResult first = first_association(split.high, views, first_settings, threads);
  std::vector<Match> matches = first.matches;
  std::vector<Detection> unmatched_high = first.unmatched_high;
  std::vector<Detection> unmatched_low;
  std::vector<LowScoreMatchRecord> low_records;
  std::size_t valid_mcas = recalled.valid_similarities;
  if (flags.second_association) {
    AssociationResult second = second_association(
      first.unmatched_high, recalled.recalled, first.unmatched_tracks, rig_, second_settings,
      threads);
    valid_mcas += second.valid_similarities;
    VerificationResult verified;
    if (flags.two_step_verification) {
      verified = verify_two_step(second.matches, recalled.pre_matches);
    } else {
      verified.retained = second.matches;
    }
    const auto record = [&](const Match & m, bool retained) {
      if (!m.low_score) {
        return;
      }
      LowScoreMatchRecord rec{m.detection.index, m.tracklet, std::nullopt, retained};
      if (const auto it = recalled.pre_matches.find(m.detection.index);
          it != recalled.pre_matches.end()) {
        rec.pre_match = it->second;
      }
      low_records.push_back(rec);
    };
    for (const auto & m : verified.retained) {
      record(m, true);
    }
    for (const auto & m : verified.discarded) {
      record(m, false);
    }
    matches.insert(matches.end(), verified.retained.begin(), verified.retained.end());
    unmatched_high = std::move(second.unmatched_high);
    unmatched_low = std::move(second.unmatched_low);
  }

  // (IV) update
  const auto find_tracklet = [&](std::uint64_t id) -> Tracklet & {
    const auto it = std::lower_bound(
      tracklets_.begin(), tracklets_.end(), id,
      [](const Tracklet & t, std::uint64_t key) { return t.id < key; });
    if (it == tracklets_.end() || it->id != id) {
      throw Error(ErrorCode::kInternal, "match refers to unknown tracklet " + std::to_string(id));
    }
    return *it;
  };
  std::vector<char> matched(tracklets_.size(), 0);
  for (const auto & m : matches) {
    Tracklet & t = find_tracklet(m.tracklet);
    const double score = m.detection.box.score;
    const int stage = flags.stage_factor ? static_cast<int>(m.stage) : 0;
    const MeasurementNoise noise = flags.heuristic_noise
                                     ? measurement_noise(stage, score)
                                     : MeasurementNoise{config_.fixed_measurement_noise};
    update(t.state, m.detection.box, noise, config_.yaw_flip_correction);
    t.score = config_.score_smoothing * t.score + (1.0 - config_.score_smoothing) * score;
    matched[static_cast<std::size_t>(&t - tracklets_.data())] = 1;
  }

  // (V) lifecycle
  std::vector<Tracklet> updated;
  std::vector<Tracklet> coasting;
  std::size_t deaths = 0;
  for (std::size_t i = 0; i < tracklets_.size(); ++i) {
    Tracklet & t = tracklets_[i];
    step(t, matched[i] != 0, cats[t.category].lifecycle);
    if (t.status == TrackStatus::kDead) {
      ++deaths;
    }
    (matched[i] ? updated : coasting).push_back(std::move(t));
  }
  std::vector<Tracklet> newborn =
    initialize(unmatched_high, unmatched_low, timestamp, ids_, init);
  const std::size_t births = newborn.size();
  tracklets_ = merge(std::move(newborn), std::move(updated), std::move(coasting));

  FrameResult result;
  result.timestamp = timestamp;
  for (const auto & t : tracklets_) {
    if (t.status == TrackStatus::kActive && (t.miss_streak == 0 || config_.emit_coasting)) {
      result.objects.push_back(TrackedObject{t.id, t.box()});
    }
  }

  if (diagnostics) {
    diagnostics->detections.timestamp = timestamp;
    diagnostics->detections.raw.assign(detections.begin(), detections.end());
    diagnostics->detections.filtered = filtered;
    diagnostics->detections.high = std::move(split.high);
    diagnostics->detections.low_coarse = std::move(split.low_coarse);
    diagnostics->detections.low_recalled = recalled.recalled;
    diagnostics->pre_matches = recalled.pre_matches;
    diagnostics->matches = std::move(matches);
    diagnostics->low_score_matches = std::move(low_records);
    diagnostics->births = births;
    diagnostics->deaths = deaths;
    diagnostics->alive_before = alive_before;
    diagnostics->alive_after = tracklets_.size();
    diagnostics->valid_mcas_entries = valid_mcas;
  }
  return result;
}

std::vector<FrameResult> run_sequence(
  std::span<const SequenceFrame> frames, const CameraRig & rig, const TrackerConfig & config)
{
  Tracker tracker(config, rig);
  std::vector<FrameResult> results;
  results.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    try {
      results.push_back(tracker.process_frame(frames[i].timestamp, frames[i].detections));
    } catch (const Error & e) {
      throw Error(e.code(), "frame " + std::to_string(i) + ": " + e.what());
    }
  }
  return results;
}

}  // namespace camtrack
