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

#include "camtrack/association.hpp"

#include "camtrack/parallel.hpp"

#include <algorithm>

namespace camtrack
{

namespace
{

struct CategoryOutcome
{
  std::vector<Match> matches;
  std::vector<Detection> unmatched_dets;
  std::vector<bool> unmatched_low;
  std::vector<TrackView> unmatched_tracks;
  std::size_t valid{0};
};

// Shared per-category driver. `candidates` carries (detection, low flag);
// `price` returns the cost for a pair or NaN when the pair is invalid.
template <class Price>
CategoryOutcome associate_category(
  const std::vector<std::pair<Detection, bool>> & candidates,
  const std::vector<TrackView> & tracks, Category category, double threshold, GatingMode gating,
  MatchStage stage, Price && price)
{
  CategoryOutcome out;
  CostMatrix cost(candidates.size(), tracks.size(), category);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = 0; j < tracks.size(); ++j) {
      const double c = price(i, j);
      cost.set(i, j, c);
      if (cost.allowed(i, j)) {
        ++out.valid;
      }
    }
  }
  const Assignment assignment = gated_assignment(cost, threshold, gating);
  std::vector<bool> det_used(candidates.size(), false);
  std::vector<bool> trk_used(tracks.size(), false);
  for (const auto & [i, j] : assignment.pairs) {
    det_used[i] = true;
    trk_used[j] = true;
    out.matches.push_back(
      Match{candidates[i].first, tracks[j].id, stage, candidates[i].second, cost(i, j)});
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!det_used[i]) {
      out.unmatched_dets.push_back(candidates[i].first);
      out.unmatched_low.push_back(candidates[i].second);
    }
  }
  for (std::size_t j = 0; j < tracks.size(); ++j) {
    if (!trk_used[j]) {
      out.unmatched_tracks.push_back(tracks[j]);
    }
  }
  return out;
}

AssociationResult assemble(PerCategory<CategoryOutcome> & per_category)
{
  AssociationResult result;
  for (const Category c : kAllCategories) {
    CategoryOutcome & o = per_category[c];
    result.matches.insert(result.matches.end(), o.matches.begin(), o.matches.end());
    for (std::size_t i = 0; i < o.unmatched_dets.size(); ++i) {
      (o.unmatched_low[i] ? result.unmatched_low : result.unmatched_high)
        .push_back(o.unmatched_dets[i]);
    }
    result.unmatched_tracks.insert(
      result.unmatched_tracks.end(), o.unmatched_tracks.begin(), o.unmatched_tracks.end());
    result.valid_similarities += o.valid;
  }
  return result;
}

std::vector<TrackView> tracks_of(std::span<const TrackView> tracks, Category category)
{
  std::vector<TrackView> out;
  for (const auto & t : tracks) {
    if (t.box.category == category) {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace

AssociationResult first_association(
  std::span<const Detection> high, std::span<const TrackView> tracks,
  const FirstAssociationSettings & settings, int threads)
{
  PerCategory<CategoryOutcome> per_category;
  for_each_category(threads, [&](Category category) {
    std::vector<std::pair<Detection, bool>> candidates;
    for (const auto & d : high) {
      if (d.box.category == category) {
        candidates.emplace_back(d, false);
      }
    }
    const std::vector<TrackView> trks = tracks_of(tracks, category);
    const BoxMetric metric = settings.metric[category];
    per_category[category] = associate_category(
      candidates, trks, category, settings.thresholds[category], settings.gating,
      MatchStage::kMotion, [&](std::size_t i, std::size_t j) {
        return 1.0 - box_similarity(metric, candidates[i].first.box, trks[j].box);
      });
  });
  return assemble(per_category);
}

AssociationResult second_association(
  std::span<const Detection> unmatched_high, std::span<const Detection> recalled_low,
  std::span<const TrackView> unmatched_tracks, const CameraRig & rig,
  const SecondAssociationSettings & settings, int threads)
{
  PerCategory<CategoryOutcome> per_category;
  for_each_category(threads, [&](Category category) {
    std::vector<std::pair<Detection, bool>> candidates;
    std::vector<Box3D> det_boxes;
    for (const auto & d : unmatched_high) {
      if (d.box.category == category) {
        candidates.emplace_back(d, false);
        det_boxes.push_back(d.box);
      }
    }
    for (const auto & d : recalled_low) {
      if (d.box.category == category) {
        candidates.emplace_back(d, true);
        det_boxes.push_back(d.box);
      }
    }
    const std::vector<TrackView> trks = tracks_of(unmatched_tracks, category);
    std::vector<Box3D> trk_boxes;
    for (const auto & t : trks) {
      trk_boxes.push_back(t.box);
    }
    const SimilarityMatrix similarity = candidates.empty() || trks.empty()
                                          ? SimilarityMatrix(
                                              static_cast<Eigen::Index>(candidates.size()),
                                              static_cast<Eigen::Index>(trks.size()))
                                          : mcas(det_boxes, trk_boxes, rig, settings.mcas);
    per_category[category] = associate_category(
      candidates, trks, category, settings.thresholds[category], settings.gating,
      MatchStage::kAppearance, [&](std::size_t i, std::size_t j) {
        return -similarity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      });
  });
  return assemble(per_category);
}

VerificationResult verify_two_step(std::span<const Match> matches, const PreMatchMap & pre_matches)
{
  VerificationResult out;
  for (const auto & m : matches) {
    if (!m.low_score) {
      out.retained.push_back(m);
      continue;
    }
    const auto it = pre_matches.find(m.detection.index);
    if (it != pre_matches.end() && it->second == m.tracklet) {
      out.retained.push_back(m);
    } else {
      out.discarded.push_back(m);
    }
  }
  return out;
}

}  // namespace camtrack
