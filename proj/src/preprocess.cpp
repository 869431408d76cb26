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

#include "camtrack/preprocess.hpp"

#include "camtrack/parallel.hpp"

#include <algorithm>
#include <numeric>

namespace camtrack
{

std::vector<Detection> geometry_filter(
  std::span<const Box3D> raw, const PerCategory<NmsSettings> & settings, int threads)
{
  PerCategory<std::vector<Detection>> kept;
  for_each_category(threads, [&](Category category) {
    const NmsSettings & nms = settings[category];
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i].category == category) {
        order.push_back(i);
      }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Box3D & p = raw[a];
      const Box3D & q = raw[b];
      if (p.score != q.score) return p.score > q.score;
      if (p.center.x() != q.center.x()) return p.center.x() < q.center.x();
      if (p.center.y() != q.center.y()) return p.center.y() < q.center.y();
      return a < b;
    });

    std::vector<Box3D> kept_scaled;
    for (const std::size_t i : order) {
      const Box3D scaled = scale_box(raw[i], nms.scale_factor);
      const bool suppressed =
        std::any_of(kept_scaled.begin(), kept_scaled.end(), [&](const Box3D & k) {
          return box_similarity(nms.metric, k, scaled) > nms.threshold;
        });
      if (!suppressed) {
        kept_scaled.push_back(scaled);
        kept[category].push_back(Detection{i, raw[i]});
      }
    }
  });

  std::vector<Detection> out;
  for (const Category c : kAllCategories) {
    out.insert(out.end(), kept[c].begin(), kept[c].end());
  }
  return out;
}

ScoreSplit score_split(
  std::span<const Detection> filtered, const PerCategory<double> & thresholds, double floor)
{
  ScoreSplit split;
  for (const auto & d : filtered) {
    if (d.box.score < floor) {
      continue;
    }
    if (d.box.score >= thresholds[d.box.category]) {
      split.high.push_back(d);
    } else {
      split.low_coarse.push_back(d);
    }
  }
  return split;
}

TrackerFilterResult tracker_filter(
  std::span<const Detection> low_coarse, std::span<const TrackView> tracks, const CameraRig & rig,
  const TrackerFilterSettings & settings, int threads)
{
  struct Partial
  {
    std::vector<Detection> recalled;
    std::vector<std::pair<std::size_t, std::uint64_t>> pairs;
    std::size_t valid{0};
  };
  PerCategory<Partial> partial;

  for_each_category(threads, [&](Category category) {
    std::vector<const Detection *> dets;
    std::vector<Box3D> det_boxes;
    for (const auto & d : low_coarse) {
      if (d.box.category == category) {
        dets.push_back(&d);
        det_boxes.push_back(d.box);
      }
    }
    std::vector<const TrackView *> trks;
    std::vector<Box3D> trk_boxes;
    for (const auto & t : tracks) {
      if (t.box.category == category) {
        trks.push_back(&t);
        trk_boxes.push_back(t.box);
      }
    }
    if (dets.empty() || trks.empty()) {
      return;
    }
    const SimilarityMatrix similarity = mcas(det_boxes, trk_boxes, rig, settings.mcas);
    CostMatrix cost(dets.size(), trks.size(), category);
    Partial & out = partial[category];
    for (std::size_t i = 0; i < dets.size(); ++i) {
      for (std::size_t j = 0; j < trks.size(); ++j) {
        const double s = similarity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (is_valid_similarity(s)) {
          cost.set(i, j, -s);
          ++out.valid;
        }
      }
    }
    const Assignment assignment =
      gated_assignment(cost, settings.thresholds[category], settings.gating);
    for (const auto & [i, j] : assignment.pairs) {
      out.recalled.push_back(*dets[i]);
      out.pairs.emplace_back(dets[i]->index, trks[j]->id);
    }
  });

  TrackerFilterResult result;
  for (const Category c : kAllCategories) {
    const Partial & p = partial[c];
    result.recalled.insert(result.recalled.end(), p.recalled.begin(), p.recalled.end());
    result.pre_matches.insert(p.pairs.begin(), p.pairs.end());
    result.valid_similarities += p.valid;
  }
  return result;
}

}  // namespace camtrack
