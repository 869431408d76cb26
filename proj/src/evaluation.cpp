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

#include "camtrack/evaluation.hpp"

#include "camtrack/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace camtrack
{

using nlohmann::json;

namespace
{

struct Prediction
{
  Eigen::Vector2d xy;
  double score;
  std::string id;
};

struct Truth
{
  Eigen::Vector2d xy;
  std::string instance;
};

struct Frame
{
  std::vector<Prediction> predictions;  // sorted by descending score
  std::vector<Truth> truths;
};

using Scene = std::vector<Frame>;

struct PassResult
{
  std::size_t tp{0};
  std::size_t fp{0};
  std::size_t fn{0};
  std::size_t ids{0};
  double distance{0.0};
  std::vector<double> tp_scores;
};

// Greedy CLEAR-MOT pass over predictions scoring at least `threshold`.
PassResult clear_pass(const std::vector<Scene> & scenes, double threshold)
{
  PassResult out;
  for (const auto & scene : scenes) {
    std::map<std::string, std::string> last_id;
    for (const auto & frame : scene) {
      std::vector<bool> taken(frame.truths.size(), false);
      for (const auto & p : frame.predictions) {
        if (p.score < threshold) {
          break;
        }
        std::size_t best = frame.truths.size();
        double best_distance = kMatchDistance;
        for (std::size_t g = 0; g < frame.truths.size(); ++g) {
          if (taken[g]) continue;
          const double d = (frame.truths[g].xy - p.xy).norm();
          if (d < best_distance || (d == best_distance && best == frame.truths.size())) {
            best = g;
            best_distance = d;
          }
        }
        if (best == frame.truths.size()) {
          ++out.fp;
          continue;
        }
        taken[best] = true;
        ++out.tp;
        out.distance += best_distance;
        out.tp_scores.push_back(p.score);
        auto [it, inserted] = last_id.try_emplace(frame.truths[best].instance, p.id);
        if (!inserted && it->second != p.id) {
          ++out.ids;
          it->second = p.id;
        }
      }
      out.fn += static_cast<std::size_t>(std::count(taken.begin(), taken.end(), false));
    }
  }
  return out;
}

CategoryMetrics evaluate_category(const std::vector<Scene> & scenes, std::size_t gt)
{
  CategoryMetrics m;
  m.gt = gt;
  m.present = gt > 0;
  const PassResult full = clear_pass(scenes, -std::numeric_limits<double>::infinity());
  m.tp = full.tp;
  m.fp = full.fp;
  m.fn = full.fn;
  m.ids = full.ids;
  if (!m.present) {
    m.mota = 0.0;
    m.amota = 0.0;
    return m;
  }
  const double P = static_cast<double>(gt);
  m.mota = std::max(0.0, 1.0 - static_cast<double>(full.fp + full.fn + full.ids) / P);

  std::vector<double> scores = full.tp_scores;
  std::sort(scores.begin(), scores.end(), std::greater<>());
  double amota = 0.0;
  double amotp = 0.0;
  for (std::size_t k = 1; k <= kRecallSteps; ++k) {
    const double r = static_cast<double>(k) / static_cast<double>(kRecallSteps);
    const auto needed = static_cast<std::size_t>(std::ceil(r * P - 1e-9));
    if (needed == 0 || needed > scores.size()) {
      amotp += kMatchDistance;
      continue;
    }
    const PassResult pass = clear_pass(scenes, scores[needed - 1]);
    const double errors = static_cast<double>(pass.ids + pass.fp + pass.fn) - (1.0 - r) * P;
    amota += std::clamp(1.0 - errors / (r * P), 0.0, 1.0);
    amotp += pass.tp > 0 ? pass.distance / static_cast<double>(pass.tp) : kMatchDistance;
  }
  m.amota = amota / static_cast<double>(kRecallSteps);
  m.amotp = amotp / static_cast<double>(kRecallSteps);
  return m;
}

std::string format_number(double value)
{
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", value);
  return buffer;
}

json metrics_json(const CategoryMetrics & m)
{
  return json{
    {"present", m.present}, {"amota", m.amota}, {"mota", m.mota}, {"amotp", m.amotp},
    {"gt", m.gt},           {"tp", m.tp},       {"fp", m.fp},     {"fn", m.fn},
    {"ids", m.ids},
  };
}

}  // namespace

MetricReport evaluate(
  const TrackingSet & tracks, const GroundTruthSet & truth, const Manifest & manifest)
{
  std::set<std::string> known;
  for (const auto & scene : manifest) {
    for (const auto & f : scene.frames) known.insert(f.token);
  }
  for (const auto & [token, records] : tracks) {
    if (!known.count(token)) {
      throw Error(ErrorCode::kInvalidArgument, "results token " + token + " not in manifest");
    }
  }
  for (const auto & [token, boxes] : truth) {
    if (!known.count(token)) {
      throw Error(ErrorCode::kInvalidArgument, "ground truth token " + token + " not in manifest");
    }
  }

  PerCategory<std::vector<Scene>> scenes;
  PerCategory<std::size_t> gt_count = PerCategory<std::size_t>::filled(0);
  for (const auto & info : manifest) {
    std::vector<std::size_t> order(info.frames.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return info.frames[a].timestamp < info.frames[b].timestamp;
    });
    for (Category c : kAllCategories) {
      scenes[c].emplace_back(order.size());
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::string & token = info.frames[order[i]].token;
      if (const auto it = tracks.find(token); it != tracks.end()) {
        for (const auto & rec : it->second) {
          scenes[rec.box.category].back()[i].predictions.push_back(
            Prediction{rec.box.center.head<2>(), rec.box.score, rec.tracking_id});
        }
      }
      if (const auto it = truth.find(token); it != truth.end()) {
        for (const auto & gt : it->second) {
          scenes[gt.box.category].back()[i].truths.push_back(
            Truth{gt.box.center.head<2>(), gt.instance});
          ++gt_count[gt.box.category];
        }
      }
    }
  }
  for (Category c : kAllCategories) {
    for (auto & scene : scenes[c]) {
      for (auto & frame : scene) {
        // Record order within a frame must not matter.
        std::sort(
          frame.predictions.begin(), frame.predictions.end(),
          [](const Prediction & a, const Prediction & b) {
            if (a.score != b.score) return a.score > b.score;
            if (a.id != b.id) return a.id < b.id;
            return std::tie(a.xy.x(), a.xy.y()) < std::tie(b.xy.x(), b.xy.y());
          });
        std::sort(frame.truths.begin(), frame.truths.end(), [](const Truth & a, const Truth & b) {
          if (a.instance != b.instance) return a.instance < b.instance;
          return std::tie(a.xy.x(), a.xy.y()) < std::tie(b.xy.x(), b.xy.y());
        });
      }
    }
  }

  MetricReport report;
  report.aggregate.amotp = 0.0;
  std::size_t present = 0;
  for (Category c : kAllCategories) {
    CategoryMetrics m = evaluate_category(scenes[c], gt_count[c]);
    report.categories[c] = m;
    if (!m.present) {
      report.notes.push_back(
        std::string(category_name(c)) + ": no ground truth, excluded from aggregate" +
        (m.fp > 0 ? " (" + std::to_string(m.fp) + " predictions ignored)" : ""));
      continue;
    }
    ++present;
    auto & a = report.aggregate;
    a.amota += m.amota;
    a.mota += m.mota;
    a.amotp += m.amotp;
    a.gt += m.gt;
    a.tp += m.tp;
    a.fp += m.fp;
    a.fn += m.fn;
    a.ids += m.ids;
  }
  auto & a = report.aggregate;
  if (present > 0) {
    a.present = true;
    a.amota /= static_cast<double>(present);
    a.mota /= static_cast<double>(present);
    a.amotp /= static_cast<double>(present);
  } else {
    a.amotp = kMatchDistance;
  }
  return report;
}

json report_to_json(const MetricReport & report)
{
  json categories = json::object();
  for (Category c : kAllCategories) {
    categories[std::string(category_name(c))] = metrics_json(report.categories[c]);
  }
  return json{
    {"aggregate", metrics_json(report.aggregate)},
    {"categories", categories},
    {"notes", report.notes},
  };
}

std::string report_to_table(const MetricReport & report)
{
  std::string out;
  char line[160];
  std::snprintf(
    line, sizeof(line), "%-12s %8s %8s %8s %7s %7s %7s %7s %7s\n", "class", "AMOTA", "MOTA",
    "AMOTP", "GT", "TP", "FP", "FN", "IDS");
  out += line;
  auto row = [&](const std::string & name, const CategoryMetrics & m) {
    std::snprintf(
      line, sizeof(line), "%-12s %8s %8s %8s %7zu %7zu %7zu %7zu %7zu\n", name.c_str(),
      format_number(m.amota).c_str(), format_number(m.mota).c_str(),
      format_number(m.amotp).c_str(), m.gt, m.tp, m.fp, m.fn, m.ids);
    out += line;
  };
  for (Category c : kAllCategories) {
    if (report.categories[c].present) {
      row(std::string(category_name(c)), report.categories[c]);
    }
  }
  row("overall", report.aggregate);
  for (const auto & note : report.notes) {
    out += "note: " + note + "\n";
  }
  return out;
}

}  // namespace camtrack
