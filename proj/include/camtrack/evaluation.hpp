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

#ifndef CAMTRACK__EVALUATION_HPP_
#define CAMTRACK__EVALUATION_HPP_

#include "camtrack/io.hpp"
#include "camtrack/types.hpp"

#include "json.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace camtrack
{

inline constexpr double kMatchDistance = 2.0;    // metres, BEV center distance
inline constexpr std::size_t kRecallSteps = 40;  // AMOTA sweep r = 1/40 .. 1

struct CategoryMetrics
{
  bool present{false};  // category has ground truth
  double amota{0.0};
  double mota{0.0};
  double amotp{kMatchDistance};
  std::size_t gt{0};
  std::size_t tp{0};
  std::size_t fp{0};
  std::size_t fn{0};
  std::size_t ids{0};
};

/// Counts and MOTA use every prediction; AMOTA/AMOTP come from the recall
/// sweep. Aggregate scores are means over categories with ground truth,
/// aggregate counts are sums over the same categories.
struct MetricReport
{
  PerCategory<CategoryMetrics> categories;
  CategoryMetrics aggregate;
  std::vector<std::string> notes;
};

/// Frames are visited per scene in timestamp order. Tokens missing from
/// `tracks` or `truth` count as empty frames; tokens outside the manifest
/// are rejected with Error(kInvalidArgument).
MetricReport evaluate(
  const TrackingSet & tracks, const GroundTruthSet & truth, const Manifest & manifest);

nlohmann::json report_to_json(const MetricReport & report);
std::string report_to_table(const MetricReport & report);

}  // namespace camtrack

#endif  // CAMTRACK__EVALUATION_HPP_
