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

#ifndef CAMTRACK__IO_HPP_
#define CAMTRACK__IO_HPP_

#include "camtrack/camera.hpp"
#include "camtrack/pipeline.hpp"
#include "camtrack/types.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace camtrack
{

/// Quaternion components are (w, x, y, z); yaw is the heading about +z.
double yaw_from_quaternion(double w, double x, double y, double z);
std::array<double, 4> quaternion_from_yaw(double yaw);

struct FrameInfo
{
  std::string token;
  double timestamp{0.0};
};

struct SceneInfo
{
  std::string name;
  std::vector<FrameInfo> frames;
};

/// Frame ordering for each scene; sample tokens themselves are opaque.
using Manifest = std::vector<SceneInfo>;

/// Boxes keyed by sample token.
using DetectionSet = std::map<std::string, std::vector<Box3D>>;

struct GroundTruthBox
{
  Box3D box;
  std::string instance;
};
using GroundTruthSet = std::map<std::string, std::vector<GroundTruthBox>>;

struct TrackRecord
{
  Box3D box;  ///< box.score is the tracking score
  std::string tracking_id;
};
using TrackingSet = std::map<std::string, std::vector<TrackRecord>>;

Manifest parse_manifest(const nlohmann::json & document);
nlohmann::json manifest_to_json(const Manifest & manifest);

DetectionSet parse_detections(const nlohmann::json & document);
nlohmann::json detections_to_json(const DetectionSet & detections);

GroundTruthSet parse_ground_truth(const nlohmann::json & document);
nlohmann::json ground_truth_to_json(const GroundTruthSet & truth);

TrackingSet parse_tracking(const nlohmann::json & document);
nlohmann::json tracking_to_json(const TrackingSet & tracks);

CameraRig parse_calibration(const nlohmann::json & document);
nlohmann::json calibration_to_json(const CameraRig & rig);

/// Reads a whole JSON file; Error(kIo) or Error(kParse) on failure.
nlohmann::json read_json_file(const std::filesystem::path & path);
/// Writes `document` followed by a newline. `indent` < 0 writes compact JSON.
void write_json_file(const std::filesystem::path & path, const nlohmann::json & document, int indent);

/// Detections grouped into per-scene frame sequences in manifest order.
/// Tokens missing from the detection file yield empty frames; detection
/// tokens absent from the manifest are rejected.
std::vector<std::vector<SequenceFrame>> group_frames(
  const DetectionSet & detections, const Manifest & manifest);

std::vector<std::vector<SequenceFrame>> load_detections(
  const std::filesystem::path & detections, const std::filesystem::path & manifest);
CameraRig load_calibration(const std::filesystem::path & path);
Manifest load_manifest(const std::filesystem::path & path);
GroundTruthSet load_ground_truth(const std::filesystem::path & path);
TrackingSet load_tracking(const std::filesystem::path & path);

/// Converts tracker output to submission records. Every manifest token gets
/// an entry, possibly empty.
TrackingSet to_tracking_set(
  const Manifest & manifest, const std::vector<std::vector<FrameResult>> & results);

void write_tracking(const TrackingSet & tracks, const std::filesystem::path & path);

}  // namespace camtrack

#endif  // CAMTRACK__IO_HPP_
