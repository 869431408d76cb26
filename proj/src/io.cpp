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

#include "camtrack/io.hpp"

#include "camtrack/error.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace camtrack
{

using nlohmann::json;

namespace
{

constexpr double kQuaternionNormTolerance = 1e-6;

std::string record_where(const std::string & token, std::size_t index)
{
  return "record " + token + "[" + std::to_string(index) + "]";
}

const json & field(const json & record, const char * key, const std::string & where)
{
  const auto it = record.find(key);
  if (it == record.end()) {
    throw Error(ErrorCode::kParse, where + ": missing field '" + key + "'");
  }
  return *it;
}

double number_at(const json & array, std::size_t i, const std::string & where, const char * key)
{
  if (!array[i].is_number()) {
    throw Error(ErrorCode::kParse, where + ": '" + key + "' must hold numbers");
  }
  return array[i].get<double>();
}

std::vector<double> number_array(
  const json & record, const char * key, std::size_t size, const std::string & where)
{
  const json & v = field(record, key, where);
  if (!v.is_array() || v.size() != size) {
    throw Error(
      ErrorCode::kParse,
      where + ": '" + key + "' must be an array of " + std::to_string(size) + " numbers");
  }
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    out[i] = number_at(v, i, where, key);
  }
  return out;
}

std::string string_field(const json & record, const char * key, const std::string & where)
{
  const json & v = field(record, key, where);
  if (!v.is_string()) {
    throw Error(ErrorCode::kParse, where + ": '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

// Geometry shared by every record flavor. `name_key`/`score_key` select the
// detection_* or tracking_* spelling; a missing score key defaults to 1.
Box3D parse_box(
  const json & record, const std::string & where, const char * name_key, const char * score_key)
{
  if (!record.is_object()) {
    throw Error(ErrorCode::kParse, where + ": expected an object");
  }
  const auto t = number_array(record, "translation", 3, where);
  const auto s = number_array(record, "size", 3, where);
  const auto q = number_array(record, "rotation", 4, where);
  const double norm = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  if (std::abs(norm - 1.0) > kQuaternionNormTolerance) {
    throw Error(ErrorCode::kParse, where + ": rotation quaternion is not unit length");
  }
  std::optional<Eigen::Vector2d> velocity;
  if (const auto it = record.find("velocity"); it != record.end() && !it->is_null()) {
    const auto v = number_array(record, "velocity", 2, where);
    velocity = Eigen::Vector2d(v[0], v[1]);
  }
  const std::string name = string_field(record, name_key, where);
  const auto category = parse_category(name);
  if (!category) {
    throw Error(ErrorCode::kUnknownCategory, where + ": unknown category '" + name + "'");
  }
  double score = 1.0;
  if (const auto it = record.find(score_key); it != record.end()) {
    if (!it->is_number()) {
      throw Error(ErrorCode::kParse, where + ": '" + score_key + "' must be a number");
    }
    score = it->get<double>();
  }
  try {
    return Box3D(
      Eigen::Vector3d(t[0], t[1], t[2]), Eigen::Vector3d(s[0], s[1], s[2]),
      yaw_from_quaternion(q[0], q[1], q[2], q[3]), score, *category, velocity);
  } catch (const Error & e) {
    throw Error(ErrorCode::kParse, where + ": " + e.what());
  }
}

json box_geometry(const Box3D & box)
{
  const auto q = quaternion_from_yaw(box.yaw);
  json record;
  record["translation"] = {box.center.x(), box.center.y(), box.center.z()};
  record["size"] = {box.size.x(), box.size.y(), box.size.z()};
  record["rotation"] = {q[0], q[1], q[2], q[3]};
  record["velocity"] = box.velocity ? json{box.velocity->x(), box.velocity->y()} : json(nullptr);
  return record;
}

const json & results_object(const json & document, const char * what)
{
  if (!document.is_object()) {
    throw Error(ErrorCode::kParse, std::string(what) + ": expected an object");
  }
  const auto it = document.find("results");
  if (it == document.end() || !it->is_object()) {
    throw Error(ErrorCode::kParse, std::string(what) + ": missing 'results' object");
  }
  return *it;
}

template <class Parse>
auto parse_records(const json & document, const char * what, Parse && parse)
{
  using Record = decltype(parse(json{}, std::string{}, std::string{}));
  std::map<std::string, std::vector<Record>> out;
  const json & results = results_object(document, what);
  for (auto it = results.begin(); it != results.end(); ++it) {
    if (!it.value().is_array()) {
      throw Error(ErrorCode::kParse, std::string(what) + ": entry " + it.key() + " is not an array");
    }
    auto & frame = out[it.key()];
    std::size_t index = 0;
    for (const auto & record : it.value()) {
      const std::string where = record_where(it.key(), index++);
      if (record.contains("sample_token") && record["sample_token"] != it.key()) {
        throw Error(ErrorCode::kParse, where + ": sample_token does not match its key");
      }
      frame.push_back(parse(record, where, it.key()));
    }
  }
  return out;
}

json meta()
{
  return json{
    {"use_camera", true}, {"use_lidar", false},    {"use_radar", false},
    {"use_map", false},   {"use_external", false},
  };
}

}  // namespace

double yaw_from_quaternion(double w, double x, double y, double z)
{
  return std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
}

std::array<double, 4> quaternion_from_yaw(double yaw)
{
  return {std::cos(0.5 * yaw), 0.0, 0.0, std::sin(0.5 * yaw)};
}

Manifest parse_manifest(const json & document)
{
  if (!document.is_object() || !document.contains("scenes") || !document["scenes"].is_array()) {
    throw Error(ErrorCode::kParse, "manifest: expected an object with a 'scenes' array");
  }
  Manifest manifest;
  std::set<std::string> tokens;
  for (const auto & scene : document["scenes"]) {
    const std::string where = "manifest scene " + std::to_string(manifest.size());
    SceneInfo info;
    info.name = string_field(scene, "name", where);
    const json & frames = field(scene, "frames", where);
    if (!frames.is_array()) {
      throw Error(ErrorCode::kParse, where + ": 'frames' must be an array");
    }
    for (const auto & frame : frames) {
      FrameInfo f;
      f.token = string_field(frame, "sample_token", where);
      const json & ts = field(frame, "timestamp", where);
      if (!ts.is_number()) {
        throw Error(ErrorCode::kParse, where + ": timestamp must be a number");
      }
      f.timestamp = ts.get<double>();
      if (!tokens.insert(f.token).second) {
        throw Error(ErrorCode::kParse, where + ": duplicate sample token " + f.token);
      }
      if (!info.frames.empty() && f.timestamp < info.frames.back().timestamp) {
        throw Error(ErrorCode::kOutOfOrder, where + ": timestamps must be nondecreasing");
      }
      info.frames.push_back(std::move(f));
    }
    manifest.push_back(std::move(info));
  }
  return manifest;
}

json manifest_to_json(const Manifest & manifest)
{
  json scenes = json::array();
  for (const auto & scene : manifest) {
    json frames = json::array();
    for (const auto & f : scene.frames) {
      frames.push_back({{"sample_token", f.token}, {"timestamp", f.timestamp}});
    }
    scenes.push_back({{"name", scene.name}, {"frames", frames}});
  }
  return json{{"scenes", scenes}};
}

DetectionSet parse_detections(const json & document)
{
  return parse_records(
    document, "detections", [](const json & r, const std::string & where, const std::string &) {
      return parse_box(r, where, "detection_name", "detection_score");
    });
}

json detections_to_json(const DetectionSet & detections)
{
  json results = json::object();
  for (const auto & [token, boxes] : detections) {
    json frame = json::array();
    for (const auto & box : boxes) {
      json r = box_geometry(box);
      r["sample_token"] = token;
      r["detection_name"] = std::string(category_name(box.category));
      r["detection_score"] = box.score;
      r["attribute_name"] = "";
      frame.push_back(std::move(r));
    }
    results[token] = std::move(frame);
  }
  return json{{"meta", meta()}, {"results", results}};
}

GroundTruthSet parse_ground_truth(const json & document)
{
  return parse_records(
    document, "ground truth", [](const json & r, const std::string & where, const std::string &) {
      return GroundTruthBox{
        parse_box(r, where, "detection_name", "detection_score"),
        string_field(r, "instance_token", where)};
    });
}

json ground_truth_to_json(const GroundTruthSet & truth)
{
  json results = json::object();
  for (const auto & [token, boxes] : truth) {
    json frame = json::array();
    for (const auto & gt : boxes) {
      json r = box_geometry(gt.box);
      r["sample_token"] = token;
      r["detection_name"] = std::string(category_name(gt.box.category));
      r["instance_token"] = gt.instance;
      frame.push_back(std::move(r));
    }
    results[token] = std::move(frame);
  }
  return json{{"meta", meta()}, {"results", results}};
}

TrackingSet parse_tracking(const json & document)
{
  return parse_records(
    document, "tracking results",
    [](const json & r, const std::string & where, const std::string &) {
      return TrackRecord{
        parse_box(r, where, "tracking_name", "tracking_score"),
        string_field(r, "tracking_id", where)};
    });
}

json tracking_to_json(const TrackingSet & tracks)
{
  json results = json::object();
  for (const auto & [token, records] : tracks) {
    json frame = json::array();
    for (const auto & rec : records) {
      json r = box_geometry(rec.box);
      r["sample_token"] = token;
      r["tracking_id"] = rec.tracking_id;
      r["tracking_name"] = std::string(category_name(rec.box.category));
      r["tracking_score"] = rec.box.score;
      frame.push_back(std::move(r));
    }
    results[token] = std::move(frame);
  }
  return json{{"meta", meta()}, {"results", results}};
}

CameraRig parse_calibration(const json & document)
{
  if (!document.is_object() || !document.contains("cameras") || !document["cameras"].is_array()) {
    throw Error(ErrorCode::kParse, "calibration: expected an object with a 'cameras' array");
  }
  std::vector<Camera> cameras;
  for (const auto & cam : document["cameras"]) {
    const std::string where = "calibration camera " + std::to_string(cameras.size());
    const auto k = number_array(cam, "intrinsic", 9, where);
    const auto e = number_array(cam, "extrinsic", 12, where);
    const json & w = field(cam, "width", where);
    const json & h = field(cam, "height", where);
    if (!w.is_number_integer() || !h.is_number_integer()) {
      throw Error(ErrorCode::kParse, where + ": width and height must be integers");
    }
    std::string name;
    if (cam.contains("name") && cam["name"].is_string()) {
      name = cam["name"].get<std::string>();
    }
    Eigen::Matrix3d intrinsic;
    Eigen::Matrix<double, 3, 4> extrinsic;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) intrinsic(r, c) = k[static_cast<std::size_t>(3 * r + c)];
      for (int c = 0; c < 4; ++c) extrinsic(r, c) = e[static_cast<std::size_t>(4 * r + c)];
    }
    try {
      cameras.emplace_back(extrinsic, intrinsic, w.get<int>(), h.get<int>(), std::move(name));
    } catch (const Error & err) {
      throw Error(ErrorCode::kInvalidArgument, where + ": " + err.what());
    }
  }
  if (cameras.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "calibration: no cameras");
  }
  return CameraRig(std::move(cameras));
}

json calibration_to_json(const CameraRig & rig)
{
  json cameras = json::array();
  for (const auto & cam : rig.cameras()) {
    json k = json::array();
    json e = json::array();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) k.push_back(cam.intrinsic()(r, c));
      for (int c = 0; c < 4; ++c) e.push_back(cam.extrinsic()(r, c));
    }
    cameras.push_back(
      {{"name", cam.name()},
       {"intrinsic", k},
       {"extrinsic", e},
       {"width", cam.width()},
       {"height", cam.height()}});
  }
  return json{{"cameras", cameras}};
}

json read_json_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error & e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path & path, const json & document, int indent)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  }
  out << document.dump(indent) << '\n';
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIo, "failed writing " + path.string());
  }
}

std::vector<std::vector<SequenceFrame>> group_frames(
  const DetectionSet & detections, const Manifest & manifest)
{
  std::set<std::string> known;
  std::vector<std::vector<SequenceFrame>> scenes;
  for (const auto & scene : manifest) {
    std::vector<SequenceFrame> frames;
    for (const auto & f : scene.frames) {
      known.insert(f.token);
      SequenceFrame frame{f.token, f.timestamp, {}};
      if (const auto it = detections.find(f.token); it != detections.end()) {
        frame.detections = it->second;
      }
      frames.push_back(std::move(frame));
    }
    scenes.push_back(std::move(frames));
  }
  for (const auto & [token, boxes] : detections) {
    if (!known.count(token)) {
      throw Error(ErrorCode::kParse, "detections: sample token " + token + " not in manifest");
    }
  }
  return scenes;
}

std::vector<std::vector<SequenceFrame>> load_detections(
  const std::filesystem::path & detections, const std::filesystem::path & manifest)
{
  return group_frames(
    parse_detections(read_json_file(detections)), parse_manifest(read_json_file(manifest)));
}

CameraRig load_calibration(const std::filesystem::path & path)
{
  return parse_calibration(read_json_file(path));
}

Manifest load_manifest(const std::filesystem::path & path)
{
  return parse_manifest(read_json_file(path));
}

GroundTruthSet load_ground_truth(const std::filesystem::path & path)
{
  return parse_ground_truth(read_json_file(path));
}

TrackingSet load_tracking(const std::filesystem::path & path)
{
  return parse_tracking(read_json_file(path));
}

TrackingSet to_tracking_set(
  const Manifest & manifest, const std::vector<std::vector<FrameResult>> & results)
{
  if (results.size() != manifest.size()) {
    throw Error(ErrorCode::kInvalidArgument, "tracking output does not match manifest scenes");
  }
  TrackingSet out;
  for (std::size_t s = 0; s < manifest.size(); ++s) {
    const auto & frames = manifest[s].frames;
    if (results[s].size() != frames.size()) {
      throw Error(ErrorCode::kInvalidArgument, "tracking output does not match manifest frames");
    }
    for (std::size_t f = 0; f < frames.size(); ++f) {
      auto & records = out[frames[f].token];
      for (const auto & obj : results[s][f].objects) {
        records.push_back(TrackRecord{obj.box, std::to_string(obj.id)});
      }
    }
  }
  return out;
}

void write_tracking(const TrackingSet & tracks, const std::filesystem::path & path)
{
  write_json_file(path, tracking_to_json(tracks), -1);
}

}  // namespace camtrack
