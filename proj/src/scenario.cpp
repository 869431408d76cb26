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

#include "camtrack/scenario.hpp"

#include "camtrack/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>

namespace camtrack
{

using nlohmann::json;

namespace
{

// Distributions are written out by hand: the standard ones are not
// reproducible across library implementations.
class Random
{
public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

  double normal(double sigma)
  {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::size_t poisson(double mean)
  {
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    for (double p = uniform(); p > limit; p *= uniform()) {
      ++k;
    }
    return k;
  }

  std::size_t index(std::size_t n)
  {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

  Category category(const PerCategory<double> & weights)
  {
    double total = 0.0;
    for (double w : weights.values) total += w;
    double x = uniform() * total;
    for (Category c : kAllCategories) {
      x -= weights[c];
      if (x < 0.0) return c;
    }
    for (auto it = kAllCategories.rbegin(); it != kAllCategories.rend(); ++it) {
      if (weights[*it] > 0.0) return *it;
    }
    return Category::kCar;
  }

private:
  std::mt19937_64 engine_;
};

// Typical (w, l, h) per class.
Eigen::Vector3d nominal_size(Category c)
{
  switch (c) {
    case Category::kCar: return {1.9, 4.6, 1.7};
    case Category::kPedestrian: return {0.7, 0.7, 1.75};
    case Category::kBicycle: return {0.6, 1.8, 1.3};
    case Category::kMotorcycle: return {0.8, 2.1, 1.5};
    case Category::kBus: return {2.9, 11.0, 3.5};
    case Category::kTrailer: return {2.5, 10.0, 3.8};
    case Category::kTruck: return {2.5, 7.0, 3.0};
  }
  return {1.0, 1.0, 1.0};
}

struct Lane
{
  Category category;
  Eigen::Vector3d size;
  double radius;
  double phase;
  double speed;
  double yaw_rate;  // signed; positive is counter-clockwise
  double score;
};

Box3D truth_at(const Lane & lane, double t)
{
  const double direction = lane.yaw_rate >= 0.0 ? 1.0 : -1.0;
  const double phi = lane.phase + lane.yaw_rate * t;
  const double heading = phi + direction * 0.5 * std::numbers::pi;
  return Box3D(
    Eigen::Vector3d(lane.radius * std::cos(phi), lane.radius * std::sin(phi), 0.5 * lane.size.z()),
    lane.size, heading, 1.0, lane.category,
    Eigen::Vector2d(lane.speed * std::cos(heading), lane.speed * std::sin(heading)));
}

void require(bool ok, const std::string & what)
{
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument, "scenario spec: " + what);
  }
}

class Reader
{
public:
  Reader(const json & node, std::string path) : node_(node), path_(std::move(path))
  {
    if (!node_.is_object()) {
      throw Error(ErrorCode::kTypeMismatch, path_ + ": expected an object");
    }
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      pending_.insert(it.key());
    }
  }

  const json * find(const std::string & key)
  {
    pending_.erase(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const std::string & key, double & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_number()) throw mismatch(key, "a number");
      out = v->get<double>();
    }
  }

  template <class Int>
  void integer(const std::string & key, Int & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_number_integer() || v->get<long long>() < 0) {
        throw mismatch(key, "a nonnegative integer");
      }
      out = static_cast<Int>(v->get<long long>());
    }
  }

  void boolean(const std::string & key, bool & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_boolean()) throw mismatch(key, "a boolean");
      out = v->get<bool>();
    }
  }

  void string(const std::string & key, std::string & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_string()) throw mismatch(key, "a string");
      out = v->get<std::string>();
    }
  }

  void per_category(const std::string & key, PerCategory<double> & out)
  {
    if (const json * v = find(key)) {
      Reader sub(*v, path_ + "." + key);
      for (Category c : kAllCategories) {
        sub.number(std::string(category_name(c)), out[c]);
      }
      sub.finish();
    }
  }

  std::string child(const std::string & key) const { return path_ + "." + key; }

  void finish() const
  {
    if (!pending_.empty()) {
      throw Error(ErrorCode::kUnknownKey, path_ + "." + *pending_.begin() + ": unknown key");
    }
  }

private:
  Error mismatch(const std::string & key, const char * expected) const
  {
    return Error(ErrorCode::kTypeMismatch, path_ + "." + key + ": expected " + expected);
  }

  const json & node_;
  std::string path_;
  std::set<std::string> pending_;
};

json per_category_json(const PerCategory<double> & values)
{
  json out = json::object();
  for (Category c : kAllCategories) {
    out[std::string(category_name(c))] = values[c];
  }
  return out;
}

std::string frame_token(const std::string & scene, std::size_t frame)
{
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%04zu", frame);
  return scene + "-" + buffer;
}

}  // namespace

void validate(const ScenarioSpec & spec)
{
  require(!spec.scene_name.empty(), "scene_name must not be empty");
  require(spec.num_frames >= 1, "num_frames must be at least 1");
  require(spec.frame_interval > 0.0, "frame_interval must be positive");
  double mix = 0.0;
  for (Category c : kAllCategories) {
    require(spec.category_mix[c] >= 0.0, "category_mix weights must be nonnegative");
    require(spec.max_speed[c] >= 0.0, "max_speed must be nonnegative");
    mix += spec.category_mix[c];
  }
  require(spec.num_objects == 0 || mix > 0.0, "category_mix must have a positive weight");
  require(
    spec.min_speed_fraction >= 0.0 && spec.min_speed_fraction <= 1.0,
    "min_speed_fraction must lie in [0, 1]");
  require(spec.max_yaw_rate > 0.0, "max_yaw_rate must be positive");
  require(spec.inner_radius > 0.0, "inner_radius must be positive");
  require(spec.lane_margin >= 0.0, "lane_margin must be nonnegative");
  require(spec.lane_clearance >= 1.0, "lane_clearance must be at least 1");
  require(spec.fp_rate >= 0.0 && spec.fp_rate <= 50.0, "fp_rate must lie in [0, 50]");
  require(
    spec.duplicate_fraction >= 0.0 && spec.duplicate_fraction <= 1.0,
    "duplicate_fraction must lie in [0, 1]");
  require(
    spec.duplicate_offset_min >= 0.0 && spec.duplicate_offset_max >= spec.duplicate_offset_min,
    "duplicate offsets must satisfy 0 <= min <= max");
  require(spec.fn_rate >= 0.0 && spec.fn_rate <= 1.0, "fn_rate must lie in [0, 1]");
  require(
    spec.position_sigma >= 0.0 && spec.extent_sigma >= 0.0 && spec.yaw_sigma >= 0.0 &&
      spec.velocity_sigma >= 0.0,
    "noise sigmas must be nonnegative");
  const auto & s = spec.score;
  require(
    s.base_min > 0.0 && s.base_min <= s.base_max && s.base_max <= 1.0,
    "score base range must satisfy 0 < min <= max <= 1");
  require(
    s.clutter_min > 0.0 && s.clutter_min <= s.clutter_max && s.clutter_max <= 1.0,
    "score clutter range must satisfy 0 < min <= max <= 1");
  require(s.noise_sigma >= 0.0, "score noise_sigma must be nonnegative");
  require(s.low_rate >= 0.0 && s.low_rate <= 1.0, "score low_rate must lie in [0, 1]");
  require(spec.rig.cameras >= 1, "rig needs at least one camera");
  require(spec.rig.focal > 0.0, "rig focal must be positive");
  require(spec.rig.width > 0 && spec.rig.height > 0, "rig image size must be positive");
}

ScenarioSpec parse_scenario_spec(const json & document)
{
  ScenarioSpec spec;
  if (document.is_null()) {
    return spec;
  }
  Reader r(document, "scenario");
  r.string("scene_name", spec.scene_name);
  r.integer("num_objects", spec.num_objects);
  r.integer("num_frames", spec.num_frames);
  r.number("frame_interval", spec.frame_interval);
  r.per_category("category_mix", spec.category_mix);
  r.per_category("max_speed", spec.max_speed);
  r.number("min_speed_fraction", spec.min_speed_fraction);
  r.number("max_yaw_rate", spec.max_yaw_rate);
  r.number("inner_radius", spec.inner_radius);
  r.number("lane_margin", spec.lane_margin);
  r.number("lane_clearance", spec.lane_clearance);
  r.number("fp_rate", spec.fp_rate);
  r.number("duplicate_fraction", spec.duplicate_fraction);
  r.number("duplicate_offset_min", spec.duplicate_offset_min);
  r.number("duplicate_offset_max", spec.duplicate_offset_max);
  r.number("fn_rate", spec.fn_rate);
  r.number("position_sigma", spec.position_sigma);
  r.number("extent_sigma", spec.extent_sigma);
  r.number("yaw_sigma", spec.yaw_sigma);
  r.number("velocity_sigma", spec.velocity_sigma);
  r.boolean("emit_velocity", spec.emit_velocity);
  if (const json * v = r.find("score")) {
    Reader s(*v, r.child("score"));
    s.number("base_min", spec.score.base_min);
    s.number("base_max", spec.score.base_max);
    s.number("noise_sigma", spec.score.noise_sigma);
    s.number("low_rate", spec.score.low_rate);
    s.number("clutter_min", spec.score.clutter_min);
    s.number("clutter_max", spec.score.clutter_max);
    s.finish();
  }
  if (const json * v = r.find("rig")) {
    Reader g(*v, r.child("rig"));
    g.integer("cameras", spec.rig.cameras);
    g.number("focal", spec.rig.focal);
    g.integer("width", spec.rig.width);
    g.integer("height", spec.rig.height);
    g.number("mount_height", spec.rig.mount_height);
    g.finish();
  }
  r.finish();
  validate(spec);
  return spec;
}

json scenario_spec_to_json(const ScenarioSpec & spec)
{
  return json{
    {"scene_name", spec.scene_name},
    {"num_objects", spec.num_objects},
    {"num_frames", spec.num_frames},
    {"frame_interval", spec.frame_interval},
    {"category_mix", per_category_json(spec.category_mix)},
    {"max_speed", per_category_json(spec.max_speed)},
    {"min_speed_fraction", spec.min_speed_fraction},
    {"max_yaw_rate", spec.max_yaw_rate},
    {"inner_radius", spec.inner_radius},
    {"lane_margin", spec.lane_margin},
    {"lane_clearance", spec.lane_clearance},
    {"fp_rate", spec.fp_rate},
    {"duplicate_fraction", spec.duplicate_fraction},
    {"duplicate_offset_min", spec.duplicate_offset_min},
    {"duplicate_offset_max", spec.duplicate_offset_max},
    {"fn_rate", spec.fn_rate},
    {"position_sigma", spec.position_sigma},
    {"extent_sigma", spec.extent_sigma},
    {"yaw_sigma", spec.yaw_sigma},
    {"velocity_sigma", spec.velocity_sigma},
    {"emit_velocity", spec.emit_velocity},
    {"score",
     {{"base_min", spec.score.base_min},
      {"base_max", spec.score.base_max},
      {"noise_sigma", spec.score.noise_sigma},
      {"low_rate", spec.score.low_rate},
      {"clutter_min", spec.score.clutter_min},
      {"clutter_max", spec.score.clutter_max}}},
    {"rig",
     {{"cameras", spec.rig.cameras},
      {"focal", spec.rig.focal},
      {"width", spec.rig.width},
      {"height", spec.rig.height},
      {"mount_height", spec.rig.mount_height}}},
  };
}

Scenario generate_scenario(const ScenarioSpec & spec, std::uint64_t seed)
{
  validate(spec);
  Random rng(seed);
  Scenario out;
  const Eigen::Vector3d rig_center(0.0, 0.0, spec.rig.mount_height);
  out.rig = make_ring_rig(
    spec.rig.cameras, rig_center, spec.rig.focal, spec.rig.width, spec.rig.height);

  std::vector<Lane> lanes;
  double previous_reach = 0.0;
  double radius = spec.inner_radius;
  for (std::size_t k = 0; k < spec.num_objects; ++k) {
    Lane lane{};
    lane.category = rng.category(spec.category_mix);
    lane.size = nominal_size(lane.category) * rng.uniform(0.9, 1.1);
    const double reach = 0.5 * lane.size.head<2>().norm() * spec.lane_clearance;
    if (k > 0) {
      radius += previous_reach + reach + spec.lane_margin;
    }
    previous_reach = reach;
    lane.radius = radius;
    lane.phase = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double cap = std::min(spec.max_speed[lane.category], spec.max_yaw_rate * radius);
    lane.speed = rng.uniform(spec.min_speed_fraction * cap, cap);
    lane.yaw_rate = (rng.bernoulli(0.5) ? 1.0 : -1.0) * lane.speed / radius;
    lane.score = rng.uniform(spec.score.base_min, spec.score.base_max);
    lanes.push_back(lane);
  }
  const double outer_radius = radius + previous_reach + spec.lane_margin;

  SceneInfo scene{spec.scene_name, {}};
  for (std::size_t f = 0; f < spec.num_frames; ++f) {
    const double t = static_cast<double>(f) * spec.frame_interval;
    const std::string token = frame_token(spec.scene_name, f);
    scene.frames.push_back(FrameInfo{token, t});
    auto & truths = out.ground_truth[token];
    auto & detections = out.detections[token];

    for (std::size_t k = 0; k < lanes.size(); ++k) {
      const Box3D truth = truth_at(lanes[k], t);
      truths.push_back(GroundTruthBox{truth, "instance-" + std::to_string(k)});
      if (rng.bernoulli(spec.fn_rate)) {
        continue;
      }
      Eigen::Vector3d center = truth.center;
      for (int i = 0; i < 3; ++i) center[i] += rng.normal(spec.position_sigma);
      Eigen::Vector3d size = truth.size;
      for (int i = 0; i < 3; ++i) size[i] = std::max(0.05, size[i] + rng.normal(spec.extent_sigma));
      const double yaw = truth.yaw + rng.normal(spec.yaw_sigma);
      std::optional<Eigen::Vector2d> velocity;
      if (spec.emit_velocity) {
        velocity = *truth.velocity +
                   Eigen::Vector2d(rng.normal(spec.velocity_sigma), rng.normal(spec.velocity_sigma));
      }
      double score = std::clamp(lanes[k].score + rng.normal(spec.score.noise_sigma), 0.01, 1.0);
      if (rng.bernoulli(spec.score.low_rate)) {
        score = rng.uniform(spec.score.clutter_min, spec.score.clutter_max);
      }
      detections.emplace_back(center, size, yaw, score, truth.category, velocity);
    }

    const std::size_t true_detections = detections.size();
    const std::size_t false_positives = rng.poisson(spec.fp_rate);
    for (std::size_t n = 0; n < false_positives; ++n) {
      if (true_detections > 0 && rng.bernoulli(spec.duplicate_fraction)) {
        // Depth-ambiguous copy of a real detection, shifted along the viewing ray.
        Box3D copy = detections[rng.index(true_detections)];
        Eigen::Vector2d ray = copy.center.head<2>() - rig_center.head<2>();
        ray /= std::max(ray.norm(), 1e-9);
        const double offset = rng.uniform(spec.duplicate_offset_min, spec.duplicate_offset_max) *
                              (rng.bernoulli(0.5) ? 1.0 : -1.0);
        copy.center.head<2>() += offset * ray;
        copy.score = std::clamp(copy.score * rng.uniform(0.3, 0.8), 0.01, 1.0);
        detections.push_back(copy);
        continue;
      }
      const Category category = rng.category(spec.category_mix);
      const Eigen::Vector3d size = nominal_size(category);
      const double r = rng.uniform(spec.inner_radius, outer_radius);
      const double phi = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const double score = rng.uniform(spec.score.clutter_min, spec.score.clutter_max);
      std::optional<Eigen::Vector2d> velocity;
      if (spec.emit_velocity) velocity = Eigen::Vector2d::Zero();
      detections.emplace_back(
        Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), 0.5 * size.z()), size, yaw, score,
        category, velocity);
    }

    for (std::size_t i = detections.size(); i > 1; --i) {
      std::swap(detections[i - 1], detections[rng.index(i)]);
    }
  }
  out.manifest.push_back(std::move(scene));
  return out;
}

void write_scenario(const Scenario & scenario, const std::filesystem::path & directory)
{
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + directory.string() + ": " + ec.message());
  }
  write_json_file(directory / "manifest.json", manifest_to_json(scenario.manifest), -1);
  write_json_file(directory / "detections.json", detections_to_json(scenario.detections), -1);
  write_json_file(directory / "ground_truth.json", ground_truth_to_json(scenario.ground_truth), -1);
  write_json_file(directory / "calibration.json", calibration_to_json(scenario.rig), -1);
}

}  // namespace camtrack
