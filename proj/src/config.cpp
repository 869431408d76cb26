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

#include "camtrack/config.hpp"

#include "camtrack/error.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace camtrack
{

using nlohmann::json;

namespace
{

CategoryConfig category_defaults(
  double score, double scale, double filter, double motion, double appearance,
  MotionModel model)
{
  CategoryConfig c;
  c.score_threshold = score;
  c.scale_factor = scale;
  c.tracker_filter_threshold = filter;
  c.motion_threshold = motion;
  c.appearance_threshold = appearance;
  c.motion_model = model;
  return c;
}

// ---- enum <-> string -------------------------------------------------------

std::string box_metric_name(BoxMetric m)
{
  switch (m) {
    case BoxMetric::kIouBev: return "iou_bev";
    case BoxMetric::kGiouBev: return "giou_bev";
    case BoxMetric::kGiou3d: return "giou_3d";
  }
  return "";
}

std::string image_metric_name(ImageMetric m) { return m == ImageMetric::kIou2d ? "iou_2d" : "giou_2d"; }

std::string fuse_name(FuseMode m)
{
  switch (m) {
    case FuseMode::kSum: return "sum";
    case FuseMode::kMax: return "max";
    case FuseMode::kAvg: return "avg";
  }
  return "";
}

std::string model_name(MotionModel m) { return m == MotionModel::kCtra ? "ctra" : "bicycle"; }

std::string gating_name(GatingMode m)
{
  return m == GatingMode::kSolveThenFilter ? "solve_then_filter" : "pre_mask";
}

// ---- document reader -------------------------------------------------------

// Walks one JSON object, consuming keys, and reports anything left over as
// an unknown key. `required` turns absent keys into kMissingKey.
class ObjectReader
{
public:
  ObjectReader(const json & object, std::string path, bool required)
  : object_(object), path_(std::move(path)), required_(required)
  {
    if (!object_.is_object()) {
      throw Error(ErrorCode::kTypeMismatch, path_ + ": expected an object");
    }
  }

  const json * find(const std::string & key)
  {
    seen_.insert(key);
    const auto it = object_.find(key);
    if (it == object_.end()) {
      if (required_) {
        throw Error(ErrorCode::kMissingKey, where(key) + ": missing");
      }
      return nullptr;
    }
    return &*it;
  }

  void number(const std::string & key, double & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_number()) {
        throw Error(ErrorCode::kTypeMismatch, where(key) + ": expected a number");
      }
      out = v->get<double>();
    }
  }

  void integer(const std::string & key, int & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_number_integer()) {
        throw Error(ErrorCode::kTypeMismatch, where(key) + ": expected an integer");
      }
      out = v->get<int>();
    }
  }

  void boolean(const std::string & key, bool & out)
  {
    if (const json * v = find(key)) {
      if (!v->is_boolean()) {
        throw Error(ErrorCode::kTypeMismatch, where(key) + ": expected a boolean");
      }
      out = v->get<bool>();
    }
  }

  template <class Enum>
  void choice(
    const std::string & key, Enum & out, std::initializer_list<Enum> options,
    const std::function<std::string(Enum)> & name)
  {
    const json * v = find(key);
    if (!v) {
      return;
    }
    if (!v->is_string()) {
      throw Error(ErrorCode::kTypeMismatch, where(key) + ": expected a string");
    }
    const auto text = v->get<std::string>();
    for (const Enum option : options) {
      if (name(option) == text) {
        out = option;
        return;
      }
    }
    throw Error(ErrorCode::kOutOfRange, where(key) + ": unsupported value '" + text + "'");
  }

  std::string where(const std::string & key) const { return path_ + "." + key; }

  void finish() const
  {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw Error(ErrorCode::kUnknownKey, where(it.key()) + ": unknown key");
      }
    }
  }

private:
  const json & object_;
  std::string path_;
  bool required_;
  std::set<std::string> seen_;
};

void read_noise(const json & node, const std::string & path, bool required, NoiseProfile & out)
{
  ObjectReader r(node, path, required);
  r.number("position", out.position);
  r.number("extent", out.extent);
  r.number("speed", out.speed);
  r.number("acceleration", out.acceleration);
  r.number("yaw", out.yaw);
  r.number("turn", out.turn);
  r.finish();
}

void read_category(const json & node, const std::string & path, bool required, CategoryConfig & c)
{
  ObjectReader r(node, path, required);
  r.number("score_threshold", c.score_threshold);
  r.number("scale_factor", c.scale_factor);
  r.number("tracker_filter_threshold", c.tracker_filter_threshold);
  r.number("motion_threshold", c.motion_threshold);
  r.number("appearance_threshold", c.appearance_threshold);
  r.choice<BoxMetric>(
    "nms_metric", c.nms_metric, {BoxMetric::kIouBev, BoxMetric::kGiouBev}, box_metric_name);
  r.number("nms_threshold", c.nms_threshold);
  r.choice<BoxMetric>(
    "association_metric", c.association_metric, {BoxMetric::kGiouBev, BoxMetric::kGiou3d},
    box_metric_name);
  r.choice<MotionModel>(
    "motion_model", c.motion_model, {MotionModel::kCtra, MotionModel::kBicycle}, model_name);
  r.integer("hit_count", c.lifecycle.hit_count);
  r.integer("max_age", c.lifecycle.max_age);
  if (const json * q = r.find("process_noise")) {
    read_noise(*q, r.where("process_noise"), required, c.process_noise);
  }
  if (const json * p = r.find("initial_covariance")) {
    read_noise(*p, r.where("initial_covariance"), required, c.initial_covariance);
  }
  r.finish();
}

void read_mcas(const json & node, const std::string & path, bool required, McasOptions & out)
{
  ObjectReader r(node, path, required);
  r.choice<ImageMetric>(
    "app", out.metric, {ImageMetric::kIou2d, ImageMetric::kGiou2d}, image_metric_name);
  r.choice<FuseMode>("fuse", out.fuse, {FuseMode::kSum, FuseMode::kMax, FuseMode::kAvg}, fuse_name);
  r.finish();
}

// ---- validation helpers ----------------------------------------------------

void require(bool ok, const std::string & what)
{
  if (!ok) {
    throw Error(ErrorCode::kOutOfRange, what);
  }
}

void validate_noise(const NoiseProfile & n, const std::string & path, bool strictly_positive)
{
  for (const auto & [name, value] :
       {std::pair{"position", n.position}, std::pair{"extent", n.extent},
        std::pair{"speed", n.speed}, std::pair{"acceleration", n.acceleration},
        std::pair{"yaw", n.yaw}, std::pair{"turn", n.turn}}) {
    const bool ok = std::isfinite(value) && (strictly_positive ? value > 0.0 : value >= 0.0);
    require(ok, path + "." + name + ": must be " + (strictly_positive ? "> 0" : ">= 0"));
  }
}

json noise_to_json(const NoiseProfile & n)
{
  return json{{"position", n.position}, {"extent", n.extent},       {"speed", n.speed},
              {"acceleration", n.acceleration}, {"yaw", n.yaw}, {"turn", n.turn}};
}

}  // namespace

TrackerConfig TrackerConfig::defaults()
{
  TrackerConfig cfg;
  using C = Category;
  const auto bike = MotionModel::kBicycle;
  const auto ctra = MotionModel::kCtra;
  cfg.categories[C::kCar] = category_defaults(0.20, 1.0, -1.8, 1.3, -3.3, bike);
  cfg.categories[C::kPedestrian] = category_defaults(0.35, 2.3, -1.5, 1.7, -3.8, ctra);
  cfg.categories[C::kBicycle] = category_defaults(0.28, 1.9, -0.3, 1.6, -0.9, ctra);
  cfg.categories[C::kMotorcycle] = category_defaults(0.29, 1.7, -0.8, 1.5, -1.4, ctra);
  cfg.categories[C::kBus] = category_defaults(0.14, 1.0, -0.3, 1.3, -3.8, bike);
  cfg.categories[C::kTrailer] = category_defaults(0.12, 1.0, -0.8, 1.5, -3.8, bike);
  cfg.categories[C::kTruck] = category_defaults(0.23, 1.0, -1.5, 1.3, -3.8, bike);
  cfg.categories[C::kPedestrian].nms_metric = BoxMetric::kGiouBev;
  return cfg;
}

FeatureFlags parse_flags(std::string_view letters, FeatureFlags base)
{
  base.geometry_filter = false;
  base.tracker_filter = false;
  base.heuristic_noise = false;
  base.second_association = false;
  if (letters == "none") {
    return base;
  }
  std::size_t pos = 0;
  while (pos <= letters.size()) {
    const std::size_t comma = std::min(letters.find(',', pos), letters.size());
    std::string_view token = letters.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token == "G") {
      base.geometry_filter = true;
    } else if (token == "P") {
      base.tracker_filter = true;
    } else if (token == "H") {
      base.heuristic_noise = true;
    } else if (token == "S") {
      base.second_association = true;
    } else if (!token.empty()) {
      throw Error(
        ErrorCode::kInvalidArgument, "unknown flag '" + std::string(token) + "' (expected G,P,H,S)");
    }
    pos = comma + 1;
  }
  return base;
}

std::string flags_to_string(const FeatureFlags & flags)
{
  std::string out;
  const auto add = [&](bool on, const char * letter) {
    if (on) {
      if (!out.empty()) out += ',';
      out += letter;
    }
  };
  add(flags.geometry_filter, "G");
  add(flags.tracker_filter, "P");
  add(flags.heuristic_noise, "H");
  add(flags.second_association, "S");
  return out.empty() ? "none" : out;
}

void validate(const TrackerConfig & config)
{
  for (const Category cat : kAllCategories) {
    const CategoryConfig & c = config.categories[cat];
    const std::string path = "categories." + std::string(category_name(cat));
    require(
      c.score_threshold >= 0.0 && c.score_threshold <= 1.0,
      path + ".score_threshold: must lie in [0, 1]");
    require(
      std::isfinite(c.scale_factor) && c.scale_factor >= 1.0,
      path + ".scale_factor: must be >= 1");
    require(std::isfinite(c.tracker_filter_threshold), path + ".tracker_filter_threshold: not finite");
    require(std::isfinite(c.motion_threshold), path + ".motion_threshold: not finite");
    require(std::isfinite(c.appearance_threshold), path + ".appearance_threshold: not finite");
    require(
      c.nms_threshold >= -1.0 && c.nms_threshold <= 1.0,
      path + ".nms_threshold: must lie in [-1, 1]");
    require(c.lifecycle.hit_count >= 1, path + ".hit_count: must be >= 1");
    require(c.lifecycle.max_age >= 1, path + ".max_age: must be >= 1");
    validate_noise(c.process_noise, path + ".process_noise", false);
    validate_noise(c.initial_covariance, path + ".initial_covariance", true);
  }
  require(
    std::isfinite(config.frame_interval) && config.frame_interval > 0.0,
    "frame_interval: must be > 0");
  require(
    config.score_floor >= 0.0 && config.score_floor <= 1.0, "score_floor: must lie in [0, 1]");
  require(
    config.score_smoothing >= 0.0 && config.score_smoothing < 1.0,
    "score_smoothing: must lie in [0, 1)");
  require(
    std::isfinite(config.fixed_measurement_noise) && config.fixed_measurement_noise >= 0.0,
    "fixed_measurement_noise: must be >= 0");
  require(config.threads >= 1, "threads: must be >= 1");
  require(config.motion.min_yaw_rate > 0.0, "motion.min_yaw_rate: must be > 0");
  require(config.motion.min_curvature > 0.0, "motion.min_curvature: must be > 0");
  require(
    config.motion.rear_axle_ratio > 0.0 && config.motion.rear_axle_ratio < 1.0,
    "motion.rear_axle_ratio: must lie in (0, 1)");
}

TrackerConfig load_config(const json & document)
{
  if (document.is_null()) {
    return TrackerConfig::defaults();
  }
  if (!document.is_object()) {
    throw Error(ErrorCode::kTypeMismatch, "config: expected an object at the top level");
  }
  bool inherit = true;
  if (const auto it = document.find("inherit_defaults"); it != document.end()) {
    if (!it->is_boolean()) {
      throw Error(ErrorCode::kTypeMismatch, "config.inherit_defaults: expected a boolean");
    }
    inherit = it->get<bool>();
  }
  const bool required = !inherit;

  TrackerConfig cfg = TrackerConfig::defaults();
  ObjectReader r(document, "config", required);
  r.find("inherit_defaults");
  r.number("frame_interval", cfg.frame_interval);
  r.number("score_floor", cfg.score_floor);
  r.number("score_smoothing", cfg.score_smoothing);
  r.number("fixed_measurement_noise", cfg.fixed_measurement_noise);
  r.choice<GatingMode>(
    "gating", cfg.gating, {GatingMode::kSolveThenFilter, GatingMode::kPreMask}, gating_name);
  r.boolean("emit_coasting", cfg.emit_coasting);
  r.boolean("yaw_flip_correction", cfg.yaw_flip_correction);
  r.integer("threads", cfg.threads);

  if (const json * flags = r.find("flags")) {
    ObjectReader f(*flags, "config.flags", required);
    f.boolean("geometry_filter", cfg.flags.geometry_filter);
    f.boolean("tracker_filter", cfg.flags.tracker_filter);
    f.boolean("heuristic_noise", cfg.flags.heuristic_noise);
    f.boolean("second_association", cfg.flags.second_association);
    f.boolean("two_step_verification", cfg.flags.two_step_verification);
    f.boolean("stage_factor", cfg.flags.stage_factor);
    f.finish();
  }
  if (const json * mcas_node = r.find("mcas")) {
    ObjectReader m(*mcas_node, "config.mcas", required);
    if (const json * pre = m.find("preprocess")) {
      read_mcas(*pre, "config.mcas.preprocess", required, cfg.preprocess_mcas);
    }
    if (const json * assoc = m.find("association")) {
      read_mcas(*assoc, "config.mcas.association", required, cfg.association_mcas);
    }
    m.finish();
  }
  if (const json * motion = r.find("motion")) {
    ObjectReader m(*motion, "config.motion", required);
    m.number("min_yaw_rate", cfg.motion.min_yaw_rate);
    m.number("min_curvature", cfg.motion.min_curvature);
    m.number("rear_axle_ratio", cfg.motion.rear_axle_ratio);
    m.finish();
  }
  if (const json * cats = r.find("categories")) {
    if (!cats->is_object()) {
      throw Error(ErrorCode::kTypeMismatch, "config.categories: expected an object");
    }
    for (auto it = cats->begin(); it != cats->end(); ++it) {
      const auto category = parse_category(it.key());
      if (!category) {
        throw Error(
          ErrorCode::kUnknownCategory, "config.categories." + it.key() + ": unknown category");
      }
      read_category(
        it.value(), "config.categories." + it.key(), required, cfg.categories[*category]);
    }
    if (required) {
      for (const Category c : kAllCategories) {
        if (!cats->contains(std::string(category_name(c)))) {
          throw Error(
            ErrorCode::kMissingCategory,
            "config.categories." + std::string(category_name(c)) + ": missing category");
        }
      }
    }
  }
  r.finish();
  validate(cfg);
  return cfg;
}

TrackerConfig load_config_string(std::string_view text)
{
  json document;
  try {
    document = text.empty() ? json() : json::parse(text);
  } catch (const json::parse_error & e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  return load_config(document);
}

TrackerConfig load_config_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open config file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_config_string(buffer.str());
}

json config_to_json(const TrackerConfig & config)
{
  json cats = json::object();
  for (const Category cat : kAllCategories) {
    const CategoryConfig & c = config.categories[cat];
    cats[std::string(category_name(cat))] = json{
      {"score_threshold", c.score_threshold},
      {"scale_factor", c.scale_factor},
      {"tracker_filter_threshold", c.tracker_filter_threshold},
      {"motion_threshold", c.motion_threshold},
      {"appearance_threshold", c.appearance_threshold},
      {"nms_metric", box_metric_name(c.nms_metric)},
      {"nms_threshold", c.nms_threshold},
      {"association_metric", box_metric_name(c.association_metric)},
      {"motion_model", model_name(c.motion_model)},
      {"hit_count", c.lifecycle.hit_count},
      {"max_age", c.lifecycle.max_age},
      {"process_noise", noise_to_json(c.process_noise)},
      {"initial_covariance", noise_to_json(c.initial_covariance)},
    };
  }
  return json{
    {"frame_interval", config.frame_interval},
    {"score_floor", config.score_floor},
    {"score_smoothing", config.score_smoothing},
    {"fixed_measurement_noise", config.fixed_measurement_noise},
    {"gating", gating_name(config.gating)},
    {"emit_coasting", config.emit_coasting},
    {"yaw_flip_correction", config.yaw_flip_correction},
    {"threads", config.threads},
    {"flags",
     {{"geometry_filter", config.flags.geometry_filter},
      {"tracker_filter", config.flags.tracker_filter},
      {"heuristic_noise", config.flags.heuristic_noise},
      {"second_association", config.flags.second_association},
      {"two_step_verification", config.flags.two_step_verification},
      {"stage_factor", config.flags.stage_factor}}},
    {"mcas",
     {{"preprocess",
       {{"app", image_metric_name(config.preprocess_mcas.metric)},
        {"fuse", fuse_name(config.preprocess_mcas.fuse)}}},
      {"association",
       {{"app", image_metric_name(config.association_mcas.metric)},
        {"fuse", fuse_name(config.association_mcas.fuse)}}}}},
    {"motion",
     {{"min_yaw_rate", config.motion.min_yaw_rate},
      {"min_curvature", config.motion.min_curvature},
      {"rear_axle_ratio", config.motion.rear_axle_ratio}}},
    {"categories", cats},
  };
}

}  // namespace camtrack
