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

#include "camtrack/camtrack.h"

#include "camtrack/config.hpp"
#include "camtrack/error.hpp"
#include "camtrack/evaluation.hpp"
#include "camtrack/io.hpp"
#include "camtrack/parallel.hpp"
#include "camtrack/pipeline.hpp"
#include "camtrack/scenario.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

struct ct_config
{
  camtrack::TrackerConfig value;
};

struct ct_rig
{
  camtrack::CameraRig value;
};

struct ct_sequence
{
  camtrack::Manifest manifest;
  std::vector<std::vector<camtrack::SequenceFrame>> scenes;
};

struct ct_tracker
{
  camtrack::Tracker value;
};

struct ct_results
{
  camtrack::TrackingSet value;
};

struct ct_ground_truth
{
  camtrack::GroundTruthSet value;
};

struct ct_report
{
  camtrack::MetricReport value;
};

namespace
{

thread_local std::string last_error;

ct_status fail(ct_status status, const std::string & message)
{
  last_error = message;
  return status;
}

template <class Fn>
ct_status guarded(Fn && fn)
{
  last_error.clear();
  try {
    return fn();
  } catch (const camtrack::Error & e) {
    return fail(static_cast<ct_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception & e) {
    return fail(CT_ERR_PARSE, e.what());
  } catch (const std::bad_alloc &) {
    return fail(CT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception & e) {
    return fail(CT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CT_ERR_INTERNAL, "unknown error");
  }
}

#define CT_REQUIRE(cond, what) \
  if (!(cond)) return fail(CT_ERR_INVALID_ARGUMENT, what)

char * copy_string(const std::string & text)
{
  char * out = static_cast<char *>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

camtrack::Box3D to_box(const ct_box & b)
{
  if (b.category < 0 || b.category >= static_cast<int>(camtrack::kNumCategories)) {
    throw camtrack::Error(camtrack::ErrorCode::kUnknownCategory, "unknown category index");
  }
  std::optional<Eigen::Vector2d> velocity;
  if (b.has_velocity) velocity = Eigen::Vector2d(b.velocity[0], b.velocity[1]);
  return camtrack::Box3D(
    Eigen::Vector3d(b.center[0], b.center[1], b.center[2]),
    Eigen::Vector3d(b.size[0], b.size[1], b.size[2]), b.yaw, b.score,
    static_cast<camtrack::Category>(b.category), velocity);
}

ct_box from_box(const camtrack::Box3D & box)
{
  ct_box b{};
  for (int i = 0; i < 3; ++i) {
    b.center[i] = box.center[i];
    b.size[i] = box.size[i];
  }
  b.yaw = box.yaw;
  b.has_velocity = box.velocity.has_value();
  if (box.velocity) {
    b.velocity[0] = box.velocity->x();
    b.velocity[1] = box.velocity->y();
  }
  b.score = box.score;
  b.category = static_cast<int>(box.category);
  return b;
}

}  // namespace

extern "C" {

const char * ct_version(void) { return "0.1.0"; }

const char * ct_status_name(ct_status status)
{
  switch (status) {
    case CT_OK: return "ok";
    case CT_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    default: break;
  }
  if (status >= CT_ERR_INVALID_ARGUMENT && status <= CT_ERR_INTERNAL) {
    return camtrack::error_code_name(static_cast<camtrack::ErrorCode>(status));
  }
  return "unknown status";
}

const char * ct_last_error(void) { return last_error.c_str(); }

void ct_string_free(char * text) { std::free(text); }

ct_status ct_config_create_default(ct_config ** out)
{
  return guarded([&] {
    CT_REQUIRE(out, "out is null");
    *out = new ct_config{camtrack::TrackerConfig::defaults()};
    return CT_OK;
  });
}

ct_status ct_config_load_file(const char * path, ct_config ** out)
{
  return guarded([&] {
    CT_REQUIRE(path && out, "null argument");
    *out = new ct_config{camtrack::load_config_file(path)};
    return CT_OK;
  });
}

ct_status ct_config_load_string(const char * json_text, ct_config ** out)
{
  return guarded([&] {
    CT_REQUIRE(json_text && out, "null argument");
    *out = new ct_config{camtrack::load_config_string(json_text)};
    return CT_OK;
  });
}

ct_status ct_config_set_flags(ct_config * config, const char * letters)
{
  return guarded([&] {
    CT_REQUIRE(config && letters, "null argument");
    config->value.flags = camtrack::parse_flags(letters, config->value.flags);
    return CT_OK;
  });
}

ct_status ct_config_set_verification(ct_config * config, int enabled)
{
  return guarded([&] {
    CT_REQUIRE(config, "config is null");
    config->value.flags.two_step_verification = enabled != 0;
    return CT_OK;
  });
}

ct_status ct_config_set_stage_factor(ct_config * config, int enabled)
{
  return guarded([&] {
    CT_REQUIRE(config, "config is null");
    config->value.flags.stage_factor = enabled != 0;
    return CT_OK;
  });
}

ct_status ct_config_set_threads(ct_config * config, int threads)
{
  return guarded([&] {
    CT_REQUIRE(config, "config is null");
    CT_REQUIRE(threads >= 1, "threads must be at least 1");
    config->value.threads = threads;
    return CT_OK;
  });
}

ct_status ct_config_to_json(const ct_config * config, char ** out)
{
  return guarded([&] {
    CT_REQUIRE(config && out, "null argument");
    *out = copy_string(camtrack::config_to_json(config->value).dump(2));
    return CT_OK;
  });
}

void ct_config_destroy(ct_config * config) { delete config; }

ct_status ct_rig_load(const char * calibration_path, ct_rig ** out)
{
  return guarded([&] {
    CT_REQUIRE(calibration_path && out, "null argument");
    *out = new ct_rig{camtrack::load_calibration(calibration_path)};
    return CT_OK;
  });
}

ct_status ct_rig_create_ring(size_t cameras, ct_rig ** out)
{
  return guarded([&] {
    CT_REQUIRE(out, "out is null");
    CT_REQUIRE(cameras >= 1, "a rig needs at least one camera");
    *out = new ct_rig{camtrack::make_ring_rig(cameras)};
    return CT_OK;
  });
}

ct_status ct_rig_drop_cameras(ct_rig * rig, size_t count)
{
  return guarded([&] {
    CT_REQUIRE(rig, "rig is null");
    rig->value = rig->value.drop_last(count);
    return CT_OK;
  });
}

ct_status ct_rig_camera_count(const ct_rig * rig, size_t * out)
{
  return guarded([&] {
    CT_REQUIRE(rig && out, "null argument");
    *out = rig->value.size();
    return CT_OK;
  });
}

void ct_rig_destroy(ct_rig * rig) { delete rig; }

ct_status ct_sequence_load(
  const char * detections_path, const char * manifest_path, ct_sequence ** out)
{
  return guarded([&] {
    CT_REQUIRE(manifest_path && out, "null argument");
    auto seq = std::make_unique<ct_sequence>();
    seq->manifest = camtrack::load_manifest(manifest_path);
    camtrack::DetectionSet detections;
    if (detections_path) {
      detections = camtrack::parse_detections(camtrack::read_json_file(detections_path));
    }
    seq->scenes = camtrack::group_frames(detections, seq->manifest);
    *out = seq.release();
    return CT_OK;
  });
}

ct_status ct_sequence_scene_count(const ct_sequence * sequence, size_t * out)
{
  return guarded([&] {
    CT_REQUIRE(sequence && out, "null argument");
    *out = sequence->scenes.size();
    return CT_OK;
  });
}

ct_status ct_sequence_frame_count(const ct_sequence * sequence, size_t * out)
{
  return guarded([&] {
    CT_REQUIRE(sequence && out, "null argument");
    std::size_t n = 0;
    for (const auto & scene : sequence->scenes) n += scene.size();
    *out = n;
    return CT_OK;
  });
}

void ct_sequence_destroy(ct_sequence * sequence) { delete sequence; }

ct_status ct_tracker_create(const ct_config * config, const ct_rig * rig, ct_tracker ** out)
{
  return guarded([&] {
    CT_REQUIRE(config && rig && out, "null argument");
    *out = new ct_tracker{camtrack::Tracker(config->value, rig->value)};
    return CT_OK;
  });
}

ct_status ct_tracker_process(
  ct_tracker * tracker, double timestamp, const ct_box * detections, size_t detection_count,
  ct_track * out, size_t capacity, size_t * count)
{
  return guarded([&] {
    CT_REQUIRE(tracker && count, "null argument");
    CT_REQUIRE(detections || detection_count == 0, "detections is null");
    CT_REQUIRE(out || capacity == 0, "out is null");
    std::vector<camtrack::Box3D> boxes;
    boxes.reserve(detection_count);
    for (size_t i = 0; i < detection_count; ++i) {
      boxes.push_back(to_box(detections[i]));
    }
    const auto result = tracker->value.process_frame(timestamp, boxes);
    *count = result.objects.size();
    if (result.objects.size() > capacity) {
      return fail(CT_ERR_BUFFER_TOO_SMALL, "output buffer holds fewer tracks than emitted");
    }
    for (size_t i = 0; i < result.objects.size(); ++i) {
      out[i].id = result.objects[i].id;
      out[i].box = from_box(result.objects[i].box);
    }
    return CT_OK;
  });
}

void ct_tracker_destroy(ct_tracker * tracker) { delete tracker; }

ct_status ct_track_sequence(
  const ct_sequence * sequence, const ct_config * config, const ct_rig * rig, ct_results ** out)
{
  return guarded([&] {
    CT_REQUIRE(sequence && config && rig && out, "null argument");
    std::vector<std::vector<camtrack::FrameResult>> results(sequence->scenes.size());
    camtrack::parallel_for(sequence->scenes.size(), config->value.threads, [&](std::size_t s) {
      try {
        results[s] = camtrack::run_sequence(sequence->scenes[s], rig->value, config->value);
      } catch (const camtrack::Error & e) {
        throw camtrack::Error(
          e.code(), "scene " + sequence->manifest[s].name + ": " + std::string(e.what()));
      }
    });
    *out = new ct_results{camtrack::to_tracking_set(sequence->manifest, results)};
    return CT_OK;
  });
}

ct_status ct_results_write(const ct_results * results, const char * path)
{
  return guarded([&] {
    CT_REQUIRE(results && path, "null argument");
    camtrack::write_tracking(results->value, path);
    return CT_OK;
  });
}

ct_status ct_results_load(const char * path, ct_results ** out)
{
  return guarded([&] {
    CT_REQUIRE(path && out, "null argument");
    *out = new ct_results{camtrack::load_tracking(path)};
    return CT_OK;
  });
}

ct_status ct_results_record_count(const ct_results * results, size_t * out)
{
  return guarded([&] {
    CT_REQUIRE(results && out, "null argument");
    std::size_t n = 0;
    for (const auto & [token, records] : results->value) n += records.size();
    *out = n;
    return CT_OK;
  });
}

void ct_results_destroy(ct_results * results) { delete results; }

ct_status ct_ground_truth_load(const char * path, ct_ground_truth ** out)
{
  return guarded([&] {
    CT_REQUIRE(path && out, "null argument");
    *out = new ct_ground_truth{camtrack::load_ground_truth(path)};
    return CT_OK;
  });
}

void ct_ground_truth_destroy(ct_ground_truth * truth) { delete truth; }

ct_status ct_evaluate(
  const ct_results * results, const ct_ground_truth * truth, const ct_sequence * sequence,
  ct_report ** out)
{
  return guarded([&] {
    CT_REQUIRE(results && truth && sequence && out, "null argument");
    *out = new ct_report{camtrack::evaluate(results->value, truth->value, sequence->manifest)};
    return CT_OK;
  });
}

ct_status ct_report_metrics(const ct_report * report, int category, ct_metrics * out)
{
  return guarded([&] {
    CT_REQUIRE(report && out, "null argument");
    CT_REQUIRE(
      category == CT_AGGREGATE ||
        (category >= 0 && category < static_cast<int>(camtrack::kNumCategories)),
      "category out of range");
    const auto & m = category == CT_AGGREGATE
                       ? report->value.aggregate
                       : report->value.categories[static_cast<camtrack::Category>(category)];
    *out = ct_metrics{m.present, m.amota, m.mota, m.amotp, m.gt, m.tp, m.fp, m.fn, m.ids};
    return CT_OK;
  });
}

ct_status ct_report_json(const ct_report * report, char ** out)
{
  return guarded([&] {
    CT_REQUIRE(report && out, "null argument");
    *out = copy_string(camtrack::report_to_json(report->value).dump(2));
    return CT_OK;
  });
}

ct_status ct_report_table(const ct_report * report, char ** out)
{
  return guarded([&] {
    CT_REQUIRE(report && out, "null argument");
    *out = copy_string(camtrack::report_to_table(report->value));
    return CT_OK;
  });
}

void ct_report_destroy(ct_report * report) { delete report; }

ct_status ct_synth(const char * spec_json, uint64_t seed, const char * directory)
{
  return guarded([&] {
    CT_REQUIRE(directory, "directory is null");
    nlohmann::json document;
    if (spec_json && *spec_json) {
      document = nlohmann::json::parse(spec_json);
    }
    const auto spec = camtrack::parse_scenario_spec(document);
    camtrack::write_scenario(camtrack::generate_scenario(spec, seed), directory);
    return CT_OK;
  });
}

}  // extern "C"
