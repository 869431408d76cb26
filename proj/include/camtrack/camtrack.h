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

#ifndef CAMTRACK__CAMTRACK_H_
#define CAMTRACK__CAMTRACK_H_

/* C interface to the camtrack library. Every function returns a ct_status;
 * on failure ct_last_error() describes the problem for the calling thread.
 * Handles are owned by the caller and released with the matching destroy
 * function, which accepts NULL. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CT_BUILDING_LIBRARY)
#    define CT_API __declspec(dllexport)
#  else
#    define CT_API __declspec(dllimport)
#  endif
#else
#  define CT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ct_status {
  CT_OK = 0,
  CT_ERR_INVALID_ARGUMENT = 1,
  CT_ERR_IO = 2,
  CT_ERR_PARSE = 3,
  CT_ERR_UNKNOWN_KEY = 4,
  CT_ERR_MISSING_CATEGORY = 5,
  CT_ERR_MISSING_KEY = 6,
  CT_ERR_OUT_OF_RANGE = 7,
  CT_ERR_TYPE_MISMATCH = 8,
  CT_ERR_UNKNOWN_CATEGORY = 9,
  CT_ERR_OUT_OF_ORDER = 10,
  CT_ERR_INTERNAL = 11,
  CT_ERR_BUFFER_TOO_SMALL = 12
} ct_status;

typedef enum ct_category {
  CT_CAR = 0,
  CT_PEDESTRIAN = 1,
  CT_BICYCLE = 2,
  CT_MOTORCYCLE = 3,
  CT_BUS = 4,
  CT_TRAILER = 5,
  CT_TRUCK = 6
} ct_category;

#define CT_AGGREGATE (-1)

typedef struct ct_box {
  double center[3];  /* metres, global frame */
  double size[3];    /* width, length, height */
  double yaw;        /* radians about +z */
  double velocity[2];
  int has_velocity;
  double score;
  int category;      /* ct_category */
} ct_box;

typedef struct ct_track {
  uint64_t id;
  ct_box box;        /* box.score is the tracking score */
} ct_track;

typedef struct ct_metrics {
  int present;
  double amota;
  double mota;
  double amotp;
  size_t gt;
  size_t tp;
  size_t fp;
  size_t fn;
  size_t ids;
} ct_metrics;

typedef struct ct_config ct_config;
typedef struct ct_rig ct_rig;
typedef struct ct_sequence ct_sequence;
typedef struct ct_tracker ct_tracker;
typedef struct ct_results ct_results;
typedef struct ct_ground_truth ct_ground_truth;
typedef struct ct_report ct_report;

CT_API const char * ct_version(void);
CT_API const char * ct_status_name(ct_status status);
/* Message for the last failure on this thread; empty after success. */
CT_API const char * ct_last_error(void);
/* Releases strings returned through char ** out-parameters. */
CT_API void ct_string_free(char * text);

/* Configuration. */
CT_API ct_status ct_config_create_default(ct_config ** out);
CT_API ct_status ct_config_load_file(const char * path, ct_config ** out);
CT_API ct_status ct_config_load_string(const char * json_text, ct_config ** out);
/* letters: comma-separated subset of G,P,H,S, or "none". */
CT_API ct_status ct_config_set_flags(ct_config * config, const char * letters);
CT_API ct_status ct_config_set_verification(ct_config * config, int enabled);
CT_API ct_status ct_config_set_stage_factor(ct_config * config, int enabled);
CT_API ct_status ct_config_set_threads(ct_config * config, int threads);
CT_API ct_status ct_config_to_json(const ct_config * config, char ** out);
CT_API void ct_config_destroy(ct_config * config);

/* Camera rigs. */
CT_API ct_status ct_rig_load(const char * calibration_path, ct_rig ** out);
CT_API ct_status ct_rig_create_ring(size_t cameras, ct_rig ** out);
/* Removes the last `count` cameras; at least one must remain. */
CT_API ct_status ct_rig_drop_cameras(ct_rig * rig, size_t count);
CT_API ct_status ct_rig_camera_count(const ct_rig * rig, size_t * out);
CT_API void ct_rig_destroy(ct_rig * rig);

/* Detection sequences ordered by a scene manifest. detections_path may be
 * NULL to load only the frame structure. */
CT_API ct_status ct_sequence_load(
  const char * detections_path, const char * manifest_path, ct_sequence ** out);
CT_API ct_status ct_sequence_scene_count(const ct_sequence * sequence, size_t * out);
CT_API ct_status ct_sequence_frame_count(const ct_sequence * sequence, size_t * out);
CT_API void ct_sequence_destroy(ct_sequence * sequence);

/* Frame-by-frame tracking. `out` receives up to `capacity` tracks and
 * `count` the number emitted; CT_ERR_BUFFER_TOO_SMALL leaves the tracker
 * state advanced and `count` set to the required size. */
CT_API ct_status ct_tracker_create(const ct_config * config, const ct_rig * rig, ct_tracker ** out);
CT_API ct_status ct_tracker_process(
  ct_tracker * tracker, double timestamp, const ct_box * detections, size_t detection_count,
  ct_track * out, size_t capacity, size_t * count);
CT_API void ct_tracker_destroy(ct_tracker * tracker);

/* Whole-sequence tracking. Scenes are independent and may run in parallel. */
CT_API ct_status ct_track_sequence(
  const ct_sequence * sequence, const ct_config * config, const ct_rig * rig, ct_results ** out);
CT_API ct_status ct_results_write(const ct_results * results, const char * path);
CT_API ct_status ct_results_load(const char * path, ct_results ** out);
CT_API ct_status ct_results_record_count(const ct_results * results, size_t * out);
CT_API void ct_results_destroy(ct_results * results);

/* Evaluation. */
CT_API ct_status ct_ground_truth_load(const char * path, ct_ground_truth ** out);
CT_API void ct_ground_truth_destroy(ct_ground_truth * truth);
CT_API ct_status ct_evaluate(
  const ct_results * results, const ct_ground_truth * truth, const ct_sequence * sequence,
  ct_report ** out);
/* category: a ct_category value or CT_AGGREGATE. */
CT_API ct_status ct_report_metrics(const ct_report * report, int category, ct_metrics * out);
CT_API ct_status ct_report_json(const ct_report * report, char ** out);
CT_API ct_status ct_report_table(const ct_report * report, char ** out);
CT_API void ct_report_destroy(ct_report * report);

/* Synthetic scenarios. spec_json may be NULL or "" for the defaults. Writes
 * manifest.json, detections.json, ground_truth.json and calibration.json. */
CT_API ct_status ct_synth(const char * spec_json, uint64_t seed, const char * directory);

#ifdef __cplusplus
}
#endif

#endif  /* CAMTRACK__CAMTRACK_H_ */
