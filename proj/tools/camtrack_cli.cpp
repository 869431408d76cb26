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

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace
{

struct Failure
{
  ct_status status;
  std::string message;
};

void check(ct_status status, const std::string & context)
{
  if (status != CT_OK) {
    throw Failure{status, context + ": " + ct_status_name(status) + ": " + ct_last_error()};
  }
}

template <class T, void (*Destroy)(T *)>
struct Deleter
{
  void operator()(T * p) const { Destroy(p); }
};

using Config = std::unique_ptr<ct_config, Deleter<ct_config, ct_config_destroy>>;
using Rig = std::unique_ptr<ct_rig, Deleter<ct_rig, ct_rig_destroy>>;
using Sequence = std::unique_ptr<ct_sequence, Deleter<ct_sequence, ct_sequence_destroy>>;
using Results = std::unique_ptr<ct_results, Deleter<ct_results, ct_results_destroy>>;
using Truth = std::unique_ptr<ct_ground_truth, Deleter<ct_ground_truth, ct_ground_truth_destroy>>;
using Report = std::unique_ptr<ct_report, Deleter<ct_report, ct_report_destroy>>;

std::string take_string(char * text)
{
  std::string out(text ? text : "");
  ct_string_free(text);
  return out;
}

struct TrackOptions
{
  std::string config;
  std::string detections;
  std::string manifest;
  std::string calibration;
  std::string flags;
  bool flags_set{false};
  std::size_t drop_cameras{0};
  int threads{0};
  bool no_verification{false};
  bool no_stage_factor{false};
};

Config load_config(const TrackOptions & o, const std::string & flags)
{
  ct_config * raw = nullptr;
  if (o.config.empty()) {
    check(ct_config_create_default(&raw), "config");
  } else {
    check(ct_config_load_file(o.config.c_str(), &raw), "config " + o.config);
  }
  Config config(raw);
  if (!flags.empty()) check(ct_config_set_flags(config.get(), flags.c_str()), "--flags");
  if (o.threads > 0) check(ct_config_set_threads(config.get(), o.threads), "--threads");
  if (o.no_verification) check(ct_config_set_verification(config.get(), 0), "verification");
  if (o.no_stage_factor) check(ct_config_set_stage_factor(config.get(), 0), "stage factor");
  return config;
}

Rig load_rig(const TrackOptions & o)
{
  ct_rig * raw = nullptr;
  check(ct_rig_load(o.calibration.c_str(), &raw), "calibration " + o.calibration);
  Rig rig(raw);
  if (o.drop_cameras > 0) {
    check(ct_rig_drop_cameras(rig.get(), o.drop_cameras), "--drop-cameras");
  }
  return rig;
}

Sequence load_sequence(const std::string & detections, const std::string & manifest)
{
  ct_sequence * raw = nullptr;
  check(
    ct_sequence_load(detections.empty() ? nullptr : detections.c_str(), manifest.c_str(), &raw),
    "sequence");
  return Sequence(raw);
}

Results run_tracking(const ct_sequence * sequence, const ct_config * config, const ct_rig * rig)
{
  ct_results * raw = nullptr;
  check(ct_track_sequence(sequence, config, rig, &raw), "track");
  return Results(raw);
}

Report run_eval(const ct_results * results, const ct_ground_truth * truth, const ct_sequence * seq)
{
  ct_report * raw = nullptr;
  check(ct_evaluate(results, truth, seq, &raw), "eval");
  return Report(raw);
}

Truth load_truth(const std::string & path)
{
  ct_ground_truth * raw = nullptr;
  check(ct_ground_truth_load(path.c_str(), &raw), "ground truth " + path);
  return Truth(raw);
}

void emit(const std::string & text, const std::string & path)
{
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw Failure{CT_ERR_IO, "cannot write " + path};
}

void add_track_inputs(CLI::App * cmd, TrackOptions & o)
{
  cmd->add_option("--config", o.config, "tracker configuration (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--detections", o.detections, "detections (nuScenes results JSON)")
    ->required()
    ->check(CLI::ExistingFile);
  cmd->add_option("--manifest", o.manifest, "scene manifest giving frame order")
    ->required()
    ->check(CLI::ExistingFile);
  cmd->add_option("--calibration", o.calibration, "camera calibration")
    ->required()
    ->check(CLI::ExistingFile);
  cmd->add_option("--drop-cameras", o.drop_cameras, "remove the last N cameras before tracking");
  cmd->add_option("--threads", o.threads, "worker threads (overrides config)")
    ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-verification", o.no_verification, "disable two-step verification");
  cmd->add_flag("--no-stage-factor", o.no_stage_factor, "force stage 0 in the noise model");
}

// Table III rows: baseline, G, H, G+H, G+H+S, G+P+H+S.
const std::vector<std::string> kTableGrid = {"none", "G", "H", "G,H", "G,H,S", "G,P,H,S"};

std::vector<std::string> full_grid()
{
  std::vector<std::string> out;
  const char letters[] = {'G', 'P', 'H', 'S'};
  for (int mask = 0; mask < 16; ++mask) {
    std::string s;
    for (int b = 0; b < 4; ++b) {
      if (mask & (1 << b)) {
        if (!s.empty()) s += ',';
        s += letters[b];
      }
    }
    out.push_back(s.empty() ? "none" : s);
  }
  return out;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Multi-camera 3D multi-object tracker"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ct_version()));

  TrackOptions track_opts;
  std::string track_out;
  auto * track = app.add_subcommand("track", "track detections and write results");
  add_track_inputs(track, track_opts);
  track->add_option("--flags", track_opts.flags, "enabled modules, subset of G,P,H,S or none");
  track->add_option("--out", track_out, "output results file")->required();

  std::string synth_spec;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  auto * synth = app.add_subcommand("synth", "generate a synthetic scenario");
  synth->add_option("--spec", synth_spec, "scenario spec (JSON); defaults when omitted")
    ->check(CLI::ExistingFile);
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--out", synth_out, "output directory")->required();

  std::string eval_results, eval_gt, eval_manifest, eval_format = "table", eval_out;
  auto * eval = app.add_subcommand("eval", "score tracking results against ground truth");
  eval->add_option("--results", eval_results, "tracking results")->required()->check(
    CLI::ExistingFile);
  eval->add_option("--gt", eval_gt, "ground truth")->required()->check(CLI::ExistingFile);
  eval->add_option("--manifest", eval_manifest, "scene manifest")->required()->check(
    CLI::ExistingFile);
  eval->add_option("--format", eval_format, "report format")
    ->check(CLI::IsMember({"json", "table"}));
  eval->add_option("--out", eval_out, "write the report here instead of stdout");

  TrackOptions ablate_opts;
  std::string ablate_gt, ablate_format = "table", ablate_grid = "table", ablate_out;
  auto * ablate = app.add_subcommand("ablate", "run the G/P/H/S flag grid on one input");
  add_track_inputs(ablate, ablate_opts);
  ablate->add_option("--gt", ablate_gt, "ground truth")->required()->check(CLI::ExistingFile);
  ablate->add_option("--grid", ablate_grid, "table: the six ablation rows; all: 16 combinations")
    ->check(CLI::IsMember({"table", "all"}));
  ablate->add_option("--format", ablate_format, "report format")
    ->check(CLI::IsMember({"json", "table"}));
  ablate->add_option("--out", ablate_out, "write the table here instead of stdout");

  TrackOptions config_opts;
  std::string config_out;
  auto * config_cmd = app.add_subcommand("config", "print the effective configuration");
  config_cmd->add_option("--config", config_opts.config, "configuration overlay (JSON)")
    ->check(CLI::ExistingFile);
  config_cmd->add_option("--out", config_out, "write the configuration here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*track) {
      const Config config = load_config(track_opts, track_opts.flags);
      const Rig rig = load_rig(track_opts);
      const Sequence seq = load_sequence(track_opts.detections, track_opts.manifest);
      const Results results = run_tracking(seq.get(), config.get(), rig.get());
      check(ct_results_write(results.get(), track_out.c_str()), "write " + track_out);
    } else if (*synth) {
      std::string spec;
      if (!synth_spec.empty()) {
        std::ifstream in(synth_spec);
        spec.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
      }
      check(ct_synth(spec.c_str(), synth_seed, synth_out.c_str()), "synth");
    } else if (*eval) {
      const Sequence seq = load_sequence("", eval_manifest);
      ct_results * raw = nullptr;
      check(ct_results_load(eval_results.c_str(), &raw), "results " + eval_results);
      const Results results(raw);
      const Truth truth = load_truth(eval_gt);
      const Report report = run_eval(results.get(), truth.get(), seq.get());
      char * text = nullptr;
      if (eval_format == "json") {
        check(ct_report_json(report.get(), &text), "report");
      } else {
        check(ct_report_table(report.get(), &text), "report");
      }
      emit(take_string(text), eval_out);
    } else if (*ablate) {
      const Rig rig = load_rig(ablate_opts);
      const Sequence seq = load_sequence(ablate_opts.detections, ablate_opts.manifest);
      const Truth truth = load_truth(ablate_gt);
      const auto grid = ablate_grid == "all" ? full_grid() : kTableGrid;
      nlohmann::json rows = nlohmann::json::array();
      std::string table;
      char line[160];
      std::snprintf(
        line, sizeof(line), "%-10s %8s %8s %8s %7s %7s %7s\n", "flags", "AMOTA", "MOTA", "AMOTP",
        "IDS", "FP", "FN");
      table += line;
      for (const auto & flags : grid) {
        const Config config = load_config(ablate_opts, flags);
        const Results results = run_tracking(seq.get(), config.get(), rig.get());
        const Report report = run_eval(results.get(), truth.get(), seq.get());
        ct_metrics m{};
        check(ct_report_metrics(report.get(), CT_AGGREGATE, &m), "report");
        rows.push_back(
          {{"flags", flags},
           {"amota", m.amota},
           {"mota", m.mota},
           {"amotp", m.amotp},
           {"ids", m.ids},
           {"fp", m.fp},
           {"fn", m.fn}});
        std::snprintf(
          line, sizeof(line), "%-10s %8.4f %8.4f %8.4f %7zu %7zu %7zu\n", flags.c_str(), m.amota,
          m.mota, m.amotp, m.ids, m.fp, m.fn);
        table += line;
      }
      emit(ablate_format == "json" ? nlohmann::json{{"rows", rows}}.dump(2) : table, ablate_out);
    } else if (*config_cmd) {
      const Config config = load_config(config_opts, "");
      char * text = nullptr;
      check(ct_config_to_json(config.get(), &text), "config");
      emit(take_string(text), config_out);
    }
  } catch (const Failure & f) {
    std::cerr << "camtrack: " << f.message << '\n';
    return 1;
  }
  return 0;
}
