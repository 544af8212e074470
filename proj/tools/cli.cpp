/* Copyright 2026 The panotrack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "panotrack/config.hpp"
#include "panotrack/errors.hpp"
#include "panotrack/kittiio.hpp"
#include "panotrack/metrics.hpp"
#include "panotrack/pipeline.hpp"
#include "panotrack/plot.hpp"
#include "panotrack/synth.hpp"

namespace panotrack::cli {
namespace {

using nlohmann::json;

constexpr const char* kDatasetEnv = "PANOTRACK_DATASET_ROOT";

struct TrackArgs {
  std::string data;
  std::string out;
  std::string tracks;  // label: root holding sequences/NN/tracks.txt
  std::vector<std::string> sequences;
  std::string config;
  bool no_kalman = false;
  std::string matching;
  bool no_candidate_state = false;
  bool no_score_split = false;
  bool ego_frame = false;
  std::size_t ignore_size = kDefaultIgnoreSize;
  std::string input_subdir = "predictions";
  int jobs = 1;
};

struct EvalArgs {
  std::string gt;
  std::string pred;
  std::string out;
  std::vector<std::string> sequences;
  std::vector<std::size_t> min_points{1, 50};
  std::string filter_mode = "frame";
  std::string pred_subdir = "predictions";
  int jobs = 1;
};

struct SynthArgs {
  std::string scenario;
  std::string out;
};

struct PlotArgs {
  std::string summary;
  std::vector<std::string> reports;
  std::string out;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed: " + p.string());
}

std::string resolve_root(const std::string& flag, const char* what) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kDatasetEnv); env && *env) return env;
  throw ConfigError(std::string("no ") + what + " given and " + kDatasetEnv +
                    " is not set");
}

TrackerConfig build_config(const TrackArgs& a) {
  TrackerConfig cfg = a.config.empty() ? TrackerConfig::defaults()
                                       : load_config(a.config);
  if (a.no_kalman) cfg.ablation.use_kalman = false;
  if (!a.matching.empty()) cfg.ablation.matching_metric = parse_metric(a.matching);
  if (a.no_candidate_state) cfg.ablation.use_candidate_state = false;
  if (a.no_score_split) cfg.ablation.use_score_split = false;
  cfg.validate();
  return cfg;
}

void print_thresholds(const TrackerConfig& cfg, std::ostream& err) {
  err << "tracker thresholds (group split high low min_hits max_age "
         "death_age):\n";
  for (ClassGroup g : kAllGroups) {
    const GroupConfig& gc = cfg.group(g);
    char line[160];
    std::snprintf(line, sizeof(line), "  %-10s %5.2f %6.2f %6.2f %3d %3d %3d\n",
                  std::string(group_name(g)).c_str(), gc.det_split_threshold,
                  gc.high_match_threshold, gc.low_match_threshold, gc.min_hits,
                  gc.max_age, gc.death_age);
    err << line;
  }
  const AblationToggles& ab = cfg.ablation;
  err << "  kalman=" << (ab.use_kalman ? "on" : "off")
      << " matching=" << metric_name(ab.matching_metric)
      << " candidate_state=" << (ab.use_candidate_state ? "on" : "off")
      << " score_split=" << (ab.use_score_split ? "on" : "off") << '\n';
}

void write_manifest(const fs::path& out, const std::string& command,
                    const std::string& data_root,
                    const std::vector<std::string>& sequences,
                    const TrackArgs& a, const TrackerConfig& cfg) {
  json m;
  m["command"] = command;
  m["data_root"] = data_root;
  m["sequences"] = sequences;
  m["config_path"] = a.config.empty() ? json(nullptr) : json(a.config);
  m["ablation"] = {
      {"use_kalman", cfg.ablation.use_kalman},
      {"matching_metric", std::string(metric_name(cfg.ablation.matching_metric))},
      {"use_candidate_state", cfg.ablation.use_candidate_state},
      {"use_score_split", cfg.ablation.use_score_split}};
  m["output_root"] = out.string();
  m["ignore_size"] = a.ignore_size;
  m["ego_frame"] = a.ego_frame;
  m["input_subdir"] = a.input_subdir;
  m["min_points"] = std::vector<std::size_t>{1, 50};
  if (!a.tracks.empty()) m["tracks_root"] = a.tracks;
  write_file(out / "manifest.json", m.dump(2) + "\n");
  write_file(out / "config.ini", format_config(cfg));
}

TrackOptions track_options(const TrackArgs& a, const TrackerConfig& cfg) {
  TrackOptions opt;
  opt.config = cfg;
  opt.ignore_size = a.ignore_size;
  opt.ego_frame = a.ego_frame;
  opt.input_subdir = a.input_subdir;
  return opt;
}

void report_sequence(const SequenceSummary& s, std::mutex& mu,
                     std::ostream& out, std::ostream& err) {
  std::lock_guard<std::mutex> lock(mu);
  if (!s.world_frame) {
    err << "warning: sequence " << s.sequence
        << ": no poses, tracking in the sensor frame\n";
  }
  out << "sequence " << s.sequence << ": " << s.frames << " frames, "
      << s.tracks.size() << " tracks";
  if (s.id_stats) {
    out << ", " << s.total_switches() << " id switches, " << s.total_missed()
        << " missed instance-frames";
  }
  out << '\n';
}

int cmd_track(const TrackArgs& a, std::ostream& out, std::ostream& err) {
  const std::string data = resolve_root(a.data, "--data");
  if (a.out.empty()) throw ConfigError("--out is required");
  const TrackerConfig cfg = build_config(a);
  print_thresholds(cfg, err);
  const std::vector<std::string> seqs =
      a.sequences.empty() ? list_sequences(data) : a.sequences;
  const TrackOptions opt = track_options(a, cfg);
  write_manifest(a.out, "track", data, seqs, a, cfg);

  std::mutex mu;
  std::vector<SequenceSummary> summaries(seqs.size());
  parallel_for(seqs.size(), a.jobs, [&](std::size_t k) {
    const SequenceResult r = run_track(data, seqs[k], opt);
    write_sequence_result(a.out, seqs[k], r);
    summaries[k] = r.summary;
  });
  for (const auto& s : summaries) report_sequence(s, mu, out, err);
  return kExitOk;
}

int cmd_label(const TrackArgs& a, std::ostream& out, std::ostream& err) {
  const std::string data = resolve_root(a.data, "--data");
  if (a.out.empty()) throw ConfigError("--out is required");
  if (a.tracks.empty()) throw ConfigError("--tracks is required");
  const TrackerConfig cfg = build_config(a);
  print_thresholds(cfg, err);
  const std::vector<std::string> seqs =
      a.sequences.empty() ? list_sequences(a.tracks) : a.sequences;
  const TrackOptions opt = track_options(a, cfg);
  write_manifest(a.out, "label", data, seqs, a, cfg);

  std::mutex mu;
  std::vector<SequenceSummary> summaries(seqs.size());
  parallel_for(seqs.size(), a.jobs, [&](std::size_t k) {
    const LoadedSequence seq = load_sequence(data, seqs[k], opt);
    const fs::path tracks_file =
        SequencePaths(a.tracks, seqs[k]).dir / "tracks.txt";
    SequenceResult r;
    r.tracks = parse_tracks(read_file(tracks_file), seq.frames.size());
    IdMemory memory;
    r.labels = label_sequence(seq.frames, r.tracks, opt.ignore_size, &memory);
    r.summary = summarize(seqs[k], r.tracks, memory, seq.gt, r.labels,
                          seq.world_frame);
    write_sequence_result(a.out, seqs[k], r);
    summaries[k] = r.summary;
  });
  for (const auto& s : summaries) report_sequence(s, mu, out, err);
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const std::string gt = resolve_root(a.gt, "--gt");
  if (a.pred.empty()) throw ConfigError("--pred is required");
  EvalOptions opt;
  opt.min_points = a.min_points;
  opt.pred_subdir = a.pred_subdir;
  if (a.filter_mode == "frame") {
    opt.filter = SizeFilter::kPerFrame;
  } else if (a.filter_mode == "tube") {
    opt.filter = SizeFilter::kPerTube;
  } else {
    throw ConfigError("--filter-mode must be frame or tube, got '" +
                      a.filter_mode + "'");
  }
  const auto reports = evaluate(gt, a.pred, a.sequences, opt, a.jobs);
  for (const LstqReport& r : reports) {
    out << "min_points=" << r.options.min_points << '\n'
        << format_report_text(r) << '\n';
    if (!a.out.empty()) {
      const std::string stem = "lstq_min" + std::to_string(r.options.min_points);
      write_file(fs::path(a.out) / (stem + ".txt"), format_report_text(r));
      write_file(fs::path(a.out) / (stem + ".kv"), format_report_kv(r));
    }
  }
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const Scenario s = load_scenario(a.scenario);
  const SynthSequence seq = generate(s);
  write_dataset(s, seq, a.out);
  out << "wrote sequence " << s.sequence << " (" << s.frames << " frames, "
      << s.objects.size() << " objects) to " << a.out << '\n';
  return kExitOk;
}

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  if (a.summary.empty() == a.reports.empty()) {
    throw ConfigError("plot needs exactly one of --summary or --report");
  }
  std::string svg;
  if (!a.summary.empty()) {
    const SequenceSummary s = summary_from_json(read_file(a.summary));
    if (s.tracks.empty()) {
      err << "warning: " << a.summary << " has no tracks; writing empty axes\n";
    }
    svg = trajectory_svg(s);
  } else {
    std::vector<std::pair<std::string, std::vector<ReportRow>>> runs;
    for (const std::string& r : a.reports) {
      auto rows = parse_report_kv(read_file(r));
      if (rows.empty()) err << "warning: " << r << " has no report rows\n";
      runs.emplace_back(fs::path(r).parent_path().filename().string() + "/" +
                            fs::path(r).stem().string(),
                        std::move(rows));
    }
    svg = lstq_bar_svg(runs);
  }
  write_file(a.out, svg);
  out << "wrote " << a.out << '\n';
  return kExitOk;
}

void add_track_flags(CLI::App* sub, TrackArgs& a) {
  sub->add_option("--data", a.data,
                  std::string("dataset root (default: $") + kDatasetEnv + ")");
  sub->add_option("--out", a.out, "output root")->required();
  sub->add_option("--sequences", a.sequences, "sequence names, e.g. 08")
      ->delimiter(',');
  sub->add_option("--config", a.config, "tracker configuration file")
      ->check(CLI::ExistingFile);
  sub->add_flag("--no-kalman", a.no_kalman, "hold the last detected box");
  sub->add_option("--matching", a.matching, "similarity metric")
      ->check(CLI::IsMember({"diou", "giou"}));
  sub->add_flag("--no-candidate-state", a.no_candidate_state,
                "make new tracks active at once and drop them when lost");
  sub->add_flag("--no-score-split", a.no_score_split,
                "associate all detections in the high-score pass");
  sub->add_flag("--ego-frame", a.ego_frame, "ignore poses.txt");
  sub->add_option("--ignore-size", a.ignore_size,
                  "minimum points of an untracked instance")
      ->capture_default_str();
  sub->add_option("--input-subdir", a.input_subdir,
                  "directory of the network's panoptic labels")
      ->capture_default_str();
  sub->add_option("--jobs", a.jobs, "sequences processed in parallel")
      ->capture_default_str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"LiDAR box tracking and point-level panoptic labeling"};
  app.require_subcommand(1);

  TrackArgs track_args;
  CLI::App* track = app.add_subcommand("track", "run both stages");
  add_track_flags(track, track_args);

  TrackArgs label_args;
  CLI::App* label = app.add_subcommand("label", "point labeling from tracks.txt");
  add_track_flags(label, label_args);
  label->add_option("--tracks", label_args.tracks,
                    "root holding sequences/NN/tracks.txt")
      ->required();

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "LSTQ evaluation");
  eval->add_option("--gt", eval_args.gt,
                   std::string("ground truth root (default: $") + kDatasetEnv +
                       ")");
  eval->add_option("--pred", eval_args.pred, "prediction root")->required();
  eval->add_option("--out", eval_args.out, "directory for report files");
  eval->add_option("--sequences", eval_args.sequences)->delimiter(',');
  eval->add_option("--min-points", eval_args.min_points,
                   "instance size thresholds")
      ->delimiter(',')
      ->capture_default_str();
  eval->add_option("--filter-mode", eval_args.filter_mode,
                   "apply min-points per frame or per tube")
      ->check(CLI::IsMember({"frame", "tube"}))
      ->capture_default_str();
  eval->add_option("--pred-subdir", eval_args.pred_subdir)->capture_default_str();
  eval->add_option("--jobs", eval_args.jobs)->capture_default_str();

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("scenario", synth_args.scenario, "scenario JSON")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", synth_args.out, "dataset root")->required();

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plot", "SVG figures");
  plot->add_option("--summary", plot_args.summary, "summary.json")
      ->check(CLI::ExistingFile);
  plot->add_option("--report", plot_args.reports, ".kv report (repeatable)")
      ->check(CLI::ExistingFile);
  plot->add_option("--out", plot_args.out, "output .svg")->required();

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(),
                               args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (track->parsed()) return cmd_track(track_args, out, err);
  if (label->parsed()) return cmd_label(label_args, out, err);
  if (eval->parsed()) return cmd_eval(eval_args, out);
  if (synth->parsed()) return cmd_synth(synth_args, out);
  return cmd_plot(plot_args, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const EvaluationError& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kExitEvaluation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace panotrack::cli
