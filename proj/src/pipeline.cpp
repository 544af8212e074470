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

#include "panotrack/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "panotrack/errors.hpp"
#include "panotrack/semantic.hpp"

namespace panotrack {
namespace {

using nlohmann::json;

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

// Number of FFFFFF.label files in `dir`, which must be numbered 0..n-1.
std::size_t count_label_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("missing directory " + dir.string());
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".label") ++n;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!fs::exists(dir / (frame_name(i) + ".label"))) {
      throw IoError("label files in " + dir.string() +
                    " are not numbered 0.." + std::to_string(n - 1));
    }
  }
  return n;
}

LearningClass parse_learning_name(const std::string& name) {
  for (LearningClass c = 1; c < kNumLearningClasses; ++c) {
    if (learning_class_name(c) == name) return c;
  }
  throw FormatError("unknown class name '" + name + "' in summary");
}

}  // namespace

LoadedSequence load_sequence(const fs::path& data_root,
                             const std::string& sequence,
                             const TrackOptions& options) {
  const SequencePaths in(data_root, sequence);
  const std::size_t n = in.frame_count();

  LoadedSequence seq;
  seq.sequence = sequence;
  std::vector<Pose> world(n, Pose::Identity());
  if (!options.ego_frame && fs::exists(in.poses())) {
    const std::vector<Pose> poses = read_poses(in.poses());
    if (poses.size() < n) {
      throw FormatError(in.poses().string() + " has " +
                        std::to_string(poses.size()) + " poses for " +
                        std::to_string(n) + " scans");
    }
    const Pose tr =
        fs::exists(in.calib()) ? read_calib(in.calib()) : Pose::Identity();
    for (std::size_t t = 0; t < n; ++t) world[t] = world_from_ego(poses[t], tr);
    seq.world_frame = true;
  }

  seq.frames.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const fs::path label = in.dir / options.input_subdir /
                           (frame_name(t) + ".label");
    FramePanoptic f = read_frame(in.velodyne(t), label, in.confidences(t));
    if (seq.world_frame) f.points = transform(world[t], f.points);
    seq.frames.push_back(std::move(f));
  }

  const fs::path gt_dir = in.dir / "labels";
  if (fs::is_directory(gt_dir)) {
    std::vector<PanopticLabels> gt;
    gt.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      PanopticLabels g = read_labels(in.labels(t));
      if (g.size() != seq.frames[t].size()) {
        throw FormatError("size mismatch: " + in.labels(t).string() + " (" +
                          std::to_string(g.size() * 4) + " bytes) vs " +
                          in.velodyne(t).string() + " (" +
                          std::to_string(seq.frames[t].size() * 16) +
                          " bytes)");
      }
      gt.push_back(std::move(g));
    }
    seq.gt = std::move(gt);
  }
  return seq;
}

SequenceTracks track_frames(const std::vector<FramePanoptic>& frames,
                            const TrackerConfig& config) {
  Tracker tracker(config);
  SequenceTracks out;
  out.reserve(frames.size());
  for (const FramePanoptic& f : frames) {
    const auto dets = extract_detections(f, Pose::Identity());
    out.push_back(tracker.step(prepare_detections(dets, config)));
  }
  return out;
}

std::vector<PanopticLabels> label_sequence(
    const std::vector<FramePanoptic>& frames, const SequenceTracks& tracks,
    std::size_t ignore_size, IdMemory* memory_out) {
  if (tracks.size() != frames.size()) {
    throw InvalidInputError("tracks cover " + std::to_string(tracks.size()) +
                            " frames but the sequence has " +
                            std::to_string(frames.size()));
  }
  IdMemory memory;
  std::vector<PanopticLabels> out;
  out.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    std::vector<TrackOutput> frame_tracks = tracks[t];
    std::sort(frame_tracks.begin(), frame_tracks.end(),
              [](const TrackOutput& a, const TrackOutput& b) {
                return std::make_pair(a.group, a.track_id) <
                       std::make_pair(b.group, b.track_id);
              });
    const FrameIndex index(frames[t]);
    std::vector<std::vector<std::size_t>> sets;
    sets.reserve(frame_tracks.size());
    for (const TrackOutput& tr : frame_tracks) {
      sets.push_back(associate_box_points(tr.box, index));
    }
    sets = resolve_overlaps(std::move(sets));
    std::vector<TrackedPoints> tracked;
    tracked.reserve(sets.size());
    for (std::size_t k = 0; k < sets.size(); ++k) {
      tracked.push_back({frame_tracks[k].group, frame_tracks[k].track_id,
                         frame_tracks[k].class_id, std::move(sets[k])});
    }
    out.push_back(label_frame(frames[t], tracked, memory, ignore_size));
  }
  if (memory_out) *memory_out = memory;
  return out;
}

std::size_t SequenceSummary::total_switches() const {
  std::size_t n = 0;
  if (id_stats) {
    for (const auto& [c, s] : *id_stats) n += s.switches;
  }
  return n;
}

std::size_t SequenceSummary::total_missed() const {
  std::size_t n = 0;
  if (id_stats) {
    for (const auto& [c, s] : *id_stats) n += s.missed_frames;
  }
  return n;
}

std::map<LearningClass, IdStats> id_statistics(
    const std::vector<PanopticLabels>& gt,
    const std::vector<PanopticLabels>& pred,
    const std::vector<InstanceId>& track_ids) {
  const std::set<InstanceId> owned(track_ids.begin(), track_ids.end());
  if (gt.size() != pred.size()) {
    throw EvaluationError("identity statistics: " + std::to_string(gt.size()) +
                          " gt frames vs " + std::to_string(pred.size()) +
                          " predicted frames");
  }
  using Key = std::pair<LearningClass, InstanceId>;
  std::map<Key, std::optional<InstanceId>> last;
  std::map<LearningClass, IdStats> stats;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    if (gt[t].size() != pred[t].size()) {
      throw EvaluationError("frame " + frame_name(t) +
                            ": gt and prediction differ in point count");
    }
    std::map<Key, std::map<InstanceId, std::size_t>> overlap;
    for (std::size_t i = 0; i < gt[t].size(); ++i) {
      const LearningClass c = to_learning(gt[t].semantic[i]);
      if (!is_things_learning(c) || gt[t].instance[i] == 0) continue;
      auto& counts = overlap[{c, gt[t].instance[i]}];
      if (owned.count(pred[t].instance[i])) ++counts[pred[t].instance[i]];
    }
    for (const auto& [key, counts] : overlap) {
      IdStats& s = stats[key.first];
      auto [it, fresh] = last.try_emplace(key);
      if (fresh) ++s.instances;
      if (counts.empty()) {
        ++s.missed_frames;
        continue;
      }
      InstanceId best = 0;
      std::size_t best_n = 0;
      for (const auto& [id, n] : counts) {
        if (n > best_n) {
          best = id;
          best_n = n;
        }
      }
      if (it->second && *it->second != best) ++s.switches;
      it->second = best;
    }
  }
  return stats;
}

SequenceSummary summarize(const std::string& sequence,
                          const SequenceTracks& tracks, const IdMemory& memory,
                          const std::optional<std::vector<PanopticLabels>>& gt,
                          const std::vector<PanopticLabels>& labels,
                          bool world_frame) {
  SequenceSummary s;
  s.sequence = sequence;
  s.frames = static_cast<int>(tracks.size());
  s.world_frame = world_frame;
  std::map<std::pair<ClassGroup, TrackId>, TrackLife> lives;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    for (const TrackOutput& tr : tracks[t]) {
      auto [it, fresh] = lives.try_emplace({tr.group, tr.track_id});
      TrackLife& life = it->second;
      if (fresh) {
        life.group = tr.group;
        life.track_id = tr.track_id;
        life.first_frame = static_cast<int>(t);
      }
      life.class_id = tr.class_id;
      life.last_frame = static_cast<int>(t);
      ++life.frames_emitted;
      life.trajectory.push_back({static_cast<double>(t), tr.box.cx, tr.box.cy});
    }
  }
  for (auto& [key, life] : lives) {
    life.instance = memory.find(key.first, key.second);
    s.tracks.push_back(std::move(life));
  }
  if (gt) s.id_stats = id_statistics(*gt, labels, memory.tracked_ids());
  return s;
}

std::string summary_to_json(const SequenceSummary& s) {
  json j;
  j["sequence"] = s.sequence;
  j["frames"] = s.frames;
  j["world_frame"] = s.world_frame;
  json tracks = json::array();
  for (const TrackLife& life : s.tracks) {
    json jt;
    jt["group"] = std::string(group_name(life.group));
    jt["track_id"] = life.track_id;
    jt["instance"] = life.instance ? json(*life.instance) : json(nullptr);
    jt["class"] = life.class_id;
    jt["first_frame"] = life.first_frame;
    jt["last_frame"] = life.last_frame;
    jt["frames_emitted"] = life.frames_emitted;
    jt["trajectory"] = life.trajectory;
    tracks.push_back(std::move(jt));
  }
  j["tracks"] = std::move(tracks);
  if (s.id_stats) {
    json stats = json::object();
    for (const auto& [c, st] : *s.id_stats) {
      stats[std::string(learning_class_name(c))] = {
          {"instances", st.instances},
          {"switches", st.switches},
          {"missed_frames", st.missed_frames}};
    }
    j["id_stats"] = std::move(stats);
    j["total_switches"] = s.total_switches();
    j["total_missed_frames"] = s.total_missed();
  } else {
    j["id_stats"] = nullptr;
  }
  return j.dump(2) + "\n";
}

SequenceSummary summary_from_json(const std::string& text) {
  SequenceSummary s;
  try {
    const json j = json::parse(text);
    s.sequence = j.at("sequence").get<std::string>();
    s.frames = j.at("frames").get<int>();
    s.world_frame = j.value("world_frame", false);
    for (const json& jt : j.at("tracks")) {
      TrackLife life;
      life.group = parse_group(jt.at("group").get<std::string>());
      life.track_id = jt.at("track_id").get<TrackId>();
      if (!jt.at("instance").is_null()) {
        life.instance = jt["instance"].get<InstanceId>();
      }
      life.class_id = jt.at("class").get<ClassId>();
      life.first_frame = jt.at("first_frame").get<int>();
      life.last_frame = jt.at("last_frame").get<int>();
      life.frames_emitted = jt.at("frames_emitted").get<int>();
      life.trajectory =
          jt.at("trajectory").get<std::vector<std::array<double, 3>>>();
      s.tracks.push_back(std::move(life));
    }
    if (j.contains("id_stats") && !j["id_stats"].is_null()) {
      std::map<LearningClass, IdStats> stats;
      for (const auto& [name, st] : j["id_stats"].items()) {
        stats[parse_learning_name(name)] = {
            st.at("instances").get<std::size_t>(),
            st.at("switches").get<std::size_t>(),
            st.at("missed_frames").get<std::size_t>()};
      }
      s.id_stats = std::move(stats);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("summary: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("summary: ") + e.what());
  }
  return s;
}

std::string format_tracks(const SequenceTracks& tracks) {
  std::ostringstream ss;
  ss << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    for (const TrackOutput& tr : tracks[t]) {
      const Box3D& b = tr.box;
      ss << t << ' ' << group_name(tr.group) << ' ' << tr.track_id << ' '
         << tr.class_id << ' ' << b.cx << ' ' << b.cy << ' ' << b.cz << ' '
         << b.theta << ' ' << b.l << ' ' << b.w << ' ' << b.h << ' '
         << b.score << '\n';
    }
  }
  return ss.str();
}

SequenceTracks parse_tracks(const std::string& text, std::size_t frames) {
  SequenceTracks out(frames);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::size_t t = 0;
    std::string group;
    TrackOutput tr{};
    Box3D& b = tr.box;
    if (!(ls >> t >> group >> tr.track_id >> tr.class_id >> b.cx >> b.cy >>
          b.cz >> b.theta >> b.l >> b.w >> b.h >> b.score)) {
      throw FormatError("tracks line " + std::to_string(lineno) +
                        ": expected 12 fields");
    }
    if (t >= frames) {
      throw FormatError("tracks line " + std::to_string(lineno) + ": frame " +
                        std::to_string(t) + " beyond sequence length " +
                        std::to_string(frames));
    }
    try {
      tr.group = parse_group(group);
    } catch (const ConfigError& e) {
      throw FormatError("tracks line " + std::to_string(lineno) + ": " +
                        e.what());
    }
    b.class_id = tr.class_id;
    out[t].push_back(tr);
  }
  for (auto& f : out) {
    std::sort(f.begin(), f.end(), [](const TrackOutput& a, const TrackOutput& b) {
      return std::make_pair(a.group, a.track_id) <
             std::make_pair(b.group, b.track_id);
    });
  }
  return out;
}

SequenceResult run_track(const fs::path& data_root, const std::string& sequence,
                         const TrackOptions& options) {
  options.config.validate();
  const LoadedSequence seq = load_sequence(data_root, sequence, options);
  SequenceResult r;
  r.tracks = track_frames(seq.frames, options.config);
  IdMemory memory;
  r.labels = label_sequence(seq.frames, r.tracks, options.ignore_size, &memory);
  r.summary = summarize(sequence, r.tracks, memory, seq.gt, r.labels,
                        seq.world_frame);
  return r;
}

void write_sequence_result(const fs::path& out_root,
                           const std::string& sequence,
                           const SequenceResult& result) {
  const SequencePaths out(out_root, sequence);
  write_predictions(out, result.labels);
  write_text(out.dir / "tracks.txt", format_tracks(result.tracks));
  write_text(out.dir / "summary.json", summary_to_json(result.summary));
}

std::vector<std::string> list_sequences(const fs::path& root) {
  const fs::path dir = root / "sequences";
  if (!fs::is_directory(dir)) throw IoError("missing directory " + dir.string());
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LstqReport> evaluate(const fs::path& gt_root,
                                 const fs::path& pred_root,
                                 const std::vector<std::string>& sequences,
                                 const EvalOptions& options, int jobs) {
  if (options.min_points.empty()) {
    throw ConfigError("at least one min_points value is required");
  }
  const std::vector<std::string> seqs =
      sequences.empty() ? list_sequences(gt_root) : sequences;

  std::vector<std::vector<LstqAccumulator>> per_seq(seqs.size());
  parallel_for(seqs.size(), jobs, [&](std::size_t k) {
    const SequencePaths gt(gt_root, seqs[k]);
    const SequencePaths pred(pred_root, seqs[k]);
    const fs::path pred_dir = pred.dir / options.pred_subdir;
    const std::size_t n_gt = count_label_files(gt.dir / "labels");
    const std::size_t n_pred = count_label_files(pred_dir);
    if (n_gt != n_pred) {
      throw EvaluationError("sequence " + seqs[k] + ": " +
                            std::to_string(n_gt) + " gt frames but " +
                            std::to_string(n_pred) + " predicted frames");
    }
    std::vector<LstqAccumulator> accs;
    for (std::size_t mp : options.min_points) {
      accs.emplace_back(LstqOptions{mp, options.filter},
                        static_cast<std::uint32_t>(k));
    }
    for (std::size_t t = 0; t < n_gt; ++t) {
      const PanopticLabels g = read_labels(gt.labels(t));
      const PanopticLabels p =
          read_labels(pred_dir / (frame_name(t) + ".label"));
      if (g.size() != p.size()) {
        throw EvaluationError("sequence " + seqs[k] + " frame " +
                              frame_name(t) + ": " + std::to_string(g.size()) +
                              " gt points vs " + std::to_string(p.size()) +
                              " predicted points");
      }
      for (auto& acc : accs) acc.add_frame(g, p);
    }
    per_seq[k] = std::move(accs);
  });

  std::vector<LstqReport> reports;
  for (std::size_t m = 0; m < options.min_points.size(); ++m) {
    LstqAccumulator total(LstqOptions{options.min_points[m], options.filter});
    for (const auto& accs : per_seq) total.merge(accs[m]);
    reports.push_back(total.report());
  }
  return reports;
}

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace panotrack
