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

// Sequence-level drivers: panoptic frames -> boxes -> tracks -> per-point
// labels, plus evaluation over whole datasets.
//
// Output tree of a tracking run:
//   <out>/manifest.json, <out>/config.ini
//   <out>/sequences/NN/predictions/FFFFFF.label
//   <out>/sequences/NN/tracks.txt
//   <out>/sequences/NN/summary.json

#ifndef PANOTRACK_PIPELINE_HPP_
#define PANOTRACK_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "panotrack/frame.hpp"
#include "panotrack/kittiio.hpp"
#include "panotrack/metrics.hpp"
#include "panotrack/pointlabel.hpp"
#include "panotrack/tracker.hpp"

namespace panotrack {

struct TrackOptions {
  TrackerConfig config = TrackerConfig::defaults();
  std::size_t ignore_size = kDefaultIgnoreSize;
  bool ego_frame = false;  // skip poses and track in the sensor frame
  std::string input_subdir = "predictions";
};

// One sequence of network output, loaded and moved to the tracking frame.
struct LoadedSequence {
  std::string sequence;
  std::vector<FramePanoptic> frames;  // points in the tracking frame
  std::optional<std::vector<PanopticLabels>> gt;
  bool world_frame = false;
};

// Reads scans, network labels, confidences, poses and (if present) ground
// truth labels. Falls back to the sensor frame when poses.txt is missing.
LoadedSequence load_sequence(const fs::path& data_root,
                             const std::string& sequence,
                             const TrackOptions& options);

// Stage 1 on loaded frames.
SequenceTracks track_frames(const std::vector<FramePanoptic>& frames,
                            const TrackerConfig& config);

// Stage 2 for one sequence: box-to-point association, overlap resolution
// and instance ids. Tracks of frame t are applied to frames[t].
std::vector<PanopticLabels> label_sequence(
    const std::vector<FramePanoptic>& frames, const SequenceTracks& tracks,
    std::size_t ignore_size, IdMemory* memory_out = nullptr);

struct TrackLife {
  ClassGroup group;
  TrackId track_id = 0;
  std::optional<InstanceId> instance;  // absent if it never claimed points
  ClassId class_id = 0;
  int first_frame = 0;
  int last_frame = 0;
  int frames_emitted = 0;
  std::vector<std::array<double, 3>> trajectory;  // frame, x, y
};

// Point-level identity statistics per gt Things class. Only ids owned by a
// track count: in each frame a gt instance is matched to the track id
// covering most of its points (lowest id on ties). A switch is a change of
// that id between successive matched frames; a missed frame has no track id
// on the instance.
struct IdStats {
  std::size_t instances = 0;
  std::size_t switches = 0;
  std::size_t missed_frames = 0;
};

struct SequenceSummary {
  std::string sequence;
  int frames = 0;
  bool world_frame = false;
  std::vector<TrackLife> tracks;                  // by (group, track_id)
  std::optional<std::map<LearningClass, IdStats>> id_stats;  // if gt exists

  std::size_t total_switches() const;
  std::size_t total_missed() const;
};

std::map<LearningClass, IdStats> id_statistics(
    const std::vector<PanopticLabels>& gt,
    const std::vector<PanopticLabels>& pred,
    const std::vector<InstanceId>& track_ids);

SequenceSummary summarize(const std::string& sequence,
                          const SequenceTracks& tracks, const IdMemory& memory,
                          const std::optional<std::vector<PanopticLabels>>& gt,
                          const std::vector<PanopticLabels>& labels,
                          bool world_frame);

std::string summary_to_json(const SequenceSummary& s);
SequenceSummary summary_from_json(const std::string& text);

// Tracks file: one `frame group track_id class cx cy cz theta l w h score`
// line per emitted track, full double precision.
std::string format_tracks(const SequenceTracks& tracks);
SequenceTracks parse_tracks(const std::string& text, std::size_t frames);

struct SequenceResult {
  SequenceTracks tracks;
  std::vector<PanopticLabels> labels;
  SequenceSummary summary;
};

// Both stages on one sequence; nothing is written.
SequenceResult run_track(const fs::path& data_root, const std::string& sequence,
                         const TrackOptions& options);

// Writes predictions, tracks.txt and summary.json under out_root.
void write_sequence_result(const fs::path& out_root,
                           const std::string& sequence,
                           const SequenceResult& result);

// Sorted sequence directory names under <root>/sequences.
std::vector<std::string> list_sequences(const fs::path& root);

struct EvalOptions {
  std::vector<std::size_t> min_points{1, 50};
  SizeFilter filter = SizeFilter::kPerFrame;
  std::string pred_subdir = "predictions";
};

// One report per min_points value. Ground truth comes from
// <gt_root>/sequences/NN/labels, predictions from
// <pred_root>/sequences/NN/<pred_subdir>. A frame-count mismatch raises
// EvaluationError naming the sequence.
std::vector<LstqReport> evaluate(const fs::path& gt_root,
                                 const fs::path& pred_root,
                                 const std::vector<std::string>& sequences,
                                 const EvalOptions& options, int jobs);

// Runs fn(0..n-1) on up to `jobs` threads. The exception of the lowest
// failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace panotrack

#endif  // PANOTRACK_PIPELINE_HPP_
