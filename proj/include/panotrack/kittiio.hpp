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

// SemanticKITTI on-disk formats. All multi-byte values are little-endian
// regardless of host byte order.
//
//   sequences/NN/velodyne/FFFFFF.bin      N x {float32 x, y, z, remission}
//   sequences/NN/labels/FFFFFF.label      N x uint32 (instance << 16 | semantic)
//   sequences/NN/predictions/FFFFFF.label same layout
//   sequences/NN/confidences/FFFFFF.conf  N x float32 in [0, 1] (optional)
//   sequences/NN/poses.txt                one row-major 3x4 matrix per line
//   sequences/NN/calib.txt                `Tr: <12 values>` velodyne->camera

#ifndef PANOTRACK_KITTIIO_HPP_
#define PANOTRACK_KITTIIO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "panotrack/frame.hpp"
#include "panotrack/geometry.hpp"

namespace panotrack {

namespace fs = std::filesystem;

using Pose = Eigen::Matrix4d;

// Label word packing.
std::uint32_t pack_label(ClassId semantic, InstanceId instance);
ClassId label_semantic(std::uint32_t word);
InstanceId label_instance(std::uint32_t word);

struct PointCloud {
  std::vector<Point3> points;
  std::vector<float> remission;
};

PointCloud read_points(const fs::path& bin);
void write_points(const fs::path& bin, const PointCloud& cloud);

std::vector<std::uint32_t> read_label_words(const fs::path& label);
void write_label_words(const fs::path& label,
                       std::span<const std::uint32_t> words);

PanopticLabels read_labels(const fs::path& label);
// Throws FormatError when a semantic or instance value exceeds 16 bits.
void write_labels(const fs::path& label, const PanopticLabels& labels);

std::vector<float> read_confidences(const fs::path& conf);
void write_confidences(const fs::path& conf, std::span<const float> values);

// Reads a scan with its panoptic labels. Confidences default to 1.0 when
// `conf` is absent or the file does not exist. Size mismatches raise
// FormatError quoting both files' byte sizes.
FramePanoptic read_frame(const fs::path& bin, const fs::path& label,
                         const std::optional<fs::path>& conf = std::nullopt);

// Per-frame camera poses (3x4, row-major) promoted to 4x4.
std::vector<Pose> read_poses(const fs::path& poses_txt);
void write_poses(const fs::path& poses_txt, std::span<const Pose> poses);

// `Tr` entry of calib.txt; identity if the file has no Tr line.
Pose read_calib(const fs::path& calib_txt);
void write_calib(const fs::path& calib_txt, const Pose& tr);

// World-from-velodyne transform: Tr^-1 * pose * Tr. Throws FormatError if
// the rotation block is not orthonormal to 1e-6.
Pose world_from_ego(const Pose& camera_pose, const Pose& tr);

Point3 transform(const Pose& pose, const Point3& p);
std::vector<Point3> transform(const Pose& pose, std::span<const Point3> pts);

// One axis-aligned box per network Things instance, fitted by min/max over
// the instance's points mapped through `pose`. Score is the highest point
// confidence; class is the instance's majority semantic label (lowest id on
// ties). Extents are floored at kMinDimension.
std::vector<Box3D> extract_detections(const FramePanoptic& frame,
                                      const Pose& pose);

// Paths of one sequence under a dataset root.
struct SequencePaths {
  fs::path dir;  // <root>/sequences/NN

  SequencePaths(const fs::path& root, const std::string& sequence);

  fs::path velodyne(std::size_t frame) const;
  fs::path labels(std::size_t frame) const;
  fs::path predictions(std::size_t frame) const;
  fs::path confidences(std::size_t frame) const;
  fs::path poses() const { return dir / "poses.txt"; }
  fs::path calib() const { return dir / "calib.txt"; }

  // Number of velodyne scans; they must be numbered 0..n-1 without gaps.
  std::size_t frame_count() const;
};

std::string frame_name(std::size_t frame);  // "000042"
std::string sequence_name(int sequence);    // "08"

// Writes predictions/FFFFFF.label for every frame. Instance ids beyond 16
// bits raise FormatError naming the frame.
void write_predictions(const SequencePaths& out,
                       std::span<const PanopticLabels> frames);

}  // namespace panotrack

#endif  // PANOTRACK_KITTIIO_HPP_
