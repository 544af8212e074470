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

#include "panotrack/kittiio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/LU>

#include "panotrack/errors.hpp"
#include "panotrack/motion.hpp"
#include "panotrack/semantic.hpp"

namespace panotrack {
namespace {

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_bytes(const fs::path& path, const std::vector<unsigned char>& b) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create " + path.parent_path().string() + ": " +
                    ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(b.data()),
            static_cast<std::streamsize>(b.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::uint32_t load_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32(std::uint32_t v, std::vector<unsigned char>& out) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

float load_f32(const unsigned char* p) {
  return std::bit_cast<float>(load_u32(p));
}

void store_f32(float v, std::vector<unsigned char>& out) {
  store_u32(std::bit_cast<std::uint32_t>(v), out);
}

std::string size_desc(const fs::path& p, std::size_t bytes) {
  return p.string() + " (" + std::to_string(bytes) + " bytes)";
}

// Reads the twelve numbers following an optional "key:" prefix.
Pose parse_3x4(const std::string& text, const std::string& where) {
  std::istringstream ss(text);
  Pose m = Pose::Identity();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (!(ss >> m(r, c))) {
        throw FormatError(where + ": expected 12 numbers");
      }
    }
  }
  std::string extra;
  if (ss >> extra) throw FormatError(where + ": trailing data '" + extra + "'");
  return m;
}

std::string format_3x4(const Pose& m) {
  std::ostringstream ss;
  ss << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (r != 0 || c != 0) ss << ' ';
      ss << m(r, c);
    }
  }
  return ss.str();
}

void check_rigid(const Pose& m, const std::string& what) {
  const Eigen::Matrix3d r = m.topLeftCorner<3, 3>();
  const double err =
      (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (!(err <= 1e-6)) {
    throw FormatError(what + ": rotation is not orthonormal (max error " +
                      std::to_string(err) + ")");
  }
}

}  // namespace

std::uint32_t pack_label(ClassId semantic, InstanceId instance) {
  return (instance << 16) | (semantic & 0xFFFFu);
}

ClassId label_semantic(std::uint32_t word) { return word & 0xFFFFu; }

InstanceId label_instance(std::uint32_t word) { return word >> 16; }

PointCloud read_points(const fs::path& bin) {
  const auto bytes = read_bytes(bin);
  if (bytes.size() % 16 != 0) {
    throw FormatError(size_desc(bin, bytes.size()) +
                      " is not a whole number of 16-byte points");
  }
  const std::size_t n = bytes.size() / 16;
  PointCloud cloud;
  cloud.points.resize(n);
  cloud.remission.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char* p = bytes.data() + 16 * i;
    cloud.points[i] = {load_f32(p), load_f32(p + 4), load_f32(p + 8)};
    cloud.remission[i] = load_f32(p + 12);
  }
  return cloud;
}

void write_points(const fs::path& bin, const PointCloud& cloud) {
  if (!cloud.remission.empty() &&
      cloud.remission.size() != cloud.points.size()) {
    throw FormatError("remission count differs from point count");
  }
  std::vector<unsigned char> out;
  out.reserve(cloud.points.size() * 16);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point3& p = cloud.points[i];
    store_f32(static_cast<float>(p.x), out);
    store_f32(static_cast<float>(p.y), out);
    store_f32(static_cast<float>(p.z), out);
    store_f32(cloud.remission.empty() ? 0.0f : cloud.remission[i], out);
  }
  write_bytes(bin, out);
}

std::vector<std::uint32_t> read_label_words(const fs::path& label) {
  const auto bytes = read_bytes(label);
  if (bytes.size() % 4 != 0) {
    throw FormatError(size_desc(label, bytes.size()) +
                      " is not a whole number of 4-byte labels");
  }
  std::vector<std::uint32_t> words(bytes.size() / 4);
  for (std::size_t i = 0; i < words.size(); ++i) {
    words[i] = load_u32(bytes.data() + 4 * i);
  }
  return words;
}

void write_label_words(const fs::path& label,
                       std::span<const std::uint32_t> words) {
  std::vector<unsigned char> out;
  out.reserve(words.size() * 4);
  for (std::uint32_t w : words) store_u32(w, out);
  write_bytes(label, out);
}

PanopticLabels read_labels(const fs::path& label) {
  const auto words = read_label_words(label);
  PanopticLabels out;
  out.semantic.resize(words.size());
  out.instance.resize(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.semantic[i] = label_semantic(words[i]);
    out.instance[i] = label_instance(words[i]);
  }
  return out;
}

void write_labels(const fs::path& label, const PanopticLabels& labels) {
  if (labels.semantic.size() != labels.instance.size()) {
    throw FormatError("semantic and instance arrays differ in length");
  }
  std::vector<std::uint32_t> words(labels.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (labels.semantic[i] > 0xFFFFu || labels.instance[i] > 0xFFFFu) {
      throw FormatError(label.string() + ": point " + std::to_string(i) +
                        " has label (" + std::to_string(labels.semantic[i]) +
                        ", " + std::to_string(labels.instance[i]) +
                        ") that does not fit 16 bits");
    }
    words[i] = pack_label(labels.semantic[i], labels.instance[i]);
  }
  write_label_words(label, words);
}

std::vector<float> read_confidences(const fs::path& conf) {
  const auto bytes = read_bytes(conf);
  if (bytes.size() % 4 != 0) {
    throw FormatError(size_desc(conf, bytes.size()) +
                      " is not a whole number of float32 values");
  }
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = load_f32(bytes.data() + 4 * i);
  }
  return out;
}

void write_confidences(const fs::path& conf, std::span<const float> values) {
  std::vector<unsigned char> out;
  out.reserve(values.size() * 4);
  for (float v : values) store_f32(v, out);
  write_bytes(conf, out);
}

FramePanoptic read_frame(const fs::path& bin, const fs::path& label,
                         const std::optional<fs::path>& conf) {
  PointCloud cloud = read_points(bin);
  PanopticLabels labels = read_labels(label);
  const std::size_t n = cloud.points.size();
  if (labels.size() != n) {
    throw FormatError("size mismatch: " + size_desc(bin, n * 16) + " holds " +
                      std::to_string(n) + " points but " +
                      size_desc(label, labels.size() * 4) + " holds " +
                      std::to_string(labels.size()) + " labels");
  }
  FramePanoptic f;
  f.points = std::move(cloud.points);
  f.remission = std::move(cloud.remission);
  f.semantic = std::move(labels.semantic);
  f.instance = std::move(labels.instance);
  if (conf && fs::exists(*conf)) {
    f.confidence = read_confidences(*conf);
    if (f.confidence.size() != n) {
      throw FormatError("size mismatch: " + size_desc(bin, n * 16) +
                        " holds " + std::to_string(n) + " points but " +
                        size_desc(*conf, f.confidence.size() * 4) +
                        " holds " + std::to_string(f.confidence.size()) +
                        " confidences");
    }
  } else {
    f.confidence.assign(n, 1.0f);
  }
  return f;
}

std::vector<Pose> read_poses(const fs::path& poses_txt) {
  std::ifstream in(poses_txt);
  if (!in) throw IoError("cannot open " + poses_txt.string());
  std::vector<Pose> poses;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = poses_txt.string() + ":" + std::to_string(lineno);
    Pose m = parse_3x4(line, where);
    check_rigid(m, where);
    poses.push_back(m);
  }
  return poses;
}

void write_poses(const fs::path& poses_txt, std::span<const Pose> poses) {
  if (poses_txt.has_parent_path()) fs::create_directories(poses_txt.parent_path());
  std::ofstream out(poses_txt, std::ios::trunc);
  if (!out) throw IoError("cannot write " + poses_txt.string());
  for (const Pose& p : poses) out << format_3x4(p) << '\n';
  if (!out) throw IoError("write failed: " + poses_txt.string());
}

Pose read_calib(const fs::path& calib_txt) {
  std::ifstream in(calib_txt);
  if (!in) throw IoError("cannot open " + calib_txt.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("Tr:", 0) == 0) {
      const std::string where = calib_txt.string() + ": Tr";
      Pose tr = parse_3x4(line.substr(3), where);
      check_rigid(tr, where);
      return tr;
    }
  }
  return Pose::Identity();
}

void write_calib(const fs::path& calib_txt, const Pose& tr) {
  if (calib_txt.has_parent_path()) fs::create_directories(calib_txt.parent_path());
  std::ofstream out(calib_txt, std::ios::trunc);
  if (!out) throw IoError("cannot write " + calib_txt.string());
  out << "Tr: " << format_3x4(tr) << '\n';
  if (!out) throw IoError("write failed: " + calib_txt.string());
}

Pose world_from_ego(const Pose& camera_pose, const Pose& tr) {
  check_rigid(camera_pose, "pose");
  check_rigid(tr, "calibration");
  return tr.inverse() * camera_pose * tr;
}

Point3 transform(const Pose& pose, const Point3& p) {
  const Eigen::Vector4d q = pose * Eigen::Vector4d(p.x, p.y, p.z, 1.0);
  return {q.x(), q.y(), q.z()};
}

std::vector<Point3> transform(const Pose& pose, std::span<const Point3> pts) {
  std::vector<Point3> out;
  out.reserve(pts.size());
  for (const Point3& p : pts) out.push_back(transform(pose, p));
  return out;
}

std::vector<Box3D> extract_detections(const FramePanoptic& frame,
                                      const Pose& pose) {
  struct Accum {
    Point3 lo{std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    Point3 hi{-std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()};
    float score = 0.0f;
    std::map<ClassId, std::size_t> votes;
  };
  frame.validate();
  std::map<InstanceId, Accum> instances;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (frame.instance[i] == 0 || !is_things(frame.semantic[i])) continue;
    Accum& a = instances[frame.instance[i]];
    const Point3 p = transform(pose, frame.points[i]);
    a.lo = {std::min(a.lo.x, p.x), std::min(a.lo.y, p.y), std::min(a.lo.z, p.z)};
    a.hi = {std::max(a.hi.x, p.x), std::max(a.hi.y, p.y), std::max(a.hi.z, p.z)};
    a.score = std::max(a.score, frame.confidence[i]);
    ++a.votes[frame.semantic[i]];
  }

  std::vector<Box3D> dets;
  dets.reserve(instances.size());
  for (const auto& [id, a] : instances) {
    ClassId cls = 0;
    std::size_t best = 0;
    for (const auto& [c, n] : a.votes) {
      if (n > best) {
        best = n;
        cls = c;
      }
    }
    Box3D b;
    b.cx = 0.5 * (a.lo.x + a.hi.x);
    b.cy = 0.5 * (a.lo.y + a.hi.y);
    b.cz = 0.5 * (a.lo.z + a.hi.z);
    b.theta = 0.0;
    b.l = std::max(a.hi.x - a.lo.x, kMinDimension);
    b.w = std::max(a.hi.y - a.lo.y, kMinDimension);
    b.h = std::max(a.hi.z - a.lo.z, kMinDimension);
    b.score = a.score;
    b.class_id = cls;
    dets.push_back(b);
  }
  return dets;
}

SequencePaths::SequencePaths(const fs::path& root, const std::string& sequence)
    : dir(root / "sequences" / sequence) {}

fs::path SequencePaths::velodyne(std::size_t frame) const {
  return dir / "velodyne" / (frame_name(frame) + ".bin");
}

fs::path SequencePaths::labels(std::size_t frame) const {
  return dir / "labels" / (frame_name(frame) + ".label");
}

fs::path SequencePaths::predictions(std::size_t frame) const {
  return dir / "predictions" / (frame_name(frame) + ".label");
}

fs::path SequencePaths::confidences(std::size_t frame) const {
  return dir / "confidences" / (frame_name(frame) + ".conf");
}

std::size_t SequencePaths::frame_count() const {
  const fs::path vel = dir / "velodyne";
  if (!fs::is_directory(vel)) {
    throw IoError("missing scan directory " + vel.string());
  }
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(vel)) {
    if (entry.path().extension() == ".bin") ++n;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!fs::exists(velodyne(i))) {
      throw IoError("scans in " + vel.string() + " are not numbered 0.." +
                    std::to_string(n - 1) + ": missing " +
                    velodyne(i).filename().string());
    }
  }
  return n;
}

std::string frame_name(std::size_t frame) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", frame);
  return buf;
}

std::string sequence_name(int sequence) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", sequence);
  return buf;
}

void write_predictions(const SequencePaths& out,
                       std::span<const PanopticLabels> frames) {
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto& f = frames[t];
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.instance[i] > 0xFFFFu) {
        throw FormatError("frame " + frame_name(t) + ": instance id " +
                          std::to_string(f.instance[i]) +
                          " exceeds the 16-bit label field");
      }
    }
    write_labels(out.predictions(t), f);
  }
}

}  // namespace panotrack
