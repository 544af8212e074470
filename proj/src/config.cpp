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

#include "panotrack/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "panotrack/errors.hpp"

namespace panotrack {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double to_double(std::string_view s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(line, "expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

int to_int(std::string_view s, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(line, "expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool to_bool(std::string_view s, int line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(line, "expected true/false, got '" + std::string(s) + "'");
}

template <int N>
Eigen::Matrix<double, N, 1> to_vector(std::string_view s, int line) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t,", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t,", start);
    if (end == std::string_view::npos) end = s.size();
    values.push_back(to_double(s.substr(start, end - start), line));
    pos = end;
  }
  if (static_cast<int>(values.size()) != N) {
    fail(line, "expected " + std::to_string(N) + " values, got " +
                   std::to_string(values.size()));
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = values[i];
  return v;
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename Derived>
std::string diag_string(const Eigen::MatrixBase<Derived>& m) {
  std::string s;
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += ' ';
    s += num(m(i, i));
  }
  return s;
}

void set_group_key(GroupConfig& c, std::string_view key, std::string_view value,
                   int line) {
  if (key == "det_split_threshold") {
    c.det_split_threshold = to_double(value, line);
  } else if (key == "high_match_threshold") {
    c.high_match_threshold = to_double(value, line);
  } else if (key == "low_match_threshold") {
    c.low_match_threshold = to_double(value, line);
  } else if (key == "min_hits") {
    c.min_hits = to_int(value, line);
  } else if (key == "max_age") {
    c.max_age = to_int(value, line);
  } else if (key == "death_age") {
    c.death_age = to_int(value, line);
  } else if (key == "kalman_p0") {
    c.kalman = KalmanParams::from_diagonals(to_vector<kStateDim>(value, line),
                                            c.kalman.Q.diagonal(),
                                            c.kalman.R.diagonal(),
                                            c.kalman.z_offset);
  } else if (key == "kalman_q") {
    c.kalman = KalmanParams::from_diagonals(c.kalman.P0.diagonal(),
                                            to_vector<kStateDim>(value, line),
                                            c.kalman.R.diagonal(),
                                            c.kalman.z_offset);
  } else if (key == "kalman_r") {
    c.kalman = KalmanParams::from_diagonals(c.kalman.P0.diagonal(),
                                            c.kalman.Q.diagonal(),
                                            to_vector<kMeasDim>(value, line),
                                            c.kalman.z_offset);
  } else if (key == "offset_cz") {
    c.kalman.z_offset.cz = to_double(value, line);
  } else if (key == "offset_h") {
    c.kalman.z_offset.h = to_double(value, line);
  } else {
    fail(line, "unknown key '" + std::string(key) + "'");
  }
}

void set_ablation_key(AblationToggles& a, std::string_view key,
                      std::string_view value, int line) {
  if (key == "use_kalman") {
    a.use_kalman = to_bool(value, line);
  } else if (key == "matching_metric") {
    try {
      a.matching_metric = parse_metric(value);
    } catch (const ConfigError& e) {
      fail(line, e.what());
    }
  } else if (key == "use_candidate_state") {
    a.use_candidate_state = to_bool(value, line);
  } else if (key == "use_score_split") {
    a.use_score_split = to_bool(value, line);
  } else {
    fail(line, "unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

std::string_view metric_name(SimilarityMetric m) {
  return m == SimilarityMetric::kGiou ? "giou" : "diou";
}

SimilarityMetric parse_metric(std::string_view name) {
  if (name == "diou") return SimilarityMetric::kDiou;
  if (name == "giou") return SimilarityMetric::kGiou;
  throw ConfigError("unknown matching metric '" + std::string(name) +
                    "' (expected diou or giou)");
}

TrackerConfig parse_config(std::string_view text) {
  TrackerConfig config = TrackerConfig::defaults();
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "ablation") {
        try {
          parse_group(section);
        } catch (const ConfigError& e) {
          fail(line_no, e.what());
        }
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) fail(line_no, "key outside of a section");
    if (section == "ablation") {
      set_ablation_key(config.ablation, key, value, line_no);
    } else {
      set_group_key(config.group(parse_group(section)), key, value, line_no);
    }
  }
  config.validate();
  return config;
}

TrackerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const TrackerConfig& config) {
  std::ostringstream out;
  for (ClassGroup g : kAllGroups) {
    const GroupConfig& c = config.group(g);
    out << '[' << group_name(g) << "]\n"
        << "det_split_threshold = " << num(c.det_split_threshold) << '\n'
        << "high_match_threshold = " << num(c.high_match_threshold) << '\n'
        << "low_match_threshold = " << num(c.low_match_threshold) << '\n'
        << "min_hits = " << c.min_hits << '\n'
        << "max_age = " << c.max_age << '\n'
        << "death_age = " << c.death_age << '\n'
        << "kalman_p0 = " << diag_string(c.kalman.P0) << '\n'
        << "kalman_q = " << diag_string(c.kalman.Q) << '\n'
        << "kalman_r = " << diag_string(c.kalman.R) << '\n'
        << "offset_cz = " << num(c.kalman.z_offset.cz) << '\n'
        << "offset_h = " << num(c.kalman.z_offset.h) << "\n\n";
  }
  const AblationToggles& a = config.ablation;
  out << "[ablation]\n"
      << "use_kalman = " << (a.use_kalman ? "true" : "false") << '\n'
      << "matching_metric = " << metric_name(a.matching_metric) << '\n'
      << "use_candidate_state = " << (a.use_candidate_state ? "true" : "false")
      << '\n'
      << "use_score_split = " << (a.use_score_split ? "true" : "false")
      << '\n';
  return out.str();
}

}  // namespace panotrack
