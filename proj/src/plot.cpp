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

#include "panotrack/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace panotrack {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostringstream& ss, const std::string& title) {
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
     << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth)
     << ' ' << num(kHeight) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title)
     << "</text>\n";
}

void axes(std::ostringstream& ss, const std::string& xlabel,
          const std::string& ylabel) {
  const double x0 = kMargin, y0 = kHeight - kMargin;
  ss << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\""
     << num(kWidth - kMargin / 2) << "\" y2=\"" << num(y0)
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\""
     << num(x0) << "\" y2=\"" << num(kMargin) << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 15)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << escape(xlabel) << "</text>\n"
     << "<text x=\"15\" y=\"" << num(kHeight / 2)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\" transform=\"rotate(-90 15 "
     << num(kHeight / 2) << ")\">" << escape(ylabel) << "</text>\n";
}

void tick_label(std::ostringstream& ss, double x, double y, const char* anchor,
                const std::string& text) {
  ss << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\""
     << anchor << "\" font-family=\"sans-serif\" font-size=\"10\">"
     << escape(text) << "</text>\n";
}

}  // namespace

std::string trajectory_svg(const SequenceSummary& summary) {
  std::ostringstream ss;
  header(ss, "Trajectories, sequence " + summary.sequence);
  axes(ss, "x [m]", "y [m]");

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const TrackLife& life : summary.tracks) {
    for (const auto& p : life.trajectory) {
      if (first) {
        xmin = xmax = p[1];
        ymin = ymax = p[2];
        first = false;
      }
      xmin = std::min(xmin, p[1]);
      xmax = std::max(xmax, p[1]);
      ymin = std::min(ymin, p[2]);
      ymax = std::max(ymax, p[2]);
    }
  }
  // Equal scale on both axes, padded by one meter.
  const double span = std::max({xmax - xmin, ymax - ymin, 1.0}) + 2.0;
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  const double plot = std::min(kWidth, kHeight) - 2 * kMargin;
  auto px = [&](double x) { return kMargin + (x - (cx - span / 2)) / span * plot; };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - (cy - span / 2)) / span * plot;
  };
  tick_label(ss, kMargin, kHeight - kMargin + 14, "middle", num(cx - span / 2));
  tick_label(ss, kMargin + plot, kHeight - kMargin + 14, "middle",
             num(cx + span / 2));
  tick_label(ss, kMargin - 4, kHeight - kMargin, "end", num(cy - span / 2));
  tick_label(ss, kMargin - 4, kHeight - kMargin - plot, "end",
             num(cy + span / 2));

  for (std::size_t k = 0; k < summary.tracks.size(); ++k) {
    const TrackLife& life = summary.tracks[k];
    const char* color = kPalette[k % kPaletteSize];
    ss << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < life.trajectory.size(); ++i) {
      if (i) ss << ' ';
      ss << num(px(life.trajectory[i][1])) << ',' << num(py(life.trajectory[i][2]));
    }
    ss << "\"/>\n";
    if (!life.trajectory.empty()) {
      const auto& last = life.trajectory.back();
      ss << "<circle cx=\"" << num(px(last[1])) << "\" cy=\"" << num(py(last[2]))
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    tick_label(ss, kWidth - kMargin, kMargin + 14.0 * static_cast<double>(k),
               "start",
               std::string(group_name(life.group)) + " " +
                   std::to_string(life.track_id));
  }
  ss << "</svg>\n";
  return ss.str();
}

std::string lstq_bar_svg(
    const std::vector<std::pair<std::string, std::vector<ReportRow>>>& runs) {
  std::set<std::size_t> settings;
  for (const auto& [name, rows] : runs) {
    for (const ReportRow& r : rows) settings.insert(r.min_points);
  }
  auto category = [&](const ReportRow& r) {
    return settings.size() > 1
               ? r.row + " (" + std::to_string(r.min_points) + ")"
               : r.row;
  };
  std::vector<std::string> categories;
  for (const auto& [name, rows] : runs) {
    for (const ReportRow& r : rows) {
      const std::string c = category(r);
      if (std::find(categories.begin(), categories.end(), c) == categories.end()) {
        categories.push_back(c);
      }
    }
  }

  std::ostringstream ss;
  header(ss, "LSTQ per class");
  axes(ss, "class", "LSTQ [%]");
  const double plot_w = kWidth - 1.5 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  for (int pct = 0; pct <= 100; pct += 25) {
    const double y = kHeight - kMargin - pct / 100.0 * plot_h;
    tick_label(ss, kMargin - 4, y + 3, "end", std::to_string(pct));
  }
  const double group_w =
      categories.empty() ? plot_w : plot_w / static_cast<double>(categories.size());
  const double bar_w =
      runs.empty() ? 0.0 : 0.8 * group_w / static_cast<double>(runs.size());
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kMargin + group_w * static_cast<double>(c);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (const ReportRow& row : runs[r].second) {
        if (category(row) != categories[c] || !row.lstq) continue;
        const double v = std::clamp(*row.lstq, 0.0, 1.0);
        const double h = v * plot_h;
        ss << "<rect x=\"" << num(gx + 0.1 * group_w + bar_w * static_cast<double>(r))
           << "\" y=\"" << num(kHeight - kMargin - h) << "\" width=\""
           << num(bar_w) << "\" height=\"" << num(h) << "\" fill=\""
           << kPalette[r % kPaletteSize] << "\"/>\n";
      }
    }
    const double lx = gx + group_w / 2;
    const double ly = kHeight - kMargin + 12;
    ss << "<text x=\"" << num(lx) << "\" y=\"" << num(ly)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"9\" "
          "transform=\"rotate(-30 "
       << num(lx) << ' ' << num(ly) << ")\">" << escape(categories[c])
       << "</text>\n";
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const double y = kMargin + 14.0 * static_cast<double>(r);
    ss << "<rect x=\"" << num(kWidth - 150) << "\" y=\"" << num(y - 9)
       << "\" width=\"10\" height=\"10\" fill=\"" << kPalette[r % kPaletteSize]
       << "\"/>\n";
    tick_label(ss, kWidth - 135, y, "start", runs[r].first);
  }
  ss << "</svg>\n";
  return ss.str();
}

}  // namespace panotrack
