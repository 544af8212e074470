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

#include "panotrack/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "panotrack/errors.hpp"

namespace panotrack {
namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string_view filter_name(SizeFilter f) {
  return f == SizeFilter::kPerTube ? "tube" : "frame";
}

double mean_or_one(double sum, std::size_t count) {
  return count == 0 ? 1.0 : sum / static_cast<double>(count);
}

}  // namespace

LstqAccumulator::LstqAccumulator(LstqOptions options, std::uint32_t sequence_tag)
    : options_(options), tag_(sequence_tag) {
  if (options_.min_points < 1) {
    throw EvaluationError("min_points must be at least 1");
  }
}

void LstqAccumulator::add_frame(const PanopticLabels& gt,
                                const PanopticLabels& pred) {
  const std::size_t n = gt.size();
  if (pred.size() != n || gt.instance.size() != n ||
      pred.instance.size() != n) {
    throw EvaluationError("frame point counts differ: gt " + std::to_string(n) +
                          ", prediction " + std::to_string(pred.size()));
  }

  std::map<std::pair<LearningClass, InstanceId>, std::uint64_t> frame_size;
  for (std::size_t i = 0; i < n; ++i) {
    const LearningClass gc = to_learning(gt.semantic[i]);
    if (gc == 0) continue;
    if (is_things_learning(gc) && gt.instance[i] != 0) {
      ++frame_size[{gc, gt.instance[i]}];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const LearningClass gc = to_learning(gt.semantic[i]);
    if (gc == 0) continue;
    const LearningClass pc = to_learning(pred.semantic[i]);
    ++confusion_[gc][pc];

    std::optional<GtKey> g;
    if (is_things_learning(gc) && gt.instance[i] != 0) {
      if (options_.filter == SizeFilter::kPerFrame &&
          frame_size[{gc, gt.instance[i]}] < options_.min_points) {
        continue;
      }
      g = GtKey{tag_, gc, gt.instance[i]};
    }
    std::optional<PredKey> p;
    if (is_things_learning(pc) && pred.instance[i] != 0) {
      p = PredKey{tag_, pred.instance[i]};
    }
    if (g) ++gt_size_[*g];
    if (p) ++pred_size_[*p];
    if (g && p) ++inter_[{*g, *p}];
  }
}

void LstqAccumulator::merge(const LstqAccumulator& other) {
  if (other.options_.min_points != options_.min_points ||
      other.options_.filter != options_.filter) {
    throw EvaluationError("cannot merge accumulators with different options");
  }
  for (int g = 0; g < kNumLearningClasses; ++g) {
    for (int p = 0; p < kNumLearningClasses; ++p) {
      confusion_[g][p] += other.confusion_[g][p];
    }
  }
  for (const auto& [k, v] : other.gt_size_) gt_size_[k] += v;
  for (const auto& [k, v] : other.pred_size_) pred_size_[k] += v;
  for (const auto& [k, v] : other.inter_) inter_[k] += v;
}

LstqReport LstqAccumulator::report() const {
  LstqReport r;
  r.options = options_;

  // Class IoU.
  std::array<std::optional<double>, kNumLearningClasses> iou;
  for (int c = 1; c < kNumLearningClasses; ++c) {
    std::uint64_t tp = confusion_[c][c], fp = 0, fn = 0;
    for (int o = 0; o < kNumLearningClasses; ++o) {
      if (o == c) continue;
      fn += confusion_[c][o];
      fp += confusion_[o][c];
    }
    const std::uint64_t denom = tp + fp + fn;
    if (denom > 0) {
      iou[c] = static_cast<double>(tp) / static_cast<double>(denom);
    }
  }

  // Association, after optional whole-tube filtering.
  std::map<GtKey, std::uint64_t> gt_size = gt_size_;
  std::map<PredKey, std::uint64_t> pred_size = pred_size_;
  std::map<std::pair<GtKey, PredKey>, std::uint64_t> inter = inter_;
  if (options_.filter == SizeFilter::kPerTube) {
    for (auto it = inter.begin(); it != inter.end();) {
      if (gt_size.at(it->first.first) < options_.min_points) {
        pred_size[it->first.second] -= it->second;
        it = inter.erase(it);
      } else {
        ++it;
      }
    }
    std::erase_if(gt_size, [&](const auto& kv) {
      return kv.second < options_.min_points;
    });
  }

  std::map<GtKey, double> tube_sum;
  for (const auto& [key, tpa] : inter) {
    const std::uint64_t t = gt_size.at(key.first);
    const std::uint64_t s = pred_size.at(key.second);
    tube_sum[key.first] += static_cast<double>(tpa * tpa) /
                           static_cast<double>(s + t - tpa);
  }
  std::array<double, kNumLearningClasses> class_assoc{};
  std::array<std::size_t, kNumLearningClasses> class_tubes{};
  double assoc_sum = 0.0;
  for (const auto& [key, size] : gt_size) {
    const auto it = tube_sum.find(key);
    const double score =
        it == tube_sum.end() ? 0.0 : it->second / static_cast<double>(size);
    assoc_sum += score;
    class_assoc[std::get<1>(key)] += score;
    ++class_tubes[std::get<1>(key)];
  }
  r.num_tubes = gt_size.size();
  const bool has_pred = std::any_of(pred_size.begin(), pred_size.end(),
                                    [](const auto& kv) { return kv.second > 0; });
  const double s_assoc_all =
      r.num_tubes == 0 ? (has_pred ? 0.0 : 1.0)
                       : assoc_sum / static_cast<double>(r.num_tubes);

  double cls_sum = 0.0, things_sum = 0.0;
  std::size_t cls_n = 0, things_n = 0;
  for (int c = 1; c < kNumLearningClasses; ++c) {
    if (!iou[c] && class_tubes[c] == 0) continue;
    ClassScore cs;
    cs.cls = c;
    cs.iou = iou[c];
    cs.tubes = class_tubes[c];
    if (class_tubes[c] > 0) {
      cs.s_assoc = class_assoc[c] / static_cast<double>(class_tubes[c]);
    }
    if (cs.iou && cs.s_assoc) cs.lstq = std::sqrt(*cs.s_assoc * *cs.iou);
    if (iou[c]) {
      cls_sum += *iou[c];
      ++cls_n;
      if (is_things_learning(c)) {
        things_sum += *iou[c];
        ++things_n;
      }
    }
    r.classes.push_back(cs);
  }

  r.overall.s_assoc = s_assoc_all;
  r.overall.s_cls = mean_or_one(cls_sum, cls_n);
  r.overall.lstq = std::sqrt(r.overall.s_assoc * r.overall.s_cls);
  r.things.s_assoc = s_assoc_all;
  r.things.s_cls = mean_or_one(things_sum, things_n);
  r.things.lstq = std::sqrt(r.things.s_assoc * r.things.s_cls);
  return r;
}

namespace {

void check_streams(std::span<const PanopticLabels> gt,
                   std::span<const PanopticLabels> pred) {
  if (gt.size() != pred.size()) {
    throw EvaluationError("frame counts differ: gt " +
                          std::to_string(gt.size()) + ", prediction " +
                          std::to_string(pred.size()));
  }
}

LstqAccumulator accumulate(std::span<const PanopticLabels> gt,
                           std::span<const PanopticLabels> pred,
                           LstqOptions options) {
  check_streams(gt, pred);
  LstqAccumulator acc(options);
  for (std::size_t f = 0; f < gt.size(); ++f) acc.add_frame(gt[f], pred[f]);
  return acc;
}

}  // namespace

ClassIou s_cls(std::span<const PanopticLabels> gt,
               std::span<const PanopticLabels> pred) {
  const LstqReport r = accumulate(gt, pred, {}).report();
  ClassIou out;
  for (const ClassScore& c : r.classes) out.per_class[c.cls] = c.iou;
  out.mean = r.overall.s_cls;
  return out;
}

double s_assoc(std::span<const PanopticLabels> gt,
               std::span<const PanopticLabels> pred, LstqOptions options) {
  return accumulate(gt, pred, options).report().overall.s_assoc;
}

LstqReport lstq(std::span<const PanopticLabels> gt,
                std::span<const PanopticLabels> pred, LstqOptions options) {
  return accumulate(gt, pred, options).report();
}

std::string format_report_text(const LstqReport& report) {
  std::ostringstream out;
  auto pct = [](std::optional<double> v) {
    std::ostringstream s;
    if (v) {
      s << std::fixed << std::setprecision(2) << 100.0 * *v;
    } else {
      s << "-";
    }
    return s.str();
  };
  out << "LSTQ_" << report.options.min_points << " (min_points "
      << report.options.min_points << ", filter "
      << filter_name(report.options.filter) << ", " << report.num_tubes
      << " gt tubes)\n";
  out << std::left << std::setw(16) << "class" << std::right << std::setw(10)
      << "LSTQ" << std::setw(10) << "S_assoc" << std::setw(10) << "S_cls"
      << '\n';
  auto row = [&](std::string_view name, std::optional<double> l,
                 std::optional<double> a, std::optional<double> c) {
    out << std::left << std::setw(16) << name << std::right << std::setw(10)
        << pct(l) << std::setw(10) << pct(a) << std::setw(10) << pct(c)
        << '\n';
  };
  row("Things", report.things.lstq, report.things.s_assoc, report.things.s_cls);
  for (const ClassScore& c : report.classes) {
    if (!is_things_learning(c.cls)) continue;
    row(learning_class_name(c.cls), c.lstq, c.s_assoc, c.iou);
  }
  row("All", report.overall.lstq, report.overall.s_assoc, report.overall.s_cls);
  for (const ClassScore& c : report.classes) {
    if (is_things_learning(c.cls)) continue;
    row(learning_class_name(c.cls), c.lstq, c.s_assoc, c.iou);
  }
  return out.str();
}

std::string format_report_kv(const LstqReport& report) {
  std::ostringstream out;
  const std::string prefix = "min_points=" +
                             std::to_string(report.options.min_points) +
                             " filter=" + std::string(filter_name(report.options.filter));
  auto opt = [](std::optional<double> v) { return v ? num(*v) : "nan"; };
  out << prefix << " row=things lstq=" << num(report.things.lstq)
      << " s_assoc=" << num(report.things.s_assoc)
      << " s_cls=" << num(report.things.s_cls) << '\n';
  out << prefix << " row=all lstq=" << num(report.overall.lstq)
      << " s_assoc=" << num(report.overall.s_assoc)
      << " s_cls=" << num(report.overall.s_cls) << '\n';
  for (const ClassScore& c : report.classes) {
    out << prefix << " row=" << learning_class_name(c.cls)
        << " lstq=" << opt(c.lstq) << " s_assoc=" << opt(c.s_assoc)
        << " s_cls=" << opt(c.iou) << " tubes=" << c.tubes << '\n';
  }
  return out.str();
}

std::vector<ReportRow> parse_report_kv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ReportRow r;
    std::istringstream fields(line);
    std::string field;
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      auto as_double = [&]() -> std::optional<double> {
        if (value == "nan") return std::nullopt;
        double v = 0.0;
        const auto res =
            std::from_chars(value.data(), value.data() + value.size(), v);
        if (res.ec != std::errc()) {
          throw EvaluationError("malformed report value '" + field + "'");
        }
        return v;
      };
      if (key == "row") {
        r.row = value;
      } else if (key == "lstq") {
        r.lstq = as_double();
      } else if (key == "s_assoc") {
        r.s_assoc = as_double();
      } else if (key == "s_cls") {
        r.s_cls = as_double();
      } else if (key == "min_points") {
        r.min_points = static_cast<std::size_t>(std::stoul(value));
      }
    }
    if (!r.row.empty()) rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace panotrack
