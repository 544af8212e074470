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

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "lstq_oracle.hpp"
#include "panotrack/errors.hpp"

namespace panotrack {
namespace {

PanopticLabels labels(std::vector<ClassId> sem, std::vector<InstanceId> inst) {
  return PanopticLabels{std::move(sem), std::move(inst)};
}

PanopticLabels repeat(std::size_t n, ClassId sem, InstanceId inst) {
  return labels(std::vector<ClassId>(n, sem), std::vector<InstanceId>(n, inst));
}

PanopticLabels concat(const PanopticLabels& a, const PanopticLabels& b) {
  PanopticLabels out = a;
  out.semantic.insert(out.semantic.end(), b.semantic.begin(), b.semantic.end());
  out.instance.insert(out.instance.end(), b.instance.begin(), b.instance.end());
  return out;
}

std::vector<oracle::LabeledFrame> to_oracle(const std::vector<PanopticLabels>& v) {
  std::vector<oracle::LabeledFrame> out;
  for (const PanopticLabels& l : v) out.push_back({l.semantic, l.instance});
  return out;
}

// Random scene: a few moving Things instances plus stuff, with the
// prediction a corrupted copy.
void random_scene(std::mt19937_64& rng, std::size_t frames, std::size_t points,
                  std::vector<PanopticLabels>& gt, std::vector<PanopticLabels>& pred) {
  static const ClassId kThings[] = {10, 11, 18, 30, 31};
  static const ClassId kStuff[] = {0, 40, 50, 70};
  std::uniform_int_distribution<int> thing(0, 4), stuff(0, 3), inst(0, 4);
  std::uniform_real_distribution<double> u(0, 1);
  gt.clear();
  pred.clear();
  for (std::size_t f = 0; f < frames; ++f) {
    PanopticLabels g, p;
    for (std::size_t i = 0; i < points; ++i) {
      const int k = inst(rng);
      ClassId gs = 0;
      InstanceId gi = 0;
      if (k == 0) {
        gs = kStuff[stuff(rng)];
      } else {
        gs = kThings[k % 5];
        gi = static_cast<InstanceId>(k);
      }
      ClassId ps = gs;
      InstanceId pi = gi;
      const double r = u(rng);
      if (r < 0.15) {
        ps = kThings[thing(rng)];
        pi = static_cast<InstanceId>(inst(rng) + 1);
      } else if (r < 0.25) {
        ps = kStuff[stuff(rng)];
        pi = 0;
      } else if (r < 0.35 && gi != 0) {
        pi = gi + 10;  // split
      }
      g.semantic.push_back(gs);
      g.instance.push_back(gi);
      p.semantic.push_back(ps);
      p.instance.push_back(pi);
    }
    gt.push_back(std::move(g));
    pred.push_back(std::move(p));
  }
}

TEST(Lstq, PerfectPredictionScoresOneAtEveryFilter) {
  std::mt19937_64 rng(91);
  std::vector<PanopticLabels> gt, pred;
  random_scene(rng, 5, 200, gt, pred);
  for (std::size_t mp : {1u, 50u, 1000u}) {
    for (SizeFilter f : {SizeFilter::kPerFrame, SizeFilter::kPerTube}) {
      const LstqReport r = lstq(gt, gt, {mp, f});
      EXPECT_EQ(r.overall.s_assoc, 1.0);
      EXPECT_EQ(r.overall.s_cls, 1.0);
      EXPECT_EQ(r.overall.lstq, 1.0);
      EXPECT_EQ(r.things.lstq, 1.0);
    }
  }
}

TEST(SCls, SevenCorrectTwoFalsePositivesOneMiss) {
  // Eight gt car points (7 hit, 1 predicted road) and two gt road points
  // predicted car.
  const PanopticLabels gt = labels({10, 10, 10, 10, 10, 10, 10, 10, 40, 40},
                                   std::vector<InstanceId>(10, 0));
  const PanopticLabels pred = labels({10, 10, 10, 10, 10, 10, 10, 40, 10, 10},
                                     std::vector<InstanceId>(10, 0));
  const ClassIou iou = s_cls(std::vector{gt}, std::vector{pred});
  ASSERT_TRUE(iou.per_class[1].has_value());
  EXPECT_NEAR(*iou.per_class[1], 0.7, 1e-15);
  EXPECT_EQ(*iou.per_class[9], 0.0);
  EXPECT_FALSE(iou.per_class[13].has_value());
}

TEST(SCls, AllZeroPredictionScoresZero) {
  const PanopticLabels gt = concat(repeat(5, 10, 1), repeat(5, 40, 0));
  const PanopticLabels pred = repeat(10, 0, 0);
  const ClassIou iou = s_cls(std::vector{gt}, std::vector{pred});
  EXPECT_EQ(*iou.per_class[1], 0.0);
  EXPECT_EQ(*iou.per_class[9], 0.0);
  EXPECT_EQ(iou.mean, 0.0);
}

TEST(SCls, UnlabeledGroundTruthIsIgnored) {
  const PanopticLabels gt = concat(repeat(5, 10, 1), repeat(5, 0, 0));
  const PanopticLabels pred = concat(repeat(5, 10, 1), repeat(5, 40, 0));
  EXPECT_EQ(s_cls(std::vector{gt}, std::vector{pred}).mean, 1.0);
}

TEST(SAssoc, SplitTubeScoresHalf) {
  // One car tube of 2 points in each of 2 frames, predicted as two tubes.
  const std::vector<PanopticLabels> gt = {repeat(2, 10, 1), repeat(2, 10, 1)};
  const std::vector<PanopticLabels> pred = {repeat(2, 10, 5), repeat(2, 10, 6)};
  EXPECT_EQ(s_assoc(gt, pred, {}), 0.5);
  EXPECT_EQ(oracle::brute_force_s_assoc(to_oracle(gt), to_oracle(pred), 1), 0.5);
}

TEST(SAssoc, RelabelInvariance) {
  std::mt19937_64 rng(92);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PanopticLabels> gt, pred;
    random_scene(rng, 5, 150, gt, pred);
    const double base = s_assoc(gt, pred, {});
    std::map<InstanceId, InstanceId> rename;
    std::uniform_int_distribution<InstanceId> id(1, 60000);
    std::vector<PanopticLabels> renamed = pred;
    for (auto& f : renamed) {
      for (InstanceId& i : f.instance) {
        if (i == 0) continue;
        auto [it, fresh] = rename.try_emplace(i, 0);
        if (fresh) {
          InstanceId cand;
          do {
            cand = id(rng);
          } while ([&] {
            for (const auto& [k, v] : rename) if (v == cand) return true;
            return false;
          }());
          it->second = cand;
        }
        i = it->second;
      }
    }
    EXPECT_NEAR(s_assoc(gt, renamed, {}), base, 1e-12);
    EXPECT_NEAR(s_assoc(gt, renamed, {50}), s_assoc(gt, pred, {50}), 1e-12);
  }
}

TEST(SAssoc, SmallInstanceDroppedAtFifty) {
  // Instance 1 has 60 points per frame and is tracked; instance 2 has 40 and
  // is missed entirely.
  std::vector<PanopticLabels> gt, pred;
  for (int f = 0; f < 3; ++f) {
    gt.push_back(concat(repeat(60, 10, 1), repeat(40, 30, 2)));
    pred.push_back(concat(repeat(60, 10, 7), repeat(40, 30, 0)));
  }
  EXPECT_EQ(s_assoc(gt, pred, {1}), 0.5);
  const LstqReport r50 = lstq(gt, pred, {50});
  EXPECT_EQ(r50.overall.s_assoc, 1.0);
  EXPECT_EQ(r50.num_tubes, 1u);
  // S_cls is never filtered.
  EXPECT_EQ(r50.overall.s_cls, lstq(gt, pred, {1}).overall.s_cls);
  // Per-tube filtering keeps the 120-point tube.
  EXPECT_EQ(s_assoc(gt, pred, {50, SizeFilter::kPerTube}), 0.5);
  EXPECT_EQ(s_assoc(gt, pred, {121, SizeFilter::kPerTube}), 1.0);
}

TEST(SAssoc, FilterIsNoOpWhenEveryInstanceIsLarge) {
  std::vector<PanopticLabels> gt, pred;
  for (int f = 0; f < 4; ++f) {
    gt.push_back(concat(repeat(70, 10, 1), repeat(55, 18, 2)));
    pred.push_back(concat(concat(repeat(30, 10, 3), repeat(40, 10, 4)),
                          repeat(55, 18, f < 2 ? 5 : 6)));
  }
  EXPECT_EQ(s_assoc(gt, pred, {1}), s_assoc(gt, pred, {50}));
}

TEST(SAssoc, EmptyConventions) {
  const std::vector<PanopticLabels> stuff = {repeat(10, 40, 0)};
  EXPECT_EQ(s_assoc(stuff, stuff, {}), 1.0);
  const std::vector<PanopticLabels> ghost = {repeat(10, 10, 3)};
  EXPECT_EQ(s_assoc(stuff, ghost, {}), 0.0);
  EXPECT_EQ(oracle::brute_force_s_assoc(to_oracle(stuff), to_oracle(ghost), 1), 0.0);
}

TEST(SAssoc, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(93);
  std::uniform_int_distribution<std::size_t> frames(1, 5), points(1, 200);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PanopticLabels> gt, pred;
    random_scene(rng, frames(rng), points(rng), gt, pred);
    for (std::size_t mp : {1u, 5u, 20u, 50u}) {
      EXPECT_NEAR(s_assoc(gt, pred, {mp}),
                  oracle::brute_force_s_assoc(to_oracle(gt), to_oracle(pred), mp),
                  1e-12)
          << "trial " << trial << " min_points " << mp;
    }
  }
}

TEST(Lstq, GeometricMeanConsistency) {
  EXPECT_NEAR(std::sqrt(0.64 * 0.81), 0.72, 1e-15);
  std::mt19937_64 rng(94);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<PanopticLabels> gt, pred;
    random_scene(rng, 3, 100, gt, pred);
    const LstqReport r = lstq(gt, pred, {});
    for (const ScoreRow& row : {r.overall, r.things}) {
      EXPECT_NEAR(row.lstq * row.lstq, row.s_assoc * row.s_cls, 1e-12);
      EXPECT_GE(row.lstq, 0.0);
      EXPECT_LE(row.lstq, 1.0);
    }
    for (const ClassScore& c : r.classes) {
      if (c.lstq) {
        EXPECT_NEAR(*c.lstq * *c.lstq, *c.s_assoc * *c.iou, 1e-12);
      }
    }
  }
}

TEST(LstqAccumulator, LengthMismatchIsEvaluationError) {
  LstqAccumulator acc;
  EXPECT_THROW(acc.add_frame(repeat(3, 10, 1), repeat(4, 10, 1)), EvaluationError);
  EXPECT_THROW(lstq(std::vector{repeat(3, 10, 1)}, std::vector<PanopticLabels>{}, {}),
               EvaluationError);
  EXPECT_THROW(LstqAccumulator({0}), EvaluationError);
}

TEST(LstqAccumulator, MergeMatchesOffsetConcatenation) {
  std::mt19937_64 rng(95);
  std::vector<PanopticLabels> g1, p1, g2, p2;
  random_scene(rng, 3, 80, g1, p1);
  random_scene(rng, 4, 90, g2, p2);
  LstqAccumulator a({1}, 0), b({1}, 1);
  for (std::size_t f = 0; f < g1.size(); ++f) a.add_frame(g1[f], p1[f]);
  for (std::size_t f = 0; f < g2.size(); ++f) b.add_frame(g2[f], p2[f]);
  LstqAccumulator ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);

  std::vector<PanopticLabels> g = g1, p = p1;
  for (std::size_t f = 0; f < g2.size(); ++f) {
    PanopticLabels gg = g2[f], pp = p2[f];
    for (InstanceId& i : gg.instance) if (i) i += 1000;
    for (InstanceId& i : pp.instance) if (i) i += 1000;
    g.push_back(gg);
    p.push_back(pp);
  }
  const LstqReport whole = lstq(g, p, {1});
  EXPECT_NEAR(ab.report().overall.s_assoc, whole.overall.s_assoc, 1e-12);
  EXPECT_EQ(ab.report().overall.s_cls, whole.overall.s_cls);
  EXPECT_EQ(ab.report().overall.s_assoc, ba.report().overall.s_assoc);
  EXPECT_THROW(a.merge(LstqAccumulator({50})), EvaluationError);
}

TEST(Report, KeyValueRoundTrip) {
  std::mt19937_64 rng(96);
  std::vector<PanopticLabels> gt, pred;
  random_scene(rng, 3, 100, gt, pred);
  const LstqReport r = lstq(gt, pred, {50});
  const std::vector<ReportRow> rows = parse_report_kv(format_report_kv(r));
  ASSERT_EQ(rows.size(), 2 + r.classes.size());
  EXPECT_EQ(rows[0].row, "things");
  EXPECT_EQ(*rows[0].lstq, r.things.lstq);
  EXPECT_EQ(*rows[0].s_assoc, r.things.s_assoc);
  EXPECT_EQ(rows[0].min_points, 50u);
  EXPECT_EQ(rows[1].row, "all");
  EXPECT_EQ(*rows[1].s_cls, r.overall.s_cls);
  for (std::size_t k = 0; k < r.classes.size(); ++k) {
    EXPECT_EQ(rows[2 + k].row, learning_class_name(r.classes[k].cls));
    EXPECT_EQ(rows[2 + k].lstq, r.classes[k].lstq);
  }
  const std::string text = format_report_text(r);
  EXPECT_NE(text.find("Things"), std::string::npos);
  EXPECT_NE(text.find("LSTQ_50"), std::string::npos);
}

}  // namespace
}  // namespace panotrack
