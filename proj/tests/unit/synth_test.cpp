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

#include "panotrack/synth.hpp"

#include <set>

#include <map>

#include <gtest/gtest.h>

#include "panotrack/errors.hpp"
#include "panotrack/kittiio.hpp"
#include "panotrack/metrics.hpp"
#include "test_support.hpp"

namespace panotrack {
namespace {

using testing_support::slurp;
using testing_support::TempDir;

const char* kThreeObjects = R"({
  "frames": 12, "seed": 7,
  "stuff": {"points": 50, "class": "road", "extent": [40, 40]},
  "objects": [
    {"id": 1, "class": "car", "center": [0, 0, 0], "velocity": [1, 0, 0], "points": 80},
    {"id": 2, "class": 30, "birth": 2, "death": 9, "center": [5, 5, 0],
     "size": [0.6, 0.6, 1.7], "velocity": [0, 0.3, 0], "points": 30},
    {"id": 3, "class": "bicyclist", "center": [-5, 0, 0], "size": [1.8, 0.6, 1.6],
     "points": [20, 60]}
  ]
})";

std::vector<PanopticLabels> gt_of(const SynthSequence& s) {
  std::vector<PanopticLabels> out;
  for (const SynthFrame& f : s.frames) out.push_back(f.gt);
  return out;
}

std::vector<PanopticLabels> pred_of(const SynthSequence& s) {
  std::vector<PanopticLabels> out;
  for (const SynthFrame& f : s.frames) out.push_back(f.pred);
  return out;
}

std::size_t count_instance(const PanopticLabels& l, InstanceId id) {
  std::size_t n = 0;
  for (InstanceId i : l.instance) n += i == id;
  return n;
}

TEST(ParseScenario, DefaultsAndFields) {
  const Scenario s = parse_scenario(kThreeObjects);
  EXPECT_EQ(s.frames, 12);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.sequence, "00");
  EXPECT_EQ(s.stuff_class, raw::kRoad);
  ASSERT_EQ(s.objects.size(), 3u);
  EXPECT_EQ(s.objects[0].death, -1);
  EXPECT_EQ(s.objects[1].class_id, raw::kPerson);
  EXPECT_EQ(s.objects[2].points_first, 20);
  EXPECT_EQ(s.objects[2].points_last, 60);
  EXPECT_EQ(s.noise.dropout, 0.0);
  EXPECT_EQ(s.noise.score_min, 1.0);
}

TEST(ParseScenario, RejectsBadInput) {
  EXPECT_THROW(parse_scenario("{"), ConfigError);
  EXPECT_THROW(parse_scenario(R"({"objects": []})"), ConfigError);
  EXPECT_THROW(parse_scenario(R"({"frames": 5, "objects": [
      {"id": 1, "class": "car"}, {"id": 1, "class": "truck"}]})"),
               ConfigError);
  EXPECT_THROW(parse_scenario(R"({"frames": 5, "objects": [
      {"id": 1, "class": "tree"}]})"),
               ConfigError);
  EXPECT_THROW(parse_scenario(R"({"frames": 5, "objects": [
      {"id": 1, "class": "road"}]})"),
               ConfigError);
  EXPECT_THROW(parse_scenario(R"({"frames": 5, "objects": [
      {"id": 1, "class": "car", "death": 5}]})"),
               ConfigError);
  EXPECT_THROW(parse_scenario(R"({"frames": 5, "objects": [
      {"id": 1, "class": "car", "size": [1, 0, 1]}]})"),
               ConfigError);
  EXPECT_THROW(parse_scenario(R"({"frames": 5, "objects": [],
      "noise": {"dropout": 1.5}})"),
               ConfigError);
  EXPECT_THROW(parse_scenario(R"({"frames": 5, "objects": [],
      "noise": {"occlusions": [{"object": 4, "from": 1, "to": 2}]}})"),
               ConfigError);
}

TEST(ParseSynthClass, NamesAndNumbers) {
  EXPECT_EQ(parse_synth_class("motorcyclist"), raw::kMotorcyclist);
  EXPECT_EQ(parse_synth_class("18"), raw::kTruck);
  EXPECT_THROW(parse_synth_class("18x"), ConfigError);
}

TEST(Generate, SameSeedSameOutput) {
  Scenario s = parse_scenario(kThreeObjects);
  s.noise.dropout = 0.2;
  s.noise.class_flip = 0.3;
  s.noise.jitter = 0.2;
  s.noise.score_min = 0.2;
  const SynthSequence a = generate(s), b = generate(s);
  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t t = 0; t < a.frames.size(); ++t) {
    EXPECT_EQ(a.frames[t].gt, b.frames[t].gt);
    EXPECT_EQ(a.frames[t].pred, b.frames[t].pred);
    EXPECT_EQ(a.frames[t].confidence, b.frames[t].confidence);
    ASSERT_EQ(a.frames[t].points.size(), b.frames[t].points.size());
    for (std::size_t i = 0; i < a.frames[t].points.size(); ++i) {
      EXPECT_EQ(a.frames[t].points[i].x, b.frames[t].points[i].x);
    }
  }
  s.seed = 8;
  EXPECT_NE(generate(s).frames[0].points[0].x, a.frames[0].points[0].x);
}

TEST(Generate, GroundTruthIndependentOfNoise) {
  const Scenario clean = parse_scenario(kThreeObjects);
  Scenario noisy = clean;
  noisy.noise.dropout = 0.5;
  noisy.noise.class_flip = 0.5;
  noisy.noise.jitter = 0.5;
  noisy.noise.score_min = 0.1;
  noisy.noise.occlusions.push_back({1, 3, 5});
  const SynthSequence a = generate(clean), b = generate(noisy);
  for (std::size_t t = 0; t < a.frames.size(); ++t) {
    EXPECT_EQ(a.frames[t].gt, b.frames[t].gt);
    EXPECT_EQ(a.frames[t].remission, b.frames[t].remission);
    for (std::size_t i = 0; i < a.frames[t].points.size(); ++i) {
      EXPECT_EQ(a.frames[t].points[i].y, b.frames[t].points[i].y);
    }
  }
}

TEST(Generate, ThreeObjectsGiveThreeGroundTruthIds) {
  const SynthSequence s = generate(parse_scenario(kThreeObjects));
  std::set<InstanceId> ids;
  for (const SynthFrame& f : s.frames) {
    ids.insert(f.gt.instance.begin(), f.gt.instance.end());
    EXPECT_EQ(f.points.size(), f.gt.size());
    EXPECT_EQ(f.points.size(), f.pred.size());
    EXPECT_EQ(f.points.size(), f.confidence.size());
    EXPECT_EQ(f.points.size(), f.remission.size());
  }
  EXPECT_EQ(ids, (std::set<InstanceId>{0, 1, 2, 3}));
  EXPECT_EQ(count_instance(s.frames[1].gt, 2), 0u);
  EXPECT_EQ(count_instance(s.frames[2].gt, 2), 30u);
  EXPECT_EQ(count_instance(s.frames[10].gt, 2), 0u);
  EXPECT_EQ(count_instance(s.frames[0].gt, 3), 20u);
  EXPECT_EQ(count_instance(s.frames[11].gt, 3), 60u);
}

TEST(Generate, PointsLieInTheirBoxes) {
  Scenario s = parse_scenario(kThreeObjects);
  s.ego_velocity = {0.5, 0.0, 0.0};
  const SynthSequence seq = generate(s);
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const SynthFrame& f = seq.frames[t];
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      if (f.gt.instance[i] != 1) continue;
      const double world_x = f.points[i].x + seq.ego_positions[t].x;
      EXPECT_NEAR(world_x, 1.0 * static_cast<double>(t), 2.0 + 1e-5);
      EXPECT_NEAR(f.points[i].y, 0.0, 1.0 + 1e-5);
    }
  }
}

TEST(Generate, NoNoiseSingleObjectPredictionEqualsTruth) {
  const SynthSequence s = generate(parse_scenario(R"({"frames": 20, "objects": [
      {"id": 1, "class": "car", "velocity": [1, 0, 0]}]})"));
  for (const SynthFrame& f : s.frames) EXPECT_EQ(f.pred, f.gt);
  const LstqReport r = lstq(gt_of(s), pred_of(s), {});
  EXPECT_EQ(r.overall.lstq, 1.0);
}

TEST(Generate, NoNoiseMultiObjectScoresPerfectly) {
  const SynthSequence s = generate(parse_scenario(kThreeObjects));
  for (std::size_t mp : {1u, 50u}) {
    const LstqReport r = lstq(gt_of(s), pred_of(s), {mp});
    EXPECT_EQ(r.overall.s_cls, 1.0);
  }
  // Network ids are drawn afresh every scan, so only the per-frame
  // partition matches the truth: a bijection between gt and pred ids.
  for (const SynthFrame& f : s.frames) {
    std::map<InstanceId, InstanceId> fwd, back;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      const InstanceId g = f.gt.instance[i], p = f.pred.instance[i];
      EXPECT_EQ(g == 0, p == 0);
      if (g == 0) continue;
      EXPECT_EQ(fwd.emplace(g, p).first->second, p);
      EXPECT_EQ(back.emplace(p, g).first->second, g);
    }
  }
}

TEST(Generate, OcclusionRemovesInstanceFromPrediction) {
  Scenario s = parse_scenario(kThreeObjects);
  s.noise.occlusions.push_back({1, 4, 6});
  const SynthSequence seq = generate(s);
  for (int t = 0; t < s.frames; ++t) {
    const SynthFrame& f = seq.frames[static_cast<std::size_t>(t)];
    std::size_t predicted_car = 0;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      if (f.gt.instance[i] == 1 && f.pred.instance[i] != 0) ++predicted_car;
    }
    if (t >= 4 && t <= 6) {
      EXPECT_EQ(predicted_car, 0u) << t;
    } else {
      EXPECT_EQ(predicted_car, 80u) << t;
    }
  }
}

TEST(Generate, ClassFlipStaysWithinGroup) {
  Scenario s = parse_scenario(kThreeObjects);
  s.noise.class_flip = 1.0;
  for (const SynthFrame& f : generate(s).frames) {
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      if (f.gt.instance[i] == 0 || f.pred.instance[i] == 0) continue;
      if (f.gt.semantic[i] == raw::kPerson) {
        EXPECT_EQ(f.pred.semantic[i], raw::kPerson);  // no other member
      } else {
        EXPECT_NE(f.pred.semantic[i], f.gt.semantic[i]);
      }
      EXPECT_EQ(group_of(f.pred.semantic[i]), group_of(f.gt.semantic[i]));
    }
  }
}

TEST(Generate, PointRampFromTwentyTwoToTwoNinety) {
  const SynthSequence s = generate(parse_scenario(R"({"frames": 30, "objects": [
      {"id": 4, "class": "person", "size": [0.6, 0.6, 1.7],
       "velocity": [0.1, 0, 0], "points": [22, 290]}]})"));
  EXPECT_EQ(count_instance(s.frames.front().gt, 4), 22u);
  EXPECT_EQ(count_instance(s.frames.back().gt, 4), 290u);
  for (std::size_t t = 1; t < s.frames.size(); ++t) {
    EXPECT_GE(count_instance(s.frames[t].gt, 4), count_instance(s.frames[t - 1].gt, 4));
  }
}

TEST(WriteDataset, LayoutIsReadableAndConsistent) {
  TempDir dir("synth_ds");
  Scenario s = parse_scenario(kThreeObjects);
  s.sequence = "03";
  s.ego_velocity = {0.2, 0.1, 0.0};
  s.noise.score_min = 0.5;
  const SynthSequence seq = generate(s);
  write_dataset(s, seq, dir.path());
  const SequencePaths sp(dir.path(), "03");
  ASSERT_EQ(sp.frame_count(), 12u);
  const std::vector<Pose> poses = read_poses(sp.poses());
  ASSERT_EQ(poses.size(), 12u);
  EXPECT_NEAR(poses[5](0, 3), 1.0, 1e-12);
  EXPECT_EQ(read_calib(sp.calib()), Pose::Identity());
  for (std::size_t t = 0; t < 12; ++t) {
    const FramePanoptic gt = read_frame(sp.velodyne(t), sp.labels(t));
    const FramePanoptic pr =
        read_frame(sp.velodyne(t), sp.predictions(t), sp.confidences(t));
    EXPECT_EQ(gt.semantic, seq.frames[t].gt.semantic);
    EXPECT_EQ(gt.instance, seq.frames[t].gt.instance);
    EXPECT_EQ(pr.instance, seq.frames[t].pred.instance);
    EXPECT_EQ(pr.confidence, seq.frames[t].confidence);
    EXPECT_EQ(gt.points[0].x, static_cast<float>(seq.frames[t].points[0].x));
  }
  TempDir again("synth_ds2");
  write_dataset(s, generate(s), again.path());
  const SequencePaths sp2(again.path(), "03");
  EXPECT_EQ(slurp(sp.predictions(7)), slurp(sp2.predictions(7)));
  EXPECT_EQ(slurp(sp.velodyne(7)), slurp(sp2.velodyne(7)));
  EXPECT_EQ(slurp(sp.poses()), slurp(sp2.poses()));
}

}  // namespace
}  // namespace panotrack
