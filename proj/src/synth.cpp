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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "panotrack/errors.hpp"
#include "panotrack/kittiio.hpp"
#include "panotrack/pointlabel.hpp"
#include "panotrack/semantic.hpp"

namespace panotrack {
namespace {

using nlohmann::json;

// Distributions are written out by hand: the standard library's are not
// guaranteed to produce the same sequence across implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame)
      : engine_(mix(seed ^ mix(stream * 0x9E3779B97F4A7C15ull + frame))) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * n));
  }
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

constexpr std::uint64_t kGeometryStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

struct NamedClass {
  std::string_view name;
  ClassId id;
};
constexpr NamedClass kClassNames[] = {
    {"car", raw::kCar},
    {"bicycle", raw::kBicycle},
    {"motorcycle", raw::kMotorcycle},
    {"truck", raw::kTruck},
    {"other-vehicle", raw::kOtherVehicle},
    {"person", raw::kPerson},
    {"bicyclist", raw::kBicyclist},
    {"motorcyclist", raw::kMotorcyclist},
    {"road", raw::kRoad},
    {"building", raw::kBuilding},
    {"vegetation", raw::kVegetation},
};

std::vector<ClassId> group_members(ClassGroup g) {
  switch (g) {
    case ClassGroup::kVehicles:
      return {raw::kCar, raw::kTruck, raw::kOtherVehicle};
    case ClassGroup::kBikes:
      return {raw::kBicycle, raw::kMotorcycle, raw::kBicyclist,
              raw::kMotorcyclist};
    case ClassGroup::kPedestrian:
      return {raw::kPerson};
  }
  return {};
}

std::array<double, 3> vec3(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string("'") + key + "' must be a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ClassId class_from_json(const json& j) {
  if (j.is_number_unsigned()) return j.get<ClassId>();
  if (j.is_string()) return parse_synth_class(j.get<std::string>());
  throw ConfigError("object 'class' must be a name or a raw label id");
}

int lifetime_end(const Scenario& s, const SynthObject& o) {
  return o.death < 0 ? s.frames - 1 : o.death;
}

bool occluded(const NoiseSpec& noise, InstanceId id, int t) {
  return std::any_of(noise.occlusions.begin(), noise.occlusions.end(),
                     [&](const Occlusion& o) {
                       return o.object == id && t >= o.from && t <= o.to;
                     });
}

Point3 to_float(double x, double y, double z) {
  return {static_cast<double>(static_cast<float>(x)),
          static_cast<double>(static_cast<float>(y)),
          static_cast<double>(static_cast<float>(z))};
}

}  // namespace

ClassId parse_synth_class(std::string_view name) {
  for (const NamedClass& c : kClassNames) {
    if (c.name == name) return c.id;
  }
  ClassId id = 0;
  const auto [end, ec] = std::from_chars(name.data(), name.data() + name.size(), id);
  if (ec != std::errc() || end != name.data() + name.size()) {
    throw ConfigError("unknown class '" + std::string(name) + "'");
  }
  return id;
}

void Scenario::validate() const {
  if (frames <= 0) throw ConfigError("'frames' must be positive");
  if (stuff_points < 0) throw ConfigError("'stuff.points' must be >= 0");
  if (is_things(stuff_class) || to_learning(stuff_class) == 0) {
    throw ConfigError("stuff class " + std::to_string(stuff_class) +
                      " is not a known Stuff class");
  }
  if (!(stuff_extent_x > 0.0) || !(stuff_extent_y > 0.0)) {
    throw ConfigError("'stuff.extent' must be positive");
  }
  std::set<InstanceId> ids;
  for (const SynthObject& o : objects) {
    const std::string what = "object " + std::to_string(o.id);
    if (o.id == 0 || o.id > kMaxInstanceId) {
      throw ConfigError(what + ": id must be in [1, 65535]");
    }
    if (!ids.insert(o.id).second) {
      throw ConfigError("duplicate object id " + std::to_string(o.id));
    }
    if (!is_things(o.class_id)) {
      throw ConfigError(what + ": class " + std::to_string(o.class_id) +
                        " is not a Things class");
    }
    const int end = lifetime_end(*this, o);
    if (o.birth < 0 || end < o.birth || end >= frames) {
      throw ConfigError(what + ": lifetime [" + std::to_string(o.birth) + ", " +
                        std::to_string(end) + "] is outside the sequence");
    }
    for (double d : o.size) {
      if (!(d > 0.0)) throw ConfigError(what + ": sizes must be positive");
    }
    if (o.points_first < 0 || o.points_last < 0) {
      throw ConfigError(what + ": point counts must be >= 0");
    }
  }
  auto check_prob = [](double p, const char* key) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string("'noise.") + key + "' must be in [0, 1]");
    }
  };
  check_prob(noise.dropout, "dropout");
  check_prob(noise.class_flip, "class_flip");
  check_prob(noise.score_min, "score");
  check_prob(noise.score_max, "score");
  if (noise.score_min > noise.score_max) {
    throw ConfigError("'noise.score' must be [min, max] with min <= max");
  }
  if (!(noise.jitter >= 0.0)) throw ConfigError("'noise.jitter' must be >= 0");
  for (const Occlusion& o : noise.occlusions) {
    if (!ids.count(o.object)) {
      throw ConfigError("occlusion refers to unknown object " +
                        std::to_string(o.object));
    }
    if (o.to < o.from) throw ConfigError("occlusion window is empty");
  }
}

Scenario parse_scenario(std::string_view json_text) {
  Scenario s;
  try {
    const json j = json::parse(json_text);
    s.frames = j.at("frames").get<int>();
    s.seed = j.value("seed", std::uint64_t{0});
    s.sequence = j.value("sequence", std::string("00"));
    if (j.contains("ego_velocity")) {
      s.ego_velocity = vec3(j["ego_velocity"], "ego_velocity");
    }
    if (j.contains("stuff")) {
      const json& st = j["stuff"];
      s.stuff_points = st.value("points", s.stuff_points);
      if (st.contains("class")) s.stuff_class = class_from_json(st["class"]);
      if (st.contains("extent")) {
        const json& e = st["extent"];
        if (!e.is_array() || e.size() != 2) {
          throw ConfigError("'stuff.extent' must be [x, y]");
        }
        s.stuff_extent_x = e[0].get<double>();
        s.stuff_extent_y = e[1].get<double>();
      }
    }
    for (const json& jo : j.at("objects")) {
      SynthObject o;
      o.id = jo.at("id").get<InstanceId>();
      o.class_id = class_from_json(jo.at("class"));
      o.birth = jo.value("birth", 0);
      o.death = jo.value("death", -1);
      if (jo.contains("center")) o.center = vec3(jo["center"], "center");
      if (jo.contains("size")) o.size = vec3(jo["size"], "size");
      if (jo.contains("velocity")) o.velocity = vec3(jo["velocity"], "velocity");
      if (jo.contains("points")) {
        const json& p = jo["points"];
        if (p.is_array()) {
          if (p.size() != 2) throw ConfigError("'points' must be n or [first, last]");
          o.points_first = p[0].get<int>();
          o.points_last = p[1].get<int>();
        } else {
          o.points_first = o.points_last = p.get<int>();
        }
      }
      s.objects.push_back(o);
    }
    if (j.contains("noise")) {
      const json& n = j["noise"];
      s.noise.dropout = n.value("dropout", 0.0);
      s.noise.class_flip = n.value("class_flip", 0.0);
      s.noise.jitter = n.value("jitter", 0.0);
      if (n.contains("score")) {
        const json& sc = n["score"];
        if (!sc.is_array() || sc.size() != 2) {
          throw ConfigError("'noise.score' must be [min, max]");
        }
        s.noise.score_min = sc[0].get<double>();
        s.noise.score_max = sc[1].get<double>();
      }
      for (const json& jo : n.value("occlusions", json::array())) {
        s.noise.occlusions.push_back({jo.at("object").get<InstanceId>(),
                                      jo.at("from").get<int>(),
                                      jo.at("to").get<int>()});
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

SynthSequence generate(const Scenario& scenario) {
  scenario.validate();
  std::vector<SynthObject> objects = scenario.objects;
  std::sort(objects.begin(), objects.end(),
            [](const SynthObject& a, const SynthObject& b) { return a.id < b.id; });

  SynthSequence seq;
  seq.frames.resize(static_cast<std::size_t>(scenario.frames));
  for (int t = 0; t < scenario.frames; ++t) {
    SynthFrame& f = seq.frames[static_cast<std::size_t>(t)];
    const Point3 ego{scenario.ego_velocity[0] * t, scenario.ego_velocity[1] * t,
                     scenario.ego_velocity[2] * t};
    seq.ego_positions.push_back(ego);

    // Ground truth geometry; independent of the noise settings.
    Rng geo(scenario.seed, kGeometryStream, static_cast<std::uint64_t>(t));
    struct Span {
      std::size_t begin, end;
      const SynthObject* obj;
      Point3 center;
    };
    std::vector<Span> spans;
    for (const SynthObject& o : objects) {
      const int end = lifetime_end(scenario, o);
      if (t < o.birth || t > end) continue;
      const double age = t - o.birth;
      const double frac = end == o.birth ? 0.0 : age / (end - o.birth);
      const int n = static_cast<int>(std::lround(
          o.points_first + (o.points_last - o.points_first) * frac));
      const Point3 c{o.center[0] + o.velocity[0] * age,
                     o.center[1] + o.velocity[1] * age,
                     o.center[2] + o.velocity[2] * age};
      Span sp{f.points.size(), 0, &o, c};
      for (int k = 0; k < n; ++k) {
        const double x = c.x + (geo.uniform() - 0.5) * o.size[0];
        const double y = c.y + (geo.uniform() - 0.5) * o.size[1];
        const double z = c.z + (geo.uniform() - 0.5) * o.size[2];
        f.points.push_back(to_float(x - ego.x, y - ego.y, z - ego.z));
        f.remission.push_back(static_cast<float>(geo.uniform()));
        f.gt.semantic.push_back(o.class_id);
        f.gt.instance.push_back(o.id);
      }
      sp.end = f.points.size();
      spans.push_back(sp);
    }
    for (int k = 0; k < scenario.stuff_points; ++k) {
      const double x = (geo.uniform() - 0.5) * scenario.stuff_extent_x;
      const double y = (geo.uniform() - 0.5) * scenario.stuff_extent_y;
      const double z = geo.uniform(-2.0, -1.8);
      f.points.push_back(to_float(x, y, z));
      f.remission.push_back(static_cast<float>(geo.uniform()));
      f.gt.semantic.push_back(scenario.stuff_class);
      f.gt.instance.push_back(0);
    }

    // Corrupted prediction copy.
    Rng noise(scenario.seed, kNoiseStream, static_cast<std::uint64_t>(t));
    f.pred = f.gt;
    f.confidence.assign(f.points.size(), 1.0f);
    std::vector<std::size_t> visible;
    for (std::size_t s = 0; s < spans.size(); ++s) {
      const Span& sp = spans[s];
      const SynthObject& o = *sp.obj;
      const double u_drop = noise.uniform();
      const double u_flip = noise.uniform();
      const double u_pick = noise.uniform();
      const double score = noise.uniform(scenario.noise.score_min,
                                         scenario.noise.score_max);
      const double jx = noise.normal() * scenario.noise.jitter;
      const double jy = noise.normal() * scenario.noise.jitter;

      const bool gone =
          occluded(scenario.noise, o.id, t) || u_drop < scenario.noise.dropout;
      ClassId cls = o.class_id;
      if (u_flip < scenario.noise.class_flip) {
        std::vector<ClassId> others;
        for (ClassId c : group_members(*group_of(o.class_id))) {
          if (c != o.class_id) others.push_back(c);
        }
        if (!others.empty()) {
          cls = others[std::min(others.size() - 1,
                                static_cast<std::size_t>(u_pick * others.size()))];
        }
      }
      Box3D mask{sp.center.x + jx - ego.x, sp.center.y + jy - ego.y,
                 sp.center.z - ego.z, 0.0, o.size[0], o.size[1], o.size[2],
                 1.0, cls};
      bool any = false;
      for (std::size_t i = sp.begin; i < sp.end; ++i) {
        if (gone || (scenario.noise.jitter > 0.0 && !contains(mask, f.points[i]))) {
          f.pred.semantic[i] = raw::kUnlabeled;
          f.pred.instance[i] = 0;
        } else {
          f.pred.semantic[i] = cls;
          f.confidence[i] = static_cast<float>(score);
          any = true;
        }
      }
      if (any) visible.push_back(s);
    }
    // Network instance ids carry no meaning across frames: shuffle them.
    std::vector<InstanceId> perm(visible.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      perm[k] = static_cast<InstanceId>(k + 1);
    }
    for (std::size_t k = perm.size(); k > 1; --k) {
      std::swap(perm[k - 1], perm[noise.index(k)]);
    }
    for (std::size_t k = 0; k < visible.size(); ++k) {
      const Span& sp = spans[visible[k]];
      for (std::size_t i = sp.begin; i < sp.end; ++i) {
        if (f.pred.semantic[i] != raw::kUnlabeled) f.pred.instance[i] = perm[k];
      }
    }
  }
  return seq;
}

void write_dataset(const Scenario& scenario, const SynthSequence& seq,
                   const std::filesystem::path& root) {
  const SequencePaths paths(root, scenario.sequence);
  std::vector<Pose> poses;
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const SynthFrame& f = seq.frames[t];
    write_points(paths.velodyne(t), PointCloud{f.points, f.remission});
    write_labels(paths.labels(t), f.gt);
    write_labels(paths.predictions(t), f.pred);
    write_confidences(paths.confidences(t), f.confidence);
    Pose p = Pose::Identity();
    p(0, 3) = seq.ego_positions[t].x;
    p(1, 3) = seq.ego_positions[t].y;
    p(2, 3) = seq.ego_positions[t].z;
    poses.push_back(p);
  }
  write_poses(paths.poses(), poses);
  write_calib(paths.calib(), Pose::Identity());
}

}  // namespace panotrack
