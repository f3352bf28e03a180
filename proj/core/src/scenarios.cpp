// Copyright 2026 The GBSED Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gbsed/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>

#include "gbsed/errors.hpp"
#include "gbsed/random.hpp"
#include "text.hpp"

namespace gbsed {

namespace {

constexpr int kVehicleClasses[] = {object_class::car, object_class::truck, object_class::bus,
                                   object_class::motorcycle};
constexpr int kThreatAttempts = 256;

double quantize(double v, double step = kFeatureQuantum) { return std::round(v / step) * step; }

double uniform_in(SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

struct Track {
  int cls = object_class::car;
  std::size_t lane = 0;
  double y0 = 0.0;
};

void validate_spec(const ScenarioSpec& spec, const RelationParams& params) {
  if (spec.frames_per_sequence == 0) throw SpecError("frames_per_sequence must be positive");
  if (spec.vehicles_min > spec.vehicles_max) throw SpecError("vehicles range is empty");
  if (!(spec.risky_fraction >= 0.0 && spec.risky_fraction <= 1.0))
    throw SpecError("risky_fraction must lie in [0, 1]");
  if (spec.lane_count == 0) throw SpecError("lane_count must be positive");
  if (spec.risk_window == 0) throw SpecError("risk_window must be positive");
  if (!(spec.frame_interval > 0.0) || !(spec.road_half_length > 0.0) || !(spec.slot_length > 0.0))
    throw SpecError("frame interval, road length and slot length must be positive");
  if (!(spec.max_relative_speed >= 0.0)) throw SpecError("max_relative_speed must be >= 0");
  if (spec.risky_fraction > 0.0 && spec.risk_window > spec.frames_per_sequence)
    throw SpecError("risk window longer than the sequence");

  const auto cells = static_cast<std::size_t>(2.0 * spec.road_half_length / spec.slot_length);
  if (spec.vehicles_max > cells * spec.lane_count)
    throw SpecError("vehicles exceed lane capacity (" + std::to_string(cells * spec.lane_count) +
                    " slots)");
  const std::size_t nodes =
      1 + std::max<std::size_t>(spec.vehicles_max, 1) + (spec.lane_nodes ? spec.lane_count : 0);
  if (nodes > kMaxNodes) throw SpecError("scene would exceed 65535 nodes");
  if (spec.risky_fraction > 0.0 && spec.lane_count > 1 &&
      !(params.lane_width < params.very_near_distance))
    throw SpecError("adjacent-lane vehicles can never come within very_near distance");
}

GraphSequence generate_one(const ScenarioSpec& spec, std::uint64_t seed,
                           const RelationOntology& ontology, const RelationParams& params,
                           const FeatureLayout& layout) {
  SplitMix64 rng(seed);
  const bool risky = rng.uniform() < spec.risky_fraction;
  auto vehicles = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(spec.vehicles_min), static_cast<std::int64_t>(spec.vehicles_max)));
  if (risky) vehicles = std::max<std::size_t>(vehicles, 1);

  const double dt = spec.frame_interval;
  const std::size_t frames = spec.frames_per_sequence;
  const std::size_t ego_lane = (spec.lane_count - 1) / 2;
  const auto lane_x = [&](std::size_t lane) {
    return (static_cast<double>(lane) - static_cast<double>(ego_lane)) * params.lane_width;
  };

  const double ego_speed = quantize(uniform_in(rng, 20.0, 30.0), 2 * kFeatureQuantum);
  std::vector<double> lane_speed(spec.lane_count);
  for (auto& v : lane_speed)
    v = quantize(uniform_in(rng, -spec.max_relative_speed, spec.max_relative_speed),
                 2 * kFeatureQuantum);

  const auto y_at = [&](const Track& t, std::size_t k) {
    return quantize(t.y0 + lane_speed[t.lane] * dt * static_cast<double>(k));
  };
  const auto wire = [](double v) { return static_cast<double>(static_cast<float>(v)); };
  const auto ego_distance = [&](const Track& t, std::size_t k) {
    return std::hypot(wire(lane_x(t.lane)), wire(y_at(t, k)));
  };

  std::vector<Track> tracks;
  if (risky) {
    // The threat rides alongside the ego and stays within very_near range
    // for risk_window consecutive frames.
    Track threat;
    threat.lane = ego_lane + 1 < spec.lane_count ? ego_lane + 1
                  : ego_lane > 0                  ? ego_lane - 1
                                                  : ego_lane;
    const double x = lane_x(threat.lane);
    const double reach = std::sqrt(params.very_near_distance * params.very_near_distance - x * x);
    const std::size_t window = spec.risk_window;
    bool placed = false;
    for (int attempt = 0; attempt < kThreatAttempts && !placed; ++attempt) {
      lane_speed[threat.lane] = quantize(uniform_in(rng, -1.0, 1.0), 2 * kFeatureQuantum);
      const auto first = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(frames - window)));
      const double centre = static_cast<double>(first) + static_cast<double>(window - 1) / 2.0;
      threat.y0 = quantize(uniform_in(rng, -reach / 2, reach / 2) - lane_speed[threat.lane] * dt * centre);
      placed = true;
      for (std::size_t k = first; k < first + window; ++k)
        placed = placed && ego_distance(threat, k) <= params.very_near_distance;
    }
    if (!placed) throw SpecError("could not construct a risky trajectory");
    threat.cls = kVehicleClasses[rng.uniform_int(0, 3)];
    tracks.push_back(threat);
  }

  // Remaining vehicles occupy distinct (lane, slot) cells and stay clear of
  // the ego by 1.2x the near distance at every frame.
  const double clearance = 1.2 * params.near_distance;
  const auto cells = static_cast<std::size_t>(2.0 * spec.road_half_length / spec.slot_length);
  std::vector<Track> eligible;
  for (std::size_t lane = 0; lane < spec.lane_count; ++lane) {
    for (std::size_t c = 0; c < cells; ++c) {
      Track t;
      t.lane = lane;
      const double centre = -spec.road_half_length + spec.slot_length * (static_cast<double>(c) + 0.5);
      t.y0 = quantize(centre + uniform_in(rng, -0.2, 0.2) * spec.slot_length);
      bool ok = true;
      for (std::size_t k = 0; k < frames && ok; ++k) ok = ego_distance(t, k) > clearance;
      if (risky && lane == tracks.front().lane)
        ok = ok && std::abs(t.y0 - tracks.front().y0) >= spec.slot_length;
      if (ok) eligible.push_back(t);
    }
  }
  const std::size_t needed = vehicles - tracks.size();
  if (eligible.size() < needed) throw SpecError("not enough free lane slots for the vehicles");
  for (std::size_t k = 0; k < needed; ++k) {
    const auto pick = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(k), static_cast<std::int64_t>(eligible.size() - 1)));
    std::swap(eligible[k], eligible[pick]);
    eligible[k].cls = kVehicleClasses[rng.uniform_int(0, 3)];
    tracks.push_back(eligible[k]);
  }

  GraphSequence seq;
  seq.label = risky ? Risk::risky : Risk::safe;
  for (std::size_t k = 0; k < frames; ++k) {
    std::vector<SceneNode> nodes;
    std::uint16_t index = 0;
    nodes.push_back(make_node(index++, object_class::car, 0.0, 0.0, ego_speed, layout));
    for (const auto& t : tracks)
      nodes.push_back(make_node(index++, t.cls, lane_x(t.lane), y_at(t, k),
                                ego_speed + lane_speed[t.lane], layout));
    if (spec.lane_nodes)
      for (std::size_t lane = 0; lane < spec.lane_count; ++lane)
        nodes.push_back(make_node(index++, object_class::lane, lane_x(lane), 0.0, 0.0, layout));
    seq.frames.push_back(build_scene_graph(std::move(nodes), ontology, params));
  }
  return seq;
}

std::string format_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::vector<GraphSequence> generate(const ScenarioSpec& spec, const RelationOntology& ontology,
                                    const RelationParams& params) {
  validate_spec(spec, params);
  const auto layout = FeatureLayout::resolve(ontology);
  if (spec.risky_fraction > 0.0 && !ontology.find_relation("is_near"))
    throw SpecError("risky scenes need an is_near relation");
  std::vector<GraphSequence> out;
  out.reserve(spec.num_sequences);
  for (std::size_t s = 0; s < spec.num_sequences; ++s)
    out.push_back(generate_one(spec, spec.seed ^ s, ontology, params, layout));
  return out;
}

std::string write_scenes(const std::vector<GraphSequence>& sequences,
                         const RelationOntology& ontology) {
  const auto layout = FeatureLayout::resolve(ontology);
  std::string out;
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const auto id = std::to_string(s);
    if (sequences[s].label)
      out += "seq " + id + " label " + std::string(to_string(*sequences[s].label)) + "\n";
    for (std::size_t k = 0; k < sequences[s].frames.size(); ++k) {
      const auto& g = sequences[s].frames[k];
      out += "seq " + id + " frame " + std::to_string(k) + " |";
      for (const auto& n : g.nodes) {
        out += " " + std::to_string(n.index) + ":" + std::to_string(layout.class_of(n)) + ":" +
               format_real(layout.x_of(n)) + ":" + format_real(layout.y_of(n)) + ":" +
               format_real(layout.speed_of(n));
      }
      out += " |";
      for (const auto& e : g.edges)
        out += " " + std::to_string(e.src) + ":" + std::to_string(e.rel) + ":" +
               std::to_string(e.dst);
      out += "\n";
    }
  }
  return out;
}

void write_scenes_file(const std::string& path, const std::vector<GraphSequence>& sequences,
                       const RelationOntology& ontology) {
  text::write_file(path, write_scenes(sequences, ontology));
}

std::vector<GraphSequence> read_scenes(std::string_view body, const RelationOntology& ontology) {
  const auto layout = FeatureLayout::resolve(ontology);
  const auto digest = ontology_digest(ontology);
  std::vector<GraphSequence> out;

  // A sequence is opened by either its label line or its frame 0.
  const auto open_sequence = [&](std::string_view id_text, std::size_t line) -> GraphSequence& {
    const auto id = text::parse_int<std::size_t>(id_text);
    if (!id) throw ParseError("bad sequence id '" + std::string(id_text) + "'", line);
    if (*id + 1 == out.size()) return out.back();
    if (*id != out.size()) throw ParseError("sequence ids must run 0, 1, 2, ...", line);
    out.emplace_back();
    return out.back();
  };

  for (const auto& line : text::split_lines(body)) {
    const auto n = line.number;
    const auto trimmed = text::trim(line.text);
    if (!line.terminated) throw ParseError("truncated final line", n);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    const auto sections = text::split(trimmed, '|');
    const auto head = text::split_ws(sections[0]);
    if (head.size() < 3 || head[0] != "seq") throw ParseError("expected 'seq <id> ...'", n);

    if (head[2] == "label") {
      if (sections.size() != 1 || head.size() != 4) throw ParseError("expected 'seq <id> label <risky|safe>'", n);
      auto& seq = open_sequence(head[1], n);
      if (!seq.frames.empty() || seq.label) throw ParseError("label must precede frames", n);
      if (head[3] == "risky") {
        seq.label = Risk::risky;
      } else if (head[3] == "safe") {
        seq.label = Risk::safe;
      } else {
        throw ParseError("label must be risky or safe", n);
      }
      continue;
    }

    if (head[2] != "frame" || head.size() != 4 || sections.size() != 3)
      throw ParseError("expected 'seq <id> frame <k> | nodes | edges'", n);
    auto& seq = open_sequence(head[1], n);
    const auto k = text::parse_int<std::size_t>(head[3]);
    if (!k || *k != seq.frames.size()) throw ParseError("frame numbers must run 0, 1, 2, ...", n);

    SceneGraph g;
    g.ontology_digest = digest;
    for (const auto token : text::split_ws(sections[1])) {
      const auto f = text::split(token, ':');
      if (f.size() != 5) throw ParseError("node record needs idx:class:x:y:speed", n);
      const auto idx = text::parse_int<std::size_t>(f[0]);
      const auto cls = text::parse_int<int>(f[1]);
      const auto x = text::parse_double(f[2]);
      const auto y = text::parse_double(f[3]);
      const auto speed = text::parse_double(f[4]);
      if (!idx || !cls || !x || !y || !speed) throw ParseError("malformed node record '" + std::string(token) + "'", n);
      if (*idx != g.nodes.size()) throw ParseError("node indices must be dense and ordered", n);
      if (*idx >= kMaxNodes) throw ParseError("too many nodes", n);
      SceneNode node;
      node.index = static_cast<std::uint16_t>(*idx);
      node.features.assign(layout.dimension, 0.0);
      node.features[layout.class_index] = *cls;
      node.features[layout.x_index] = *x;
      node.features[layout.y_index] = *y;
      if (layout.speed_index) node.features[*layout.speed_index] = *speed;
      g.nodes.push_back(std::move(node));
    }
    if (g.nodes.empty()) throw ParseError("frame has no nodes", n);

    for (const auto token : text::split_ws(sections[2])) {
      const auto f = text::split(token, ':');
      if (f.size() != 3) throw ParseError("edge record needs src:rel:dst", n);
      const auto src = text::parse_int<std::size_t>(f[0]);
      const auto rel = text::parse_int<std::size_t>(f[1]);
      const auto dst = text::parse_int<std::size_t>(f[2]);
      if (!src || !rel || !dst) throw ParseError("malformed edge record '" + std::string(token) + "'", n);
      if (*rel == 0 || *rel > ontology.num_relations())
        throw ParseError("relation id " + std::to_string(*rel) + " outside 1.." +
                             std::to_string(ontology.num_relations()), n);
      if (*src >= g.nodes.size() || *dst >= g.nodes.size()) throw ParseError("edge endpoint out of range", n);
      if (*src == *dst) throw ParseError("self-loop edge", n);
      g.edges.push_back({static_cast<std::uint16_t>(*src), static_cast<RelationId>(*rel),
                         static_cast<std::uint16_t>(*dst)});
    }
    std::sort(g.edges.begin(), g.edges.end());
    if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end())
      throw ParseError("duplicate edge", n);
    seq.frames.push_back(std::move(g));
  }
  for (std::size_t s = 0; s < out.size(); ++s)
    if (out[s].frames.empty())
      throw ParseError("sequence " + std::to_string(s) + " has no frames",
                       text::split_lines(body).size());
  return out;
}

std::vector<GraphSequence> read_scenes_file(const std::string& path,
                                            const RelationOntology& ontology) {
  return read_scenes(text::read_file(path), ontology);
}

std::vector<std::vector<DetectedObject>> read_detections(std::string_view body) {
  std::vector<std::vector<DetectedObject>> scenes;
  for (const auto& line : text::split_lines(body)) {
    const auto n = line.number;
    const auto trimmed = text::trim(line.text);
    if (!line.terminated) throw ParseError("truncated final line", n);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto sections = text::split(trimmed, '|');
    const auto head = text::split_ws(sections[0]);
    if (sections.size() != 2 || head.size() != 2 || head[0] != "scene")
      throw ParseError("expected 'scene <id> | objects'", n);
    const auto id = text::parse_int<std::size_t>(head[1]);
    if (!id || *id != scenes.size()) throw ParseError("scene ids must run 0, 1, 2, ...", n);
    std::vector<DetectedObject> objects;
    for (const auto token : text::split_ws(sections[1])) {
      const auto f = text::split(token, ':');
      if (f.size() != 6) throw ParseError("object record needs class:u1:v1:u2:v2:speed", n);
      const auto cls = text::parse_int<int>(f[0]);
      std::array<std::optional<double>, 5> v{text::parse_double(f[1]), text::parse_double(f[2]),
                                             text::parse_double(f[3]), text::parse_double(f[4]),
                                             text::parse_double(f[5])};
      if (!cls || std::any_of(v.begin(), v.end(), [](const auto& o) { return !o; }))
        throw ParseError("malformed object record '" + std::string(token) + "'", n);
      objects.push_back({*cls, {*v[0], *v[1], *v[2], *v[3]}, *v[4]});
    }
    if (objects.empty()) throw ParseError("scene has no objects", n);
    scenes.push_back(std::move(objects));
  }
  return scenes;
}

}  // namespace gbsed
