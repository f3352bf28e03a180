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

#include "gbsed/scene_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gbsed/errors.hpp"
#include "text.hpp"

namespace gbsed {

// --- Homography -------------------------------------------------------------

Homography::Homography(const std::array<double, 9>& h) : h_(h) {
  if (!(std::abs(determinant()) > 1e-12)) throw SchemaError("homography is not invertible");
}

Homography Homography::identity() { return Homography({1, 0, 0, 0, 1, 0, 0, 0, 1}); }

double Homography::determinant() const noexcept {
  const auto& m = h_;
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
  const auto& m = h_;
  const double inv_det = 1.0 / determinant();
  return Homography({
      (m[4] * m[8] - m[5] * m[7]) * inv_det,
      (m[2] * m[7] - m[1] * m[8]) * inv_det,
      (m[1] * m[5] - m[2] * m[4]) * inv_det,
      (m[5] * m[6] - m[3] * m[8]) * inv_det,
      (m[0] * m[8] - m[2] * m[6]) * inv_det,
      (m[2] * m[3] - m[0] * m[5]) * inv_det,
      (m[3] * m[7] - m[4] * m[6]) * inv_det,
      (m[1] * m[6] - m[0] * m[7]) * inv_det,
      (m[0] * m[4] - m[1] * m[3]) * inv_det,
  });
}

Homography Homography::compose(const Homography& other) const {
  std::array<double, 9> out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k) out[r * 3 + c] += h_[r * 3 + k] * other.h_[k * 3 + c];
  return Homography(out);
}

Homography parse_homography(std::string_view body) {
  const auto fields = text::split_ws(body);
  if (fields.size() != 9) throw SchemaError("homography needs 9 reals, got " +
                                            std::to_string(fields.size()));
  std::array<double, 9> h{};
  for (std::size_t k = 0; k < 9; ++k) {
    const auto value = text::parse_double(fields[k]);
    if (!value || !std::isfinite(*value))
      throw SchemaError("bad homography entry '" + std::string(fields[k]) + "'");
    h[k] = *value;
  }
  return Homography(h);
}

BevPoint project_point(double u, double v, const Homography& h) {
  const auto& m = h.matrix();
  const double x = m[0] * u + m[1] * v + m[2];
  const double y = m[3] * u + m[4] * v + m[5];
  const double w = m[6] * u + m[7] * v + m[8];
  if (!(std::abs(w) >= 1e-9)) throw HorizonError("point at or beyond the horizon", 0);
  return {x / w, y / w};
}

BevPoint ipm_project(const BoundingBox& box, const Homography& h) {
  return project_point((box.u1 + box.u2) / 2.0, box.v2, h);
}

// --- graph model ------------------------------------------------------------

bool SceneGraph::contains(const Edge& e) const noexcept {
  return std::binary_search(edges.begin(), edges.end(), e);
}

FeatureLayout FeatureLayout::resolve(const RelationOntology& ontology) {
  const auto need = [&](std::string_view name) {
    const auto idx = ontology.find_attribute(name);
    if (!idx) throw OntologyMismatch("ontology lacks attribute '" + std::string(name) + "'");
    return *idx;
  };
  FeatureLayout layout;
  layout.dimension = ontology.dimension();
  layout.class_index = need("class");
  layout.x_index = need("bev_x");
  layout.y_index = need("bev_y");
  layout.speed_index = ontology.find_attribute("speed");
  return layout;
}

int FeatureLayout::class_of(const SceneNode& n) const {
  const double v = n.features[class_index];
  // Corrupted features may hold anything; those map to no known class.
  if (!std::isfinite(v) || std::abs(v) > 1e9) return -1;
  return static_cast<int>(std::lround(v));
}

SceneNode make_node(std::uint16_t index, int class_id, double x, double y, double speed,
                    const FeatureLayout& layout) {
  SceneNode node;
  node.index = index;
  node.features.assign(layout.dimension, 0.0);
  const auto as_wire = [](double v) { return static_cast<double>(static_cast<float>(v)); };
  node.features[layout.class_index] = as_wire(class_id);
  node.features[layout.x_index] = as_wire(x);
  node.features[layout.y_index] = as_wire(y);
  if (layout.speed_index) node.features[*layout.speed_index] = as_wire(speed);
  return node;
}

bool RelationParams::is_lane(int class_id) const noexcept {
  return std::find(lane_classes.begin(), lane_classes.end(), class_id) != lane_classes.end();
}

// --- relational function ----------------------------------------------------

std::vector<Edge> infer_relations(std::span<const SceneNode> nodes,
                                  const RelationOntology& ontology,
                                  const RelationParams& params) {
  const auto layout = FeatureLayout::resolve(ontology);
  const auto id = [&](std::string_view name) -> RelationId {
    return ontology.find_relation(name).value_or(0);
  };
  const RelationId is_near = id("is_near");
  const RelationId very_near = id("very_near");
  const RelationId to_left_of = id("to_left_of");
  const RelationId to_right_of = id("to_right_of");
  const RelationId in_front_of = id("in_front_of");
  const RelationId behind = id("behind");
  const RelationId is_in = id("is_in");
  const RelationId approaching = id("approaching");

  const double half_lane = params.lane_width / 2.0;
  std::vector<Edge> edges;
  const auto emit = [&](std::size_t src, RelationId rel, std::size_t dst) {
    if (rel != 0)
      edges.push_back({static_cast<std::uint16_t>(src), rel, static_cast<std::uint16_t>(dst)});
  };

  // Every predicate is stated for the ordered pair (a, b), read "a <rel> b".
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const bool a_lane = params.is_lane(layout.class_of(nodes[a]));
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      if (a == b || a_lane) continue;
      const bool b_lane = params.is_lane(layout.class_of(nodes[b]));
      const double dx = layout.x_of(nodes[a]) - layout.x_of(nodes[b]);
      const double dy = layout.y_of(nodes[a]) - layout.y_of(nodes[b]);

      if (b_lane) {
        if (std::abs(dx) <= half_lane) emit(a, is_in, b);
        continue;
      }

      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist <= params.near_distance) emit(a, is_near, b);
      if (dist <= params.very_near_distance) emit(a, very_near, b);
      if (dx <= -half_lane && std::abs(dy) <= params.side_range) emit(a, to_left_of, b);
      if (dx >= half_lane && std::abs(dy) <= params.side_range) emit(a, to_right_of, b);
      if (std::abs(dx) <= half_lane && dy > 0 && dy <= params.front_range) emit(a, in_front_of, b);
      if (std::abs(dx) <= half_lane && dy < 0 && -dy <= params.front_range) emit(a, behind, b);
      if (dist <= params.near_distance &&
          layout.speed_of(nodes[a]) > layout.speed_of(nodes[b]) + params.speed_margin)
        emit(a, approaching, b);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

SceneGraph build_scene_graph(std::vector<SceneNode> nodes, const RelationOntology& ontology,
                             const RelationParams& params) {
  if (nodes.empty()) throw ShapeError("scene has no ego node");
  if (nodes.size() > kMaxNodes) throw CapacityError("scene exceeds 65535 nodes");
  SceneGraph g;
  g.edges = infer_relations(nodes, ontology, params);
  g.nodes = std::move(nodes);
  g.ontology_digest = ontology_digest(ontology);
  return g;
}

SceneGraph build_scene_graph(std::span<const DetectedObject> objects, const Homography& h,
                             const RelationOntology& ontology, const RelationParams& params) {
  if (objects.empty()) throw ShapeError("scene has no ego object");
  if (objects.size() > kMaxNodes) throw CapacityError("scene exceeds 65535 nodes");
  const auto layout = FeatureLayout::resolve(ontology);
  std::vector<SceneNode> nodes;
  nodes.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& obj = objects[i];
    if (!(obj.bbox.u1 < obj.bbox.u2) || !(obj.bbox.v1 < obj.bbox.v2))
      throw ShapeError("object " + std::to_string(i) + " has a degenerate bounding box");
    if (obj.class_id < 0) throw ShapeError("object " + std::to_string(i) + " has negative class");
    BevPoint p;
    try {
      p = ipm_project(obj.bbox, h);
    } catch (const HorizonError& e) {
      throw HorizonError("object " + std::to_string(i) + ": " + e.what(), i);
    }
    nodes.push_back(make_node(static_cast<std::uint16_t>(i), obj.class_id, p.x, p.y, obj.speed,
                              layout));
  }
  return build_scene_graph(std::move(nodes), ontology, params);
}

void validate_graph(const SceneGraph& g, const RelationOntology& ontology) {
  if (g.nodes.empty()) throw ShapeError("graph has no nodes");
  if (g.nodes.size() > kMaxNodes) throw CapacityError("graph exceeds 65535 nodes");
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i].index != i) throw ShapeError("node indices are not dense");
    if (g.nodes[i].features.size() != ontology.dimension())
      throw ShapeError("node " + std::to_string(i) + " feature length differs from ontology");
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    if (e.rel == 0 || e.rel > ontology.num_relations())
      throw OntologyMismatch("edge relation id " + std::to_string(e.rel) + " not in ontology");
    if (e.src >= g.nodes.size() || e.dst >= g.nodes.size())
      throw ShapeError("edge endpoint out of range");
    if (e.src == e.dst) throw ShapeError("self-loop edge");
    if (k > 0 && !(g.edges[k - 1] < e)) throw ShapeError("edges not sorted or duplicated");
  }
}

std::string dump_graph(const SceneGraph& g, const RelationOntology& ontology) {
  std::string out;
  char buf[64];
  for (const auto& n : g.nodes) {
    out += "node " + std::to_string(n.index);
    for (const double f : n.features) {
      std::snprintf(buf, sizeof(buf), " %.6f", f);
      out += buf;
    }
    out += '\n';
  }
  for (const auto& e : g.edges)
    out += "edge " + std::to_string(e.src) + " " + ontology.relation_name(e.rel) + " " +
           std::to_string(e.dst) + "\n";
  return out;
}

}  // namespace gbsed
