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

// Scene-graph data model and construction from detected objects.
//
// Coordinates are bird's-eye view meters relative to the ego vehicle:
// x lateral (right positive), y longitudinal (forward positive). Node 0 is
// always the ego.

#ifndef GBSED_SCENE_GRAPH_HPP_
#define GBSED_SCENE_GRAPH_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbsed/ontology.hpp"

namespace gbsed {

/// Object class vocabulary used by the generator, the relation builder and
/// the risk rule. Class ids travel as the categorical `class` attribute.
namespace object_class {
inline constexpr int car = 0;
inline constexpr int truck = 1;
inline constexpr int bus = 2;
inline constexpr int motorcycle = 3;
inline constexpr int lane = 4;
}  // namespace object_class

inline constexpr std::size_t kMaxNodes = 65535;

struct BoundingBox {
  double u1 = 0, v1 = 0, u2 = 0, v2 = 0;
};

struct DetectedObject {
  int class_id = 0;
  BoundingBox bbox;
  double speed = 0.0;
};

struct BevPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Image-plane to ground-plane homography, row-major.
class Homography {
 public:
  /// Throws SchemaError when |det| <= 1e-12.
  explicit Homography(const std::array<double, 9>& h);

  static Homography identity();

  const std::array<double, 9>& matrix() const noexcept { return h_; }
  double determinant() const noexcept;
  Homography inverse() const;
  /// (*this) * other, i.e. apply `other` first.
  Homography compose(const Homography& other) const;

 private:
  std::array<double, 9> h_;
};

/// Nine whitespace-separated reals.
Homography parse_homography(std::string_view text);

/// Projects a pixel through H. Throws HorizonError (object index 0) when the
/// homogeneous scale is below 1e-9 in magnitude.
BevPoint project_point(double u, double v, const Homography& h);

/// Projects the bottom-center of `box` through H.
BevPoint ipm_project(const BoundingBox& box, const Homography& h);

struct SceneNode {
  std::uint16_t index = 0;
  std::vector<double> features;
  friend bool operator==(const SceneNode&, const SceneNode&) = default;
};

struct Edge {
  std::uint16_t src = 0;
  RelationId rel = 0;
  std::uint16_t dst = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct SceneGraph {
  std::vector<SceneNode> nodes;
  /// Sorted by (src, rel, dst), no duplicates.
  std::vector<Edge> edges;
  /// Digest of the ontology the graph was built against.
  std::uint64_t ontology_digest = 0;

  std::size_t size() const noexcept { return nodes.size(); }
  bool contains(const Edge& e) const noexcept;
  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

/// Where the well-known attributes live in a node's feature vector for a
/// given ontology. `class`, `bev_x` and `bev_y` are required; `speed` is
/// optional.
struct FeatureLayout {
  std::size_t dimension = 0;
  std::size_t class_index = 0;
  std::size_t x_index = 0;
  std::size_t y_index = 0;
  std::optional<std::size_t> speed_index;

  static FeatureLayout resolve(const RelationOntology& ontology);

  int class_of(const SceneNode& n) const;
  double x_of(const SceneNode& n) const { return n.features[x_index]; }
  double y_of(const SceneNode& n) const { return n.features[y_index]; }
  double speed_of(const SceneNode& n) const {
    return speed_index ? n.features[*speed_index] : 0.0;
  }
};

/// Builds a node whose features are rounded to 32-bit floats, the precision
/// they have on the wire. Attributes other than the four known ones are 0.
SceneNode make_node(std::uint16_t index, int class_id, double x, double y, double speed,
                    const FeatureLayout& layout);

struct RelationParams {
  double near_distance = 10.0;       // is_near, approaching
  double very_near_distance = 4.0;   // very_near
  double lane_width = 3.5;           // lateral band half-width is lane_width / 2
  double side_range = 20.0;          // longitudinal reach of to_left_of / to_right_of
  double front_range = 30.0;         // longitudinal reach of in_front_of / behind
  double speed_margin = 0.5;         // approaching
  std::vector<int> lane_classes{object_class::lane};

  bool is_lane(int class_id) const noexcept;
};

/// Evaluates the geometric relation predicates over every ordered node pair.
/// Relations whose names the ontology does not define are skipped. Spatial
/// relations hold between non-lane entities; is_in links an entity to a lane
/// node. Output sorted by (src, rel, dst).
std::vector<Edge> infer_relations(std::span<const SceneNode> nodes,
                                  const RelationOntology& ontology,
                                  const RelationParams& params);

/// objects[0] is the ego. Throws HorizonError carrying the offending object
/// index, ShapeError for an empty list or a degenerate box.
SceneGraph build_scene_graph(std::span<const DetectedObject> objects, const Homography& h,
                             const RelationOntology& ontology, const RelationParams& params);

/// Assembles a graph from BEV-native nodes (skips IPM).
SceneGraph build_scene_graph(std::vector<SceneNode> nodes, const RelationOntology& ontology,
                             const RelationParams& params);

/// Throws ShapeError or OntologyMismatch when `g` breaks a graph invariant.
void validate_graph(const SceneGraph& g, const RelationOntology& ontology);

/// Human-readable dump used by the golden fixtures:
///   node <i> <f0> <f1> ...        (reals with %.6f)
///   edge <src> <relation-name> <dst>
std::string dump_graph(const SceneGraph& g, const RelationOntology& ontology);

}  // namespace gbsed

#endif  // GBSED_SCENE_GRAPH_HPP_
