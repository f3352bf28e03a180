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

// Synthetic multi-lane traffic sequences and the `.scenes` text format.
//
// .scenes grammar, one record per line, '\n' terminated:
//   # comment
//   seq <id> label <risky|safe>
//   seq <id> frame <k> | <node> <node> ... | <edge> <edge> ...
// where node = idx:class:x:y:speed (reals with six decimals) and
// edge = src:rel:dst (rel is a relation id, never 0).
//
// Detection files feed the IPM path instead:
//   scene <id> | class:u1:v1:u2:v2:speed ...

#ifndef GBSED_SCENARIOS_HPP_
#define GBSED_SCENARIOS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gbsed/ontology.hpp"
#include "gbsed/scene_graph.hpp"
#include "gbsed/task.hpp"

namespace gbsed {

struct ScenarioSpec {
  std::uint64_t seed = 42;
  std::size_t num_sequences = 100;
  std::size_t frames_per_sequence = 10;
  std::size_t vehicles_min = 2;
  std::size_t vehicles_max = 8;
  double risky_fraction = 0.3;
  std::size_t lane_count = 3;
  /// Emit one node per lane so is_in relations have a target.
  bool lane_nodes = true;
  /// Consecutive close frames forced into risky sequences; match the risk
  /// rule's window.
  std::size_t risk_window = 2;
  double frame_interval = 0.5;     // seconds between frames
  double road_half_length = 60.0;  // vehicles spawn in [-L, L] meters
  double slot_length = 10.0;       // minimum same-lane spacing
  double max_relative_speed = 2.0; // |lane speed - ego speed| bound, m/s
};

/// Features are placed on a 1/64 grid so that every value survives both
/// the 32-bit wire format and the six-decimal text format exactly.
inline constexpr double kFeatureQuantum = 1.0 / 64.0;

/// Sequence k is drawn from splitmix64(spec.seed ^ k). Throws SpecError when
/// the spec is inconsistent or the vehicles do not fit the lanes.
std::vector<GraphSequence> generate(const ScenarioSpec& spec, const RelationOntology& ontology,
                                    const RelationParams& params = {});

std::string write_scenes(const std::vector<GraphSequence>& sequences,
                         const RelationOntology& ontology);
void write_scenes_file(const std::string& path, const std::vector<GraphSequence>& sequences,
                       const RelationOntology& ontology);

/// Throws ParseError carrying the offending line number.
std::vector<GraphSequence> read_scenes(std::string_view text, const RelationOntology& ontology);
std::vector<GraphSequence> read_scenes_file(const std::string& path,
                                            const RelationOntology& ontology);

std::vector<std::vector<DetectedObject>> read_detections(std::string_view text);

}  // namespace gbsed

#endif  // GBSED_SCENARIOS_HPP_
