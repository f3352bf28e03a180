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

// Rule-based risk assessment over scene-graph sequences and the
// sent-vs-received consistency evaluation built on it.

#ifndef GBSED_TASK_HPP_
#define GBSED_TASK_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gbsed/metrics.hpp"
#include "gbsed/ontology.hpp"
#include "gbsed/scene_graph.hpp"

namespace gbsed {

enum class Risk { safe, risky };

std::string_view to_string(Risk r) noexcept;

struct GraphSequence {
  std::vector<SceneGraph> frames;
  std::optional<Risk> label;
  friend bool operator==(const GraphSequence&, const GraphSequence&) = default;
};

struct RiskVerdict {
  Risk decision = Risk::safe;
  /// Fraction of frames holding a qualifying (vehicle, is_near, ego) triplet.
  double score = 0.0;
};

struct RiskParams {
  /// Consecutive qualifying frames needed to call a sequence risky.
  std::size_t window = 2;
  std::vector<int> vehicle_classes{object_class::car, object_class::truck, object_class::bus,
                                   object_class::motorcycle};
};

/// A frame qualifies when it holds (v, is_near, 0) for a node v whose class
/// is in `vehicle_classes`. Throws DegenerateInput on an empty sequence and
/// OntologyMismatch when the ontology has no is_near relation.
RiskVerdict assess_risk(const GraphSequence& s, const RelationOntology& ontology,
                        const RiskParams& params = {});

struct ConsistencyReport {
  ConfusionCounts counts;  // sent verdict is truth, received verdict is prediction
  double consistency = 0.0;
  double auc = 0.0;        // received scores against sent decisions
  bool auc_degenerate = false;
  std::vector<RiskVerdict> sent;
  std::vector<RiskVerdict> received;
};

/// Throws ShapeError when the two lists differ in length, DegenerateInput
/// when they are empty.
ConsistencyReport task_consistency(std::span<const GraphSequence> sent,
                                   std::span<const GraphSequence> received,
                                   const RelationOntology& ontology,
                                   const RiskParams& params = {});

/// Same evaluation from verdicts computed elsewhere.
ConsistencyReport task_consistency(std::vector<RiskVerdict> sent,
                                   std::vector<RiskVerdict> received);

}  // namespace gbsed

#endif  // GBSED_TASK_HPP_
