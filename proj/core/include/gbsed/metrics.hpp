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

#ifndef GBSED_METRICS_HPP_
#define GBSED_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

#include "gbsed/ontology.hpp"
#include "gbsed/scene_graph.hpp"

namespace gbsed {

struct NodeMatchTolerance {
  double position = 0.1;  // meters, applies to length-meters attributes
  double speed = 0.1;     // m/s, applies to speed-mps attributes
};

struct FidelityReport {
  std::size_t nodes_total = 0;
  std::size_t nodes_recovered = 0;
  std::size_t edges_total = 0;
  std::size_t edges_recovered = 0;
  double fidelity = 0.0;
};

/// Fraction of transmitted entities (nodes plus triplets) recovered at the
/// receiver, weighting nodes and edges equally. Nodes correspond by index;
/// a node is recovered when its class rounds to the sent class and every
/// metric attribute lies within tolerance. Throws OntologyMismatch when the
/// two graphs were built against different ontologies.
FidelityReport semantic_fidelity(const SceneGraph& sent, const SceneGraph& received,
                                 const RelationOntology& ontology,
                                 const NodeMatchTolerance& tol = {});

/// Report for a transmission whose payload could not be parsed: nothing
/// recovered, fidelity 0.
FidelityReport lost_transmission(const SceneGraph& sent);

struct CompressionRatio {
  double ratio = 0.0;
  double reduction_percent = 0.0;
};

/// Throws DegenerateInput unless both sizes are positive.
CompressionRatio compression_ratio(double raw_octets, double encoded_octets);

/// Uncompressed 24-bit RGB frame size.
std::uint64_t raw_frame_octets(std::uint64_t width, std::uint64_t height) noexcept;

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct ClassificationMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  /// Set when any denominator was zero and the affected metric reported 0.
  bool degenerate = false;
};

/// Throws DegenerateInput on all-zero counts.
ClassificationMetrics classification_metrics(const ConfusionCounts& c);

/// Harmonic mean, 0 when both are 0.
double f1_score(double precision, double recall) noexcept;

struct ScoredLabel {
  double score = 0.0;
  bool positive = false;
};

/// Mann-Whitney AUC: probability a random positive outscores a random
/// negative, ties counted half. O(n log n). Throws DegenerateInput when only
/// one class is present.
double auc(std::span<const ScoredLabel> items);

}  // namespace gbsed

#endif  // GBSED_METRICS_HPP_
