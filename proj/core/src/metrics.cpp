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

#include "gbsed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gbsed/errors.hpp"

namespace gbsed {

namespace {

bool attribute_matches(AttributeKind kind, double sent, double received,
                       const NodeMatchTolerance& tol) {
  if (!std::isfinite(received)) return false;
  switch (kind) {
    case AttributeKind::categorical:
      return std::abs(received) < 1e9 && std::lround(sent) == std::lround(received);
    case AttributeKind::length_meters:
      return std::abs(received - sent) <= tol.position;
    case AttributeKind::speed_mps:
      return std::abs(received - sent) <= tol.speed;
  }
  return false;
}

}  // namespace

FidelityReport semantic_fidelity(const SceneGraph& sent, const SceneGraph& received,
                                 const RelationOntology& ontology,
                                 const NodeMatchTolerance& tol) {
  const auto digest = ontology_digest(ontology);
  if (sent.ontology_digest != digest || received.ontology_digest != digest)
    throw OntologyMismatch("graphs were not built against the same ontology");

  FidelityReport report;
  report.nodes_total = sent.nodes.size();
  report.edges_total = sent.edges.size();
  const auto& attributes = ontology.attributes();

  for (std::size_t i = 0; i < sent.nodes.size() && i < received.nodes.size(); ++i) {
    const auto& a = sent.nodes[i].features;
    const auto& b = received.nodes[i].features;
    if (a.size() != attributes.size() || b.size() != attributes.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < attributes.size() && ok; ++k)
      ok = attribute_matches(attributes[k].kind, a[k], b[k], tol);
    report.nodes_recovered += ok;
  }
  for (const auto& e : sent.edges) report.edges_recovered += received.contains(e);

  const std::size_t total = report.nodes_total + report.edges_total;
  report.fidelity =
      total == 0 ? 0.0
                 : static_cast<double>(report.nodes_recovered + report.edges_recovered) /
                       static_cast<double>(total);
  return report;
}

FidelityReport lost_transmission(const SceneGraph& sent) {
  FidelityReport report;
  report.nodes_total = sent.nodes.size();
  report.edges_total = sent.edges.size();
  return report;
}

CompressionRatio compression_ratio(double raw_octets, double encoded_octets) {
  if (!(encoded_octets > 0.0)) throw DegenerateInput("encoded size must be positive");
  if (!(raw_octets > 0.0)) throw DegenerateInput("raw size must be positive");
  return {raw_octets / encoded_octets, 100.0 * (1.0 - encoded_octets / raw_octets)};
}

std::uint64_t raw_frame_octets(std::uint64_t width, std::uint64_t height) noexcept {
  return width * height * 3;
}

double f1_score(double precision, double recall) noexcept {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

ClassificationMetrics classification_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw DegenerateInput("no classified samples");
  ClassificationMetrics m;
  const auto ratio = [&](double num, double den) {
    if (den == 0.0) {
      m.degenerate = true;
      return 0.0;
    }
    return num / den;
  };
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn);
  const double fn = static_cast<double>(c.fn);

  m.accuracy = (tp + tn) / static_cast<double>(c.total());
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  if (m.precision + m.recall == 0.0) m.degenerate = true;
  m.f1 = f1_score(m.precision, m.recall);
  m.mcc = ratio(tp * tn - fp * fn, std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)));
  return m;
}

double auc(std::span<const ScoredLabel> items) {
  std::vector<ScoredLabel> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredLabel& a, const ScoredLabel& b) { return a.score < b.score; });

  // Sum of midranks of the positives, ties sharing their average rank.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t start = 0; start < sorted.size();) {
    std::size_t end = start;
    while (end < sorted.size() && sorted[end].score == sorted[start].score) ++end;
    const double midrank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t k = start; k < end; ++k) {
      if (sorted[k].positive) {
        positive_rank_sum += midrank;
        ++positives;
      }
    }
    start = end;
  }
  const std::size_t negatives = sorted.size() - positives;
  if (positives == 0 || negatives == 0) throw DegenerateInput("AUC needs both classes");
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

}  // namespace gbsed
