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

#include "gbsed/task.hpp"

#include <algorithm>

#include "gbsed/errors.hpp"

namespace gbsed {

std::string_view to_string(Risk r) noexcept { return r == Risk::risky ? "risky" : "safe"; }

RiskVerdict assess_risk(const GraphSequence& s, const RelationOntology& ontology,
                        const RiskParams& params) {
  if (s.frames.empty()) throw DegenerateInput("empty graph sequence");
  const auto is_near = ontology.find_relation("is_near");
  if (!is_near) throw OntologyMismatch("ontology has no is_near relation");
  const auto layout = FeatureLayout::resolve(ontology);
  const auto is_vehicle = [&](int cls) {
    return std::find(params.vehicle_classes.begin(), params.vehicle_classes.end(), cls) !=
           params.vehicle_classes.end();
  };

  std::size_t qualifying = 0;
  std::size_t run = 0;
  bool fired = false;
  for (const auto& frame : s.frames) {
    const bool hit = std::any_of(frame.edges.begin(), frame.edges.end(), [&](const Edge& e) {
      return e.rel == *is_near && e.dst == 0 && e.src < frame.nodes.size() &&
             is_vehicle(layout.class_of(frame.nodes[e.src]));
    });
    qualifying += hit;
    run = hit ? run + 1 : 0;
    if (params.window > 0 && run >= params.window) fired = true;
  }
  return {fired ? Risk::risky : Risk::safe,
          static_cast<double>(qualifying) / static_cast<double>(s.frames.size())};
}

ConsistencyReport task_consistency(std::vector<RiskVerdict> sent,
                                   std::vector<RiskVerdict> received) {
  if (sent.size() != received.size()) throw ShapeError("sent/received sequence counts differ");
  if (sent.empty()) throw DegenerateInput("no sequence pairs");

  ConsistencyReport report;
  std::size_t agree = 0;
  std::vector<ScoredLabel> scored;
  scored.reserve(sent.size());
  for (std::size_t k = 0; k < sent.size(); ++k) {
    const bool truth = sent[k].decision == Risk::risky;
    const bool predicted = received[k].decision == Risk::risky;
    agree += truth == predicted;
    if (truth && predicted) ++report.counts.tp;
    if (!truth && predicted) ++report.counts.fp;
    if (!truth && !predicted) ++report.counts.tn;
    if (truth && !predicted) ++report.counts.fn;
    scored.push_back({received[k].score, truth});
  }
  report.consistency = static_cast<double>(agree) / static_cast<double>(sent.size());
  try {
    report.auc = auc(scored);
  } catch (const DegenerateInput&) {
    report.auc = 0.0;
    report.auc_degenerate = true;
  }
  report.sent = std::move(sent);
  report.received = std::move(received);
  return report;
}

ConsistencyReport task_consistency(std::span<const GraphSequence> sent,
                                   std::span<const GraphSequence> received,
                                   const RelationOntology& ontology, const RiskParams& params) {
  if (sent.size() != received.size()) throw ShapeError("sent/received sequence counts differ");
  std::vector<RiskVerdict> sent_verdicts;
  std::vector<RiskVerdict> received_verdicts;
  for (std::size_t k = 0; k < sent.size(); ++k) {
    sent_verdicts.push_back(assess_risk(sent[k], ontology, params));
    received_verdicts.push_back(assess_risk(received[k], ontology, params));
  }
  return task_consistency(std::move(sent_verdicts), std::move(received_verdicts));
}

}  // namespace gbsed
