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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gbsed/channel.hpp"
#include "gbsed/codec.hpp"
#include "gbsed/errors.hpp"
#include "gbsed/ontology.hpp"
#include "gbsed/scenarios.hpp"
#include "gbsed/scene_graph.hpp"
#include "gbsed/task.hpp"

namespace gbsed {
namespace {

const RelationOntology& onto() { return default_ontology(); }

SceneGraph frame_with(std::vector<Edge> edges, int other_class = object_class::car) {
  const auto lay = FeatureLayout::resolve(onto());
  SceneGraph g;
  g.nodes = {make_node(0, object_class::car, 0, 0, 20, lay),
             make_node(1, other_class, 0, 5, 20, lay),
             make_node(2, object_class::lane, 0, 0, 0, lay)};
  g.edges = std::move(edges);
  g.ontology_digest = ontology_digest(onto());
  return g;
}

const Edge kNearEgo{1, 1, 0};

TEST(Risk, NoNearEgoIsSafe) {
  GraphSequence s{{frame_with({}), frame_with({{0, 1, 1}}), frame_with({})}, {}};
  const auto v = assess_risk(s, onto());
  EXPECT_EQ(v.decision, Risk::safe);
  EXPECT_DOUBLE_EQ(v.score, 0.0);
}

TEST(Risk, TwoConsecutiveFramesFire) {
  GraphSequence s;
  for (int k = 0; k < 5; ++k)
    s.frames.push_back(k == 2 || k == 3 ? frame_with({kNearEgo}) : frame_with({}));
  const auto v = assess_risk(s, onto());
  EXPECT_EQ(v.decision, Risk::risky);
  EXPECT_DOUBLE_EQ(v.score, 0.4);
}

TEST(Risk, SingleFrameCannotFire) {
  GraphSequence s{{frame_with({kNearEgo})}, {}};
  const auto v = assess_risk(s, onto());
  EXPECT_EQ(v.decision, Risk::safe);
  EXPECT_DOUBLE_EQ(v.score, 1.0);
}

TEST(Risk, InterruptedRunDoesNotFire) {
  GraphSequence s{{frame_with({kNearEgo}), frame_with({}), frame_with({kNearEgo})}, {}};
  EXPECT_EQ(assess_risk(s, onto()).decision, Risk::safe);
  RiskParams one;
  one.window = 1;
  EXPECT_EQ(assess_risk(s, onto(), one).decision, Risk::risky);
}

TEST(Risk, OnlyVehiclesCount) {
  GraphSequence lane{{frame_with({{2, 1, 0}}), frame_with({{2, 1, 0}})}, {}};
  EXPECT_EQ(assess_risk(lane, onto()).decision, Risk::safe);
  GraphSequence truck{{frame_with({kNearEgo}, object_class::truck),
                       frame_with({kNearEgo}, object_class::truck)}, {}};
  EXPECT_EQ(assess_risk(truck, onto()).decision, Risk::risky);
  GraphSequence reversed{{frame_with({{0, 1, 1}}), frame_with({{0, 1, 1}})}, {}};
  EXPECT_EQ(assess_risk(reversed, onto()).decision, Risk::safe);
}

TEST(Risk, Errors) {
  EXPECT_THROW(assess_risk(GraphSequence{}, onto()), DegenerateInput);
  const auto no_near = load_ontology(
      "relation 1 behind\nattribute 0 class categorical\nattribute 1 bev_x length-meters\n"
      "attribute 2 bev_y length-meters\n");
  EXPECT_THROW(assess_risk(GraphSequence{{frame_with({})}, {}}, no_near), OntologyMismatch);
}

TEST(Consistency, IdenticalVerdicts) {
  std::vector<RiskVerdict> v{{Risk::risky, 0.5}, {Risk::safe, 0.0}, {Risk::safe, 0.1}};
  const auto r = task_consistency(v, v);
  EXPECT_DOUBLE_EQ(r.consistency, 1.0);
  EXPECT_EQ(r.counts.fp, 0u);
  EXPECT_EQ(r.counts.fn, 0u);
  EXPECT_DOUBLE_EQ(r.auc, 1.0);
}

TEST(Consistency, OneFlipInHundred) {
  std::vector<RiskVerdict> sent(100, {Risk::safe, 0.0});
  for (int k = 0; k < 30; ++k) sent[k] = {Risk::risky, 0.6};
  auto received = sent;
  received[50] = {Risk::risky, 0.6};
  const auto r = task_consistency(sent, received);
  EXPECT_DOUBLE_EQ(r.consistency, 0.99);
  EXPECT_EQ(r.counts.fp, 1u);
  EXPECT_EQ(r.counts.tp, 30u);
}

TEST(Consistency, SingleClassAucIsFlagged) {
  std::vector<RiskVerdict> v(4, {Risk::safe, 0.0});
  const auto r = task_consistency(v, v);
  EXPECT_TRUE(r.auc_degenerate);
  EXPECT_DOUBLE_EQ(r.consistency, 1.0);
}

TEST(Consistency, Errors) {
  EXPECT_THROW(task_consistency(std::vector<RiskVerdict>{}, std::vector<RiskVerdict>{}),
               DegenerateInput);
  EXPECT_THROW(task_consistency(std::vector<RiskVerdict>(2), std::vector<RiskVerdict>(3)),
               ShapeError);
}

// Recount oracle: the risk rule restated over decoded graphs, then the
// confusion cells tallied pair by pair.
bool oracle_risky(const GraphSequence& s) {
  int run = 0;
  for (const auto& f : s.frames) {
    bool hit = false;
    for (const auto& e : f.edges)
      if (e.rel == 1 && e.dst == 0 && e.src < f.nodes.size()) {
        // Categorical values decode to the nearest class code.
        const double cls = f.nodes[e.src].features[0];
        hit = hit || (std::isfinite(cls) && cls > -0.5 && cls < 3.5);
      }
    run = hit ? run + 1 : 0;
    if (run >= 2) return true;
  }
  return false;
}

TEST(Consistency, BscRecountOracle) {
  ScenarioSpec spec;
  spec.num_sequences = 500;
  spec.frames_per_sequence = 4;
  const auto sent = generate(spec, onto());
  std::vector<GraphSequence> received;
  std::uint64_t seed = 1000;
  for (const auto& seq : sent) {
    GraphSequence r;
    for (const auto& frame : seq.frames) {
      LinkConfig cfg;
      cfg.kind = ChannelKind::bsc;
      cfg.bsc_flip_prob = 0.01;
      cfg.seed = seed++;
      const auto rx = transmit(encode_graph(frame, onto()), cfg);
      try {
        r.frames.push_back(decode_payload(rx.received, onto()).graph);
      } catch (const WireError&) {
        r.frames.push_back(SceneGraph{{}, {}, ontology_digest(onto())});
      }
    }
    received.push_back(std::move(r));
  }
  const auto report = task_consistency(sent, received, onto());
  ConfusionCounts recount;
  for (std::size_t k = 0; k < sent.size(); ++k) {
    const bool t = oracle_risky(sent[k]);
    const bool p = oracle_risky(received[k]);
    recount.tp += t && p;
    recount.fp += !t && p;
    recount.tn += !t && !p;
    recount.fn += t && !p;
  }
  EXPECT_EQ(report.counts, recount);
  EXPECT_GT(recount.tp, 0u);
  EXPECT_LT(report.consistency, 1.0);
}

}  // namespace
}  // namespace gbsed
