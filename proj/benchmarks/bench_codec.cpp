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

#include <benchmark/benchmark.h>

#include "gbsed/codec.hpp"
#include "gbsed/ontology.hpp"
#include "gbsed/scenarios.hpp"

namespace {

const gbsed::SceneGraph& busiest_scene() {
  static const gbsed::SceneGraph scene = [] {
    gbsed::ScenarioSpec spec;
    spec.num_sequences = 20;
    const auto corpus = gbsed::generate(spec, gbsed::default_ontology());
    const gbsed::SceneGraph* best = &corpus[0].frames[0];
    for (const auto& seq : corpus)
      for (const auto& f : seq.frames)
        if (f.edges.size() > best->edges.size()) best = &f;
    return *best;
  }();
  return scene;
}

void BM_EncodeCompress(benchmark::State& state) {
  const auto& onto = gbsed::default_ontology();
  const auto& scene = busiest_scene();
  for (auto _ : state) benchmark::DoNotOptimize(gbsed::compress(gbsed::encode_tensor(scene, onto)));
}
BENCHMARK(BM_EncodeCompress);

void BM_Serialize(benchmark::State& state) {
  const auto& onto = gbsed::default_ontology();
  const auto& scene = busiest_scene();
  const auto c = gbsed::compress(gbsed::encode_tensor(scene, onto));
  const auto x = gbsed::feature_matrix(scene, onto.dimension());
  for (auto _ : state) benchmark::DoNotOptimize(gbsed::serialize(c, x, onto));
}
BENCHMARK(BM_Serialize);

void BM_DecodePayload(benchmark::State& state) {
  const auto& onto = gbsed::default_ontology();
  const auto payload = gbsed::encode_graph(busiest_scene(), onto);
  for (auto _ : state)
    benchmark::DoNotOptimize(gbsed::decode_payload(payload, onto, gbsed::RepairPolicy::mode));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * payload.size()));
}
BENCHMARK(BM_DecodePayload);

}  // namespace
