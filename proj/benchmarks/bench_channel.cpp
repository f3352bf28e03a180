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

#include "gbsed/channel.hpp"
#include "gbsed/random.hpp"

namespace {

gbsed::Payload random_payload(std::size_t size) {
  gbsed::SplitMix64 rng(5);
  gbsed::Payload p(size);
  for (auto& b : p) b = static_cast<std::uint8_t>(rng.next());
  return p;
}

void BM_TransmitAwgn(benchmark::State& state) {
  const auto payload = random_payload(static_cast<std::size_t>(state.range(0)));
  gbsed::LinkConfig link;
  link.snr_db = 12.0;
  for (auto _ : state) {
    link.seed++;
    benchmark::DoNotOptimize(gbsed::transmit(payload, link));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * payload.size()));
}
BENCHMARK(BM_TransmitAwgn)->Arg(128)->Arg(1024)->Arg(8192);

void BM_TransmitBsc(benchmark::State& state) {
  const auto payload = random_payload(static_cast<std::size_t>(state.range(0)));
  gbsed::LinkConfig link;
  link.kind = gbsed::ChannelKind::bsc;
  link.bsc_flip_prob = 0.01;
  for (auto _ : state) {
    link.seed++;
    benchmark::DoNotOptimize(gbsed::transmit(payload, link));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * payload.size()));
}
BENCHMARK(BM_TransmitBsc)->Arg(1024);

}  // namespace
