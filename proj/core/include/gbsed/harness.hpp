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

// End-to-end experiment driver behind the `gbsed` CLI: batch encoding,
// SNR sweeps, CSV results and text reports.

#ifndef GBSED_HARNESS_HPP_
#define GBSED_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbsed/channel.hpp"
#include "gbsed/codec.hpp"
#include "gbsed/metrics.hpp"
#include "gbsed/task.hpp"

namespace gbsed {

inline constexpr std::uint64_t kRawFrameWidth = 1280;
inline constexpr std::uint64_t kRawFrameHeight = 720;

struct EncodedFrame {
  std::size_t sequence = 0;
  std::size_t frame = 0;
  Payload payload;
};

struct EncodeSummary {
  std::size_t frames = 0;
  std::size_t total_octets = 0;
  double mean_octets = 0.0;
  /// Against kRawFrameWidth x kRawFrameHeight RGB frames; empty for 0 frames.
  std::optional<CompressionRatio> ratio;
};

std::vector<EncodedFrame> encode_corpus(std::span<const GraphSequence> corpus,
                                        const RelationOntology& ontology);
EncodeSummary summarize(std::span<const EncodedFrame> frames);

/// Writes seq<S>_frame<K>.gbsd files into `out_dir` (created if needed).
EncodeSummary run_encode(std::span<const GraphSequence> corpus, const RelationOntology& ontology,
                         const std::string& out_dir);

struct SweepConfig {
  std::vector<double> snr_points{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  std::size_t trials_per_point = 1000;
  std::uint64_t base_seed = 1;
  /// snr_db and seed are overwritten per point and trial.
  LinkConfig link;
  RepairPolicy policy = RepairPolicy::mode;
  NodeMatchTolerance tolerance;
  RiskParams risk;
  FrameGrid grid;
  /// 0 means the hardware concurrency. GBSED_THREADS caps either value.
  std::size_t threads = 0;
};

struct SweepRow {
  double snr_db = 0.0;
  double ber = 0.0;
  double fidelity = 0.0;
  double consistency = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  double auc = 0.0;
  double mean_payload_octets = 0.0;
  double frames_per_payload = 0.0;
};

/// Seed of trial `trial` at sweep point `point`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t point, std::size_t trial) noexcept;

/// Each trial transmits every frame of sequence (trial mod corpus size).
/// Output depends only on the inputs, never on the thread count.
std::vector<SweepRow> run_sweep(std::span<const GraphSequence> corpus,
                                const RelationOntology& ontology, const SweepConfig& cfg);

std::size_t resolve_thread_count(std::size_t requested);

inline constexpr std::string_view kSweepCsvHeader =
    "snr_db,ber,fidelity,consistency,accuracy,precision,recall,f1,mcc,auc,"
    "mean_payload_octets,frames_per_payload";

std::string sweep_csv(std::span<const SweepRow> rows);
/// Throws ParseError on a malformed row. Empty text yields no rows.
std::vector<SweepRow> parse_sweep_csv(std::string_view text);

/// Aligned text rendering: a size / CR / reduction table against raw
/// frames followed by the per-SNR rows. "no rows" for an empty input.
std::string render_report(std::span<const SweepRow> rows);

std::vector<double> parse_snr_list(std::string_view text);

}  // namespace gbsed

#endif  // GBSED_HARNESS_HPP_
