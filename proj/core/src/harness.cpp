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

#include "gbsed/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "gbsed/errors.hpp"
#include "gbsed/random.hpp"
#include "text.hpp"

namespace gbsed {

namespace {

struct TrialResult {
  double fidelity_sum = 0.0;
  std::size_t frames = 0;
  std::size_t bit_errors = 0;
  std::size_t bits = 0;
  std::size_t payload_octets = 0;
  std::size_t frames_required = 0;
  RiskVerdict verdict;
};

/// Runs job(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any job is rethrown on the caller's thread.
template <typename Job>
void parallel_for(std::size_t count, std::size_t threads, Job&& job) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string snr_text(double snr) { return snr == kNoiseless ? "inf" : fmt("%.6f", snr); }

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::vector<EncodedFrame> encode_corpus(std::span<const GraphSequence> corpus,
                                        const RelationOntology& ontology) {
  std::vector<EncodedFrame> out;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    for (std::size_t k = 0; k < corpus[s].frames.size(); ++k) {
      try {
        out.push_back({s, k, encode_graph(corpus[s].frames[k], ontology)});
      } catch (const Error& e) {
        throw Error("sequence " + std::to_string(s) + " frame " + std::to_string(k) + ": " +
                    e.what());
      }
    }
  }
  return out;
}

EncodeSummary summarize(std::span<const EncodedFrame> frames) {
  EncodeSummary summary;
  summary.frames = frames.size();
  for (const auto& f : frames) summary.total_octets += f.payload.size();
  if (summary.frames > 0) {
    summary.mean_octets =
        static_cast<double>(summary.total_octets) / static_cast<double>(summary.frames);
    const double raw = static_cast<double>(raw_frame_octets(kRawFrameWidth, kRawFrameHeight)) *
                       static_cast<double>(summary.frames);
    summary.ratio = compression_ratio(raw, static_cast<double>(summary.total_octets));
  }
  return summary;
}

EncodeSummary run_encode(std::span<const GraphSequence> corpus, const RelationOntology& ontology,
                         const std::string& out_dir) {
  const auto frames = encode_corpus(corpus, ontology);
  std::filesystem::create_directories(out_dir);
  for (const auto& f : frames) {
    const auto name = "seq" + std::to_string(f.sequence) + "_frame" + std::to_string(f.frame) + ".gbsd";
    const auto path = (std::filesystem::path(out_dir) / name).string();
    text::write_file(path, std::string_view(reinterpret_cast<const char*>(f.payload.data()),
                                            f.payload.size()));
  }
  return summarize(frames);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t point, std::size_t trial) noexcept {
  return base_seed ^ (static_cast<std::uint64_t>(point) << 32) ^ static_cast<std::uint64_t>(trial);
}

std::size_t resolve_thread_count(std::size_t requested) {
  std::size_t count = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GBSED_THREADS")) {
    const auto cap = text::parse_int<std::size_t>(text::trim(env));
    if (cap && *cap > 0) count = std::min(count, *cap);
  }
  return count;
}

std::vector<SweepRow> run_sweep(std::span<const GraphSequence> corpus,
                                const RelationOntology& ontology, const SweepConfig& cfg) {
  if (cfg.snr_points.empty()) throw SpecError("sweep needs at least one SNR point");
  if (cfg.trials_per_point == 0) throw SpecError("sweep needs at least one trial per point");
  if (corpus.empty()) throw SpecError("sweep needs a nonempty corpus");
  cfg.link.validate();

  // Payloads and ground-truth verdicts do not depend on the channel.
  std::vector<std::vector<Payload>> payloads(corpus.size());
  std::vector<RiskVerdict> sent_verdicts;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    for (const auto& frame : corpus[s].frames) payloads[s].push_back(encode_graph(frame, ontology));
    sent_verdicts.push_back(assess_risk(corpus[s], ontology, cfg.risk));
  }
  const auto digest = ontology_digest(ontology);
  const std::size_t threads = resolve_thread_count(cfg.threads);

  std::vector<SweepRow> rows;
  for (std::size_t point = 0; point < cfg.snr_points.size(); ++point) {
    std::vector<TrialResult> results(cfg.trials_per_point);
    parallel_for(cfg.trials_per_point, threads, [&](std::size_t trial) {
      const std::size_t s = trial % corpus.size();
      SplitMix64 frame_seeds(trial_seed(cfg.base_seed, point, trial));
      LinkConfig link = cfg.link;
      link.snr_db = cfg.snr_points[point];

      TrialResult& r = results[trial];
      GraphSequence received;
      for (std::size_t k = 0; k < corpus[s].frames.size(); ++k) {
        const auto& sent = corpus[s].frames[k];
        const auto& payload = payloads[s][k];
        link.seed = frame_seeds.next();
        const auto tx = transmit(payload, link);
        const std::size_t bypass =
            link.protection == HeaderProtection::protected_header ? std::min(kHeaderSize, payload.size()) : 0;
        r.bit_errors += tx.bit_errors;
        r.bits += 8 * (payload.size() - bypass);
        r.payload_octets += payload.size();
        r.frames_required += frames_required(payload.size(), cfg.grid);
        ++r.frames;
        try {
          auto decoded = decode_payload(tx.received, ontology, cfg.policy);
          r.fidelity_sum += semantic_fidelity(sent, decoded.graph, ontology, cfg.tolerance).fidelity;
          received.frames.push_back(std::move(decoded.graph));
        } catch (const WireError&) {
          r.fidelity_sum += lost_transmission(sent).fidelity;
          SceneGraph lost;
          lost.ontology_digest = digest;
          received.frames.push_back(std::move(lost));
        } catch (const DecodeError&) {
          r.fidelity_sum += lost_transmission(sent).fidelity;
          SceneGraph lost;
          lost.ontology_digest = digest;
          received.frames.push_back(std::move(lost));
        }
      }
      r.verdict = assess_risk(received, ontology, cfg.risk);
    });

    // Aggregate in trial order so the result is independent of scheduling.
    double fidelity_sum = 0.0;
    std::size_t frames = 0, bit_errors = 0, bits = 0, octets = 0, grid_frames = 0;
    std::vector<RiskVerdict> truth, predicted;
    for (std::size_t trial = 0; trial < results.size(); ++trial) {
      const auto& r = results[trial];
      fidelity_sum += r.fidelity_sum;
      frames += r.frames;
      bit_errors += r.bit_errors;
      bits += r.bits;
      octets += r.payload_octets;
      grid_frames += r.frames_required;
      truth.push_back(sent_verdicts[trial % corpus.size()]);
      predicted.push_back(r.verdict);
    }
    const auto task = task_consistency(std::move(truth), std::move(predicted));
    const auto cls = classification_metrics(task.counts);

    SweepRow row;
    row.snr_db = cfg.snr_points[point];
    row.ber = bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0;
    row.fidelity = frames ? fidelity_sum / static_cast<double>(frames) : 0.0;
    row.consistency = task.consistency;
    row.accuracy = cls.accuracy;
    row.precision = cls.precision;
    row.recall = cls.recall;
    row.f1 = cls.f1;
    row.mcc = cls.mcc;
    row.auc = task.auc;
    row.mean_payload_octets = frames ? static_cast<double>(octets) / static_cast<double>(frames) : 0.0;
    row.frames_per_payload = frames ? static_cast<double>(grid_frames) / static_cast<double>(frames) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += snr_text(r.snr_db);
    for (const double v : {r.ber, r.fidelity, r.consistency, r.accuracy, r.precision, r.recall,
                           r.f1, r.mcc, r.auc, r.mean_payload_octets, r.frames_per_payload})
      out += "," + fmt("%.6f", v);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view body) {
  std::vector<SweepRow> rows;
  bool header_seen = false;
  for (const auto& line : text::split_lines(body)) {
    const auto trimmed = text::trim(line.text);
    if (trimmed.empty()) continue;
    if (!header_seen) {
      if (trimmed != kSweepCsvHeader) throw ParseError("unexpected CSV header", line.number);
      header_seen = true;
      continue;
    }
    const auto fields = text::split(trimmed, ',');
    if (fields.size() != 12) throw ParseError("expected 12 columns", line.number);
    std::array<double, 12> v{};
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto parsed = text::parse_double(text::trim(fields[k]));
      if (!parsed) throw ParseError("bad number '" + std::string(fields[k]) + "'", line.number);
      v[k] = *parsed;
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]});
  }
  return rows;
}

std::string render_report(std::span<const SweepRow> rows) {
  if (rows.empty()) return "no rows\n";
  std::string out;
  const double raw = static_cast<double>(raw_frame_octets(kRawFrameWidth, kRawFrameHeight));
  const double encoded = rows.front().mean_payload_octets;

  out += "Compression against raw 1280x720 RGB frames\n";
  out += "Method               Size/frame (octets)     MB/frame    MiB/frame           CR   Reduction (%)\n";
  const auto size_row = [&](const char* method, double size) {
    const auto cr = compression_ratio(raw, size);
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%-20s %20.1f %12.6f %12.6f %12.1f %15.2f\n", method, size,
                  size / 1e6, size / 1048576.0, cr.ratio, cr.reduction_percent);
    out += buf;
  };
  size_row("Raw RGB (24 bits)", raw);
  if (encoded > 0.0) size_row("GBSED", encoded);
  out += '\n';

  const char* columns[] = {"SNR(dB)", "BER", "fidelity", "consist", "accuracy", "precision",
                           "recall", "F1", "MCC", "AUC", "frames"};
  for (const auto* c : columns) out += pad_left(c, 10);
  out += '\n';
  for (const auto& r : rows) {
    out += pad_left(r.snr_db == kNoiseless ? "inf" : fmt("%.1f", r.snr_db), 10);
    for (const double v : {r.ber, r.fidelity, r.consistency, r.accuracy, r.precision, r.recall,
                           r.f1, r.mcc, r.auc})
      out += pad_left(fmt("%.4f", v), 10);
    out += pad_left(fmt("%.2f", r.frames_per_payload), 10);
    out += '\n';
  }
  return out;
}

std::vector<double> parse_snr_list(std::string_view body) {
  std::vector<double> out;
  for (const auto field : text::split(body, ',')) {
    const auto t = text::trim(field);
    if (t == "inf" || t == "noiseless") {
      out.push_back(kNoiseless);
      continue;
    }
    const auto v = text::parse_double(t);
    if (!v || !std::isfinite(*v)) throw SpecError("bad SNR value '" + std::string(t) + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw SpecError("empty SNR list");
  return out;
}

}  // namespace gbsed
