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

// gbsed gen|encode|sweep|report
//
// Exit status: 0 success, 2 usage error, 3 data error, 4 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "gbsed/channel.hpp"
#include "gbsed/errors.hpp"
#include "gbsed/harness.hpp"
#include "gbsed/ontology.hpp"
#include "gbsed/scenarios.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gbsed::Error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

gbsed::RelationOntology load_ontology_or_default(const std::string& path) {
  return path.empty() ? gbsed::default_ontology() : gbsed::load_ontology_file(path);
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw gbsed::Error("cannot write " + path);
  out << contents;
}

struct GenOptions {
  gbsed::ScenarioSpec spec;
  std::string ontology;
  std::string out;
};

struct EncodeOptions {
  std::string scenes;
  std::string detections;
  std::string homography;
  std::string ontology;
  std::string out = "payloads";
};

struct SweepOptions {
  std::string scenes;
  std::string ontology;
  std::string snr = "0,2,4,6,8,10,12,14,16,18,20";
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::uint64_t scene_seed = 42;
  std::size_t sequences = 100;
  gbsed::ChannelKind channel = gbsed::ChannelKind::awgn64qam;
  double flip_prob = 0.0;
  gbsed::HeaderProtection protection = gbsed::HeaderProtection::protected_header;
  gbsed::RepairPolicy policy = gbsed::RepairPolicy::mode;
  std::size_t threads = 0;
  std::string out;
};

struct ReportOptions {
  std::string in;
  std::string out;
};

void add_scenario_flags(CLI::App* cmd, gbsed::ScenarioSpec& spec) {
  cmd->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  cmd->add_option("--sequences", spec.num_sequences, "Number of sequences")->capture_default_str();
  cmd->add_option("--frames", spec.frames_per_sequence, "Frames per sequence")->capture_default_str();
  cmd->add_option("--vehicles-min", spec.vehicles_min, "Fewest vehicles per scene")->capture_default_str();
  cmd->add_option("--vehicles-max", spec.vehicles_max, "Most vehicles per scene")->capture_default_str();
  cmd->add_option("--risky-fraction", spec.risky_fraction, "Share of risky sequences")->capture_default_str();
  cmd->add_option("--lanes", spec.lane_count, "Lane count")->capture_default_str();
  cmd->add_flag("!--no-lane-nodes", spec.lane_nodes, "Omit lane nodes from the graphs");
}

int cmd_gen(const GenOptions& o) {
  const auto ontology = load_ontology_or_default(o.ontology);
  const auto corpus = gbsed::generate(o.spec, ontology);
  emit(o.out, gbsed::write_scenes(corpus, ontology));
  return 0;
}

int cmd_encode(const EncodeOptions& o) {
  const auto ontology = load_ontology_or_default(o.ontology);
  std::vector<gbsed::GraphSequence> corpus;
  if (!o.detections.empty()) {
    if (o.homography.empty()) throw CLI::ValidationError("--detections requires --homography");
    const auto h = gbsed::parse_homography(slurp(o.homography));
    const auto scenes = gbsed::read_detections(slurp(o.detections));
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      try {
        corpus.push_back({{gbsed::build_scene_graph(scenes[s], h, ontology, {})}, std::nullopt});
      } catch (const gbsed::Error& e) {
        throw gbsed::Error("scene " + std::to_string(s) + ": " + e.what());
      }
    }
  } else if (!o.scenes.empty()) {
    corpus = gbsed::read_scenes_file(o.scenes, ontology);
  } else {
    throw CLI::ValidationError("encode needs --scenes or --detections");
  }

  const auto summary = gbsed::run_encode(corpus, ontology, o.out);
  std::printf("frames: %zu\n", summary.frames);
  std::printf("total encoded octets: %zu\n", summary.total_octets);
  std::printf("mean octets per frame: %.2f\n", summary.mean_octets);
  if (summary.ratio) {
    std::printf("compression ratio vs %llux%llu RGB: %.1f (reduction %.4f%%)\n",
                static_cast<unsigned long long>(gbsed::kRawFrameWidth),
                static_cast<unsigned long long>(gbsed::kRawFrameHeight), summary.ratio->ratio,
                summary.ratio->reduction_percent);
  } else {
    std::printf("compression ratio: n/a (no frames)\n");
  }
  return 0;
}

int cmd_sweep(const SweepOptions& o) {
  const auto ontology = load_ontology_or_default(o.ontology);
  std::vector<gbsed::GraphSequence> corpus;
  if (!o.scenes.empty()) {
    corpus = gbsed::read_scenes_file(o.scenes, ontology);
  } else {
    gbsed::ScenarioSpec spec;
    spec.seed = o.scene_seed;
    spec.num_sequences = o.sequences;
    corpus = gbsed::generate(spec, ontology);
  }

  gbsed::SweepConfig cfg;
  cfg.snr_points = gbsed::parse_snr_list(o.snr);
  cfg.trials_per_point = o.trials;
  cfg.base_seed = o.seed;
  cfg.link.kind = o.channel;
  cfg.link.bsc_flip_prob = o.flip_prob;
  cfg.link.protection = o.protection;
  cfg.policy = o.policy;
  cfg.threads = o.threads;
  const auto rows = gbsed::run_sweep(corpus, ontology, cfg);
  emit(o.out, gbsed::sweep_csv(rows));
  return 0;
}

int cmd_report(const ReportOptions& o) {
  const auto rows = gbsed::parse_sweep_csv(slurp(o.in));
  emit(o.out, gbsed::render_report(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene-graph semantic codec and noisy-link simulator"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic scene sequences");
  add_scenario_flags(gen_cmd, gen.spec);
  gen_cmd->add_option("--ontology", gen.ontology, "Ontology file (default: built-in)");
  gen_cmd->add_option("--out", gen.out, "Output .scenes file (default: stdout)");

  EncodeOptions enc;
  auto* enc_cmd = app.add_subcommand("encode", "Encode scenes into .gbsd payloads");
  enc_cmd->add_option("--scenes", enc.scenes, "Input .scenes file");
  enc_cmd->add_option("--detections", enc.detections, "Input detections file (IPM path)");
  enc_cmd->add_option("--homography", enc.homography, "Homography file: 9 reals");
  enc_cmd->add_option("--ontology", enc.ontology, "Ontology file (default: built-in)");
  enc_cmd->add_option("--out", enc.out, "Output directory")->capture_default_str();

  SweepOptions sw;
  const std::map<std::string, gbsed::ChannelKind> channels{
      {"awgn64qam", gbsed::ChannelKind::awgn64qam}, {"bsc", gbsed::ChannelKind::bsc}};
  const std::map<std::string, gbsed::HeaderProtection> protections{
      {"protected", gbsed::HeaderProtection::protected_header},
      {"unprotected", gbsed::HeaderProtection::unprotected_header}};
  const std::map<std::string, gbsed::RepairPolicy> policies{
      {"mode", gbsed::RepairPolicy::mode}, {"strict", gbsed::RepairPolicy::strict}};
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an SNR sweep and write CSV results");
  sweep_cmd->add_option("--scenes", sw.scenes, "Input .scenes file (default: generate)");
  sweep_cmd->add_option("--ontology", sw.ontology, "Ontology file (default: built-in)");
  sweep_cmd->add_option("--snr", sw.snr, "Comma-separated SNR points in dB; 'inf' = noiseless")
      ->capture_default_str();
  sweep_cmd->add_option("--trials", sw.trials, "Trials per SNR point")->capture_default_str();
  sweep_cmd->add_option("--seed", sw.seed, "Base seed for channel noise")->capture_default_str();
  sweep_cmd->add_option("--scene-seed", sw.scene_seed, "Generator seed when --scenes is absent")
      ->capture_default_str();
  sweep_cmd->add_option("--sequences", sw.sequences, "Generated sequences when --scenes is absent")
      ->capture_default_str();
  sweep_cmd->add_option("--channel", sw.channel, "awgn64qam | bsc")
      ->transform(CLI::CheckedTransformer(channels, CLI::ignore_case));
  sweep_cmd->add_option("--flip-prob", sw.flip_prob, "BSC flip probability")->capture_default_str();
  sweep_cmd->add_option("--header-protection", sw.protection, "protected | unprotected")
      ->transform(CLI::CheckedTransformer(protections, CLI::ignore_case));
  sweep_cmd->add_option("--policy", sw.policy, "Decompression repair policy: mode | strict")
      ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads (default: GBSED_THREADS or all cores)");
  sweep_cmd->add_option("--out", sw.out, "Output CSV (default: stdout)");

  ReportOptions rep;
  auto* report_cmd = app.add_subcommand("report", "Render a sweep CSV as text tables");
  report_cmd->add_option("--in,input", rep.in, "Sweep CSV")->required();
  report_cmd->add_option("--out", rep.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (enc_cmd->parsed()) return cmd_encode(enc);
    if (sweep_cmd->parsed()) return cmd_sweep(sw);
    if (report_cmd->parsed()) return cmd_report(rep);
  } catch (const CLI::Error& e) {
    std::cerr << "gbsed: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gbsed::Error& e) {
    std::cerr << "gbsed: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "gbsed: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
