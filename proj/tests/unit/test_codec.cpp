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

#include <algorithm>
#include <array>
#include <cstring>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "gbsed/codec.hpp"
#include "gbsed/errors.hpp"
#include "gbsed/ontology.hpp"
#include "gbsed/random.hpp"
#include "gbsed/scenarios.hpp"
#include "gbsed/scene_graph.hpp"
#include "test_paths.hpp"

namespace gbsed {
namespace {

const RelationOntology& onto() { return default_ontology(); }

RelationOntology small_ontology(int relations, int attributes) {
  std::string text;
  for (int r = 1; r <= relations; ++r) text += "relation " + std::to_string(r) + " r" + std::to_string(r) + "\n";
  const char* names[] = {"class", "bev_x", "bev_y", "speed"};
  const char* kinds[] = {"categorical", "length-meters", "length-meters", "speed-mps"};
  for (int a = 0; a < attributes; ++a)
    text += "attribute " + std::to_string(a) + " " + names[a] + " " + kinds[a] + "\n";
  return load_ontology(text);
}

SceneGraph bare_graph(std::size_t n, std::size_t d, std::vector<Edge> edges,
                      const RelationOntology& o) {
  SceneGraph g;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({static_cast<std::uint16_t>(i), std::vector<double>(d, 0.0)});
  std::sort(edges.begin(), edges.end());
  g.edges = std::move(edges);
  g.ontology_digest = ontology_digest(o);
  return g;
}

SceneGraph random_graph(SplitMix64& rng, std::size_t n, const RelationOntology& o,
                        double density) {
  std::set<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t r = 1; r <= o.num_relations(); ++r)
        if (i != j && rng.uniform() < density)
          edges.insert({static_cast<std::uint16_t>(i), static_cast<RelationId>(r),
                        static_cast<std::uint16_t>(j)});
  auto g = bare_graph(n, o.dimension(), {edges.begin(), edges.end()}, o);
  for (auto& node : g.nodes)
    for (auto& f : node.features) f = static_cast<float>(rng.uniform() * 200 - 100);
  return g;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  EXPECT_NE(fp, nullptr) << path;
  std::vector<std::uint8_t> out;
  if (!fp) return out;
  int c;
  while ((c = std::fgetc(fp)) != EOF) out.push_back(static_cast<std::uint8_t>(c));
  std::fclose(fp);
  return out;
}

// --- encode_tensor ----------------------------------------------------------

TEST(EncodeTensor, EdgelessGraphGivesZeroSlices) {
  const auto o = small_ontology(2, 1);
  const auto t = encode_tensor(bare_graph(3, 1, {}, o), o);
  EXPECT_EQ(t.n, 3u);
  EXPECT_EQ(t.num_relations, 2u);
  EXPECT_EQ(t.cells, std::vector<std::uint8_t>(18, 0));
}

TEST(EncodeTensor, EntriesCarryRelationId) {
  const auto o = small_ontology(2, 1);
  const auto t = encode_tensor(bare_graph(2, 1, {{0, 1, 1}, {1, 2, 0}}, o), o);
  EXPECT_EQ(t.at(1, 0, 1), 1);
  EXPECT_EQ(t.at(2, 1, 0), 2);
  EXPECT_EQ(std::count(t.cells.begin(), t.cells.end(), 0), 6);
}

TEST(EncodeTensor, CoordinateSetEqualsEdgeSetSeed11) {
  SplitMix64 rng(11);
  const auto g = random_graph(rng, 9, onto(), 0.08);
  const auto t = encode_tensor(g, onto());
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> coords, from_edges;
  for (std::size_t r = 1; r <= t.num_relations; ++r)
    for (std::size_t i = 0; i < t.n; ++i)
      for (std::size_t j = 0; j < t.n; ++j)
        if (t.cells[(r - 1) * t.n * t.n + i * t.n + j] != 0) {
          EXPECT_EQ(t.cells[(r - 1) * t.n * t.n + i * t.n + j], r);
          coords.insert({i, j, r});
        }
  for (const auto& e : g.edges) from_edges.insert({e.src, e.dst, e.rel});
  EXPECT_FALSE(coords.empty());
  EXPECT_EQ(coords, from_edges);
}

TEST(EncodeTensor, RejectsForeignEdges) {
  const auto o = small_ontology(2, 1);
  EXPECT_THROW(encode_tensor(bare_graph(2, 1, {{0, 3, 1}}, o), o), OntologyMismatch);
  EXPECT_THROW(encode_tensor(bare_graph(2, 1, {{0, 1, 5}}, o), o), ShapeError);
}

// --- compress ---------------------------------------------------------------

TEST(Compress, AllZeroRetainsNothing) {
  EXPECT_TRUE(compress(AdjacencyTensor(4, 8)).retained.empty());
}

TEST(Compress, EverySliceNonzeroRetainsAll) {
  AdjacencyTensor t(3, 5);
  for (std::size_t r = 1; r <= 5; ++r) t.at(r, 0, 1) = static_cast<std::uint8_t>(r);
  const auto c = compress(t);
  ASSERT_EQ(c.retained.size(), 5u);
  for (std::size_t r = 1; r <= 5; ++r) EXPECT_EQ(c.retained[r - 1][1], r);
}

TEST(Compress, ActiveSubsetInOrder) {
  AdjacencyTensor t(4, 8);
  t.at(1, 0, 1) = 1;
  t.at(3, 2, 3) = 3;
  t.at(7, 3, 0) = 7;
  const auto c = compress(t);
  ASSERT_EQ(c.retained.size(), 3u);
  std::vector<int> ids;
  for (const auto& m : c.retained)
    ids.push_back(*std::max_element(m.begin(), m.end()));
  EXPECT_EQ(ids, (std::vector<int>{1, 3, 7}));
  const double reduction = 1.0 - static_cast<double>(c.retained.size()) / 8.0;
  EXPECT_DOUBLE_EQ(reduction, 0.625);
}

// --- decompress -------------------------------------------------------------

TEST(Decompress, EmptyInputGivesZeroTensor) {
  const auto res = decompress(CompressedTensor{4, 5, {}});
  EXPECT_EQ(res.tensor, BinaryTensor(4, 5));
  EXPECT_TRUE(res.warnings.empty());
}

TEST(Decompress, InvertsCompressOnCleanTensors) {
  SplitMix64 rng(21);
  for (int k = 0; k < 200; ++k) {
    const auto g = random_graph(rng, static_cast<std::size_t>(rng.uniform_int(1, 8)), onto(), 0.05);
    const auto t = encode_tensor(g, onto());
    const auto res = decompress(compress(t), RepairPolicy::strict);
    ASSERT_EQ(res.tensor, binarize(t));
    ASSERT_TRUE(res.warnings.empty());
  }
}

TEST(Decompress, ModeDiscardsOutOfRange) {
  CompressedTensor c{3, 8, {{0, 3, 3, 3, 0, 200, 0, 0, 0}}};
  const auto res = decompress(c, RepairPolicy::mode);
  EXPECT_EQ(res.warnings.size(), 1u);
  BinaryTensor expected(3, 8);
  expected.at(3, 0, 1) = expected.at(3, 0, 2) = expected.at(3, 1, 0) = 1;
  EXPECT_EQ(res.tensor, expected);
  EXPECT_THROW(decompress(c, RepairPolicy::strict), DecodeError);
}

TEST(Decompress, TiesGoToSmallestId) {
  CompressedTensor c{2, 8, {{0, 5, 2, 0}}};
  const auto res = decompress(c);
  EXPECT_EQ(res.tensor.at(2, 1, 0), 1);
  EXPECT_EQ(res.tensor.at(5, 0, 1), 0);
}

TEST(Decompress, DropsUnusableMatricesAndWarnsOnOverwrite) {
  CompressedTensor c{2, 3, {{9, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}}};
  const auto res = decompress(c);
  EXPECT_EQ(res.warnings.size(), 2u);  // one drop, one overwrite
  EXPECT_EQ(res.tensor.at(2, 1, 0), 1);
  EXPECT_EQ(res.tensor.at(2, 0, 1), 0);
  EXPECT_THROW(decompress(CompressedTensor{2, 3, {{0, 0, 0, 0}}}, RepairPolicy::strict),
               DecodeError);
  EXPECT_THROW(decompress(CompressedTensor{2, 3, {{0, 1}}}), ShapeError);
}

// Oracle for the repair rule, written from its statement: pick the most
// frequent in-range off-diagonal value (smallest on ties); keep its cells.
struct RepairOutcome {
  int relation = 0;  // 0: dropped
  std::vector<int> cells;
  bool warned = false;
};

RepairOutcome repair_oracle(const std::vector<int>& m, int n, int num_relations) {
  std::map<int, int> freq;
  bool stray = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int v = m[i * n + j];
      if (v == 0) continue;
      if (i == j || v > num_relations) stray = true;
      else freq[v]++;
    }
  RepairOutcome out;
  int best = -1;
  for (const auto& [value, count] : freq)
    if (count > best) best = count, out.relation = value;
  out.warned = stray || freq.size() != 1;
  out.cells.assign(n * n, 0);
  if (out.relation)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.cells[i * n + j] = i != j && m[i * n + j] == out.relation;
  return out;
}

TEST(Decompress, ModeMatchesOracleExhaustivelyOnSmallMatrices) {
  const int n = 2, num_relations = 3;
  const std::array<int, 5> values{0, 1, 2, 3, 200};
  int cases = 0;
  for (int code = 0; code < 625; ++code) {
    std::vector<int> m(4);
    int rest = code;
    for (auto& v : m) v = values[rest % 5], rest /= 5;
    CompressedTensor c{2, 3, {{}}};
    for (const int v : m) c.retained[0].push_back(static_cast<std::uint8_t>(v));
    const auto expected = repair_oracle(m, n, num_relations);
    const bool empty = std::all_of(m.begin(), m.end(), [](int v) { return v == 0; });
    const auto res = decompress(c, RepairPolicy::mode);
    BinaryTensor want(2, 3);
    if (expected.relation)
      for (int k = 0; k < 4; ++k) want.at(expected.relation, k / 2, k % 2) = expected.cells[k];
    ASSERT_EQ(res.tensor, want) << "code " << code;
    ASSERT_EQ(res.warnings.size(), expected.warned || empty ? 1u : 0u) << "code " << code;
    ++cases;
  }
  EXPECT_EQ(cases, 625);
}

// --- regenerate -------------------------------------------------------------

TEST(Regenerate, ZeroTensorGivesNodesOnly) {
  const auto o = small_ontology(2, 1);
  const auto g = regenerate(BinaryTensor(2, 2), FeatureMatrix{2, 1, {1.0, 2.0}}, o);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(g.nodes[1].features, std::vector<double>{2.0});
}

TEST(Regenerate, SliceIndexNamesRelation) {
  BinaryTensor t(2, 8);
  t.at(3, 0, 1) = 1;
  const auto g = regenerate(t, FeatureMatrix{2, 4, std::vector<double>(8, 0.0)}, onto());
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(onto().relation_name(g.edges[0].rel), "to_left_of");
  EXPECT_EQ(g.edges[0].src, 0);
  EXPECT_EQ(g.edges[0].dst, 1);
}

TEST(Regenerate, ShapeChecks) {
  BinaryTensor t(2, 8);
  EXPECT_THROW(regenerate(t, FeatureMatrix{3, 4, std::vector<double>(12)}, onto()), ShapeError);
  t.at(1, 1, 1) = 1;
  EXPECT_THROW(regenerate(t, FeatureMatrix{2, 4, std::vector<double>(8)}, onto()), ShapeError);
}

TEST(Pipeline, CleanGraphsSurviveAllStages) {
  SplitMix64 rng(31);
  for (int k = 0; k < 200; ++k) {
    const auto g = random_graph(rng, static_cast<std::size_t>(rng.uniform_int(1, 12)), onto(), 0.04);
    const auto back = regenerate(decompress(compress(encode_tensor(g, onto()))).tensor,
                                 feature_matrix(g, onto().dimension()), onto());
    ASSERT_EQ(back, g);
  }
}

// --- wire format ------------------------------------------------------------

TEST(Wire, SizeArithmetic) {
  const auto o = small_ontology(2, 1);
  CompressedTensor c{2, 2, {{0, 1, 0, 0}}};
  const auto p = serialize(c, FeatureMatrix{2, 1, {1.0, 2.0}}, o);
  EXPECT_EQ(p.size(), 33u);
  EXPECT_EQ(payload_size(2, 1, 1), 33u);
  const auto back = parse(p, o);
  EXPECT_EQ(back.tensor, c);
}

TEST(Wire, NoRetainedMatrices) {
  const auto o = small_ontology(2, 1);
  const auto p = serialize(CompressedTensor{3, 2, {}}, FeatureMatrix{3, 1, {1, 2, 3}}, o);
  EXPECT_EQ(p.size(), kHeaderSize + 12);
  EXPECT_TRUE(parse(p, o).tensor.retained.empty());
}

TEST(Wire, PadBitsMakeWholeSymbols) {
  for (std::size_t octets = 1; octets < 100; ++octets)
    EXPECT_EQ((octets * 8 + qam_pad_bits(octets)) % 6, 0u);
  EXPECT_EQ(qam_pad_bits(3), 0);
  EXPECT_EQ(qam_pad_bits(1), 4);
  EXPECT_EQ(qam_pad_bits(2), 2);
}

TEST(Wire, GoldenPayloadBytes) {
  const auto corpus = read_scenes_file(test_paths::fixture("golden.scenes"), onto());
  ASSERT_EQ(corpus.size(), 1u);
  const auto payload = encode_graph(corpus[0].frames[0], onto());
  EXPECT_EQ(payload, read_bytes(test_paths::fixture("golden.gbsd")));

  // Independently assembled from the layout description.
  std::vector<std::uint8_t> want{'G', 'B', 'S', 'D', 1};
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : std::string(default_ontology_text())) h = (h ^ ch) * 1099511628211ull;
  for (int s = 56; s >= 0; s -= 8) want.push_back(static_cast<std::uint8_t>(h >> s));
  for (int b : {0, 3, 0, 4, 8, 5, 0, 0}) want.push_back(static_cast<std::uint8_t>(b));
  const std::vector<std::array<int, 9>> mats{{0, 1, 0, 1, 0, 0, 0, 0, 0},
                                             {0, 0, 0, 3, 0, 0, 0, 0, 0},
                                             {0, 4, 0, 0, 0, 0, 0, 0, 0},
                                             {0, 0, 7, 0, 0, 0, 0, 0, 0},
                                             {0, 0, 0, 8, 0, 0, 0, 0, 0}};
  for (const auto& m : mats)
    for (int v : m) want.push_back(static_cast<std::uint8_t>(v));
  for (float f : {0.0f, 0.0f, 0.0f, 20.0f, 0.0f, -3.5f, 6.0f, 21.0f, 4.0f, 0.0f, 0.0f, 0.0f}) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    for (int s = 24; s >= 0; s -= 8) want.push_back(static_cast<std::uint8_t>(bits >> s));
  }
  EXPECT_EQ(payload, want);
}

TEST(Wire, GoldenPayloadDecodes) {
  const auto decoded = decode_payload(read_bytes(test_paths::fixture("golden.gbsd")), onto(),
                                      RepairPolicy::strict);
  EXPECT_TRUE(decoded.warnings.empty());
  const auto dump = read_bytes(test_paths::fixture("golden.dump"));
  EXPECT_EQ(dump_graph(decoded.graph, onto()), std::string(dump.begin(), dump.end()));
}

TEST(Wire, RoundTripGeneratedCorpus) {
  ScenarioSpec spec;
  spec.num_sequences = 20;
  for (const auto& seq : generate(spec, onto()))
    for (const auto& frame : seq.frames) {
      const auto p = encode_graph(frame, onto());
      const auto c = compress(encode_tensor(frame, onto()));
      const auto parsed = parse(p, onto());
      ASSERT_EQ(parsed.tensor, c);
      ASSERT_EQ(parsed.features, feature_matrix(frame, onto().dimension()));
      ASSERT_EQ(serialize(parsed.tensor, parsed.features, onto()), p);
      ASSERT_EQ(decode_payload(p, onto(), RepairPolicy::strict).graph, frame);
    }
}

template <typename E>
std::size_t offset_of(const Payload& p, const RelationOntology& o) {
  try {
    parse(p, o);
  } catch (const E& e) {
    return e.offset();
  }
  ADD_FAILURE() << "expected typed error";
  return static_cast<std::size_t>(-1);
}

class WireErrors : public ::testing::Test {
 protected:
  Payload good = serialize(CompressedTensor{3, 8, {{0, 1, 0, 1, 0, 0, 0, 0, 0}}},
                           FeatureMatrix{3, 4, std::vector<double>(12, 1.0)}, onto());
};

TEST_F(WireErrors, MagicOctets) {
  for (std::size_t k = 0; k < 4; ++k) {
    auto p = good;
    p[k] ^= 0x01;
    EXPECT_EQ(offset_of<FormatError>(p, onto()), k);
  }
}

TEST_F(WireErrors, HeaderFields) {
  auto p = good;
  p[4] = 2;
  EXPECT_EQ(offset_of<FormatError>(p, onto()), 4u);
  p = good;
  p[12] ^= 0xff;
  EXPECT_EQ(offset_of<OntologyMismatch>(p, onto()), 5u);
  p = good;
  p[13] = 0, p[14] = 0;
  EXPECT_EQ(offset_of<FormatError>(p, onto()), 13u);
  p = good;
  p[16] = 5;
  EXPECT_EQ(offset_of<OntologyMismatch>(p, onto()), 15u);
  p = good;
  p[17] = 7;
  EXPECT_EQ(offset_of<OntologyMismatch>(p, onto()), 17u);
  p = good;
  p[18] = 9;
  EXPECT_EQ(offset_of<FormatError>(p, onto()), 18u);
  p = good;
  p[19] = 0x80;
  EXPECT_EQ(offset_of<FormatError>(p, onto()), 19u);
  p = good;
  p[20] ^= 0x01;
  EXPECT_EQ(offset_of<FormatError>(p, onto()), 19u);
}

TEST_F(WireErrors, LengthProblems) {
  auto p = good;
  p.pop_back();
  EXPECT_EQ(offset_of<TruncationError>(p, onto()), good.size() - 1);
  p = good;
  p.resize(10);
  EXPECT_EQ(offset_of<TruncationError>(p, onto()), 10u);
  EXPECT_EQ(offset_of<TruncationError>(Payload{}, onto()), 0u);
  p = good;
  p.push_back(0);
  EXPECT_EQ(offset_of<FormatError>(p, onto()), good.size());
}

TEST_F(WireErrors, OtherOntologyRejected) {
  EXPECT_THROW(parse(good, small_ontology(8, 4)), OntologyMismatch);
}

TEST(WireSerialize, Preconditions) {
  EXPECT_THROW(serialize(CompressedTensor{2, 7, {}}, FeatureMatrix{2, 4, std::vector<double>(8)}, onto()),
               OntologyMismatch);
  EXPECT_THROW(serialize(CompressedTensor{2, 8, {}}, FeatureMatrix{2, 3, std::vector<double>(6)}, onto()),
               OntologyMismatch);
  EXPECT_THROW(serialize(CompressedTensor{3, 8, {}}, FeatureMatrix{2, 4, std::vector<double>(8)}, onto()),
               ShapeError);
  EXPECT_THROW(serialize(CompressedTensor{70000, 8, {}}, FeatureMatrix{}, onto()), CapacityError);
  CompressedTensor too_many{2, 8, std::vector<std::vector<std::uint8_t>>(9, std::vector<std::uint8_t>(4))};
  EXPECT_THROW(serialize(too_many, FeatureMatrix{2, 4, std::vector<double>(8)}, onto()), CapacityError);
}

// Totality: random octets and mutated valid payloads only ever produce a
// value or a typed wire error.
TEST(WireFuzz, RandomOctetsNeverEscapeTypedErrors) {
  SplitMix64 rng(2024);
  const auto digest = ontology_digest(onto());
  std::size_t accepted = 0;
  for (int k = 0; k < 10000; ++k) {
    Payload p(static_cast<std::size_t>(rng.uniform_int(0, 4096)));
    for (auto& b : p) b = static_cast<std::uint8_t>(rng.next());
    if (k % 2 == 1 && p.size() >= kHeaderSize) {
      // Plausible header so the fuzzer reaches the body checks.
      const std::uint8_t head[] = {'G', 'B', 'S', 'D', 1};
      std::copy(std::begin(head), std::end(head), p.begin());
      for (int s = 0; s < 8; ++s) p[5 + s] = static_cast<std::uint8_t>(digest >> (56 - 8 * s));
      p[13] = 0;
      p[14] = static_cast<std::uint8_t>(rng.uniform_int(0, 12));
      p[15] = 0, p[16] = 4, p[17] = 8;
      p[18] = static_cast<std::uint8_t>(rng.uniform_int(0, 9));
      const std::size_t n = p[14], kk = p[18];
      p.resize(std::min<std::size_t>(p.size(), payload_size(n, kk, 4) + rng.uniform_int(0, 2)));
      if (p.size() >= kHeaderSize) p[19] = 0, p[20] = static_cast<std::uint8_t>(qam_pad_bits(payload_size(n, kk, 4)));
    }
    try {
      decode_payload(p, onto(), RepairPolicy::mode);
      ++accepted;
    } catch (const WireError&) {
    }
  }
  EXPECT_GT(accepted, 0u);
}

TEST(WireFuzz, MutatedPayloadsNeverEscapeTypedErrors) {
  SplitMix64 rng(77);
  ScenarioSpec spec;
  spec.num_sequences = 5;
  std::vector<Payload> seeds;
  for (const auto& seq : generate(spec, onto()))
    for (const auto& frame : seq.frames) seeds.push_back(encode_graph(frame, onto()));
  for (int k = 0; k < 10000; ++k) {
    auto p = seeds[k % seeds.size()];
    const int flips = static_cast<int>(rng.uniform_int(1, 8));
    for (int f = 0; f < flips; ++f) {
      const auto pos = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(p.size()) - 1));
      p[pos] ^= static_cast<std::uint8_t>(1u << rng.uniform_int(0, 7));
    }
    if (k % 7 == 0) p.resize(static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(p.size()))));
    for (const auto policy : {RepairPolicy::mode, RepairPolicy::strict}) {
      try {
        decode_payload(p, onto(), policy);
      } catch (const WireError&) {
      } catch (const DecodeError&) {
        ASSERT_EQ(policy, RepairPolicy::strict);
      }
    }
  }
}

}  // namespace
}  // namespace gbsed
