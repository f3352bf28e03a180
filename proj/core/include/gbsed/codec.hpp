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

// Scene graph <-> adjacency tensor <-> compressed tensor <-> payload.
//
// A relation slice is "self-describing": every nonzero entry of slice r
// holds the value r, so the receiver recovers which relation a matrix
// carries from its contents alone. Compression keeps only the slices that
// carry at least one edge.
//
// Payload layout (all integers big-endian):
//
//   offset  size  field
//   0       4     magic "GBSD"
//   4       1     version (1)
//   5       8     ontology digest
//   13      2     N, node count
//   15      2     d, feature dimension
//   17      1     |R|, relation count
//   18      1     K, retained matrix count
//   19      2     flags: bits 0-2 = 64-QAM tail pad bits, bits 3-15 zero
//   21      K*N*N retained matrices, row-major, one octet per entry
//   ...     4*N*d feature matrix, row-major IEEE-754 binary32

#ifndef GBSED_CODEC_HPP_
#define GBSED_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gbsed/ontology.hpp"
#include "gbsed/scene_graph.hpp"

namespace gbsed {

/// N x N x |R| stack. Slice r (1-based) holds values in {0, r}.
struct AdjacencyTensor {
  std::size_t n = 0;
  std::size_t num_relations = 0;
  std::vector<std::uint8_t> cells;  // [(r - 1) * n * n + i * n + j]

  AdjacencyTensor() = default;
  AdjacencyTensor(std::size_t n, std::size_t num_relations)
      : n(n), num_relations(num_relations), cells(n * n * num_relations, 0) {}

  std::span<const std::uint8_t> slice(std::size_t r) const {
    return {cells.data() + (r - 1) * n * n, n * n};
  }
  std::uint8_t at(std::size_t r, std::size_t i, std::size_t j) const {
    return cells[(r - 1) * n * n + i * n + j];
  }
  std::uint8_t& at(std::size_t r, std::size_t i, std::size_t j) {
    return cells[(r - 1) * n * n + i * n + j];
  }
  friend bool operator==(const AdjacencyTensor&, const AdjacencyTensor&) = default;
};

/// Same shape as AdjacencyTensor with entries in {0, 1}.
struct BinaryTensor {
  std::size_t n = 0;
  std::size_t num_relations = 0;
  std::vector<std::uint8_t> cells;

  BinaryTensor() = default;
  BinaryTensor(std::size_t n, std::size_t num_relations)
      : n(n), num_relations(num_relations), cells(n * n * num_relations, 0) {}

  std::uint8_t at(std::size_t r, std::size_t i, std::size_t j) const {
    return cells[(r - 1) * n * n + i * n + j];
  }
  std::uint8_t& at(std::size_t r, std::size_t i, std::size_t j) {
    return cells[(r - 1) * n * n + i * n + j];
  }
  friend bool operator==(const BinaryTensor&, const BinaryTensor&) = default;
};

/// One N*N row-major matrix per retained relation, ordered by relation id.
/// The relation id is not stored alongside; it is the matrix's nonzero value.
struct CompressedTensor {
  std::size_t n = 0;
  std::size_t num_relations = 0;
  std::vector<std::vector<std::uint8_t>> retained;
  friend bool operator==(const CompressedTensor&, const CompressedTensor&) = default;
};

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t i, std::size_t k) const { return values[i * cols + k]; }
  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

enum class RepairPolicy {
  /// Use the most frequent in-range nonzero value (ties to the smallest id),
  /// keep only entries equal to it, drop matrices with no usable value.
  mode,
  /// Any matrix that is not cleanly self-describing is a DecodeError.
  strict,
};

struct DecompressResult {
  BinaryTensor tensor;
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kHeaderSize = 21;
inline constexpr std::uint8_t kWireVersion = 1;

AdjacencyTensor encode_tensor(const SceneGraph& g, const RelationOntology& ontology);
CompressedTensor compress(const AdjacencyTensor& t);
DecompressResult decompress(const CompressedTensor& c, RepairPolicy policy = RepairPolicy::mode);
BinaryTensor binarize(const AdjacencyTensor& t);
SceneGraph regenerate(const BinaryTensor& t, const FeatureMatrix& f,
                      const RelationOntology& ontology);

FeatureMatrix feature_matrix(const SceneGraph& g, std::size_t dimension);

using Payload = std::vector<std::uint8_t>;

/// 21 + K*N^2 + 4*N*d.
std::size_t payload_size(std::size_t n, std::size_t retained, std::size_t dimension) noexcept;

/// Tail padding, in bits, that brings an octet count up to whole 64-QAM
/// symbols (6 bits each). Always 0, 2 or 4.
std::uint16_t qam_pad_bits(std::size_t octets) noexcept;

Payload serialize(const CompressedTensor& c, const FeatureMatrix& f,
                  const RelationOntology& ontology);

struct ParsedPayload {
  CompressedTensor tensor;
  FeatureMatrix features;
};

/// Total over arbitrary input: returns a value or throws a WireError
/// subclass (FormatError, TruncationError, OntologyMismatch).
ParsedPayload parse(std::span<const std::uint8_t> payload, const RelationOntology& ontology);

/// encode_tensor -> compress -> serialize.
Payload encode_graph(const SceneGraph& g, const RelationOntology& ontology);

struct DecodedGraph {
  SceneGraph graph;
  std::vector<std::string> warnings;
};

/// parse -> decompress -> regenerate.
DecodedGraph decode_payload(std::span<const std::uint8_t> payload,
                            const RelationOntology& ontology,
                            RepairPolicy policy = RepairPolicy::mode);

}  // namespace gbsed

#endif  // GBSED_CODEC_HPP_
