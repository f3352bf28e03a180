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

#include "gbsed/codec.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "gbsed/errors.hpp"

namespace gbsed {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'G', 'B', 'S', 'D'};
constexpr std::uint16_t kPadMask = 0x0007;

class Writer {
 public:
  explicit Writer(std::size_t reserve) { out_.reserve(reserve); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  Payload take() { return std::move(out_); }

 private:
  Payload out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::size_t offset() const noexcept { return pos_; }
  void need(std::size_t count) const {
    if (in_.size() - pos_ < count) throw TruncationError("payload truncated", in_.size());
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>((in_[pos_] << 8) | in_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v = (v << 8) | in_[pos_ + k];
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v = (v << 8) | in_[pos_ + k];
    pos_ += 8;
    return v;
  }
  std::span<const std::uint8_t> bytes(std::size_t count) {
    need(count);
    auto s = in_.subspan(pos_, count);
    pos_ += count;
    return s;
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

AdjacencyTensor encode_tensor(const SceneGraph& g, const RelationOntology& ontology) {
  const std::size_t n = g.nodes.size();
  AdjacencyTensor t(n, ontology.num_relations());
  for (const auto& e : g.edges) {
    if (e.rel == 0 || e.rel > ontology.num_relations())
      throw OntologyMismatch("edge relation id " + std::to_string(e.rel) + " not in ontology");
    if (e.src >= n || e.dst >= n) throw ShapeError("edge endpoint out of range");
    t.at(e.rel, e.src, e.dst) = e.rel;
  }
  return t;
}

CompressedTensor compress(const AdjacencyTensor& t) {
  CompressedTensor c{t.n, t.num_relations, {}};
  for (std::size_t r = 1; r <= t.num_relations; ++r) {
    const auto slice = t.slice(r);
    if (std::any_of(slice.begin(), slice.end(), [](std::uint8_t v) { return v > 0; }))
      c.retained.emplace_back(slice.begin(), slice.end());
  }
  return c;
}

BinaryTensor binarize(const AdjacencyTensor& t) {
  BinaryTensor b(t.n, t.num_relations);
  std::transform(t.cells.begin(), t.cells.end(), b.cells.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v > 0); });
  return b;
}

DecompressResult decompress(const CompressedTensor& c, RepairPolicy policy) {
  const std::size_t n = c.n;
  const std::size_t num_relations = c.num_relations;
  DecompressResult result{BinaryTensor(n, num_relations), {}};
  std::vector<bool> filled(num_relations + 1, false);
  std::vector<std::size_t> counts(num_relations + 1);

  for (std::size_t m = 0; m < c.retained.size(); ++m) {
    const auto& matrix = c.retained[m];
    const auto label = "matrix " + std::to_string(m);
    if (matrix.size() != n * n) throw ShapeError(label + " is not N x N");

    // Tally the nonzero values off the diagonal; anything on the diagonal
    // or outside 1..|R| cannot come from a clean encoder.
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t stray = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint8_t v = matrix[i * n + j];
        if (v == 0) continue;
        if (i == j || v > num_relations) {
          ++stray;
        } else {
          ++counts[v];
        }
      }
    }
    std::size_t distinct = 0;
    std::size_t relation = 0;
    for (std::size_t r = 1; r <= num_relations; ++r) {
      if (counts[r] == 0) continue;
      ++distinct;
      if (relation == 0 || counts[r] > counts[relation]) relation = r;
    }
    const bool clean = distinct == 1 && stray == 0;

    if (!clean) {
      if (policy == RepairPolicy::strict) {
        throw DecodeError(label + (distinct == 0 && stray == 0
                                       ? " is empty"
                                       : " is not self-describing"));
      }
      if (relation == 0) {
        result.warnings.push_back(label + " dropped: no in-range relation value");
        continue;
      }
      result.warnings.push_back(label + " repaired to relation " + std::to_string(relation));
    }
    if (filled[relation])
      result.warnings.push_back(label + " overwrites relation " + std::to_string(relation));
    filled[relation] = true;

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        result.tensor.at(relation, i, j) =
            static_cast<std::uint8_t>(i != j && matrix[i * n + j] == relation);
  }
  return result;
}

SceneGraph regenerate(const BinaryTensor& t, const FeatureMatrix& f,
                      const RelationOntology& ontology) {
  if (f.rows != t.n) throw ShapeError("feature matrix rows differ from node count");
  if (f.cols != ontology.dimension()) throw ShapeError("feature matrix width differs from ontology");
  if (t.num_relations != ontology.num_relations())
    throw OntologyMismatch("tensor relation count differs from ontology");

  SceneGraph g;
  g.ontology_digest = ontology_digest(ontology);
  g.nodes.reserve(t.n);
  for (std::size_t j = 0; j < t.n; ++j) {
    SceneNode node;
    node.index = static_cast<std::uint16_t>(j);
    node.features.assign(f.values.begin() + j * f.cols, f.values.begin() + (j + 1) * f.cols);
    g.nodes.push_back(std::move(node));
  }
  for (std::size_t r = 1; r <= t.num_relations; ++r) {
    for (std::size_t j = 0; j < t.n; ++j) {
      for (std::size_t k = 0; k < t.n; ++k) {
        if (t.at(r, j, k) != 1) continue;
        if (j == k) throw ShapeError("binary tensor has a self-loop entry");
        g.edges.push_back({static_cast<std::uint16_t>(j), static_cast<RelationId>(r),
                           static_cast<std::uint16_t>(k)});
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

FeatureMatrix feature_matrix(const SceneGraph& g, std::size_t dimension) {
  FeatureMatrix f{g.nodes.size(), dimension, {}};
  f.values.reserve(f.rows * f.cols);
  for (const auto& node : g.nodes) {
    if (node.features.size() != dimension) throw ShapeError("node feature length mismatch");
    f.values.insert(f.values.end(), node.features.begin(), node.features.end());
  }
  return f;
}

std::size_t payload_size(std::size_t n, std::size_t retained, std::size_t dimension) noexcept {
  return kHeaderSize + retained * n * n + 4 * n * dimension;
}

std::uint16_t qam_pad_bits(std::size_t octets) noexcept {
  return static_cast<std::uint16_t>((6 - (octets * 8) % 6) % 6);
}

Payload serialize(const CompressedTensor& c, const FeatureMatrix& f,
                  const RelationOntology& ontology) {
  if (c.n > kMaxNodes) throw CapacityError("node count exceeds 65535");
  if (c.num_relations > kMaxRelations) throw CapacityError("relation count exceeds 255");
  if (c.retained.size() > c.num_relations) throw CapacityError("more retained matrices than relations");
  if (f.cols > kMaxAttributes) throw CapacityError("feature dimension exceeds 65535");
  if (c.num_relations != ontology.num_relations())
    throw OntologyMismatch("tensor relation count differs from ontology");
  if (f.cols != ontology.dimension())
    throw OntologyMismatch("feature dimension differs from ontology");
  if (f.rows != c.n || f.values.size() != f.rows * f.cols)
    throw ShapeError("feature matrix shape differs from tensor");

  const std::size_t total = payload_size(c.n, c.retained.size(), f.cols);
  Writer w(total);
  for (const auto b : kMagic) w.u8(b);
  w.u8(kWireVersion);
  w.u64(ontology_digest(ontology));
  w.u16(static_cast<std::uint16_t>(c.n));
  w.u16(static_cast<std::uint16_t>(f.cols));
  w.u8(static_cast<std::uint8_t>(c.num_relations));
  w.u8(static_cast<std::uint8_t>(c.retained.size()));
  w.u16(qam_pad_bits(total));
  for (const auto& matrix : c.retained) {
    if (matrix.size() != c.n * c.n) throw ShapeError("retained matrix is not N x N");
    w.bytes(matrix);
  }
  for (const double v : f.values) w.u32(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return w.take();
}

ParsedPayload parse(std::span<const std::uint8_t> payload, const RelationOntology& ontology) {
  Reader r(payload);
  for (std::size_t k = 0; k < kMagic.size(); ++k) {
    const std::size_t at = r.offset();
    if (r.u8() != kMagic[k]) throw FormatError("bad magic", at);
  }
  if (r.u8() != kWireVersion) throw FormatError("unsupported version", 4);
  if (r.u64() != ontology_digest(ontology)) throw OntologyMismatch("ontology digest mismatch", 5);
  const std::size_t n = r.u16();
  const std::size_t d = r.u16();
  const std::size_t num_relations = r.u8();
  const std::size_t k = r.u8();
  const std::uint16_t flags = r.u16();

  if (n == 0) throw FormatError("node count is zero", 13);
  if (d != ontology.dimension()) throw OntologyMismatch("feature dimension differs from ontology", 15);
  if (num_relations != ontology.num_relations())
    throw OntologyMismatch("relation count differs from ontology", 17);
  if (k > num_relations) throw FormatError("retained count exceeds relation count", 18);

  const std::size_t total = payload_size(n, k, d);
  if ((flags & ~kPadMask) != 0 || flags != qam_pad_bits(total)) throw FormatError("bad flags", 19);
  if (payload.size() < total) throw TruncationError("payload truncated", payload.size());
  if (payload.size() > total) throw FormatError("trailing octets", total);

  ParsedPayload out;
  out.tensor.n = n;
  out.tensor.num_relations = num_relations;
  out.tensor.retained.reserve(k);
  for (std::size_t m = 0; m < k; ++m) {
    const auto bytes = r.bytes(n * n);
    out.tensor.retained.emplace_back(bytes.begin(), bytes.end());
  }
  out.features.rows = n;
  out.features.cols = d;
  out.features.values.reserve(n * d);
  for (std::size_t v = 0; v < n * d; ++v)
    out.features.values.push_back(static_cast<double>(std::bit_cast<float>(r.u32())));
  return out;
}

Payload encode_graph(const SceneGraph& g, const RelationOntology& ontology) {
  return serialize(compress(encode_tensor(g, ontology)), feature_matrix(g, ontology.dimension()),
                   ontology);
}

DecodedGraph decode_payload(std::span<const std::uint8_t> payload,
                            const RelationOntology& ontology, RepairPolicy policy) {
  auto parsed = parse(payload, ontology);
  auto decompressed = decompress(parsed.tensor, policy);
  return {regenerate(decompressed.tensor, parsed.features, ontology),
          std::move(decompressed.warnings)};
}

}  // namespace gbsed
