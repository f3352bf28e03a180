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

// Shared transmitter/receiver knowledge: the relation vocabulary and the
// node attribute schema. Both ends must load the same document; the
// payload header carries its digest so a mismatch is detected on parse.
//
// Document grammar (one directive per line):
//   # comment
//   relation <id> <name>
//   attribute <index> <name> <kind>       kind: categorical | length-meters | speed-mps

#ifndef GBSED_ONTOLOGY_HPP_
#define GBSED_ONTOLOGY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gbsed {

/// Relation id on the wire. 0 means "no edge"; valid ids are 1..255.
using RelationId = std::uint8_t;

inline constexpr std::size_t kMaxRelations = 255;
inline constexpr std::size_t kMaxAttributes = 65535;

enum class AttributeKind { categorical, length_meters, speed_mps };

std::string_view to_string(AttributeKind kind) noexcept;
std::optional<AttributeKind> parse_attribute_kind(std::string_view text) noexcept;

struct Relation {
  RelationId id = 0;
  std::string name;
  friend bool operator==(const Relation&, const Relation&) = default;
};

struct Attribute {
  std::uint16_t index = 0;
  std::string name;
  AttributeKind kind = AttributeKind::categorical;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// Immutable after construction; the constructor enforces every invariant
/// (contiguous ids from 1, contiguous attribute indices from 0, unique
/// identifier-shaped names) and throws SchemaError otherwise.
class RelationOntology {
 public:
  RelationOntology(std::vector<Relation> relations, std::vector<Attribute> attributes);

  const std::vector<Relation>& relations() const noexcept { return relations_; }
  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }

  std::size_t num_relations() const noexcept { return relations_.size(); }
  std::size_t dimension() const noexcept { return attributes_.size(); }

  /// Name of relation `id`; `id` must be in 1..num_relations().
  const std::string& relation_name(RelationId id) const;
  std::optional<RelationId> find_relation(std::string_view name) const noexcept;
  std::optional<std::size_t> find_attribute(std::string_view name) const noexcept;

  friend bool operator==(const RelationOntology&, const RelationOntology&) = default;

 private:
  std::vector<Relation> relations_;
  std::vector<Attribute> attributes_;
};

RelationOntology load_ontology(std::string_view text);
RelationOntology load_ontology_file(const std::string& path);

/// Canonical emission: relations by id, then attributes by index, single
/// spaces, '\n' after every line, nothing else.
std::string emit_ontology(const RelationOntology& ontology);

/// FNV-1a-64 over emit_ontology().
std::uint64_t ontology_digest(const RelationOntology& ontology);

/// The repository's default 8-relation, 4-attribute ontology (identical to
/// fixtures/ontology.cfg).
const RelationOntology& default_ontology();
std::string_view default_ontology_text() noexcept;

bool is_identifier(std::string_view name) noexcept;

}  // namespace gbsed

#endif  // GBSED_ONTOLOGY_HPP_
