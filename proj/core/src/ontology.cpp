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

#include "gbsed/ontology.hpp"

#include <algorithm>
#include <set>

#include "gbsed/errors.hpp"
#include "text.hpp"

namespace gbsed {

namespace {

constexpr std::string_view kDefaultOntology =
    "relation 1 is_near\n"
    "relation 2 very_near\n"
    "relation 3 to_left_of\n"
    "relation 4 to_right_of\n"
    "relation 5 in_front_of\n"
    "relation 6 behind\n"
    "relation 7 is_in\n"
    "relation 8 approaching\n"
    "attribute 0 class categorical\n"
    "attribute 1 bev_x length-meters\n"
    "attribute 2 bev_y length-meters\n"
    "attribute 3 speed speed-mps\n";

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace

std::string_view to_string(AttributeKind kind) noexcept {
  switch (kind) {
    case AttributeKind::categorical: return "categorical";
    case AttributeKind::length_meters: return "length-meters";
    case AttributeKind::speed_mps: return "speed-mps";
  }
  return "categorical";
}

std::optional<AttributeKind> parse_attribute_kind(std::string_view text) noexcept {
  if (text == "categorical") return AttributeKind::categorical;
  if (text == "length-meters") return AttributeKind::length_meters;
  if (text == "speed-mps") return AttributeKind::speed_mps;
  return std::nullopt;
}

bool is_identifier(std::string_view name) noexcept {
  if (name.empty()) return false;
  const auto lead_ok = [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; };
  const auto tail_ok = [&](char c) { return lead_ok(c) || (c >= '0' && c <= '9'); };
  return lead_ok(name.front()) && std::all_of(name.begin() + 1, name.end(), tail_ok);
}

RelationOntology::RelationOntology(std::vector<Relation> relations,
                                   std::vector<Attribute> attributes)
    : relations_(std::move(relations)), attributes_(std::move(attributes)) {
  std::sort(relations_.begin(), relations_.end(),
            [](const Relation& a, const Relation& b) { return a.id < b.id; });
  std::sort(attributes_.begin(), attributes_.end(),
            [](const Attribute& a, const Attribute& b) { return a.index < b.index; });

  if (relations_.empty()) throw SchemaError("ontology defines no relations");
  if (relations_.size() > kMaxRelations) throw SchemaError("more than 255 relations");
  if (attributes_.size() > kMaxAttributes) throw SchemaError("more than 65535 attributes");

  std::set<std::string_view> names;
  for (std::size_t k = 0; k < relations_.size(); ++k) {
    const auto& rel = relations_[k];
    if (k > 0 && rel.id == relations_[k - 1].id)
      throw SchemaError("duplicate relation id " + std::to_string(rel.id));
    if (rel.id != k + 1)
      throw SchemaError("relation ids must be contiguous from 1; missing id " +
                        std::to_string(k + 1));
    if (!is_identifier(rel.name)) throw SchemaError("bad relation name '" + rel.name + "'");
    if (!names.insert(rel.name).second)
      throw SchemaError("duplicate relation name '" + rel.name + "'");
  }

  names.clear();
  for (std::size_t k = 0; k < attributes_.size(); ++k) {
    const auto& attr = attributes_[k];
    if (k > 0 && attr.index == attributes_[k - 1].index)
      throw SchemaError("duplicate attribute index " + std::to_string(attr.index));
    if (attr.index != k)
      throw SchemaError("attribute indices must be contiguous from 0; missing index " +
                        std::to_string(k));
    if (!is_identifier(attr.name)) throw SchemaError("bad attribute name '" + attr.name + "'");
    if (!names.insert(attr.name).second)
      throw SchemaError("duplicate attribute name '" + attr.name + "'");
  }
}

const std::string& RelationOntology::relation_name(RelationId id) const {
  if (id == 0 || id > relations_.size())
    throw OntologyMismatch("relation id " + std::to_string(id) + " not in ontology");
  return relations_[id - 1].name;
}

std::optional<RelationId> RelationOntology::find_relation(std::string_view name) const noexcept {
  for (const auto& rel : relations_)
    if (rel.name == name) return rel.id;
  return std::nullopt;
}

std::optional<std::size_t> RelationOntology::find_attribute(std::string_view name) const noexcept {
  for (const auto& attr : attributes_)
    if (attr.name == name) return attr.index;
  return std::nullopt;
}

RelationOntology load_ontology(std::string_view text) {
  std::vector<Relation> relations;
  std::vector<Attribute> attributes;

  for (const auto& line : text::split_lines(text)) {
    const auto body = text::trim(line.text);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = text::split_ws(body);
    const auto where = " (line " + std::to_string(line.number) + ")";

    if (fields[0] == "relation") {
      if (fields.size() != 3) throw SchemaError("expected 'relation <id> <name>'" + where);
      const auto id = text::parse_int<int>(fields[1]);
      if (!id || *id < 1 || *id > static_cast<int>(kMaxRelations))
        throw SchemaError("relation id must be 1..255" + where);
      relations.push_back({static_cast<RelationId>(*id), std::string(fields[2])});
    } else if (fields[0] == "attribute") {
      if (fields.size() != 4)
        throw SchemaError("expected 'attribute <index> <name> <kind>'" + where);
      const auto index = text::parse_int<int>(fields[1]);
      if (!index || *index < 0 || *index >= static_cast<int>(kMaxAttributes))
        throw SchemaError("attribute index must be 0..65534" + where);
      const auto kind = parse_attribute_kind(fields[3]);
      if (!kind) throw SchemaError("unknown attribute kind '" + std::string(fields[3]) + "'" + where);
      attributes.push_back({static_cast<std::uint16_t>(*index), std::string(fields[2]), *kind});
    } else {
      throw SchemaError("unknown directive '" + std::string(fields[0]) + "'" + where);
    }
  }
  return RelationOntology(std::move(relations), std::move(attributes));
}

RelationOntology load_ontology_file(const std::string& path) {
  return load_ontology(text::read_file(path));
}

std::string emit_ontology(const RelationOntology& ontology) {
  std::string out;
  for (const auto& rel : ontology.relations())
    out += "relation " + std::to_string(rel.id) + " " + rel.name + "\n";
  for (const auto& attr : ontology.attributes())
    out += "attribute " + std::to_string(attr.index) + " " + attr.name + " " +
           std::string(to_string(attr.kind)) + "\n";
  return out;
}

std::uint64_t ontology_digest(const RelationOntology& ontology) {
  return fnv1a64(emit_ontology(ontology));
}

const RelationOntology& default_ontology() {
  static const RelationOntology instance = load_ontology(kDefaultOntology);
  return instance;
}

std::string_view default_ontology_text() noexcept { return kDefaultOntology; }

}  // namespace gbsed
