#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zerr/ambiguity.hpp"
#include "zerr/channel.hpp"
#include "zerr/composition.hpp"
#include "zerr/listcodes.hpp"
#include "zerr/network.hpp"

// JSON file formats. Serializers emit the canonical text (two-space indent,
// keys in declaration order, trailing newline); parsers accept any JSON
// with the right shape. "infinite" stands for an unbounded ambiguity.
//
// Parsers throw ParseError for malformed text or wrong shapes (message holds
// line/column or the JSON path) and ValidationError for well-formed files
// that break a model invariant.

namespace zerr::formats {

/// {"inputs": [...], "outputs": [...], "relation": {"x": ["y", ...], ...}}
Channel parse_channel(const std::string& text);
std::string serialize_channel(const Channel& channel);

/// Either {"n": 3, "sets": [[1, 2], [3]]} with 1-based channel indices, or
/// {"threshold": {"n": 3, "t": 1}}.
struct StructureSpec {
  std::size_t n = 0;
  std::optional<std::size_t> t;
  /// 0-based; unused when t is set.
  std::vector<std::vector<std::size_t>> sets;

  HonestSetStructure build() const;
  friend bool operator==(const StructureSpec&, const StructureSpec&) = default;
};

StructureSpec parse_structure(const std::string& text);
std::string serialize_structure(const StructureSpec& structure);

/// {"ambiguities": [2, "infinite"], "structure": {...}}; structure optional.
struct InstanceFile {
  std::vector<Ambiguity> ambiguities;
  std::optional<StructureSpec> structure;

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

InstanceFile parse_instance(const std::string& text);
std::string serialize_instance(const InstanceFile& instance);

/// {"players": [...], "sender": "S", "receiver": "R",
///  "edges": [{"id", "from", "to", "ambiguity": 2 | "channel": {...}}],
///  "adversary": {"threshold": 1} | {"sets": [["A", "B"], ...]}}
struct NetworkFile {
  Network network;
  PlayerAdversaryStructure adversary;

  friend bool operator==(const NetworkFile&, const NetworkFile&) = default;
};

NetworkFile parse_network(const std::string& text);
std::string serialize_network(const NetworkFile& file);

/// {"channel": {...}, "length": 2, "list_size": 1, "codewords": [["x", "y"], ...]}
ListCode parse_list_code(const std::string& text);
std::string serialize_list_code(const ListCode& code);

}  // namespace zerr::formats
