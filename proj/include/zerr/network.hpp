#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "zerr/ambiguity.hpp"
#include "zerr/channel.hpp"
#include "zerr/composition.hpp"

namespace zerr {

/// A directed link between two players, labelled either with a full channel
/// (its ambiguity is computed) or directly with an ambiguity.
struct Edge {
  std::string id;
  std::string from;
  std::string to;
  std::variant<Ambiguity, Channel> label;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Network {
  std::vector<std::string> players;
  std::vector<Edge> edges;
  std::string sender;
  std::string receiver;

  friend bool operator==(const Network&, const Network&) = default;
};

/// Up to t intermediate players may be corrupt.
struct ThresholdAdversary {
  std::size_t t = 0;
  friend bool operator==(const ThresholdAdversary&, const ThresholdAdversary&) = default;
};

/// Any subset of one of these player sets may be corrupt.
struct ExplicitAdversary {
  std::vector<std::vector<std::string>> sets;
  friend bool operator==(const ExplicitAdversary&, const ExplicitAdversary&) = default;
};

using PlayerAdversaryStructure = std::variant<ThresholdAdversary, ExplicitAdversary>;

std::vector<std::string> validate_network(const Network& net);

/// Throws ValidationError for undeclared players or sets naming the sender or receiver.
void validate_adversary(const Network& net, const PlayerAdversaryStructure& adversary);

/// Edge indices from sender to receiver.
using Path = std::vector<std::size_t>;

/// Every simple directed sender-to-receiver path, ordered lexicographically by
/// edge-id sequence. Empty when the receiver is unreachable.
std::vector<Path> enumerate_paths(const Network& net);

Ambiguity edge_ambiguity(const Edge& edge);

struct PathDecomposition {
  std::vector<Path> paths;
  std::vector<Ambiguity> path_ambiguities;
  /// Distinct honest path sets, one per maximal corruptible player set, in
  /// enumeration order. Path indices are 0-based.
  std::vector<std::vector<std::size_t>> honest_sets;
  /// Edge ids used by more than one path.
  std::vector<std::string> shared_edges;

  /// Some corruptible set cuts every path.
  bool severed() const;
};

/// Collapses each path to one serial channel and derives which paths stay
/// honest under each maximal corruptible set. Throws std::invalid_argument
/// when no path exists and ValidationError for invalid inputs.
PathDecomposition decompose(const Network& net, const PlayerAdversaryStructure& adversary);

struct NetworkResult {
  Ambiguity value = Ambiguity::infinite();
  PathDecomposition decomposition;
  /// Optimal allocation over honest_sets; empty when infinite.
  Allocation allocation;
  std::vector<std::string> warnings;
};

/// End-to-end ambiguity between sender and receiver.
NetworkResult network_ambiguity(const Network& net, const PlayerAdversaryStructure& adversary);

std::string path_label(const Network& net, const Path& path);

}  // namespace zerr
