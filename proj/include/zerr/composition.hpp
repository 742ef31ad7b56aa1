#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "zerr/ambiguity.hpp"

namespace zerr {

using Rational = boost::multiprecision::cpp_rational;

/// The family of channel sets that may be the uncorrupted ones. Channel
/// indices are 0-based here (file formats use 1-based).
class HonestSetStructure {
 public:
  /// Sorts each set. Throws ValidationError if the family is empty, a set is
  /// empty, an index is out of range, or a set repeats.
  HonestSetStructure(std::size_t n, std::vector<std::vector<std::size_t>> sets);

  std::size_t n() const { return n_; }
  std::size_t size() const { return sets_.size(); }
  const std::vector<std::vector<std::size_t>>& sets() const { return sets_; }
  const std::vector<std::size_t>& operator[](std::size_t i) const { return sets_[i]; }

  /// Indices of the honest sets that contain channel j.
  std::vector<std::size_t> memberships(std::size_t channel) const;
  bool contains(std::size_t set, std::size_t channel) const;

  friend bool operator==(const HonestSetStructure&, const HonestSetStructure&) = default;

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> sets_;
};

/// All (n - t)-subsets of {0..n-1} in lexicographic order: up to t channels corrupt.
/// Throws std::invalid_argument unless t < n.
HonestSetStructure threshold_structure(std::size_t n, std::size_t t);

/// Ambiguity of a relay chain: the product of the links. Rejects an empty chain.
Ambiguity serial_ambiguity(std::span<const Ambiguity> chain);

/// Counts a_i of candidate values attributed to each honest set.
struct Allocation {
  std::vector<std::uint64_t> values;

  std::uint64_t objective() const;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Whether sum_{i : j in h_i} a_i <= A_j holds for every finite channel j.
bool is_feasible(const Allocation& allocation, std::span<const Ambiguity> ambiguities,
                 const HonestSetStructure& structure);

struct ParallelResult {
  Ambiguity value = Ambiguity::infinite();
  /// Optimal allocation, lexicographically greatest among optima. Empty when infinite.
  Allocation allocation;
  /// When infinite: the first honest set containing no finite-ambiguity channel.
  std::optional<std::size_t> unconstrained_set;
  std::uint64_t nodes_explored = 0;
};

/// Exact integer maximum of sum a_i subject to the per-channel capacity
/// constraints, by branch and bound under the rational relaxation.
/// Throws BudgetExceeded past `max_nodes` search nodes.
ParallelResult parallel_ambiguity(std::span<const Ambiguity> ambiguities,
                                  const HonestSetStructure& structure,
                                  std::uint64_t max_nodes = 100'000'000);

/// Optimum of the rational relaxation. Rejects infinite entries.
Rational lp_upper_bound(std::span<const Ambiguity> ambiguities, const HonestSetStructure& structure);

struct ThresholdSpec {
  std::vector<Ambiguity> ambiguities;
  std::size_t t = 0;
};

struct ThresholdResult {
  Ambiguity value = Ambiguity::infinite();
  /// Minimizing channel subset G (ascending indices). Empty when infinite.
  std::vector<std::size_t> witness;
};

/// min over |G| > t of floor(sum_{G} A / (|G| - t)), scanning prefixes of the
/// ambiguities sorted ascending. Throws std::invalid_argument unless t < n.
ThresholdResult threshold_ambiguity(const ThresholdSpec& spec);

/// Exhaustive oracle for parallel_ambiguity: enumerates every feasible integer
/// allocation. All ambiguities must be finite. Throws BudgetExceeded once more
/// than `cap` partial allocations have been visited. OpenMP kernel.
std::uint64_t brute_force_parallel(std::span<const Ambiguity> ambiguities,
                                   const HonestSetStructure& structure, std::uint64_t cap);

/// Single-threaded reference for brute_force_parallel.
std::uint64_t brute_force_parallel_serial(std::span<const Ambiguity> ambiguities,
                                          const HonestSetStructure& structure, std::uint64_t cap);

}  // namespace zerr
