#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "zerr/ambiguity.hpp"

namespace zerr {

/// A zero-error channel: for each input symbol, the set of outputs it may
/// produce. Symbols are opaque tokens. `relation[i]` lists W(inputs[i]).
///
/// The struct is a plain value and may hold an invalid relation (that is what
/// validate_channel is for); every analysis entry point validates first.
struct Channel {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::vector<std::string>> relation;

  friend bool operator==(const Channel&, const Channel&) = default;
};

/// Every invariant violation, each naming the offending symbol. Empty means valid.
std::vector<std::string> validate_channel(const Channel& channel);

using OutputSet = boost::dynamic_bitset<std::uint64_t>;

/// Index form of a validated channel: one output bitset per input.
struct ChannelMatrix {
  std::size_t num_outputs = 0;
  std::vector<OutputSet> rows;
};

/// Throws ValidationError listing every violation.
ChannelMatrix compile(const Channel& channel);

/// List_{a,d}: inputs 1..d, outputs every a-subset of 1..d, x related to y iff x in y.
struct ListChannelSpec {
  std::uint64_t a = 1;
  std::uint64_t d = 2;

  friend bool operator==(const ListChannelSpec&, const ListChannelSpec&) = default;
};

/// Output subsets are named by their sorted members joined with ',' ("1,3").
/// Throws std::invalid_argument unless 1 <= a < d, or when C(d, a) exceeds 2^20.
Channel make_list_channel(const ListChannelSpec& spec);

/// Caps for the exhaustive ambiguity search.
struct SearchBudget {
  /// Largest subfamily size examined; a witness needing more raises BudgetExceeded.
  std::size_t max_subfamily = 64;
  /// Total DFS nodes across all subfamily sizes.
  std::uint64_t max_nodes = 200'000'000;
};

struct AmbiguityResult {
  Ambiguity value = Ambiguity::infinite();
  /// Finite case: a+1 input indices (ascending) whose output sets have empty
  /// intersection, lexicographically least among the smallest such families.
  std::vector<std::size_t> witness_inputs;
  /// Infinite case: least output index present in every W(x).
  std::optional<std::size_t> common_output;
  std::uint64_t nodes_explored = 0;
};

/// Exact ambiguity: one less than the size of the smallest family of inputs
/// whose output sets share no symbol, or infinite when all of them share one.
/// OpenMP kernel; returns exactly what ambiguity_serial returns.
AmbiguityResult ambiguity(const Channel& channel, const SearchBudget& budget = {});
AmbiguityResult ambiguity(const ChannelMatrix& matrix, const SearchBudget& budget = {});

/// Single-threaded reference for the same search.
AmbiguityResult ambiguity_serial(const ChannelMatrix& matrix, const SearchBudget& budget = {});

/// w1 can be simulated from w0 iff A(w0) <= A(w1). Feedback never changes the
/// verdict; the flag only records what the caller asked for.
bool achievable(const Channel& w0, const Channel& w1, bool with_feedback = false);

/// The List_a representative (a, a+1) of the channel's equivalence class, or
/// nullopt for trivial (infinite-ambiguity) channels.
std::optional<ListChannelSpec> canonical_list_equivalent(const Channel& channel);

}  // namespace zerr
