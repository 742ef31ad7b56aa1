#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zerr/channel.hpp"

namespace zerr {

/// One channel use that turns `channel` into List_{a, a+1}, built from a+1
/// inputs whose output sets share no symbol. Values are numbered 1..a+1.
struct OneShotListCode {
  /// sender[v - 1] is the input index transmitted for value v.
  std::vector<std::size_t> sender;
  /// receiver[y] lists (ascending) the values whose input can produce output y.
  std::vector<std::vector<std::uint64_t>> receiver;
  std::uint64_t list_size = 0;
};

/// Throws std::invalid_argument if the witness repeats or names an unknown
/// input, or if its output sets have a common symbol.
OneShotListCode oneshot_list_decode(const Channel& channel, std::span<const std::size_t> witness);

/// Protocol simulating `target` over one use of a List_{a,d} carrier: the
/// sender transmits the 1-based position of its input, the receiver answers
/// with an output common to every listed input.
class ListSimulation {
 public:
  ListSimulation(ChannelMatrix target, ListChannelSpec carrier);

  const ListChannelSpec& carrier() const { return carrier_; }
  /// Carrier value (1..d) sent for target input x.
  std::uint64_t send(std::size_t input) const { return input + 1; }
  /// Target output index for a carrier list (distinct values in 1..d, at most
  /// a of them). Values beyond the target's inputs are ignored; the least
  /// common output in declaration order is returned.
  std::size_t receive(std::span<const std::uint64_t> carrier_list) const;

 private:
  ChannelMatrix target_;
  ListChannelSpec carrier_;
};

struct SimulationImpossible {
  Ambiguity target_ambiguity = Ambiguity::infinite();
  std::string reason;
};

/// A List_{a,d} carrier simulates `target` iff a <= A(target).
/// Throws std::invalid_argument when d is smaller than the target's input count.
std::variant<ListSimulation, SimulationImpossible> simulate_channel_from_list(
    const Channel& target, const ListChannelSpec& carrier);

/// d codewords of `length` channel uses, such that every output sequence is
/// consistent with at most list_size codewords.
struct ListCode {
  Channel base_channel;
  std::size_t length = 0;
  std::vector<std::vector<std::string>> codewords;
  std::uint64_t list_size = 0;

  friend bool operator==(const ListCode&, const ListCode&) = default;
};

enum class CodeSearchVerdict { found, impossible, not_found };

struct CodeSearchResult {
  CodeSearchVerdict verdict = CodeSearchVerdict::not_found;
  std::optional<ListCode> code;
  Ambiguity channel_ambiguity = Ambiguity::infinite();
  std::uint64_t nodes_explored = 0;
};

/// Shortest, then lexicographically least, code with d codewords and list
/// size a, trying lengths 1..max_length. `impossible` when A(channel) > a;
/// `not_found` when no code exists up to max_length. Throws BudgetExceeded
/// past max_nodes and std::invalid_argument unless d > a >= 1.
CodeSearchResult find_list_code(const Channel& channel, std::uint64_t a, std::uint64_t d,
                                std::size_t max_length, std::uint64_t max_nodes = 50'000'000);

struct CodeVerification {
  bool ok = true;
  /// On failure: one reachable output sequence and every codeword index consistent with it.
  std::vector<std::string> output_sequence;
  std::vector<std::size_t> consistent_codewords;
};

/// Exhaustive over every output sequence reachable from some codeword.
/// Throws ValidationError for structurally broken codes. OpenMP kernel.
CodeVerification verify_list_code(const ListCode& code);
CodeVerification verify_list_code_serial(const ListCode& code);

}  // namespace zerr
