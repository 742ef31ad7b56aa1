#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "zerr/ambiguity.hpp"
#include "zerr/composition.hpp"

namespace zerr {

using Value = std::uint64_t;

/// One round of parallel transmission as the receiver sees it, plus the
/// ground truth the adversary knows.
struct ParallelTranscript {
  /// emitted[j]: values delivered over channel j.
  std::vector<std::set<Value>> emitted;
  Value true_value = 0;
  std::set<std::size_t> corrupted;

  friend bool operator==(const ParallelTranscript&, const ParallelTranscript&) = default;
};

struct StrategyOutcome {
  std::set<Value> receiver_list;
  bool contains_truth = false;
  std::size_t list_size = 0;
};

/// Honest channels emit the true value and at most A_j values, and the honest
/// channels include some member of the structure.
bool is_valid_transcript(const ParallelTranscript& transcript, std::span<const Ambiguity> ambiguities,
                         const HonestSetStructure& structure);

/// Every value that all channels of some honest set delivered. A channel that
/// delivered more than A_j values is corrupt and counts as silent.
StrategyOutcome receiver_general(const ParallelTranscript& transcript,
                                 std::span<const Ambiguity> ambiguities,
                                 const HonestSetStructure& structure);

/// Values delivered by at least |G| - t channels of G, where G must be a
/// minimizing subset for the threshold formula (see threshold_ambiguity).
/// Oversized emissions count as silent. Throws std::invalid_argument for any other G.
StrategyOutcome receiver_threshold(const ParallelTranscript& transcript, const ThresholdSpec& spec,
                                   std::span<const std::size_t> subset);

/// Lower-bound construction for general structures. Honest set h_r is the
/// first with a positive allocation; set i receives allocation[i] values
/// (h_r's first slot is the truth, decoys follow in ascending order); every
/// channel delivers the values of all sets containing it; channels outside h_r
/// are corrupt. Needs an optimal allocation and exactly objective-1 distinct decoys.
ParallelTranscript adversary_general(const HonestSetStructure& structure,
                                     std::span<const Ambiguity> ambiguities,
                                     const Allocation& allocation, Value true_value,
                                     std::span<const Value> decoys);

/// Lower-bound construction for threshold adversaries. Channels whose
/// ambiguity reaches the threshold value deliver every candidate; the others
/// receive each candidate |G^| - t times in round-robin order, and the t of
/// them missing the truth are the corrupt ones.
ParallelTranscript adversary_threshold(const ThresholdSpec& spec, Value true_value,
                                       std::span<const Value> decoys);

/// Whether each candidate could be the sender's value: some honest set has
/// every channel deliver it within its ambiguity.
bool indistinguishability_check(const ParallelTranscript& transcript,
                                const HonestSetStructure& structure,
                                std::span<const Ambiguity> ambiguities,
                                const std::set<Value>& candidates);

/// Largest candidate set the adversary can make indistinguishable, found by
/// exhausting transcripts over `value_space` values (up to renaming values).
/// Infinite channels may carry the whole value space. Throws BudgetExceeded
/// past max_nodes. OpenMP kernel.
std::uint64_t empirical_ambiguity(std::span<const Ambiguity> ambiguities,
                                  const HonestSetStructure& structure, std::size_t value_space,
                                  std::uint64_t max_nodes = 50'000'000);
std::uint64_t empirical_ambiguity_serial(std::span<const Ambiguity> ambiguities,
                                         const HonestSetStructure& structure,
                                         std::size_t value_space,
                                         std::uint64_t max_nodes = 50'000'000);

struct TranscriptSpace {
  /// Values 0..value_space-1.
  std::size_t value_space = 2;
  /// Skip decoys whose set of delivering channels contains no honest set.
  /// Such decoys never reach a receiver list and only use up capacity.
  bool candidate_decoys_only = true;
  /// Cap on visited emission profiles.
  std::uint64_t max_transcripts = 10'000'000;
};

/// `transcript` carries one admissible truth; `truths` lists every value that
/// is the truth in some valid transcript with these emissions (ascending).
using TranscriptVisitor =
    std::function<void(const ParallelTranscript& transcript, std::span<const Value> truths)>;

/// Visits every emission profile that fits within the channel ambiguities
/// (larger emissions are equivalent to silence for both receivers), up to
/// renaming values, once each. A receiver sees only the emissions, so one
/// visit stands for every valid transcript obtained by choosing the truth from
/// `truths` and corrupting the channels outside an honest set that delivered
/// it. Returns the number of profiles; throws BudgetExceeded past max_transcripts.
std::uint64_t for_each_transcript(std::span<const Ambiguity> ambiguities,
                                  const HonestSetStructure& structure, const TranscriptSpace& space,
                                  const TranscriptVisitor& visit);

}  // namespace zerr
