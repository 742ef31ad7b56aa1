#include "zerr/adversim.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "zerr/errors.hpp"

namespace zerr {
namespace {

std::uint64_t capacity(const Ambiguity& a) {
  return a.is_finite() ? a.value() : std::numeric_limits<std::uint64_t>::max();
}

void check_shape(std::size_t channels, std::span<const Ambiguity> ambiguities,
                 const HonestSetStructure& structure) {
  if (channels != ambiguities.size() || structure.n() != ambiguities.size()) {
    throw std::invalid_argument("transcript, ambiguities and structure disagree on channel count");
  }
}

// Channels whose emission fits their ambiguity; the rest are provably corrupt.
std::vector<bool> usable_channels(const ParallelTranscript& t, std::span<const Ambiguity> amb) {
  std::vector<bool> usable(t.emitted.size());
  for (std::size_t j = 0; j < t.emitted.size(); ++j) {
    usable[j] = t.emitted[j].size() <= capacity(amb[j]);
  }
  return usable;
}

StrategyOutcome make_outcome(std::set<Value> list, Value truth) {
  StrategyOutcome out;
  out.contains_truth = list.contains(truth);
  out.list_size = list.size();
  out.receiver_list = std::move(list);
  return out;
}

}  // namespace

bool is_valid_transcript(const ParallelTranscript& transcript, std::span<const Ambiguity> ambiguities,
                         const HonestSetStructure& structure) {
  check_shape(transcript.emitted.size(), ambiguities, structure);
  for (std::size_t j = 0; j < transcript.emitted.size(); ++j) {
    if (transcript.corrupted.contains(j)) {
      continue;
    }
    const auto& e = transcript.emitted[j];
    if (!e.contains(transcript.true_value) || e.size() > capacity(ambiguities[j])) {
      return false;
    }
  }
  return std::any_of(structure.sets().begin(), structure.sets().end(), [&](const auto& h) {
    return std::none_of(h.begin(), h.end(), [&](auto j) { return transcript.corrupted.contains(j); });
  });
}

StrategyOutcome receiver_general(const ParallelTranscript& transcript,
                                 std::span<const Ambiguity> ambiguities,
                                 const HonestSetStructure& structure) {
  check_shape(transcript.emitted.size(), ambiguities, structure);
  const auto usable = usable_channels(transcript, ambiguities);
  std::set<Value> list;
  for (const auto& h : structure.sets()) {
    if (!std::all_of(h.begin(), h.end(), [&](auto j) { return usable[j]; })) {
      continue;
    }
    for (auto v : transcript.emitted[h.front()]) {
      if (std::all_of(h.begin(), h.end(), [&](auto j) { return transcript.emitted[j].contains(v); })) {
        list.insert(v);
      }
    }
  }
  return make_outcome(std::move(list), transcript.true_value);
}

StrategyOutcome receiver_threshold(const ParallelTranscript& transcript, const ThresholdSpec& spec,
                                   std::span<const std::size_t> subset) {
  const auto n = spec.ambiguities.size();
  if (transcript.emitted.size() != n) {
    throw std::invalid_argument("transcript and threshold spec disagree on channel count");
  }
  std::set<std::size_t> g(subset.begin(), subset.end());
  if (g.size() != subset.size() || g.size() <= spec.t || (!g.empty() && *g.rbegin() >= n)) {
    throw std::invalid_argument("subset must hold more than t distinct channel indices");
  }
  std::uint64_t sum = 0;
  for (auto j : g) {
    if (spec.ambiguities[j].is_infinite()) {
      throw std::invalid_argument("subset contains an infinite-ambiguity channel");
    }
    sum += spec.ambiguities[j].value();
  }
  const auto best = threshold_ambiguity(spec).value;
  if (best != Ambiguity::finite(sum / (g.size() - spec.t))) {
    throw std::invalid_argument("subset does not attain the threshold minimum");
  }

  const auto usable = usable_channels(transcript, spec.ambiguities);
  std::map<Value, std::size_t> count;
  for (auto j : g) {
    if (!usable[j]) {
      continue;
    }
    for (auto v : transcript.emitted[j]) {
      ++count[v];
    }
  }
  std::set<Value> list;
  for (const auto& [v, c] : count) {
    if (c >= g.size() - spec.t) {
      list.insert(v);
    }
  }
  return make_outcome(std::move(list), transcript.true_value);
}

ParallelTranscript adversary_general(const HonestSetStructure& structure,
                                     std::span<const Ambiguity> ambiguities,
                                     const Allocation& allocation, Value true_value,
                                     std::span<const Value> decoys) {
  check_shape(ambiguities.size(), ambiguities, structure);
  const auto optimum = parallel_ambiguity(ambiguities, structure).value;
  if (optimum.is_infinite()) {
    throw std::invalid_argument("no finite construction: the structure has an unconstrained honest set");
  }
  if (!is_feasible(allocation, ambiguities, structure)) {
    throw std::invalid_argument("allocation violates a channel capacity");
  }
  if (allocation.objective() != optimum.value()) {
    throw std::invalid_argument("allocation is not optimal (" + std::to_string(allocation.objective()) +
                                " < " + optimum.to_string() + ")");
  }
  std::vector<Value> pool(decoys.begin(), decoys.end());
  std::sort(pool.begin(), pool.end());
  if (pool.size() + 1 != optimum.value() ||
      std::adjacent_find(pool.begin(), pool.end()) != pool.end() ||
      std::binary_search(pool.begin(), pool.end(), true_value)) {
    throw std::invalid_argument("need exactly " + std::to_string(optimum.value() - 1) +
                                " distinct decoys different from the true value");
  }

  const auto& a = allocation.values;
  const auto r = static_cast<std::size_t>(
      std::find_if(a.begin(), a.end(), [](auto v) { return v > 0; }) - a.begin());

  std::vector<std::vector<Value>> assigned(structure.size());
  auto next_decoy = pool.begin();
  for (std::size_t i = 0; i < structure.size(); ++i) {
    for (std::uint64_t slot = 0; slot < a[i]; ++slot) {
      if (i == r && slot == 0) {
        assigned[i].push_back(true_value);
      } else {
        assigned[i].push_back(*next_decoy++);
      }
    }
  }

  ParallelTranscript t;
  t.true_value = true_value;
  t.emitted.resize(structure.n());
  for (std::size_t i = 0; i < structure.size(); ++i) {
    for (auto j : structure[i]) {
      t.emitted[j].insert(assigned[i].begin(), assigned[i].end());
    }
  }
  for (std::size_t j = 0; j < structure.n(); ++j) {
    if (!structure.contains(r, j)) {
      t.corrupted.insert(j);
    }
  }
  return t;
}

ParallelTranscript adversary_threshold(const ThresholdSpec& spec, Value true_value,
                                       std::span<const Value> decoys) {
  const auto target = threshold_ambiguity(spec).value;
  if (target.is_infinite()) {
    throw std::invalid_argument("no finite construction: threshold ambiguity is infinite");
  }
  const auto ap = target.value();
  std::vector<Value> candidates{true_value};
  candidates.insert(candidates.end(), decoys.begin(), decoys.end());
  {
    auto sorted = candidates;
    std::sort(sorted.begin(), sorted.end());
    if (candidates.size() != ap || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("need exactly " + std::to_string(ap - 1) +
                                  " distinct decoys different from the true value");
    }
  }

  const auto n = spec.ambiguities.size();
  ParallelTranscript t;
  t.true_value = true_value;
  t.emitted.resize(n);
  std::vector<std::size_t> small;  // channels with ambiguity below the target
  for (std::size_t j = 0; j < n; ++j) {
    if (spec.ambiguities[j] >= target) {
      t.emitted[j].insert(candidates.begin(), candidates.end());
    } else {
      small.push_back(j);
    }
  }

  if (small.size() <= spec.t) {
    t.corrupted.insert(small.begin(), small.end());
    return t;
  }
  const auto repeats = small.size() - spec.t;
  std::uint64_t room = 0;
  for (auto j : small) {
    room += spec.ambiguities[j].value();
  }
  if (room < ap * repeats) {
    throw std::logic_error("threshold construction infeasible: capacity " + std::to_string(room) +
                           " below " + std::to_string(ap * repeats));
  }
  // candidates cycled `repeats` times; each channel takes a run shorter than ap,
  // so it never sees a value twice and no value lands twice on one channel.
  std::uint64_t cursor = 0;
  const auto slots = ap * repeats;
  for (auto j : small) {
    const auto take = std::min<std::uint64_t>(spec.ambiguities[j].value(), slots - cursor);
    for (std::uint64_t s = 0; s < take; ++s, ++cursor) {
      t.emitted[j].insert(candidates[cursor % ap]);
    }
  }
  for (auto j : small) {
    if (!t.emitted[j].contains(true_value)) {
      t.corrupted.insert(j);
    }
  }
  return t;
}

bool indistinguishability_check(const ParallelTranscript& transcript,
                                const HonestSetStructure& structure,
                                std::span<const Ambiguity> ambiguities,
                                const std::set<Value>& candidates) {
  check_shape(transcript.emitted.size(), ambiguities, structure);
  const auto usable = usable_channels(transcript, ambiguities);
  return std::all_of(candidates.begin(), candidates.end(), [&](Value v) {
    return std::any_of(structure.sets().begin(), structure.sets().end(), [&](const auto& h) {
      return std::all_of(h.begin(), h.end(),
                         [&](auto j) { return usable[j] && transcript.emitted[j].contains(v); });
    });
  });
}

namespace {

using Mask = std::uint64_t;

Mask mask_of(const std::vector<std::size_t>& set) {
  Mask m = 0;
  for (auto j : set) {
    m |= Mask{1} << j;
  }
  return m;
}

// Channel subsets that contain at least one honest set, ascending.
std::vector<Mask> candidate_patterns(const HonestSetStructure& structure) {
  const auto n = structure.n();
  if (n > 20) {
    throw BudgetExceeded("transcript enumeration supports at most 20 channels");
  }
  std::vector<Mask> honest;
  for (const auto& h : structure.sets()) {
    honest.push_back(mask_of(h));
  }
  std::vector<Mask> out;
  for (Mask m = 1; m < (Mask{1} << n); ++m) {
    if (std::any_of(honest.begin(), honest.end(), [&](Mask h) { return (h & m) == h; })) {
      out.push_back(m);
    }
  }
  return out;
}

// An infinite channel can carry every value of the space, which is all it could ever use.
std::vector<std::uint64_t> capacities(std::span<const Ambiguity> ambiguities, std::size_t value_space) {
  std::vector<std::uint64_t> out;
  for (const auto& a : ambiguities) {
    out.push_back(std::min<std::uint64_t>(capacity(a), value_space));
  }
  return out;
}

bool fits(Mask pattern, const std::vector<std::uint64_t>& load, const std::vector<std::uint64_t>& cap) {
  for (std::size_t j = 0; j < cap.size(); ++j) {
    if ((pattern >> j & 1) && load[j] + 1 > cap[j]) {
      return false;
    }
  }
  return true;
}

void add(Mask pattern, std::vector<std::uint64_t>& load, int sign) {
  for (std::size_t j = 0; j < load.size(); ++j) {
    if (pattern >> j & 1) {
      load[j] = static_cast<std::uint64_t>(static_cast<std::int64_t>(load[j]) + sign);
    }
  }
}

ParallelTranscript materialize(const std::vector<Mask>& values, std::size_t n) {
  ParallelTranscript t;
  t.emitted.resize(n);
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t j = 0; j < n; ++j) {
      if (values[v] >> j & 1) {
        t.emitted[j].insert(v);
      }
    }
  }
  return t;
}

// Multisets of candidate patterns (one per value) under the load caps.
struct GameSearch {
  const std::vector<Mask>& patterns;
  const std::vector<std::uint64_t>& cap;
  std::size_t value_space;
  std::uint64_t max_nodes;

  std::uint64_t nodes = 0;
  std::vector<Mask> current{};
  std::vector<Mask> best{};
  std::vector<std::uint64_t> load{};

  void descend(std::size_t start) {
    if (++nodes > max_nodes) {
      return;
    }
    if (current.size() > best.size()) {
      best = current;
    }
    if (current.size() == value_space) {
      return;
    }
    for (auto p = start; p < patterns.size(); ++p) {
      if (!fits(patterns[p], load, cap)) {
        continue;
      }
      add(patterns[p], load, +1);
      current.push_back(patterns[p]);
      descend(p);
      current.pop_back();
      add(patterns[p], load, -1);
      if (nodes > max_nodes) {
        return;
      }
    }
  }
};

std::uint64_t confirm_game_value(const std::vector<Mask>& best, std::span<const Ambiguity> ambiguities,
                                 const HonestSetStructure& structure) {
  auto t = materialize(best, structure.n());
  std::set<Value> candidates;
  for (std::size_t v = 0; v < best.size(); ++v) {
    candidates.insert(v);
  }
  if (!indistinguishability_check(t, structure, ambiguities, candidates)) {
    throw std::logic_error("enumerated transcript failed its indistinguishability check");
  }
  return best.size();
}

[[noreturn]] void game_over_budget(std::uint64_t max_nodes) {
  throw BudgetExceeded("empirical ambiguity: explored more than " + std::to_string(max_nodes) +
                       " transcripts");
}

}  // namespace

std::uint64_t empirical_ambiguity_serial(std::span<const Ambiguity> ambiguities,
                                         const HonestSetStructure& structure,
                                         std::size_t value_space, std::uint64_t max_nodes) {
  check_shape(ambiguities.size(), ambiguities, structure);
  const auto cap = capacities(ambiguities, value_space);
  const auto patterns = candidate_patterns(structure);
  GameSearch search{patterns, cap, value_space, max_nodes};
  search.load.assign(cap.size(), 0);
  search.descend(0);
  if (search.nodes > max_nodes) {
    game_over_budget(max_nodes);
  }
  return confirm_game_value(search.best, ambiguities, structure);
}

std::uint64_t empirical_ambiguity(std::span<const Ambiguity> ambiguities,
                                  const HonestSetStructure& structure, std::size_t value_space,
                                  std::uint64_t max_nodes) {
  check_shape(ambiguities.size(), ambiguities, structure);
  const auto cap = capacities(ambiguities, value_space);
  const auto patterns = candidate_patterns(structure);
  if (value_space == 0) {
    return 0;
  }
  // Split on the first value's pattern; the empty root is counted once.
  const auto roots = static_cast<std::int64_t>(patterns.size());
  std::vector<std::uint64_t> nodes(patterns.size(), 0);
  std::vector<std::vector<Mask>> best(patterns.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t p = 0; p < roots; ++p) {
    const auto slot = static_cast<std::size_t>(p);
    GameSearch search{patterns, cap, value_space, max_nodes};
    search.load.assign(cap.size(), 0);
    if (!fits(patterns[slot], search.load, cap)) {
      continue;
    }
    add(patterns[slot], search.load, +1);
    search.current.push_back(patterns[slot]);
    search.descend(slot);
    nodes[slot] = search.nodes;
    best[slot] = std::move(search.best);
  }

  std::uint64_t total = 1;
  std::vector<Mask> overall;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    total += nodes[p];
    if (best[p].size() > overall.size()) {
      overall = best[p];
    }
  }
  if (total > max_nodes) {
    game_over_budget(max_nodes);
  }
  return confirm_game_value(overall, ambiguities, structure);
}

std::uint64_t for_each_transcript(std::span<const Ambiguity> ambiguities,
                                  const HonestSetStructure& structure, const TranscriptSpace& space,
                                  const TranscriptVisitor& visit) {
  check_shape(ambiguities.size(), ambiguities, structure);
  const auto n = structure.n();
  if (space.value_space == 0) {
    throw std::invalid_argument("value space must hold at least one value");
  }
  const auto cap = capacities(ambiguities, space.value_space);
  const auto candidates = candidate_patterns(structure);
  std::vector<Mask> patterns = candidates;
  if (!space.candidate_decoys_only) {
    patterns.clear();
    for (Mask m = 1; m < (Mask{1} << n); ++m) patterns.push_back(m);
  }
  std::vector<Mask> honest;
  for (const auto& h : structure.sets()) honest.push_back(mask_of(h));

  std::uint64_t count = 0;
  std::vector<std::uint64_t> load(n, 0);
  std::vector<Mask> values;
  std::vector<Value> truths;
  ParallelTranscript t;
  t.emitted.resize(n);

  auto emit = [&]() {
    truths.clear();
    for (std::size_t v = 0; v < values.size(); ++v) {
      if (std::binary_search(candidates.begin(), candidates.end(), values[v])) truths.push_back(v);
    }
    if (truths.empty()) return;
    if (++count > space.max_transcripts) {
      throw BudgetExceeded("transcript enumeration exceeded " + std::to_string(space.max_transcripts) +
                           " emission profiles");
    }
    // Representative: the first admissible truth, honest on the first honest set it covers.
    const Mask truth = values[truths.front()];
    const Mask h = *std::find_if(honest.begin(), honest.end(), [&](Mask m) { return (m & truth) == m; });
    t.true_value = truths.front();
    t.corrupted.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (!(h >> j & 1)) t.corrupted.insert(j);
    }
    visit(t, truths);
  };
  auto descend = [&](auto&& self, std::size_t start) -> void {
    emit();
    if (values.size() == space.value_space) return;
    for (auto p = start; p < patterns.size(); ++p) {
      const Mask m = patterns[p];
      if (!fits(m, load, cap)) continue;
      const Value v = values.size();
      add(m, load, +1);
      values.push_back(m);
      for (std::size_t j = 0; j < n; ++j) {
        if (m >> j & 1) t.emitted[j].insert(t.emitted[j].end(), v);
      }
      self(self, p);
      for (std::size_t j = 0; j < n; ++j) {
        if (m >> j & 1) t.emitted[j].erase(v);
      }
      values.pop_back();
      add(m, load, -1);
    }
  };
  descend(descend, 0);
  return count;
}

}  // namespace zerr
