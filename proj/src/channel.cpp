#include "zerr/channel.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "zerr/errors.hpp"

namespace zerr {

std::vector<std::string> validate_channel(const Channel& channel) {
  std::vector<std::string> violations;

  std::unordered_set<std::string> seen;
  for (const auto& x : channel.inputs) {
    if (!seen.insert(x).second) {
      violations.push_back("duplicate input symbol '" + x + "'");
    }
  }
  std::unordered_set<std::string> declared_outputs;
  for (const auto& y : channel.outputs) {
    if (!declared_outputs.insert(y).second) {
      violations.push_back("duplicate output symbol '" + y + "'");
    }
  }
  if (channel.relation.size() != channel.inputs.size()) {
    violations.push_back("relation has " + std::to_string(channel.relation.size()) +
                         " rows for " + std::to_string(channel.inputs.size()) + " inputs");
  }

  const auto rows = std::min(channel.relation.size(), channel.inputs.size());
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& x = channel.inputs[i];
    const auto& ys = channel.relation[i];
    if (ys.empty()) {
      violations.push_back("empty output set for input " + x);
    }
    std::unordered_set<std::string> row;
    for (const auto& y : ys) {
      if (!declared_outputs.contains(y)) {
        violations.push_back("input " + x + " relates to undeclared output '" + y + "'");
      }
      if (!row.insert(y).second) {
        violations.push_back("input " + x + " lists output '" + y + "' twice");
      }
    }
  }
  if (channel.inputs.empty()) {
    violations.push_back("channel has no input symbols");
  }
  return violations;
}

ChannelMatrix compile(const Channel& channel) {
  if (auto violations = validate_channel(channel); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < channel.outputs.size(); ++j) {
    index.emplace(channel.outputs[j], j);
  }
  ChannelMatrix matrix;
  matrix.num_outputs = channel.outputs.size();
  matrix.rows.reserve(channel.inputs.size());
  for (const auto& ys : channel.relation) {
    OutputSet row(matrix.num_outputs);
    for (const auto& y : ys) {
      row.set(index.at(y));
    }
    matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

namespace {

void for_each_subset(std::uint64_t d, std::uint64_t a,
                     const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
  std::vector<std::uint64_t> pick(a);
  for (std::uint64_t i = 0; i < a; ++i) {
    pick[i] = i + 1;
  }
  while (true) {
    visit(pick);
    // next combination in lexicographic order
    std::int64_t i = static_cast<std::int64_t>(a) - 1;
    while (i >= 0 && pick[i] == d - a + static_cast<std::uint64_t>(i) + 1) {
      --i;
    }
    if (i < 0) {
      return;
    }
    ++pick[i];
    for (auto j = static_cast<std::size_t>(i) + 1; j < a; ++j) {
      pick[j] = pick[j - 1] + 1;
    }
  }
}

std::string subset_token(const std::vector<std::uint64_t>& members) {
  std::string token;
  for (auto m : members) {
    if (!token.empty()) {
      token += ',';
    }
    token += std::to_string(m);
  }
  return token;
}

}  // namespace

Channel make_list_channel(const ListChannelSpec& spec) {
  if (spec.a < 1 || spec.a >= spec.d) {
    throw std::invalid_argument("list channel needs 1 <= a < d, got a=" + std::to_string(spec.a) +
                                " d=" + std::to_string(spec.d));
  }
  // C(d, a) guard, computed incrementally so it cannot overflow before the check.
  constexpr std::uint64_t kMaxOutputs = 1u << 20;
  std::uint64_t count = 1;
  for (std::uint64_t i = 1; i <= std::min(spec.a, spec.d - spec.a); ++i) {
    count = count * (spec.d - i + 1) / i;
    if (count > kMaxOutputs) {
      throw std::invalid_argument("list channel output alphabet too large");
    }
  }

  Channel channel;
  for (std::uint64_t x = 1; x <= spec.d; ++x) {
    channel.inputs.push_back(std::to_string(x));
  }
  channel.relation.resize(spec.d);
  for_each_subset(spec.d, spec.a, [&](const std::vector<std::uint64_t>& members) {
    auto token = subset_token(members);
    for (auto m : members) {
      channel.relation[m - 1].push_back(token);
    }
    channel.outputs.push_back(std::move(token));
  });
  return channel;
}

namespace {

// Distinct output sets, each represented by its first input, plus suffix
// intersections used to prune branches that can never reach an empty
// intersection.
struct SearchSpace {
  std::vector<std::size_t> representative;  // input index
  std::vector<const OutputSet*> rows;
  std::vector<OutputSet> suffix;  // suffix[i] = rows[i] & ... & rows[m-1]
};

SearchSpace make_search_space(const ChannelMatrix& matrix) {
  SearchSpace space;
  std::map<OutputSet, std::size_t> first;
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    if (first.emplace(matrix.rows[i], i).second) {
      space.representative.push_back(i);
      space.rows.push_back(&matrix.rows[i]);
    }
  }
  const auto m = space.rows.size();
  space.suffix.resize(m + 1, OutputSet(matrix.num_outputs));
  space.suffix[m].set();
  for (std::size_t i = m; i-- > 0;) {
    space.suffix[i] = space.suffix[i + 1] & *space.rows[i];
  }
  return space;
}

// Depth-first search for the lexicographically least k-subfamily (in
// representative order) whose intersection is empty, within the subtree whose
// smallest element is fixed by the caller. Stops once nodes exceed `cap`.
class SubfamilySearch {
 public:
  SubfamilySearch(const SearchSpace& space, std::size_t k, std::uint64_t cap)
      : space_(space), k_(k), cap_(cap) {}

  bool run_from(std::size_t first) {
    chosen_.assign(1, first);
    ++nodes_;
    return descend(*space_.rows[first], first + 1);
  }

  const std::vector<std::size_t>& chosen() const { return chosen_; }
  std::uint64_t nodes() const { return nodes_; }
  bool aborted() const { return nodes_ > cap_; }

 private:
  bool descend(const OutputSet& acc, std::size_t start) {
    if (chosen_.size() == k_) {
      return acc.none();
    }
    const auto m = space_.rows.size();
    const auto needed = k_ - chosen_.size();
    for (std::size_t i = start; i + needed <= m; ++i) {
      if (nodes_ > cap_) {
        return false;
      }
      // Every completion from here keeps the common part of acc and the suffix.
      if (acc.intersects(space_.suffix[i])) {
        return false;
      }
      ++nodes_;
      chosen_.push_back(i);
      if (descend(acc & *space_.rows[i], i + 1)) {
        return true;
      }
      chosen_.pop_back();
    }
    return false;
  }

  const SearchSpace& space_;
  std::size_t k_;
  std::uint64_t cap_;
  std::uint64_t nodes_ = 0;
  std::vector<std::size_t> chosen_;
};

struct LevelOutcome {
  bool found = false;
  std::vector<std::size_t> chosen;
  std::uint64_t nodes = 0;
};

LevelOutcome search_level_serial(const SearchSpace& space, std::size_t k, std::uint64_t cap) {
  LevelOutcome out;
  const auto m = space.rows.size();
  for (std::size_t first = 0; first + k <= m; ++first) {
    SubfamilySearch search(space, k, cap - std::min(cap, out.nodes));
    const bool hit = search.run_from(first);
    out.nodes += search.nodes();
    if (out.nodes > cap) {
      return out;
    }
    if (hit) {
      out.found = true;
      out.chosen = search.chosen();
      return out;
    }
  }
  return out;
}

LevelOutcome search_level_parallel(const SearchSpace& space, std::size_t k, std::uint64_t cap) {
  const auto m = space.rows.size();
  if (m < k) {
    return {};
  }
  const auto roots = static_cast<std::int64_t>(m - k + 1);
  std::vector<LevelOutcome> per_root(static_cast<std::size_t>(roots));
  std::atomic<std::int64_t> best{roots};

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t first = 0; first < roots; ++first) {
    if (first > best.load(std::memory_order_relaxed)) {
      continue;
    }
    SubfamilySearch search(space, k, cap);
    auto& slot = per_root[static_cast<std::size_t>(first)];
    slot.found = search.run_from(static_cast<std::size_t>(first)) && !search.aborted();
    slot.nodes = search.nodes();
    if (slot.found) {
      slot.chosen = search.chosen();
      auto current = best.load();
      while (first < current && !best.compare_exchange_weak(current, first)) {
      }
    }
  }

  // Same accounting as the serial scan: roots up to and including the first hit.
  LevelOutcome out;
  for (std::int64_t first = 0; first < roots; ++first) {
    const auto& slot = per_root[static_cast<std::size_t>(first)];
    out.nodes += slot.nodes;
    if (out.nodes > cap) {
      out.found = false;
      return out;
    }
    if (slot.found) {
      out.found = true;
      out.chosen = slot.chosen;
      return out;
    }
  }
  return out;
}

template <typename LevelFn>
AmbiguityResult run_ambiguity(const ChannelMatrix& matrix, const SearchBudget& budget,
                              LevelFn search_level) {
  if (matrix.rows.empty()) {
    throw std::invalid_argument("channel has no inputs");
  }
  const auto space = make_search_space(matrix);
  AmbiguityResult result;

  if (const auto& all = space.suffix.front(); all.any()) {
    result.value = Ambiguity::infinite();
    result.common_output = all.find_first();
    return result;
  }

  const auto m = space.rows.size();
  for (std::size_t k = 2; k <= m; ++k) {
    if (k > budget.max_subfamily) {
      throw BudgetExceeded("ambiguity search: subfamily size " + std::to_string(k) +
                           " exceeds cap " + std::to_string(budget.max_subfamily));
    }
    const auto remaining = budget.max_nodes - std::min(budget.max_nodes, result.nodes_explored);
    auto level = search_level(space, k, remaining);
    result.nodes_explored += level.nodes;
    if (result.nodes_explored > budget.max_nodes) {
      throw BudgetExceeded("ambiguity search: explored more than " +
                           std::to_string(budget.max_nodes) + " nodes");
    }
    if (level.found) {
      result.value = Ambiguity::finite(k - 1);
      for (auto r : level.chosen) {
        result.witness_inputs.push_back(space.representative[r]);
      }
      return result;
    }
  }
  // The full family has an empty intersection, so some level always succeeds.
  throw std::logic_error("ambiguity search exhausted without a witness");
}

}  // namespace

AmbiguityResult ambiguity(const ChannelMatrix& matrix, const SearchBudget& budget) {
  return run_ambiguity(matrix, budget, search_level_parallel);
}

AmbiguityResult ambiguity_serial(const ChannelMatrix& matrix, const SearchBudget& budget) {
  return run_ambiguity(matrix, budget, search_level_serial);
}

AmbiguityResult ambiguity(const Channel& channel, const SearchBudget& budget) {
  return ambiguity(compile(channel), budget);
}

bool achievable(const Channel& w0, const Channel& w1, bool /*with_feedback*/) {
  return ambiguity(w0).value <= ambiguity(w1).value;
}

std::optional<ListChannelSpec> canonical_list_equivalent(const Channel& channel) {
  const auto result = ambiguity(channel);
  if (result.value.is_infinite()) {
    return std::nullopt;
  }
  const auto a = result.value.value();
  return ListChannelSpec{a, a + 1};
}

}  // namespace zerr
