#include "zerr/composition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "zerr/errors.hpp"
#include "zerr/lp.hpp"

namespace zerr {

HonestSetStructure::HonestSetStructure(std::size_t n, std::vector<std::vector<std::size_t>> sets)
    : n_(n), sets_(std::move(sets)) {
  std::vector<std::string> violations;
  if (sets_.empty()) {
    violations.push_back("honest set structure has no sets");
  }
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    auto& h = sets_[i];
    std::sort(h.begin(), h.end());
    if (h.empty()) {
      violations.push_back("honest set " + std::to_string(i + 1) + " is empty");
    }
    if (std::adjacent_find(h.begin(), h.end()) != h.end()) {
      violations.push_back("honest set " + std::to_string(i + 1) + " repeats a channel");
    }
    if (!h.empty() && h.back() >= n_) {
      violations.push_back("honest set " + std::to_string(i + 1) + " names channel " +
                           std::to_string(h.back() + 1) + " of only " + std::to_string(n_));
    }
    if (!seen.insert(h).second) {
      violations.push_back("honest set " + std::to_string(i + 1) + " duplicates an earlier set");
    }
  }
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }
}

std::vector<std::size_t> HonestSetStructure::memberships(std::size_t channel) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (contains(i, channel)) {
      out.push_back(i);
    }
  }
  return out;
}

bool HonestSetStructure::contains(std::size_t set, std::size_t channel) const {
  return std::binary_search(sets_[set].begin(), sets_[set].end(), channel);
}

HonestSetStructure threshold_structure(std::size_t n, std::size_t t) {
  if (t >= n) {
    throw std::invalid_argument("threshold needs t < n, got n=" + std::to_string(n) +
                                " t=" + std::to_string(t));
  }
  const auto size = n - t;
  std::vector<std::vector<std::size_t>> sets;
  std::vector<std::size_t> pick(size);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  while (true) {
    sets.push_back(pick);
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == n - size + i - 1) {
      --i;
    }
    if (i == 0) {
      break;
    }
    ++pick[i - 1];
    for (auto j = i; j < size; ++j) {
      pick[j] = pick[j - 1] + 1;
    }
  }
  return HonestSetStructure(n, std::move(sets));
}

Ambiguity serial_ambiguity(std::span<const Ambiguity> chain) {
  if (chain.empty()) {
    throw std::invalid_argument("serial chain must have at least one link");
  }
  Ambiguity product = Ambiguity::finite(1);
  for (const auto& link : chain) {
    product = product * link;
  }
  return product;
}

std::uint64_t Allocation::objective() const {
  return std::accumulate(values.begin(), values.end(), std::uint64_t{0});
}

namespace {

void check_dimensions(std::span<const Ambiguity> ambiguities, const HonestSetStructure& structure) {
  if (structure.n() != ambiguities.size()) {
    throw std::invalid_argument("structure covers " + std::to_string(structure.n()) +
                                " channels but " + std::to_string(ambiguities.size()) +
                                " ambiguities were given");
  }
}

// Finite-capacity channels of each honest set.
std::vector<std::vector<std::size_t>> constrained_members(std::span<const Ambiguity> ambiguities,
                                                          const HonestSetStructure& structure) {
  std::vector<std::vector<std::size_t>> out(structure.size());
  for (std::size_t i = 0; i < structure.size(); ++i) {
    for (auto j : structure[i]) {
      if (ambiguities[j].is_finite()) {
        out[i].push_back(j);
      }
    }
  }
  return out;
}

Rational relaxation(std::span<const Ambiguity> ambiguities, const HonestSetStructure& structure) {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (std::size_t j = 0; j < ambiguities.size(); ++j) {
    if (ambiguities[j].is_infinite()) {
      continue;
    }
    std::vector<Rational> row(structure.size());
    for (std::size_t i = 0; i < structure.size(); ++i) {
      row[i] = structure.contains(i, j) ? 1 : 0;
    }
    a.push_back(std::move(row));
    b.emplace_back(ambiguities[j].value());
  }
  const std::vector<Rational> c(structure.size(), Rational(1));
  auto value = lp::maximize(a, b, c);
  if (!value) {
    throw std::logic_error("relaxation unbounded although every honest set is constrained");
  }
  return *value;
}

std::uint64_t floor_of(const Rational& q) {
  using boost::multiprecision::cpp_int;
  cpp_int quotient = numerator(q) / denominator(q);
  return quotient.convert_to<std::uint64_t>();
}

class BranchAndBound {
 public:
  BranchAndBound(std::span<const Ambiguity> ambiguities,
                 std::vector<std::vector<std::size_t>> members, std::uint64_t ceiling,
                 std::uint64_t max_nodes)
      : members_(std::move(members)),
        ceiling_(ceiling),
        max_nodes_(max_nodes),
        residual_(ambiguities.size(), 0),
        current_(members_.size(), 0) {
    for (std::size_t j = 0; j < ambiguities.size(); ++j) {
      if (ambiguities[j].is_finite()) {
        residual_[j] = ambiguities[j].value();
      }
    }
  }

  void run() { descend(0, 0); }

  const std::vector<std::uint64_t>& best() const { return best_; }
  std::uint64_t best_value() const { return best_value_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::uint64_t cap(std::size_t i) const {
    auto c = std::numeric_limits<std::uint64_t>::max();
    for (auto j : members_[i]) {
      c = std::min(c, residual_[j]);
    }
    return c;
  }

  bool done() const { return found_ && best_value_ >= ceiling_; }

  void descend(std::size_t i, std::uint64_t sum) {
    if (++nodes_ > max_nodes_) {
      throw BudgetExceeded("parallel ambiguity: branch and bound exceeded " +
                           std::to_string(max_nodes_) + " nodes");
    }
    if (i == members_.size()) {
      if (!found_ || sum > best_value_) {
        found_ = true;
        best_value_ = sum;
        best_ = current_;
      }
      return;
    }
    std::uint64_t bound = sum;
    for (auto r = i; r < members_.size(); ++r) {
      bound += cap(r);
    }
    if (found_ && bound <= best_value_) {
      return;
    }
    // Larger values first: the first optimum reached is the lexicographically greatest.
    for (auto v = cap(i) + 1; v-- > 0;) {
      for (auto j : members_[i]) {
        residual_[j] -= v;
      }
      current_[i] = v;
      descend(i + 1, sum + v);
      current_[i] = 0;
      for (auto j : members_[i]) {
        residual_[j] += v;
      }
      if (done()) {
        return;
      }
    }
  }

  std::vector<std::vector<std::size_t>> members_;
  std::uint64_t ceiling_;
  std::uint64_t max_nodes_;
  std::vector<std::uint64_t> residual_;
  std::vector<std::uint64_t> current_;
  std::vector<std::uint64_t> best_;
  std::uint64_t best_value_ = 0;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace

bool is_feasible(const Allocation& allocation, std::span<const Ambiguity> ambiguities,
                 const HonestSetStructure& structure) {
  check_dimensions(ambiguities, structure);
  if (allocation.values.size() != structure.size()) {
    return false;
  }
  for (std::size_t j = 0; j < ambiguities.size(); ++j) {
    if (ambiguities[j].is_infinite()) {
      continue;
    }
    std::uint64_t load = 0;
    for (std::size_t i = 0; i < structure.size(); ++i) {
      if (structure.contains(i, j)) {
        load += allocation.values[i];
      }
    }
    if (load > ambiguities[j].value()) {
      return false;
    }
  }
  return true;
}

ParallelResult parallel_ambiguity(std::span<const Ambiguity> ambiguities,
                                  const HonestSetStructure& structure, std::uint64_t max_nodes) {
  check_dimensions(ambiguities, structure);
  ParallelResult result;
  auto members = constrained_members(ambiguities, structure);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].empty()) {
      result.value = Ambiguity::infinite();
      result.unconstrained_set = i;
      return result;
    }
  }
  const auto ceiling = floor_of(relaxation(ambiguities, structure));
  BranchAndBound search(ambiguities, std::move(members), ceiling, max_nodes);
  search.run();
  result.value = Ambiguity::finite(search.best_value());
  result.allocation.values = search.best();
  result.nodes_explored = search.nodes();
  return result;
}

Rational lp_upper_bound(std::span<const Ambiguity> ambiguities, const HonestSetStructure& structure) {
  check_dimensions(ambiguities, structure);
  for (const auto& a : ambiguities) {
    if (a.is_infinite()) {
      throw std::invalid_argument("lp_upper_bound needs finite ambiguities");
    }
  }
  return relaxation(ambiguities, structure);
}

ThresholdResult threshold_ambiguity(const ThresholdSpec& spec) {
  const auto n = spec.ambiguities.size();
  if (spec.t >= n) {
    throw std::invalid_argument("threshold needs t < n, got n=" + std::to_string(n) +
                                " t=" + std::to_string(spec.t));
  }
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < n; ++j) {
    if (spec.ambiguities[j].is_finite()) {
      order.push_back(j);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return spec.ambiguities[l].value() < spec.ambiguities[r].value();
  });

  ThresholdResult result;
  if (order.size() <= spec.t) {
    return result;
  }
  std::uint64_t prefix = 0;
  std::optional<std::uint64_t> best;
  std::size_t best_size = 0;
  for (std::size_t g = 1; g <= order.size(); ++g) {
    prefix += spec.ambiguities[order[g - 1]].value();
    if (g <= spec.t) {
      continue;
    }
    const auto candidate = prefix / (g - spec.t);
    if (!best || candidate < *best) {
      best = candidate;
      best_size = g;
    }
  }
  result.value = Ambiguity::finite(*best);
  result.witness.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_size));
  std::sort(result.witness.begin(), result.witness.end());
  return result;
}

namespace {

struct BruteForce {
  const HonestSetStructure& structure;
  std::vector<std::uint64_t> static_cap;
  std::uint64_t cap;

  std::uint64_t nodes = 0;
  std::uint64_t best = 0;

  // Enumerates every feasible completion of variables i.. given residual capacities.
  void enumerate(std::size_t i, std::uint64_t sum, std::vector<std::int64_t>& residual) {
    if (++nodes > cap) {
      return;
    }
    if (i == structure.size()) {
      best = std::max(best, sum);
      return;
    }
    for (std::uint64_t v = 0; v <= static_cap[i]; ++v) {
      bool ok = true;
      for (auto j : structure[i]) {
        residual[j] -= static_cast<std::int64_t>(v);
        ok = ok && residual[j] >= 0;
      }
      if (ok) {
        enumerate(i + 1, sum + v, residual);
      }
      for (auto j : structure[i]) {
        residual[j] += static_cast<std::int64_t>(v);
      }
      if (!ok || nodes > cap) {
        break;
      }
    }
  }
};

struct BruteForceSetup {
  std::vector<std::uint64_t> static_cap;
  std::vector<std::int64_t> residual;
};

BruteForceSetup brute_force_setup(std::span<const Ambiguity> ambiguities,
                                  const HonestSetStructure& structure) {
  check_dimensions(ambiguities, structure);
  BruteForceSetup setup;
  for (const auto& a : ambiguities) {
    if (a.is_infinite()) {
      throw std::invalid_argument("brute_force_parallel needs finite ambiguities");
    }
    setup.residual.push_back(static_cast<std::int64_t>(a.value()));
  }
  for (const auto& h : structure.sets()) {
    std::uint64_t c = std::numeric_limits<std::uint64_t>::max();
    for (auto j : h) {
      c = std::min(c, ambiguities[j].value());
    }
    setup.static_cap.push_back(c);
  }
  return setup;
}

[[noreturn]] void brute_force_over_budget(std::uint64_t cap) {
  throw BudgetExceeded("brute force allocation search exceeded " + std::to_string(cap) + " nodes");
}

}  // namespace

std::uint64_t brute_force_parallel_serial(std::span<const Ambiguity> ambiguities,
                                          const HonestSetStructure& structure, std::uint64_t cap) {
  auto setup = brute_force_setup(ambiguities, structure);
  BruteForce search{structure, setup.static_cap, cap};
  search.enumerate(0, 0, setup.residual);
  if (search.nodes > cap) {
    brute_force_over_budget(cap);
  }
  return search.best;
}

std::uint64_t brute_force_parallel(std::span<const Ambiguity> ambiguities,
                                   const HonestSetStructure& structure, std::uint64_t cap) {
  auto setup = brute_force_setup(ambiguities, structure);
  // Split on the value of the first variable; the root node is counted once here.
  const auto branches = static_cast<std::int64_t>(setup.static_cap[0] + 1);
  std::vector<std::uint64_t> nodes(static_cast<std::size_t>(branches), 0);
  std::vector<std::uint64_t> best(static_cast<std::size_t>(branches), 0);
  std::vector<char> feasible(static_cast<std::size_t>(branches), 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t v = 0; v < branches; ++v) {
    auto residual = setup.residual;
    bool ok = true;
    for (auto j : structure[0]) {
      residual[j] -= v;
      ok = ok && residual[j] >= 0;
    }
    if (!ok) {
      continue;
    }
    BruteForce search{structure, setup.static_cap, cap};
    search.enumerate(1, static_cast<std::uint64_t>(v), residual);
    const auto slot = static_cast<std::size_t>(v);
    nodes[slot] = search.nodes;
    best[slot] = search.best;
    feasible[slot] = 1;
  }

  std::uint64_t total = 1;
  std::uint64_t result = 0;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    total += nodes[v];
    if (feasible[v]) {
      result = std::max(result, best[v]);
    }
  }
  if (total > cap) {
    brute_force_over_budget(cap);
  }
  return result;
}

}  // namespace zerr
