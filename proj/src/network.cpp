#include "zerr/network.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "zerr/errors.hpp"

namespace zerr {

std::vector<std::string> validate_network(const Network& net) {
  std::vector<std::string> violations;
  std::unordered_set<std::string> players;
  for (const auto& p : net.players) {
    if (!players.insert(p).second) {
      violations.push_back("duplicate player '" + p + "'");
    }
  }
  if (!players.contains(net.sender)) {
    violations.push_back("sender '" + net.sender + "' is not a declared player");
  }
  if (!players.contains(net.receiver)) {
    violations.push_back("receiver '" + net.receiver + "' is not a declared player");
  }
  if (net.sender == net.receiver) {
    violations.push_back("sender and receiver are the same player '" + net.sender + "'");
  }
  std::unordered_set<std::string> ids;
  for (const auto& e : net.edges) {
    if (!ids.insert(e.id).second) {
      violations.push_back("duplicate edge id '" + e.id + "'");
    }
    for (const auto* end : {&e.from, &e.to}) {
      if (!players.contains(*end)) {
        violations.push_back("edge '" + e.id + "' touches undeclared player '" + *end + "'");
      }
    }
    if (const auto* channel = std::get_if<Channel>(&e.label)) {
      for (const auto& v : validate_channel(*channel)) {
        violations.push_back("edge '" + e.id + "': " + v);
      }
    }
  }
  return violations;
}

void validate_adversary(const Network& net, const PlayerAdversaryStructure& adversary) {
  const auto* sets = std::get_if<ExplicitAdversary>(&adversary);
  if (!sets) {
    return;
  }
  std::unordered_set<std::string> players(net.players.begin(), net.players.end());
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < sets->sets.size(); ++i) {
    for (const auto& p : sets->sets[i]) {
      const auto where = "corruptible set " + std::to_string(i + 1);
      if (!players.contains(p)) {
        violations.push_back(where + " names undeclared player '" + p + "'");
      } else if (p == net.sender || p == net.receiver) {
        violations.push_back(where + " contains endpoint '" + p + "'");
      }
    }
  }
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }
}

namespace {

void require_valid(const Network& net) {
  if (auto violations = validate_network(net); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
}

std::vector<std::string> edge_ids(const Network& net, const Path& path) {
  std::vector<std::string> ids;
  ids.reserve(path.size());
  for (auto e : path) {
    ids.push_back(net.edges[e].id);
  }
  return ids;
}

// Players strictly between sender and receiver on the path.
std::vector<std::string> intermediates(const Network& net, const Path& path) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    out.push_back(net.edges[path[i]].to);
  }
  return out;
}

}  // namespace

std::vector<Path> enumerate_paths(const Network& net) {
  require_valid(net);
  std::unordered_map<std::string, std::vector<std::size_t>> outgoing;
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    outgoing[net.edges[e].from].push_back(e);
  }

  std::vector<Path> paths;
  Path current;
  std::unordered_set<std::string> visited{net.sender};
  auto walk = [&](auto&& self, const std::string& at) -> void {
    if (at == net.receiver) {
      paths.push_back(current);
      return;
    }
    for (auto e : outgoing[at]) {
      const auto& next = net.edges[e].to;
      if (visited.contains(next)) {
        continue;
      }
      visited.insert(next);
      current.push_back(e);
      self(self, next);
      current.pop_back();
      visited.erase(next);
    }
  };
  walk(walk, net.sender);

  std::sort(paths.begin(), paths.end(), [&](const Path& l, const Path& r) {
    return edge_ids(net, l) < edge_ids(net, r);
  });
  return paths;
}

Ambiguity edge_ambiguity(const Edge& edge) {
  if (const auto* a = std::get_if<Ambiguity>(&edge.label)) {
    return *a;
  }
  return ambiguity(std::get<Channel>(edge.label)).value;
}

bool PathDecomposition::severed() const {
  return std::any_of(honest_sets.begin(), honest_sets.end(),
                     [](const auto& h) { return h.empty(); });
}

namespace {

// Maximal corruptible player sets, as sets of names.
std::vector<std::set<std::string>> maximal_corruptible(const PlayerAdversaryStructure& adversary,
                                                       const std::vector<std::string>& relevant) {
  std::vector<std::set<std::string>> out;
  if (const auto* threshold = std::get_if<ThresholdAdversary>(&adversary)) {
    const auto m = relevant.size();
    const auto size = std::min(threshold->t, m);
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      std::set<std::string> z;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask[i]) {
          z.insert(relevant[i]);
        }
      }
      out.push_back(std::move(z));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
  }

  const auto& given = std::get<ExplicitAdversary>(adversary).sets;
  std::vector<std::set<std::string>> distinct;
  for (const auto& s : given) {
    std::set<std::string> z(s.begin(), s.end());
    if (std::find(distinct.begin(), distinct.end(), z) == distinct.end()) {
      distinct.push_back(std::move(z));
    }
  }
  for (const auto& z : distinct) {
    const bool dominated = std::any_of(distinct.begin(), distinct.end(), [&](const auto& other) {
      return other.size() > z.size() && std::includes(other.begin(), other.end(), z.begin(), z.end());
    });
    if (!dominated) {
      out.push_back(z);
    }
  }
  if (out.empty()) {
    out.emplace_back();
  }
  return out;
}

}  // namespace

PathDecomposition decompose(const Network& net, const PlayerAdversaryStructure& adversary) {
  require_valid(net);
  validate_adversary(net, adversary);

  PathDecomposition d;
  d.paths = enumerate_paths(net);
  if (d.paths.empty()) {
    throw std::invalid_argument("receiver '" + net.receiver + "' is unreachable from sender '" +
                                net.sender + "'");
  }

  std::vector<Ambiguity> edge_amb;
  edge_amb.reserve(net.edges.size());
  for (const auto& e : net.edges) {
    edge_amb.push_back(edge_ambiguity(e));
  }
  std::map<std::size_t, std::size_t> edge_uses;
  for (const auto& p : d.paths) {
    std::vector<Ambiguity> chain;
    for (auto e : p) {
      chain.push_back(edge_amb[e]);
      ++edge_uses[e];
    }
    d.path_ambiguities.push_back(serial_ambiguity(chain));
  }
  for (const auto& [e, uses] : edge_uses) {
    if (uses > 1) {
      d.shared_edges.push_back(net.edges[e].id);
    }
  }
  std::sort(d.shared_edges.begin(), d.shared_edges.end());

  // Intermediate players that appear on some path, in declaration order.
  std::set<std::string> on_paths;
  std::vector<std::vector<std::string>> path_players;
  for (const auto& p : d.paths) {
    path_players.push_back(intermediates(net, p));
    on_paths.insert(path_players.back().begin(), path_players.back().end());
  }
  std::vector<std::string> relevant;
  for (const auto& player : net.players) {
    if (on_paths.contains(player)) {
      relevant.push_back(player);
    }
  }

  for (const auto& z : maximal_corruptible(adversary, relevant)) {
    std::vector<std::size_t> honest;
    for (std::size_t p = 0; p < d.paths.size(); ++p) {
      const auto& players = path_players[p];
      if (std::none_of(players.begin(), players.end(), [&](const auto& q) { return z.contains(q); })) {
        honest.push_back(p);
      }
    }
    if (std::find(d.honest_sets.begin(), d.honest_sets.end(), honest) == d.honest_sets.end()) {
      d.honest_sets.push_back(std::move(honest));
    }
  }
  return d;
}

NetworkResult network_ambiguity(const Network& net, const PlayerAdversaryStructure& adversary) {
  require_valid(net);
  validate_adversary(net, adversary);
  NetworkResult result;
  if (enumerate_paths(net).empty()) {
    result.warnings.push_back("no path from '" + net.sender + "' to '" + net.receiver + "'");
    return result;
  }
  result.decomposition = decompose(net, adversary);
  const auto& d = result.decomposition;
  if (!d.shared_edges.empty()) {
    std::string ids;
    for (const auto& id : d.shared_edges) {
      ids += (ids.empty() ? "" : ", ") + id;
    }
    result.warnings.push_back("paths share edges (" + ids +
                              "); each path is treated as an independent channel");
  }
  if (d.severed()) {
    result.warnings.push_back("a corruptible set cuts every path");
    return result;
  }
  const HonestSetStructure structure(d.paths.size(), d.honest_sets);
  auto parallel = parallel_ambiguity(d.path_ambiguities, structure);
  result.value = parallel.value;
  result.allocation = std::move(parallel.allocation);
  return result;
}

std::string path_label(const Network& net, const Path& path) {
  std::string out = net.sender;
  for (auto e : path) {
    out += " -" + net.edges[e].id + "-> " + net.edges[e].to;
  }
  return out;
}

}  // namespace zerr
