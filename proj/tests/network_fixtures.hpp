#pragma once

#include <string>
#include <vector>

#include "zerr/network.hpp"

namespace zerr::testing {

inline Edge edge(std::string id, std::string from, std::string to, std::uint64_t a) {
  return Edge{std::move(id), std::move(from), std::move(to), Ambiguity::finite(a)};
}

/// A -> X_i -> B for i = 1..n, every edge with ambiguity `a`.
inline Network disjoint_paths(std::size_t n, std::uint64_t a = 1) {
  Network net{{"A", "B"}, {}, "A", "B"};
  for (std::size_t i = 1; i <= n; ++i) {
    const auto x = "X" + std::to_string(i);
    net.players.push_back(x);
    net.edges.push_back(edge("a" + std::to_string(i), "A", x, a));
    net.edges.push_back(edge("b" + std::to_string(i), x, "B", a));
  }
  return net;
}

inline Network chain(std::uint64_t first, std::uint64_t second) {
  return Network{{"A", "B", "C"}, {edge("e1", "A", "B", first), edge("e2", "B", "C", second)}, "A", "C"};
}

inline Network diamond() {
  return Network{{"A", "B", "C", "D"},
                 {edge("e1", "A", "B", 1), edge("e2", "B", "D", 1), edge("e3", "A", "C", 1),
                  edge("e4", "C", "D", 1)},
                 "A",
                 "D"};
}

}  // namespace zerr::testing
