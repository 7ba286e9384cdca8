#pragma once

// Brute-force reference implementations used only by tests.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "tamperlab/cid.hpp"

namespace oracle {

// adj[i] bit j set means edge i -> j
struct SmallDag {
  int n = 0;
  std::vector<std::uint32_t> adj;

  bool edge(int a, int b) const { return (adj[a] >> b) & 1u; }
};

// DAG on nodes 0..n-1 whose edges all point from lower to higher index,
// decoded from a bitmask over the n(n-1)/2 ordered pairs.
inline SmallDag dag_from_mask(int n, std::uint64_t mask) {
  SmallDag g{n, std::vector<std::uint32_t>(n, 0)};
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if ((mask >> bit) & 1u) g.adj[i] |= 1u << j;
  return g;
}

inline std::uint32_t descendants_mask(const SmallDag& g, int v) {
  std::uint32_t seen = 0, frontier = g.adj[v];
  while (frontier) {
    int u = __builtin_ctz(frontier);
    frontier &= frontier - 1;
    if ((seen >> u) & 1u) continue;
    seen |= 1u << u;
    frontier |= g.adj[u] & ~seen;
  }
  return seen;
}

// Enumerates every simple path of the skeleton and checks each one for activity.
inline bool d_separated(const SmallDag& g, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  std::vector<std::uint32_t> desc(g.n);
  for (int v = 0; v < g.n; ++v) desc[v] = descendants_mask(g, v);
  auto neighbours = [&](int v) {
    std::uint32_t m = g.adj[v];
    for (int u = 0; u < g.n; ++u)
      if (g.edge(u, v)) m |= 1u << u;
    return m;
  };
  std::vector<int> path;
  // returns true once an active path is found
  auto active_interior = [&](int prev, int mid, int next) {
    bool collider = g.edge(prev, mid) && g.edge(next, mid);
    if (collider) return ((z >> mid) & 1u) || (desc[mid] & z);
    return !((z >> mid) & 1u);
  };
  bool found = false;
  auto dfs = [&](auto&& self, int v, std::uint32_t visited) -> void {
    if (found) return;
    std::size_t k = path.size();
    if (k >= 3 && !active_interior(path[k - 3], path[k - 2], path[k - 1])) return;
    if (k >= 2 && ((y >> v) & 1u)) {
      found = true;
      return;
    }
    std::uint32_t nb = neighbours(v) & ~visited;
    while (nb) {
      int u = __builtin_ctz(nb);
      nb &= nb - 1;
      path.push_back(u);
      self(self, u, visited | (1u << u));
      path.pop_back();
      if (found) return;
    }
  };
  for (int s = 0; s < g.n && !found; ++s) {
    if (!((x >> s) & 1u)) continue;
    path = {s};
    dfs(dfs, s, 1u << s);
  }
  return !found;
}

// zero padded so string order matches index order
inline std::string name(int i) { return (i < 10 ? "N0" : "N") + std::to_string(i); }

inline tamperlab::cid::InfluenceDiagram to_diagram(const SmallDag& g) {
  using namespace tamperlab::cid;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  for (int i = 0; i < g.n; ++i) nodes.push_back({name(i), NodeKind::Chance, std::nullopt});
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (g.edge(i, j)) edges.push_back({name(i), name(j), EdgeKind::Causal});
  return InfluenceDiagram::build(nodes, edges);
}

inline std::set<std::string> names(std::uint32_t m) {
  std::set<std::string> out;
  for (int i = 0; i < 32; ++i)
    if ((m >> i) & 1u) out.insert(name(i));
  return out;
}

struct SweepStats {
  long dags = 0;
  long queries = 0;
  long mismatches = 0;
};

inline void check_query(const SmallDag& g, const tamperlab::cid::InfluenceDiagram& d, std::uint32_t x,
                        std::uint32_t y, std::uint32_t z, SweepStats& st) {
  ++st.queries;
  if (tamperlab::cid::d_separated(d, names(x), names(y), names(z)) != d_separated(g, x, y, z)) ++st.mismatches;
}

// Every DAG on n nodes (each DAG is isomorphic to one whose edges respect index order).
// n <= 5: every pair of singletons with every conditioning set.
// larger n: every pair with one conditioning set that rotates with the DAG index.
// Pass `rotating_pair` to test a single rotating pair per DAG instead.
inline SweepStats dsep_sweep(int n, bool rotating_pair = false) {
  SweepStats st;
  const int pairs = n * (n - 1) / 2;
  const std::uint64_t total = 1ull << pairs;
  const std::uint32_t all = (1u << n) - 1;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    SmallDag g = dag_from_mask(n, mask);
    auto d = to_diagram(g);
    ++st.dags;
    if (rotating_pair) {
      int x = static_cast<int>(mask % n);
      int y = static_cast<int>((mask / n + 1 + x) % n);
      if (y == x) y = (x + 1) % n;
      std::uint32_t rest = all & ~(1u << x) & ~(1u << y);
      std::uint32_t z = static_cast<std::uint32_t>(mask * 2654435761u >> 7) & rest;
      check_query(g, d, 1u << x, 1u << y, z, st);
      continue;
    }
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        std::uint32_t rest = all & ~(1u << x) & ~(1u << y);
        if (n <= 5) {
          // all subsets of rest
          for (std::uint32_t z = rest;; z = (z - 1) & rest) {
            check_query(g, d, 1u << x, 1u << y, z, st);
            if (z == 0) break;
          }
        } else {
          std::uint32_t z = static_cast<std::uint32_t>((mask + 31 * x + 7 * y) * 2654435761u >> 5) & rest;
          check_query(g, d, 1u << x, 1u << y, z, st);
        }
      }
  }
  return st;
}

}  // namespace oracle
