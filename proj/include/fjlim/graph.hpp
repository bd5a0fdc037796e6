#pragma once

#include <numeric>
#include <queue>
#include <vector>

#include "fjlim/errors.hpp"
#include "fjlim/types.hpp"

namespace fjlim {

/// Nonzero pattern of a square matrix as a directed graph: edge i -> j iff
/// the (i, j) entry is strictly positive.
struct GraphPattern {
  int n = 0;
  std::vector<std::vector<int>> adjacency;  // adjacency[i] = successors of i

  static GraphPattern from_matrix(const Matrix& a) {
    GraphPattern g;
    g.n = static_cast<int>(a.rows());
    g.adjacency.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        if (a(i, j) > 0.0) g.adjacency[i].push_back(j);
      }
    }
    return g;
  }
};

namespace detail {

inline std::vector<std::vector<int>> reversed(const GraphPattern& g) {
  std::vector<std::vector<int>> rev(g.n);
  for (int i = 0; i < g.n; ++i) {
    for (int j : g.adjacency[i]) rev[j].push_back(i);
  }
  return rev;
}

inline int reachable_count(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  int count = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count;
}

}  // namespace detail

/// True iff the directed graph is strongly connected. A graph on one node is
/// strongly connected regardless of self-loops.
inline bool is_irreducible(const GraphPattern& pattern) {
  if (pattern.n == 0) return false;
  if (pattern.n == 1) return true;
  // One SCC iff every node is reachable from node 0 and node 0 from every node.
  return detail::reachable_count(pattern.adjacency, 0) == pattern.n &&
         detail::reachable_count(detail::reversed(pattern), 0) == pattern.n;
}

/// Period of a strongly connected directed graph: the gcd of all closed-walk
/// lengths, computed as the gcd of level differences l(u) + 1 - l(v) over all
/// edges u -> v of a BFS from node 0.
inline int graph_period(const GraphPattern& pattern) {
  if (!is_irreducible(pattern)) {
    throw NotIrreducible("graph_period: pattern is not strongly connected");
  }
  std::vector<int> level(pattern.n, -1);
  std::queue<int> q;
  q.push(0);
  level[0] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : pattern.adjacency[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      }
    }
  }
  int g = 0;
  for (int u = 0; u < pattern.n; ++u) {
    for (int v : pattern.adjacency[u]) {
      g = std::gcd(g, level[u] + 1 - level[v]);  // difference is >= 0 under BFS
    }
  }
  return g;
}

/// True iff the graph period equals 1. Primitivity is only defined on
/// irreducible patterns; throws NotIrreducible otherwise.
inline bool is_primitive(const GraphPattern& pattern) {
  return graph_period(pattern) == 1;
}

}  // namespace fjlim
