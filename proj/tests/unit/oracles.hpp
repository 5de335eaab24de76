#pragma once

// Brute-force reference implementations used only by the tests. They share
// no code with the library routines they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

namespace oracle {

// All-pairs path lengths by breadth-first search from every node over the
// undirected edge list.
inline std::vector<std::vector<double>> tree_distances(const std::vector<int>& parent,
                                                       const std::vector<double>& weight) {
  const std::size_t n = parent.size();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (std::size_t v = 0; v < n; ++v)
    if (parent[v] >= 0) {
      adj[v].push_back({parent[v], weight[v]});
      adj[parent[v]].push_back({static_cast<int>(v), weight[v]});
    }
  std::vector<std::vector<double>> d(n, std::vector<double>(n, -1.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(static_cast<int>(s));
    d[s][s] = 0.0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, w] : adj[u])
        if (d[s][v] < 0.0) {
          d[s][v] = d[s][u] + w;
          q.push(v);
        }
    }
  }
  return d;
}

// Subtree mass of v: sum of masses of all nodes whose root path visits v.
inline std::vector<double> descendant_sums(const std::vector<int>& parent,
                                           const std::vector<double>& mass) {
  const std::size_t n = parent.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (int v = static_cast<int>(x); v >= 0; v = parent[v]) out[v] += mass[x];
  return out;
}

// Exact OT for 3 x 3 problems by enumerating the vertices of the
// transportation polytope: every basic solution is supported on a spanning
// tree of K_{3,3} (5 cells), whose flows follow from leaf elimination.
inline double ot3x3(const std::array<std::array<double, 3>, 3>& c, const std::array<double, 3>& mu,
                    const std::array<double, 3>& nu) {
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << 9); ++mask) {
    if (__builtin_popcount(mask) != 5) continue;
    std::array<double, 3> rs = mu, cs = nu;
    std::array<bool, 9> open{};
    for (int k = 0; k < 9; ++k) open[k] = mask >> k & 1;
    std::array<double, 9> flow{};
    bool progress = true;
    int remaining = 5;
    while (progress && remaining > 0) {
      progress = false;
      for (int i = 0; i < 3; ++i) {  // row with exactly one open cell
        int cnt = 0, last = -1;
        for (int j = 0; j < 3; ++j)
          if (open[i * 3 + j]) ++cnt, last = j;
        if (cnt == 1) {
          flow[i * 3 + last] = rs[i];
          cs[last] -= rs[i];
          rs[i] = 0.0;
          open[i * 3 + last] = false;
          --remaining;
          progress = true;
        }
      }
      for (int j = 0; j < 3; ++j) {
        int cnt = 0, last = -1;
        for (int i = 0; i < 3; ++i)
          if (open[i * 3 + j]) ++cnt, last = i;
        if (cnt == 1) {
          flow[last * 3 + j] = cs[j];
          rs[last] -= cs[j];
          cs[j] = 0.0;
          open[last * 3 + j] = false;
          --remaining;
          progress = true;
        }
      }
    }
    if (remaining > 0) continue;  // contains a cycle: not a spanning tree
    bool feasible = true;
    for (double f : flow) feasible = feasible && f >= -1e-12;
    for (int i = 0; i < 3; ++i) feasible = feasible && std::abs(rs[i]) < 1e-12;
    for (int j = 0; j < 3; ++j) feasible = feasible && std::abs(cs[j]) < 1e-12;
    if (!feasible) continue;
    double cost = 0.0;
    for (int k = 0; k < 9; ++k) cost += flow[k] * c[k / 3][k % 3];
    best = std::min(best, cost);
  }
  return best;
}

// min over all permutations of sum c[i][s(i)].
inline double assignment_brute(const std::vector<std::vector<double>>& c) {
  std::vector<std::size_t> p(c.size());
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += c[i][p[i]];
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace oracle
