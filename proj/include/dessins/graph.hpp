#pragma once

// Small dense simple graphs: counting, cliques, components and a canonical
// form by individualization-refinement.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dessins/perm.hpp"

namespace dessins {

using Bits = boost::dynamic_bitset<>;

class Graph {
public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), rows_(n, Bits(n)) {}

  static Graph from_edges(std::size_t n, const std::vector<std::pair<point, point>>& edges) {
    Graph g(n);
    for (auto [a, b] : edges)
      g.add_edge(a, b);
    return g;
  }

  std::size_t size() const noexcept { return n_; }

  void add_edge(point a, point b) {
    if (a >= n_ || b >= n_)
      throw std::out_of_range("vertex out of range");
    if (a == b)
      throw std::invalid_argument("loops are not allowed");
    rows_[a].set(b);
    rows_[b].set(a);
  }

  bool adjacent(point a, point b) const { return rows_[a].test(b); }
  const Bits& row(point a) const { return rows_[a]; }
  std::size_t degree(point a) const { return rows_[a].count(); }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& r : rows_)
      e += r.count();
    return e / 2;
  }

  std::vector<std::pair<point, point>> edges() const {
    std::vector<std::pair<point, point>> out;
    for (point a = 0; a < n_; ++a)
      for (auto b = rows_[a].find_next(a); b != Bits::npos; b = rows_[a].find_next(b))
        out.emplace_back(a, static_cast<point>(b));
    return out;
  }

  Graph complement() const {
    Graph c(n_);
    for (point a = 0; a < n_; ++a)
      for (point b = a + 1; b < n_; ++b)
        if (!adjacent(a, b))
          c.add_edge(a, b);
    return c;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  std::size_t n_ = 0;
  std::vector<Bits> rows_;
};

/// Graph triangles.
inline std::uint64_t count_triangles(const Graph& g) {
  std::uint64_t t = 0;
  for (point a = 0; a < g.size(); ++a)
    for (auto b = g.row(a).find_next(a); b != Bits::npos; b = g.row(a).find_next(b)) {
      Bits common = g.row(a) & g.row(static_cast<point>(b));
      for (auto c = common.find_next(b); c != Bits::npos; c = common.find_next(c))
        ++t;
    }
  return t;
}

/// Chordless 4-cycles: every such cycle has two non-adjacent diagonals, so
/// summing over non-adjacent pairs {u, w} the non-adjacent pairs among their
/// common neighbours counts each cycle twice.
inline std::uint64_t count_chordless_squares(const Graph& g) {
  std::uint64_t twice = 0;
  std::vector<point> common;
  for (point u = 0; u < g.size(); ++u)
    for (point w = u + 1; w < g.size(); ++w) {
      if (g.adjacent(u, w))
        continue;
      common.clear();
      Bits c = g.row(u) & g.row(w);
      for (auto v = c.find_first(); v != Bits::npos; v = c.find_next(v))
        common.push_back(static_cast<point>(v));
      for (std::size_t i = 0; i < common.size(); ++i)
        for (std::size_t j = i + 1; j < common.size(); ++j)
          twice += !g.adjacent(common[i], common[j]);
    }
  return twice / 2;
}

/// Connected components as sorted vertex lists, ordered by least vertex.
inline std::vector<std::vector<point>> components(const Graph& g) {
  std::vector<std::vector<point>> out;
  std::vector<bool> seen(g.size(), false);
  for (point s = 0; s < g.size(); ++s) {
    if (seen[s])
      continue;
    std::vector<point> comp{s}, stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      point v = stack.back();
      stack.pop_back();
      for (auto w = g.row(v).find_first(); w != Bits::npos; w = g.row(v).find_next(w))
        if (!seen[w]) {
          seen[w] = true;
          comp.push_back(static_cast<point>(w));
          stack.push_back(static_cast<point>(w));
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

inline bool is_connected(const Graph& g) { return g.size() <= 1 || components(g).size() == 1; }

/// Maximal cliques (Bron-Kerbosch with pivoting), each sorted, the list
/// sorted lexicographically. Isolated vertices give singleton cliques.
inline std::vector<std::vector<point>> maximal_cliques(const Graph& g) {
  std::vector<std::vector<point>> out;
  std::vector<point> r;
  std::function<void(Bits, Bits)> bk = [&](Bits p, Bits x) {
    if (p.none()) {
      if (x.none()) {
        auto c = r;
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
      }
      return;
    }
    // pivot: the vertex of p | x with most neighbours in p
    Bits px = p | x;
    std::size_t pivot = px.find_first(), best = 0;
    for (auto u = px.find_first(); u != Bits::npos; u = px.find_next(u)) {
      std::size_t c = (p & g.row(static_cast<point>(u))).count();
      if (c > best || u == px.find_first()) {
        best = c;
        pivot = u;
      }
    }
    Bits cand = p - g.row(static_cast<point>(pivot));
    for (auto v = cand.find_first(); v != Bits::npos; v = cand.find_next(v)) {
      r.push_back(static_cast<point>(v));
      bk(p & g.row(static_cast<point>(v)), x & g.row(static_cast<point>(v)));
      r.pop_back();
      p.reset(v);
      x.set(v);
    }
  };
  Bits all(g.size());
  all.set();
  bk(all, Bits(g.size()));
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

/// Ordered partition refinement to the coarsest equitable partition,
/// splitting cells by neighbour counts in a label-independent order.
inline void refine(const Graph& g, std::vector<std::vector<point>>& cells) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < cells.size() && !changed; ++s) {
      // split every cell by the number of neighbours in cell s
      std::vector<std::vector<point>> next;
      next.reserve(cells.size());
      for (auto& cell : cells) {
        if (cell.size() == 1) {
          next.push_back(cell);
          continue;
        }
        std::map<std::size_t, std::vector<point>> by_count;
        for (point v : cell) {
          std::size_t k = 0;
          for (point w : cells[s])
            k += g.adjacent(v, w);
          by_count[k].push_back(v);
        }
        if (by_count.size() > 1)
          changed = true;
        for (auto& [k, part] : by_count)
          next.push_back(std::move(part));
      }
      if (changed)
        cells = std::move(next);
    }
  }
}

struct CanonSearch {
  const Graph& g;
  std::size_t n;
  std::string best;
  std::vector<point> best_labeling; // position -> vertex
  std::vector<point> first_labeling;
  std::string first_code;
  std::vector<std::vector<point>> automorphisms; // as image arrays
  std::vector<point> first_path;
  std::uint64_t leaves = 0;

  explicit CanonSearch(const Graph& graph) : g(graph), n(graph.size()) {}

  std::string code_of(const std::vector<point>& order) const {
    // order[i] = vertex placed at position i
    std::string s;
    s.reserve(n * (n - 1) / 2 / 8 + 1);
    unsigned char byte = 0;
    int bit = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        byte = static_cast<unsigned char>((byte << 1) | (g.adjacent(order[i], order[j]) ? 1 : 0));
        if (++bit == 8) {
          s.push_back(static_cast<char>(byte));
          byte = 0;
          bit = 0;
        }
      }
    if (bit)
      s.push_back(static_cast<char>(byte << (8 - bit)));
    return s;
  }

  void leaf(const std::vector<std::vector<point>>& cells) {
    ++leaves;
    std::vector<point> order;
    order.reserve(n);
    for (const auto& c : cells)
      order.push_back(c.front());
    std::string code = code_of(order);
    // a leaf repeating a known code differs from it by an automorphism;
    // order[i] plays the role of known[i]
    auto record = [&](const std::vector<point>& known) {
      std::vector<point> img(n);
      for (std::size_t i = 0; i < n; ++i)
        img[known[i]] = order[i];
      automorphisms.push_back(std::move(img));
    };
    if (first_labeling.empty()) {
      first_labeling = order;
      first_code = code;
    } else if (code == first_code) {
      record(first_labeling);
    } else if (code == best) {
      record(best_labeling);
    }
    if (best_labeling.empty() || code > best) {
      best = std::move(code);
      best_labeling = std::move(order);
    }
  }

  /// Orbits of the stored automorphisms fixing `prefix` pointwise.
  std::vector<point> orbit_reps(const std::vector<point>& prefix) const {
    std::vector<point> parent(n);
    std::iota(parent.begin(), parent.end(), point{0});
    std::function<point(point)> find = [&](point x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& a : automorphisms) {
      if (!std::all_of(prefix.begin(), prefix.end(), [&](point p) { return a[p] == p; }))
        continue;
      for (point v = 0; v < n; ++v) {
        point x = find(v), y = find(a[v]);
        if (x != y)
          parent[std::max(x, y)] = std::min(x, y);
      }
    }
    std::vector<point> root(n);
    for (point v = 0; v < n; ++v)
      root[v] = find(v);
    return root;
  }

  void search(std::vector<std::vector<point>> cells, std::vector<point>& path) {
    refine(g, cells);
    auto target = std::find_if(cells.begin(), cells.end(), [](const auto& c) { return c.size() > 1; });
    if (target == cells.end()) {
      leaf(cells);
      return;
    }
    std::size_t t = static_cast<std::size_t>(target - cells.begin());
    std::vector<point> candidates = cells[t];
    std::vector<point> explored;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      point v = candidates[i];
      if (!explored.empty() && !automorphisms.empty()) {
        // skip v if an automorphism fixing the path maps an explored vertex
        // to it: both subtrees then give the same codes
        auto root = orbit_reps(path);
        if (std::any_of(explored.begin(), explored.end(), [&](point e) { return root[e] == root[v]; }))
          continue;
      }
      std::vector<std::vector<point>> next;
      next.reserve(cells.size() + 1);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c != t) {
          next.push_back(cells[c]);
          continue;
        }
        next.push_back({v});
        std::vector<point> rest;
        for (point w : cells[c])
          if (w != v)
            rest.push_back(w);
        next.push_back(std::move(rest));
      }
      path.push_back(v);
      search(std::move(next), path);
      path.pop_back();
      explored.push_back(v);
    }
  }
};

} // namespace detail

/// Canonical labeling: position -> original vertex.
struct GraphCanon {
  std::string form;            // byte string, equal iff isomorphic
  std::vector<point> labeling; // labeling[i] = vertex at canonical position i
  std::uint64_t leaves = 0;
};

inline GraphCanon canonical_labeling(const Graph& g) {
  GraphCanon out;
  const std::size_t n = g.size();
  if (n == 0) {
    out.form = std::string(1, '\0');
    return out;
  }
  detail::CanonSearch s(g);
  // initial partition by degree, descending
  std::map<std::size_t, std::vector<point>, std::greater<>> by_degree;
  for (point v = 0; v < n; ++v)
    by_degree[g.degree(v)].push_back(v);
  std::vector<std::vector<point>> cells;
  for (auto& [d, c] : by_degree)
    cells.push_back(std::move(c));
  std::vector<point> path;
  s.search(std::move(cells), path);
  out.form = std::to_string(n) + ":" + s.best;
  out.labeling = std::move(s.best_labeling);
  out.leaves = s.leaves;
  return out;
}

inline std::string canonical_form(const Graph& g) { return canonical_labeling(g).form; }

inline bool isomorphic(const Graph& a, const Graph& b) {
  if (a.size() != b.size() || a.edge_count() != b.edge_count())
    return false;
  return canonical_form(a) == canonical_form(b);
}

} // namespace dessins
