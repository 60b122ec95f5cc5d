#pragma once

// Known geometries with their reference constructions, the published
// invariant rows they are expected to show, and a recognizer that matches
// an induced geometry against them.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "dessins/enumerate.hpp"
#include "dessins/geometry.hpp"

namespace dessins {

namespace refgraph {

inline Graph complete(std::size_t n) {
  Graph g(n);
  for (point a = 0; a < n; ++a)
    for (point b = a + 1; b < n; ++b)
      g.add_edge(a, b);
  return g;
}

inline Graph cycle(std::size_t n) {
  Graph g(n);
  for (point a = 0; a < n; ++a)
    g.add_edge(a, static_cast<point>((a + 1) % n));
  return g;
}

/// K_{p1,...,pk}.
inline Graph multipartite(const std::vector<std::size_t>& parts) {
  std::vector<std::size_t> part_of;
  for (std::size_t i = 0; i < parts.size(); ++i)
    part_of.insert(part_of.end(), parts[i], i);
  Graph g(part_of.size());
  for (point a = 0; a < g.size(); ++a)
    for (point b = a + 1; b < g.size(); ++b)
      if (part_of[a] != part_of[b])
        g.add_edge(a, b);
  return g;
}

/// Cross-polytope: K_2k minus a perfect matching.
inline Graph orthoplex(std::size_t k) { return multipartite(std::vector<std::size_t>(k, 2)); }

inline Graph disjoint_union(const Graph& x, const Graph& y) {
  Graph g(x.size() + y.size());
  for (auto [a, b] : x.edges())
    g.add_edge(a, b);
  for (auto [a, b] : y.edges())
    g.add_edge(static_cast<point>(a + x.size()), static_cast<point>(b + x.size()));
  return g;
}

/// k-subsets of {0..m-1} in lexicographic order.
inline std::vector<std::vector<point>> subsets(std::size_t m, std::size_t k) {
  std::vector<std::vector<point>> out;
  std::vector<point> cur;
  std::function<void(point)> rec = [&](point from) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (point i = from; i < m; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Kneser graph KG(m, k): k-subsets, adjacent when disjoint.
inline Graph kneser(std::size_t m, std::size_t k) {
  auto s = subsets(m, k);
  Graph g(s.size());
  for (point a = 0; a < s.size(); ++a)
    for (point b = a + 1; b < s.size(); ++b) {
      std::vector<point> both;
      std::set_intersection(s[a].begin(), s[a].end(), s[b].begin(), s[b].end(), std::back_inserter(both));
      if (both.empty())
        g.add_edge(a, b);
    }
  return g;
}

/// Halved 5-cube: even-weight words of length 5 at Hamming distance 2. This
/// is the 10-regular member of the Clebsch pair.
inline Graph clebsch() {
  std::vector<unsigned> words;
  for (unsigned w = 0; w < 32; ++w)
    if (std::popcount(w) % 2 == 0)
      words.push_back(w);
  Graph g(words.size());
  for (point a = 0; a < words.size(); ++a)
    for (point b = a + 1; b < words.size(); ++b)
      if (std::popcount(words[a] ^ words[b]) == 2)
        g.add_edge(a, b);
  return g;
}

/// Cayley graph of Z4 x Z4 with connection set {±(1,0), ±(0,1), ±(1,1)}.
inline Graph shrikhande() {
  Graph g(16);
  const int steps[3][2] = {{1, 0}, {0, 1}, {1, 1}};
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (const auto& s : steps) {
        int u = (x + s[0]) % 4, v = (y + s[1]) % 4;
        g.add_edge(static_cast<point>(4 * x + y), static_cast<point>(4 * u + v));
      }
  return g;
}

/// Incidence graph of the 2-(11,5,2) biplane from the quadratic residues
/// mod 11; points 0..10, blocks 11..21.
inline Graph biplane11() {
  const int residues[] = {1, 3, 4, 5, 9};
  Graph g(22);
  for (int b = 0; b < 11; ++b)
    for (int r : residues)
      g.add_edge(static_cast<point>((b + r) % 11), static_cast<point>(11 + b));
  return g;
}

inline std::vector<std::vector<point>> fano_lines() {
  return {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
}

/// Lines of AG(2,3) on points 3x + y, grouped by parallel class; the last
/// three are the verticals x = c.
inline std::vector<std::vector<point>> affine_plane3_lines() {
  std::vector<std::vector<point>> out;
  for (int m = 0; m < 3; ++m)
    for (int c = 0; c < 3; ++c) {
      std::vector<point> l;
      for (int x = 0; x < 3; ++x)
        l.push_back(static_cast<point>(3 * x + (m * x + c) % 3));
      out.push_back(l);
    }
  for (int c = 0; c < 3; ++c)
    out.push_back({static_cast<point>(3 * c), static_cast<point>(3 * c + 1), static_cast<point>(3 * c + 2)});
  return out;
}

inline std::vector<std::vector<point>> grid_lines() {
  return {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}};
}

/// Desargues configuration: points are the 2-subsets of a 5-set, lines the
/// 3-subsets, a point on a line when contained in it.
inline std::vector<std::vector<point>> desargues_lines() {
  auto pts = subsets(5, 2);
  std::vector<std::vector<point>> out;
  for (const auto& t : subsets(5, 3)) {
    std::vector<point> l;
    for (point p = 0; p < pts.size(); ++p)
      if (std::includes(t.begin(), t.end(), pts[p].begin(), pts[p].end()))
        l.push_back(p);
    out.push_back(l);
  }
  return out;
}

/// W(3,2): nonzero vectors of GF(2)^4 with the symplectic form
/// x1y2 + x2y1 + x3y4 + x4y3; lines are the totally isotropic planes.
inline std::vector<std::vector<point>> w32_lines() {
  auto form = [](unsigned u, unsigned v) {
    auto bit = [](unsigned w, int i) { return (w >> i) & 1u; };
    return (bit(u, 0) & bit(v, 1)) ^ (bit(u, 1) & bit(v, 0)) ^ (bit(u, 2) & bit(v, 3)) ^ (bit(u, 3) & bit(v, 2));
  };
  std::set<std::vector<point>> lines;
  for (unsigned u = 1; u < 16; ++u)
    for (unsigned v = u + 1; v < 16; ++v)
      if (!form(u, v)) {
        std::vector<point> l{static_cast<point>(u - 1), static_cast<point>(v - 1), static_cast<point>((u ^ v) - 1)};
        std::sort(l.begin(), l.end());
        lines.insert(l);
      }
  return {lines.begin(), lines.end()};
}

/// The 27 lines on a smooth cubic surface, a_i (0..5), b_i (6..11) and
/// c_ij (12..26); the 45 tritangent planes are the lines of GQ(2,4).
inline std::vector<std::vector<point>> gq24_lines() {
  auto pairs = subsets(6, 2);
  auto c = [&](point i, point j) {
    if (i > j)
      std::swap(i, j);
    for (point k = 0; k < pairs.size(); ++k)
      if (pairs[k][0] == i && pairs[k][1] == j)
        return static_cast<point>(12 + k);
    throw std::logic_error("bad pair");
  };
  std::vector<std::vector<point>> out;
  for (point i = 0; i < 6; ++i)
    for (point j = 0; j < 6; ++j)
      if (i != j) {
        std::vector<point> l{i, static_cast<point>(6 + j), c(i, j)};
        std::sort(l.begin(), l.end());
        out.push_back(l);
      }
  // partitions of {0..5} into three pairs
  for (point j = 1; j < 6; ++j) {
    std::vector<point> rest;
    for (point k = 1; k < 6; ++k)
      if (k != j)
        rest.push_back(k);
    for (std::size_t m = 1; m < 4; ++m) {
      std::vector<point> other;
      for (std::size_t k = 1; k < 4; ++k)
        if (k != m)
          other.push_back(rest[k]);
      std::vector<point> l{c(0, j), c(rest[0], rest[m]), c(other[0], other[1])};
      std::sort(l.begin(), l.end());
      out.push_back(l);
    }
  }
  return out;
}

/// Line graph of the Heawood graph (flags of the Fano plane); lines are the
/// 14 triangles of flags through a point or on a line.
inline std::vector<std::vector<point>> heawood_line_graph_lines() {
  auto fano = fano_lines();
  std::vector<std::pair<point, point>> flags; // (point, line)
  for (point l = 0; l < fano.size(); ++l)
    for (point p : fano[l])
      flags.emplace_back(p, l);
  std::vector<std::vector<point>> out;
  for (point v = 0; v < 7; ++v) {
    std::vector<point> at_point, on_line;
    for (point f = 0; f < flags.size(); ++f) {
      if (flags[f].first == v)
        at_point.push_back(f);
      if (flags[f].second == v)
        on_line.push_back(f);
    }
    out.push_back(at_point);
    out.push_back(on_line);
  }
  return out;
}

} // namespace refgraph

struct CatalogEntry {
  std::string name;
  int table = 1;
  std::size_t V = 0, E = 0;
  std::uint64_t T = 0, S = 0;      // as published
  std::optional<Spectrum> spectrum; // as published
  std::function<Geometry()> build;  // empty when no construction is known
};

namespace detail {

inline Spectrum sp(std::initializer_list<std::pair<double, std::size_t>> values) {
  Spectrum out;
  for (auto [v, m] : values) {
    Eigenvalue e{v, m, std::nullopt};
    if (std::abs(v - std::round(v)) < 1e-12)
      e.exact = static_cast<long long>(std::llround(v));
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const Eigenvalue& x, const Eigenvalue& y) { return x.value > y.value; });
  return out;
}

inline std::function<Geometry()> from_graph(std::function<Graph()> make, std::string name) {
  return [make = std::move(make), name = std::move(name)] { return Geometry::from_graph(make(), name); };
}

inline std::function<Geometry()> from_lines(std::size_t n, std::function<std::vector<std::vector<point>>()> make,
                                            std::string name) {
  return [n, make = std::move(make), name = std::move(name)] { return Geometry::from_lines(n, make(), name); };
}

} // namespace detail

/// The published rows, in table order.
inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    using namespace refgraph;
    using detail::from_graph;
    using detail::from_lines;
    using detail::sp;
    std::vector<CatalogEntry> c;
    auto simplex = [&](std::size_t k, std::uint64_t t) {
      std::string name = std::to_string(k - 1) + "-simplex";
      c.push_back({name, 1, k, k * (k - 1) / 2, t, 0, std::nullopt, from_graph([k] { return complete(k); }, name)});
    };
    auto add_graph = [&](std::string name, std::size_t v, std::size_t e, std::uint64_t t, std::uint64_t s,
                         std::function<Graph()> make) {
      c.push_back({name, 1, v, e, t, s, std::nullopt, from_graph(std::move(make), name)});
    };
    auto add_lines = [&](std::string name, std::size_t v, std::size_t e, std::uint64_t t, std::uint64_t s,
                         std::function<std::vector<std::vector<point>>()> make) {
      c.push_back({name, 1, v, e, t, s, std::nullopt, from_lines(v, std::move(make), name)});
    };

    simplex(3, 1);
    simplex(4, 4);
    add_graph("square/quadrangle", 4, 4, 0, 1, [] { return cycle(4); });
    simplex(5, 10);
    simplex(6, 20);
    add_graph("3-orthoplex (octahedron)", 6, 12, 8, 3, [] { return orthoplex(3); });
    add_graph("bipartite graph K(3,3)", 6, 9, 0, 9, [] { return multipartite({3, 3}); });
    simplex(7, 35);
    add_lines("Fano plane (7_3)", 7, 21, 7, 0, fano_lines);
    simplex(8, 56);
    add_graph("4-orthoplex (16-cell)", 8, 24, 32, 6, [] { return orthoplex(4); });
    add_graph("completed cube K(4,4)", 8, 16, 0, 36, [] { return multipartite({4, 4}); });
    add_graph("stellated octahedron", 8, 12, 8, 0, [] { return disjoint_union(complete(4), complete(4)); });
    simplex(9, 84);
    add_lines("Hesse (9_4 12_3)", 9, 36, 12, 0, affine_plane3_lines);
    add_graph("K(3)^3", 9, 27, 27, 27, [] { return multipartite({3, 3, 3}); });
    add_lines("Pappus (9_3)", 9, 27, 9, 27, [] {
      auto l = affine_plane3_lines();
      l.resize(9); // drop one parallel class
      return l;
    });
    add_lines("(3x3)-grid", 9, 18, 6, 9, grid_lines);
    simplex(10, 120);
    add_graph("5-orthoplex", 10, 40, 80, 10, [] { return orthoplex(5); });
    add_graph("bipartite graph K(5,5)", 10, 25, 0, 100, [] { return multipartite({5, 5}); });
    add_graph("Mermin's pentagram", 10, 30, 30, 15, [] { return kneser(5, 2).complement(); });
    add_graph("Petersen graph", 10, 15, 0, 0, [] { return kneser(5, 2); });
    add_lines("Desargues (10_3)", 10, 30, 10, 15, desargues_lines);
    simplex(11, 165);
    simplex(12, 220);
    add_graph("6-orthoplex", 12, 60, 160, 15, [] { return orthoplex(6); });
    add_graph("bipartite graph K(6,6)", 12, 36, 0, 255, [] { return multipartite({6, 6}); });
    add_graph("threepartite graph K(4,4,4)", 12, 48, 64, 108, [] { return multipartite({4, 4, 4}); });
    add_graph("fourpartite graph K(3,3,3,3)", 12, 54, 0, 54, [] { return multipartite({3, 3, 3, 3}); });

    auto t2 = [&](std::string name, std::size_t v, std::size_t e, std::uint64_t t, std::uint64_t s,
                  std::optional<Spectrum> spec,
                  std::function<Geometry()> build) {
      c.push_back({std::move(name), 2, v, e, t, s, std::move(spec), std::move(build)});
    };
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    t2("Cremona-Richmond (15_3) GQ(2,2)", 15, 45, 15, 90, std::nullopt, from_lines(15, w32_lines, "GQ(2,2)"));
    t2("Clebsch graph", 16, 80, 0, 60, sp({{10, 1}, {2, 5}, {-2, 10}}), from_graph(clebsch, "Clebsch"));
    t2("Shrikhande graph", 16, 48, 32, 12, sp({{6, 1}, {2, 6}, {-2, 9}}), from_graph(shrikhande, "Shrikhande"));
    t2("index-18 graph", 18, 72, 48, 306, sp({{8, 1}, {0, 9}, {-4, 4}, {2, 4}}), {});
    t2("index-20 graph", 20, 80, 0, 740, sp({{0, 10}, {-8, 1}, {8, 1}, {-2, 4}, {2, 4}}), {});
    t2("Kneser graph KG(7,2)", 21, 105, 35, 630, sp({{10, 1}, {3, 6}, {-2, 14}}),
       from_graph([] { return kneser(7, 2); }, "KG(7,2)"));
    t2("L(IG(7,3,1))", 21, 42, 14, 0, sp({{4, 1}, {-2, 8}, {1 + r2, 6}, {1 - r2, 6}}),
       from_lines(21, heawood_line_graph_lines, "L(IG(7,3,1))"));
    t2("IG(11,5,2)", 22, 55, 0, 55, sp({{5, 1}, {-5, 1}, {r3, 10}, {-r3, 10}}), from_graph(biplane11, "IG(11,5,2)"));
    t2("GQ(2,4)", 27, 135, 45, 1080, sp({{10, 1}, {1, 20}, {-5, 6}}), from_lines(27, gq24_lines, "GQ(2,4)"));
    t2("Schlafli graph", 27, 216, 720, 270, sp({{16, 1}, {4, 6}, {-2, 20}}), from_graph([] {
         auto lines = gq24_lines();
         return Geometry::from_lines(27, lines).graph().complement();
       }, "Schlafli"));
    t2("index-27 graph sp(16,1^16,-2^8,-8^2)", 27, 216, 504, 3024, sp({{16, 1}, {1, 16}, {-2, 8}, {-8, 2}}), {});
    t2("index-27 graph sp(16,4^2,1^12,-2^8,-5^4)", 27, 216, 612, 1674,
       sp({{16, 1}, {4, 2}, {1, 12}, {-2, 8}, {-5, 4}}), {});
    return c;
  }();
  return entries;
}

inline const CatalogEntry* catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name)
      return &e;
  return nullptr;
}

/// The reference geometry of an entry, built once.
inline const Geometry* reference(const CatalogEntry& e) {
  if (!e.build)
    return nullptr;
  static std::mutex lock;
  static std::map<const CatalogEntry*, Geometry> cache;
  std::lock_guard guard(lock);
  auto it = cache.find(&e);
  if (it == cache.end())
    it = cache.emplace(&e, e.build()).first;
  return &it->second;
}

namespace detail {

struct ReferenceData {
  std::string canonical;
  Spectrum spectrum;
};

inline const ReferenceData& reference_data(const CatalogEntry& e) {
  static std::mutex lock;
  static std::map<const CatalogEntry*, ReferenceData> cache;
  {
    std::lock_guard guard(lock);
    if (auto it = cache.find(&e); it != cache.end())
      return it->second;
  }
  const Geometry* g = reference(e);
  ReferenceData d{canonical_form(g->graph()), spectrum(g->graph())};
  std::lock_guard guard(lock);
  return cache.emplace(&e, std::move(d)).first->second;
}

} // namespace detail

/// Published row versus what the reference construction gives; empty when
/// they agree.
struct RowDiscrepancy {
  std::string field;
  std::uint64_t published, computed;
};

inline std::vector<RowDiscrepancy> reference_discrepancies(const CatalogEntry& e) {
  std::vector<RowDiscrepancy> out;
  const Geometry* g = reference(e);
  if (!g)
    return out;
  auto inv = invariants(*g, false);
  auto check = [&](const char* f, std::uint64_t p, std::uint64_t c) {
    if (p != c)
      out.push_back({f, p, c});
  };
  check("V", e.V, inv.V);
  check("E", e.E, inv.E);
  check("T", e.T, inv.T_line);
  check("S", e.S, inv.S_chordless);
  return out;
}

enum class MatchTier { isomorphism, spectrum, invariants };

inline std::string_view to_string(MatchTier t) {
  switch (t) {
  case MatchTier::isomorphism:
    return "isomorphism";
  case MatchTier::spectrum:
    return "spectrum";
  default:
    return "invariants";
  }
}

struct CatalogMatch {
  const CatalogEntry* entry = nullptr;
  MatchTier tier = MatchTier::invariants;
  bool invariants_agree = false; // (V, E, T_line, S) equal to the published row
};

/// Every entry the geometry matches, best first: isomorphism before
/// spectrum before bare invariants, and within a tier those whose published
/// row agrees first. Pentagram and Desargues share a graph, so only the
/// row separates them.
inline std::vector<CatalogMatch> recognize(const Geometry& g, const GeometryInvariants& inv) {
  std::vector<CatalogMatch> out;
  std::optional<std::string> canon;
  std::optional<Spectrum> spec = inv.spectrum;
  for (const auto& e : catalog()) {
    if (e.V != inv.V)
      continue;
    CatalogMatch m{&e, MatchTier::invariants, e.E == inv.E && e.T == inv.T_line && e.S == inv.S_chordless};
    bool matched = m.invariants_agree;
    if (e.build && reference(e)->graph().edge_count() == inv.E) {
      if (!canon)
        canon = canonical_form(g.graph());
      if (*canon == detail::reference_data(e).canonical) {
        m.tier = MatchTier::isomorphism;
        matched = true;
      }
    }
    if (m.tier != MatchTier::isomorphism && (e.spectrum || e.build) && e.E == inv.E && inv.V <= kDefaultSpectrumBound) {
      if (!spec)
        spec = spectrum(g.graph());
      const Spectrum& want = e.spectrum ? *e.spectrum : detail::reference_data(e).spectrum;
      if (spectrum_matches(*spec, want, 1e-9)) {
        m.tier = MatchTier::spectrum;
        matched = true;
      }
    }
    if (matched)
      out.push_back(m);
  }
  std::stable_sort(out.begin(), out.end(), [](const CatalogMatch& x, const CatalogMatch& y) {
    return std::make_tuple(x.tier, !x.invariants_agree) < std::make_tuple(y.tier, !y.invariants_agree);
  });
  return out;
}

inline std::vector<CatalogMatch> recognize(const Geometry& g) { return recognize(g, invariants(g, false)); }

inline nlohmann::json to_json(const CatalogMatch& m) {
  return {{"name", m.entry->name}, {"match_tier", to_string(m.tier)}, {"invariants_agree", m.invariants_agree}};
}

/// The geometry report with recognized_as and match_tier filled in from the
/// best match (null when nothing matches).
inline nlohmann::json geometry_report(const InducedGeometry& ig, bool with_spectrum = true) {
  auto inv = invariants(ig.geometry, with_spectrum);
  auto j = to_json(ig.geometry, inv);
  auto matches = recognize(ig.geometry, inv);
  j["recognized_as"] = matches.empty() ? nlohmann::json(nullptr) : nlohmann::json(matches[0].entry->name);
  j["match_tier"] = matches.empty() ? nlohmann::json(nullptr) : nlohmann::json(to_string(matches[0].tier));
  auto all = nlohmann::json::array();
  for (const auto& m : matches)
    all.push_back(to_json(m));
  j["matches"] = std::move(all);
  j["subgroup_count"] = ig.cls.subgroups.size();
  j["fingerprint_exact"] = ig.cls.fingerprint.exact;
  return j;
}

/// One row of the aggregate report: a distinct invariant tuple seen at some
/// index, with how many dessins produced it and the first one that did.
struct CatalogRow {
  std::size_t index = 0;
  std::size_t V = 0, E = 0;
  std::uint64_t T_plain = 0, T_line = 0, S_chordless = 0, S_equal = 0;
  bool connected = true, spanning = true;
  std::size_t dessins = 0;
  std::string example; // "alpha beta" of the first dessin in canonical order
  std::string recognized_as;
  std::string match_tier;
  bool invariants_agree = false;

  auto key() const { return std::make_tuple(index, !connected, !spanning, V, E, T_line, S_chordless, T_plain, S_equal); }
};

/// Enumerates every dessin of index lo..hi, induces its geometries and
/// aggregates them by invariants. Deterministic for any worker count.
inline std::vector<CatalogRow> catalog_rows(std::size_t lo, std::size_t hi, std::size_t workers = 1,
                                            DessinMode mode = DessinMode::preclean) {
  std::vector<CatalogRow> out;
  for (std::size_t n = lo; n <= hi; ++n) {
    EnumerationTask task;
    task.n = n;
    task.mode = mode;
    task.workers = workers;
    auto dessins = enumerate(task);
    // per dessin, the rows it contributes; merged in dessin order
    std::vector<std::vector<CatalogRow>> per(dessins.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < dessins.size(); i = next++) {
        for (const auto& ig : induce(dessins[i])) {
          auto inv = invariants(ig.geometry, false);
          CatalogRow r;
          r.index = n;
          r.V = inv.V;
          r.E = inv.E;
          r.T_plain = inv.T_plain;
          r.T_line = inv.T_line;
          r.S_chordless = inv.S_chordless;
          r.S_equal = inv.S_equal;
          r.connected = inv.connected;
          r.spanning = inv.spanning;
          r.dessins = 1;
          r.example = dessins[i].alpha().to_string() + " " + dessins[i].beta().to_string();
          per[i].push_back(std::move(r));
        }
      }
    };
    std::size_t w = std::max<std::size_t>(1, std::min(workers, dessins.size()));
    if (w == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t k = 0; k < w; ++k)
        pool.emplace_back(work);
      for (auto& t : pool)
        t.join();
    }
    std::map<decltype(CatalogRow{}.key()), CatalogRow> rows;
    for (auto& list : per)
      for (auto& r : list) {
        auto [it, fresh] = rows.try_emplace(r.key(), r);
        if (!fresh)
          ++it->second.dessins;
      }
    // recognition on one geometry per row
    for (auto& [k, r] : rows) {
      auto d = parse_dessin_text("n=" + std::to_string(n) + "\nalpha=" + r.example.substr(0, r.example.find(' ')) +
                                 "\nbeta=" + r.example.substr(r.example.find(' ') + 1) + "\nmode=" +
                                 std::string(to_string(mode)) + "\n");
      for (const auto& ig : induce(d)) {
        auto inv = invariants(ig.geometry, false);
        if (std::make_tuple(inv.E, inv.T_line, inv.S_chordless, inv.T_plain, inv.S_equal, inv.connected) !=
            std::make_tuple(r.E, r.T_line, r.S_chordless, r.T_plain, r.S_equal, r.connected))
          continue;
        auto matches = recognize(ig.geometry, inv);
        if (!matches.empty()) {
          r.recognized_as = matches[0].entry->name;
          r.match_tier = to_string(matches[0].tier);
          r.invariants_agree = matches[0].invariants_agree;
        }
        break;
      }
      out.push_back(r);
    }
  }
  return out;
}

inline nlohmann::json to_json(const CatalogRow& r) {
  nlohmann::json j = {{"index", r.index},
                      {"V", r.V},
                      {"E", r.E},
                      {"T_plain", r.T_plain},
                      {"T_line", r.T_line},
                      {"S_chordless", r.S_chordless},
                      {"S_equal", r.S_equal},
                      {"connected", r.connected},
                      {"spanning", r.spanning},
                      {"dessins", r.dessins},
                      {"example", r.example}};
  j["recognized_as"] = r.recognized_as.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.recognized_as);
  j["match_tier"] = r.match_tier.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.match_tier);
  j["invariants_agree"] = r.invariants_agree;
  return j;
}

} // namespace dessins
