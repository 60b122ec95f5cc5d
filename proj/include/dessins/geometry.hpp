#pragma once

// Point-line geometries induced by a dessin: pairs of edges are grouped by
// the fingerprint of their stabilizer in P = <alpha, beta>, each group is a
// graph, and lines are the maximal cliques of pairs sharing one identical
// stabilizer.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dessins/dessin.hpp"
#include "dessins/graph.hpp"
#include "dessins/perm_group.hpp"
#include "dessins/spectrum.hpp"
#include "json.hpp"

namespace dessins {

inline constexpr std::size_t kNoLabel = static_cast<std::size_t>(-1);

/// A simple graph on n points whose edges carry labels (the identity of the
/// stabilizer of the pair), with its lines.
class Geometry {
public:
  Geometry() = default;

  /// Lines are the maximal cliques, of size >= 2, of each label's subgraph.
  static Geometry from_labeled_edges(std::size_t n, const std::vector<std::pair<point, point>>& edges,
                                     const std::vector<std::size_t>& labels, std::string source = {}) {
    if (edges.size() != labels.size())
      throw std::invalid_argument("one label per edge");
    Geometry g(n, std::move(source));
    for (std::size_t i = 0; i < edges.size(); ++i)
      g.set_edge(edges[i].first, edges[i].second, labels[i]);
    g.lines_ = g.cliques_by_label();
    return g;
  }

  /// All edges with one label: lines are the maximal cliques of the graph.
  static Geometry from_graph(const Graph& graph, std::string source = {}) {
    auto edges = graph.edges();
    return from_labeled_edges(graph.size(), edges, std::vector<std::size_t>(edges.size(), 0), std::move(source));
  }

  /// A configuration given by its lines; each line gets its own label.
  /// Two lines may not share a pair of points.
  static Geometry from_lines(std::size_t n, std::vector<std::vector<point>> lines, std::string source = {}) {
    Geometry g(n, std::move(source));
    for (std::size_t l = 0; l < lines.size(); ++l) {
      auto& line = lines[l];
      std::sort(line.begin(), line.end());
      if (line.size() < 2 || std::adjacent_find(line.begin(), line.end()) != line.end())
        throw std::invalid_argument("a line needs at least two distinct points");
      for (std::size_t i = 0; i < line.size(); ++i)
        for (std::size_t j = i + 1; j < line.size(); ++j) {
          if (g.graph_.adjacent(line[i], line[j]))
            throw std::invalid_argument("two lines share the pair " + std::to_string(line[i] + 1) + "," +
                                        std::to_string(line[j] + 1));
          g.set_edge(line[i], line[j], l);
        }
    }
    std::sort(lines.begin(), lines.end());
    g.lines_ = std::move(lines);
    return g;
  }

  std::size_t size() const noexcept { return graph_.size(); }
  const Graph& graph() const noexcept { return graph_; }
  const std::vector<std::vector<point>>& lines() const noexcept { return lines_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t label(point a, point b) const { return labels_[a * size() + b]; }

  std::size_t label_count() const {
    std::set<std::size_t> s;
    for (auto l : labels_)
      if (l != kNoLabel)
        s.insert(l);
    return s.size();
  }

  /// Edge and line union over the same point set; labels of g2 are shifted
  /// past those of g1 so that stabilizer identities stay apart.
  friend Geometry union_geometry(const Geometry& g1, const Geometry& g2) {
    if (g1.size() != g2.size())
      throw std::invalid_argument("union of geometries on " + std::to_string(g1.size()) + " and " +
                                  std::to_string(g2.size()) + " points");
    if (&g1 == &g2 || g1 == g2)
      return g1;
    std::size_t shift = 0;
    for (auto l : g1.labels_)
      if (l != kNoLabel)
        shift = std::max(shift, l + 1);
    Geometry out(g1.size(), g1.source_ + " + " + g2.source_);
    const std::size_t n = g1.size();
    for (point a = 0; a < n; ++a)
      for (point b = a + 1; b < n; ++b) {
        if (g1.graph_.adjacent(a, b))
          out.set_edge(a, b, g1.label(a, b));
        else if (g2.graph_.adjacent(a, b))
          out.set_edge(a, b, g2.label(a, b) + shift);
      }
    std::set<std::vector<point>> lines(g1.lines_.begin(), g1.lines_.end());
    lines.insert(g2.lines_.begin(), g2.lines_.end());
    out.lines_.assign(lines.begin(), lines.end());
    return out;
  }

  /// Drops the given lines; an edge goes only when every line through it goes.
  Geometry remove_lines(std::vector<std::vector<point>> removed) const {
    for (auto& l : removed)
      std::sort(l.begin(), l.end());
    std::set<std::vector<point>> gone(removed.begin(), removed.end());
    for (const auto& l : gone)
      if (std::find(lines_.begin(), lines_.end(), l) == lines_.end())
        throw std::invalid_argument("not a line of the geometry");
    Geometry out(size(), source_ + " minus " + std::to_string(gone.size()) + " lines");
    for (const auto& l : lines_)
      if (!gone.count(l)) {
        out.lines_.push_back(l);
        for (std::size_t i = 0; i < l.size(); ++i)
          for (std::size_t j = i + 1; j < l.size(); ++j)
            out.set_edge(l[i], l[j], label(l[i], l[j]));
      }
    return out;
  }

  friend bool operator==(const Geometry& x, const Geometry& y) {
    return x.graph_ == y.graph_ && x.labels_ == y.labels_ && x.lines_ == y.lines_;
  }

private:
  Geometry(std::size_t n, std::string source) : graph_(n), labels_(n * n, kNoLabel), source_(std::move(source)) {}

  void set_edge(point a, point b, std::size_t label) {
    graph_.add_edge(a, b);
    labels_[a * size() + b] = labels_[b * size() + a] = label;
  }

  std::vector<std::vector<point>> cliques_by_label() const {
    std::map<std::size_t, Graph> parts;
    const std::size_t n = size();
    for (point a = 0; a < n; ++a)
      for (point b = a + 1; b < n; ++b)
        if (auto l = label(a, b); l != kNoLabel) {
          auto it = parts.try_emplace(l, n).first;
          it->second.add_edge(a, b);
        }
    std::set<std::vector<point>> out;
    for (const auto& [l, g] : parts)
      for (auto& c : maximal_cliques(g))
        if (c.size() >= 2)
          out.insert(std::move(c));
    return {out.begin(), out.end()};
  }

  Graph graph_;
  std::vector<std::size_t> labels_;
  std::vector<std::vector<point>> lines_;
  std::string source_;
};

struct GeometryInvariants {
  std::size_t V = 0, E = 0;
  std::uint64_t T_plain = 0;
  std::uint64_t T_line = 0;      // triangles whose three pairs carry one label
  std::uint64_t S_chordless = 0; // chordless 4-cycles
  std::uint64_t S_equal = 0;     // those whose four sides carry one label
  bool connected = false;
  bool spanning = false; // no isolated point
  std::optional<Spectrum> spectrum;
};

inline GeometryInvariants invariants(const Geometry& g, bool with_spectrum = true,
                                     std::size_t spectrum_bound = kDefaultSpectrumBound) {
  GeometryInvariants inv;
  const Graph& gr = g.graph();
  const std::size_t n = gr.size();
  inv.V = n;
  inv.E = gr.edge_count();
  inv.T_plain = count_triangles(gr);
  inv.S_chordless = count_chordless_squares(gr);
  inv.connected = is_connected(gr);
  inv.spanning = true;
  for (point v = 0; v < n; ++v)
    if (gr.degree(v) == 0)
      inv.spanning = false;
  for (point a = 0; a < n; ++a)
    for (auto b = gr.row(a).find_next(a); b != Bits::npos; b = gr.row(a).find_next(b)) {
      Bits common = gr.row(a) & gr.row(static_cast<point>(b));
      auto l = g.label(a, static_cast<point>(b));
      for (auto c = common.find_next(b); c != Bits::npos; c = common.find_next(c))
        inv.T_line += g.label(a, static_cast<point>(c)) == l && g.label(static_cast<point>(b), static_cast<point>(c)) == l;
    }
  // chordless squares u-v-w-x with every side labelled alike, found from
  // their diagonal {u, w}, each twice
  std::uint64_t twice = 0;
  for (point u = 0; u < n; ++u)
    for (point w = u + 1; w < n; ++w) {
      if (gr.adjacent(u, w))
        continue;
      std::vector<point> common;
      Bits c = gr.row(u) & gr.row(w);
      for (auto v = c.find_first(); v != Bits::npos; v = c.find_next(v))
        common.push_back(static_cast<point>(v));
      for (std::size_t i = 0; i < common.size(); ++i)
        for (std::size_t j = i + 1; j < common.size(); ++j) {
          point v = common[i], x = common[j];
          if (gr.adjacent(v, x))
            continue;
          auto l = g.label(u, v);
          twice += g.label(v, w) == l && g.label(w, x) == l && g.label(x, u) == l;
        }
    }
  inv.S_equal = twice / 2;
  if (with_spectrum && n <= spectrum_bound)
    inv.spectrum = spectrum(gr, spectrum_bound);
  return inv;
}

/// The pairs whose stabilizers share one fingerprint.
struct StabilizerClass {
  Fingerprint fingerprint;
  std::vector<std::pair<point, point>> pairs; // a < b, sorted
  std::vector<Subgroup> subgroups;            // the distinct stabilizers
  std::vector<std::size_t> pair_subgroup;     // index into subgroups, one per pair
  bool connected = false;
  bool spanning = false;
};

struct InducedGeometry {
  StabilizerClass cls;
  Geometry geometry;
};

namespace detail {

/// Orbits of P on unordered pairs {a < b}, each pair with an element of P
/// taking the orbit representative to it.
struct PairOrbits {
  std::vector<std::pair<point, point>> reps;
  std::vector<std::size_t> orbit_of;       // by a * n + b
  std::vector<Permutation> transport;      // by a * n + b
};

inline PairOrbits pair_orbits(const std::vector<Permutation>& gens, std::size_t n) {
  PairOrbits out;
  out.orbit_of.assign(n * n, kNoLabel);
  out.transport.assign(n * n, Permutation(n));
  for (point a = 0; a < n; ++a)
    for (point b = a + 1; b < n; ++b) {
      if (out.orbit_of[a * n + b] != kNoLabel)
        continue;
      std::size_t id = out.reps.size();
      out.reps.emplace_back(a, b);
      out.orbit_of[a * n + b] = id;
      std::vector<std::pair<point, point>> queue{{a, b}};
      for (std::size_t i = 0; i < queue.size(); ++i) {
        auto [x, y] = queue[i];
        for (const auto& g : gens) {
          point u = g(x), v = g(y);
          if (u > v)
            std::swap(u, v);
          if (out.orbit_of[u * n + v] != kNoLabel)
            continue;
          out.orbit_of[u * n + v] = id;
          out.transport[u * n + v] = out.transport[x * n + y] * g;
          queue.emplace_back(u, v);
        }
      }
    }
  return out;
}

} // namespace detail

/// One geometry per stabilizer fingerprint, ordered by fingerprint. Classes
/// whose graph is disconnected or leaves points isolated are kept and
/// flagged; callers decide what to show.
inline std::vector<InducedGeometry> induce(const Dessin& d, StabilizerMode mode = StabilizerMode::pointwise,
                                           std::uint64_t cap = kFingerprintElementCap) {
  const std::size_t n = d.n();
  auto parent = std::make_shared<const PermGroup>(d.group());
  auto orbits = detail::pair_orbits({d.alpha(), d.beta()}, n);

  struct Rep {
    Subgroup stab;
    Fingerprint fp;
  };
  std::vector<Rep> reps;
  for (auto [a, b] : orbits.reps) {
    Subgroup s = stabilizer_of_pair(parent, a, b, mode);
    Fingerprint fp = s.fingerprint(cap);
    reps.push_back({std::move(s), std::move(fp)});
  }

  std::map<Fingerprint, StabilizerClass> classes;
  // pointwise stabilizers are determined by their fixed points, which keys
  // them exactly; setwise ones are compared as subgroups
  std::map<Fingerprint, std::map<std::vector<point>, std::size_t>> by_fixed;
  for (point a = 0; a < n; ++a)
    for (point b = a + 1; b < n; ++b) {
      std::size_t o = orbits.orbit_of[a * n + b];
      const Permutation& g = orbits.transport[a * n + b];
      const Rep& rep = reps[o];
      auto& cls = classes[rep.fp];
      cls.fingerprint = rep.fp;
      cls.pairs.emplace_back(a, b);
      std::size_t id = kNoLabel;
      if (mode == StabilizerMode::pointwise) {
        std::vector<point> fixed;
        for (point p : rep.stab.fixed_points())
          fixed.push_back(g(p));
        std::sort(fixed.begin(), fixed.end());
        auto& index = by_fixed[rep.fp];
        auto it = index.find(fixed);
        if (it == index.end()) {
          id = cls.subgroups.size();
          index.emplace(fixed, id);
          cls.subgroups.emplace_back(parent, rep.stab.group().conjugate(g));
        } else {
          id = it->second;
        }
      } else {
        Subgroup s(parent, rep.stab.group().conjugate(g));
        for (std::size_t i = 0; i < cls.subgroups.size() && id == kNoLabel; ++i)
          if (subgroup_equal(cls.subgroups[i], s))
            id = i;
        if (id == kNoLabel) {
          id = cls.subgroups.size();
          cls.subgroups.push_back(std::move(s));
        }
      }
      cls.pair_subgroup.push_back(id);
    }

  std::vector<InducedGeometry> out;
  for (auto& [fp, cls] : classes) {
    Geometry geo = Geometry::from_labeled_edges(n, cls.pairs, cls.pair_subgroup, fp.to_string());
    cls.connected = is_connected(geo.graph());
    cls.spanning = true;
    for (point v = 0; v < n; ++v)
      if (geo.graph().degree(v) == 0)
        cls.spanning = false;
    out.push_back({std::move(cls), std::move(geo)});
  }
  return out;
}

/// Graphviz, one colour per line.
inline std::string to_dot(const Geometry& g, const std::string& name = "geometry") {
  static const char* palette[] = {"red",    "blue",  "darkgreen", "orange", "purple", "brown",
                                  "magenta", "cyan4", "gold3",     "navy",   "olivedrab", "gray40"};
  const std::size_t n = g.size();
  std::string out = "graph \"" + name + "\" {\n  node [shape=circle];\n";
  for (point v = 0; v < n; ++v)
    out += "  " + std::to_string(v + 1) + ";\n";
  std::vector<bool> drawn(n * n, false);
  for (std::size_t l = 0; l < g.lines().size(); ++l) {
    const auto& line = g.lines()[l];
    std::string colour = palette[l % std::size(palette)];
    for (std::size_t i = 0; i < line.size(); ++i)
      for (std::size_t j = i + 1; j < line.size(); ++j) {
        point a = line[i], b = line[j];
        if (drawn[a * n + b])
          continue;
        drawn[a * n + b] = true;
        out += "  " + std::to_string(a + 1) + " -- " + std::to_string(b + 1) + " [color=" + colour +
               ", label=\"L" + std::to_string(l + 1) + "\"];\n";
      }
  }
  return out + "}\n";
}

inline nlohmann::json to_json(const Spectrum& s) {
  auto arr = nlohmann::json::array();
  for (const auto& e : s) {
    nlohmann::json j = {{"value", e.value}, {"multiplicity", e.multiplicity}};
    if (e.exact)
      j["exact"] = *e.exact;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline nlohmann::json to_json(const Geometry& g, const GeometryInvariants& inv) {
  nlohmann::json j;
  j["class_fingerprint"] = g.source();
  j["V"] = inv.V;
  j["E"] = inv.E;
  j["T_plain"] = inv.T_plain;
  j["T_line"] = inv.T_line;
  j["S_chordless"] = inv.S_chordless;
  if (inv.S_equal != inv.S_chordless)
    j["S_equal"] = inv.S_equal;
  j["connected"] = inv.connected;
  j["spanning"] = inv.spanning;
  j["spectrum"] = inv.spectrum ? to_json(*inv.spectrum) : nlohmann::json(nullptr);
  auto lines = nlohmann::json::array();
  for (const auto& l : g.lines()) {
    auto arr = nlohmann::json::array();
    for (point p : l)
      arr.push_back(p + 1);
    lines.push_back(std::move(arr));
  }
  j["lines"] = std::move(lines);
  return j;
}

} // namespace dessins
