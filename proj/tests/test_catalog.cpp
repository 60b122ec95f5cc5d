#include <map>
#include <set>

#include <gtest/gtest.h>

#include "dessins/catalog.hpp"
#include "fixtures.hpp"

using namespace dessins;

namespace {

struct Srg {
  std::size_t k, lambda, mu;
  bool operator==(const Srg&) const = default;
};

// brute force: nullopt unless regular with constant lambda and mu
std::optional<Srg> srg_parameters(const Graph& g) {
  std::size_t n = g.size();
  std::optional<std::size_t> k, lam, mu;
  for (point a = 0; a < n; ++a) {
    if (k && *k != g.degree(a))
      return std::nullopt;
    k = g.degree(a);
    for (point b = a + 1; b < n; ++b) {
      std::size_t common = 0;
      for (point c = 0; c < n; ++c)
        common += g.adjacent(a, c) && g.adjacent(b, c);
      auto& slot = g.adjacent(a, b) ? lam : mu;
      if (slot && *slot != common)
        return std::nullopt;
      slot = common;
    }
  }
  return Srg{*k, lam.value_or(0), mu.value_or(0)};
}

const CatalogEntry& entry(const std::string& name) {
  auto e = catalog_entry(name);
  if (!e)
    throw std::runtime_error("no catalog entry " + name);
  return *e;
}

} // namespace

TEST(Catalog, ReferencesRecognizeThemselves) {
  for (const auto& e : catalog()) {
    const Geometry* g = reference(e);
    if (!e.build) {
      EXPECT_EQ(g, nullptr) << e.name;
      continue;
    }
    ASSERT_NE(g, nullptr) << e.name;
    EXPECT_EQ(g->size(), e.V) << e.name;
    auto ms = recognize(*g);
    ASSERT_FALSE(ms.empty()) << e.name;
    EXPECT_EQ(ms[0].entry, &e) << e.name << " recognized as " << ms[0].entry->name;
    EXPECT_EQ(ms[0].tier, MatchTier::isomorphism) << e.name;
  }
}

TEST(Catalog, ReferenceConstructions) {
  // independent checks on the strongly regular references
  auto srg = [](const std::string& name) { return srg_parameters(reference(entry(name))->graph()); };
  EXPECT_EQ(srg("Clebsch graph"), (Srg{10, 6, 6}));
  EXPECT_EQ(srg("Shrikhande graph"), (Srg{6, 2, 2}));
  EXPECT_EQ(srg("Kneser graph KG(7,2)"), (Srg{10, 3, 6}));
  EXPECT_EQ(srg("GQ(2,4)"), (Srg{10, 1, 5}));
  EXPECT_EQ(srg("Schlafli graph"), (Srg{16, 10, 8}));
  EXPECT_EQ(srg("Cremona-Richmond (15_3) GQ(2,2)"), (Srg{6, 1, 3}));
  EXPECT_EQ(srg("Petersen graph"), (Srg{3, 0, 1}));
  // Shrikhande and the 4x4 rook graph share parameters but are not isomorphic
  auto rook = Geometry::from_graph([] {
    Graph g(16);
    for (point a = 0; a < 16; ++a)
      for (point b = a + 1; b < 16; ++b)
        if (a / 4 == b / 4 || a % 4 == b % 4)
          g.add_edge(a, b);
    return g;
  }());
  EXPECT_EQ(srg_parameters(rook.graph()), (Srg{6, 2, 2}));
  for (const auto& m : recognize(rook))
    EXPECT_NE(m.tier, MatchTier::isomorphism) << m.entry->name;

  // GQ axiom for the line constructions: a point off a line is collinear with exactly one of its points
  for (const char* name : {"GQ(2,4)", "Cremona-Richmond (15_3) GQ(2,2)"}) {
    const Geometry* g = reference(entry(name));
    for (const auto& line : g->lines())
      for (point p = 0; p < g->size(); ++p) {
        if (std::find(line.begin(), line.end(), p) != line.end())
          continue;
        std::size_t seen = 0;
        for (point q : line)
          seen += g->graph().adjacent(p, q);
        EXPECT_EQ(seen, 1u) << name;
      }
  }
  // the biplane: any two points on one side share exactly two neighbours
  const Graph& ig = reference(entry("IG(11,5,2)"))->graph();
  for (point a = 0; a < 11; ++a)
    for (point b = a + 1; b < 11; ++b) {
      std::size_t common = 0;
      for (point c = 0; c < 22; ++c)
        common += ig.adjacent(a, c) && ig.adjacent(b, c);
      EXPECT_EQ(common, 2u);
    }
}

TEST(Catalog, PrintedSpectra) {
  std::set<std::string> agree, disagree;
  for (const auto& e : catalog()) {
    if (!e.spectrum || !e.build)
      continue;
    auto inv = invariants(*reference(e), true);
    ASSERT_TRUE(inv.spectrum) << e.name;
    (spectrum_matches(*inv.spectrum, *e.spectrum) ? agree : disagree).insert(e.name);
  }
  EXPECT_EQ(agree, (std::set<std::string>{"Clebsch graph", "Shrikhande graph", "L(IG(7,3,1))", "IG(11,5,2)",
                                           "GQ(2,4)", "Schlafli graph"}));
  // the printed KG(7,2) spectrum belongs to its complement, the triangular graph T(7)
  EXPECT_EQ(disagree, (std::set<std::string>{"Kneser graph KG(7,2)"}));
  auto complement = Geometry::from_graph(reference(entry("Kneser graph KG(7,2)"))->graph().complement());
  auto inv = invariants(complement, true);
  EXPECT_TRUE(spectrum_matches(*inv.spectrum, *entry("Kneser graph KG(7,2)").spectrum));
  EXPECT_EQ(srg_parameters(complement.graph()), (Srg{10, 5, 4}));
}

TEST(Catalog, PublishedCountDiscrepancies) {
  std::map<std::string, std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>>> found;
  for (const auto& e : catalog())
    for (const auto& d : reference_discrepancies(e))
      found[e.name].emplace_back(d.field, d.published, d.computed);
  using D = std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>>;
  EXPECT_EQ(found.size(), 4u);
  EXPECT_EQ(found["bipartite graph K(6,6)"], (D{{"S", 255, 225}}));
  EXPECT_EQ(found["fourpartite graph K(3,3,3,3)"], (D{{"T", 0, 108}}));
  EXPECT_EQ(found["Clebsch graph"], (D{{"T", 0, 160}}));
  EXPECT_EQ(found["Kneser graph KG(7,2)"], (D{{"T", 35, 105}}));
  // closed forms: K(m,m) has C(m,2)^2 squares; K(3,3,3,3) has 3^3 * 4 triangles
  EXPECT_EQ(15u * 15u, 225u);
  EXPECT_EQ(invariants(*reference(entry("fourpartite graph K(3,3,3,3)")), false).T_plain, 27u * 4u);
}

TEST(Catalog, RecognizeInducedGeometries) {
  auto best = [](const std::string& fixture_name, std::size_t lines) {
    for (const auto& ig : induce(fixture::dessin(fixture_name)))
      if (ig.geometry.lines().size() == lines) {
        auto ms = recognize(ig.geometry);
        return ms.empty() ? std::string() : ms[0].entry->name + "/" + std::string(to_string(ms[0].tier));
      }
    return std::string("none");
  };
  EXPECT_EQ(best("octahedron", 8), "3-orthoplex (octahedron)/isomorphism");
  EXPECT_EQ(best("fano", 7), "Fano plane (7_3)/isomorphism");
  EXPECT_EQ(best("mermin", 6), "(3x3)-grid/isomorphism");
  EXPECT_EQ(best("pappus", 9), "Pappus (9_3)/isomorphism");
  EXPECT_EQ(best("gq22", 15), "Cremona-Richmond (15_3) GQ(2,2)/isomorphism");
}

TEST(Catalog, PentagramAndDesarguesRanking) {
  // same collinearity graph; the line count decides which name comes first
  for (auto [name, want] : {std::pair{"pentagram", "Mermin's pentagram"}, std::pair{"desargues", "Desargues (10_3)"}}) {
    bool seen = false;
    for (const auto& ig : induce(fixture::dessin(name))) {
      auto inv = invariants(ig.geometry, false);
      if (inv.V != 10 || inv.E != 30)
        continue;
      auto ms = recognize(ig.geometry, inv);
      ASSERT_GE(ms.size(), 2u);
      EXPECT_EQ(ms[0].entry->name, want);
      EXPECT_TRUE(ms[0].invariants_agree);
      EXPECT_EQ(ms[0].tier, MatchTier::isomorphism);
      EXPECT_FALSE(ms[1].invariants_agree);
      seen = true;
    }
    EXPECT_TRUE(seen) << name;
  }
}

TEST(Catalog, SpectrumTier) {
  // the 4x4 rook graph is cospectral with Shrikhande
  auto rook = Geometry::from_graph([] {
    Graph g(16);
    for (point a = 0; a < 16; ++a)
      for (point b = a + 1; b < 16; ++b)
        if (a / 4 == b / 4 || a % 4 == b % 4)
          g.add_edge(a, b);
    return g;
  }());
  auto ms = recognize(rook, invariants(rook, true));
  ASSERT_FALSE(ms.empty());
  EXPECT_EQ(ms[0].entry->name, "Shrikhande graph");
  EXPECT_EQ(ms[0].tier, MatchTier::spectrum);
  EXPECT_TRUE(recognize(Geometry::from_graph(refgraph::cycle(7))).empty());
}

TEST(Catalog, RowsUpToSeven) {
  auto rows = catalog_rows(1, 7);
  std::set<std::string> connected;
  for (const auto& r : rows)
    if (r.connected && r.invariants_agree)
      connected.insert(r.recognized_as);
  for (const char* want : {"2-simplex", "3-simplex", "square/quadrangle", "4-simplex", "5-simplex",
                           "3-orthoplex (octahedron)", "bipartite graph K(3,3)", "6-simplex", "Fano plane (7_3)"})
    EXPECT_EQ(connected.count(want), 1u) << want;
  // rows are sorted and unique, and the worker count does not change them
  for (std::size_t i = 1; i < rows.size(); ++i)
    EXPECT_LT(rows[i - 1].key(), rows[i].key());
  auto again = catalog_rows(1, 7, 3);
  ASSERT_EQ(again.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(to_json(again[i]), to_json(rows[i]));
  }
}

TEST(Catalog, Report) {
  auto igs = induce(fixture::dessin("fano"));
  bool any = false;
  for (const auto& ig : igs) {
    auto j = geometry_report(ig, true);
    if (j["recognized_as"] == "Fano plane (7_3)") {
      any = true;
      EXPECT_EQ(j["match_tier"], "isomorphism");
      EXPECT_TRUE(j.contains("spectrum"));
    }
  }
  EXPECT_TRUE(any);
}
