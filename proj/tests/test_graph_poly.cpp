#include <complex>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dessins/graph.hpp"
#include "dessins/intpoly.hpp"
#include "dessins/roots.hpp"
#include "oracles.hpp"

using namespace dessins;

namespace {

Graph petersen() {
  // Kneser graph K(5,2): 2-subsets, adjacent when disjoint
  std::vector<std::pair<int, int>> sets;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      sets.emplace_back(a, b);
  Graph g(10);
  for (point i = 0; i < 10; ++i)
    for (point j = i + 1; j < 10; ++j) {
      auto [a, b] = sets[i];
      auto [c, d] = sets[j];
      if (a != c && a != d && b != c && b != d)
        g.add_edge(i, j);
    }
  return g;
}

Graph random_graph(std::size_t n, double p, std::mt19937& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (point i = 0; i < n; ++i)
    for (point j = i + 1; j < n; ++j)
      if (coin(rng))
        g.add_edge(i, j);
  return g;
}

Graph relabel(const Graph& g, const std::vector<point>& perm) {
  Graph h(g.size());
  for (auto [a, b] : g.edges())
    h.add_edge(perm[a], perm[b]);
  return h;
}

std::vector<std::vector<long long>> adjacency(const Graph& g) {
  std::vector<std::vector<long long>> a(g.size(), std::vector<long long>(g.size(), 0));
  for (auto [x, y] : g.edges())
    a[x][y] = a[y][x] = 1;
  return a;
}

IntPoly from_ints(std::initializer_list<long long> c) { return IntPoly(c.begin(), c.end()); }

IntPoly mul(const IntPoly& a, const IntPoly& b) {
  IntPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] += a[i] * b[j];
  return r;
}

IntPoly power(const IntPoly& a, int e) {
  IntPoly r{1};
  while (e-- > 0)
    r = mul(r, a);
  return r;
}

} // namespace

TEST(Graph, BasicCounts) {
  Graph k4(4);
  for (point i = 0; i < 4; ++i)
    for (point j = i + 1; j < 4; ++j)
      k4.add_edge(i, j);
  EXPECT_EQ(k4.edge_count(), 6u);
  EXPECT_EQ(count_triangles(k4), 4u);
  EXPECT_EQ(count_chordless_squares(k4), 0u);
  EXPECT_EQ(maximal_cliques(k4).size(), 1u);

  Graph c4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  EXPECT_EQ(count_chordless_squares(c4), 1u);
  EXPECT_EQ(count_triangles(c4), 0u);

  Graph p = petersen();
  EXPECT_EQ(p.edge_count(), 15u);
  EXPECT_EQ(count_triangles(p), 0u);
  EXPECT_EQ(count_chordless_squares(p), 0u);
  // the complement is the line graph of K5: 5 stars of 4 triangles plus 10 from K5 itself
  EXPECT_EQ(count_triangles(p.complement()), 30u);
  EXPECT_TRUE(is_connected(p));
  EXPECT_THROW(k4.add_edge(1, 1), std::invalid_argument);
}

TEST(Graph, CountsMatchBruteForce) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = random_graph(9, 0.45, rng);
    std::uint64_t tri = 0, sq = 0;
    const point n = 9;
    for (point a = 0; a < n; ++a)
      for (point b = a + 1; b < n; ++b)
        for (point c = b + 1; c < n; ++c)
          tri += g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(a, c);
    // ordered 4-cycles a-b-c-d with both diagonals missing, divided by the 8 symmetries
    for (point a = 0; a < n; ++a)
      for (point b = 0; b < n; ++b)
        for (point c = 0; c < n; ++c)
          for (point d = 0; d < n; ++d) {
            std::set<point> s{a, b, c, d};
            if (s.size() != 4)
              continue;
            sq += g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(c, d) && g.adjacent(d, a) && !g.adjacent(a, c) &&
                  !g.adjacent(b, d);
          }
    EXPECT_EQ(count_triangles(g), tri);
    EXPECT_EQ(count_chordless_squares(g), sq / 8);
  }
}

TEST(Graph, MaximalCliquesMatchBruteForce) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = random_graph(10, 0.5, rng);
    std::vector<std::vector<point>> expected;
    for (unsigned mask = 1; mask < (1u << 10); ++mask) {
      std::vector<point> s;
      for (point v = 0; v < 10; ++v)
        if (mask >> v & 1)
          s.push_back(v);
      auto is_clique = [&](unsigned m) {
        for (point a = 0; a < 10; ++a)
          for (point b = a + 1; b < 10; ++b)
            if ((m >> a & 1) && (m >> b & 1) && !g.adjacent(a, b))
              return false;
        return true;
      };
      if (!is_clique(mask))
        continue;
      bool maximal = true;
      for (point v = 0; v < 10 && maximal; ++v)
        if (!(mask >> v & 1) && is_clique(mask | 1u << v))
          maximal = false;
      if (maximal)
        expected.push_back(s);
    }
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(maximal_cliques(g), expected);
  }
}

TEST(GraphCanon, AgreesWithBruteForce) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    Graph a = random_graph(6, 0.5, rng);
    Graph b = random_graph(6, 0.5, rng);
    auto ca = oracle::brute_canonical(6, [&](point x, point y) { return a.adjacent(x, y); });
    auto cb = oracle::brute_canonical(6, [&](point x, point y) { return b.adjacent(x, y); });
    EXPECT_EQ(isomorphic(a, b), ca == cb);
  }
}

TEST(GraphCanon, InvariantUnderRelabeling) {
  std::mt19937 rng(5);
  std::vector<Graph> graphs{petersen(), petersen().complement()};
  for (int i = 0; i < 6; ++i)
    graphs.push_back(random_graph(14, 0.3 + 0.05 * i, rng));
  for (const auto& g : graphs) {
    auto c = canonical_labeling(g);
    // the labeling reproduces the form
    std::vector<point> pos(g.size());
    for (point i = 0; i < g.size(); ++i)
      pos[c.labeling[i]] = i;
    EXPECT_EQ(canonical_form(relabel(g, pos)), c.form);
    for (int t = 0; t < 5; ++t) {
      std::vector<point> perm(g.size());
      std::iota(perm.begin(), perm.end(), point{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      EXPECT_EQ(canonical_form(relabel(g, perm)), c.form);
    }
  }
  EXPECT_FALSE(isomorphic(petersen(), petersen().complement()));
}

TEST(IntPoly, CharpolySmall) {
  EXPECT_EQ(charpoly({{0, 1}, {1, 0}}), from_ints({-1, 0, 1}));
  EXPECT_EQ(to_string(charpoly({{0, 1}, {1, 0}})), "x^2 - 1");
  EXPECT_EQ(charpoly({}), from_ints({1}));
  // (x-3)(x-1)^5(x+2)^4
  IntPoly expected = mul(mul(from_ints({-3, 1}), power(from_ints({-1, 1}), 5)), power(from_ints({2, 1}), 4));
  EXPECT_EQ(charpoly(adjacency(petersen())), expected);
}

TEST(IntPoly, CharpolyMatchesFaddeevLeverrier) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> entry(-40, 40);
  for (std::size_t n : {3u, 7u, 12u}) {
    std::vector<std::vector<long long>> a(n, std::vector<long long>(n));
    for (auto& row : a)
      for (auto& v : row)
        v = entry(rng);
    auto oracle = oracle::faddeev_leverrier(a);
    auto got = charpoly(a);
    ASSERT_EQ(got.size(), oracle.size());
    for (std::size_t k = 0; k < got.size(); ++k)
      EXPECT_EQ(big_rational(got[k]), oracle[k]);
  }
  // large coefficients need several primes
  Graph g = random_graph(40, 0.5, rng);
  auto oracle = oracle::faddeev_leverrier(adjacency(g));
  auto got = charpoly(adjacency(g));
  for (std::size_t k = 0; k < got.size(); ++k)
    EXPECT_EQ(big_rational(got[k]), oracle[k]);
}

TEST(IntPoly, CharpolyGaussian) {
  // [[0, i], [-i, 0]]: x^2 - 1
  auto [re, im] = charpoly_gaussian({{0, 0}, {0, 0}}, {{0, 1}, {-1, 0}});
  EXPECT_EQ(re, from_ints({-1, 0, 1}));
  EXPECT_TRUE(im.empty());
  // [[i, 0], [0, 2]]: x^2 - (2+i)x + 2i
  auto [re2, im2] = charpoly_gaussian({{0, 0}, {0, 2}}, {{1, 0}, {0, 0}});
  EXPECT_EQ(re2, from_ints({0, -2, 1}));
  EXPECT_EQ(im2, from_ints({2, -1}));
  // real matrices agree with charpoly
  auto a = adjacency(petersen());
  std::vector<std::vector<long long>> b(10, std::vector<long long>(10, 0));
  EXPECT_EQ(charpoly_gaussian(a, b).first, charpoly(a));
}

TEST(IntPoly, SquarefreeAndIntegerRoots) {
  IntPoly p = mul(mul(from_ints({-3, 1}), power(from_ints({-1, 1}), 5)), power(from_ints({2, 1}), 4));
  auto sf = squarefree_decomposition(p);
  ASSERT_EQ(sf.size(), 3u);
  EXPECT_EQ(sf[0], std::make_pair(from_ints({-3, 1}), std::size_t{1}));
  EXPECT_EQ(sf[1], std::make_pair(from_ints({2, 1}), std::size_t{4}));
  EXPECT_EQ(sf[2], std::make_pair(from_ints({-1, 1}), std::size_t{5}));
  auto roots = integer_roots(p);
  std::sort(roots.begin(), roots.end());
  EXPECT_EQ(roots, (std::vector<big_int>{-2, 1, 3}));
  EXPECT_EQ(integer_roots(from_ints({0, 0, -2, 1})), (std::vector<big_int>{0, 2}));
  EXPECT_TRUE(integer_roots(from_ints({-2, 0, 1})).empty());
}

TEST(Roots, AberthDoublePrecision) {
  using C = std::complex<double>;
  // (z-1)(z+2)(z^2+1)
  std::vector<C> p{C(-2), C(1), C(-1), C(1), C(1)};
  auto r = aberth(p, 1e-14);
  ASSERT_TRUE(r.converged);
  auto cl = cluster_roots(r.roots, 1e-8);
  EXPECT_EQ(cl.size(), 4u);
  for (const auto& c : cl) {
    bool hit = std::abs(c.center - C(1)) < 1e-10 || std::abs(c.center - C(-2)) < 1e-10 ||
               std::abs(c.center - C(0, 1)) < 1e-10 || std::abs(c.center - C(0, -1)) < 1e-10;
    EXPECT_TRUE(hit) << c.center;
  }
  EXPECT_GT(cluster_separation(cl), 1.0);
}

TEST(Roots, AberthMultiprecisionMultipleRoot) {
  using C = mp_complex<256>;
  using R = mp_real<256>;
  // (z-1)^3 (z+1): the triple root resolves to about a third of the digits
  std::vector<C> p{C(-1), C(2), C(0), C(-2), C(1)};
  auto r = aberth(p, R(1e-70));
  auto cl = cluster_roots(r.roots, R(1e-15));
  ASSERT_EQ(cl.size(), 2u);
  std::multiset<std::size_t> mult;
  for (const auto& c : cl)
    mult.insert(c.multiplicity);
  EXPECT_EQ(mult, (std::multiset<std::size_t>{1, 3}));
  EXPECT_THROW(aberth(std::vector<C>{C(1)}, R(1e-10)), std::invalid_argument);
}

TEST(Roots, InclusionDisksMergeCopies) {
  using C = std::complex<double>;
  // (z-1)^6 in doubles: the copies spread by about eps^(1/6), far above 1e-12
  std::vector<C> p{C(1), C(-6), C(15), C(-20), C(15), C(-6), C(1)};
  auto r = aberth(p, 1e-15);
  auto loose = cluster_roots(r.roots, 1e-12);
  EXPECT_GT(loose.size(), 1u);
  auto disks = inclusion_radii(p, r.roots);
  auto cl = cluster_roots(r.roots, 1e-12, disks);
  ASSERT_EQ(cl.size(), 1u);
  EXPECT_EQ(cl[0].multiplicity, 6u);
  EXPECT_LT(std::abs(cl[0].center - C(1)), cl[0].diameter);
  EXPECT_GT(cl[0].diameter, 1e-12);
}
