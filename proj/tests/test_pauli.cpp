#include <random>

#include <gtest/gtest.h>

#include "dessins/catalog.hpp"
#include "dessins/pauli.hpp"
#include "fixtures.hpp"

using namespace dessins;
using Mat = Eigen::MatrixXcd;

namespace {

// oracle: Kronecker products of the 2x2 matrices, leftmost letter first
Mat dense(const std::string& text) {
  using c = std::complex<double>;
  std::size_t pos = 0;
  c phase = 1;
  if (text[pos] == '-') {
    phase = -1;
    ++pos;
  }
  if (text[pos] == 'i') {
    phase *= c(0, 1);
    ++pos;
  }
  Mat m = Mat::Identity(1, 1);
  for (; pos < text.size(); ++pos) {
    Mat s(2, 2);
    switch (text[pos]) {
    case 'I':
      s << 1, 0, 0, 1;
      break;
    case 'X':
      s << 0, 1, 1, 0;
      break;
    case 'Y':
      s << 0, c(0, -1), c(0, 1), 0;
      break;
    default:
      s << 1, 0, 0, -1;
    }
    Mat k(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        k.block(2 * i, 2 * j, 2, 2) = m(i, j) * s;
    m = k;
  }
  return phase * m;
}

PauliOp random_op(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<std::uint64_t> bits(0, (1u << n) - 1);
  std::uniform_int_distribution<unsigned> ph(0, 3);
  return PauliOp(n, bits(rng), bits(rng), ph(rng));
}

std::vector<PauliOp> ops(std::initializer_list<const char*> names) {
  std::vector<PauliOp> out;
  for (auto n : names)
    out.push_back(PauliOp::parse(n));
  return out;
}

} // namespace

TEST(Pauli, ParseAndPrint) {
  for (const char* s : {"XIZ", "-iYY", "iZ", "-XX", "I"})
    EXPECT_EQ(PauliOp::parse(s).to_string(), s);
  EXPECT_EQ(PauliOp::parse("+IX").to_string(), "IX");
  EXPECT_EQ(PauliOp::parse("\xE2\x88\x92YY").to_string(), "-YY");
  EXPECT_EQ(PauliOp::parse(" X Z ").to_string(), "XZ");
  EXPECT_TRUE(PauliOp::parse("III").is_identity());
  EXPECT_FALSE(PauliOp::parse("-III") == PauliOp::identity(3));
  EXPECT_THROW(PauliOp::parse("XQ"), PauliError);
  EXPECT_THROW(PauliOp::parse("-i"), PauliError);
  EXPECT_THROW(PauliOp::parse(""), PauliError);
  std::mt19937 rng(7);
  for (int k = 0; k < 200; ++k) {
    auto op = random_op(rng, 1 + k % 5);
    EXPECT_EQ(PauliOp::parse(op.to_string()), op);
  }
}

TEST(Pauli, Commutes) {
  EXPECT_TRUE(commutes(PauliOp::parse("IX"), PauliOp::parse("XI")));
  EXPECT_FALSE(commutes(PauliOp::parse("IX"), PauliOp::parse("IZ")));
  EXPECT_TRUE(commutes(PauliOp::parse("YZ"), PauliOp::parse("YZ")));
  EXPECT_TRUE(commutes(PauliOp::parse("XX"), PauliOp::parse("ZZ")));
  EXPECT_THROW(commutes(PauliOp::parse("X"), PauliOp::parse("XX")), PauliError);
}

TEST(Pauli, Product) {
  EXPECT_EQ(multiply(PauliOp::parse("X"), PauliOp::parse("Z")).to_string(), "-iY");
  EXPECT_EQ(multiply(PauliOp::parse("Z"), PauliOp::parse("X")).to_string(), "iY");
  EXPECT_EQ(product(ops({"XI", "IX", "XX"})).to_string(), "II");
  EXPECT_EQ(product(ops({"II", "II"})).to_string(), "II");
  EXPECT_EQ(product({}, 3).to_string(), "III");
  EXPECT_THROW(product({}), PauliError);
  EXPECT_EQ(product(ops({"XX", "ZZ", "YY"})).to_string(), "-II");
}

// symplectic answers against dense matrices
TEST(Pauli, MatrixAgreement) {
  std::mt19937 rng(2024);
  for (int k = 0; k < 1000; ++k) {
    std::size_t n = 1 + k % 3;
    auto a = random_op(rng, n), b = random_op(rng, n), c = random_op(rng, n);
    Mat ma = dense(a.to_string()), mb = dense(b.to_string()), mc = dense(c.to_string());
    EXPECT_EQ(commutes(a, b), (ma * mb - mb * ma).norm() < 1e-12) << a.to_string() << " " << b.to_string();
    auto p = product({a, b, c});
    EXPECT_LT((dense(p.to_string()) - ma * mb * mc).norm(), 1e-12)
        << a.to_string() << " " << b.to_string() << " " << c.to_string();
    EXPECT_LT((GaussMatrix::of(a).to_eigen() - ma).norm(), 1e-12) << a.to_string();
  }
}

TEST(Pauli, ChshEquationQuadruple) {
  auto r = chsh_check(ops({"IX", "XI", "IZ", "ZI"}));
  EXPECT_TRUE(r.structure_ok());
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.hermitian);
  ASSERT_EQ(r.c2_eigenvalues.size(), 2u);
  EXPECT_EQ(r.c2_eigenvalues[0].exact, 8);
  EXPECT_EQ(r.c2_eigenvalues[0].multiplicity, 2u);
  EXPECT_EQ(r.c2_eigenvalues[1].exact, 0);
  EXPECT_EQ(r.c2_eigenvalues[1].multiplicity, 2u);
  EXPECT_EQ(r.norm_squared, 8);
  EXPECT_NEAR(r.norm, 2 * std::sqrt(2.0), 1e-15);
  // C^2 = 4 - [s1,s2][s3,s4] has characteristic polynomial x^2 (x - 8)^2
  EXPECT_EQ(r.charpoly, (IntPoly{0, 0, 64, -16, 1}));
  EXPECT_NEAR(chsh_norm_numeric(ops({"IX", "XI", "IZ", "ZI"})), 2 * std::sqrt(2.0), 1e-12);
}

TEST(Pauli, ChshViolations) {
  auto r = chsh_check(ops({"IX", "XI", "IX", "XI"}));
  EXPECT_FALSE(r.structure_ok());
  bool same = false;
  for (const auto& v : r.violations)
    same = same || v.find("s1=IX and s3=IX agree") != std::string::npos;
  EXPECT_TRUE(same);
  // here C = 2 XX
  EXPECT_NEAR(r.norm, 2.0, 1e-12);
  auto bad = chsh_check(ops({"XI", "ZI", "IX", "IZ"}));
  EXPECT_FALSE(bad.structure_ok());
  EXPECT_FALSE(bad.hermitian);
  EXPECT_NEAR(bad.norm, chsh_norm_numeric(ops({"XI", "ZI", "IX", "IZ"})), 1e-9);
  EXPECT_THROW(chsh_check(ops({"IX", "XI", "IZ"})), PauliError);
  EXPECT_THROW(GaussMatrix::of(PauliOp::identity(11)), PauliError);
}

TEST(Pauli, CountSquares) {
  EXPECT_EQ(count_squares(1), 0u);
  EXPECT_EQ(count_squares(2), 90u);
  EXPECT_EQ(count_squares(3), 30240u);
  EXPECT_THROW(count_squares(0), PauliError);
  EXPECT_THROW(count_squares(5), PauliError);
}

// oracle: ordered 4-tuples with the square's pattern, divided by the 8 symmetries
TEST(Pauli, CountSquaresBruteForce) {
  auto all = nontrivial_paulis(2);
  std::size_t ordered = 0;
  for (const auto& a : all)
    for (const auto& b : all)
      for (const auto& c : all)
        for (const auto& d : all) {
          if (a == c || b == d)
            continue;
          if (commutes(a, b) && commutes(b, c) && commutes(c, d) && commutes(d, a) && !commutes(a, c) &&
              !commutes(b, d))
            ++ordered;
        }
  EXPECT_EQ(ordered % 8, 0u);
  EXPECT_EQ(ordered / 8, 90u);
}

TEST(Pauli, EverySquareViolatesMaximally) {
  auto all = nontrivial_paulis(2);
  auto g = commutation_graph(2);
  std::size_t squares = 0;
  for (point a = 0; a < all.size(); ++a)
    for (point c = a + 1; c < all.size(); ++c) {
      if (g.adjacent(a, c))
        continue;
      for (point b = 0; b < all.size(); ++b)
        for (point d = b + 1; d < all.size(); ++d) {
          if (g.adjacent(b, d) || !g.adjacent(a, b) || !g.adjacent(b, c) || !g.adjacent(c, d) || !g.adjacent(d, a))
            continue;
          if (std::min(b, d) < a)
            continue; // count each square once, from its least vertex
          ++squares;
          std::vector<PauliOp> quad{all[a], all[b], all[c], all[d]};
          auto r = chsh_check(quad);
          EXPECT_TRUE(r.structure_ok());
          EXPECT_EQ(r.norm_squared, 8);
          EXPECT_NEAR(chsh_norm_numeric(quad), 2 * std::sqrt(2.0), 1e-12);
        }
    }
  EXPECT_EQ(squares, 90u);
}

TEST(Pauli, CommutationGraphIsGQ22) {
  auto geo = Geometry::from_graph(commutation_graph(2));
  auto inv = invariants(geo, false);
  EXPECT_EQ(inv.V, 15u);
  EXPECT_EQ(inv.E, 45u);
  EXPECT_EQ(inv.T_line, 15u);
  EXPECT_EQ(inv.S_chordless, 90u);
  auto ms = recognize(geo, inv);
  ASSERT_FALSE(ms.empty());
  EXPECT_EQ(ms[0].entry->name, "Cremona-Richmond (15_3) GQ(2,2)");
  EXPECT_EQ(ms[0].tier, MatchTier::isomorphism);
  EXPECT_EQ(geo.lines().size(), 15u);
}

TEST(Pauli, MerminSquare) {
  auto lg = LabeledGeometry::parse(fixture::read("pauli/mermin_square.txt"));
  EXPECT_EQ(lg.labels.size(), 9u);
  EXPECT_TRUE(lg.commutation_violations().empty());
  auto v = magic_check(lg);
  EXPECT_TRUE(v.contextual);
  EXPECT_EQ(v.negative_lines, 1u);
  EXPECT_EQ(v.lines.size(), 6u);
  // matrix oracle for each line's sign
  for (const auto& l : v.lines) {
    Mat m = Mat::Identity(4, 4);
    for (point p : l.points)
      m = m * dense(lg.labels[p].to_string());
    EXPECT_LT((m - double(*l.sign) * Mat::Identity(4, 4)).norm(), 1e-12);
  }
  auto ms = recognize(lg.geometry);
  ASSERT_FALSE(ms.empty());
  EXPECT_EQ(ms[0].entry->name, "(3x3)-grid");
}

TEST(Pauli, MerminPentagram) {
  auto lg = LabeledGeometry::parse(fixture::read("pauli/mermin_pentagram.txt"));
  EXPECT_EQ(lg.labels.size(), 10u);
  auto v = magic_check(lg);
  EXPECT_TRUE(v.contextual);
  EXPECT_EQ(v.negative_lines % 2, 1u);
  EXPECT_EQ(v.lines.size(), 5u);
  for (const auto& l : v.lines) {
    Mat m = Mat::Identity(8, 8);
    for (point p : l.points)
      m = m * dense(lg.labels[p].to_string());
    EXPECT_LT((m - double(*l.sign) * Mat::Identity(8, 8)).norm(), 1e-12);
  }
  auto inv = invariants(lg.geometry, false);
  // the graph has 30 triangles; only 20 of them lie inside one of the five lines
  EXPECT_EQ(std::make_tuple(inv.V, inv.E, inv.T_plain, inv.T_line, inv.S_chordless),
            std::make_tuple(std::size_t{10}, std::size_t{30}, std::uint64_t{30}, std::uint64_t{20}, std::uint64_t{15}));
  bool pentagram = false;
  for (const auto& m : recognize(lg.geometry, inv))
    pentagram = pentagram || (m.entry->name == "Mermin's pentagram" && m.tier == MatchTier::isomorphism);
  EXPECT_TRUE(pentagram);
}

TEST(Pauli, NonContextualAndErrors) {
  auto stub = LabeledGeometry::parse("XX, ZZ, -YY\n");
  auto v = magic_check(stub);
  EXPECT_FALSE(v.contextual);
  EXPECT_EQ(v.negative_lines, 0u);
  auto bad = LabeledGeometry::parse("XI, ZI, IX\n");
  auto b = magic_check(bad);
  EXPECT_FALSE(b.contextual);
  EXPECT_FALSE(b.errors.empty());
  EXPECT_FALSE(bad.commutation_violations().empty());
  auto nonscalar = magic_check(LabeledGeometry::parse("XI, IX\n"));
  EXPECT_FALSE(nonscalar.all_scalar);
  EXPECT_FALSE(nonscalar.contextual);
  EXPECT_THROW(LabeledGeometry::parse("XI, IX\n-XI, ZZ\n"), PauliError);
  EXPECT_THROW(LabeledGeometry::parse("XI, X\n"), PauliError);
  EXPECT_THROW(LabeledGeometry::parse("# nothing\n"), PauliError);
  auto j = to_json(magic_check(LabeledGeometry::parse(fixture::read("pauli/mermin_square.txt"))),
                   LabeledGeometry::parse(fixture::read("pauli/mermin_square.txt")));
  EXPECT_EQ(j["negative_parity"], "odd");
}
