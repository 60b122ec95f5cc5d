#include <random>

#include <gtest/gtest.h>

#include "dessins/dessin.hpp"
#include "oracles.hpp"

using namespace dessins;

namespace {

Dessin D(std::size_t n, const char* a, const char* b, DessinMode m = DessinMode::preclean) {
  return make_dessin(n, a, b, m);
}

Permutation random_perm(std::size_t n, std::mt19937& rng) {
  std::vector<point> v(n);
  std::iota(v.begin(), v.end(), point{0});
  std::shuffle(v.begin(), v.end(), rng);
  return Permutation::from_images(std::move(v));
}

Permutation random_involution(std::size_t n, std::mt19937& rng) {
  std::vector<point> v(n);
  std::iota(v.begin(), v.end(), point{0});
  std::vector<point> order = v;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i + 1 < n; i += 2)
    if (rng() % 3 != 0)
      std::swap(v[order[i]], v[order[i + 1]]);
  return Permutation::from_images(std::move(v));
}

/// Random transitive pair, by rejection.
Dessin random_dessin(std::size_t n, DessinMode mode, std::mt19937& rng) {
  while (true) {
    auto a = random_perm(n, rng);
    auto b = mode == DessinMode::preclean ? random_involution(n, rng) : random_perm(n, rng);
    if (Dessin::transitive(a, b))
      return Dessin(a, b, mode);
  }
}

} // namespace

TEST(Dessin, Validation) {
  auto single = D(1, "()", "()");
  EXPECT_EQ(single.signature(), (Signature{1, 1, 1, 0}));

  EXPECT_NO_THROW(D(4, "(2,3)", "(1,2)(3,4)"));
  try {
    D(4, "()", "(1,2)");
    FAIL();
  } catch (const InvalidDessin& e) {
    EXPECT_EQ(e.code(), DessinErrorCode::not_transitive);
  }
  try {
    D(3, "(1,2)", "(1,2,3)");
    FAIL();
  } catch (const InvalidDessin& e) {
    EXPECT_EQ(e.code(), DessinErrorCode::not_involution);
  }
  EXPECT_NO_THROW(D(3, "(1,2)", "(1,2,3)", DessinMode::hypermap));
}

TEST(Dessin, SquareDessins) {
  struct Case {
    const char *a, *b;
    Signature sig;
    const char* passport;
  };
  const Case cases[] = {
      {"(2,3)", "(1,2)(3,4)", {3, 2, 1, 0}, "[2^1 1^2, 2^2, 4^1]"},
      {"(1,2)(3,4)", "(2,3)", {2, 3, 1, 0}, "[2^2, 2^1 1^2, 4^1]"},
      {"(1,2,4,3)", "(1,2)(3,4)", {1, 2, 3, 0}, "[4^1, 2^2, 2^1 1^2]"},
      {"(1,2,4,3)", "(2,3)", {1, 3, 2, 0}, "[4^1, 2^1 1^2, 2^2]"},
  };
  for (const auto& c : cases) {
    auto d = D(4, c.a, c.b);
    EXPECT_EQ(d.signature(), c.sig) << c.a;
    EXPECT_EQ(d.passport().to_string(), c.passport);
    EXPECT_EQ(d.group().order(), 8);
  }
}

TEST(Dessin, PaperSignaturesAndPassports) {
  auto mermin = D(9, "(1,2,4,8,7,3)(5,9,6)", "(2,5)(3,6)(4,7)(8,9)");
  EXPECT_EQ(mermin.signature(), (Signature{2, 5, 2, 1}));
  EXPECT_EQ(mermin.passport().to_string(), "[6^1 3^1, 2^4 1^1, 6^1 3^1]");

  auto fano = D(7, "(2,7,6,5)(3,4)", "(1,2)(3,5)");
  EXPECT_EQ(fano.passport().to_string(), "[4^1 2^1 1^1, 2^2 1^3, 7^1]");
  EXPECT_EQ(fano.signature(), (Signature{3, 5, 1, 0}));

  auto stellated = D(8, "(1,2,4,3)(5,7,6,8)", "(2,5)(3,6)");
  EXPECT_EQ(stellated.signature(), (Signature{2, 6, 2, 0}));
  EXPECT_EQ(stellated.passport().to_string(), "[4^2, 2^2 1^4, 4^2]");
}

TEST(Dessin, GammaClosesTheProduct) {
  auto d = D(7, "(2,7,6,5)(3,4)", "(1,2)(3,5)");
  EXPECT_TRUE((d.alpha() * d.beta() * d.gamma()).is_identity());
}

TEST(Dessin, CanonicalFormExamples) {
  auto b1 = D(4, "(2,3)", "(1,2)(3,4)");
  EXPECT_EQ(b1.canonical_form(), b1.canonical_form());
  auto relabeled = b1.relabel(Permutation::parse("(1,2)", 4));
  EXPECT_NE(relabeled.alpha(), b1.alpha());
  EXPECT_EQ(relabeled.canonical_form(), b1.canonical_form());
  auto b2 = D(4, "(1,2)(3,4)", "(2,3)");
  EXPECT_NE(b1.canonical_form(), b2.canonical_form());
}

TEST(Dessin, AutomorphismCounts) {
  EXPECT_EQ(D(3, "(1,2,3)", "()").automorphism_count(), 3u);
  EXPECT_EQ(D(1, "()", "()").automorphism_count(), 1u);

  // brute force over all 4! relabelings; (1,4)(2,3) fixes both alpha and beta
  auto b1 = D(4, "(2,3)", "(1,2)(3,4)");
  std::size_t fixed = 0;
  for (const auto& s : oracle::all_perms(4))
    if (b1.alpha().conjugate_by(s) == b1.alpha() && b1.beta().conjugate_by(s) == b1.beta())
      ++fixed;
  EXPECT_EQ(fixed, 2u);
  EXPECT_EQ(b1.automorphism_count(), fixed);
}

TEST(Dessin, CanonicalFormConjugationInvariant) {
  std::mt19937 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    std::size_t n = 1 + rng() % 14;
    auto mode = (i % 2) ? DessinMode::preclean : DessinMode::hypermap;
    auto d = random_dessin(n, mode, rng);
    auto sigma = random_perm(n, rng);
    auto e = d.relabel(sigma);
    ASSERT_EQ(d.canonical_form(), e.canonical_form());
    EXPECT_EQ(d.automorphism_count(), e.automorphism_count());
    EXPECT_EQ(n % d.automorphism_count(), 0u);
    EXPECT_EQ(d.canonical().canonical_form(), d.canonical_form());
  }
}

TEST(Dessin, CanonicalFormSeparatesClassesSmallN) {
  // against full conjugation orbits for n <= 5
  for (std::size_t n = 1; n <= 5; ++n) {
    auto sym = oracle::all_perms(n);
    std::map<std::string, std::pair<Permutation, Permutation>> by_form;
    for (const auto& a : sym)
      for (const auto& b : sym) {
        if (!Dessin::transitive(a, b))
          continue;
        Dessin d(a, b, DessinMode::hypermap);
        auto rep = oracle::min_conjugate(a, b, sym);
        auto [it, inserted] = by_form.emplace(d.canonical_form(), rep);
        if (!inserted)
          ASSERT_EQ(it->second, rep) << "distinct classes share a canonical form";
      }
  }
}

TEST(Dessin, EulerFormulaAndPassportConsistency) {
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    std::size_t n = 1 + rng() % 12;
    auto d = random_dessin(n, DessinMode::hypermap, rng);
    auto s = d.signature();
    auto p = d.passport();
    EXPECT_EQ(static_cast<long long>(s.black + s.white + s.faces) - static_cast<long long>(n),
              2 - 2 * static_cast<long long>(s.genus));
    EXPECT_EQ(p.alpha.cycle_count(), s.black);
    EXPECT_EQ(p.beta.cycle_count(), s.white);
    EXPECT_EQ(p.gamma.cycle_count(), s.faces);
    EXPECT_EQ(p.gamma.degree(), n);
  }
}

TEST(Dessin, TextRoundTrip) {
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + rng() % 20;
    auto mode = (i % 2) ? DessinMode::preclean : DessinMode::hypermap;
    auto d = random_dessin(n, mode, rng);
    auto text = to_text(d);
    auto back = parse_dessin_text(text);
    EXPECT_EQ(back, d);
    EXPECT_EQ(to_text(back), text);
  }
}

TEST(Dessin, TextFormat) {
  auto d = parse_dessin_text("# comment\nn=4\nalpha=(2,3)\nbeta=(1,2)(3,4)\n");
  EXPECT_EQ(d.mode(), DessinMode::preclean);
  EXPECT_EQ(d.signature(), (Signature{3, 2, 1, 0}));
  auto h = parse_dessin_text("n=3\nalpha=(1,2)\nbeta=(1,2,3)\nmode=hypermap\n");
  EXPECT_EQ(h.mode(), DessinMode::hypermap);

  try {
    parse_dessin_text("n=4\nalpha=(2,3\nbeta=()\n");
    FAIL();
  } catch (const FileFormatError& e) {
    EXPECT_EQ(e.line(), 2u);
    // one past the last character: the cycle is never closed
    EXPECT_EQ(e.column(), 11u);
  }
  EXPECT_THROW(parse_dessin_text("n=4\nbeta=()\nalpha=()\n"), FileFormatError);
  EXPECT_THROW(parse_dessin_text("n=x\nalpha=()\nbeta=()\n"), FileFormatError);
  EXPECT_THROW(parse_dessin_text("n=4\nalpha=()\n"), FileFormatError);
  EXPECT_THROW(parse_dessin_text("n=2\nalpha=()\nbeta=()\nmode=weird\n"), FileFormatError);
}

TEST(Dessin, Json) {
  auto d = D(9, "(1,2,4,8,7,3)(5,9,6)", "(2,5)(3,6)(4,7)(8,9)");
  auto j = to_json(d);
  EXPECT_EQ(j["n"], 9);
  EXPECT_EQ(j["alpha"], "(1,2,4,8,7,3)(5,9,6)");
  EXPECT_EQ(j["signature"]["g"], 1);
  EXPECT_EQ(j["group_order"], "36");
  EXPECT_EQ(j["passport"][1], "2^4 1^1");
}

TEST(PassportPattern, Parse) {
  auto p = PassportPattern::parse("[6^1 3^2 2^1 1^1, 2^6 1^3, 6^2 3^1]");
  EXPECT_EQ(p.degree(), 15u);
  auto q = PassportPattern::parse("*, 2^4 1^2, 5^2");
  EXPECT_FALSE(q.alpha);
  EXPECT_EQ(q.degree(), 10u);
  EXPECT_THROW(PassportPattern::parse("4, 2^2"), ParseError);
  EXPECT_THROW(PassportPattern::parse("4, 2^2, 3").degree(), std::invalid_argument);
}
