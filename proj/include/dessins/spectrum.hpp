#pragma once

// Adjacency spectra. The characteristic polynomial is computed exactly, split
// into square-free parts, integer eigenvalues are read off exactly and the
// rest come from the root finder on each square-free factor.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dessins/graph.hpp"
#include "dessins/intpoly.hpp"
#include "dessins/roots.hpp"

namespace dessins {

inline constexpr std::size_t kDefaultSpectrumBound = 256;

class SpectrumBoundExceeded : public std::runtime_error {
public:
  SpectrumBoundExceeded(std::size_t v, std::size_t bound)
      : std::runtime_error("spectrum of a " + std::to_string(v) + "-vertex graph exceeds the bound " +
                           std::to_string(bound)),
        vertices_(v), bound_(bound) {}
  std::size_t vertices() const noexcept { return vertices_; }
  std::size_t bound() const noexcept { return bound_; }

private:
  std::size_t vertices_, bound_;
};

struct Eigenvalue {
  double value = 0;
  std::size_t multiplicity = 0;
  std::optional<long long> exact; // set for integer eigenvalues
};

/// Distinct eigenvalues, largest first.
using Spectrum = std::vector<Eigenvalue>;

namespace detail {

/// Real roots of a square-free integer polynomial with only real roots.
inline std::vector<double> real_roots(const IntPoly& p) {
  if (p.size() == 2)
    return {-static_cast<double>(big_rational(p[0], p[1]))};
  if (p.size() == 3) {
    // stable quadratic formula; the roots are real for symmetric matrices
    double a = static_cast<double>(p[2]), b = static_cast<double>(p[1]), c = static_cast<double>(p[0]);
    double d = std::sqrt(std::max(0.0, b * b - 4 * a * c));
    double q = -0.5 * (b + std::copysign(d, b));
    if (q == 0)
      return {0.0, 0.0};
    return {q / a, c / q};
  }
  auto attempt = [&]<unsigned Bits>() -> std::optional<std::vector<double>> {
    using C = mp_complex<Bits>;
    using R = mp_real<Bits>;
    std::vector<C> coeffs;
    for (const auto& c : p)
      coeffs.emplace_back(R(c));
    auto res = aberth(coeffs, R(1e-40), 5000);
    if (!res.converged)
      return std::nullopt;
    std::vector<double> out;
    for (const auto& z : res.roots) {
      if (std::abs(static_cast<double>(z.imag())) > 1e-9)
        return std::nullopt;
      out.push_back(static_cast<double>(z.real()));
    }
    return out;
  };
  if (auto r = attempt.template operator()<256>())
    return *r;
  if (auto r = attempt.template operator()<512>())
    return *r;
  throw RootFindingError("no convergence on a degree-" + std::to_string(p.size() - 1) + " factor", 0);
}

inline IntPoly divide_linear(const IntPoly& p, const big_int& root) {
  // synthetic division by (x - root); the remainder is zero by construction
  IntPoly q(p.size() - 1);
  big_int carry = 0;
  for (std::size_t k = p.size(); k-- > 1;) {
    carry = carry * root + p[k];
    q[k - 1] = carry;
  }
  return q;
}

} // namespace detail

inline std::vector<std::vector<long long>> adjacency_matrix(const Graph& g) {
  std::vector<std::vector<long long>> a(g.size(), std::vector<long long>(g.size(), 0));
  for (auto [x, y] : g.edges())
    a[x][y] = a[y][x] = 1;
  return a;
}

/// Eigenvalues from the characteristic polynomial of a matrix known to
/// have only real eigenvalues (symmetric or Hermitian).
inline Spectrum real_spectrum(const IntPoly& charpoly) {
  Spectrum out;
  for (auto& [factor, mult] : squarefree_decomposition(charpoly)) {
    IntPoly rest = factor;
    for (const auto& r : integer_roots(factor)) {
      out.push_back({static_cast<double>(r), mult, static_cast<long long>(r)});
      rest = detail::divide_linear(rest, r);
    }
    trim(rest);
    if (rest.size() > 1)
      for (double x : detail::real_roots(rest))
        out.push_back({x, mult, std::nullopt});
  }
  std::sort(out.begin(), out.end(), [](const Eigenvalue& x, const Eigenvalue& y) { return x.value > y.value; });
  return out;
}

/// Spectrum of a real symmetric integer matrix.
inline Spectrum symmetric_spectrum(const std::vector<std::vector<long long>>& a) { return real_spectrum(charpoly(a)); }

inline Spectrum spectrum(const Graph& g, std::size_t bound = kDefaultSpectrumBound) {
  if (g.size() > bound)
    throw SpectrumBoundExceeded(g.size(), bound);
  if (g.size() == 0)
    return {};
  return symmetric_spectrum(adjacency_matrix(g));
}

/// sp(10^1, 1^20, -5^6); irrational values with six decimals.
inline std::string to_string(const Spectrum& s) {
  std::string out = "sp(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i)
      out += ", ";
    if (s[i].exact) {
      out += std::to_string(*s[i].exact);
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", s[i].value);
      out += buf;
    }
    out += "^" + std::to_string(s[i].multiplicity);
  }
  return out + ")";
}

/// Same distinct values (within tol) with the same multiplicities.
inline bool spectrum_matches(const Spectrum& got, const Spectrum& expected, double tol = 1e-9) {
  if (got.size() != expected.size())
    return false;
  std::vector<bool> used(expected.size(), false);
  for (const auto& e : got) {
    bool hit = false;
    for (std::size_t j = 0; j < expected.size() && !hit; ++j)
      if (!used[j] && expected[j].multiplicity == e.multiplicity && std::abs(expected[j].value - e.value) <= tol) {
        used[j] = true;
        hit = true;
      }
    if (!hit)
      return false;
  }
  return true;
}

} // namespace dessins
