#pragma once

// Simultaneous polynomial root finding (Aberth-Ehrlich) in fixed or
// multiple precision, and clustering of the results into roots with
// multiplicities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace dessins {

namespace mp = boost::multiprecision;

template <unsigned Bits> using mp_real = mp::number<mp::cpp_bin_float<Bits, mp::digit_base_2>, mp::et_off>;
template <unsigned Bits>
using mp_complex = mp::number<mp::complex_adaptor<mp::cpp_bin_float<Bits, mp::digit_base_2>>, mp::et_off>;

class RootFindingError : public std::runtime_error {
public:
  RootFindingError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

namespace detail {

template <class C> auto cabs(const C& z) {
  using std::abs;
  return abs(z);
}

/// p(z) and p'(z) by Horner; coefficients low to high.
template <class C> void horner(const std::vector<C>& p, const C& z, C& value, C& deriv) {
  value = p.back();
  deriv = C(0);
  for (std::size_t k = p.size() - 1; k-- > 0;) {
    deriv = deriv * z + value;
    value = value * z + p[k];
  }
}

} // namespace detail

template <class C> struct AberthResult {
  std::vector<C> roots;
  bool converged = false;
  int iterations = 0;
};

/// All complex roots of p (degree >= 1, coefficients low to high) by
/// Aberth-Ehrlich iteration from points on a circle. Multiple roots are
/// returned as nearby copies; cluster them afterwards.
template <class C, class R>
AberthResult<C> aberth(const std::vector<C>& p, const R& tol, int max_iter = 2000) {
  using detail::cabs;
  using std::exp;
  using std::log;
  AberthResult<C> out;
  std::size_t n = p.size() - 1;
  if (p.size() < 2 || p.back() == C(0))
    throw std::invalid_argument("aberth needs a polynomial with nonzero leading coefficient");
  // radius: Fujiwara-style bound
  R radius = 0;
  for (std::size_t k = 0; k < n; ++k) {
    R r = cabs(p[k] / p.back());
    if (r > 0)
      radius = std::max(radius, R(exp(log(r) / R(static_cast<double>(n - k)))));
  }
  radius = radius * 2 / 3 + R(1) / 1000;
  out.roots.resize(n);
  const double two_pi = 6.283185307179586;
  for (std::size_t k = 0; k < n; ++k) {
    double angle = two_pi * (static_cast<double>(k) + 0.4) / static_cast<double>(n) + 0.7;
    out.roots[k] = C(radius * R(std::cos(angle)), radius * R(std::sin(angle)));
  }
  std::vector<bool> done(n, false);
  const R backward = R(64) * std::numeric_limits<R>::epsilon();
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i])
        continue;
      C v, d;
      detail::horner(p, out.roots[i], v, d);
      // backward-error stop: z is a root of a polynomial within a few ulps
      // of p, which is as good as multiple roots get
      R scale = 0, az = cabs(out.roots[i]);
      for (std::size_t k = p.size(); k-- > 0;)
        scale = scale * az + cabs(p[k]);
      if (v == C(0) || cabs(v) <= backward * scale) {
        done[i] = true;
        continue;
      }
      C ratio = v / d;
      C sum(0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) {
          C diff = out.roots[i] - out.roots[j];
          if (diff != C(0))
            sum += C(1) / diff;
        }
      C step = ratio / (C(1) - ratio * sum);
      out.roots[i] -= step;
      if (cabs(step) <= tol * (R(1) + cabs(out.roots[i])))
        done[i] = true;
      else
        all_done = false;
    }
    if (all_done) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// A root with multiplicity, as the mean of a cluster.
template <class C> struct Cluster {
  C center;
  std::size_t multiplicity = 0;
  double diameter = 0;
};

/// Weierstrass inclusion radii: the union of the disks D(z_i, n |w_i|),
/// w_i = p(z_i) / (a_n prod_{j != i} (z_i - z_j)), contains every root of p,
/// and each connected component holds as many roots as disk centres.
template <class C> std::vector<double> inclusion_radii(const std::vector<C>& p, const std::vector<C>& roots) {
  using detail::cabs;
  std::size_t n = roots.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    C v, d;
    detail::horner(p, roots[i], v, d);
    C den = p.back();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        den *= roots[i] - roots[j];
    out[i] = den == C(0) ? std::numeric_limits<double>::infinity()
                         : static_cast<double>(cabs(v / den)) * static_cast<double>(n);
  }
  return out;
}

/// Single-linkage clusters: two roots join when closer than `radius` or
/// when their inclusion disks (if given) overlap. The diameter covers the disks.
template <class C, class R>
std::vector<Cluster<C>> cluster_roots(const std::vector<C>& roots, const R& radius,
                                      const std::vector<double>& disks = {}) {
  using detail::cabs;
  std::size_t n = roots.size();
  auto disk = [&](std::size_t i) { return disks.empty() ? 0.0 : disks[i]; };
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (cabs(roots[i] - roots[j]) <= radius ||
          static_cast<double>(cabs(roots[i] - roots[j])) <= disk(i) + disk(j))
        parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i)
    groups[find(i)].push_back(i);
  std::vector<Cluster<C>> out;
  for (const auto& g : groups) {
    if (g.empty())
      continue;
    Cluster<C> c;
    C sum(0);
    for (auto i : g)
      sum += roots[i];
    c.center = sum / C(static_cast<double>(g.size()));
    c.multiplicity = g.size();
    double diam = 0;
    for (auto i : g)
      for (auto j : g)
        diam = std::max(diam, static_cast<double>(cabs(roots[i] - roots[j])) + disk(i) + disk(j));
    c.diameter = diam;
    out.push_back(c);
  }
  return out;
}

/// Smallest distance between two distinct clusters (infinity if fewer than two).
template <class C> double cluster_separation(const std::vector<Cluster<C>>& cs) {
  using detail::cabs;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      best = std::min(best, static_cast<double>(cabs(cs[i].center - cs[j].center)));
  return best;
}

} // namespace dessins
