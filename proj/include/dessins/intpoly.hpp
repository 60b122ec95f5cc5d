#pragma once

// Exact polynomials over Z and Q, and the characteristic polynomial of an
// integer matrix by Hessenberg reduction modulo word-size primes with CRT
// reconstruction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dessins {

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;

/// Coefficients from the constant term up; no trailing zeros except for the
/// zero polynomial, which is empty.
using IntPoly = std::vector<big_int>;
using RatPoly = std::vector<big_rational>;

template <class T> void trim(std::vector<T>& p) {
  while (!p.empty() && p.back() == 0)
    p.pop_back();
}

inline std::string to_string(const IntPoly& p, const char* var = "x") {
  if (p.empty())
    return "0";
  std::string out;
  for (std::size_t k = p.size(); k-- > 0;) {
    const big_int& c = p[k];
    if (c == 0)
      continue;
    big_int a = abs(c);
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    if (a != 1 || k == 0)
      out += a.str();
    if (k > 0) {
      out += var;
      if (k > 1)
        out += "^" + std::to_string(k);
    }
  }
  return out;
}

namespace detail {

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1)
      r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline bool is_prime_u32(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

/// Primes just below 2^31, descending.
inline const std::vector<std::uint64_t>& crt_primes(std::size_t count) {
  static std::vector<std::uint64_t> primes;
  static std::uint64_t next = (1ull << 31) - 1;
  while (primes.size() < count) {
    while (!is_prime_u32(next))
      next -= 2;
    primes.push_back(next);
    next -= 2;
  }
  return primes;
}

/// Characteristic polynomial det(xI - H) mod p of a matrix already reduced
/// mod p, coefficients low to high.
inline std::vector<std::uint64_t> charpoly_mod(std::vector<std::vector<std::uint64_t>> h, std::uint64_t p) {
  const std::size_t n = h.size();
  // similarity transforms to upper Hessenberg form
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t piv = m;
    while (piv < n && h[piv][m - 1] == 0)
      ++piv;
    if (piv == n)
      continue;
    if (piv != m) {
      std::swap(h[piv], h[m]);
      for (std::size_t r = 0; r < n; ++r)
        std::swap(h[r][piv], h[r][m]);
    }
    std::uint64_t inv = powmod(h[m][m - 1], p - 2, p);
    for (std::size_t i = m + 1; i < n; ++i) {
      std::uint64_t u = h[i][m - 1] * inv % p;
      if (u == 0)
        continue;
      for (std::size_t j = 0; j < n; ++j)
        h[i][j] = (h[i][j] + (p - u) * h[m][j]) % p;
      for (std::size_t r = 0; r < n; ++r)
        h[r][m] = (h[r][m] + u * h[r][i]) % p;
    }
  }
  // recurrence on leading principal minors
  std::vector<std::vector<std::uint64_t>> polys(n + 1);
  polys[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    auto& cur = polys[m];
    cur.assign(m + 1, 0);
    const auto& prev = polys[m - 1];
    std::uint64_t hmm = h[m - 1][m - 1];
    for (std::size_t k = 0; k < prev.size(); ++k) {
      cur[k + 1] = (cur[k + 1] + prev[k]) % p;
      cur[k] = (cur[k] + (p - hmm) * prev[k]) % p;
    }
    std::uint64_t prod = 1;
    for (std::size_t i = 1; i < m; ++i) {
      // 1-based textbook form: h_{m-i,m} * prod_{j=m-i+1..m} h_{j,j-1}
      prod = prod * h[m - i][m - i - 1] % p;
      std::uint64_t coef = h[m - i - 1][m - 1] * prod % p;
      if (coef == 0)
        continue;
      const auto& q = polys[m - i - 1];
      for (std::size_t k = 0; k < q.size(); ++k)
        cur[k] = (cur[k] + (p - coef) * q[k]) % p;
    }
  }
  return polys[n];
}

inline std::uint64_t reduce(long long v, std::uint64_t p) {
  long long r = v % static_cast<long long>(p);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<long long>(p) : r);
}

/// Bits needed for the coefficients of a characteristic polynomial of an
/// n x n matrix whose rows have squared Euclidean norm at most r2, from
/// |c_k| <= C(n,k) R^k.
inline std::size_t coefficient_bits(std::size_t n, double r2) {
  return static_cast<std::size_t>(static_cast<double>(n) * (1.0 + 0.5 * std::log2(std::max(r2, 1.0)))) + 4;
}

/// Incremental Chinese remaindering of coefficient vectors.
class CrtAccumulator {
public:
  explicit CrtAccumulator(std::size_t len) : value_(len, 0) {}

  void add(const std::vector<std::uint64_t>& res, std::uint64_t p) {
    std::uint64_t minv = powmod(static_cast<std::uint64_t>(modulus_ % p), p - 2, p);
    for (std::size_t k = 0; k < value_.size(); ++k) {
      std::uint64_t cur = static_cast<std::uint64_t>(value_[k] % p);
      std::uint64_t t = (res[k] + p - cur) % p * minv % p;
      value_[k] += modulus_ * t;
    }
    modulus_ *= p;
  }

  /// Symmetric residues.
  std::vector<big_int> result() const {
    std::vector<big_int> out = value_;
    big_int half = modulus_ / 2;
    for (auto& v : out)
      if (v > half)
        v -= modulus_;
    return out;
  }

private:
  std::vector<big_int> value_;
  big_int modulus_ = 1;
};

} // namespace detail

/// Exact characteristic polynomial det(xI - A) of an integer matrix.
inline IntPoly charpoly(const std::vector<std::vector<long long>>& a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n)
      throw std::invalid_argument("charpoly needs a square matrix");
  if (n == 0)
    return {1};
  double r2 = 1;
  for (const auto& row : a) {
    double s = 0;
    for (long long v : row)
      s += static_cast<double>(v) * static_cast<double>(v);
    r2 = std::max(r2, s);
  }
  std::size_t nprimes = detail::coefficient_bits(n, r2) / 30 + 2;
  const auto& primes = detail::crt_primes(nprimes);
  detail::CrtAccumulator acc(n + 1);
  std::vector<std::vector<std::uint64_t>> h(n, std::vector<std::uint64_t>(n));
  for (std::size_t pi = 0; pi < nprimes; ++pi) {
    std::uint64_t p = primes[pi];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        h[i][j] = detail::reduce(a[i][j], p);
    acc.add(detail::charpoly_mod(h, p), p);
  }
  auto value = acc.result();
  trim(value);
  return value;
}

/// Characteristic polynomial of the Gaussian-integer matrix re + i*im, as
/// real and imaginary coefficient parts. Works modulo primes p = 1 mod 4,
/// where -1 has square roots +-s, and separates the two parts using both
/// embeddings i -> s and i -> -s.
inline std::pair<IntPoly, IntPoly> charpoly_gaussian(const std::vector<std::vector<long long>>& re,
                                                     const std::vector<std::vector<long long>>& im) {
  const std::size_t n = re.size();
  if (im.size() != n)
    throw std::invalid_argument("real and imaginary parts differ in size");
  for (std::size_t i = 0; i < n; ++i)
    if (re[i].size() != n || im[i].size() != n)
      throw std::invalid_argument("charpoly needs a square matrix");
  if (n == 0)
    return {{1}, {}};
  double r2 = 1;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j)
      s += static_cast<double>(re[i][j]) * static_cast<double>(re[i][j]) +
           static_cast<double>(im[i][j]) * static_cast<double>(im[i][j]);
    r2 = std::max(r2, s);
  }
  std::size_t needed = detail::coefficient_bits(n, r2) / 30 + 2;
  detail::CrtAccumulator real_acc(n + 1), imag_acc(n + 1);
  std::vector<std::vector<std::uint64_t>> h(n, std::vector<std::uint64_t>(n));
  std::size_t used = 0;
  for (std::size_t pi = 0; used < needed; ++pi) {
    std::uint64_t p = detail::crt_primes(pi + 1)[pi];
    if (p % 4 != 1)
      continue;
    // a square root of -1: g^((p-1)/4) for a quadratic non-residue g
    std::uint64_t s = 0;
    for (std::uint64_t g = 2;; ++g)
      if (detail::powmod(g, (p - 1) / 2, p) == p - 1) {
        s = detail::powmod(g, (p - 1) / 4, p);
        break;
      }
    std::vector<std::uint64_t> plus, minus;
    for (std::uint64_t root : {s, p - s}) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          h[i][j] = (detail::reduce(re[i][j], p) + root * detail::reduce(im[i][j], p)) % p;
      (root == s ? plus : minus) = detail::charpoly_mod(h, p);
    }
    std::uint64_t inv2 = (p + 1) / 2;
    std::uint64_t inv2s = detail::powmod(2 * s % p, p - 2, p);
    std::vector<std::uint64_t> a(n + 1), b(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      a[k] = (plus[k] + minus[k]) % p * inv2 % p;
      b[k] = (plus[k] + p - minus[k]) % p * inv2s % p;
    }
    real_acc.add(a, p);
    imag_acc.add(b, p);
    ++used;
  }
  auto r = real_acc.result();
  auto i = imag_acc.result();
  trim(r);
  trim(i);
  return {r, i};
}

inline RatPoly to_rat(const IntPoly& p) { return RatPoly(p.begin(), p.end()); }

inline RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t k = 1; k < p.size(); ++k)
    d.push_back(p[k] * static_cast<long long>(k));
  trim(d);
  return d;
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
  if (b.empty())
    throw std::domain_error("division by the zero polynomial");
  trim(a);
  if (a.size() < b.size())
    return {{}, a};
  RatPoly q(a.size() - b.size() + 1);
  for (std::size_t s = q.size(); s-- > 0;) {
    big_rational c = a[s + b.size() - 1] / b.back();
    q[s] = c;
    if (c != 0)
      for (std::size_t j = 0; j < b.size(); ++j)
        a[s + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

inline RatPoly monic(RatPoly p) {
  trim(p);
  if (p.empty())
    return p;
  big_rational lead = p.back();
  for (auto& c : p)
    c /= lead;
  return p;
}

inline RatPoly gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = monic(std::move(r));
  }
  return monic(std::move(a));
}

inline RatPoly sub(RatPoly a, const RatPoly& b) {
  if (a.size() < b.size())
    a.resize(b.size());
  for (std::size_t k = 0; k < b.size(); ++k)
    a[k] -= b[k];
  trim(a);
  return a;
}

/// Primitive integer polynomial with positive leading coefficient.
inline IntPoly primitive(const RatPoly& p) {
  big_int l = 1;
  for (const auto& c : p)
    l = boost::multiprecision::lcm(l, denominator(c));
  IntPoly out;
  for (const auto& c : p)
    out.push_back(numerator(c) * (l / denominator(c)));
  big_int g = 0;
  for (const auto& c : out)
    g = boost::multiprecision::gcd(g, c);
  if (g != 0)
    for (auto& c : out)
      c /= g;
  trim(out);
  if (!out.empty() && out.back() < 0)
    for (auto& c : out)
      c = -c;
  return out;
}

/// Yun's square-free decomposition: p = lead * prod a_i^i with each a_i
/// square-free and pairwise coprime. Constant factors are omitted.
inline std::vector<std::pair<IntPoly, std::size_t>> squarefree_decomposition(const IntPoly& p) {
  std::vector<std::pair<IntPoly, std::size_t>> out;
  RatPoly f = monic(to_rat(p));
  if (f.size() <= 1)
    return out;
  RatPoly fp = derivative(f);
  RatPoly a0 = gcd(f, fp);
  RatPoly b = divmod(f, a0).first;
  RatPoly c = divmod(fp, a0).first;
  RatPoly d = sub(c, derivative(b));
  for (std::size_t i = 1; b.size() > 1; ++i) {
    RatPoly a = gcd(b, d);
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = sub(c, derivative(b));
    if (a.size() > 1)
      out.emplace_back(primitive(a), i);
  }
  return out;
}

inline big_int evaluate(const IntPoly& p, const big_int& x) {
  big_int r = 0;
  for (std::size_t k = p.size(); k-- > 0;)
    r = r * x + p[k];
  return r;
}

/// Integer roots of p (each listed once).
inline std::vector<big_int> integer_roots(const IntPoly& p) {
  std::vector<big_int> out;
  if (p.empty())
    return out;
  std::size_t low = 0;
  while (low < p.size() && p[low] == 0)
    ++low;
  if (low > 0)
    out.push_back(0);
  if (low + 1 >= p.size())
    return out;
  // Fujiwara: every root has modulus at most 2 max |a_k / a_n|^(1/(n-k));
  // any nonzero integer root also divides the lowest nonzero coefficient
  const std::size_t deg = p.size() - 1;
  const double lead = static_cast<double>(msb(abs(p.back())));
  double log_bound = -1e300;
  for (std::size_t k = low; k < deg; ++k)
    if (p[k] != 0)
      log_bound = std::max(log_bound, (static_cast<double>(msb(abs(p[k])) + 1) - lead) / static_cast<double>(deg - k));
  const big_int& c0 = p[low];
  big_int bound = abs(c0);
  if (log_bound < 60)
    bound = std::min(bound, big_int(static_cast<long long>(std::ldexp(2.0, static_cast<int>(std::ceil(log_bound))))) + 1);
  for (big_int x = 1; x <= bound; ++x) {
    if (c0 % x != 0)
      continue;
    for (const big_int& y : {x, big_int(-x)})
      if (evaluate(p, y) == 0)
        out.push_back(y);
  }
  return out;
}

} // namespace dessins
