#pragma once

// Numerical verification of Belyi functions f = p/q: critical values must lie
// in {0, 1, oo} and the fibres over 0, 1 and oo must have the multiplicities
// of the passport. Coefficients are parsed exactly (rationals, decimals,
// square roots, i) and evaluated at the working precision, which is raised
// until the root clusters are clearly separated.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dessins/dessin.hpp"
#include "dessins/roots.hpp"
#include "json.hpp"

namespace dessins {

class MapParseError : public std::runtime_error {
public:
  MapParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_, column_;
};

namespace belyi_detail {

using rational = boost::multiprecision::cpp_rational;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum Kind { number, var_x, imag_unit, constant, neg, add, sub, mul, div, pow, sqrt, list } kind;
  rational value;              // number
  std::string name;            // constant
  std::vector<ExprPtr> args;   // operands, or coefficients of a list
  long exponent = 0;           // pow
};

/// Recursive-descent parser for
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*        juxtaposition is not allowed
///   unary  := ('+'|'-') unary | power
///   power  := atom ('^' ['-'] integer)?
///   atom   := number | 'x' | 'i' | name | 'sqrt(' expr ')' | '(' expr ')' | '[' expr (',' expr)* ']'
/// A list gives coefficients from the constant term up.
class Parser {
public:
  Parser(std::string_view text, std::size_t line, std::size_t column_offset)
      : s_(text), line_(line), offset_(column_offset) {}

  ExprPtr parse(bool& approximate) {
    approximate_ = &approximate;
    auto e = expr();
    skip();
    if (pos_ != s_.size())
      fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0, line_, offset_;
  bool* approximate_ = nullptr;

  [[noreturn]] void fail(const std::string& what) const { throw MapParseError(line_, offset_ + pos_ + 1, what); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static ExprPtr node(Expr::Kind k, std::vector<ExprPtr> args = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->args = std::move(args);
    return e;
  }

  ExprPtr expr() {
    auto left = term();
    for (;;) {
      if (eat('+'))
        left = node(Expr::add, {left, term()});
      else if (eat('-'))
        left = node(Expr::sub, {left, term()});
      else
        return left;
    }
  }

  ExprPtr term() {
    auto left = unary();
    for (;;) {
      if (eat('*'))
        left = node(Expr::mul, {left, unary()});
      else if (eat('/'))
        left = node(Expr::div, {left, unary()});
      else
        return left;
    }
  }

  ExprPtr unary() {
    if (eat('-'))
      return node(Expr::neg, {unary()});
    if (eat('+'))
      return unary();
    return power();
  }

  ExprPtr power() {
    auto base = atom();
    if (!eat('^'))
      return base;
    skip();
    bool negative = eat('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_)
      fail("expected an integer exponent");
    auto e = node(Expr::pow, {base});
    auto* raw = const_cast<Expr*>(e.get());
    raw->exponent = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (negative)
      raw->exponent = -raw->exponent;
    return e;
  }

  ExprPtr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    std::string whole(s_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t f = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      frac = std::string(s_.substr(f, pos_ - f));
      *approximate_ = true; // decimals are taken as exact rationals but flagged
    }
    if (whole.empty() && frac.empty())
      fail("expected a number");
    boost::multiprecision::cpp_int num(whole.empty() ? std::string("0") : whole);
    boost::multiprecision::cpp_int den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    auto e = node(Expr::number);
    const_cast<Expr*>(e.get())->value = rational(num, den);
    return e;
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size())
      fail("unexpected end of expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!eat(')'))
        fail("expected ')'");
      return e;
    }
    if (c == '[') {
      ++pos_;
      std::vector<ExprPtr> items{expr()};
      while (eat(','))
        items.push_back(expr());
      if (!eat(']'))
        fail("expected ']'");
      return node(Expr::list, std::move(items));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string word(s_.substr(start, pos_ - start));
      if (word == "x")
        return node(Expr::var_x);
      if (word == "i")
        return node(Expr::imag_unit);
      if (word == "sqrt") {
        if (!eat('('))
          fail("expected '(' after sqrt");
        auto e = expr();
        if (!eat(')'))
          fail("expected ')'");
        return node(Expr::sqrt, {e});
      }
      auto e = node(Expr::constant);
      const_cast<Expr*>(e.get())->name = word;
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

template <class C> using Poly = std::vector<C>; // low to high
template <class C> using real_of = typename boost::multiprecision::component_type<C>::type;

template <class C> void trim(Poly<C>& p) {
  while (p.size() > 1 && p.back() == C(0))
    p.pop_back();
}

template <class C> Poly<C> add(const Poly<C>& a, const Poly<C>& b, int sign = 1) {
  Poly<C> out(std::max(a.size(), b.size()), C(0));
  for (std::size_t k = 0; k < a.size(); ++k)
    out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k)
    out[k] += sign > 0 ? b[k] : -b[k];
  trim(out);
  return out;
}

template <class C> Poly<C> mul(const Poly<C>& a, const Poly<C>& b) {
  Poly<C> out(a.size() + b.size() - 1, C(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

template <class C> Poly<C> derivative(const Poly<C>& p) {
  if (p.size() <= 1)
    return {C(0)};
  Poly<C> out(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k)
    out[k - 1] = p[k] * C(static_cast<double>(k));
  return out;
}

template <class C> C eval(const Poly<C>& p, const C& z) {
  C v = p.back();
  for (std::size_t k = p.size() - 1; k-- > 0;)
    v = v * z + p[k];
  return v;
}

template <class C> bool is_zero(const Poly<C>& p) { return p.size() == 1 && p[0] == C(0); }

/// A rational function num/den at one precision.
template <class C> struct Frac {
  Poly<C> num{C(0)}, den{C(1)};
  bool constant() const { return num.size() == 1 && den.size() == 1; }
};

template <class C> C to_c(const rational& r) {
  using R = real_of<C>;
  R v = R(boost::multiprecision::numerator(r)) / R(boost::multiprecision::denominator(r));
  return C(v);
}

template <class C>
Frac<C> evaluate(const ExprPtr& e, const std::map<std::string, ExprPtr>& constants, int depth = 0) {
  if (depth > 64)
    throw std::invalid_argument("constant definitions are circular");
  auto rec = [&](const ExprPtr& x) { return evaluate<C>(x, constants, depth + 1); };
  Frac<C> out;
  switch (e->kind) {
  case Expr::number:
    out.num = {to_c<C>(e->value)};
    break;
  case Expr::var_x:
    out.num = {C(0), C(1)};
    break;
  case Expr::imag_unit:
    out.num = {C(0, 1)};
    break;
  case Expr::constant: {
    auto it = constants.find(e->name);
    if (it == constants.end())
      throw std::invalid_argument("unknown name '" + e->name + "'");
    out = rec(it->second);
    break;
  }
  case Expr::neg:
    out = rec(e->args[0]);
    for (auto& c : out.num)
      c = -c;
    break;
  case Expr::add:
  case Expr::sub: {
    auto a = rec(e->args[0]), b = rec(e->args[1]);
    int sign = e->kind == Expr::add ? 1 : -1;
    if (a.den == b.den) {
      out.num = add(a.num, b.num, sign);
      out.den = a.den;
    } else {
      out.num = add(mul(a.num, b.den), mul(b.num, a.den), sign);
      out.den = mul(a.den, b.den);
    }
    break;
  }
  case Expr::mul: {
    auto a = rec(e->args[0]), b = rec(e->args[1]);
    out.num = mul(a.num, b.num);
    out.den = mul(a.den, b.den);
    break;
  }
  case Expr::div: {
    auto a = rec(e->args[0]), b = rec(e->args[1]);
    if (is_zero(b.num))
      throw std::invalid_argument("division by zero");
    out.num = mul(a.num, b.den);
    out.den = mul(a.den, b.num);
    break;
  }
  case Expr::pow: {
    auto a = rec(e->args[0]);
    long k = e->exponent;
    if (k < 0) {
      if (is_zero(a.num))
        throw std::invalid_argument("zero to a negative power");
      std::swap(a.num, a.den);
      k = -k;
    }
    out.num = {C(1)};
    out.den = {C(1)};
    for (long j = 0; j < k; ++j) {
      out.num = mul(out.num, a.num);
      out.den = mul(out.den, a.den);
    }
    break;
  }
  case Expr::sqrt: {
    auto a = rec(e->args[0]);
    if (!a.constant())
      throw std::invalid_argument("sqrt of a non-constant");
    using std::sqrt;
    out.num = {sqrt(a.num[0] / a.den[0])};
    break;
  }
  case Expr::list: {
    Poly<C> p;
    for (const auto& item : e->args) {
      auto c = rec(item);
      if (!c.constant())
        throw std::invalid_argument("coefficient lists take constants");
      p.push_back(c.num[0] / c.den[0]);
    }
    trim(p);
    out.num = std::move(p);
    break;
  }
  }
  return out;
}

} // namespace belyi_detail

/// A candidate Belyi function, kept as parsed expressions so it can be
/// evaluated at any precision.
class RationalMap {
public:
  /// Map file: one `name = expression` per line, '#' comments. Either
  /// `f = ...` or `p = ...` with optional `q = ...`; other names define
  /// constants. Optional `passport = ...` and `precision = <bits>`.
  static RationalMap parse(std::string_view text) {
    RationalMap m;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      std::size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#')
        continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw MapParseError(lineno, first + 1, "expected name = expression");
      std::string key = line.substr(first, eq - first);
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back())))
        key.pop_back();
      std::string value = line.substr(eq + 1);
      if (key == "passport") {
        try {
          m.passport_ = PassportPattern::parse(value);
        } catch (const std::exception& e) {
          throw MapParseError(lineno, eq + 2, e.what());
        }
        continue;
      }
      if (key == "precision") {
        try {
          m.precision_ = static_cast<unsigned>(std::stoul(value));
        } catch (const std::exception&) {
          throw MapParseError(lineno, eq + 2, "precision must be a number of bits");
        }
        continue;
      }
      if (key.empty() || key == "x" || key == "i" || key == "sqrt")
        throw MapParseError(lineno, first + 1, "reserved or empty name '" + key + "'");
      bool approx = false;
      auto expr = belyi_detail::Parser(value, lineno, eq + 1).parse(approx);
      if (m.exprs_.count(key))
        throw MapParseError(lineno, first + 1, "'" + key + "' defined twice");
      m.exprs_[key] = expr;
      m.approx_[key] = approx;
    }
    bool has_f = m.exprs_.count("f"), has_p = m.exprs_.count("p");
    if (has_f == has_p)
      throw MapParseError(lineno + 1, 1, "give either f = ... or p = ... (with optional q = ...)");
    if (has_f && m.exprs_.count("q"))
      throw MapParseError(lineno + 1, 1, "q is only used together with p");
    m.text_ = std::string(text);
    // a map is approximate when a decimal reaches it through its definitions
    std::function<bool(const belyi_detail::ExprPtr&, int)> uses_decimal = [&](const belyi_detail::ExprPtr& e, int depth) {
      if (depth > 64)
        return false;
      if (e->kind == belyi_detail::Expr::constant) {
        auto it = m.exprs_.find(e->name);
        return it != m.exprs_.end() && (m.approx_[e->name] || uses_decimal(it->second, depth + 1));
      }
      return std::any_of(e->args.begin(), e->args.end(),
                         [&](const belyi_detail::ExprPtr& a) { return uses_decimal(a, depth + 1); });
    };
    for (auto key : {"f", "p", "q"})
      if (m.exprs_.count(key))
        m.approximate_ = m.approximate_ || m.approx_[key] || uses_decimal(m.exprs_[key], 0);
    return m;
  }

  /// p and q at the given precision, trimmed.
  template <class C> std::pair<belyi_detail::Poly<C>, belyi_detail::Poly<C>> polys() const {
    using namespace belyi_detail;
    Frac<C> f;
    if (exprs_.count("f")) {
      f = evaluate<C>(exprs_.at("f"), exprs_);
    } else {
      f = evaluate<C>(exprs_.at("p"), exprs_);
      if (exprs_.count("q")) {
        auto q = evaluate<C>(exprs_.at("q"), exprs_);
        f.num = mul(f.num, q.den);
        f.den = mul(f.den, q.num);
      }
    }
    if (is_zero(f.den))
      throw std::invalid_argument("the denominator is zero");
    if (is_zero(f.num))
      throw std::invalid_argument("the map is identically zero");
    // drop coefficients that cancelled up to rounding
    using R = real_of<C>;
    auto clean = [](Poly<C>& p) {
      R big = 0;
      for (const auto& c : p)
        big = std::max(big, R(abs(c)));
      R eps = big * std::numeric_limits<R>::epsilon() * 1024;
      for (auto& c : p)
        if (R(abs(c)) <= eps)
          c = C(0);
      trim(p);
    };
    clean(f.num);
    clean(f.den);
    // make q monic so tolerances mean the same thing for every way of writing f
    C lead = f.den.back();
    for (auto& c : f.num)
      c /= lead;
    for (auto& c : f.den)
      c /= lead;
    return {f.num, f.den};
  }

  bool approximate() const noexcept { return approximate_; }
  const std::optional<PassportPattern>& passport() const noexcept { return passport_; }
  std::optional<unsigned> precision() const noexcept { return precision_; }
  const std::string& text() const noexcept { return text_; }

  std::size_t degree() const {
    auto [p, q] = polys<mp_complex<256>>();
    return std::max(p.size(), q.size()) - 1;
  }

private:
  std::map<std::string, belyi_detail::ExprPtr> exprs_;
  std::map<std::string, bool> approx_;
  bool approximate_ = false;
  std::optional<PassportPattern> passport_;
  std::optional<unsigned> precision_;
  std::string text_;
};

using cplx = std::complex<double>;

struct FibrePoint {
  cplx position;
  std::size_t multiplicity = 0;
  bool at_infinity = false;
  double diameter = 0; // spread of the root cluster
};

enum class CriticalKind { zero, one, pole, other };

inline std::string_view to_string(CriticalKind k) {
  switch (k) {
  case CriticalKind::zero:
    return "0";
  case CriticalKind::one:
    return "1";
  case CriticalKind::pole:
    return "infinity";
  default:
    return "other";
  }
}

struct CriticalPoint {
  cplx position;
  bool at_infinity = false;
  std::size_t order = 0; // ramification index minus one
  cplx value;            // meaningless for poles
  CriticalKind kind = CriticalKind::other;
};

enum class Verdict { pass, fail, degree_mismatch };

inline std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::pass:
    return "pass";
  case Verdict::fail:
    return "fail";
  default:
    return "degree-mismatch";
  }
}

struct BelyiReport {
  Verdict verdict = Verdict::fail;
  std::size_t degree = 0;
  bool approximate = false;
  double tolerance = 0;
  unsigned precision_bits = 0;
  std::vector<FibrePoint> zeros, ones, poles;
  std::vector<CriticalPoint> critical;
  Passport observed;                   // from the fibre multiplicities
  std::optional<PassportPattern> expected;
  bool critical_values_ok = false;
  bool passport_ok = false;
  bool riemann_hurwitz_ok = false;      // total branching = 2 degree - 2
  std::size_t total_branching = 0;
  double max_residual = 0;              // |p(z)| / ((1+|z|)^deg ||p||), worst over reported roots
  double separation = 0;                // smallest distance between distinct roots in one fibre
  std::vector<std::string> diagnostics;
};

class BelyiError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace belyi_detail {

inline CycleType cycle_type_of(const std::vector<FibrePoint>& pts) {
  std::vector<std::uint32_t> lengths;
  for (const auto& p : pts)
    lengths.push_back(static_cast<std::uint32_t>(p.multiplicity));
  return CycleType(lengths);
}

template <class C> cplx to_cplx(const C& z) {
  double re = static_cast<double>(z.real()), im = static_cast<double>(z.imag());
  // rounding noise far below double precision reads better as zero
  double noise = 1e-30 * (1 + std::abs(re) + std::abs(im));
  return {std::abs(re) < noise ? 0.0 : re, std::abs(im) < noise ? 0.0 : im};
}

template <class C> struct Fibre {
  std::vector<Cluster<C>> clusters;
  double residual = 0;
};

/// Root clusters of p with multiplicities.
template <class C> Fibre<C> fibre(const Poly<C>& p, double radius) {
  using R = real_of<C>;
  Fibre<C> out;
  if (p.size() < 2)
    return out;
  auto res = aberth(p, R(std::numeric_limits<R>::epsilon()) * 16, 20000);
  if (!res.converged)
    throw RootFindingError("root finder did not converge on a degree-" + std::to_string(p.size() - 1) + " polynomial",
                           0);
  out.clusters = cluster_roots(res.roots, R(radius), inclusion_radii(p, res.roots));
  // a cluster of m roots is a simple root of the (m-1)st derivative; polish
  // the mean there, which is far more accurate than the individual copies
  for (auto& c : out.clusters) {
    Poly<C> d = p;
    for (std::size_t k = 1; k < c.multiplicity; ++k)
      d = derivative(d);
    Poly<C> dd = derivative(d);
    C z = c.center;
    for (int it = 0; it < 60; ++it) {
      C slope = eval(dd, z);
      if (slope == C(0))
        break;
      C step = eval(d, z) / slope;
      z -= step;
      if (R(abs(step)) <= std::numeric_limits<R>::epsilon() * 4 * (1 + R(abs(z))))
        break;
    }
    if (R(abs(z - c.center)) <= R(radius))
      c.center = z;
  }
  R norm = 0;
  for (const auto& c : p)
    norm = std::max(norm, R(abs(c)));
  for (const auto& c : out.clusters) {
    R az = abs(c.center);
    R denom = norm;
    for (std::size_t k = 1; k < p.size(); ++k)
      denom *= (1 + az);
    out.residual = std::max(out.residual, static_cast<double>(R(abs(eval(p, c.center)) / denom)));
  }
  return out;
}

template <unsigned Bits>
BelyiReport verify_at(const RationalMap& map, const std::optional<PassportPattern>& expected, double tol) {
  using C = mp_complex<Bits>;
  using R = mp_real<Bits>;
  BelyiReport rep;
  rep.approximate = map.approximate();
  rep.precision_bits = Bits;
  rep.expected = expected;
  // decimal coefficients only pin the map down so far; multiple points split
  // by about the square root of the coefficient error
  const double value_tol = map.approximate() ? std::max(tol, 1e-3) : tol;
  const double radius = map.approximate() ? std::sqrt(value_tol) : tol;
  rep.tolerance = value_tol;

  auto [p, q] = map.polys<C>();
  const std::size_t dp = p.size() - 1, dq = q.size() - 1;
  const std::size_t deg = std::max(dp, dq);
  rep.degree = deg;
  if (deg == 0)
    throw BelyiError("the map is constant");
  Poly<C> pm = add(p, q, -1); // f = 1
  const std::size_t d1 = is_zero(pm) ? 0 : pm.size() - 1;
  if (is_zero(pm))
    throw BelyiError("the map is identically 1");

  auto to_points = [&](const Fibre<C>& f) {
    std::vector<FibrePoint> out;
    for (const auto& c : f.clusters)
      out.push_back({to_cplx(c.center), c.multiplicity, false, c.diameter});
    return out;
  };
  auto fz = fibre(p, radius), f1 = fibre(pm, radius), fp = fibre(q, radius);
  rep.zeros = to_points(fz);
  rep.ones = to_points(f1);
  rep.poles = to_points(fp);
  rep.max_residual = std::max({fz.residual, f1.residual, fp.residual});
  // the point at infinity sits in whichever fibre f(oo) belongs to
  if (dp > dq)
    rep.poles.push_back({{}, dp - dq, true, 0});
  else if (dq > dp)
    rep.zeros.push_back({{}, dq - dp, true, 0});
  else if (d1 < deg)
    rep.ones.push_back({{}, deg - d1, true, 0});

  rep.separation = std::numeric_limits<double>::infinity();
  double widest = 0;
  for (const auto* f : {&fz, &f1, &fp}) {
    rep.separation = std::min(rep.separation, cluster_separation(f->clusters));
    for (const auto& c : f->clusters)
      widest = std::max(widest, c.diameter);
  }

  // critical points: roots of p'q - pq'
  Poly<C> crit = add(mul(derivative(p), q), mul(p, derivative(q)), -1);
  if (!is_zero(crit) && crit.size() > 1) {
    auto fc = fibre(crit, radius);
    for (const auto& c : fc.clusters) {
      CriticalPoint cp;
      cp.position = to_cplx(c.center);
      cp.order = c.multiplicity;
      C qv = eval(q, c.center), pv = eval(p, c.center);
      bool at_pole = std::any_of(fp.clusters.begin(), fp.clusters.end(), [&](const Cluster<C>& pole) {
        return pole.multiplicity > 1 && R(abs(pole.center - c.center)) <= R(radius);
      });
      if (at_pole || qv == C(0)) {
        // a multiple pole: p'q - pq' vanishes there to one order less
        cp.kind = CriticalKind::pole;
      } else {
        C v = pv / qv;
        cp.value = to_cplx(v);
        if (R(abs(v)) <= R(value_tol))
          cp.kind = CriticalKind::zero;
        else if (R(abs(v - C(1))) <= R(value_tol))
          cp.kind = CriticalKind::one;
        else if (R(abs(v)) >= R(1 / value_tol))
          cp.kind = CriticalKind::pole;
      }
      rep.critical.push_back(cp);
    }
  }
  // infinity as a critical point
  {
    std::size_t e = 0;
    CriticalKind kind = CriticalKind::other;
    cplx value;
    if (dp > dq) {
      e = dp - dq;
      kind = CriticalKind::pole;
    } else if (dq > dp) {
      e = dq - dp;
      kind = CriticalKind::zero;
    } else {
      // f(oo) = c; ramification from the degree drop of p - c q
      C c = p.back() / q.back();
      Poly<C> drop = add(p, mul(q, Poly<C>{c}), -1);
      R big = 0;
      for (const auto& k : p)
        big = std::max(big, R(abs(k)));
      std::size_t top = 0;
      for (std::size_t k = 0; k < drop.size(); ++k)
        if (R(abs(drop[k])) > big * R(value_tol))
          top = k;
      e = deg - top;
      value = to_cplx(c);
      if (R(abs(c)) <= R(value_tol))
        kind = CriticalKind::zero;
      else if (R(abs(c - C(1))) <= R(value_tol))
        kind = CriticalKind::one;
    }
    if (e > 1)
      rep.critical.push_back({{}, true, e - 1, value, kind});
  }

  rep.critical_values_ok = std::all_of(rep.critical.begin(), rep.critical.end(),
                                       [](const CriticalPoint& c) { return c.kind != CriticalKind::other; });
  rep.observed = {cycle_type_of(rep.zeros), cycle_type_of(rep.ones), cycle_type_of(rep.poles)};
  rep.total_branching = 3 * deg - rep.zeros.size() - rep.ones.size() - rep.poles.size();
  rep.riemann_hurwitz_ok = rep.total_branching == 2 * deg - 2;

  if (widest > radius)
    rep.diagnostics.push_back("a root cluster is wider than the clustering radius");
  if (!map.approximate() && rep.separation < 1e3 * tol)
    rep.diagnostics.push_back("root clusters closer than 1000 tol");
  for (const auto& c : rep.critical)
    if (c.kind == CriticalKind::other) {
      std::ostringstream s;
      s.precision(10);
      s << "critical point " << c.position << " has value " << c.value << ", not 0, 1 or infinity";
      rep.diagnostics.push_back(s.str());
    }

  std::optional<std::size_t> want_degree = expected ? expected->degree() : std::nullopt;
  if (want_degree && *want_degree != deg) {
    rep.verdict = Verdict::degree_mismatch;
    rep.diagnostics.push_back("map has degree " + std::to_string(deg) + " but the passport has degree " +
                              std::to_string(*want_degree));
    rep.passport_ok = false;
    return rep;
  }
  rep.passport_ok = !expected || expected->matches(rep.observed);
  if (expected && !rep.passport_ok)
    rep.diagnostics.push_back("fibre multiplicities " + rep.observed.to_string() + " do not match " +
                              expected->to_string());
  rep.verdict = rep.critical_values_ok && rep.passport_ok ? Verdict::pass : Verdict::fail;
  return rep;
}

/// Well separated enough to trust the clusters at this precision?
inline bool settled(const BelyiReport& r, double tol) {
  if (r.approximate)
    return true; // more bits do not sharpen decimal coefficients
  double widest = 0;
  for (const auto* f : {&r.zeros, &r.ones, &r.poles})
    for (const auto& p : *f)
      widest = std::max(widest, p.diameter);
  return widest <= tol && r.separation >= 1e3 * tol;
}

} // namespace belyi_detail

/// Verifies f against a passport (or the one in the map file); the working
/// precision starts at the map's request (default 128 bits) and doubles up
/// to 1024 bits until root clusters separate by 1000 tol.
inline BelyiReport verify(const RationalMap& map, std::optional<PassportPattern> passport = std::nullopt,
                          double tol = 1e-8) {
  if (!(tol > 0))
    throw std::invalid_argument("tolerance must be positive");
  if (!passport)
    passport = map.passport();
  unsigned start = map.precision().value_or(128);
  BelyiReport last;
  std::string failure;
  auto attempt = [&]<unsigned Bits>() -> bool {
    if (Bits < start)
      return false;
    try {
      last = belyi_detail::verify_at<Bits>(map, passport, tol);
      failure.clear();
    } catch (const RootFindingError& e) {
      failure = e.what();
      return false;
    }
    return belyi_detail::settled(last, tol);
  };
  if (attempt.template operator()<128>() || attempt.template operator()<256>() ||
      attempt.template operator()<512>() || attempt.template operator()<1024>())
    return last;
  if (!failure.empty())
    throw RootFindingError(failure, last.max_residual);
  last.diagnostics.push_back("clusters did not separate by 1024 bits");
  return last;
}

/// Black vertices (f = 0) and white vertices (f = 1), finite ones only.
inline std::pair<std::vector<FibrePoint>, std::vector<FibrePoint>> vertex_positions(const RationalMap& map,
                                                                                   double tol = 1e-8) {
  auto rep = verify(map, std::nullopt, tol);
  auto finite = [](std::vector<FibrePoint> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](const FibrePoint& p) { return p.at_infinity; }), v.end());
    return v;
  };
  return {finite(rep.zeros), finite(rep.ones)};
}

inline std::vector<CriticalPoint> critical_data(const RationalMap& map, double tol = 1e-8) {
  return verify(map, std::nullopt, tol).critical;
}

inline nlohmann::json to_json(const cplx& z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json to_json(const BelyiReport& r) {
  auto fibre = [](const std::vector<FibrePoint>& pts) {
    auto arr = nlohmann::json::array();
    for (const auto& p : pts) {
      nlohmann::json j = {{"multiplicity", p.multiplicity}};
      j["position"] = p.at_infinity ? nlohmann::json("infinity") : to_json(p.position);
      arr.push_back(std::move(j));
    }
    return arr;
  };
  nlohmann::json j;
  j["verdict"] = to_string(r.verdict);
  j["degree"] = r.degree;
  j["approximate"] = r.approximate;
  j["tolerance"] = r.tolerance;
  j["precision_bits"] = r.precision_bits;
  j["zeros"] = fibre(r.zeros);
  j["ones"] = fibre(r.ones);
  j["poles"] = fibre(r.poles);
  auto crit = nlohmann::json::array();
  for (const auto& c : r.critical) {
    nlohmann::json x = {{"order", c.order}, {"kind", to_string(c.kind)}};
    x["position"] = c.at_infinity ? nlohmann::json("infinity") : to_json(c.position);
    if (c.kind != CriticalKind::pole)
      x["value"] = to_json(c.value);
    crit.push_back(std::move(x));
  }
  j["critical_points"] = std::move(crit);
  j["observed_passport"] = to_json(r.observed);
  j["expected_passport"] = r.expected ? nlohmann::json(r.expected->to_string()) : nlohmann::json(nullptr);
  j["critical_values_ok"] = r.critical_values_ok;
  j["passport_ok"] = r.passport_ok;
  j["riemann_hurwitz"] = {{"total_branching", r.total_branching}, {"ok", r.riemann_hurwitz_ok}};
  j["max_residual"] = r.max_residual;
  j["separation"] = std::isfinite(r.separation) ? nlohmann::json(r.separation) : nlohmann::json(nullptr);
  j["diagnostics"] = r.diagnostics;
  return j;
}

} // namespace dessins
