#pragma once

// Multi-qubit Pauli observables in the symplectic (x|z) picture, with a Z4
// phase, plus dense Gaussian-integer matrices for the CHSH check.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dessins/geometry.hpp"
#include "dessins/intpoly.hpp"
#include "dessins/spectrum.hpp"
#include "json.hpp"

namespace dessins {

class PauliError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// i^phase times a tensor product of I, X, Y, Z. Qubit 0 is the leftmost
/// letter. x and z bits per qubit: X = (1,0), Z = (0,1), Y = (1,1).
class PauliOp {
public:
  static constexpr std::size_t kMaxQubits = 32;

  PauliOp() = default;
  PauliOp(std::size_t n, std::uint64_t x, std::uint64_t z, unsigned phase = 0) : n_(n), x_(x), z_(z), phase_(phase % 4) {
    if (n > kMaxQubits)
      throw PauliError("at most " + std::to_string(kMaxQubits) + " qubits");
    std::uint64_t mask = n == 64 ? ~0ull : (1ull << n) - 1;
    if ((x & ~mask) || (z & ~mask))
      throw PauliError("bits beyond the qubit count");
  }

  static PauliOp identity(std::size_t n) { return PauliOp(n, 0, 0, 0); }

  /// "XIZ", "-iYY", "+IX", "iZ"; the unicode minus is accepted too.
  static PauliOp parse(std::string_view text) {
    std::string s;
    for (std::size_t k = 0; k < text.size(); ++k) {
      // U+2212 in UTF-8
      if (k + 2 < text.size() && static_cast<unsigned char>(text[k]) == 0xE2 &&
          static_cast<unsigned char>(text[k + 1]) == 0x88 && static_cast<unsigned char>(text[k + 2]) == 0x92) {
        s += '-';
        k += 2;
      } else if (!std::isspace(static_cast<unsigned char>(text[k]))) {
        s += text[k];
      }
    }
    unsigned phase = 0;
    std::size_t pos = 0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-')
        phase = 2;
      ++pos;
    }
    if (pos < s.size() && s[pos] == 'i') {
      phase += 1;
      ++pos;
    }
    std::size_t n = s.size() - pos;
    if (n == 0)
      throw PauliError("empty Pauli operator '" + std::string(text) + "'");
    if (n > kMaxQubits)
      throw PauliError("at most " + std::to_string(kMaxQubits) + " qubits");
    std::uint64_t x = 0, z = 0;
    for (std::size_t q = 0; q < n; ++q) {
      char c = s[pos + q];
      std::uint64_t bit = 1ull << q;
      switch (c) {
      case 'I':
        break;
      case 'X':
        x |= bit;
        break;
      case 'Z':
        z |= bit;
        break;
      case 'Y':
        x |= bit;
        z |= bit;
        break;
      default:
        throw PauliError("unexpected '" + std::string(1, c) + "' in Pauli operator '" + std::string(text) + "'");
      }
    }
    return PauliOp(n, x, z, phase);
  }

  std::size_t qubits() const noexcept { return n_; }
  std::uint64_t x() const noexcept { return x_; }
  std::uint64_t z() const noexcept { return z_; }
  unsigned phase() const noexcept { return phase_; } // exponent of i
  bool is_identity() const noexcept { return x_ == 0 && z_ == 0; }
  /// Hermitian exactly when the phase is real.
  bool hermitian() const noexcept { return phase_ % 2 == 0; }
  PauliOp unsigned_op() const { return PauliOp(n_, x_, z_, 0); }
  PauliOp with_phase(unsigned phase) const { return PauliOp(n_, x_, z_, phase); }

  char letter(std::size_t q) const {
    bool a = (x_ >> q) & 1, b = (z_ >> q) & 1;
    return a ? (b ? 'Y' : 'X') : (b ? 'Z' : 'I');
  }

  std::string to_string() const {
    static const char* prefix[] = {"", "i", "-", "-i"};
    std::string s = prefix[phase_];
    for (std::size_t q = 0; q < n_; ++q)
      s += letter(q);
    return s;
  }

  friend bool operator==(const PauliOp&, const PauliOp&) = default;
  friend auto operator<=>(const PauliOp&, const PauliOp&) = default;

private:
  std::size_t n_ = 0;
  std::uint64_t x_ = 0, z_ = 0;
  unsigned phase_ = 0;
};

inline void require_same_size(const PauliOp& a, const PauliOp& b) {
  if (a.qubits() != b.qubits())
    throw PauliError("Pauli operators on " + std::to_string(a.qubits()) + " and " + std::to_string(b.qubits()) +
                     " qubits");
}

/// Symplectic form x_a.z_b + x_b.z_a over GF(2) vanishes.
inline bool commutes(const PauliOp& a, const PauliOp& b) {
  require_same_size(a, b);
  return std::popcount((a.x() & b.z()) ^ (a.z() & b.x())) % 2 == 0;
}

/// a*b with the phase tracked exactly.
inline PauliOp multiply(const PauliOp& a, const PauliOp& b) {
  require_same_size(a, b);
  // per qubit, sigma_a sigma_b = i^g sigma_{a+b}; g from the standard table
  int g = 0;
  for (std::size_t q = 0; q < a.qubits(); ++q) {
    int x1 = (a.x() >> q) & 1, z1 = (a.z() >> q) & 1, x2 = (b.x() >> q) & 1, z2 = (b.z() >> q) & 1;
    if (x1 && z1)
      g += z2 - x2;
    else if (x1)
      g += z2 * (2 * x2 - 1);
    else if (z1)
      g += x2 * (1 - 2 * z2);
  }
  int phase = (static_cast<int>(a.phase()) + static_cast<int>(b.phase()) + g) % 4;
  if (phase < 0)
    phase += 4;
  return PauliOp(a.qubits(), a.x() ^ b.x(), a.z() ^ b.z(), static_cast<unsigned>(phase));
}

/// Left-to-right product; an empty list needs the qubit count.
inline PauliOp product(const std::vector<PauliOp>& ops, std::optional<std::size_t> qubits = std::nullopt) {
  if (ops.empty()) {
    if (!qubits)
      throw PauliError("the empty product needs a qubit count");
    return PauliOp::identity(*qubits);
  }
  PauliOp acc = PauliOp::identity(ops[0].qubits());
  for (const auto& op : ops)
    acc = multiply(acc, op);
  return acc;
}

// ---------------------------------------------------------------------------
// dense matrices with Gaussian-integer entries

struct GaussMatrix {
  std::size_t dim = 0;
  std::vector<long long> re, im; // row major

  explicit GaussMatrix(std::size_t d = 0) : dim(d), re(d * d, 0), im(d * d, 0) {}

  static constexpr std::size_t kMaxDim = 1024;

  /// The 2^n x 2^n matrix of op; qubit 0 is the most significant tensor factor.
  static GaussMatrix of(const PauliOp& op) {
    std::size_t n = op.qubits();
    if (n >= 11)
      throw PauliError("dense matrices are limited to 2^n <= " + std::to_string(kMaxDim));
    std::size_t d = std::size_t{1} << n;
    GaussMatrix m(d);
    // column c maps to row c ^ xmask, times i^phase * prod over qubits of the
    // single-qubit entry: X -> 1, Z -> (-1)^bit, Y -> i (-1)^bit
    std::uint64_t xmask = 0;
    for (std::size_t q = 0; q < n; ++q)
      if ((op.x() >> q) & 1)
        xmask |= std::uint64_t{1} << (n - 1 - q);
    for (std::size_t c = 0; c < d; ++c) {
      unsigned ph = op.phase();
      for (std::size_t q = 0; q < n; ++q) {
        bool bit = (c >> (n - 1 - q)) & 1;
        bool xq = (op.x() >> q) & 1, zq = (op.z() >> q) & 1;
        if (zq && bit)
          ph += 2;
        if (xq && zq)
          ph += 1;
      }
      std::size_t r = c ^ xmask;
      static const long long re_of[] = {1, 0, -1, 0}, im_of[] = {0, 1, 0, -1};
      m.re[r * d + c] = re_of[ph % 4];
      m.im[r * d + c] = im_of[ph % 4];
    }
    return m;
  }

  GaussMatrix operator*(const GaussMatrix& o) const {
    GaussMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) {
        long long ar = re[i * dim + k], ai = im[i * dim + k];
        if (!ar && !ai)
          continue;
        for (std::size_t j = 0; j < dim; ++j) {
          long long br = o.re[k * dim + j], bi = o.im[k * dim + j];
          out.re[i * dim + j] += ar * br - ai * bi;
          out.im[i * dim + j] += ar * bi + ai * br;
        }
      }
    return out;
  }
  GaussMatrix operator+(const GaussMatrix& o) const {
    GaussMatrix out = *this;
    for (std::size_t k = 0; k < re.size(); ++k) {
      out.re[k] += o.re[k];
      out.im[k] += o.im[k];
    }
    return out;
  }
  GaussMatrix operator-(const GaussMatrix& o) const {
    GaussMatrix out = *this;
    for (std::size_t k = 0; k < re.size(); ++k) {
      out.re[k] -= o.re[k];
      out.im[k] -= o.im[k];
    }
    return out;
  }
  bool operator==(const GaussMatrix&) const = default;

  bool hermitian() const {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        if (re[i * dim + j] != re[j * dim + i] || im[i * dim + j] != -im[j * dim + i])
          return false;
    return true;
  }

  std::vector<std::vector<long long>> real_rows() const { return rows(re); }
  std::vector<std::vector<long long>> imag_rows() const { return rows(im); }

  Eigen::MatrixXcd to_eigen() const {
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        m(i, j) = {static_cast<double>(re[i * dim + j]), static_cast<double>(im[i * dim + j])};
    return m;
  }

private:
  std::vector<std::vector<long long>> rows(const std::vector<long long>& v) const {
    std::vector<std::vector<long long>> out(dim, std::vector<long long>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        out[i][j] = v[i * dim + j];
    return out;
  }
};

// ---------------------------------------------------------------------------
// CHSH

struct ChshResult {
  std::vector<std::string> violations; // empty when the square structure holds
  bool hermitian = false;              // C itself
  bool exact = false;                  // eigenvalues from the exact characteristic polynomial
  IntPoly charpoly;                    // of C^2, when exact
  Spectrum c2_eigenvalues;             // largest first
  double norm = 0;                     // operator norm of C
  std::optional<long long> norm_squared; // exact when an integer

  bool structure_ok() const { return violations.empty(); }
};

/// C = s2 (s1 + s3) + s4 (s3 - s1). Adjacent pairs (1,2), (2,3), (3,4), (4,1)
/// should commute and the diagonals (1,3), (2,4) anticommute; violations are
/// listed, and the spectrum is computed either way.
inline ChshResult chsh_check(const std::vector<PauliOp>& s) {
  if (s.size() != 4)
    throw PauliError("chsh_check takes four operators");
  for (std::size_t k = 1; k < 4; ++k)
    require_same_size(s[0], s[k]);
  ChshResult out;
  auto name = [&](std::size_t k) { return "s" + std::to_string(k + 1) + "=" + s[k].to_string(); };
  for (std::size_t k = 0; k < 4; ++k) {
    if (s[k].is_identity())
      out.violations.push_back(name(k) + " is the identity");
    if (!s[k].hermitian())
      out.violations.push_back(name(k) + " is not Hermitian");
    for (std::size_t l = k + 1; l < 4; ++l)
      if (s[k].unsigned_op() == s[l].unsigned_op())
        out.violations.push_back(name(k) + " and " + name(l) + " agree up to phase");
  }
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 3}, {3, 0}})
    if (!commutes(s[a], s[b]))
      out.violations.push_back(name(a) + " and " + name(b) + " should commute");
  for (auto [a, b] : {std::pair{0, 2}, {1, 3}})
    if (commutes(s[a], s[b]))
      out.violations.push_back(name(a) + " and " + name(b) + " should anticommute");

  GaussMatrix m1 = GaussMatrix::of(s[0]), m2 = GaussMatrix::of(s[1]), m3 = GaussMatrix::of(s[2]),
              m4 = GaussMatrix::of(s[3]);
  GaussMatrix c = m2 * (m1 + m3) + m4 * (m3 - m1);
  GaussMatrix c2 = c * c;
  out.hermitian = c.hermitian();
  if (out.hermitian) {
    auto [re, im] = charpoly_gaussian(c2.real_rows(), c2.imag_rows());
    if (!im.empty())
      throw std::logic_error("Hermitian C^2 with a non-real characteristic polynomial");
    out.exact = true;
    out.charpoly = re;
    out.c2_eigenvalues = real_spectrum(re);
    const auto& top = out.c2_eigenvalues.front();
    out.norm = std::sqrt(std::max(0.0, top.value));
    if (top.exact)
      out.norm_squared = *top.exact;
  } else {
    // complex eigenvalues in general; report moduli-sorted real parts only when real
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c2.to_eigen());
    std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + c2.dim);
    std::sort(ev.begin(), ev.end(), [](auto x, auto y) { return x.real() > y.real(); });
    for (const auto& v : ev) {
      if (!out.c2_eigenvalues.empty() && std::abs(out.c2_eigenvalues.back().value - v.real()) < 1e-9)
        ++out.c2_eigenvalues.back().multiplicity;
      else
        out.c2_eigenvalues.push_back({v.real(), 1, std::nullopt});
    }
    Eigen::MatrixXcd ce = c.to_eigen();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sa(ce.adjoint() * ce, Eigen::EigenvaluesOnly);
    out.norm = std::sqrt(std::max(0.0, sa.eigenvalues().maxCoeff()));
  }
  return out;
}

/// Operator norm of C in floating point, independent of the exact path.
inline double chsh_norm_numeric(const std::vector<PauliOp>& s) {
  Eigen::MatrixXcd m1 = GaussMatrix::of(s.at(0)).to_eigen(), m2 = GaussMatrix::of(s.at(1)).to_eigen(),
                   m3 = GaussMatrix::of(s.at(2)).to_eigen(), m4 = GaussMatrix::of(s.at(3)).to_eigen();
  Eigen::MatrixXcd c = m2 * (m1 + m3) + m4 * (m3 - m1);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// labelled geometries and magic configurations

struct LabeledGeometry {
  Geometry geometry;
  std::vector<PauliOp> labels; // one per point

  /// One line per geometry line, operators separated by commas; '#' starts
  /// a comment. Points are the distinct operators up to phase; a point keeps
  /// the phase it is first written with.
  static LabeledGeometry parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string row;
    std::size_t lineno = 0;
    std::map<std::pair<std::uint64_t, std::uint64_t>, point> index;
    std::vector<PauliOp> labels;
    std::vector<std::vector<point>> lines;
    std::optional<std::size_t> qubits;
    while (std::getline(in, row)) {
      ++lineno;
      if (auto hash = row.find('#'); hash != std::string::npos)
        row.resize(hash);
      if (row.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      std::vector<point> line;
      std::stringstream items(row);
      std::string item;
      while (std::getline(items, item, ',')) {
        PauliOp op;
        try {
          op = PauliOp::parse(item);
        } catch (const PauliError& e) {
          throw PauliError("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (qubits && *qubits != op.qubits())
          throw PauliError("line " + std::to_string(lineno) + ": mixed qubit counts");
        qubits = op.qubits();
        auto key = std::make_pair(op.x(), op.z());
        auto [it, fresh] = index.try_emplace(key, static_cast<point>(labels.size()));
        if (fresh)
          labels.push_back(op);
        else if (labels[it->second] != op)
          throw PauliError("line " + std::to_string(lineno) + ": " + op.to_string() + " was written as " +
                           labels[it->second].to_string() + " before");
        line.push_back(it->second);
      }
      lines.push_back(std::move(line));
    }
    if (lines.empty())
      throw PauliError("no lines");
    return {Geometry::from_lines(labels.size(), lines), labels};
  }

  /// Collinear points whose labels anticommute.
  std::vector<std::pair<point, point>> commutation_violations() const {
    std::vector<std::pair<point, point>> out;
    for (auto [a, b] : geometry.graph().edges())
      if (!commutes(labels[a], labels[b]))
        out.emplace_back(a, b);
    return out;
  }
};

struct LineProduct {
  std::vector<point> points;
  PauliOp product;
  bool commuting = true;
  std::optional<int> sign; // +1 or -1 when the product is +-I
};

struct MagicVerdict {
  std::vector<LineProduct> lines;
  std::size_t negative_lines = 0;
  bool all_scalar = false;
  bool contextual = false;
  std::vector<std::string> errors; // non-commuting lines
};

/// Multiplies the labels along each line. Contextual when every product is
/// +-I and an odd number of them are -I: no +-1 assignment to the points can
/// then reproduce every line's sign.
inline MagicVerdict magic_check(const LabeledGeometry& lg) {
  MagicVerdict v;
  v.all_scalar = true;
  for (const auto& line : lg.geometry.lines()) {
    LineProduct lp;
    lp.points = line;
    std::vector<PauliOp> ops;
    for (point p : line)
      ops.push_back(lg.labels.at(p));
    for (std::size_t a = 0; a < ops.size(); ++a)
      for (std::size_t b = a + 1; b < ops.size(); ++b)
        if (!commutes(ops[a], ops[b])) {
          lp.commuting = false;
          v.errors.push_back(ops[a].to_string() + " and " + ops[b].to_string() + " anticommute on one line");
        }
    lp.product = product(ops);
    if (lp.commuting && lp.product.is_identity() && lp.product.hermitian())
      lp.sign = lp.product.phase() == 0 ? 1 : -1;
    if (!lp.sign)
      v.all_scalar = false;
    else if (*lp.sign < 0)
      ++v.negative_lines;
    v.lines.push_back(std::move(lp));
  }
  v.contextual = v.errors.empty() && v.all_scalar && v.negative_lines % 2 == 1;
  return v;
}

// ---------------------------------------------------------------------------
// commutation graphs and squares

/// The 4^n - 1 non-identity operators up to phase, in (x, z) order.
inline std::vector<PauliOp> nontrivial_paulis(std::size_t n) {
  if (n == 0 || n > 6)
    throw PauliError("qubit count must be between 1 and 6");
  std::vector<PauliOp> out;
  std::uint64_t m = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < m; ++x)
    for (std::uint64_t z = 0; z < m; ++z)
      if (x || z)
        out.emplace_back(n, x, z, 0);
  return out;
}

/// Vertices: nontrivial_paulis(n); edges join distinct commuting operators.
inline Graph commutation_graph(std::size_t n) {
  auto ops = nontrivial_paulis(n);
  Graph g(ops.size());
  for (point a = 0; a < ops.size(); ++a)
    for (point b = a + 1; b < ops.size(); ++b)
      if (commutes(ops[a], ops[b]))
        g.add_edge(a, b);
  return g;
}

/// Squares among n-qubit observables: 4-cycles of pairwise commuting
/// neighbours whose diagonals anticommute.
inline std::uint64_t count_squares(std::size_t n) {
  if (n == 0 || n > 4)
    throw PauliError("count_squares supports 1 to 4 qubits");
  return count_chordless_squares(commutation_graph(n));
}

inline nlohmann::json to_json(const ChshResult& r) {
  auto ev = nlohmann::json::array();
  for (const auto& e : r.c2_eigenvalues) {
    nlohmann::json x = {{"value", e.value}, {"multiplicity", e.multiplicity}};
    if (e.exact)
      x["exact"] = *e.exact;
    ev.push_back(std::move(x));
  }
  nlohmann::json j = {{"structure_ok", r.structure_ok()},
                      {"violations", r.violations},
                      {"hermitian", r.hermitian},
                      {"exact", r.exact},
                      {"c2_eigenvalues", std::move(ev)},
                      {"norm", r.norm}};
  j["norm_squared"] = r.norm_squared ? nlohmann::json(*r.norm_squared) : nlohmann::json(nullptr);
  if (r.exact)
    j["c2_charpoly"] = to_string(r.charpoly);
  return j;
}

inline nlohmann::json to_json(const MagicVerdict& v, const LabeledGeometry& lg) {
  auto lines = nlohmann::json::array();
  for (const auto& l : v.lines) {
    auto ops = nlohmann::json::array();
    for (point p : l.points)
      ops.push_back(lg.labels[p].to_string());
    nlohmann::json x = {{"operators", std::move(ops)}, {"product", l.product.to_string()}, {"commuting", l.commuting}};
    x["sign"] = l.sign ? nlohmann::json(*l.sign > 0 ? "+I" : "-I") : nlohmann::json("non-scalar");
    lines.push_back(std::move(x));
  }
  return {{"lines", std::move(lines)},
          {"negative_lines", v.negative_lines},
          {"negative_parity", v.negative_lines % 2 ? "odd" : "even"},
          {"all_scalar", v.all_scalar},
          {"contextual", v.contextual},
          {"errors", v.errors}};
}

} // namespace dessins
