#pragma once

// The dessin data model: a permutation pair (alpha, beta) on edge labels,
// with alpha the black-vertex rotation, beta the white-vertex rotation and
// gamma = (alpha * beta)^-1 the face rotation.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dessins/perm.hpp"
#include "dessins/perm_group.hpp"
#include "json.hpp"

namespace dessins {

/// preclean: white vertices have valency <= 2 (beta an involution).
/// hypermap: beta unrestricted.
enum class DessinMode { preclean, hypermap };

inline std::string_view to_string(DessinMode m) { return m == DessinMode::preclean ? "preclean" : "hypermap"; }

inline DessinMode parse_mode(std::string_view s) {
  if (s == "preclean")
    return DessinMode::preclean;
  if (s == "hypermap")
    return DessinMode::hypermap;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected preclean|hypermap)");
}

enum class DessinErrorCode { not_transitive, not_involution, degree_mismatch };

class InvalidDessin : public std::invalid_argument {
public:
  InvalidDessin(DessinErrorCode code, const std::string& what) : std::invalid_argument(what), code_(code) {}
  DessinErrorCode code() const noexcept { return code_; }

private:
  DessinErrorCode code_;
};

struct Signature {
  std::size_t black = 0; // B
  std::size_t white = 0; // W
  std::size_t faces = 0; // F
  std::size_t genus = 0; // g

  std::string to_string() const {
    return "(" + std::to_string(black) + "," + std::to_string(white) + "," + std::to_string(faces) + "," +
           std::to_string(genus) + ")";
  }
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// [C_alpha, C_beta, C_gamma].
struct Passport {
  CycleType alpha;
  CycleType beta;
  CycleType gamma;

  std::string to_string() const {
    return "[" + alpha.to_string() + ", " + beta.to_string() + ", " + gamma.to_string() + "]";
  }
  friend bool operator==(const Passport&, const Passport&) = default;
  friend auto operator<=>(const Passport&, const Passport&) = default;
};

/// A passport with optional entries; "*" in text leaves an entry free.
struct PassportPattern {
  std::optional<CycleType> alpha;
  std::optional<CycleType> beta;
  std::optional<CycleType> gamma;

  bool matches(const Passport& p) const {
    return (!alpha || *alpha == p.alpha) && (!beta || *beta == p.beta) && (!gamma || *gamma == p.gamma);
  }

  /// "[4^1, 2^2, 2^1 1^2]" or "4, 2^2, *"; brackets optional.
  static PassportPattern parse(std::string_view text) {
    std::string s(text);
    auto strip = [](std::string v) {
      std::size_t a = v.find_first_not_of(" \t[]");
      std::size_t b = v.find_last_not_of(" \t[]");
      return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
    };
    s = strip(s);
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
      if (i == s.size() || s[i] == ',' || s[i] == ';' || s[i] == '/') {
        parts.push_back(strip(s.substr(start, i - start)));
        start = i + 1;
      }
    if (parts.size() != 3)
      throw ParseError("passport needs three entries separated by ','", 1);
    PassportPattern out;
    auto entry = [](const std::string& part) -> std::optional<CycleType> {
      if (part == "*" || part.empty())
        return std::nullopt;
      return CycleType::parse(part);
    };
    out.alpha = entry(parts[0]);
    out.beta = entry(parts[1]);
    out.gamma = entry(parts[2]);
    return out;
  }

  std::optional<std::size_t> degree() const {
    std::optional<std::size_t> n;
    for (const auto* c : {&alpha, &beta, &gamma}) {
      if (!*c)
        continue;
      if (n && *n != (*c)->degree())
        throw std::invalid_argument("passport entries have different degrees");
      n = (*c)->degree();
    }
    return n;
  }

  std::string to_string() const {
    auto e = [](const std::optional<CycleType>& c) { return c ? c->to_string() : std::string("*"); };
    return "[" + e(alpha) + ", " + e(beta) + ", " + e(gamma) + "]";
  }
};

namespace detail {

/// Rooted breadth-first relabeling code over the alphabet
/// {alpha, alpha^-1, beta, beta^-1}. The code interleaves alpha'(k), beta'(k)
/// for k = 0..n-1 in the new labels. Compares against `best` while building
/// and returns -1/0/+1 (less/equal/greater than best); aborts at the first
/// larger entry. With best empty it always builds the full code and returns -1.
class RootedCoder {
public:
  explicit RootedCoder(std::size_t n) : n_(n), label_(n), order_(n), code_(2 * n) {}

  int encode(const point* alpha, const point* alpha_inv, const point* beta, const point* beta_inv, point root,
             const std::vector<point>* best) {
    std::fill(label_.begin(), label_.end(), kUnset);
    label_[root] = 0;
    order_[0] = root;
    point next = 1;
    bool undecided = best != nullptr && !best->empty();
    int verdict = -1;
    for (std::size_t k = 0; k < n_; ++k) {
      if (k >= next)
        throw InvalidDessin(DessinErrorCode::not_transitive, "canonical form of a disconnected pair");
      point v = order_[k];
      for (point w : {alpha[v], alpha_inv[v], beta[v], beta_inv[v]}) {
        if (label_[w] == kUnset) {
          label_[w] = next;
          order_[next++] = w;
        }
      }
      code_[2 * k] = label_[alpha[v]];
      code_[2 * k + 1] = label_[beta[v]];
      if (undecided) {
        for (std::size_t j = 2 * k; j < 2 * k + 2; ++j) {
          if (code_[j] != (*best)[j]) {
            if (code_[j] > (*best)[j])
              return 1;
            undecided = false;
            verdict = -1;
            break;
          }
        }
        if (undecided && k + 1 == n_)
          verdict = 0;
      }
    }
    return verdict;
  }

  const std::vector<point>& code() const noexcept { return code_; }

private:
  static constexpr point kUnset = ~point{0};
  std::size_t n_;
  std::vector<point> label_;
  std::vector<point> order_;
  std::vector<point> code_;
};

struct CanonicalResult {
  std::vector<point> code;
  std::size_t minimal_roots = 0; // == |Aut| for a transitive pair
  point first_minimal_root = 0;
};

inline CanonicalResult canonical_code(const point* alpha, const point* beta, std::size_t n) {
  std::vector<point> ai(n), bi(n);
  for (std::size_t i = 0; i < n; ++i) {
    ai[alpha[i]] = static_cast<point>(i);
    bi[beta[i]] = static_cast<point>(i);
  }
  RootedCoder coder(n);
  CanonicalResult best;
  for (point r = 0; r < n; ++r) {
    int c = coder.encode(alpha, ai.data(), beta, bi.data(), r, &best.code);
    if (c < 0) {
      best.code = coder.code();
      best.minimal_roots = 1;
      best.first_minimal_root = r;
    } else if (c == 0) {
      ++best.minimal_roots;
    }
  }
  return best;
}

inline std::string code_to_bytes(std::size_t n, const std::vector<point>& code) {
  std::string out;
  bool wide = n > 255;
  out.reserve(2 + code.size() * (wide ? 2 : 1));
  out.push_back(static_cast<char>(wide ? 1 : 0));
  auto put = [&](std::size_t v) {
    if (wide)
      out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
  };
  put(n);
  for (point v : code)
    put(v);
  return out;
}

} // namespace detail

class Dessin {
public:
  /// Validates transitivity and, in preclean mode, that beta is an involution.
  Dessin(Permutation alpha, Permutation beta, DessinMode mode = DessinMode::preclean)
      : alpha_(std::move(alpha)), beta_(std::move(beta)), mode_(mode) {
    if (alpha_.degree() != beta_.degree())
      throw InvalidDessin(DessinErrorCode::degree_mismatch, "alpha and beta have different degrees");
    if (alpha_.degree() == 0)
      throw InvalidDessin(DessinErrorCode::degree_mismatch, "a dessin needs at least one edge");
    if (mode_ == DessinMode::preclean && !(beta_ * beta_).is_identity())
      throw InvalidDessin(DessinErrorCode::not_involution, "beta is not an involution: " + beta_.to_string());
    if (!transitive(alpha_, beta_))
      throw InvalidDessin(DessinErrorCode::not_transitive, "<alpha, beta> is not transitive");
    gamma_ = (alpha_ * beta_).inverse();
  }

  std::size_t n() const noexcept { return alpha_.degree(); }
  const Permutation& alpha() const noexcept { return alpha_; }
  const Permutation& beta() const noexcept { return beta_; }
  const Permutation& gamma() const noexcept { return gamma_; }
  DessinMode mode() const noexcept { return mode_; }

  Signature signature() const {
    Signature s;
    s.black = alpha_.cycle_count();
    s.white = beta_.cycle_count();
    s.faces = gamma_.cycle_count();
    // B + W + F - n = 2 - 2g
    long long chi = static_cast<long long>(s.black + s.white + s.faces) - static_cast<long long>(n());
    long long twice_genus = 2 - chi;
    if (twice_genus < 0 || twice_genus % 2 != 0)
      throw std::logic_error("Euler characteristic " + std::to_string(chi) + " gives no integral genus");
    s.genus = static_cast<std::size_t>(twice_genus / 2);
    return s;
  }

  Passport passport() const { return {alpha_.cycle_type(), beta_.cycle_type(), gamma_.cycle_type()}; }

  /// The cartographic group <alpha, beta>.
  PermGroup group() const { return PermGroup(n(), {alpha_, beta_}); }

  /// Equal iff the two dessins are related by a simultaneous relabeling.
  std::string canonical_form() const {
    auto res = detail::canonical_code(alpha_.images().data(), beta_.images().data(), n());
    return detail::code_to_bytes(n(), res.code);
  }

  /// Relabelings fixing both alpha and beta; divides n.
  std::size_t automorphism_count() const {
    return detail::canonical_code(alpha_.images().data(), beta_.images().data(), n()).minimal_roots;
  }

  /// Representative in canonical labeling (same class, canonical labels).
  Dessin canonical() const {
    auto res = detail::canonical_code(alpha_.images().data(), beta_.images().data(), n());
    std::vector<point> a(n()), b(n());
    for (std::size_t k = 0; k < n(); ++k) {
      a[k] = res.code[2 * k];
      b[k] = res.code[2 * k + 1];
    }
    return Dessin(Permutation::from_images(std::move(a)), Permutation::from_images(std::move(b)), mode_);
  }

  /// Relabels every edge i as sigma(i).
  Dessin relabel(const Permutation& sigma) const {
    return Dessin(alpha_.conjugate_by(sigma), beta_.conjugate_by(sigma), mode_);
  }

  static bool transitive(const Permutation& a, const Permutation& b) {
    std::size_t n = a.degree();
    if (n == 0)
      return false;
    std::vector<bool> seen(n, false);
    std::vector<point> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      point v = stack.back();
      stack.pop_back();
      for (point w : {a(v), b(v)})
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
    }
    return count == n;
  }

  friend bool operator==(const Dessin& x, const Dessin& y) {
    return x.alpha_ == y.alpha_ && x.beta_ == y.beta_ && x.mode_ == y.mode_;
  }

private:
  Permutation alpha_;
  Permutation beta_;
  Permutation gamma_;
  DessinMode mode_;
};

inline Dessin make_dessin(std::size_t n, const Permutation& alpha, const Permutation& beta,
                          DessinMode mode = DessinMode::preclean) {
  if (alpha.degree() != n || beta.degree() != n)
    throw InvalidDessin(DessinErrorCode::degree_mismatch, "permutations do not have degree " + std::to_string(n));
  return Dessin(alpha, beta, mode);
}

inline Dessin make_dessin(std::size_t n, std::string_view alpha, std::string_view beta,
                          DessinMode mode = DessinMode::preclean) {
  return Dessin(Permutation::parse(alpha, n), Permutation::parse(beta, n), mode);
}

/// Malformed dessin file; line and column are 1-based.
class FileFormatError : public std::runtime_error {
public:
  FileFormatError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_, column_;
};

/// Text format:
///   n=<int>
///   alpha=<cycles>
///   beta=<cycles>
///   mode=preclean|hypermap      (optional, default preclean)
/// Lines starting with '#' and blank lines are ignored.
inline Dessin parse_dessin_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  struct Field {
    std::string value;
    std::size_t line, column;
  };
  std::optional<Field> alpha, beta;
  DessinMode mode = DessinMode::preclean;
  std::size_t field = 0;
  static const char* const kOrder[] = {"n", "alpha", "beta", "mode"};
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#')
      continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw FileFormatError(lineno, first + 1, "expected key=value");
    std::string key = line.substr(first, eq - first);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
      key.pop_back();
    std::string value = line.substr(eq + 1);
    if (field >= 4 || key != kOrder[field])
      throw FileFormatError(lineno, first + 1,
                            "unexpected key '" + key + "'" + (field < 4 ? std::string(" (expected '") + kOrder[field] + "')" : ""));
    try {
      switch (field) {
      case 0: {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (v <= 0 || value.find_first_not_of(" \t", pos) != std::string::npos)
          throw std::invalid_argument("n must be a positive integer");
        n = static_cast<std::size_t>(v);
        break;
      }
      case 1:
        alpha = Field{value, lineno, eq + 2};
        break;
      case 2:
        beta = Field{value, lineno, eq + 2};
        break;
      case 3: {
        std::size_t a = value.find_first_not_of(" \t"), b = value.find_last_not_of(" \t");
        mode = parse_mode(a == std::string::npos ? "" : value.substr(a, b - a + 1));
        break;
      }
      }
    } catch (const FileFormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FileFormatError(lineno, eq + 2, e.what());
    }
    ++field;
  }
  if (field < 3)
    throw FileFormatError(lineno + 1, 1, std::string("missing '") + kOrder[field] + "' line");
  auto perm = [&](const Field& f) {
    try {
      return Permutation::parse(f.value, *n);
    } catch (const ParseError& e) {
      throw FileFormatError(f.line, f.column + e.column() - 1, e.what());
    }
  };
  Permutation a = perm(*alpha);
  Permutation b = perm(*beta);
  return Dessin(std::move(a), std::move(b), mode);
}

inline std::string to_text(const Dessin& d) {
  std::string out = "n=" + std::to_string(d.n()) + "\n";
  out += "alpha=" + d.alpha().to_string() + "\n";
  out += "beta=" + d.beta().to_string() + "\n";
  out += "mode=" + std::string(to_string(d.mode())) + "\n";
  return out;
}

inline nlohmann::json to_json(const Signature& s) {
  return {{"B", s.black}, {"W", s.white}, {"F", s.faces}, {"g", s.genus}};
}

inline nlohmann::json to_json(const Passport& p) {
  return nlohmann::json::array({p.alpha.to_string(), p.beta.to_string(), p.gamma.to_string()});
}

/// {n, alpha, beta, signature:{B,W,F,g}, passport:[...], group_order:"<decimal>"}
inline nlohmann::json to_json(const Dessin& d) {
  nlohmann::json j;
  j["n"] = d.n();
  j["alpha"] = d.alpha().to_string();
  j["beta"] = d.beta().to_string();
  j["signature"] = to_json(d.signature());
  j["passport"] = to_json(d.passport());
  j["group_order"] = d.group().order().str();
  return j;
}

inline Signature signature(const Dessin& d) { return d.signature(); }
inline Passport passport(const Dessin& d) { return d.passport(); }
inline std::string canonical_form(const Dessin& d) { return d.canonical_form(); }
inline std::size_t automorphism_count(const Dessin& d) { return d.automorphism_count(); }

} // namespace dessins
