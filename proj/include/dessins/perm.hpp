#pragma once

// Permutations on {1..n} with cycle-notation IO.
//
// Points are stored 0-based; every textual form (cycle notation, error
// messages, JSON) is 1-based. Products act left to right:
//
//     (p * q)(i) == q(p(i))
//
// so "alpha beta" means "apply alpha, then beta". The face permutation of a
// dessin is gamma = (alpha * beta)^-1, which keeps alpha * beta * gamma == 1.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dessins {

using point = std::uint32_t;

class DegreeMismatch : public std::invalid_argument {
public:
  DegreeMismatch(std::size_t a, std::size_t b)
      : std::invalid_argument("degree mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// Malformed textual input; column is 1-based within the offending string.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t column)
      : std::runtime_error(what + " (column " + std::to_string(column) + ")"), column_(column) {}
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t column_;
};

/// Multiset of cycle lengths, sorted descending; fixed points included.
class CycleType {
public:
  CycleType() = default;
  explicit CycleType(std::vector<std::uint32_t> lengths) : lengths_(std::move(lengths)) {
    std::sort(lengths_.begin(), lengths_.end(), std::greater<>());
    if (std::find(lengths_.begin(), lengths_.end(), 0u) != lengths_.end())
      throw std::invalid_argument("cycle length 0");
  }

  const std::vector<std::uint32_t>& lengths() const noexcept { return lengths_; }
  std::size_t cycle_count() const noexcept { return lengths_.size(); }
  std::size_t degree() const noexcept {
    return std::accumulate(lengths_.begin(), lengths_.end(), std::size_t{0});
  }

  /// Factor form "6^1 3^2 2^1 1^1".
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < lengths_.size();) {
      std::size_t j = i;
      while (j < lengths_.size() && lengths_[j] == lengths_[i])
        ++j;
      if (!out.empty())
        out += ' ';
      out += std::to_string(lengths_[i]) + '^' + std::to_string(j - i);
      i = j;
    }
    return out;
  }

  /// Accepts "6^1 3^2 2 1", "6.3^2.2.1" or "6^1*3^2"; a bare length means
  /// multiplicity one.
  static CycleType parse(std::string_view text) {
    std::vector<std::uint32_t> lengths;
    std::size_t i = 0;
    auto skip = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == '.' || text[i] == '*' || text[i] == '\t'))
        ++i;
    };
    auto number = [&]() -> std::uint32_t {
      std::size_t start = i;
      std::uint64_t v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
        if (v > 1'000'000)
          throw ParseError("number too large", start + 1);
        ++i;
      }
      if (i == start)
        throw ParseError("expected a number", i + 1);
      return static_cast<std::uint32_t>(v);
    };
    skip();
    while (i < text.size()) {
      std::size_t at = i + 1;
      std::uint32_t len = number();
      std::uint32_t mult = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        mult = number();
      }
      if (len == 0)
        throw ParseError("cycle length 0", at);
      lengths.insert(lengths.end(), mult, len);
      skip();
    }
    if (lengths.empty())
      throw ParseError("empty cycle type", 1);
    return CycleType(std::move(lengths));
  }

  friend bool operator==(const CycleType&, const CycleType&) = default;
  friend auto operator<=>(const CycleType&, const CycleType&) = default;

private:
  std::vector<std::uint32_t> lengths_;
};

class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), point{0});
  }

  /// 0-based images; throws std::invalid_argument unless a bijection.
  static Permutation from_images(std::vector<point> images) {
    std::vector<bool> hit(images.size(), false);
    for (point p : images) {
      if (p >= images.size() || hit[p])
        throw std::invalid_argument("image list is not a bijection");
      hit[p] = true;
    }
    Permutation out;
    out.images_ = std::move(images);
    return out;
  }

  /// 1-based image list, e.g. {2,1,3} == (1,2) on three points.
  static Permutation from_one_based(std::span<const point> images) {
    std::vector<point> v(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (images[i] == 0)
        throw std::invalid_argument("label 0 in 1-based image list");
      v[i] = images[i] - 1;
    }
    return from_images(std::move(v));
  }

  /// Parses "(1,2,4,3)(5,7,6,8)"; "()" or "" is the identity. Fixed points
  /// may be omitted. With degree == 0 the degree is the largest label seen.
  static Permutation parse(std::string_view text, std::size_t degree = 0) {
    std::vector<std::vector<point>> cycles;
    std::size_t i = 0;
    std::size_t max_label = 0;
    auto ws = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
        ++i;
    };
    ws();
    while (i < text.size()) {
      if (text[i] != '(')
        throw ParseError("expected '('", i + 1);
      ++i;
      std::vector<point> cycle;
      ws();
      if (i < text.size() && text[i] == ')') {
        ++i;
        ws();
        continue;
      }
      while (true) {
        ws();
        std::size_t start = i;
        std::uint64_t v = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
          v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
          if (v > 1'000'000)
            throw ParseError("label too large", start + 1);
          ++i;
        }
        if (i == start)
          throw ParseError("expected a label", i + 1);
        if (v == 0)
          throw ParseError("labels are 1-based", start + 1);
        cycle.push_back(static_cast<point>(v - 1));
        max_label = std::max<std::size_t>(max_label, v);
        ws();
        if (i >= text.size())
          throw ParseError("unterminated cycle", i + 1);
        if (text[i] == ',') {
          ++i;
          continue;
        }
        if (text[i] == ')') {
          ++i;
          break;
        }
        throw ParseError("expected ',' or ')'", i + 1);
      }
      cycles.push_back(std::move(cycle));
      ws();
    }
    if (degree == 0)
      degree = max_label;
    if (max_label > degree)
      throw ParseError("label " + std::to_string(max_label) + " exceeds degree " + std::to_string(degree), 1);
    Permutation out(degree);
    std::vector<bool> seen(degree, false);
    for (const auto& c : cycles) {
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (seen[c[k]])
          throw ParseError("label " + std::to_string(c[k] + 1) + " repeated", 1);
        seen[c[k]] = true;
        out.images_[c[k]] = c[(k + 1) % c.size()];
      }
    }
    return out;
  }

  std::size_t degree() const noexcept { return images_.size(); }
  point operator()(point p) const { return images_[p]; }
  std::span<const point> images() const noexcept { return images_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i)
        return false;
    return true;
  }

  bool fixes(point p) const { return images_[p] == p; }

  Permutation inverse() const {
    Permutation out;
    out.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
      out.images_[images_[i]] = static_cast<point>(i);
    return out;
  }

  /// x -> x^sigma conjugate, i.e. sigma^-1 * this * sigma; relabels every
  /// point i as sigma(i).
  Permutation conjugate_by(const Permutation& sigma) const {
    if (sigma.degree() != degree())
      throw DegreeMismatch(degree(), sigma.degree());
    Permutation out(degree());
    for (std::size_t i = 0; i < images_.size(); ++i)
      out.images_[sigma.images_[i]] = sigma.images_[images_[i]];
    return out;
  }

  CycleType cycle_type() const {
    std::vector<std::uint32_t> lengths;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i])
        continue;
      std::uint32_t len = 0;
      for (point j = static_cast<point>(i); !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      lengths.push_back(len);
    }
    return CycleType(std::move(lengths));
  }

  std::size_t cycle_count() const {
    std::size_t count = 0;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i])
        continue;
      ++count;
      for (point j = static_cast<point>(i); !seen[j]; j = images_[j])
        seen[j] = true;
    }
    return count;
  }

  /// Order as lcm of cycle lengths; fits 64 bits for degree <= 100.
  std::uint64_t order() const { return order_of(images_.data(), images_.size()); }

  /// Order of the permutation with the given image array.
  static std::uint64_t order_of(const point* img, std::size_t n) {
    std::uint64_t l = 1;
    if (n <= 64) {
      std::uint64_t seen = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (seen >> i & 1)
          continue;
        std::uint64_t len = 0;
        for (point j = static_cast<point>(i); !(seen >> j & 1); j = img[j]) {
          seen |= std::uint64_t{1} << j;
          ++len;
        }
        l = std::lcm(l, len);
      }
      return l;
    }
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i])
        continue;
      std::uint64_t len = 0;
      for (point j = static_cast<point>(i); !seen[j]; j = img[j]) {
        seen[j] = true;
        ++len;
      }
      l = std::lcm(l, len);
    }
    return l;
  }

  /// Cycle notation with 1-based labels, fixed points omitted.
  std::string to_string() const {
    std::string out;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == i)
        continue;
      out += '(';
      bool first = true;
      for (point j = static_cast<point>(i); !seen[j]; j = images_[j]) {
        seen[j] = true;
        if (!first)
          out += ',';
        out += std::to_string(j + 1);
        first = false;
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

  /// Left-to-right product: compose(p, q)(i) == q(p(i)).
  friend Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree())
      throw DegreeMismatch(p.degree(), q.degree());
    Permutation out;
    out.images_.resize(p.degree());
    for (std::size_t i = 0; i < out.images_.size(); ++i)
      out.images_[i] = q.images_[p.images_[i]];
    return out;
  }

private:
  std::vector<point> images_;
};

inline Permutation operator*(const Permutation& p, const Permutation& q) { return compose(p, q); }

inline CycleType cycle_type(const Permutation& p) { return p.cycle_type(); }

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (point x : p.images()) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

} // namespace dessins
