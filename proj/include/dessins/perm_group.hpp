#pragma once

// Permutation groups given by generators, stored as a base and strong
// generating set built with deterministic Schreier-Sims.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dessins/perm.hpp"

namespace dessins {

using big_int = boost::multiprecision::cpp_int;

/// Default cap on the number of group elements enumerated for a fingerprint.
inline constexpr std::uint64_t kFingerprintElementCap = 1'000'000;

class PermGroup {
public:
  struct Level {
    point base;
    std::vector<Permutation> strong; // generators of the stabilizer of base[0..i-1]
    std::vector<point> orbit;
    // transversal[p] maps base to p; empty when p is not in the orbit
    std::vector<std::optional<Permutation>> transversal;
  };

  explicit PermGroup(std::size_t degree = 0) : degree_(degree) {}

  /// An empty generator list gives the trivial group of that degree.
  PermGroup(std::size_t degree, std::vector<Permutation> generators, std::span<const point> base_prefix = {})
      : degree_(degree) {
    for (auto& g : generators) {
      if (g.degree() != degree)
        throw DegreeMismatch(degree, g.degree());
      if (!g.is_identity())
        generators_.push_back(std::move(g));
    }
    build(base_prefix);
  }

  static PermGroup from_generators(std::vector<Permutation> gens) {
    if (gens.empty())
      throw std::invalid_argument("from_generators needs at least one generator to fix the degree");
    std::size_t n = gens.front().degree();
    return PermGroup(n, std::move(gens));
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Permutation>& generators() const noexcept { return generators_; }
  const std::vector<Level>& levels() const noexcept { return levels_; }

  std::vector<point> base() const {
    std::vector<point> b;
    for (const auto& l : levels_)
      b.push_back(l.base);
    return b;
  }

  /// Product of the fundamental orbit lengths.
  big_int order() const { return order_from(0); }

  big_int order_from(std::size_t level) const {
    big_int o = 1;
    for (std::size_t i = level; i < levels_.size(); ++i)
      o *= levels_[i].orbit.size();
    return o;
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_)
      return false;
    auto [residue, depth] = strip(g, 0);
    return depth == levels_.size() && residue.is_identity();
  }

  bool is_trivial() const {
    for (const auto& l : levels_)
      if (l.orbit.size() > 1)
        return false;
    return true;
  }

  /// Orbit of p under the whole group, sorted.
  std::vector<point> orbit(point p) const {
    std::vector<bool> seen(degree_, false);
    std::vector<point> out{p};
    seen[p] = true;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& g : generators_) {
        point q = g(out[i]);
        if (!seen[q]) {
          seen[q] = true;
          out.push_back(q);
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_transitive() const { return degree_ == 0 || orbit(0).size() == degree_; }

  /// Group elements fixing every base point of levels [0, level) as a group
  /// in its own right; the chain below `level` is reused as its BSGS.
  PermGroup tail(std::size_t level) const {
    PermGroup out(degree_);
    if (level < levels_.size()) {
      out.generators_ = levels_[level].strong;
      out.levels_.assign(levels_.begin() + static_cast<std::ptrdiff_t>(level), levels_.end());
    }
    out.drop_trivial_tail();
    return out;
  }

  /// Image of the group under x -> sigma^-1 x sigma, chain conjugated along.
  PermGroup conjugate(const Permutation& sigma) const {
    PermGroup out(degree_);
    for (const auto& g : generators_)
      out.generators_.push_back(g.conjugate_by(sigma));
    for (const auto& l : levels_) {
      Level c;
      c.base = sigma(l.base);
      for (const auto& s : l.strong)
        c.strong.push_back(s.conjugate_by(sigma));
      c.transversal.assign(degree_, std::nullopt);
      for (point p : l.orbit) {
        point q = sigma(p);
        c.orbit.push_back(q);
        c.transversal[q] = l.transversal[p]->conjugate_by(sigma);
      }
      out.levels_.push_back(std::move(c));
    }
    return out;
  }

  /// Calls visit(g) for every element; stops early if visit returns false.
  /// Elements are produced as u_{k-1} * ... * u_0 over transversal choices.
  void for_each_element(const std::function<bool(const Permutation&)>& visit) const {
    Permutation id(degree_);
    if (levels_.empty()) {
      visit(id);
      return;
    }
    enumerate_from(levels_.size(), id, visit);
  }

  /// Like for_each_element, on raw image arrays and without early exit.
  void for_each_image(const std::function<void(const point*)>& visit) const {
    std::vector<std::vector<point>> acc(levels_.size() + 1, std::vector<point>(degree_));
    std::iota(acc.back().begin(), acc.back().end(), point{0});
    // acc[i] holds u_{k-1} * ... * u_i
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == 0) {
        visit(acc[0].data());
        return;
      }
      const Level& l = levels_[i - 1];
      const auto& prev = acc[i];
      auto& cur = acc[i - 1];
      for (point p : l.orbit) {
        const auto& u = l.transversal[p]->images();
        for (std::size_t x = 0; x < degree_; ++x)
          cur[x] = u[prev[x]];
        rec(i - 1);
      }
    };
    rec(levels_.size());
  }

  /// Pointwise stabilizer of `points`, by rebuilding the chain with those
  /// points as base prefix.
  PermGroup pointwise_stabilizer(std::span<const point> points) const {
    std::vector<point> prefix;
    for (point p : points) {
      if (p >= degree_)
        throw std::out_of_range("point " + std::to_string(p + 1) + " out of range");
      if (std::find(prefix.begin(), prefix.end(), p) == prefix.end())
        prefix.push_back(p);
    }
    PermGroup rebased(degree_, generators_, prefix);
    return rebased.tail(prefix.size());
  }

  /// Some g with g(a) == b, if any.
  std::optional<Permutation> transporter(point a, point b) const {
    PermGroup rebased(degree_, generators_, std::span<const point>(&a, 1));
    if (rebased.levels_.empty())
      return a == b ? std::optional<Permutation>(Permutation(degree_)) : std::nullopt;
    return rebased.levels_.front().transversal[b];
  }

  /// Residue of sifting g from `level`, with the depth reached.
  std::pair<Permutation, std::size_t> strip(Permutation g, std::size_t level) const {
    for (std::size_t i = level; i < levels_.size(); ++i) {
      point b = g(levels_[i].base);
      const auto& u = levels_[i].transversal[b];
      if (!u)
        return {std::move(g), i};
      g = g * u->inverse();
    }
    return {std::move(g), levels_.size()};
  }

private:
  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Level> levels_;

  void enumerate_from(std::size_t depth, const Permutation& acc,
                      const std::function<bool(const Permutation&)>& visit) const {
    // acc holds u_{k-1} * ... * u_{depth}
    if (depth == 0) {
      visit(acc);
      return;
    }
    bool keep_going = true;
    enumerate_levels(depth - 1, acc, visit, keep_going);
  }

  void enumerate_levels(std::size_t i, const Permutation& acc,
                        const std::function<bool(const Permutation&)>& visit, bool& keep_going) const {
    for (point p : levels_[i].orbit) {
      if (!keep_going)
        return;
      Permutation next = acc * *levels_[i].transversal[p];
      if (i == 0) {
        keep_going = visit(next);
      } else {
        enumerate_levels(i - 1, next, visit, keep_going);
      }
    }
  }

  void recompute_orbit(Level& l) const {
    l.orbit.assign(1, l.base);
    l.transversal.assign(degree_, std::nullopt);
    l.transversal[l.base] = Permutation(degree_);
    for (std::size_t i = 0; i < l.orbit.size(); ++i) {
      point p = l.orbit[i];
      for (const auto& s : l.strong) {
        point q = s(p);
        if (!l.transversal[q]) {
          l.transversal[q] = *l.transversal[p] * s;
          l.orbit.push_back(q);
        }
      }
    }
  }

  point first_moved(const Permutation& g) const {
    for (point p = 0; p < degree_; ++p)
      if (!g.fixes(p))
        return p;
    throw std::logic_error("identity has no moved point");
  }

  void add_level(point b) {
    Level l;
    l.base = b;
    levels_.push_back(std::move(l));
  }

  void build(std::span<const point> base_prefix) {
    levels_.clear();
    for (point b : base_prefix)
      add_level(b);
    // Every non-identity generator must move some base point.
    for (const auto& g : generators_) {
      bool moves = false;
      for (const auto& l : levels_)
        if (!g.fixes(l.base)) {
          moves = true;
          break;
        }
      if (!moves)
        add_level(first_moved(g));
    }
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      for (const auto& g : generators_) {
        bool fixes_prefix = true;
        for (std::size_t j = 0; j < i; ++j)
          if (!g.fixes(levels_[j].base)) {
            fixes_prefix = false;
            break;
          }
        if (fixes_prefix)
          levels_[i].strong.push_back(g);
      }
      recompute_orbit(levels_[i]);
    }

    std::size_t i = levels_.size();
    while (i > 0) {
      std::size_t lvl = i - 1;
      bool restarted = false;
      // copies: both lists may grow while we scan
      auto orbit = levels_[lvl].orbit;
      auto strong = levels_[lvl].strong;
      for (std::size_t oi = 0; oi < orbit.size() && !restarted; ++oi) {
        point beta = orbit[oi];
        for (const auto& s : strong) {
          const Permutation& u_beta = *levels_[lvl].transversal[beta];
          Permutation g = u_beta * s;
          point gamma = g(levels_[lvl].base);
          Permutation schreier = g * levels_[lvl].transversal[gamma]->inverse();
          if (schreier.is_identity())
            continue;
          auto [h, depth] = strip(schreier, lvl + 1);
          if (depth < levels_.size() || !h.is_identity()) {
            if (depth == levels_.size())
              add_level(first_moved(h));
            for (std::size_t l = lvl + 1; l <= depth; ++l) {
              levels_[l].strong.push_back(h);
              recompute_orbit(levels_[l]);
            }
            i = depth + 1;
            restarted = true;
            break;
          }
        }
      }
      if (!restarted)
        --i;
    }
    // Trailing levels with trivial orbits and no generators carry nothing,
    // but prefix levels are kept so pointwise stabilizers can index them.
    while (levels_.size() > base_prefix.size() && levels_.back().orbit.size() == 1 && levels_.back().strong.empty())
      levels_.pop_back();
  }

  void drop_trivial_tail() {
    while (!levels_.empty() && levels_.back().orbit.size() == 1)
      levels_.pop_back();
    // leading trivial levels are harmless but make base() noisy
    std::size_t lead = 0;
    while (lead < levels_.size() && levels_[lead].orbit.size() == 1)
      ++lead;
    if (lead > 0 && lead < levels_.size())
      levels_.erase(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(lead));
    else if (lead == levels_.size())
      levels_.clear();
  }
};

inline PermGroup group_from_generators(std::size_t degree, std::vector<Permutation> gens) {
  return PermGroup(degree, std::move(gens));
}

/// (order, how many elements have each element order); the counts are
/// omitted once the order exceeds the cap.
struct Fingerprint {
  big_int order;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> order_counts; // ascending element order
  bool exact = true;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  friend bool operator<(const Fingerprint& a, const Fingerprint& b) {
    if (a.order != b.order)
      return a.order < b.order;
    if (a.exact != b.exact)
      return a.exact < b.exact;
    return a.order_counts < b.order_counts;
  }

  std::string to_string() const {
    std::string out = "order " + order.str();
    if (!exact)
      return out + " (element orders not computed)";
    out += " [";
    bool first = true;
    for (auto [o, c] : order_counts) {
      if (!first)
        out += ' ';
      out += std::to_string(o) + ':' + std::to_string(c);
      first = false;
    }
    return out + "]";
  }
};

enum class StabilizerMode { pointwise, setwise };

/// A subgroup of a parent group, carrying its own BSGS.
class Subgroup {
public:
  Subgroup(std::shared_ptr<const PermGroup> parent, PermGroup group)
      : parent_(std::move(parent)), group_(std::move(group)) {
    if (!parent_)
      throw std::invalid_argument("subgroup without parent");
  }

  const PermGroup& parent() const noexcept { return *parent_; }
  const std::shared_ptr<const PermGroup>& parent_ptr() const noexcept { return parent_; }
  const PermGroup& group() const noexcept { return group_; }
  const std::vector<Permutation>& generators() const noexcept { return group_.generators(); }
  big_int order() const { return group_.order(); }
  bool contains(const Permutation& g) const { return group_.contains(g); }

  /// Points fixed by every element.
  std::vector<point> fixed_points() const {
    std::vector<point> out;
    for (point p = 0; p < group_.degree(); ++p) {
      bool fixed = true;
      for (const auto& g : group_.generators())
        if (!g.fixes(p)) {
          fixed = false;
          break;
        }
      if (fixed)
        out.push_back(p);
    }
    return out;
  }

  Fingerprint fingerprint(std::uint64_t cap = kFingerprintElementCap) const {
    Fingerprint fp;
    fp.order = order();
    if (fp.order > cap) {
      fp.exact = false;
      return fp;
    }
    const std::size_t n = group_.degree();
    std::map<std::uint64_t, std::uint64_t> hist;
    group_.for_each_image([&](const point* img) { ++hist[Permutation::order_of(img, n)]; });
    fp.order_counts.assign(hist.begin(), hist.end());
    return fp;
  }

private:
  std::shared_ptr<const PermGroup> parent_;
  PermGroup group_;
};

/// Equality as subgroups (mutual containment of generators), not isomorphism.
inline bool subgroup_equal(const Subgroup& a, const Subgroup& b) {
  if (a.parent_ptr() != b.parent_ptr() && a.parent().generators() != b.parent().generators())
    throw std::invalid_argument("subgroups of different parent groups");
  if (a.order() != b.order())
    return false;
  for (const auto& g : a.generators())
    if (!b.contains(g))
      return false;
  return true;
}

inline Subgroup pointwise_stabilizer(const std::shared_ptr<const PermGroup>& g, std::span<const point> points) {
  return Subgroup(g, g->pointwise_stabilizer(points));
}

/// Elements mapping the set {a, b} to itself.
inline Subgroup setwise_pair_stabilizer(const std::shared_ptr<const PermGroup>& g, point a, point b) {
  std::array<point, 2> pts{a, b};
  PermGroup pointwise = g->pointwise_stabilizer(pts);
  if (a == b)
    return Subgroup(g, std::move(pointwise));
  // A swap exists iff a -> b by some u, and u^-1(a) lies in the orbit of b
  // under the stabilizer of a; then s * u swaps them for the matching s.
  PermGroup rebased(g->degree(), g->generators(), pts);
  const auto& top = rebased.levels();
  std::optional<Permutation> swap;
  if (!top.empty() && top[0].transversal[b]) {
    const Permutation& u = *top[0].transversal[b];
    point target = u.inverse()(a);
    if (target == b)
      swap = u;
    else if (top.size() > 1 && top[1].base == b && top[1].transversal[target])
      swap = *top[1].transversal[target] * u;
  }
  if (!swap)
    return Subgroup(g, std::move(pointwise));
  std::vector<Permutation> gens = pointwise.generators();
  gens.push_back(*swap);
  return Subgroup(g, PermGroup(g->degree(), std::move(gens)));
}

inline Subgroup stabilizer_of_pair(const std::shared_ptr<const PermGroup>& g, point a, point b,
                                   StabilizerMode mode = StabilizerMode::pointwise) {
  if (mode == StabilizerMode::setwise)
    return setwise_pair_stabilizer(g, a, b);
  std::array<point, 2> pts{a, b};
  return pointwise_stabilizer(g, pts);
}

} // namespace dessins
