#pragma once

// Enumeration of dessins (beta an involution) and hypermaps (beta arbitrary)
// of index n, one representative per simultaneous-conjugacy class.
//
// Work is split by the cycle type of alpha, which is a class invariant, so
// every partition deduplicates on its own. For each alpha type we fix one
// representative and run over every beta of each admissible cycle type.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_set>

#include "dessins/dessin.hpp"

namespace dessins {

class ResourceBoundExceeded : public std::runtime_error {
public:
  ResourceBoundExceeded(std::size_t n, std::size_t bound)
      : std::runtime_error("index " + std::to_string(n) + " exceeds the resource bound " + std::to_string(bound) +
                           " (set DESSIN_MAX_INDEX to raise it)"),
        index_(n), bound_(bound) {}
  std::size_t index() const noexcept { return index_; }
  std::size_t bound() const noexcept { return bound_; }

private:
  std::size_t index_, bound_;
};

inline constexpr std::size_t kDefaultMaxIndex = 13;
inline constexpr std::size_t kDefaultMaxHypermapIndex = 9;

/// Resource bound for the given mode; DESSIN_MAX_INDEX overrides both.
inline std::size_t max_index(DessinMode mode) {
  if (const char* env = std::getenv("DESSIN_MAX_INDEX")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return v;
  }
  return mode == DessinMode::preclean ? kDefaultMaxIndex : kDefaultMaxHypermapIndex;
}

struct EnumerationTask {
  std::size_t n = 1;
  DessinMode mode = DessinMode::preclean;
  PassportPattern passport;             // wildcards allowed
  std::optional<Signature> signature;   // genus included
  std::optional<big_int> group_order;
  std::size_t workers = 1;
  std::optional<std::size_t> bound;     // overrides max_index(mode)
};

/// All integer partitions of n as descending cycle types, in decreasing
/// lexicographic order.
inline std::vector<CycleType> partitions(std::size_t n) {
  std::vector<CycleType> out;
  std::vector<std::uint32_t> cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t maxpart) {
    if (left == 0) {
      out.emplace_back(cur);
      return;
    }
    for (std::size_t p = std::min(left, maxpart); p >= 1; --p) {
      cur.push_back(static_cast<std::uint32_t>(p));
      rec(left - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

/// The standard representative of a cycle type: consecutive labels, longest
/// cycle first.
inline Permutation representative(const CycleType& t) {
  std::vector<point> img(t.degree());
  point start = 0;
  for (auto len : t.lengths()) {
    for (point k = 0; k < len; ++k)
      img[start + k] = start + (k + 1) % len;
    start += len;
  }
  return Permutation::from_images(std::move(img));
}

namespace detail {

/// Visits every permutation of the given cycle type (each exactly once).
/// The callback receives the image array, valid only during the call.
class CycleTypeWalker {
public:
  CycleTypeWalker(const CycleType& t, std::function<void(const std::vector<point>&)> visit)
      : n_(t.degree()), img_(n_, kUnset), visit_(std::move(visit)) {
    for (auto len : t.lengths())
      ++remaining_[len];
  }

  void run() { place(0); }

private:
  static constexpr point kUnset = ~point{0};

  void place(point from) {
    while (from < n_ && img_[from] != kUnset)
      ++from;
    if (from == n_) {
      visit_(img_);
      return;
    }
    for (auto& [len, count] : remaining_) {
      if (count == 0)
        continue;
      --count;
      std::vector<point> cycle{from};
      cycle.reserve(len);
      img_[from] = from; // reserve
      extend(cycle, len, from);
      img_[from] = kUnset;
      ++count;
    }
  }

  // cycle holds the points chosen so far; its head is the smallest point
  void extend(std::vector<point>& cycle, std::uint32_t len, point head) {
    if (cycle.size() == len) {
      for (std::size_t i = 0; i < len; ++i)
        img_[cycle[i]] = cycle[(i + 1) % len];
      place(head + 1);
      for (point p : cycle)
        img_[p] = p; // back to reserved; the frames above release them
      return;
    }
    for (point p = head + 1; p < n_; ++p) {
      if (img_[p] != kUnset)
        continue;
      img_[p] = p;
      cycle.push_back(p);
      extend(cycle, len, head);
      cycle.pop_back();
      img_[p] = kUnset;
    }
  }

  std::size_t n_;
  std::vector<point> img_;
  std::map<std::uint32_t, std::size_t> remaining_;
  std::function<void(const std::vector<point>&)> visit_;
};

/// Scratch space for repeated canonical forms of one degree.
class Canonicalizer {
public:
  explicit Canonicalizer(std::size_t n) : n_(n), ai_(n), bi_(n), coder_(n) {}

  /// Canonical code of (alpha, beta) and the number of minimal roots.
  std::size_t run(const point* alpha, const point* beta) {
    for (std::size_t i = 0; i < n_; ++i) {
      ai_[alpha[i]] = static_cast<point>(i);
      bi_[beta[i]] = static_cast<point>(i);
    }
    best_.clear();
    std::size_t minimal = 0;
    for (point r = 0; r < n_; ++r) {
      int c = coder_.encode(alpha, ai_.data(), beta, bi_.data(), r, &best_);
      if (c < 0) {
        best_ = coder_.code();
        minimal = 1;
      } else if (c == 0) {
        ++minimal;
      }
    }
    return minimal;
  }

  const std::vector<point>& code() const noexcept { return best_; }

private:
  std::size_t n_;
  std::vector<point> ai_, bi_;
  RootedCoder coder_;
  std::vector<point> best_;
};

inline bool connected(const point* a, const point* b, std::size_t n, std::vector<point>& stack,
                      std::vector<char>& seen) {
  std::fill(seen.begin(), seen.end(), 0);
  stack.assign(1, 0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    point v = stack.back();
    stack.pop_back();
    for (point w : {a[v], b[v]})
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

inline CycleType cycle_type_of(const std::vector<point>& img, std::vector<char>& seen) {
  std::fill(seen.begin(), seen.end(), 0);
  std::vector<std::uint32_t> lens;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (seen[i])
      continue;
    std::uint32_t l = 0;
    for (point j = static_cast<point>(i); !seen[j]; j = img[j]) {
      seen[j] = 1;
      ++l;
    }
    lens.push_back(l);
  }
  return CycleType(std::move(lens));
}

struct PartitionResult {
  std::vector<std::pair<std::string, Dessin>> classes; // sorted by form
  std::size_t count = 0;
  std::uint64_t transitive_pairs = 0; // with alpha fixed to the representative
};

inline bool is_involution_type(const CycleType& t) {
  return std::all_of(t.lengths().begin(), t.lengths().end(), [](std::uint32_t l) { return l <= 2; });
}

/// One alpha cycle type.
inline PartitionResult run_partition(const EnumerationTask& task, const CycleType& alpha_type, bool materialize) {
  const std::size_t n = task.n;
  PartitionResult res;
  Permutation alpha = representative(alpha_type);
  const point* a = alpha.images().data();
  std::vector<point> gamma_img(n), stack;
  std::vector<char> seen(n);
  Canonicalizer canon(n);
  std::unordered_set<std::string> forms;
  std::map<std::string, Dessin> kept;

  bool need_gamma = task.passport.gamma.has_value() || task.signature.has_value();

  for (const auto& beta_type : partitions(n)) {
    if (task.mode == DessinMode::preclean && !is_involution_type(beta_type))
      continue;
    if (task.passport.beta && *task.passport.beta != beta_type)
      continue;
    if (task.signature && task.signature->white != beta_type.cycle_count())
      continue;
    CycleTypeWalker walker(beta_type, [&](const std::vector<point>& b) {
      if (!connected(a, b.data(), n, stack, seen))
        return;
      ++res.transitive_pairs;
      if (need_gamma) {
        // gamma = (alpha beta)^-1, i.e. gamma(b(a(i))) = i
        for (std::size_t i = 0; i < n; ++i)
          gamma_img[b[a[i]]] = static_cast<point>(i);
        CycleType ct = cycle_type_of(gamma_img, seen);
        if (task.passport.gamma && *task.passport.gamma != ct)
          return;
        if (task.signature) {
          long long chi = static_cast<long long>(alpha_type.cycle_count() + beta_type.cycle_count() +
                                                 ct.cycle_count()) -
                          static_cast<long long>(n);
          if (task.signature->faces != ct.cycle_count() ||
              2 - chi != 2 * static_cast<long long>(task.signature->genus))
            return;
        }
      }
      canon.run(a, b.data());
      std::string form = code_to_bytes(n, canon.code());
      if (forms.count(form))
        return;
      if (task.group_order) {
        PermGroup g(n, {alpha, Permutation::from_images(b)});
        if (g.order() != *task.group_order) {
          forms.insert(std::move(form)); // class invariant, reject once
          return;
        }
      }
      if (materialize) {
        const auto& code = canon.code();
        std::vector<point> ca(n), cb(n);
        for (std::size_t k = 0; k < n; ++k) {
          ca[k] = code[2 * k];
          cb[k] = code[2 * k + 1];
        }
        kept.emplace(form, Dessin(Permutation::from_images(std::move(ca)), Permutation::from_images(std::move(cb)),
                                  task.mode));
      }
      forms.insert(std::move(form));
      ++res.count;
    });
    walker.run();
  }
  for (auto& [f, d] : kept)
    res.classes.emplace_back(f, std::move(d));
  return res;
}

inline void check_task(const EnumerationTask& task) {
  if (task.n == 0)
    throw std::invalid_argument("index must be at least 1");
  std::size_t bound = task.bound.value_or(max_index(task.mode));
  if (task.n > bound)
    throw ResourceBoundExceeded(task.n, bound);
  if (auto d = task.passport.degree(); d && *d != task.n)
    throw std::invalid_argument("passport degree " + std::to_string(*d) + " differs from index " +
                                std::to_string(task.n));
  if (task.workers == 0)
    throw std::invalid_argument("worker count must be at least 1");
}

inline std::vector<PartitionResult> run_all(const EnumerationTask& task, bool materialize) {
  check_task(task);
  std::vector<CycleType> types;
  for (auto& t : partitions(task.n)) {
    if (task.passport.alpha && *task.passport.alpha != t)
      continue;
    if (task.signature && task.signature->black != t.cycle_count())
      continue;
    types.push_back(std::move(t));
  }
  std::vector<PartitionResult> results(types.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    for (std::size_t i = next++; i < types.size(); i = next++) {
      try {
        results[i] = run_partition(task, types[i], materialize);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  std::size_t w = std::min(task.workers, std::max<std::size_t>(types.size(), 1));
  if (w <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < w; ++i)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);
  return results;
}

} // namespace detail

/// Class representatives in canonical labeling, sorted by canonical form.
inline std::vector<Dessin> enumerate(const EnumerationTask& task) {
  auto parts = detail::run_all(task, true);
  std::vector<std::pair<std::string, Dessin>> all;
  for (auto& p : parts)
    for (auto& c : p.classes)
      all.push_back(std::move(c));
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Dessin> out;
  out.reserve(all.size());
  for (auto& c : all)
    out.push_back(std::move(c.second));
  return out;
}

inline std::uint64_t count(const EnumerationTask& task) {
  std::uint64_t total = 0;
  for (const auto& p : detail::run_all(task, false))
    total += p.count;
  return total;
}

/// Transitive pairs (alpha, beta) of degree n in the given mode, over all
/// of S_n x S_n, obtained from the per-partition counts by class sizes.
/// Filters other than the mode are ignored.
inline big_int transitive_pair_count(std::size_t n, DessinMode mode) {
  EnumerationTask task;
  task.n = n;
  task.mode = mode;
  task.bound = n;
  auto parts = detail::run_all(task, false);
  auto types = partitions(n);
  big_int fact = 1;
  for (std::size_t i = 2; i <= n; ++i)
    fact *= i;
  big_int total = 0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    // class size of a cycle type: n! / prod(l^m m!)
    big_int z = 1;
    std::map<std::uint32_t, std::uint32_t> mult;
    for (auto l : types[i].lengths())
      ++mult[l];
    for (auto [l, m] : mult) {
      for (std::uint32_t k = 0; k < m; ++k)
        z *= l;
      for (std::uint32_t k = 2; k <= m; ++k)
        z *= k;
    }
    total += fact / z * parts[i].transitive_pairs;
  }
  return total;
}

/// All classes with a matching passport (wildcards allowed) and, optionally,
/// a given group order.
inline std::vector<Dessin> find_by_passport(std::size_t n, const PassportPattern& passport,
                                            std::optional<big_int> group_order = std::nullopt,
                                            DessinMode mode = DessinMode::preclean, std::size_t workers = 1) {
  EnumerationTask task;
  task.n = n;
  task.mode = mode;
  task.passport = passport;
  task.group_order = std::move(group_order);
  task.workers = workers;
  // a pinned beta type makes the search far smaller than full enumeration
  if (passport.beta)
    task.bound = std::max(n, max_index(mode));
  return enumerate(task);
}

} // namespace dessins
