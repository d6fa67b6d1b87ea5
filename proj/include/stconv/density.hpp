#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stconv/primes.hpp"

namespace stconv {

/// Exact nonnegative rational, always stored in lowest terms.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational of(std::uint64_t n, std::uint64_t d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    std::uint64_t g = std::gcd(n, d);
    return {n / g, d / g};
  }
  static Rational zero() { return {0, 1}; }
  static Rational one() { return {1, 1}; }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }

  /// "zero" for 0, otherwise "p/q" (or "1" for one).
  std::string describe() const {
    if (num == 0) return "zero";
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
};

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

enum class SetKind { primes, multiples, squares, finite, complement, set_union, intersection, custom };

/// A subset K of the positive integers, described structurally so that
/// counting can use closed forms where they exist.
class IndexSet {
 public:
  using Predicate = std::function<bool(std::uint64_t)>;

  static IndexSet primes() {
    auto node = make(SetKind::primes, "primes");
    node->density = Rational::zero();
    return IndexSet(std::move(node));
  }

  static IndexSet multiples(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("multiples(0) is not a subset of N+");
    auto node = make(SetKind::multiples, "multiples(" + std::to_string(m) + ")");
    node->modulus = m;
    node->density = Rational::of(1, m);
    return IndexSet(std::move(node));
  }

  static IndexSet squares() {
    auto node = make(SetKind::squares, "squares");
    node->density = Rational::zero();
    return IndexSet(std::move(node));
  }

  static IndexSet finite(std::vector<std::uint64_t> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && members.front() == 0)
      throw std::invalid_argument("finite set members must be >= 1");
    std::string label = "finite(";
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) label += ",";
      label += std::to_string(members[i]);
    }
    label += ")";
    auto node = make(SetKind::finite, std::move(label));
    node->members = std::move(members);
    node->density = Rational::zero();
    return IndexSet(std::move(node));
  }

  static IndexSet complement(const IndexSet& inner) {
    auto node = make(SetKind::complement, "complement(" + inner.descriptor() + ")");
    node->left = inner.node_;
    if (auto q = inner.analytic_density()) node->density = Rational::of(q->den - q->num, q->den);
    return IndexSet(std::move(node));
  }

  static IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    auto node = make(SetKind::set_union, "union(" + a.descriptor() + "," + b.descriptor() + ")");
    node->left = a.node_;
    node->right = b.node_;
    auto qa = a.analytic_density();
    auto qb = b.analytic_density();
    if (qa && qb && qa->is_zero() && qb->is_zero()) node->density = Rational::zero();
    if ((qa && *qa == Rational::one()) || (qb && *qb == Rational::one()))
      node->density = Rational::one();
    return IndexSet(std::move(node));
  }

  static IndexSet intersection(const IndexSet& a, const IndexSet& b) {
    auto node =
        make(SetKind::intersection, "intersection(" + a.descriptor() + "," + b.descriptor() + ")");
    node->left = a.node_;
    node->right = b.node_;
    auto qa = a.analytic_density();
    auto qb = b.analytic_density();
    if ((qa && qa->is_zero()) || (qb && qb->is_zero())) node->density = Rational::zero();
    return IndexSet(std::move(node));
  }

  /// Arbitrary predicate. The label is echoed in reports but is not parseable.
  static IndexSet custom(std::string label, Predicate predicate,
                         std::optional<Rational> density = std::nullopt) {
    auto node = make(SetKind::custom, std::move(label));
    node->predicate = std::move(predicate);
    node->density = density;
    return IndexSet(std::move(node));
  }

  SetKind kind() const noexcept { return node_->kind; }
  const std::string& descriptor() const noexcept { return node_->label; }
  std::optional<Rational> analytic_density() const { return node_->density; }
  std::uint64_t modulus() const noexcept { return node_->modulus; }
  const std::vector<std::uint64_t>& members() const noexcept { return node_->members; }
  IndexSet left() const { return IndexSet(node_->left); }
  IndexSet right() const { return IndexSet(node_->right); }

  bool contains(std::uint64_t n) const { return membership(n)(n); }

  /// Membership test prepared for queries up to `horizon` (primes pull the
  /// sieve once instead of per query).
  Predicate membership(std::uint64_t horizon) const {
    switch (node_->kind) {
      case SetKind::primes: {
        auto table = prime_table(std::max<std::uint64_t>(horizon, 2));
        return [table](std::uint64_t n) {
          return n <= table->limit() ? table->is_prime(n) : stconv::is_prime(n);
        };
      }
      case SetKind::multiples: {
        std::uint64_t m = node_->modulus;
        return [m](std::uint64_t n) { return n % m == 0; };
      }
      case SetKind::squares:
        return [](std::uint64_t n) {
          auto r = isqrt(n);
          return r * r == n;
        };
      case SetKind::finite: {
        auto node = node_;
        return [node](std::uint64_t n) {
          return std::binary_search(node->members.begin(), node->members.end(), n);
        };
      }
      case SetKind::complement: {
        auto inner = left().membership(horizon);
        return [inner](std::uint64_t n) { return !inner(n); };
      }
      case SetKind::set_union: {
        auto a = left().membership(horizon);
        auto b = right().membership(horizon);
        return [a, b](std::uint64_t n) { return a(n) || b(n); };
      }
      case SetKind::intersection: {
        auto a = left().membership(horizon);
        auto b = right().membership(horizon);
        return [a, b](std::uint64_t n) { return a(n) && b(n); };
      }
      case SetKind::custom:
        return node_->predicate;
    }
    return {};
  }

 private:
  struct Node {
    SetKind kind;
    std::string label;
    std::uint64_t modulus = 0;
    std::vector<std::uint64_t> members;
    std::shared_ptr<const Node> left, right;
    Predicate predicate;
    std::optional<Rational> density;
  };

  explicit IndexSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<Node> make(SetKind kind, std::string label) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->label = std::move(label);
    return node;
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

inline bool has_closed_count(const IndexSet& set) {
  switch (set.kind()) {
    case SetKind::primes:
    case SetKind::multiples:
    case SetKind::squares:
    case SetKind::finite:
      return true;
    case SetKind::complement:
      return has_closed_count(set.left());
    default:
      return false;
  }
}

inline std::uint64_t closed_count(const IndexSet& set, std::uint64_t n) {
  switch (set.kind()) {
    case SetKind::primes:
      return prime_count(n);
    case SetKind::multiples:
      return n / set.modulus();
    case SetKind::squares:
      return isqrt(n);
    case SetKind::finite: {
      const auto& m = set.members();
      return static_cast<std::uint64_t>(std::upper_bound(m.begin(), m.end(), n) - m.begin());
    }
    case SetKind::complement:
      return n - closed_count(set.left(), n);
    default:
      throw std::logic_error("no closed-form count for " + set.descriptor());
  }
}

}  // namespace detail

/// |{k <= n : k in K}|, exact.
inline std::uint64_t count(const IndexSet& set, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("count requires n >= 1");
  if (detail::has_closed_count(set)) return detail::closed_count(set, n);
  auto member = set.membership(n);
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (member(k)) ++c;
  return c;
}

/// Counts at every checkpoint (strictly increasing). Predicate-backed sets are
/// swept once to the last checkpoint, so each k is tested exactly once.
inline std::vector<std::uint64_t> counts_at(const IndexSet& set,
                                            const std::vector<std::uint64_t>& checkpoints) {
  std::vector<std::uint64_t> out;
  out.reserve(checkpoints.size());
  if (checkpoints.empty()) return out;
  if (detail::has_closed_count(set)) {
    for (auto n : checkpoints) out.push_back(detail::closed_count(set, n));
    return out;
  }
  auto member = set.membership(checkpoints.back());
  std::uint64_t c = 0;
  std::uint64_t k = 1;
  for (auto n : checkpoints) {
    for (; k <= n; ++k)
      if (member(k)) ++c;
    out.push_back(c);
  }
  return out;
}

/// Checkpoint schedule for density sweeps.
struct Schedule {
  enum class Kind { geometric, linear };
  Kind kind = Kind::geometric;
  std::uint64_t param = 10;

  static Schedule geometric(std::uint64_t base) { return {Kind::geometric, base}; }
  static Schedule linear(std::uint64_t step) { return {Kind::linear, step}; }

  std::string describe() const {
    return (kind == Kind::geometric ? "geometric(" : "linear(") + std::to_string(param) + ")";
  }

  /// base, base^2, ... (or step, 2*step, ...) strictly below horizon, then horizon.
  std::vector<std::uint64_t> checkpoints(std::uint64_t horizon) const {
    if (param == 0 || (kind == Kind::geometric && param < 2))
      throw std::invalid_argument("degenerate schedule " + describe());
    std::vector<std::uint64_t> out;
    std::uint64_t n = param;
    while (n < horizon) {
      out.push_back(n);
      if (kind == Kind::geometric) {
        if (n > horizon / param) break;
        n *= param;
      } else {
        n += param;
      }
    }
    out.push_back(horizon);
    if (out.size() < 2)
      throw std::invalid_argument("schedule " + describe() + " yields fewer than 2 checkpoints up to " +
                                  std::to_string(horizon));
    return out;
  }
};

struct DensityProfile {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::uint64_t> counts;

  std::size_t size() const noexcept { return checkpoints.size(); }
  std::uint64_t horizon() const { return checkpoints.back(); }
  double ratio(std::size_t i) const {
    return static_cast<double>(counts[i]) / static_cast<double>(checkpoints[i]);
  }
  std::vector<double> ratios() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = ratio(i);
    return out;
  }
  double final_ratio() const { return ratio(size() - 1); }
};

inline DensityProfile profile_at(const IndexSet& set, std::vector<std::uint64_t> checkpoints) {
  DensityProfile p;
  p.counts = counts_at(set, checkpoints);
  p.checkpoints = std::move(checkpoints);
  return p;
}

inline DensityProfile density_profile(const IndexSet& set, std::uint64_t horizon,
                                      Schedule schedule = Schedule::geometric(10)) {
  if (horizon < 2) throw std::invalid_argument("density_profile requires horizon >= 2");
  return profile_at(set, schedule.checkpoints(horizon));
}

enum class Decision { confirmed, refuted, inconclusive };

inline const char* to_string(Decision d) {
  switch (d) {
    case Decision::confirmed: return "confirmed";
    case Decision::refuted: return "refuted";
    case Decision::inconclusive: return "inconclusive";
  }
  return "?";
}

struct DensityVerdict {
  DensityProfile profile;
  Rational target;
  double tolerance = 0.01;
  Decision decision = Decision::inconclusive;
  /// First checkpoint from which |d_i - target| > tolerance holds through the end.
  std::optional<std::uint64_t> witness;

  std::uint64_t horizon() const { return profile.horizon(); }
};

/// Three-valued finite-horizon decision on "delta(K) = target".
///
/// Confirmed: final deviation <= tolerance and the last ceil(r/3) checkpoints
/// all lie within 2*tolerance. Refuted: final deviation >= 2*tolerance and the
/// deviation does not drop by more than `tolerance` between consecutive
/// checkpoints of that window.
inline DensityVerdict density_verdict(const DensityProfile& profile, Rational target,
                                      double tolerance) {
  if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  if (profile.size() == 0) throw std::invalid_argument("empty density profile");
  const std::size_t r = profile.size();
  const std::size_t window = (r + 2) / 3;
  const double t = target.value();
  std::vector<double> dev(r);
  for (std::size_t i = 0; i < r; ++i) dev[i] = std::abs(profile.ratio(i) - t);

  DensityVerdict v{profile, target, tolerance, Decision::inconclusive, std::nullopt};
  bool window_close = true;
  bool window_rising = true;
  for (std::size_t i = r - window; i < r; ++i) {
    if (dev[i] > 2 * tolerance) window_close = false;
    if (i > r - window && dev[i] < dev[i - 1] - tolerance) window_rising = false;
  }
  if (dev[r - 1] <= tolerance && window_close)
    v.decision = Decision::confirmed;
  else if (dev[r - 1] >= 2 * tolerance && window_rising)
    v.decision = Decision::refuted;

  if (dev[r - 1] > tolerance) {
    std::size_t i = r - 1;
    while (i > 0 && dev[i - 1] > tolerance) --i;
    v.witness = profile.checkpoints[i];
  }
  return v;
}

}  // namespace stconv
