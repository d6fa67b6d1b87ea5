#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stconv/density.hpp"
#include "stconv/error.hpp"
#include "stconv/format.hpp"
#include "stconv/primes.hpp"
#include "stconv/spaces.hpp"

namespace stconv {

inline constexpr std::uint64_t kDefaultSubsequenceCap = 100'000'000;

/// A deterministic sequence n -> x_n (n >= 1) of elements of one normed space.
///
/// Besides random access, a sequence may expose its increments
/// x_n - x_{n-1} (x_0 = 0). Sweeps over long c00 sequences use them to keep
/// each step proportional to the size of the change instead of the support.
class SequenceSpec {
 public:
  using Generator = std::function<SpaceElement(std::uint64_t)>;
  using Factor = std::function<double(std::uint64_t)>;

  SequenceSpec(std::string label, Space space, Generator generator, Generator delta = {},
               std::optional<std::uint64_t> seed = std::nullopt)
  {
    auto impl = std::make_shared<Impl>();
    impl->label = std::move(label);
    impl->space = space;
    impl->norm = space.is_dense() ? Norm::lp(2) : Norm::sup();
    impl->generator = std::move(generator);
    impl->delta = std::move(delta);
    impl->seed = seed;
    impl_ = std::move(impl);
  }

  SpaceElement operator()(std::uint64_t n) const { return impl_->generator(n); }
  SpaceElement at(std::uint64_t n) const { return impl_->generator(n); }

  bool has_delta() const noexcept { return static_cast<bool>(impl_->delta); }
  SpaceElement delta(std::uint64_t n) const { return impl_->delta(n); }

  const std::string& label() const noexcept { return impl_->label; }
  Space space() const noexcept { return impl_->space; }
  Norm norm() const noexcept { return impl_->norm; }
  std::optional<std::uint64_t> seed() const noexcept { return impl_->seed; }

  /// Same sequence measured in a different norm (dense spaces only for p-norms).
  SequenceSpec with_norm(Norm nrm) const {
    if (!impl_->space.is_dense() && nrm.kind != Norm::Kind::sup)
      throw SpaceMismatch("sparse sequences carry the sup norm");
    auto copy = std::make_shared<Impl>(*impl_);
    copy->norm = nrm;
    return SequenceSpec(std::move(copy));
  }

  /// Set when x_n = factor(n) * base_n. Norm traces against the origin use it
  /// to avoid materialising large elements.
  const SequenceSpec* scaled_base() const noexcept {
    return impl_->scaled_base ? &*impl_->scaled_base : nullptr;
  }
  double scale_factor(std::uint64_t n) const { return impl_->factor(n); }

  SequenceSpec with_scaling(SequenceSpec base, Factor factor) const {
    auto copy = std::make_shared<Impl>(*impl_);
    copy->scaled_base = std::make_shared<SequenceSpec>(std::move(base));
    copy->factor = std::move(factor);
    return SequenceSpec(std::move(copy));
  }

 private:
  struct Impl {
    std::string label;
    Space space;
    Norm norm;
    Generator generator;
    Generator delta;
    std::optional<std::uint64_t> seed;
    std::shared_ptr<const SequenceSpec> scaled_base;
    Factor factor;
  };

  explicit SequenceSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

/// Scalar magnitude rule n -> m(n) for spike sequences.
struct Magnitude {
  std::string label;
  std::function<double(std::uint64_t)> fn;

  double operator()(std::uint64_t n) const { return fn(n); }

  static Magnitude linear() {
    return {"n", [](std::uint64_t n) { return static_cast<double>(n); }};
  }
  static Magnitude constant(double c) {
    return {format_number(c), [c](std::uint64_t) { return c; }};
  }
  static Magnitude power(double p) {
    return {"n^" + format_number(p),
            [p](std::uint64_t n) { return std::pow(static_cast<double>(n), p); }};
  }
  static Magnitude square_root() {
    return {"sqrt(n)", [](std::uint64_t n) { return std::sqrt(static_cast<double>(n)); }};
  }
};

// --- named constructions -----------------------------------------------------

/// x_n = (1, 1/2, ..., 1/n, 0, ...) in c00.
inline SequenceSpec harmonic_prefix_sequence() {
  auto gen = [](std::uint64_t n) {
    std::vector<SpaceElement::Entry> es;
    es.reserve(n);
    for (std::uint64_t k = 1; k <= n; ++k) es.emplace_back(k, 1.0 / static_cast<double>(k));
    return SpaceElement::sparse(std::move(es));
  };
  auto delta = [](std::uint64_t n) { return SpaceElement::sparse({{n, 1.0 / static_cast<double>(n)}}); };
  return SequenceSpec("harmonic", Space::sparse(), gen, delta);
}

/// e_n in c00.
inline SequenceSpec unit_coords_sequence() {
  auto gen = [](std::uint64_t n) { return SpaceElement::sparse({{n, 1.0}}); };
  auto delta = [](std::uint64_t n) {
    if (n == 1) return SpaceElement::sparse({{1, 1.0}});
    return SpaceElement::sparse({{n - 1, -1.0}, {n, 1.0}});
  };
  return SequenceSpec("unit_coords", Space::sparse(), gen, delta);
}

/// e_{p_n}, p_n the n-th prime.
inline SequenceSpec prime_coords_sequence() {
  auto gen = [](std::uint64_t n) { return SpaceElement::sparse({{nth_prime(n), 1.0}}); };
  auto delta = [](std::uint64_t n) {
    if (n == 1) return SpaceElement::sparse({{2, 1.0}});
    return SpaceElement::sparse({{nth_prime(n - 1), -1.0}, {nth_prime(n), 1.0}});
  };
  return SequenceSpec("prime_coords", Space::sparse(), gen, delta);
}

inline std::string zero_label(const Space& space) {
  return space.is_dense() ? "zero(dim=" + std::to_string(space.dim) + ")" : "zero(sparse)";
}

inline SequenceSpec zero_sequence(Space space) {
  auto zero = SpaceElement::zero(space);
  return SequenceSpec(zero_label(space), space, [zero](std::uint64_t) { return zero; },
                      [zero](std::uint64_t) { return zero; });
}

/// x_n = v for all n.
inline SequenceSpec constant_sequence(const SpaceElement& v) {
  auto zero = SpaceElement::zero(v.space());
  return SequenceSpec("const(" + v.describe() + ")", v.space(), [v](std::uint64_t) { return v; },
                      [v, zero](std::uint64_t n) { return n == 1 ? v : zero; });
}

/// Real sequence n -> f(n) embedded in R^1.
inline SequenceSpec real_sequence(std::string label, std::function<double(std::uint64_t)> f) {
  auto gen = [f](std::uint64_t n) { return SpaceElement::dense({f(n)}); };
  return SequenceSpec(std::move(label), Space::dense(1), gen);
}

/// x_n = n in R^1.
inline SequenceSpec ramp_sequence() {
  return real_sequence("ramp", [](std::uint64_t n) { return static_cast<double>(n); });
}

/// x_n = (-1)^n in R^1.
inline SequenceSpec alternating_sequence() {
  return real_sequence("alternating", [](std::uint64_t n) { return n % 2 ? -1.0 : 1.0; });
}

/// x_n = factor(n) * seq_n.
inline SequenceSpec position_scaled(const SequenceSpec& seq, std::string label,
                                    SequenceSpec::Factor factor) {
  auto gen = [seq, factor](std::uint64_t n) { return scale(factor(n), seq(n)); };
  return SequenceSpec(std::move(label), seq.space(), gen, {}, seq.seed())
      .with_norm(seq.norm())
      .with_scaling(seq, factor);
}

/// x_n = (1/n) * seq_n.
inline SequenceSpec damp(const SequenceSpec& seq) {
  return position_scaled(seq, "damp(" + seq.label() + ")",
                         [](std::uint64_t n) { return 1.0 / static_cast<double>(n); });
}

/// x_n = (1/n) * v, statistically (and norm) null.
inline SequenceSpec null_sequence(const SpaceElement& v) {
  auto base = constant_sequence(v);
  auto gen = [v](std::uint64_t n) { return scale(1.0 / static_cast<double>(n), v); };
  return SequenceSpec("null(" + v.describe() + ")", v.space(), gen)
      .with_scaling(base, [](std::uint64_t n) { return 1.0 / static_cast<double>(n); });
}

/// x_n = magnitude(n) * u_n for n in spikes, otherwise base_n. u_n is e_n in
/// c00 and e_1 in R^d.
inline SequenceSpec spike_sequence(const SequenceSpec& base, const IndexSet& spikes,
                                   const Magnitude& magnitude) {
  const Space space = base.space();
  std::string label = "spike(" + spikes.descriptor() + "," + magnitude.label;
  if (base.label() != zero_label(Space::dense(1))) label += "," + base.label();
  label += ")";

  auto member = spikes.membership(1 << 16);
  auto spike_at = [space, magnitude](std::uint64_t n) {
    return SpaceElement::unit(space, space.is_dense() ? 1 : n, magnitude(n));
  };
  auto gen = [base, member, spike_at](std::uint64_t n) {
    return member(n) ? spike_at(n) : base(n);
  };
  SequenceSpec::Generator delta;
  if (base.has_delta()) {
    delta = [base, member, gen](std::uint64_t n) {
      bool here = member(n);
      bool before = n > 1 && member(n - 1);
      if (!here && !before) return base.delta(n);
      if (n == 1) return gen(1);
      return sub(gen(n), gen(n - 1));
    };
  }
  return SequenceSpec(std::move(label), space, gen, delta, base.seed()).with_norm(base.norm());
}

/// Spike sequence over the zero sequence of R^1.
inline SequenceSpec spike_sequence(const IndexSet& spikes, const Magnitude& magnitude) {
  return spike_sequence(zero_sequence(Space::dense(1)), spikes, magnitude);
}

namespace detail {

/// Lazily enumerated members of an index set, shared between copies of a
/// subsequence.
class MemberCache {
 public:
  MemberCache(IndexSet set, std::uint64_t cap)
      : set_(std::move(set)), member_(set_.membership(1 << 16)), cap_(cap) {}

  std::uint64_t kth(std::uint64_t k) {
    if (set_.kind() == SetKind::squares && k <= 0xffffffffULL) return k * k;
    if (set_.kind() == SetKind::multiples && k <= ~0ULL / set_.modulus()) return k * set_.modulus();
    std::lock_guard lock(mutex_);
    while (members_.size() < k) {
      if (scanned_ >= cap_)
        throw HorizonExhausted("fewer than " + std::to_string(k) + " members of " +
                               set_.descriptor() + " below " + std::to_string(cap_));
      ++scanned_;
      if (member_(scanned_)) members_.push_back(scanned_);
    }
    return members_[k - 1];
  }

 private:
  IndexSet set_;
  IndexSet::Predicate member_;
  std::uint64_t cap_;
  std::mutex mutex_;
  std::vector<std::uint64_t> members_;
  std::uint64_t scanned_ = 0;
};

}  // namespace detail

/// x'_k = x_{m_k}, m_k the k-th smallest member of `along`.
inline SequenceSpec subsequence(const SequenceSpec& seq, const IndexSet& along,
                                std::uint64_t cap = kDefaultSubsequenceCap) {
  auto cache = std::make_shared<detail::MemberCache>(along, cap);
  auto gen = [seq, cache](std::uint64_t k) { return seq(cache->kth(k)); };
  SequenceSpec::Generator delta;
  if (seq.has_delta()) {
    delta = [seq, cache](std::uint64_t k) {
      std::uint64_t lo = k == 1 ? 0 : cache->kth(k - 1);
      std::uint64_t hi = cache->kth(k);
      // Long gaps are cheaper as a difference of two evaluations.
      if (hi - lo > 64) return lo == 0 ? seq(hi) : sub(seq(hi), seq(lo));
      SpaceElement acc = seq.delta(lo + 1);
      for (std::uint64_t i = lo + 2; i <= hi; ++i) acc = add(acc, seq.delta(i));
      return acc;
    };
  }
  return SequenceSpec("subseq(" + seq.label() + "," + along.descriptor() + ")", seq.space(), gen,
                      delta, seq.seed())
      .with_norm(seq.norm());
}

/// Pointwise alpha*a_n + beta*b_n.
inline SequenceSpec combine(const SequenceSpec& a, const SequenceSpec& b, double alpha, double beta) {
  if (!(a.space() == b.space()))
    throw SpaceMismatch("combine: " + a.space().describe() + " vs " + b.space().describe());
  if (!(a.norm() == b.norm())) throw SpaceMismatch("combine: sequences carry different norms");
  auto gen = [a, b, alpha, beta](std::uint64_t n) { return axpby(alpha, a(n), beta, b(n)); };
  SequenceSpec::Generator delta;
  if (a.has_delta() && b.has_delta())
    delta = [a, b, alpha, beta](std::uint64_t n) {
      return axpby(alpha, a.delta(n), beta, b.delta(n));
    };
  std::string label = "combine(" + a.label() + "," + b.label() + "," + format_number(alpha) + "," +
                      format_number(beta) + ")";
  return SequenceSpec(std::move(label), a.space(), gen, delta, a.seed()).with_norm(a.norm());
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: the stream for (seed, n) depends on nothing else,
/// so x_n is reproducible without replaying x_1..x_{n-1}.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t n) : state_(splitmix64(seed) ^ splitmix64(~n)) {}

  std::uint64_t next() { return splitmix64(state_++ * 0x2545f4914f6cdd1dULL + 1); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Box-Muller.
  double normal() {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace detail

inline constexpr std::size_t kSparseRandomSupport = 8;

/// Seeded draws from the closed unit ball. Dense: uniform in the Euclidean
/// ball (2-norm) or cube (other norms); sparse: coordinates 1..8 uniform in
/// [-1, 1]. Norms never exceed 1.
inline SequenceSpec random_unit_ball(Space space, std::uint64_t seed, Norm nrm) {
  std::string label = space.is_dense()
                          ? "random(dim=" + std::to_string(space.dim) + ",seed=" + std::to_string(seed) + ")"
                          : "random(sparse,seed=" + std::to_string(seed) + ")";
  auto gen = [space, seed, nrm](std::uint64_t n) {
    detail::CounterRng rng(seed, n);
    if (!space.is_dense()) {
      std::vector<SpaceElement::Entry> es;
      for (std::uint64_t k = 1; k <= kSparseRandomSupport; ++k) es.emplace_back(k, rng.uniform(-1, 1));
      return SpaceElement::sparse(std::move(es));
    }
    std::vector<double> c(space.dim);
    if (nrm.kind == Norm::Kind::p && nrm.p == 2.0) {
      for (double& v : c) v = rng.normal();
      double r = std::pow(rng.uniform(), 1.0 / static_cast<double>(space.dim));
      auto x = SpaceElement::dense(c);
      double len = norm(x, nrm);
      if (len == 0.0) return SpaceElement::zero(space);
      for (double& v : c) v *= r / len;
    } else {
      for (double& v : c) v = rng.uniform(-1, 1);
    }
    auto x = SpaceElement::dense(std::move(c));
    if (norm(x, nrm) <= 1.0) return x;
    // Rescaling can land one ulp above 1; shrink until it does not.
    double f = 1.0 / norm(x, nrm);
    auto y = scale(f, x);
    while (norm(y, nrm) > 1.0) {
      f = std::nextafter(f, 0.0);
      y = scale(f, x);
    }
    return y;
  };
  return SequenceSpec(std::move(label), space, gen, {}, seed).with_norm(nrm);
}

inline SequenceSpec random_unit_ball(Space space, std::uint64_t seed) {
  return random_unit_ball(space, seed, space.is_dense() ? Norm::lp(2) : Norm::sup());
}

}  // namespace stconv
