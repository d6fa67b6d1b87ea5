#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stconv/error.hpp"
#include "stconv/format.hpp"
#include "stconv/primes.hpp"
#include "stconv/sequences.hpp"
#include "stconv/spaces.hpp"

namespace stconv {

/// A linear functional x -> f(x).
class FunctionalSpec {
 public:
  enum class Kind { coordinate, dense_weights, sparse_weighted };
  using Weight = std::function<double(std::uint64_t)>;

  static FunctionalSpec coordinate(std::uint64_t j) {
    if (j == 0) throw std::invalid_argument("coordinates are 1-based");
    FunctionalSpec f(Kind::coordinate, "coord(" + std::to_string(j) + ")");
    f.index_ = j;
    f.bounded_ = true;
    return f;
  }

  static FunctionalSpec dense_weights(std::vector<double> w) {
    if (w.empty()) throw std::invalid_argument("weight vector must be nonempty");
    std::string label = "weights[";
    for (std::size_t i = 0; i < w.size(); ++i) label += (i ? "," : "") + format_number(w[i]);
    FunctionalSpec f(Kind::dense_weights, label + "]");
    f.weights_ = std::move(w);
    f.bounded_ = true;
    return f;
  }

  /// x -> sum_k w(k) x_k over the c00 support. `bounded` is the caller's
  /// claim and is not verified; `sup_bound` is sum |w(k)| when known.
  static FunctionalSpec sparse_weighted(std::string label, Weight w, bool bounded,
                                        std::optional<double> sup_bound = std::nullopt) {
    FunctionalSpec f(Kind::sparse_weighted, std::move(label));
    f.weight_fn_ = std::move(w);
    f.bounded_ = bounded;
    f.sup_bound_ = sup_bound;
    return f;
  }

  /// w(k) = k: linear on c00 but not bounded in the sup norm.
  static FunctionalSpec ramp_weights() {
    return sparse_weighted("ramp_weights", [](std::uint64_t k) { return static_cast<double>(k); }, false);
  }

  /// w(k) = 1/k^2, bounded by pi^2/6 on (c00, sup).
  static FunctionalSpec inverse_square_weights() {
    return sparse_weighted(
        "inv_square_weights",
        [](std::uint64_t k) { return 1.0 / (static_cast<double>(k) * static_cast<double>(k)); }, true,
        std::numbers::pi * std::numbers::pi / 6);
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& descriptor() const noexcept { return label_; }
  bool bounded() const noexcept { return bounded_; }
  std::size_t weight_count() const noexcept { return weights_.size(); }

  double operator()(const SpaceElement& x) const {
    switch (kind_) {
      case Kind::coordinate:
        if (x.is_dense() && index_ > x.coords().size())
          throw SpaceMismatch(label_ + " outside dimension " + std::to_string(x.coords().size()));
        return x.at(index_);
      case Kind::dense_weights: {
        if (!x.is_dense() || x.coords().size() != weights_.size())
          throw SpaceMismatch(label_ + " needs a dense element of dimension " + std::to_string(weights_.size()));
        double s = 0;
        for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * x.coords()[i];
        return s;
      }
      case Kind::sparse_weighted: {
        if (x.is_dense()) throw SpaceMismatch(label_ + " acts on c00 elements");
        double s = 0;
        for (const auto& [k, v] : x.entries()) s += weight_fn_(k) * v;
        return s;
      }
    }
    return 0;
  }

  /// Known operator-norm bound on a domain carrying `nrm`, when one exists.
  std::optional<double> bound(Norm nrm) const {
    switch (kind_) {
      case Kind::coordinate:
        return 1.0;
      case Kind::dense_weights: {
        if (nrm.kind == Norm::Kind::sup) {
          double s = 0;
          for (double w : weights_) s += std::abs(w);
          return s;
        }
        // Hoelder: dual exponent q = p / (p - 1).
        double q = nrm.p == 1 ? 0 : nrm.p / (nrm.p - 1);
        double m = 0;
        for (double w : weights_) m = std::max(m, std::abs(w));
        if (q == 0) return m;
        return norm(SpaceElement::dense(weights_), Norm::lp(q));
      }
      case Kind::sparse_weighted:
        return bounded_ ? sup_bound_ : std::nullopt;
    }
    return std::nullopt;
  }

 private:
  FunctionalSpec(Kind kind, std::string label) : kind_(kind), label_(std::move(label)) {}

  Kind kind_;
  std::string label_;
  std::uint64_t index_ = 0;
  std::vector<double> weights_;
  Weight weight_fn_;
  bool bounded_ = false;
  std::optional<double> sup_bound_;
};

/// Named multiplier k -> d(k) for diagonal operators.
struct Multiplier {
  std::string label;
  std::function<double(std::uint64_t)> fn;

  /// d(k) = k on primes, 1 elsewhere.
  static Multiplier prime_scale() {
    return {"prime_scale", [](std::uint64_t k) { return is_prime(k) ? static_cast<double>(k) : 1.0; }};
  }
  static Multiplier inverse() {
    return {"inv", [](std::uint64_t k) { return 1.0 / static_cast<double>(k); }};
  }
  static Multiplier one() {
    return {"one", [](std::uint64_t) { return 1.0; }};
  }
  /// 1/k for k <= m, 0 beyond.
  static Multiplier truncated_inverse(std::uint64_t m) {
    return {"trunc_inv(" + std::to_string(m) + ")",
            [m](std::uint64_t k) { return k <= m ? 1.0 / static_cast<double>(k) : 0.0; }};
  }
  static Multiplier constant(double c) {
    return {format_number(c), [c](std::uint64_t) { return c; }};
  }
};

enum class OpKind { diagonal, rank_one, finite_rank, matrix, compose, linear_combo };

/// Evaluable description of a linear map between the modelled spaces.
class OperatorSpec {
 public:
  static OperatorSpec diagonal(Multiplier d) {
    auto node = make(OpKind::diagonal, "diag(" + d.label + ")");
    node->multiplier = std::move(d);
    return OperatorSpec(std::move(node));
  }

  static OperatorSpec identity() { return diagonal(Multiplier::one()); }

  static OperatorSpec rank_one(FunctionalSpec f, SpaceElement y0) {
    auto node = make(OpKind::rank_one, "rank1(" + f.descriptor() + "," + y0.describe() + ")");
    node->functional = std::move(f);
    node->y0 = std::move(y0);
    return OperatorSpec(std::move(node));
  }

  static OperatorSpec finite_rank(std::vector<OperatorSpec> terms) {
    if (terms.empty()) throw std::invalid_argument("finite_rank needs at least one rank-one term");
    std::string label = "finrank(";
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].kind() != OpKind::rank_one) throw std::invalid_argument("finite_rank terms must be rank-one");
      label += (i ? "," : "") + terms[i].descriptor();
    }
    auto node = make(OpKind::finite_rank, label + ")");
    for (auto& t : terms) node->children.push_back(t.node_);
    return OperatorSpec(std::move(node));
  }

  static OperatorSpec matrix(std::vector<std::vector<double>> rows) {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("matrix must be nonempty");
    std::string label = "matrix[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.front().size()) throw std::invalid_argument("ragged matrix rows");
      label += i ? ",[" : "[";
      for (std::size_t j = 0; j < rows[i].size(); ++j) label += (j ? "," : "") + format_number(rows[i][j]);
      label += "]";
    }
    auto node = make(OpKind::matrix, label + "]");
    node->rows = std::move(rows);
    return OperatorSpec(std::move(node));
  }

  /// outer o inner.
  static OperatorSpec compose(const OperatorSpec& outer, const OperatorSpec& inner) {
    auto in_cod = inner.codomain();
    auto out_dom = outer.domain();
    if (in_cod && out_dom && !(*in_cod == *out_dom))
      throw SpaceMismatch("compose: " + inner.descriptor() + " lands in " + in_cod->describe() + " but " +
                          outer.descriptor() + " expects " + out_dom->describe());
    auto node = make(OpKind::compose, "compose(" + outer.descriptor() + "," + inner.descriptor() + ")");
    node->children = {outer.node_, inner.node_};
    return OperatorSpec(std::move(node));
  }

  static OperatorSpec linear_combo(double alpha, const OperatorSpec& s, double beta, const OperatorSpec& t) {
    auto node = make(OpKind::linear_combo, "combo(" + format_number(alpha) + "," + s.descriptor() + "," +
                                               format_number(beta) + "," + t.descriptor() + ")");
    node->alpha = alpha;
    node->beta = beta;
    node->children = {s.node_, t.node_};
    return OperatorSpec(std::move(node));
  }

  OpKind kind() const noexcept { return node_->kind; }
  const std::string& descriptor() const noexcept { return node_->label; }
  const FunctionalSpec& functional() const { return *node_->functional; }
  const SpaceElement& y0() const { return node_->y0; }
  const std::vector<std::vector<double>>& rows() const { return node_->rows; }
  OperatorSpec child(std::size_t i) const { return OperatorSpec(node_->children.at(i)); }
  std::size_t child_count() const noexcept { return node_->children.size(); }
  double alpha() const noexcept { return node_->alpha; }
  double beta() const noexcept { return node_->beta; }

  /// Domain space when it is pinned down (diagonals act on any space).
  std::optional<Space> domain() const {
    switch (kind()) {
      case OpKind::diagonal:
        return std::nullopt;
      case OpKind::rank_one:
        switch (functional().kind()) {
          case FunctionalSpec::Kind::dense_weights:
            return Space::dense(functional().weight_count());
          case FunctionalSpec::Kind::sparse_weighted:
            return Space::sparse();
          default:
            return std::nullopt;
        }
      case OpKind::finite_rank:
      case OpKind::linear_combo: {
        for (std::size_t i = 0; i < child_count(); ++i)
          if (auto d = child(i).domain()) return d;
        return std::nullopt;
      }
      case OpKind::matrix:
        return Space::dense(rows().front().size());
      case OpKind::compose: {
        if (auto d = child(1).domain()) return d;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  /// Codomain when pinned down; nullopt means "same as the argument".
  std::optional<Space> codomain() const {
    switch (kind()) {
      case OpKind::diagonal:
        return std::nullopt;
      case OpKind::rank_one:
        return y0().space();
      case OpKind::finite_rank:
      case OpKind::linear_combo:
        for (std::size_t i = 0; i < child_count(); ++i)
          if (auto c = child(i).codomain()) return c;
        return std::nullopt;
      case OpKind::matrix:
        return Space::dense(rows().size());
      case OpKind::compose:
        if (auto c = child(0).codomain()) return c;
        return child(1).codomain();
    }
    return std::nullopt;
  }

  /// Codomain for a given argument space.
  Space codomain_for(const Space& domain) const {
    if (auto c = codomain()) return *c;
    return domain;
  }

  SpaceElement apply(const SpaceElement& x) const {
    switch (kind()) {
      case OpKind::diagonal: {
        const auto& d = node_->multiplier.fn;
        if (x.is_dense()) {
          std::vector<double> c(x.coords());
          for (std::size_t i = 0; i < c.size(); ++i) c[i] *= d(i + 1);
          return SpaceElement::dense(std::move(c));
        }
        std::vector<SpaceElement::Entry> es(x.entries());
        for (auto& [k, v] : es) v *= d(k);
        return SpaceElement::sparse(std::move(es));
      }
      case OpKind::rank_one: {
        if (auto dom = domain(); dom && !(*dom == x.space()))
          throw SpaceMismatch(descriptor() + " expects " + dom->describe() + ", got " + x.space().describe());
        return scale(functional()(x), y0());
      }
      case OpKind::finite_rank: {
        SpaceElement acc = child(0).apply(x);
        for (std::size_t i = 1; i < child_count(); ++i) acc = add(acc, child(i).apply(x));
        return acc;
      }
      case OpKind::matrix: {
        const auto& m = rows();
        if (!x.is_dense() || x.coords().size() != m.front().size())
          throw SpaceMismatch(descriptor() + " expects dense(" + std::to_string(m.front().size()) + "), got " +
                              x.space().describe());
        std::vector<double> y(m.size(), 0.0);
        for (std::size_t i = 0; i < m.size(); ++i)
          for (std::size_t j = 0; j < m[i].size(); ++j) y[i] += m[i][j] * x.coords()[j];
        return SpaceElement::dense(std::move(y));
      }
      case OpKind::compose:
        return child(0).apply(child(1).apply(x));
      case OpKind::linear_combo:
        return axpby(alpha(), child(0).apply(x), beta(), child(1).apply(x));
    }
    return x;
  }

  SpaceElement operator()(const SpaceElement& x) const { return apply(x); }

 private:
  struct Node {
    OpKind kind;
    std::string label;
    Multiplier multiplier;
    std::optional<FunctionalSpec> functional;
    SpaceElement y0;
    std::vector<std::vector<double>> rows;
    std::vector<std::shared_ptr<const Node>> children;
    double alpha = 1, beta = 1;
  };

  explicit OperatorSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<Node> make(OpKind kind, std::string label) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->label = std::move(label);
    return node;
  }

  std::shared_ptr<const Node> node_;
};

/// Position-dependent map (n, x_n) -> y_n on sequences. Not an operator on
/// the space; it sees the index.
struct SequenceTransform {
  std::string label;
  std::function<SpaceElement(std::uint64_t, const SpaceElement&)> rule;
  /// Set when rule(n, x) = factor(n) * x.
  SequenceSpec::Factor factor;

  std::string descriptor() const { return "transform(" + label + ")"; }

  /// x_n -> n x_n when n is prime, x_n otherwise.
  static SequenceTransform prime_scale_by_position() {
    SequenceSpec::Factor f = [](std::uint64_t n) { return is_prime(n) ? static_cast<double>(n) : 1.0; };
    return {"prime_scale_by_position", [f](std::uint64_t n, const SpaceElement& x) { return scale(f(n), x); }, f};
  }
};

inline Norm natural_norm(const Space& space, Norm dense_norm = Norm::lp(2)) {
  return space.is_dense() ? dense_norm : Norm::sup();
}

/// n -> S(x_n). Linear operators map increments to increments.
inline SequenceSpec image_sequence(const OperatorSpec& op, const SequenceSpec& seq) {
  if (auto dom = op.domain(); dom && !(*dom == seq.space()))
    throw SpaceMismatch(op.descriptor() + " expects " + dom->describe() + ", sequence lives in " +
                        seq.space().describe());
  const Space cod = op.codomain_for(seq.space());
  auto gen = [op, seq](std::uint64_t n) { return op.apply(seq(n)); };
  SequenceSpec::Generator delta;
  if (seq.has_delta()) delta = [op, seq](std::uint64_t n) { return op.apply(seq.delta(n)); };
  Norm nrm = cod.is_dense() ? (seq.space().is_dense() ? seq.norm() : Norm::lp(2)) : Norm::sup();
  SequenceSpec out("image(" + op.descriptor() + "," + seq.label() + ")", cod, gen, delta, seq.seed());
  out = out.with_norm(nrm);
  if (seq.scaled_base()) {
    // S(f(n) b_n) = f(n) S(b_n).
    const SequenceSpec& base = *seq.scaled_base();
    out = out.with_scaling(image_sequence(op, base), [seq](std::uint64_t n) { return seq.scale_factor(n); });
  }
  return out;
}

inline SequenceSpec image_sequence(const SequenceTransform& t, const SequenceSpec& seq) {
  std::string label = "image(" + t.descriptor() + "," + seq.label() + ")";
  if (t.factor) return position_scaled(seq, std::move(label), t.factor);
  auto gen = [t, seq](std::uint64_t n) { return t.rule(n, seq(n)); };
  return SequenceSpec(std::move(label), seq.space(), gen, {}, seq.seed()).with_norm(seq.norm());
}

/// Lower bound on ||S|| from coordinate vectors e_1..e_probes plus `probes`
/// seeded random unit-ball elements of the domain.
inline double operator_norm_estimate(const OperatorSpec& op, std::uint64_t probes, const Space& domain,
                                     Norm dense_norm = Norm::lp(2), std::uint64_t seed = 1) {
  if (probes < 1) throw std::invalid_argument("operator_norm_estimate needs probes >= 1");
  const Norm in_norm = natural_norm(domain, dense_norm);
  const Norm out_norm = natural_norm(op.codomain_for(domain), dense_norm);
  double best = 0;
  auto consider = [&](const SpaceElement& x) {
    double nx = norm(x, in_norm);
    if (nx == 0) return;
    best = std::max(best, norm(op.apply(x), out_norm) / nx);
  };
  const std::uint64_t coords = domain.is_dense() ? std::min<std::uint64_t>(probes, domain.dim) : probes;
  for (std::uint64_t k = 1; k <= coords; ++k) consider(SpaceElement::unit(domain, k));
  for (std::uint64_t r = 1; r <= probes; ++r) {
    detail::CounterRng rng(seed ^ 0x0b5e55edULL, r);
    if (domain.is_dense()) {
      std::vector<double> c(domain.dim);
      for (double& v : c) v = rng.normal();
      consider(SpaceElement::dense(std::move(c)));
    } else {
      std::vector<SpaceElement::Entry> es;
      std::uint64_t width = std::min<std::uint64_t>(probes, 64);
      std::uint64_t offset = probes > width ? rng.next() % (probes - width + 1) : 0;
      for (std::uint64_t k = 1; k <= width; ++k) es.emplace_back(offset + k, rng.uniform(-1, 1));
      consider(SpaceElement::sparse(std::move(es)));
    }
  }
  return best;
}

/// Largest relative defect |S(ax+by) - (aSx+bSy)| over seeded random probes.
inline double linearity_defect(const OperatorSpec& op, const Space& domain, std::uint64_t trials = 50,
                               std::uint64_t seed = 1) {
  const Norm out_norm = natural_norm(op.codomain_for(domain), Norm::sup());
  double worst = 0;
  for (std::uint64_t t = 1; t <= trials; ++t) {
    detail::CounterRng rng(seed ^ 0x11ea7ULL, t);
    auto draw = [&]() {
      if (domain.is_dense()) {
        std::vector<double> c(domain.dim);
        for (double& v : c) v = rng.uniform(-10, 10);
        return SpaceElement::dense(std::move(c));
      }
      std::vector<SpaceElement::Entry> es;
      for (std::uint64_t k = 1; k <= 12; ++k)
        if (rng.uniform() < 0.6) es.emplace_back(k + (rng.next() % 40), 0.0);
      std::sort(es.begin(), es.end());
      es.erase(std::unique(es.begin(), es.end(), [](auto& a, auto& b) { return a.first == b.first; }), es.end());
      for (auto& e : es) e.second = rng.uniform(-10, 10);
      return SpaceElement::sparse(std::move(es));
    };
    auto x = draw();
    auto y = draw();
    double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    auto lhs = op.apply(axpby(a, x, b, y));
    auto rhs = axpby(a, op.apply(x), b, op.apply(y));
    double scale_ref = 1 + std::abs(a) * norm(op.apply(x), out_norm) + std::abs(b) * norm(op.apply(y), out_norm);
    worst = std::max(worst, norm(sub(lhs, rhs), out_norm) / scale_ref);
  }
  return worst;
}

}  // namespace stconv
