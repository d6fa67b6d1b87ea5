#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stconv/error.hpp"
#include "stconv/format.hpp"

namespace stconv {

/// Which normed space an element lives in: R^dim, or c00 (finite support).
struct Space {
  enum class Kind { dense, sparse };
  Kind kind = Kind::sparse;
  std::size_t dim = 0;

  static Space dense(std::size_t dim) {
    if (dim == 0) throw SpaceMismatch("dense space needs dim >= 1");
    return {Kind::dense, dim};
  }
  static Space sparse() { return {Kind::sparse, 0}; }

  bool is_dense() const noexcept { return kind == Kind::dense; }
  std::string describe() const {
    return is_dense() ? "dense(" + std::to_string(dim) + ")" : std::string("sparse");
  }

  friend bool operator==(const Space&, const Space&) = default;
};

struct Norm {
  enum class Kind { sup, p };
  Kind kind = Kind::sup;
  double p = 0;

  static Norm sup() { return {Kind::sup, 0}; }
  static Norm lp(double p) {
    if (!(p >= 1)) throw std::invalid_argument("p-norm needs p >= 1");
    return {Kind::p, p};
  }

  std::string describe() const { return kind == Kind::sup ? "sup" : "p(" + format_number(p) + ")"; }

  friend bool operator==(const Norm&, const Norm&) = default;
};

/// A vector in R^d (dense) or in c00 (sparse, sorted entries, no stored zeros,
/// indices >= 1).
class SpaceElement {
 public:
  using Entry = std::pair<std::uint64_t, double>;

  SpaceElement() : repr_(Sparse{}) {}

  static SpaceElement dense(std::vector<double> coords) {
    if (coords.empty()) throw SpaceMismatch("dense element needs dim >= 1");
    SpaceElement e;
    e.repr_ = Dense{std::move(coords)};
    return e;
  }

  /// Entries may arrive unsorted; duplicates are rejected and exact zeros dropped.
  static SpaceElement sparse(std::vector<Entry> entries) {
    auto by_index = [](const Entry& a, const Entry& b) { return a.first < b.first; };
    if (!std::is_sorted(entries.begin(), entries.end(), by_index))
      std::sort(entries.begin(), entries.end(), by_index);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].first == 0) throw SpaceMismatch("sparse indices start at 1");
      if (i && entries[i].first == entries[i - 1].first)
        throw SpaceMismatch("duplicate sparse index " + std::to_string(entries[i].first));
    }
    std::erase_if(entries, [](const Entry& e) { return e.second == 0.0; });
    SpaceElement e;
    e.repr_ = Sparse{std::move(entries)};
    return e;
  }

  static SpaceElement zero(const Space& space) {
    return space.is_dense() ? dense(std::vector<double>(space.dim, 0.0)) : SpaceElement();
  }

  /// k-th unit coordinate vector (1-based).
  static SpaceElement unit(const Space& space, std::uint64_t k, double value = 1.0) {
    if (space.is_dense()) {
      if (k < 1 || k > space.dim) throw SpaceMismatch("unit index outside dense dimension");
      std::vector<double> c(space.dim, 0.0);
      c[k - 1] = value;
      return dense(std::move(c));
    }
    return sparse({{k, value}});
  }

  bool is_dense() const noexcept { return std::holds_alternative<Dense>(repr_); }
  Space space() const { return is_dense() ? Space::dense(coords().size()) : Space::sparse(); }

  const std::vector<double>& coords() const { return std::get<Dense>(repr_).coords; }
  const std::vector<Entry>& entries() const { return std::get<Sparse>(repr_).entries; }

  /// Coordinate k (1-based); zero outside the support / dimension.
  double at(std::uint64_t k) const {
    if (is_dense()) {
      const auto& c = coords();
      return (k >= 1 && k <= c.size()) ? c[k - 1] : 0.0;
    }
    const auto& es = entries();
    auto it = std::lower_bound(es.begin(), es.end(), k,
                               [](const Entry& e, std::uint64_t key) { return e.first < key; });
    return (it != es.end() && it->first == k) ? it->second : 0.0;
  }

  /// Largest index carrying a nonzero value (0 for the zero vector).
  std::uint64_t max_support() const {
    if (is_dense()) {
      const auto& c = coords();
      for (std::size_t i = c.size(); i > 0; --i)
        if (c[i - 1] != 0.0) return i;
      return 0;
    }
    return entries().empty() ? 0 : entries().back().first;
  }

  bool is_zero() const { return max_support() == 0; }

  /// Literal form: dense[1,0.5] or sparse{1:1,3:0.25}.
  std::string describe() const {
    std::string out;
    if (is_dense()) {
      out = "dense[";
      const auto& c = coords();
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += format_number(c[i]);
      }
      return out + "]";
    }
    out = "sparse{";
    const auto& es = entries();
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(es[i].first) + ":" + format_number(es[i].second);
    }
    return out + "}";
  }

  friend bool operator==(const SpaceElement& a, const SpaceElement& b) {
    if (a.is_dense() != b.is_dense()) return false;
    return a.is_dense() ? a.coords() == b.coords() : a.entries() == b.entries();
  }

 private:
  struct Dense {
    std::vector<double> coords;
  };
  struct Sparse {
    std::vector<Entry> entries;
  };
  std::variant<Sparse, Dense> repr_;
};

inline void require_same_space(const SpaceElement& x, const SpaceElement& y) {
  if (x.is_dense() != y.is_dense())
    throw SpaceMismatch("cannot combine dense and sparse elements");
  if (x.is_dense() && x.coords().size() != y.coords().size())
    throw SpaceMismatch("dimension mismatch: " + std::to_string(x.coords().size()) + " vs " +
                        std::to_string(y.coords().size()));
}

inline double norm(const SpaceElement& x, Norm nrm) {
  if (!x.is_dense()) {
    if (nrm.kind != Norm::Kind::sup) throw SpaceMismatch("p-norms are defined on dense elements only");
    double m = 0.0;
    for (const auto& [k, v] : x.entries()) m = std::max(m, std::abs(v));
    return m;
  }
  const auto& c = x.coords();
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  if (nrm.kind == Norm::Kind::sup || m == 0.0) return m;
  // Scale by the largest magnitude so |x|^p stays in range.
  double s = 0.0;
  if (nrm.p == 2.0) {
    for (double v : c) s += (v / m) * (v / m);
    return m * std::sqrt(s);
  }
  for (double v : c) s += std::pow(std::abs(v) / m, nrm.p);
  return m * std::pow(s, 1.0 / nrm.p);
}

/// alpha*x + beta*y, coordinatewise; sparse results drop exact zeros.
inline SpaceElement axpby(double alpha, const SpaceElement& x, double beta, const SpaceElement& y) {
  require_same_space(x, y);
  if (x.is_dense()) {
    std::vector<double> c(x.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = alpha * x.coords()[i] + beta * y.coords()[i];
    return SpaceElement::dense(std::move(c));
  }
  const auto& a = x.entries();
  const auto& b = y.entries();
  std::vector<SpaceElement::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.emplace_back(a[i].first, alpha * a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, beta * b[j].second);
      ++j;
    } else {
      out.emplace_back(a[i].first, alpha * a[i].second + beta * b[j].second);
      ++i;
      ++j;
    }
  }
  return SpaceElement::sparse(std::move(out));
}

inline SpaceElement add(const SpaceElement& x, const SpaceElement& y) {
  require_same_space(x, y);
  if (x.is_dense()) {
    std::vector<double> c(x.coords());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += y.coords()[i];
    return SpaceElement::dense(std::move(c));
  }
  return axpby(1.0, x, 1.0, y);
}

inline SpaceElement sub(const SpaceElement& x, const SpaceElement& y) {
  require_same_space(x, y);
  if (x.is_dense()) {
    std::vector<double> c(x.coords());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= y.coords()[i];
    return SpaceElement::dense(std::move(c));
  }
  return axpby(1.0, x, -1.0, y);
}

inline SpaceElement scale(double alpha, const SpaceElement& x) {
  if (x.is_dense()) {
    std::vector<double> c(x.coords());
    for (double& v : c) v *= alpha;
    return SpaceElement::dense(std::move(c));
  }
  std::vector<SpaceElement::Entry> out(x.entries());
  for (auto& e : out) e.second *= alpha;
  return SpaceElement::sparse(std::move(out));
}

}  // namespace stconv
