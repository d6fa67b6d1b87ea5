#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stconv/density.hpp"
#include "stconv/error.hpp"
#include "stconv/operators.hpp"
#include "stconv/sequences.hpp"
#include "stconv/spaces.hpp"

namespace stconv {

using Mapping = std::variant<OperatorSpec, SequenceTransform>;

inline std::string describe(const Mapping& m) {
  return std::visit([](const auto& x) { return x.descriptor(); }, m);
}

/// Recursive-descent parser for the descriptor grammars (index sets, element
/// literals, sequences, operators). Whitespace between tokens is ignored.
class DescriptorParser {
 public:
  explicit DescriptorParser(std::string_view text) : text_(text) {}

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input '" + std::string(text_.substr(pos_)) + "'");
  }

  IndexSet set() {
    std::size_t at = mark();
    std::string name = identifier();
    if (name == "primes") return IndexSet::primes();
    if (name == "squares") return IndexSet::squares();
    if (name == "multiples") {
      expect('(');
      auto m = integer();
      if (m == 0) fail("multiples needs m >= 1");
      expect(')');
      return IndexSet::multiples(m);
    }
    if (name == "finite") {
      expect('(');
      std::vector<std::uint64_t> xs;
      if (!accept(')')) {
        do {
          auto k = integer();
          if (k == 0) fail("finite set members must be >= 1");
          xs.push_back(k);
        } while (accept(','));
        expect(')');
      }
      return IndexSet::finite(std::move(xs));
    }
    if (name == "complement") {
      expect('(');
      auto inner = set();
      expect(')');
      return IndexSet::complement(inner);
    }
    if (name == "union" || name == "intersection") {
      expect('(');
      auto a = set();
      expect(',');
      auto b = set();
      expect(')');
      return name == "union" ? IndexSet::set_union(a, b) : IndexSet::intersection(a, b);
    }
    fail_at(at, "unknown index set '" + name + "'");
  }

  SpaceElement element() {
    std::size_t at = mark();
    std::string name = identifier();
    if (name == "dense") {
      expect('[');
      std::vector<double> xs;
      do xs.push_back(number());
      while (accept(','));
      expect(']');
      return SpaceElement::dense(std::move(xs));
    }
    if (name == "sparse") {
      expect('{');
      std::vector<SpaceElement::Entry> es;
      if (!accept('}')) {
        do {
          std::size_t entry_at = mark();
          auto k = integer();
          if (k == 0) fail_at(entry_at, "sparse indices start at 1");
          expect(':');
          double v = number();
          for (const auto& e : es)
            if (e.first == k) fail_at(entry_at, "duplicate sparse index " + std::to_string(k));
          es.emplace_back(k, v);
        } while (accept(','));
        expect('}');
      }
      return SpaceElement::sparse(std::move(es));
    }
    fail_at(at, "expected element literal dense[...] or sparse{...}, got '" + name + "'");
  }

  /// geometric(b) or linear(s).
  Schedule schedule() {
    std::size_t at = mark();
    std::string name = identifier();
    expect('(');
    auto param = integer();
    expect(')');
    if (name == "geometric") {
      if (param < 2) fail_at(at, "geometric base must be >= 2");
      return Schedule::geometric(param);
    }
    if (name == "linear") {
      if (param < 1) fail_at(at, "linear step must be >= 1");
      return Schedule::linear(param);
    }
    fail_at(at, "unknown schedule '" + name + "'");
  }

  /// p/q, an integer, or "zero".
  Rational rational() {
    skip_ws();
    if (peek_alpha()) {
      std::size_t at = pos_;
      if (identifier() != "zero") fail_at(at, "expected a rational p/q");
      return Rational::zero();
    }
    auto n = integer();
    std::uint64_t d = 1;
    if (accept('/')) {
      std::size_t at = mark();
      d = integer();
      if (d == 0) fail_at(at, "zero denominator");
    }
    return Rational::of(n, d);
  }

  Magnitude magnitude() {
    skip_ws();
    std::size_t at = pos_;
    if (peek_alpha()) {
      std::string name = identifier();
      if (name == "n") {
        if (accept('^')) return Magnitude::power(number());
        return Magnitude::linear();
      }
      if (name == "sqrt") {
        expect('(');
        std::string v = identifier();
        if (v != "n") fail("sqrt expects n");
        expect(')');
        return Magnitude::square_root();
      }
      fail_at(at, "unknown magnitude '" + name + "'");
    }
    return Magnitude::constant(number());
  }

  SequenceSpec sequence() {
    std::size_t at = mark();
    std::string name = identifier();
    if (name == "harmonic") return harmonic_prefix_sequence();
    if (name == "unit_coords") return unit_coords_sequence();
    if (name == "prime_coords") return prime_coords_sequence();
    if (name == "ramp") return ramp_sequence();
    if (name == "alternating") return alternating_sequence();
    if (name == "random") {
      expect('(');
      Space space = Space::dense(1);
      std::uint64_t seed = 1;
      bool have_space = false;
      do {
        std::size_t key_at = mark();
        std::string key = identifier();
        if (key == "sparse") {
          space = Space::sparse();
          have_space = true;
        } else if (key == "dim") {
          expect('=');
          auto d = integer();
          if (d == 0) fail_at(key_at, "dim must be >= 1");
          space = Space::dense(d);
          have_space = true;
        } else if (key == "seed") {
          expect('=');
          seed = integer();
        } else {
          fail_at(key_at, "unknown random() option '" + key + "'");
        }
      } while (accept(','));
      expect(')');
      if (!have_space) fail_at(at, "random() needs dim=N or sparse");
      return random_unit_ball(space, seed);
    }
    if (name == "zero") {
      expect('(');
      Space space = dim_or_sparse();
      expect(')');
      return zero_sequence(space);
    }
    if (name == "spike") {
      expect('(');
      auto spikes = set();
      expect(',');
      auto mag = magnitude();
      if (accept(',')) {
        std::size_t base_at = mark();
        auto base = sequence();
        expect(')');
        try {
          return spike_sequence(base, spikes, mag);
        } catch (const SpaceMismatch& e) {
          fail_at(base_at, e.what());
        }
      }
      expect(')');
      return spike_sequence(spikes, mag);
    }
    if (name == "combine") {
      expect('(');
      auto a = sequence();
      expect(',');
      std::size_t b_at = mark();
      auto b = sequence();
      expect(',');
      double alpha = number();
      expect(',');
      double beta = number();
      expect(')');
      try {
        return combine(a, b, alpha, beta);
      } catch (const SpaceMismatch& e) {
        fail_at(b_at, e.what());
      }
    }
    if (name == "subseq") {
      expect('(');
      auto a = sequence();
      expect(',');
      auto along = set();
      expect(')');
      return subsequence(a, along);
    }
    if (name == "const" || name == "null") {
      expect('(');
      auto v = element();
      expect(')');
      return name == "const" ? constant_sequence(v) : null_sequence(v);
    }
    if (name == "damp") {
      expect('(');
      auto a = sequence();
      expect(')');
      return damp(a);
    }
    if (name == "image") {
      expect('(');
      auto m = mapping();
      expect(',');
      std::size_t seq_at = mark();
      auto a = sequence();
      expect(')');
      try {
        return std::visit([&](const auto& op) { return image_sequence(op, a); }, m);
      } catch (const SpaceMismatch& e) {
        fail_at(seq_at, e.what());
      }
    }
    fail_at(at, "unknown sequence '" + name + "'");
  }

  FunctionalSpec functional() {
    std::size_t at = mark();
    std::string name = identifier();
    if (name == "coord") {
      expect('(');
      auto j = integer();
      if (j == 0) fail_at(at, "coordinates are 1-based");
      expect(')');
      return FunctionalSpec::coordinate(j);
    }
    if (name == "weights") {
      expect('[');
      std::vector<double> w;
      do w.push_back(number());
      while (accept(','));
      expect(']');
      return FunctionalSpec::dense_weights(std::move(w));
    }
    if (name == "ramp_weights") return FunctionalSpec::ramp_weights();
    if (name == "inv_square_weights") return FunctionalSpec::inverse_square_weights();
    fail_at(at, "unknown functional '" + name + "'");
  }

  OperatorSpec op() {
    std::size_t at = mark();
    auto m = mapping();
    if (!std::holds_alternative<OperatorSpec>(m))
      fail_at(at, "a sequence transform is not a linear operator here");
    return std::get<OperatorSpec>(m);
  }

  Mapping mapping() {
    std::size_t at = mark();
    std::string name = identifier();
    if (name == "identity") return OperatorSpec::identity();
    if (name == "diag") {
      expect('(');
      skip_ws();
      Multiplier d;
      if (peek_alpha()) {
        std::size_t m_at = mark();
        std::string which = identifier();
        if (which == "prime_scale")
          d = Multiplier::prime_scale();
        else if (which == "inv")
          d = Multiplier::inverse();
        else if (which == "one")
          d = Multiplier::one();
        else if (which == "trunc_inv") {
          expect('(');
          auto m = integer();
          expect(')');
          d = Multiplier::truncated_inverse(m);
        } else
          fail_at(m_at, "unknown multiplier '" + which + "'");
      } else {
        d = Multiplier::constant(number());
      }
      expect(')');
      return OperatorSpec::diagonal(std::move(d));
    }
    if (name == "rank1") {
      expect('(');
      auto f = functional();
      expect(',');
      auto y0 = element();
      expect(')');
      return OperatorSpec::rank_one(std::move(f), std::move(y0));
    }
    if (name == "finrank") {
      expect('(');
      std::vector<OperatorSpec> terms;
      do {
        std::size_t t_at = mark();
        auto t = op();
        if (t.kind() != OpKind::rank_one) fail_at(t_at, "finrank terms must be rank1(...)");
        terms.push_back(std::move(t));
      } while (accept(','));
      expect(')');
      return OperatorSpec::finite_rank(std::move(terms));
    }
    if (name == "matrix") {
      expect('[');
      std::vector<std::vector<double>> rows;
      do {
        std::size_t row_at = mark();
        expect('[');
        std::vector<double> row;
        do row.push_back(number());
        while (accept(','));
        expect(']');
        if (!rows.empty() && row.size() != rows.front().size()) fail_at(row_at, "ragged matrix row");
        rows.push_back(std::move(row));
      } while (accept(','));
      expect(']');
      return OperatorSpec::matrix(std::move(rows));
    }
    if (name == "compose") {
      expect('(');
      auto outer = op();
      expect(',');
      std::size_t inner_at = mark();
      auto inner = op();
      expect(')');
      try {
        return OperatorSpec::compose(outer, inner);
      } catch (const SpaceMismatch& e) {
        fail_at(inner_at, e.what());
      }
    }
    if (name == "combo") {
      expect('(');
      double alpha = number();
      expect(',');
      auto s = op();
      expect(',');
      double beta = number();
      expect(',');
      auto t = op();
      expect(')');
      return OperatorSpec::linear_combo(alpha, s, beta, t);
    }
    if (name == "transform") {
      expect('(');
      std::size_t t_at = mark();
      std::string which = identifier();
      if (which != "prime_scale_by_position") fail_at(t_at, "unknown transform '" + which + "'");
      expect(')');
      return SequenceTransform::prime_scale_by_position();
    }
    fail_at(at, "unknown operator '" + name + "'");
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const { throw ParseError(msg, at); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  std::size_t mark() {
    skip_ws();
    return pos_;
  }
  bool peek_alpha() const {
    return pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      std::string got = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
      fail(std::string("expected '") + c + "', got " + got);
    }
  }
  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail(pos_ < text_.size() ? "expected a name" : "unexpected end of input");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::uint64_t integer() {
    skip_ws();
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc{}) fail("expected a nonnegative integer");
    pos_ = static_cast<std::size_t>(end - text_.data());
    return v;
  }
  double number() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '+') ++pos_;
    double v = 0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc{}) {
      pos_ = start;
      fail("expected a number");
    }
    pos_ = static_cast<std::size_t>(end - text_.data());
    return v;
  }
  Space dim_or_sparse() {
    std::size_t at = mark();
    std::string key = identifier();
    if (key == "sparse") return Space::sparse();
    if (key == "dim") {
      expect('=');
      auto d = integer();
      if (d == 0) fail_at(at, "dim must be >= 1");
      return Space::dense(d);
    }
    fail_at(at, "expected dim=N or sparse");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline IndexSet parse_set(std::string_view text) {
  DescriptorParser p(text);
  auto s = p.set();
  p.finish();
  return s;
}

inline SpaceElement parse_element(std::string_view text) {
  DescriptorParser p(text);
  auto e = p.element();
  p.finish();
  return e;
}

inline SequenceSpec parse_sequence(std::string_view text) {
  DescriptorParser p(text);
  auto s = p.sequence();
  p.finish();
  return s;
}

inline Schedule parse_schedule(std::string_view text) {
  DescriptorParser p(text);
  auto s = p.schedule();
  p.finish();
  return s;
}

inline Rational parse_rational(std::string_view text) {
  DescriptorParser p(text);
  auto r = p.rational();
  p.finish();
  return r;
}

inline Mapping parse_mapping(std::string_view text) {
  DescriptorParser p(text);
  auto m = p.mapping();
  p.finish();
  return m;
}

inline OperatorSpec parse_operator(std::string_view text) {
  DescriptorParser p(text);
  auto o = p.op();
  p.finish();
  return o;
}

}  // namespace stconv
