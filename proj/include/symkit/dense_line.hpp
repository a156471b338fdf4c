#pragma once

#include <array>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace symkit {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "3", "-2/5" (no decimals).
Rational parse_rational(const std::string& text);

/// a + b sqrt(d) with rational a, b and a fixed square-free d > 1.
struct Surd {
  Rational a;
  Rational b;

  Surd() = default;
  Surd(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {}

  double to_double(int d) const;
};

Surd add(const Surd& x, const Surd& y);
Surd sub(const Surd& x, const Surd& y);
Surd mul(const Surd& x, const Surd& y, int d);
Surd div(const Surd& x, const Surd& y, int d);
/// Exact sign of a + b sqrt(d).
int sign(const Surd& x, int d);

/// Exact membership for the image of the line R(1, alpha) in R^2 / Z^2, with
/// alpha = a + b sqrt(d). Coordinates are in units of the lattice period.
class DenseLineOracle {
 public:
  /// PreconditionError unless d >= 2 is square-free.
  DenseLineOracle(Rational a, Rational b, int d);

  const Surd& slope() const { return alpha_; }
  int radicand() const { return d_; }
  bool irrational() const { return alpha_.b != 0; }
  double slope_value() const { return alpha_.to_double(d_); }

  /// If p lies on some translate t(1, alpha) + m, the integer vector m.
  std::optional<std::array<BigInt, 2>> lattice_shift(const std::array<Surd, 2>& p) const;
  bool contains(const std::array<Surd, 2>& p) const { return lattice_shift(p).has_value(); }

  /// Component of the lattice point m orthogonal to the line: an exact point
  /// of the dense line that lies on the normal through the origin.
  std::array<Surd, 2> normal_component(const BigInt& m1, const BigInt& m2) const;

  /// Exact squared norm.
  Surd norm2(const std::array<Surd, 2>& p) const;

  /// The lattice point m with |m1| <= window of smallest |m1| whose normal
  /// component is nonzero with exact squared norm below bound2, if any.
  std::optional<std::array<BigInt, 2>> density_witness(const Rational& bound2, int window) const;

 private:
  Surd alpha_;
  int d_;
};

}  // namespace symkit
