#include "symkit/dense_line.hpp"

#include <cmath>

#include "symkit/error.hpp"

namespace symkit {

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw PreconditionError("rational with zero denominator: " + text);
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const PreconditionError*>(&e)) throw;
    throw PreconditionError("not a rational number: '" + text + "'");
  }
}

double Surd::to_double(int d) const {
  return a.convert_to<double>() + b.convert_to<double>() * std::sqrt(static_cast<double>(d));
}

Surd add(const Surd& x, const Surd& y) { return {x.a + y.a, x.b + y.b}; }
Surd sub(const Surd& x, const Surd& y) { return {x.a - y.a, x.b - y.b}; }

Surd mul(const Surd& x, const Surd& y, int d) {
  return {x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a};
}

Surd div(const Surd& x, const Surd& y, int d) {
  // Multiply by the conjugate; the norm a^2 - d b^2 vanishes only for y = 0.
  const Rational n = y.a * y.a - y.b * y.b * d;
  if (n == 0) throw DomainError("Surd division by zero");
  const Surd conj{y.a, -y.b};
  const Surd top = mul(x, conj, d);
  return {top.a / n, top.b / n};
}

int sign(const Surd& x, int d) {
  // Compare a with -b sqrt(d) by squaring when the signs disagree.
  const int sa = x.a.sign(), sb = x.b.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  const Rational lhs = x.a * x.a, rhs = x.b * x.b * d;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

namespace {

bool square_free(int d) {
  for (int f = 2; f * f <= d; ++f) {
    if (d % (f * f) == 0) return false;
  }
  return true;
}

bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

}  // namespace

DenseLineOracle::DenseLineOracle(Rational a, Rational b, int d) : alpha_{std::move(a), std::move(b)}, d_(d) {
  if (d < 2 || !square_free(d)) throw PreconditionError("radicand must be a square-free integer >= 2");
}

std::optional<std::array<BigInt, 2>> DenseLineOracle::lattice_shift(const std::array<Surd, 2>& p) const {
  // p - m = t (1, alpha)  <=>  p2 - alpha p1 = m2 - alpha m1.
  const Surd c = sub(p[1], mul(alpha_, p[0], d_));
  if (irrational()) {
    // c0 + c1 sqrt(d) = (m2 - a m1) - b m1 sqrt(d).
    const Rational m1 = -c.b / alpha_.b;
    if (!is_integer(m1)) return std::nullopt;
    const Rational m2 = c.a + alpha_.a * m1;
    if (!is_integer(m2)) return std::nullopt;
    return std::array<BigInt, 2>{boost::multiprecision::numerator(m1), boost::multiprecision::numerator(m2)};
  }
  // Rational slope a = u/v: need m2 - a m1 = c with c rational, i.e.
  // v m2 - u m1 = v c, solvable in integers iff v c is an integer multiple of gcd(u, v).
  if (c.b != 0) return std::nullopt;
  const BigInt u = boost::multiprecision::numerator(alpha_.a);
  const BigInt v = boost::multiprecision::denominator(alpha_.a);
  const Rational vc = c.a * Rational(v);
  if (!is_integer(vc)) return std::nullopt;
  const BigInt target = boost::multiprecision::numerator(vc);
  // Extended Euclid on (v, -u).
  BigInt old_r = v, r = u < 0 ? BigInt(-u) : u, old_s = 1, s = 0, old_t = 0, t = 1;
  if (r == 0) {
    // Slope 0: m2 = c.
    return std::array<BigInt, 2>{BigInt(0), target / v};
  }
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt tmp = old_r - q * r; old_r = r; r = tmp;
    tmp = old_s - q * s; old_s = s; s = tmp;
    tmp = old_t - q * t; old_t = t; t = tmp;
  }
  // old_s * v + old_t * |u| = g.
  const BigInt g = old_r;
  if (target % g != 0) return std::nullopt;
  const BigInt scale = target / g;
  const BigInt m2 = old_s * scale;
  const BigInt m1 = (u < 0 ? old_t : BigInt(-old_t)) * scale;
  return std::array<BigInt, 2>{m1, m2};
}

std::array<Surd, 2> DenseLineOracle::normal_component(const BigInt& m1, const BigInt& m2) const {
  // m - ((m1 + alpha m2) / (1 + alpha^2)) (1, alpha)
  const Surd one{Rational(1), Rational(0)};
  const Surd sm1{Rational(m1), Rational(0)}, sm2{Rational(m2), Rational(0)};
  const Surd coef = div(add(sm1, mul(alpha_, sm2, d_)), add(one, mul(alpha_, alpha_, d_)), d_);
  return {sub(sm1, coef), sub(sm2, mul(coef, alpha_, d_))};
}

Surd DenseLineOracle::norm2(const std::array<Surd, 2>& p) const {
  return add(mul(p[0], p[0], d_), mul(p[1], p[1], d_));
}

std::optional<std::array<BigInt, 2>> DenseLineOracle::density_witness(const Rational& bound2, int window) const {
  const Surd bound{bound2, Rational(0)};
  for (int k = 1; k <= window; ++k) {
    for (int m1 : {k, -k}) {
      // The nearest m2 to alpha m1 has the smallest normal component in this column.
      const double guess = std::round(slope_value() * m1);
      for (double m2 : {guess - 1.0, guess, guess + 1.0}) {
        const auto w = normal_component(BigInt(m1), BigInt(static_cast<long long>(m2)));
        const Surd n2 = norm2(w);
        if (sign(n2, d_) > 0 && sign(sub(bound, n2), d_) > 0) {
          return std::array<BigInt, 2>{BigInt(m1), BigInt(static_cast<long long>(m2))};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace symkit
