#include "symkit/symspace.hpp"

#include <algorithm>
#include <cmath>

namespace symkit {

namespace {

void require_same(const SymPoint& x, const SymPoint& y, const char* what) {
  if (!x.pair || !y.pair || !same_pair(*x.pair, *y.pair)) {
    throw PreconditionError(std::string(what) + ": points belong to different pairs");
  }
}

double rel_diff(const Matrix& a, const Matrix& b) { return (a - b).norm() / (1.0 + a.norm()); }

// A composite of symmetries acting on representatives as h -> a sigma^parity(h).
// mu_p is (cartan(p), odd) and composition reads (a,p)(b,q) = (a sigma^p(b), p+q).
struct InnerWord {
  Matrix a;
  bool odd = false;
};

InnerWord compose(const MatrixSymmetricPair& p, const InnerWord& u, const InnerWord& v) {
  return {u.a * (u.odd ? p.sigma(v.a) : v.a), u.odd != v.odd};
}

InnerWord power(const MatrixSymmetricPair& p, InnerWord w, long long k) {
  InnerWord out{p.identity(), false};
  while (k > 0) {
    if (k & 1) out = compose(p, out, w);
    k >>= 1;
    if (k > 0) w = compose(p, w, w);
  }
  return out;
}

// mu_{Exp(v)}: the Cartan matrix of Exp(v) is exp(2V).
InnerWord symmetry_at(const MatrixSymmetricPair& p, const Vector& v) {
  return {num::mat_exp(2.0 * p.minus_element(v)), true};
}

SymPoint apply_to_base(const PairPtr& p, const InnerWord& w) {
  // rep = a sigma^parity(I) = a.
  return make_point(p, w.a);
}

}  // namespace

SymPoint make_point(PairPtr p, Matrix rep) {
  if (!p) throw PreconditionError("make_point: null pair");
  Matrix c = p->cartan(rep);
  return SymPoint{std::move(p), std::move(rep), std::move(c)};
}

SymPoint base_point(PairPtr p) {
  Matrix id = p->identity();
  return SymPoint{std::move(p), id, id};
}

double cartan_distance(const SymPoint& x, const SymPoint& y) {
  require_same(x, y, "cartan_distance");
  return (x.cartan - y.cartan).norm();
}

bool same_point(const SymPoint& x, const SymPoint& y, const Tolerance& tol) {
  return cartan_distance(x, y) <= tol.threshold(std::max(x.cartan.norm(), y.cartan.norm()));
}

SymPoint mu(const SymPoint& x, const SymPoint& y) {
  require_same(x, y, "mu");
  const auto& p = *x.pair;
  SymPoint out;
  out.pair = x.pair;
  out.cartan = x.cartan * num::inverse(y.cartan, p.tolerance()) * x.cartan;
  out.rep = x.cartan * p.sigma(y.rep);
  return out;
}

SymPoint exp_point(PairPtr p, const Vector& v) {
  const Matrix m = p->minus_element(v);
  SymPoint out;
  out.rep = num::mat_exp(m);
  out.cartan = num::mat_exp(2.0 * m);
  out.pair = std::move(p);
  return out;
}

Vector log_point(const SymPoint& x) {
  const Matrix half = 0.5 * num::mat_log(x.cartan);
  return x.pair->minus_coordinates(half);
}

SymPoint one_param(PairPtr p, const Vector& v, double t) { return exp_point(std::move(p), t * v); }

SymPoint translation(PairPtr p, const Vector& v, double s, const SymPoint& x) {
  return mu(one_param(p, v, s / 2.0), mu(base_point(p), x));
}

SymPoint tau_action(const Matrix& g, const SymPoint& x) {
  const auto& p = *x.pair;
  if (g.rows() != p.ambient_n() || g.cols() != p.ambient_n()) throw DimensionError("tau_action: size");
  SymPoint out;
  out.pair = x.pair;
  out.rep = g * x.rep;
  out.cartan = g * x.cartan * num::inverse(p.sigma(g), p.tolerance());
  return out;
}

SymPoint trotter_sum_sym(PairPtr p, const Vector& x, const Vector& y, long long k) {
  if (k < 1) throw PreconditionError("trotter_sum_sym: k must be at least 1");
  const double h = 1.0 / (2.0 * static_cast<double>(k));
  const InnerWord step = compose(*p, symmetry_at(*p, h * x), symmetry_at(*p, -h * y));
  return apply_to_base(p, power(*p, step, k));
}

SymPoint trotter_bracket_sym(PairPtr p, const Vector& x, const Vector& y, const Vector& z,
                             long long k, long long l) {
  if (k < 1 || l < 1) throw PreconditionError("trotter_bracket_sym: k and l must be at least 1");
  const auto& pr = *p;
  const double s = 1.0 / (2.0 * static_cast<double>(l) * std::sqrt(static_cast<double>(k)));
  const InnerWord mx = symmetry_at(pr, s * x), mxn = symmetry_at(pr, -s * x);
  const InnerWord my = symmetry_at(pr, s * y), myn = symmetry_at(pr, -s * y);
  const InnerWord g_step = compose(pr, compose(pr, mx, myn), compose(pr, mxn, my));
  const InnerWord h_step = compose(pr, compose(pr, mx, my), compose(pr, mxn, myn));
  const InnerWord g_kl = power(pr, g_step, l * l);
  const InnerWord h_kl = power(pr, h_step, l * l);
  const InnerWord mz = symmetry_at(pr, z / (2.0 * static_cast<double>(k)));
  const InnerWord step = compose(pr, compose(pr, g_kl, mz), compose(pr, h_kl, mz));
  return apply_to_base(p, power(pr, step, k * k));
}

double chain_identity_check(PairPtr p, const std::vector<Vector>& xs, const std::vector<Vector>& ys) {
  if (xs.size() != ys.size()) throw DimensionError("chain_identity_check: word lengths differ");
  // Left side: q of the group word, read from the outside in.
  Matrix word = p->identity();
  for (std::size_t i = xs.size(); i-- > 0;) {
    word = word * num::mat_exp(p->minus_element(xs[i])) * num::mat_exp(p->minus_element(ys[i]));
  }
  const SymPoint lhs = make_point(p, word);
  // Right side: apply the symmetries to the base point, innermost first.
  SymPoint rhs = base_point(p);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rhs = mu(exp_point(p, -0.5 * ys[i]), rhs);
    rhs = mu(exp_point(p, 0.5 * xs[i]), rhs);
  }
  return cartan_distance(lhs, rhs);
}

LieTripleSystem lts_of_pair(const MatrixSymmetricPair& p) {
  return p.algebra().minus_lts(p.tolerance()).relabeled(p.label());
}

PointMap sym_morphism(const PairMorphism& f) {
  return [f](const SymPoint& x) {
    if (!same_pair(*x.pair, *f.source)) throw PreconditionError("sym_morphism: point of another pair");
    return make_point(f.target, f.group_map(x.rep));
  };
}

SymPoint bracket_target(PairPtr p, const Vector& x, const Vector& y, const Vector& z) {
  const Matrix xm = p->minus_element(x), ym = p->minus_element(y), zm = p->minus_element(z);
  const Matrix b = num::commutator(num::commutator(xm, ym), zm);
  return exp_point(p, p->minus_coordinates(b));
}

std::vector<ConvergenceRow> trotter_sum_table(PairPtr p, const Vector& x, const Vector& y,
                                              const std::vector<long long>& ks) {
  const SymPoint target = exp_point(p, x + y);
  std::vector<ConvergenceRow> rows;
  for (long long k : ks) rows.push_back({k, 0, cartan_distance(trotter_sum_sym(p, x, y, k), target)});
  return rows;
}

std::vector<ConvergenceRow> trotter_bracket_table(
    PairPtr p, const Vector& x, const Vector& y, const Vector& z,
    const std::vector<std::pair<long long, long long>>& kls) {
  const SymPoint target = bracket_target(p, x, y, z);
  std::vector<ConvergenceRow> rows;
  for (auto [k, l] : kls) {
    rows.push_back({k, l, cartan_distance(trotter_bracket_sym(p, x, y, z, k, l), target)});
  }
  return rows;
}

std::vector<long long> dyadic_range(int k_min, int k_max) {
  std::vector<long long> out;
  for (int e = k_min; e <= k_max; ++e) out.push_back(1LL << e);
  return out;
}

double ReflectionAxiomReport::max() const {
  return std::max({involutive, fixed_point, automorphism, isolated, tangent_product});
}

ReflectionAxiomReport check_reflection_axioms(PairPtr p, std::mt19937_64& rng, int samples,
                                              double radius) {
  ReflectionAxiomReport rep;
  const int m = p->algebra().minus_dim();
  auto point = [&] {
    // Moving off the base point by a group element exercises non-trivial reps.
    const SymPoint q = exp_point(p, sample::in_ball(rng, m, radius));
    return tau_action(sample::group_element(*p, rng, 1, 0.3), q);
  };
  for (int s = 0; s < samples; ++s) {
    const SymPoint x = point(), y = point(), z = point();
    rep.involutive = std::max(rep.involutive, rel_diff(mu(x, mu(x, y)).cartan, y.cartan));
    rep.fixed_point = std::max(rep.fixed_point, rel_diff(mu(x, x).cartan, x.cartan));
    rep.automorphism = std::max(
        rep.automorphism, rel_diff(mu(x, mu(y, z)).cartan, mu(mu(x, y), mu(x, z)).cartan));
  }
  if (m == 0) return rep;

  // d(mu_b) at b in normal coordinates, by central differences.
  const double h = 1e-4;
  const SymPoint b = base_point(p);
  Matrix jac(m, m);
  for (int j = 0; j < m; ++j) {
    const Vector e = Vector::Unit(m, j);
    const Vector plus = log_point(mu(b, exp_point(p, h * e)));
    const Vector minus = log_point(mu(b, exp_point(p, -h * e)));
    jac.col(j) = (plus - minus) / (2.0 * h);
  }
  rep.isolated = (jac + Matrix::Identity(m, m)).norm();

  // Richardson: the O(eps^2) term cancels in (4 D(eps/2) - D(eps)) / 3 where
  // D(eps) = (log mu(Exp(eps u), Exp(eps w)) - eps (2u - w)) / eps.
  for (int s = 0; s < std::max(1, samples / 10); ++s) {
    const Vector u = sample::on_sphere(rng, m, 1.0), w = sample::on_sphere(rng, m, 1.0);
    auto defect = [&](double eps) {
      const Vector l = log_point(mu(exp_point(p, eps * u), exp_point(p, eps * w)));
      return Vector((l - eps * (2.0 * u - w)) / eps);
    };
    const double eps = 1e-2;
    const Vector extrapolated = (4.0 * defect(eps / 2.0) - defect(eps)) / 3.0;
    rep.tangent_product = std::max(rep.tangent_product, extrapolated.norm());
  }
  return rep;
}

}  // namespace symkit
