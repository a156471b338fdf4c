#pragma once

#include <functional>
#include <random>
#include <vector>

#include "symkit/sympair.hpp"

namespace symkit {

/// A point gK of M = G/K. The Cartan image g sigma(g)^-1 is the canonical
/// form: two points are equal iff their Cartan matrices agree.
struct SymPoint {
  PairPtr pair;
  Matrix rep;
  Matrix cartan;
};

/// Point of the coset of `rep`; computes the Cartan matrix.
SymPoint make_point(PairPtr p, Matrix rep);

SymPoint base_point(PairPtr p);

/// Frobenius distance of Cartan matrices.
double cartan_distance(const SymPoint& x, const SymPoint& y);
bool same_point(const SymPoint& x, const SymPoint& y, const Tolerance& tol = {});

/// mu(x, y) = x.y: Cartan x y^-1 x, representative x.rep sigma(x.rep)^-1 sigma(y.rep).
SymPoint mu(const SymPoint& x, const SymPoint& y);

/// Exp(v) for v in g_- coordinates: rep exp(V), Cartan exp(2V).
SymPoint exp_point(PairPtr p, const Vector& v);

/// Inverse of exp_point on the normal chart: half the principal log of the
/// Cartan matrix. DomainError outside the log domain or off g_-.
Vector log_point(const SymPoint& x);

/// alpha_v(t) = Exp(t v).
SymPoint one_param(PairPtr p, const Vector& v, double t);

/// tau_{alpha,s}(x) = mu(alpha(s/2), mu(b, x)) with alpha through the base point.
SymPoint translation(PairPtr p, const Vector& v, double s, const SymPoint& x);

/// g.x; rep g x.rep.
SymPoint tau_action(const Matrix& g, const SymPoint& x);

/// (mu_{Exp(x/2k)} mu_{Exp(-y/2k)})^k (b).
SymPoint trotter_sum_sym(PairPtr p, const Vector& x, const Vector& y, long long k);

/// The (k,l) approximant of Exp([x,y,z]):
///   (g_kl mu_{Exp(z/2k)} h_kl mu_{Exp(z/2k)})^(k^2) (b), with s = 1/(2 l sqrt(k)),
///   g_kl = (mu_{Exp(xs)} mu_{Exp(-ys)} mu_{Exp(-xs)} mu_{Exp(ys)})^(l^2),
///   h_kl = (mu_{Exp(xs)} mu_{Exp(ys)} mu_{Exp(-xs)} mu_{Exp(-ys)})^(l^2).
SymPoint trotter_bracket_sym(PairPtr p, const Vector& x, const Vector& y, const Vector& z,
                             long long k, long long l);

/// Cartan distance between q(exp(x_n)exp(y_n)...exp(x_1)exp(y_1)) and
/// (mu_{Exp(x_n/2)} mu_{Exp(-y_n/2)} ... mu_{Exp(x_1/2)} mu_{Exp(-y_1/2)})(b).
/// xs[0] is x_1.
double chain_identity_check(PairPtr p, const std::vector<Vector>& xs, const std::vector<Vector>& ys);

LieTripleSystem lts_of_pair(const MatrixSymmetricPair& p);

using PointMap = std::function<SymPoint(const SymPoint&)>;

PointMap sym_morphism(const PairMorphism& f);

/// Target of the bracket approximant: Exp([[x,y],z]).
SymPoint bracket_target(PairPtr p, const Vector& x, const Vector& y, const Vector& z);

struct ConvergenceRow {
  long long k = 0;
  long long l = 0;  // 0 for the sum formula
  double error = 0.0;
};

std::vector<ConvergenceRow> trotter_sum_table(PairPtr p, const Vector& x, const Vector& y,
                                              const std::vector<long long>& ks);
std::vector<ConvergenceRow> trotter_bracket_table(PairPtr p, const Vector& x, const Vector& y,
                                                  const Vector& z,
                                                  const std::vector<std::pair<long long, long long>>& kls);

/// Powers of two from 2^k_min to 2^k_max inclusive (empty when k_min > k_max).
std::vector<long long> dyadic_range(int k_min, int k_max);

/// Largest sampled residuals of the reflection-space axioms, relative to the
/// size of the Cartan matrices involved.
struct ReflectionAxiomReport {
  double involutive = 0.0;   // mu_x(mu_x(y)) = y
  double fixed_point = 0.0;  // mu_x(x) = x
  double automorphism = 0.0; // mu_x(mu(y,z)) = mu(mu_x y, mu_x z)
  double isolated = 0.0;     // d(mu_b) at b = -id in normal coordinates
  double tangent_product = 0.0;  // mu(Exp(eu), Exp(ew)) = Exp(e(2u - w)) + O(e^2)

  double max() const;
};

ReflectionAxiomReport check_reflection_axioms(PairPtr p, std::mt19937_64& rng, int samples,
                                              double radius = 1.0);

}  // namespace symkit
