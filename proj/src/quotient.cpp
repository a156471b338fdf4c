#include "symkit/quotient.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace symkit {

namespace {

// Sampled identities are compared after several exponentials, square roots
// and inversions; 1e-8 leaves room for that without hiding O(1) failures.
const Tolerance kSampleTol(1e-8, 1e-8);

SymPoint shifted(const SymPoint& x, const Vector& v) {
  const auto& p = *x.pair;
  return make_point(x.pair, Matrix(x.rep * num::mat_exp(p.minus_element(v))));
}

Vector in_subspace(std::mt19937_64& rng, const LinearSubspace& s, double radius) {
  if (s.dim() == 0) return Vector::Zero(s.ambient_dim());
  return s.basis() * sample::in_ball(rng, s.dim(), radius);
}

// Orthogonal complement of `sub` inside the span of the orthonormal columns of `e`.
Matrix complement_within(const Matrix& e, const LinearSubspace& sub) {
  if (e.cols() == 0) return Matrix(e.rows(), 0);
  if (sub.dim() == 0) return e;
  const LinearSubspace inside = LinearSubspace::span(Matrix(e.transpose() * sub.basis()));
  return e * inside.orthogonal_complement().basis();
}

Matrix adjoint_on_quotient(const MatrixSymmetricPair& p, const Matrix& proj, const Matrix& qbasis,
                           const Matrix& g) {
  const int d = p.dim();
  const Matrix gi = num::inverse(g, p.tolerance());
  Matrix ad(d, d);
  for (int j = 0; j < d; ++j) ad.col(j) = p.coordinates(Matrix(g * p.basis()[j] * gi));
  return proj * ad * qbasis;
}

double rate(int good, int decided) { return decided == 0 ? 1.0 : static_cast<double>(good) / decided; }

}  // namespace

Membership CongruenceRelation::relates(const SymPoint& x, const SymPoint& y, const Tolerance& tol) const {
  if (!same_pair(*x.pair, *pair) || !same_pair(*y.pair, *pair)) {
    throw PreconditionError("relates: points of another pair");
  }
  const SymPoint z = make_point(pair, Matrix(num::inverse(x.rep, pair->tolerance()) * y.rep));
  return klass.contains(z, tol);
}

CongruenceRelation congruence_from_ideal(PairPtr p, const LinearSubspace& n, const Tolerance& tol) {
  const int m = p->algebra().minus_dim();
  if (n.ambient_dim() != m) throw DimensionError("congruence_from_ideal: n lives in the wrong dimension");
  if (!is_ideal(lts_of_pair(*p), n, tol)) throw PreconditionError("congruence_from_ideal: n is not an ideal");
  CongruenceRelation r;
  r.pair = p;
  r.n = n;
  r.l_algebra = ideal_bracket_plus_n(p->algebra(), n, tol);
  r.klass = generate_integral(n, p, tol);
  r.klass.label = "class of the base point";
  return r;
}

bool normal_lts_is_ideal(const ReflectionSubspace& n, const Tolerance& tol) {
  return is_ideal(lts_of_pair(*n.pair), lts_of_subspace(n, tol), tol);
}

CongruenceReport check_congruence(const CongruenceRelation& r, int samples, std::uint64_t seed,
                                  const Tolerance& tol) {
  const auto& p = r.pair;
  const int m = p->algebra().minus_dim();
  std::mt19937_64 rng(seed);
  const auto point = [&] { return exp_point(p, sample::in_ball(rng, m, 0.6)); };
  const auto related = [&](const SymPoint& x) { return shifted(x, in_subspace(rng, r.n, 0.3)); };

  CongruenceReport rep;
  rep.samples = samples;
  int good[5] = {0, 0, 0, 0, 0}, decided[5] = {0, 0, 0, 0, 0};
  const auto record = [&](int k, Membership premise, Membership conclusion) {
    if (premise == Membership::no) return;
    if (premise == Membership::unknown || conclusion == Membership::unknown) {
      ++rep.undecided;
      return;
    }
    ++decided[k];
    good[k] += conclusion == Membership::yes;
  };
  for (int s = 0; s < samples; ++s) {
    const SymPoint x = point();
    const SymPoint y = related(x);
    const SymPoint z = related(y);
    record(0, Membership::yes, r.relates(x, x, tol));
    const Membership xy = r.relates(x, y, tol);
    record(1, xy, r.relates(y, x, tol));
    const Membership yz = r.relates(y, z, tol);
    const Membership both = xy == Membership::yes && yz == Membership::yes
                                ? Membership::yes
                                : (xy == Membership::no || yz == Membership::no ? Membership::no : Membership::unknown);
    record(2, both, r.relates(x, z, tol));

    const SymPoint x2 = point();
    const SymPoint y2 = related(x2);
    const Membership x2y2 = r.relates(x2, y2, tol);
    const Membership pair_premise =
        xy == Membership::yes && x2y2 == Membership::yes
            ? Membership::yes
            : (xy == Membership::no || x2y2 == Membership::no ? Membership::no : Membership::unknown);
    record(3, pair_premise, r.relates(mu(x, x2), mu(y, y2), tol));

    const SymPoint c = point();
    record(4, xy, r.relates(mu(c, x), mu(c, y), tol));
  }
  rep.reflexive = rate(good[0], decided[0]);
  rep.symmetric = rate(good[1], decided[1]);
  rep.transitive = rate(good[2], decided[2]);
  rep.reflection = rate(good[3], decided[3]);
  rep.inner = rate(good[4], decided[4]);
  return rep;
}

ClosureReport relation_closure_check(const CongruenceRelation& r, int samples, std::uint64_t seed, double radius,
                                     const Tolerance& tol) {
  const auto& p = r.pair;
  const int m = p->algebra().minus_dim();
  const LinearSubspace f = r.n.orthogonal_complement();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.25, 1.0);
  ClosureReport rep;
  const auto escape = [&](const Vector& offset, double gap) {
    if (rep.passed) {
      rep.passed = false;
      rep.limit = offset;
      rep.final_gap = gap;
    }
  };

  for (int s = 0; s < samples; ++s) {
    const SymPoint x = exp_point(p, sample::in_ball(rng, m, radius));

    if (r.n.dim() > 0) {
      const Vector target = in_subspace(rng, r.n, radius);
      bool in_r = true;
      double gap = 0.0;
      for (int i = 1; i <= 12 && in_r; ++i) {
        const double shrink = std::ldexp(1.0, -i);
        in_r = r.relates(x, shifted(x, (1.0 - shrink) * target), tol) == Membership::yes;
        gap = shrink * target.norm();
      }
      if (in_r) {
        ++rep.sequences;
        if (r.relates(x, shifted(x, target), tol) == Membership::no) escape(target, gap);
      }
    }

    if (r.klass.approximants && f.dim() > 0) {
      const Vector target = f.basis() * sample::on_sphere(rng, f.dim(), radius * frac(rng));
      std::vector<Vector> seq;
      for (const Vector& w : r.klass.approximants(f, target)) {
        if (r.relates(x, shifted(x, w), tol) == Membership::yes) seq.push_back(w);
      }
      if (seq.size() < 2) continue;
      const double gap = (seq.back() - target).norm();
      if (gap > 1e-2 * target.norm()) continue;
      ++rep.sequences;
      if (r.relates(x, shifted(x, target), tol) == Membership::no) escape(target, gap);
    }
  }
  return rep;
}

Matrix QuotientResult::quotient_ad(const Vector& x) const {
  return quotient_projection * source->algebra().ad(x) * quotient_basis;
}

Matrix QuotientResult::quotient_Ad(const Matrix& g) const {
  return adjoint_on_quotient(*source, quotient_projection, quotient_basis, g);
}

QuotientResult quotient_theorem_pipeline(PairPtr p, const LinearSubspace& n, const QuotientOptions& options,
                                         const Tolerance& tol) {
  const SymmetricLieAlgebra& g = p->algebra();
  const int m = g.minus_dim();
  const int d = g.dim();
  if (n.ambient_dim() != m) throw DimensionError("quotient: n lives in the wrong dimension");
  if (!is_ideal(lts_of_pair(*p), n, tol)) throw PreconditionError("quotient: n is not an ideal of the triple system");

  QuotientResult qr;
  qr.source = p;
  qr.n = n;

  // Go/no-go: N = <Exp(n)> must be a symmetric subspace.
  const ReflectionSubspace big = generate_integral(n, p, tol);
  const LinearSubspace extracted = lts_of_subspace(big, tol);
  qr.gate.chart = exp_chart_split(big, extracted, options.chart, tol);
  qr.gate.complement = split_complement_criterion(big, extracted, extracted.orthogonal_complement(),
                                                  options.complement_samples, options.complement_radius,
                                                  options.chart.seed, tol);
  qr.gate.passed = qr.gate.chart.passed && qr.gate.complement.passed;
  if (!qr.gate.passed) {
    throw GateRejection(
        "N = <Exp(n)> is not a symmetric subspace of M: the exponential chart does not split it down to radius " +
            std::to_string(qr.gate.chart.radius) +
            ", so there is no quotient M/N whose quotient map is a weak submersion",
        qr.gate);
  }

  qr.l_algebra = ideal_ker_psi_plus_n(g, n, tol);
  const Matrix& lb = qr.l_algebra.basis();
  const Matrix id = Matrix::Identity(d, d);
  const LinearSubspace l_plus = LinearSubspace::span(Matrix((id + g.theta()) / 2.0 * lb), tol);
  const LinearSubspace l_minus = LinearSubspace::span(Matrix((id - g.theta()) / 2.0 * lb), tol);
  const Matrix qp = complement_within(g.plus().basis(), l_plus);
  const Matrix qm = complement_within(g.minus().basis(), l_minus);
  const int rp = static_cast<int>(qp.cols()), rm = static_cast<int>(qm.cols());
  const int r = rp + rm;
  if (r + qr.l_algebra.dim() != d) {
    throw VerificationError("quotient: l is not the sum of its theta-eigenspace parts");
  }
  qr.quotient_basis = Matrix(d, r);
  qr.quotient_basis.leftCols(rp) = qp;
  qr.quotient_basis.rightCols(rm) = qm;
  Matrix split(d, d);
  split.leftCols(r) = qr.quotient_basis;
  split.rightCols(d - r) = lb;
  qr.quotient_projection = split.inverse().topRows(r);

  // Faithfulness of x -> ad_{g/l}(x): its kernel must be exactly l.
  Matrix flat(static_cast<Eigen::Index>(r) * r, d);
  for (int j = 0; j < d; ++j) flat.col(j) = num::flatten(qr.quotient_ad(Vector::Unit(d, j)));
  for (int i = 0; i < qr.l_algebra.dim(); ++i) {
    qr.faithfulness_residual = std::max(qr.faithfulness_residual, qr.quotient_ad(lb.col(i)).norm());
  }
  const int kernel_dim = r == 0 ? d : static_cast<int>(num::nullspace(flat, tol).cols());
  if (kernel_dim != qr.l_algebra.dim()) {
    throw FaithfulnessError("quotient: ad on g/l has a kernel of dimension " + std::to_string(kernel_dim) +
                                " but l has dimension " + std::to_string(qr.l_algebra.dim()) +
                                "; g/l has no faithful adjoint realization",
                            kernel_dim, qr.l_algebra.dim());
  }
  if (qr.faithfulness_residual > tol.threshold(1.0 + g.scale())) {
    throw VerificationError("quotient: l is not annihilated by ad on g/l");
  }

  if (r == 0) {
    qr.quotient_pair = point_pair();
    qr.projection_algebra = Matrix(0, m);
    const PairPtr target = qr.quotient_pair;
    qr.projection_points = [target](const SymPoint&) { return base_point(target); };
    return qr;
  }

  std::vector<Matrix> basis;
  for (int i = 0; i < r; ++i) basis.push_back(qr.quotient_ad(qr.quotient_basis.col(i)));
  Vector signs = -Vector::Ones(r);
  signs.head(rp).setOnes();
  qr.quotient_pair = std::make_shared<const MatrixSymmetricPair>(
      r, std::move(basis), SigmaRule::conjugation(Matrix(signs.asDiagonal())), "quotient(" + p->label() + ")",
      p->tolerance());
  qr.projection_algebra = qr.quotient_pair->algebra().minus().basis().transpose() * qr.quotient_projection *
                          g.minus().basis();

  const PairPtr target = qr.quotient_pair;
  const Matrix proj = qr.quotient_projection, qbasis = qr.quotient_basis;
  qr.projection_points = [p, target, proj, qbasis](const SymPoint& x) {
    if (!same_pair(*x.pair, *p)) throw PreconditionError("projection: point of another pair");
    return make_point(target, adjoint_on_quotient(*p, proj, qbasis, x.rep));
  };
  return qr;
}

WeakSubmersionReport weak_submersion_report(const QuotientResult& qr, int samples, std::uint64_t seed,
                                            const Tolerance& tol) {
  WeakSubmersionReport rep;
  const auto& p = qr.source;
  const int m = p->algebra().minus_dim();
  const Matrix& a = qr.projection_algebra;
  const int target_dim = qr.quotient_pair->algebra().minus_dim();
  rep.full_row_rank = a.rows() == target_dim && a.cols() == m &&
                      (target_dim == 0 || num::numerical_rank(a, tol) == target_dim);
  if (a.cols() == m) {
    const LinearSubspace ker =
        a.rows() == 0 ? LinearSubspace::full(m) : LinearSubspace::span(num::nullspace(a, tol), tol);
    rep.kernel_is_n = ker.equals(qr.n, kSampleTol);
  }

  std::mt19937_64 rng(seed);
  int good = 0;
  for (int s = 0; s < samples; ++s) {
    const SymPoint x = make_point(p, sample::group_element(*p, rng, 3, 0.7));
    const SymPoint y = make_point(p, sample::group_element(*p, rng, 3, 0.7));
    const SymPoint lhs = qr.projection_points(mu(x, y));
    const SymPoint rhs = mu(qr.projection_points(x), qr.projection_points(y));
    const double res = cartan_distance(lhs, rhs);
    rep.max_morphism_residual = std::max(rep.max_morphism_residual, res);
    good += res <= kSampleTol.threshold(lhs.cartan.norm());
  }
  rep.samples = samples;
  rep.morphism_pass_rate = rate(good, samples);
  return rep;
}

bool weak_submersion_check(const QuotientResult& qr, int samples, std::uint64_t seed, const Tolerance& tol) {
  return weak_submersion_report(qr, samples, seed, tol).passed();
}

bool QuotientReport::passed(double tensor_tol) const {
  return tensor_residual <= tensor_tol && ranks.kernel_is_n && ranks.l_contains_l_prime &&
         ranks.projection_rank == ranks.quotient_minus_dim && ranks.faithful_kernel_dim == ranks.l_dim &&
         rates.exp_functoriality == 1.0 && rates.kernel_relation == 1.0 && rates.morphism == 1.0;
}

QuotientReport quotient_report(const QuotientResult& qr, int samples, std::uint64_t seed, const Tolerance& tol) {
  const auto& p = qr.source;
  const SymmetricLieAlgebra& g = p->algebra();
  const int m = g.minus_dim();
  QuotientReport rep;
  rep.l_basis = qr.l_algebra.basis();
  rep.faithfulness_residual = qr.faithfulness_residual;

  // Tensor comparison: the formal quotient lives on the orthogonal complement
  // C of n, which the projection maps isomorphically onto (g/l)_-.
  rep.quotient_lts_pair = lts_of_pair(*qr.quotient_pair);
  const LtsQuotient formal = quotient_lts(lts_of_pair(*p), qr.n, tol);
  rep.quotient_lts_formal = formal.quotient;
  rep.alignment = qr.projection_algebra * formal.complement.basis();
  const int qdim = rep.quotient_lts_pair.dim();
  if (rep.alignment.rows() != qdim || rep.alignment.cols() != formal.quotient.dim() ||
      (qdim > 0 && num::numerical_rank(rep.alignment, tol) != qdim)) {
    rep.tensor_residual = std::numeric_limits<double>::infinity();
  } else {
    rep.tensor_residual = LtsMorphism{formal.quotient, rep.quotient_lts_pair, rep.alignment}.homomorphism_residual();
  }

  const WeakSubmersionReport ws = weak_submersion_report(qr, samples, seed, tol);
  rep.ranks.g_dim = g.dim();
  rep.ranks.l_dim = qr.l_algebra.dim();
  const LinearSubspace l_prime = ideal_bracket_plus_n(g, qr.n, tol);
  rep.ranks.l_prime_dim = l_prime.dim();
  rep.ranks.l_contains_l_prime = qr.l_algebra.contains(l_prime, tol);
  rep.ranks.quotient_minus_dim = qr.quotient_pair->algebra().minus_dim();
  rep.ranks.projection_rank = rep.ranks.quotient_minus_dim == 0 ? 0 : num::numerical_rank(qr.projection_algebra, tol);
  rep.ranks.kernel_is_n = ws.kernel_is_n;
  {
    const int r = static_cast<int>(qr.quotient_basis.cols());
    Matrix flat(static_cast<Eigen::Index>(r) * r, g.dim());
    for (int j = 0; j < g.dim(); ++j) flat.col(j) = num::flatten(qr.quotient_ad(Vector::Unit(g.dim(), j)));
    rep.ranks.faithful_kernel_dim = r == 0 ? g.dim() : static_cast<int>(num::nullspace(flat, tol).cols());
  }

  std::mt19937_64 rng(seed + 1);
  int exp_good = 0;
  for (int s = 0; s < samples; ++s) {
    const Vector v = sample::in_ball(rng, m, 1.0);
    const SymPoint lhs = qr.projection_points(exp_point(p, v));
    const SymPoint rhs = exp_point(qr.quotient_pair, Vector(qr.projection_algebra * v));
    exp_good += cartan_distance(lhs, rhs) <= kSampleTol.threshold(lhs.cartan.norm());
  }

  const CongruenceRelation rel = congruence_from_ideal(p, qr.n, tol);
  int rel_good = 0, rel_decided = 0;
  for (int s = 0; s < samples; ++s) {
    const SymPoint x = exp_point(p, sample::in_ball(rng, m, 0.5));
    const SymPoint y = s % 2 == 0 ? shifted(x, in_subspace(rng, qr.n, 0.5)) : exp_point(p, sample::in_ball(rng, m, 0.5));
    const Membership mem = rel.relates(x, y, tol);
    if (mem == Membership::unknown) {
      ++rep.rates.undecided;
      continue;
    }
    ++rel_decided;
    const bool same = same_point(qr.projection_points(x), qr.projection_points(y), kSampleTol);
    rel_good += (mem == Membership::yes) == same;
  }
  rep.rates.samples = samples;
  rep.rates.exp_functoriality = rate(exp_good, samples);
  rep.rates.kernel_relation = rate(rel_good, rel_decided);
  rep.rates.morphism = ws.morphism_pass_rate;
  return rep;
}

}  // namespace symkit
