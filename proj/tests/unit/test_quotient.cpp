#include <random>

#include "doctest.h"
#include "symkit/catalog.hpp"
#include "symkit/quotient.hpp"

using namespace symkit;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

LinearSubspace first_factor() { return LinearSubspace::coordinate(4, std::vector<int>{0, 1}); }

PairPtr s2xs2() { return build_model("product(sphere(2),sphere(2))").pair; }

}  // namespace

TEST_SUITE("quotient") {

TEST_CASE("normal subspaces have ideal triple systems") {
  const auto p = sphere_pair(2);
  CHECK(normal_lts_is_ideal(point_subspace(p)));
  CHECK(normal_lts_is_ideal(whole_subspace(p)));
  const auto prod = build_model("product(sphere(2),sphere(2))");
  CHECK(normal_lts_is_ideal(prod.designated_subspaces.at(0)));
  // A great circle of S^2 is not normal: its line is no ideal of a simple system.
  CHECK_FALSE(normal_lts_is_ideal(build_model("sphere(2)").designated_subspaces.at(0)));
}

TEST_CASE("congruence from the zero and the full ideal") {
  const auto p = sphere_pair(2);
  const auto eq = congruence_from_ideal(p, LinearSubspace::zero(2));
  const auto all = congruence_from_ideal(p, LinearSubspace::full(2));
  std::mt19937_64 rng(5);
  for (int s = 0; s < 20; ++s) {
    const auto x = exp_point(p, sample::in_ball(rng, 2, 0.6));
    const auto y = exp_point(p, sample::in_ball(rng, 2, 0.6));
    CHECK(eq.relates(x, x) == Membership::yes);
    CHECK(eq.relates(x, y) == Membership::no);
    CHECK(all.relates(x, y) == Membership::yes);
  }
  CHECK(eq.l_algebra.dim() == 0);
  CHECK(all.l_algebra.dim() == 3);
  CHECK_THROWS_AS(congruence_from_ideal(p, LinearSubspace::coordinate(2, std::vector<int>{0})), PreconditionError);
  CHECK_THROWS_AS(congruence_from_ideal(p, LinearSubspace::zero(3)), DimensionError);
}

TEST_CASE("product congruence: related iff the second Cartan blocks agree") {
  const auto p = s2xs2();
  const auto r = congruence_from_ideal(p, first_factor());
  std::mt19937_64 rng(9);
  int related = 0;
  for (int s = 0; s < 60; ++s) {
    Vector u = sample::in_ball(rng, 4, 0.6);
    Vector v = sample::in_ball(rng, 4, 0.6);
    if (s % 2 == 0) v.tail(2) = u.tail(2);
    const auto x = exp_point(p, u);
    const auto y = exp_point(p, v);
    const bool blocks = (x.cartan.bottomRightCorner(3, 3) - y.cartan.bottomRightCorner(3, 3)).norm() < 1e-9;
    const Membership mem = r.relates(x, y);
    REQUIRE(mem != Membership::unknown);
    CHECK((mem == Membership::yes) == blocks);
    related += blocks;
  }
  CHECK(related == 30);
}

TEST_CASE("congruence axioms on samples (property)") {
  const auto p = s2xs2();
  for (const auto& n : {LinearSubspace::zero(4), first_factor(), LinearSubspace::full(4)}) {
    const auto rep = check_congruence(congruence_from_ideal(p, n), 40);
    CHECK(rep.passed());
    CHECK(rep.undecided == 0);
  }
  const auto spd = spd_pair(2);
  const auto scalars = LinearSubspace::span(Matrix(spd->minus_coordinates(Matrix::Identity(2, 2))));
  CHECK(check_congruence(congruence_from_ideal(spd, scalars), 40).passed());
}

TEST_CASE("relation closure") {
  const auto p = sphere_pair(2);
  CHECK(relation_closure_check(congruence_from_ideal(p, LinearSubspace::zero(2)), 10).passed);

  const auto prod = congruence_from_ideal(s2xs2(), first_factor());
  const auto rep = relation_closure_check(prod, 10);
  CHECK(rep.passed);
  CHECK(rep.sequences == 10);

  const auto tor = build_model("torus_abelian(0,1,2)");
  const auto dense = congruence_from_ideal(tor.pair, tor.designated_subsystems.at(2).seed);
  const auto bad = relation_closure_check(dense, 10);
  CHECK_FALSE(bad.passed);
  REQUIRE(bad.limit.has_value());
  CHECK(bad.final_gap < 1e-2 * bad.limit->norm());
  // The escaping limit is off the line.
  CHECK_FALSE(dense.n.contains(*bad.limit));

  const auto rat = build_model("torus_abelian(1/2,0,2)");
  CHECK(relation_closure_check(congruence_from_ideal(rat.pair, rat.designated_subsystems.at(2).seed), 10).passed);
}

TEST_CASE("pipeline: S2 x S2 modulo the first factor") {
  const auto p = s2xs2();
  const auto qr = quotient_theorem_pipeline(p, first_factor());
  CHECK(qr.gate.passed);
  // ker(psi) is the rotation algebra of the first factor's isotropy, so l = so(3) + 0.
  CHECK(qr.l_algebra.dim() == 3);
  CHECK(qr.quotient_pair->dim() == 3);
  CHECK(qr.quotient_pair->algebra().minus_dim() == 2);
  CHECK(qr.faithfulness_residual < 1e-12);
  CHECK(weak_submersion_check(qr));

  const auto rep = quotient_report(qr);
  CHECK(rep.tensor_residual < 1e-8);
  CHECK(rep.ranks.l_contains_l_prime);
  CHECK(rep.ranks.kernel_is_n);
  CHECK(rep.ranks.projection_rank == 2);
  CHECK(rep.rates.exp_functoriality == 1.0);
  CHECK(rep.rates.kernel_relation == 1.0);
  CHECK(rep.rates.morphism == 1.0);
  CHECK(rep.passed());

  // Lts(M/N) is the second factor: compare with the S^2 tensor through the
  // projection restricted to the second block.
  const Matrix t = qr.projection_algebra.rightCols(2);
  CHECK(num::numerical_rank(t) == 2);
  const LtsMorphism iso{lts_of_pair(*sphere_pair(2)), lts_of_pair(*qr.quotient_pair), t};
  CHECK(iso.homomorphism_residual() < 1e-8);
}

TEST_CASE("pipeline: zero ideal on a centerless pair reproduces the pair") {
  const auto p = sphere_pair(2);
  const auto qr = quotient_theorem_pipeline(p, LinearSubspace::zero(2));
  CHECK(qr.l_algebra.dim() == 0);
  CHECK(qr.quotient_pair->dim() == 3);
  const Matrix& a = qr.projection_algebra;
  REQUIRE(a.rows() == 2);
  CHECK(num::numerical_rank(a) == 2);
  const LtsMorphism iso{lts_of_pair(*p), lts_of_pair(*qr.quotient_pair), a};
  CHECK(iso.homomorphism_residual() < 1e-8);
  // pi is injective: distinct points stay distinct.
  const auto x = exp_point(p, vec({0.3, 0.1}));
  const auto y = exp_point(p, vec({0.1, 0.3}));
  CHECK_FALSE(same_point(qr.projection_points(x), qr.projection_points(y)));
  CHECK(quotient_report(qr).passed());
}

TEST_CASE("pipeline: the full ideal collapses to a point") {
  const auto p = sphere_pair(2);
  const auto qr = quotient_theorem_pipeline(p, LinearSubspace::full(2));
  CHECK(qr.quotient_pair->dim() == 0);
  CHECK(qr.projection_algebra.rows() == 0);
  CHECK(weak_submersion_check(qr));
  const auto x = qr.projection_points(exp_point(p, vec({0.3, 0.1})));
  CHECK(same_point(x, base_point(qr.quotient_pair)));
  CHECK(quotient_report(qr).passed());
}

TEST_CASE("pipeline: positive definite matrices modulo scalars") {
  const auto p = spd_pair(2);
  const auto scalars = LinearSubspace::span(Matrix(p->minus_coordinates(Matrix::Identity(2, 2))));
  const auto qr = quotient_theorem_pipeline(p, scalars);
  CHECK(qr.l_algebra.dim() == 1);
  CHECK(qr.quotient_pair->dim() == 3);
  CHECK(qr.quotient_pair->algebra().minus_dim() == 2);
  CHECK(quotient_report(qr).passed());
  // Scaling a matrix does not move its image.
  const auto x = exp_point(p, vec({0.4, -0.2, 0.3}));
  const auto y = make_point(p, Matrix(3.0 * x.rep));
  CHECK(same_point(qr.projection_points(x), qr.projection_points(y), Tolerance(1e-9, 1e-9)));
}

TEST_CASE("pipeline: projection does not depend on the representative") {
  const auto p = s2xs2();
  const auto qr = quotient_theorem_pipeline(p, first_factor());
  std::mt19937_64 rng(4);
  for (int s = 0; s < 10; ++s) {
    const Matrix g = sample::group_element(*p, rng, 3, 0.8);
    Vector plus = Vector::Zero(p->dim());
    plus.head(2) = sample::gaussian(rng, 2);  // the plus part comes first in the product basis
    const Matrix k = num::mat_exp(p->element(plus));
    REQUIRE(in_fixed_group(*p, k));
    CHECK(same_point(qr.projection_points(make_point(p, g)), qr.projection_points(make_point(p, Matrix(g * k))),
                     Tolerance(1e-9, 1e-9)));
  }
}

TEST_CASE("pipeline rejections") {
  const auto tor = build_model("torus_abelian(0,1,2)");
  try {
    quotient_theorem_pipeline(tor.pair, tor.designated_subsystems.at(2).seed);
    FAIL("the dense line must be rejected");
  } catch (const GateRejection& e) {
    CHECK_FALSE(e.report().passed);
    CHECK_FALSE(e.report().chart.passed);
    CHECK(e.report().chart.witness.has_value());
  }

  // Abelian quotients have no faithful adjoint realization.
  const auto rat = build_model("torus_abelian(1/2,0,2)");
  CHECK_THROWS_AS(quotient_theorem_pipeline(rat.pair, rat.designated_subsystems.at(2).seed), FaithfulnessError);
  try {
    quotient_theorem_pipeline(spd_pair(2), LinearSubspace::zero(3));
    FAIL("gl(2) has a center");
  } catch (const FaithfulnessError& e) {
    CHECK(e.kernel_dim() == 1);
    CHECK(e.l_dim() == 0);
  }

  CHECK_THROWS_AS(quotient_theorem_pipeline(sphere_pair(2), LinearSubspace::coordinate(2, std::vector<int>{0})),
                  PreconditionError);
}

TEST_CASE("weak submersion check detects a corrupted projection") {
  auto qr = quotient_theorem_pipeline(s2xs2(), first_factor());
  CHECK(weak_submersion_check(qr));
  qr.projection_algebra = Matrix(qr.projection_algebra.topRows(1));
  CHECK_FALSE(weak_submersion_check(qr));
  const auto rep = weak_submersion_report(qr);
  CHECK_FALSE(rep.full_row_rank);
}

TEST_CASE("the pipeline ideal contains the bracket ideal (property)") {
  struct Case {
    PairPtr p;
    LinearSubspace n;
  };
  const auto spd = spd_pair(2);
  const std::vector<Case> cases{
      {s2xs2(), first_factor()},
      {s2xs2(), LinearSubspace::coordinate(4, std::vector<int>{2, 3})},
      {sphere_pair(2), LinearSubspace::zero(2)},
      {sphere_pair(3), LinearSubspace::full(3)},
      {spd, LinearSubspace::span(Matrix(spd->minus_coordinates(Matrix::Identity(2, 2))))},
  };
  for (const auto& c : cases) {
    const auto qr = quotient_theorem_pipeline(c.p, c.n);
    const auto rep = quotient_report(qr, 30);
    CHECK(rep.ranks.l_contains_l_prime);
    CHECK(rep.passed());
  }
}

}  // TEST_SUITE
