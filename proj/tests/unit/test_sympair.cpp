#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "symkit/catalog.hpp"
#include "symkit/sympair.hpp"

using namespace symkit;

namespace {

Matrix rot2(double a) {
  Matrix r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

Matrix e_ij(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

TEST_SUITE("sympair") {

TEST_CASE("group sigma on hand examples") {
  const auto spd = spd_pair(2);
  CHECK(group_sigma(*spd, Matrix::Identity(2, 2)).isIdentity());
  const Matrix d = Eigen::Vector2d(2.0, 3.0).asDiagonal();
  const Matrix expected = Eigen::Vector2d(0.5, 1.0 / 3.0).asDiagonal();
  CHECK((group_sigma(*spd, d) - expected).norm() < 1e-15);

  const auto sphere = sphere_pair(2);
  Matrix rz = Matrix::Identity(3, 3);
  rz.topLeftCorner(2, 2) = rot2(0.7);
  CHECK((group_sigma(*sphere, rz) - rz).norm() < 1e-15);
  // A rotation tilting the last axis is sent to its inverse-tilt.
  Matrix rx = Matrix::Identity(3, 3);
  rx.bottomRightCorner(2, 2) = rot2(0.3);
  Matrix rx_inv = Matrix::Identity(3, 3);
  rx_inv.bottomRightCorner(2, 2) = rot2(-0.3);
  CHECK((group_sigma(*sphere, rx) - rx_inv).norm() < 1e-15);

  CHECK_THROWS_AS(group_sigma(*spd, Matrix::Ones(2, 2)), DomainError);
}

TEST_CASE("fixed group membership") {
  const auto spd = spd_pair(2);
  CHECK(in_fixed_group(*spd, Matrix::Identity(2, 2)));
  CHECK(in_fixed_group(*spd, rot2(1.1)));
  CHECK_FALSE(in_fixed_group(*spd, Matrix(Eigen::Vector2d(2.0, 1.0).asDiagonal())));
}

TEST_CASE("theta is the derivative of sigma") {
  const auto spd = spd_pair(2);
  Matrix x(2, 2);
  x << 0.3, -0.5, 0.2, 0.1;
  CHECK((spd->theta(x) + x.transpose()).norm() < 1e-15);
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    for (const auto& b : md.pair->basis()) {
      const double t = 0.25;
      const Matrix lhs = md.pair->sigma(num::mat_exp(t * b));
      const Matrix rhs = num::mat_exp(t * md.pair->theta(b));
      CHECK((lhs - rhs).norm() < 1e-12);
    }
  }
}

TEST_CASE("construction rejects a basis that is not closed under brackets") {
  std::vector<Matrix> basis{e_ij(2, 0, 1), e_ij(2, 1, 0)};
  CHECK_THROWS_AS(MatrixSymmetricPair(2, basis, SigmaRule::transpose_inverse(), "broken"), PreconditionError);
}

TEST_CASE("construction rejects a theta that does not square to +-I") {
  std::vector<Matrix> basis{Matrix(Eigen::Vector2d(1.0, 0.0).asDiagonal())};
  Matrix theta(2, 2);
  theta << 2, 0, 0, 1;
  CHECK_THROWS_AS(MatrixSymmetricPair(2, basis, SigmaRule::conjugation(theta), "bad"), PreconditionError);
}

TEST_CASE("composite involution on gl(2)") {
  // sigma(g) = J g^-T J^-1 with J the rotation by pi/2: on SL(2) this is the
  // identity, so g_- is just the center.
  std::vector<Matrix> basis{e_ij(2, 0, 1), e_ij(2, 1, 0), e_ij(2, 0, 0), e_ij(2, 1, 1)};
  const MatrixSymmetricPair p(2, basis, SigmaRule::composite(rot2(std::numbers::pi / 2)), "gl2_composite");
  CHECK(p.algebra().minus_dim() == 1);
  CHECK(p.algebra().plus_dim() == 3);
  CHECK((p.minus_element(Vector::Ones(1)).normalized() - Matrix::Identity(2, 2).normalized()).norm() < 1e-12);
}

TEST_CASE("trotter_group_sum: commuting case is exact") {
  const Matrix x = Eigen::Vector2d(0.4, -0.3).asDiagonal();
  const Matrix y = Eigen::Vector2d(-0.1, 0.7).asDiagonal();
  for (long long k : {1LL, 3LL, 64LL}) CHECK((trotter_group_sum(x, y, k) - num::mat_exp(x + y)).norm() < 1e-13);
}

TEST_CASE("trotter_group_sum: E12, E21 converges at first order") {
  const Matrix x = e_ij(2, 0, 1), y = e_ij(2, 1, 0);
  const Matrix target = num::mat_exp(x + y);
  const double e1024 = (trotter_group_sum(x, y, 1024) - target).norm();
  CHECK(e1024 < 1e-2);
  double prev = (trotter_group_sum(x, y, 16) - target).norm();
  for (long long k = 32; k <= 4096; k *= 2) {
    const double err = (trotter_group_sum(x, y, k) - target).norm();
    CHECK(err <= 1.1 * prev);
    CHECK(err / prev == doctest::Approx(0.5).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("trotter_group_commutator") {
  const Matrix x = e_ij(2, 0, 1), y = e_ij(2, 1, 0);
  CHECK(trotter_group_commutator(Matrix::Zero(2, 2), y, 7).isIdentity(0.0));
  const Matrix d = Eigen::Vector2d(0.2, 0.5).asDiagonal();
  CHECK((trotter_group_commutator(d, 2.0 * d, 5) - Matrix::Identity(2, 2)).norm() < 1e-14);
  const Matrix target = num::mat_exp(num::commutator(x, y));
  const double e16 = (trotter_group_commutator(x, y, 16) - target).norm();
  const double e128 = (trotter_group_commutator(x, y, 128) - target).norm();
  CHECK(e128 < e16);
  CHECK(e128 < 5e-2);
}

TEST_CASE("trotter in algebra coordinates agrees with the matrix form") {
  const auto p = spd_pair(2);
  Vector x = Vector::Zero(p->dim()), y = Vector::Zero(p->dim());
  x(1) = 1.0;
  y(3) = 0.5;
  CHECK((trotter_group_sum(*p, x, y, 8) - trotter_group_sum(p->element(x), p->element(y), 8)).norm() == 0.0);
}

TEST_CASE("relation group: trivial components") {
  const auto p = product_pair(sphere_pair(2), sphere_pair(2));
  // L = first factor: plus axis 0, minus axes 2, 3.
  const auto l = LinearSubspace::coordinate(6, std::vector<int>{0, 2, 3});
  std::mt19937_64 rng(4);
  const Matrix g = sample::group_element(*p, rng, 3, 0.5);
  const Matrix h = sample::group_element(*p, rng, 3, 0.5);
  const Matrix id = p->identity();
  const auto r1 = relation_group_product(*p, l, {g, id}, {h, id});
  CHECK((r1.g - g * h).norm() < 1e-14);
  CHECK((r1.l - id).norm() < 1e-14);

  Vector a = Vector::Zero(6), b = Vector::Zero(6);
  a(2) = 0.3;
  b(0) = 0.2;
  b(3) = -0.4;
  const Matrix l1 = num::mat_exp(p->element(a)), l2 = num::mat_exp(p->element(b));
  const auto r2 = relation_group_product(*p, l, {id, l1}, {id, l2});
  CHECK((r2.l - l1 * l2).norm() < 1e-14);
}

TEST_CASE("relation group: block oracle on a product") {
  const auto p = product_pair(sphere_pair(2), sphere_pair(2));
  const auto l = LinearSubspace::coordinate(6, std::vector<int>{0, 2, 3});
  std::mt19937_64 rng(8);
  Vector w = Vector::Zero(6);
  for (int i : {0, 2, 3}) w(i) = 0.2 * (i + 1);
  const Matrix l1 = num::mat_exp(p->element(w));
  const Matrix l2 = num::mat_exp(p->element(-0.5 * w));
  const Matrix g1 = sample::group_element(*p, rng, 2, 0.6);
  const Matrix g2 = sample::group_element(*p, rng, 2, 0.6);
  const auto r = relation_group_product(*p, l, {g1, l1}, {g2, l2});
  // First block: conjugation by g2's first block; second block stays trivial.
  const Matrix a2 = g2.topLeftCorner(3, 3);
  const Matrix expected = a2.inverse() * l1.topLeftCorner(3, 3) * a2 * l2.topLeftCorner(3, 3);
  CHECK((r.l.topLeftCorner(3, 3) - expected).norm() < 1e-13);
  CHECK((r.l.bottomRightCorner(3, 3) - Matrix::Identity(3, 3)).norm() < 1e-13);
  CHECK(r.l.topRightCorner(3, 3).norm() < 1e-15);
}

TEST_CASE("relation group: associativity and identity (property)") {
  const auto p = product_pair(sphere_pair(2), sphere_pair(2));
  const auto l = LinearSubspace::coordinate(6, std::vector<int>{0, 2, 3});
  std::mt19937_64 rng(21);
  auto l_elem = [&] {
    Vector w = Vector::Zero(6);
    for (int i : {0, 2, 3}) w(i) = 0.15 * sample::gaussian(rng, 1)(0);
    return Matrix(num::mat_exp(p->element(w)));
  };
  const RelationElement one{p->identity(), p->identity()};
  for (int trial = 0; trial < 20; ++trial) {
    const RelationElement a{sample::group_element(*p, rng, 2, 0.2), l_elem()};
    const RelationElement b{sample::group_element(*p, rng, 2, 0.2), l_elem()};
    const RelationElement c{sample::group_element(*p, rng, 2, 0.2), l_elem()};
    const auto left = relation_group_product(*p, l, relation_group_product(*p, l, a, b), c);
    const auto right = relation_group_product(*p, l, a, relation_group_product(*p, l, b, c));
    CHECK((left.g - right.g).norm() < 1e-12);
    CHECK((left.l - right.l).norm() < 1e-12);
    const auto ai = relation_group_product(*p, l, a, one);
    CHECK((ai.g - a.g).norm() < 1e-14);
    CHECK((ai.l - a.l).norm() < 1e-14);
  }
}

TEST_CASE("relation group: preconditions") {
  const auto p = sphere_pair(2);
  const Matrix id = p->identity();
  // Not an ideal of so(3).
  CHECK_THROWS_AS(relation_group_product(*p, LinearSubspace::coordinate(3, std::vector<int>{1}), {id, id}, {id, id}),
                  PreconditionError);
}

TEST_CASE("pair morphisms: identity word, diagonal and projection") {
  const auto sphere = build_model("sphere(2)");
  const PairMorphism* diag = nullptr;
  for (const auto& f : sphere.designated_morphisms)
    if (f.label == "diagonal") diag = &f;
  REQUIRE(diag != nullptr);
  CHECK(apply_pair_morphism(*diag, GroupWord{}).isIdentity());
  Vector x = Vector::Zero(3);
  x(1) = 0.4;
  x(2) = -0.2;
  const Matrix ex = num::mat_exp(sphere.pair->element(x));
  const Matrix img = apply_pair_morphism(*diag, GroupWord{{x}});
  CHECK((img.topLeftCorner(3, 3) - ex).norm() < 1e-14);
  CHECK((img.bottomRightCorner(3, 3) - ex).norm() < 1e-14);

  const auto prod = build_model("product(sphere(2),sphere(2))");
  const PairMorphism* proj = nullptr;
  for (const auto& f : prod.designated_morphisms)
    if (f.label == "projection") proj = &f;
  REQUIRE(proj != nullptr);
  std::mt19937_64 rng(2);
  const Vector a = sample::in_ball(rng, 6, 1.0), b = sample::in_ball(rng, 6, 1.0);
  const Matrix word = apply_pair_morphism(*proj, GroupWord{{a, b}});
  const Matrix oracle = num::mat_exp(prod.pair->element(a)).topLeftCorner(3, 3) *
                        num::mat_exp(prod.pair->element(b)).topLeftCorner(3, 3);
  CHECK((word - oracle).norm() < 1e-13);
}

TEST_CASE("catalog morphisms satisfy the morphism checks") {
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    for (const auto& f : md.designated_morphisms) {
      INFO(spec << " / " << f.label);
      const auto rep = check_pair_morphism(f);
      CHECK(rep.passed);
    }
  }
}

TEST_CASE("a map that fails to intertwine theta is rejected") {
  const auto p = sphere_pair(2);
  // Conjugation by a rotation mixing the last axis does not commute with sigma.
  Matrix r = Matrix::Identity(3, 3);
  r.bottomRightCorner(2, 2) = rot2(0.4);
  auto conj = [r](const Matrix& g) { return Matrix(r * g * r.transpose()); };
  const auto f = block_morphism(p, p, conj, conj, "tilt");
  CHECK_FALSE(check_pair_morphism(f).passed);
}

TEST_CASE("pair invariants over the catalog (property)") {
  std::mt19937_64 rng(42);
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    const auto rep = check_pair_invariants(*md.pair, rng, 100);
    INFO(spec);
    CHECK(rep.sigma_involution < 1e-9);
    CHECK(rep.eigenspace_split < 1e-9);
    CHECK(rep.sigma_exp < 1e-9);
  }
}

TEST_CASE("sampling helpers respect their radii") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    CHECK(sample::in_ball(rng, 4, 0.3).norm() <= 0.3 + 1e-15);
    CHECK(sample::on_sphere(rng, 3, 2.0).norm() == doctest::Approx(2.0));
  }
}

TEST_CASE("sigma kind names round trip") {
  for (auto k : {SigmaKind::conjugation, SigmaKind::transpose_inverse, SigmaKind::composite})
    CHECK(sigma_kind_from_string(to_string(k)) == k);
  CHECK_THROWS(sigma_kind_from_string("swap"));
}

}
