#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "symkit/catalog.hpp"
#include "symkit/symspace.hpp"

using namespace symkit;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

const PairMorphism& morphism(const ModelDescriptor& md, const std::string& label) {
  for (const auto& f : md.designated_morphisms)
    if (f.label == label) return f;
  throw std::runtime_error("no morphism " + label);
}

}  // namespace

TEST_SUITE("symspace") {

TEST_CASE("base point") {
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    const auto b = base_point(md.pair);
    const int n = md.pair->ambient_n();
    CHECK(b.rep.isIdentity(0.0));
    CHECK(b.cartan.isIdentity(0.0));
    CHECK(b.rep.rows() == n);
  }
}

TEST_CASE("mu: hand computations on spd(2)") {
  const auto p = spd_pair(2);
  const auto x = make_point(p, Matrix(Eigen::Vector2d(2.0, 1.0).asDiagonal()));
  CHECK((x.cartan - Matrix(Eigen::Vector2d(4.0, 1.0).asDiagonal())).norm() < 1e-15);
  const auto b = base_point(p);
  CHECK((mu(x, b).cartan - Matrix(Eigen::Vector2d(16.0, 1.0).asDiagonal())).norm() < 1e-13);
  CHECK(same_point(mu(x, x), x));
  CHECK((mu(b, x).cartan - x.cartan.inverse()).norm() < 1e-15);
  // The representative formula produces a point with the same Cartan matrix.
  const auto y = make_point(p, Matrix(Eigen::Vector2d(1.0, 3.0).asDiagonal()));
  const auto z = mu(x, y);
  CHECK((p->cartan(z.rep) - z.cartan).norm() < 1e-12);
}

TEST_CASE("mu rejects points of different pairs") {
  CHECK_THROWS_AS(mu(base_point(spd_pair(2)), base_point(sphere_pair(2))), PreconditionError);
}

TEST_CASE("exp_point on spd(2) and the sphere") {
  const auto p = spd_pair(2);
  CHECK(same_point(exp_point(p, Vector::Zero(3)), base_point(p)));
  const auto x = exp_point(p, vec({1.0, 0.0, 0.0}));
  CHECK((x.cartan - Matrix(Eigen::Vector2d(std::exp(2.0), 1.0).asDiagonal())).norm() < 1e-13);

  // Half-turn: exp(2v) for |v| = pi/2 is a rotation by pi in the (1,3) plane.
  const auto s = sphere_pair(2);
  const auto q = exp_point(s, vec({std::numbers::pi / 2, 0.0}));
  const Matrix expected = Eigen::Vector3d(-1.0, 1.0, -1.0).asDiagonal();
  CHECK((q.cartan - expected).norm() < 1e-14);
}

TEST_CASE("log_point") {
  const auto p = spd_pair(2);
  CHECK(log_point(base_point(p)).norm() == 0.0);
  const SymPoint x{p, Matrix::Identity(2, 2), Matrix(Eigen::Vector2d(std::exp(2.0), 1.0).asDiagonal())};
  CHECK((log_point(x) - vec({1.0, 0.0, 0.0})).norm() < 1e-13);
  // Out of the chart domain on the sphere: a half-turn Cartan matrix.
  CHECK_THROWS_AS(log_point(exp_point(sphere_pair(2), vec({std::numbers::pi / 2, 0.0}))), DomainError);
}

TEST_CASE("log inverts exp on a small ball (property)") {
  std::mt19937_64 rng(17);
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    const int m = md.pair->algebra().minus_dim();
    for (int i = 0; i < 30; ++i) {
      const Vector v = sample::in_ball(rng, m, 0.2);
      CHECK((log_point(exp_point(md.pair, v)) - v).norm() < 1e-12);
    }
  }
}

TEST_CASE("Cartan image satisfies sigma(c) = c^-1 (property)") {
  std::mt19937_64 rng(3);
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    for (int i = 0; i < 20; ++i) {
      const auto x = make_point(md.pair, sample::group_element(*md.pair, rng, 3, 0.8));
      CHECK((md.pair->sigma(x.cartan) - x.cartan.inverse()).norm() < 1e-11 * (1.0 + x.cartan.norm()));
    }
  }
}

TEST_CASE("one-parameter subspaces") {
  const auto p = spd_pair(2);
  const Vector v = vec({0.3, -0.2, 0.5});
  CHECK(same_point(one_param(p, v, 0.0), base_point(p)));
  CHECK(same_point(one_param(p, v, 1.0), exp_point(p, v)));
  CHECK(same_point(mu(one_param(p, v, 1.0), one_param(p, v, 0.0)), exp_point(p, 2.0 * v)));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double s = ud(rng), t = ud(rng);
    CHECK(same_point(one_param(p, v, 2 * s - t), mu(one_param(p, v, s), one_param(p, v, t)), Tolerance(1e-12, 1e-11)));
  }
}

TEST_CASE("translations along a one-parameter subspace") {
  const auto p = sphere_pair(2);
  const Vector v = vec({0.4, 0.7});
  std::mt19937_64 rng(6);
  const auto x = make_point(p, sample::group_element(*p, rng, 2, 0.5));
  CHECK(same_point(translation(p, v, 0.0, x), x));
  CHECK(same_point(translation(p, Vector::Zero(2), 0.9, x), x));
  for (double t : {-0.5, 0.2, 1.3})
    for (double s : {-0.4, 0.6})
      CHECK(same_point(translation(p, v, s, one_param(p, v, t)), one_param(p, v, t + s), Tolerance(1e-12, 1e-11)));
}

TEST_CASE("tau action") {
  const auto p = spd_pair(2);
  std::mt19937_64 rng(7);
  const auto x = make_point(p, sample::group_element(*p, rng, 2, 0.5));
  CHECK(same_point(tau_action(p->identity(), x), x));
  const Matrix g = sample::group_element(*p, rng, 2, 0.5);
  CHECK(same_point(tau_action(g, base_point(p)), make_point(p, g)));

  // tau_g^2 = mu_{gK} mu_K for sigma(g) = g^-1.
  const Vector v = vec({0.2, -0.6, 0.3});
  const Matrix ge = num::mat_exp(p->minus_element(v));
  const auto gk = make_point(p, ge);
  const auto lhs = tau_action(ge, tau_action(ge, x));
  const auto rhs = mu(gk, mu(base_point(p), x));
  CHECK(same_point(lhs, rhs, Tolerance(1e-12, 1e-11)));

  // tau_g is an automorphism of mu.
  const auto y = make_point(p, sample::group_element(*p, rng, 2, 0.5));
  CHECK(same_point(tau_action(g, mu(x, y)), mu(tau_action(g, x), tau_action(g, y)), Tolerance(1e-12, 1e-11)));
}

TEST_CASE("trotter sum: exact cases") {
  const auto p = spd_pair(2);
  const Vector x = vec({0.7, -0.2, 0.0}), y = vec({0.1, 0.4, 0.0});
  for (long long k : {1LL, 5LL, 32LL})
    CHECK(same_point(trotter_sum_sym(p, x, y, k), exp_point(p, x + y), Tolerance(1e-12, 1e-11)));
  const Vector w = vec({0.3, -0.1, 0.8});
  CHECK(same_point(trotter_sum_sym(p, w, Vector::Zero(3), 1), exp_point(p, w), Tolerance(1e-13, 1e-12)));
}

TEST_CASE("trotter sum: E11 and E12 + E21 on spd(2)") {
  const auto p = spd_pair(2);
  const Vector x = vec({1.0, 0.0, 0.0}), y = vec({0.0, 0.0, 1.0});
  const auto target = exp_point(p, x + y);
  // Oracle: the Cartan matrix of the limit is exp(2(x+y)) directly.
  Matrix xy(2, 2);
  xy << 1, 1, 1, 0;
  CHECK((target.cartan - num::mat_exp(2.0 * xy)).norm() < 1e-12);
  CHECK(cartan_distance(trotter_sum_sym(p, x, y, 1024), target) < 1e-2);
  const auto table = trotter_sum_table(p, x, y, dyadic_range(4, 12));
  REQUIRE(table.size() == 9);
  for (std::size_t i = 1; i < table.size(); ++i) CHECK(table[i].error <= 1.1 * table[i - 1].error);
}

TEST_CASE("trotter bracket: degenerate slots") {
  const auto p = spd_pair(2);
  const Vector x = vec({1.0, 0.0, 0.0}), y = vec({0.0, 0.0, 1.0});
  CHECK(same_point(trotter_bracket_sym(p, Vector::Zero(3), y, x, 4, 4), base_point(p), Tolerance(1e-13, 1e-12)));
  // [[x,y],z] for diagonal x, y vanishes; the approximant is exactly the base.
  const Vector d = vec({0.0, 1.0, 0.0});
  CHECK(same_point(trotter_bracket_sym(p, x, d, y, 3, 2), base_point(p), Tolerance(1e-12, 1e-11)));
}

TEST_CASE("bracket target agrees with the ambient double commutator") {
  const auto p = spd_pair(2);
  Matrix xm(2, 2), ym(2, 2);
  xm << 1, 0, 0, 0;
  ym << 0, 1, 1, 0;
  const Matrix b = num::commutator(num::commutator(xm, ym), xm);
  const auto t = bracket_target(p, p->minus_coordinates(xm), p->minus_coordinates(ym), p->minus_coordinates(xm));
  CHECK((t.cartan - num::mat_exp(2.0 * b)).norm() < 1e-12);
}

TEST_CASE("trotter bracket improves with (k,l) on the sphere") {
  const auto p = sphere_pair(2);
  const Vector x = vec({0.5, 0.0}), y = vec({0.0, 0.5});
  const auto table = trotter_bracket_table(p, x, y, y, {{4, 4}, {16, 16}, {64, 64}});
  REQUIRE(table.size() == 3);
  CHECK(table[1].error < table[0].error);
  CHECK(table[2].error < table[1].error);
}

TEST_CASE("chain identity") {
  const auto p = spd_pair(2);
  CHECK(chain_identity_check(p, {vec({0.4, 0.1, -0.3})}, {Vector::Zero(3)}) < 1e-13);
  CHECK(chain_identity_check(p, {Vector::Zero(3), Vector::Zero(3)}, {Vector::Zero(3), Vector::Zero(3)}) == 0.0);
  CHECK_THROWS_AS(chain_identity_check(p, {Vector::Zero(3)}, {}), DimensionError);
  std::mt19937_64 rng(99);
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    const int m = md.pair->algebra().minus_dim();
    for (int i = 0; i < 20; ++i) {
      std::vector<Vector> xs, ys;
      for (int j = 0; j < 3; ++j) {
        xs.push_back(sample::in_ball(rng, m, 1.0));
        ys.push_back(sample::in_ball(rng, m, 1.0));
      }
      CHECK(chain_identity_check(md.pair, xs, ys) < 1e-9);
    }
  }
}

TEST_CASE("lts of a pair") {
  CHECK(lts_of_pair(*torus_pair()).tensor() == std::vector<double>(16, 0.0));
  // Sphere: the rotation group realizes [x,y,z] = -(<y,z>x - <x,z>y) in the
  // orthonormal basis E_{i3} - E_{3i}.
  const auto s = lts_of_pair(*sphere_pair(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          CHECK(s.coeff(i, j, k, l) == doctest::Approx(-(double(j == k && i == l) - double(i == k && j == l))));
  // spd(2): compare with double commutators of the Sym(2) basis matrices.
  const auto p = spd_pair(2);
  const auto m = lts_of_pair(*p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const Matrix bracket =
            num::commutator(num::commutator(p->minus_basis()[i], p->minus_basis()[j]), p->minus_basis()[k]);
        const Vector got = m.bracket(Vector::Unit(3, i), Vector::Unit(3, j), Vector::Unit(3, k));
        CHECK((p->minus_element(got) - bracket).norm() < 1e-13);
      }
}

TEST_CASE("lts of every catalog pair satisfies the axioms") {
  for (const auto& spec : default_model_specs()) {
    INFO(spec);
    CHECK(check_lts_axioms(lts_of_pair(*build_model(spec).pair)).passed());
  }
}

TEST_CASE("symmetric-space morphisms") {
  const auto sphere = build_model("sphere(2)");
  const auto id = sym_morphism(morphism(sphere, "identity"));
  const auto x = exp_point(sphere.pair, vec({0.3, 0.9}));
  CHECK(same_point(id(x), x));
  const auto diag = sym_morphism(morphism(sphere, "diagonal"));
  CHECK(diag(base_point(sphere.pair)).cartan.isIdentity(0.0));

  const auto prod = build_model("product(sphere(2),sphere(2))");
  const auto& proj = morphism(prod, "projection");
  const auto pr = sym_morphism(proj);
  const Vector v = vec({0.2, -0.5, 0.7, 0.1});
  CHECK(same_point(pr(exp_point(prod.pair, v)), exp_point(proj.target, vec({0.2, -0.5})), Tolerance(1e-13, 1e-12)));
}

TEST_CASE("exp functoriality over catalog morphisms (property)") {
  std::mt19937_64 rng(50);
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    for (const auto& f : md.designated_morphisms) {
      INFO(spec << " / " << f.label);
      const auto map = sym_morphism(f);
      const Matrix a = f.minus_map();
      const int m = f.source->algebra().minus_dim();
      for (int i = 0; i < 50; ++i) {
        const Vector v = sample::in_ball(rng, m, 1.0);
        CHECK(same_point(map(exp_point(f.source, v)), exp_point(f.target, a * v), Tolerance(1e-12, 1e-11)));
      }
    }
  }
}

TEST_CASE("reflection-space axioms over the catalog (property)") {
  std::mt19937_64 rng(42);
  for (const auto& spec : default_model_specs()) {
    const auto md = build_model(spec);
    const auto rep = check_reflection_axioms(md.pair, rng, 50);
    INFO(spec);
    CHECK(rep.involutive < 1e-8);
    CHECK(rep.fixed_point < 1e-8);
    CHECK(rep.automorphism < 1e-8);
    CHECK(rep.isolated < 1e-8);
    // Richardson leaves an O(eps^2) remainder at eps = 1e-2.
    CHECK(rep.tangent_product < 1e-3);
  }
}

TEST_CASE("dyadic ranges") {
  CHECK(dyadic_range(2, 4) == std::vector<long long>{4, 8, 16});
  CHECK(dyadic_range(3, 2).empty());
}

}
