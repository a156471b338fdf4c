#include "symkit/sympair.hpp"

#include <algorithm>
#include <cmath>

namespace symkit {

const char* to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::conjugation: return "conjugation";
    case SigmaKind::transpose_inverse: return "transpose_inverse";
    case SigmaKind::composite: return "composite";
  }
  return "?";
}

SigmaKind sigma_kind_from_string(const std::string& name) {
  if (name == "conjugation") return SigmaKind::conjugation;
  if (name == "transpose_inverse") return SigmaKind::transpose_inverse;
  if (name == "composite") return SigmaKind::composite;
  throw PreconditionError("unknown sigma kind '" + name + "'");
}

namespace {

double rel_diff(const Matrix& a, const Matrix& b) { return (a - b).norm() / (1.0 + a.norm()); }

}  // namespace

MatrixSymmetricPair::MatrixSymmetricPair(int ambient_n, std::vector<Matrix> basis, SigmaRule sigma,
                                         std::string label, const Tolerance& tol,
                                         std::optional<PeriodLattice> lattice)
    : n_(ambient_n),
      basis_(std::move(basis)),
      sigma_(std::move(sigma)),
      label_(std::move(label)),
      tol_(tol),
      lattice_(std::move(lattice)) {
  if (n_ < 1) throw DimensionError("MatrixSymmetricPair: ambient size must be positive");
  const int d = dim();
  Matrix flat(static_cast<Eigen::Index>(n_) * n_, d);
  for (int i = 0; i < d; ++i) {
    if (basis_[i].rows() != n_ || basis_[i].cols() != n_) {
      throw DimensionError("MatrixSymmetricPair: basis matrix " + std::to_string(i) + " is not " +
                           std::to_string(n_) + "x" + std::to_string(n_));
    }
    num::require_finite(basis_[i], "MatrixSymmetricPair basis");
    flat.col(i) = num::flatten(basis_[i]);
  }
  if (d > 0 && num::numerical_rank(flat, tol_) != d) {
    throw PreconditionError("MatrixSymmetricPair: basis matrices are linearly dependent");
  }
  pinv_ = d > 0 ? Matrix(flat.completeOrthogonalDecomposition().pseudoInverse())
                : Matrix(0, static_cast<Eigen::Index>(n_) * n_);

  if (sigma_.kind != SigmaKind::transpose_inverse) {
    const Matrix& t = sigma_.theta;
    if (t.rows() != n_ || t.cols() != n_) throw DimensionError("sigma: Theta has the wrong size");
    const Matrix sq = t * t;
    const Matrix id = identity();
    const double eps = tol_.threshold(1.0 + sq.norm());
    if ((sq - id).norm() <= eps) {
      theta_inv_ = t;
    } else if ((sq + id).norm() <= eps) {
      theta_inv_ = -t;
    } else {
      throw PreconditionError("sigma: Theta^2 must be +I or -I");
    }
  }

  // Structure constants and theta in basis coordinates, both checked for closure.
  double scale = 1.0;
  for (const auto& b : basis_) scale = std::max(scale, b.norm());
  std::vector<double> tensor(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Matrix c = num::commutator(basis_[i], basis_[j]);
      const auto coords = decompose(c);
      if (coords.residual > tol_.threshold(scale * scale)) {
        throw PreconditionError("MatrixSymmetricPair: basis is not closed under the commutator");
      }
      for (int l = 0; l < d; ++l) tensor[(static_cast<std::size_t>(i) * d + j) * d + l] = coords.x(l);
    }
  Matrix theta_coords(d, d);
  for (int i = 0; i < d; ++i) {
    const auto coords = decompose(theta(basis_[i]));
    if (coords.residual > tol_.threshold(scale)) {
      throw PreconditionError("MatrixSymmetricPair: the derived involution leaves the algebra");
    }
    theta_coords.col(i) = coords.x;
  }
  algebra_ = SymmetricLieAlgebra(d, std::move(tensor), std::move(theta_coords), label_, tol_);
  const auto rep = algebra_.check(tol_);
  if (!rep.passed) {
    throw PreconditionError("MatrixSymmetricPair: algebra check failed (jacobi " +
                            std::to_string(rep.jacobi) + ", automorphism " +
                            std::to_string(rep.automorphism) + ")");
  }
  for (int i = 0; i < d; ++i) {
    for (double t : {1e-3, 0.5}) {
      const Matrix lhs = this->sigma(num::mat_exp(t * basis_[i]));
      const Matrix rhs = num::mat_exp(t * theta(basis_[i]));
      if (rel_diff(lhs, rhs) > tol_.threshold(1.0) * 10.0) {
        throw PreconditionError("MatrixSymmetricPair: sigma(exp(tx)) differs from exp(t theta x)");
      }
    }
  }
  const Matrix& mb = algebra_.minus().basis();
  for (int j = 0; j < algebra_.minus_dim(); ++j) minus_basis_.push_back(element(mb.col(j)));
}

Matrix MatrixSymmetricPair::element(const Vector& coords) const {
  if (coords.size() != dim()) {
    throw DimensionError("element: expected " + std::to_string(dim()) + " coordinates, got " +
                         std::to_string(coords.size()));
  }
  Matrix out = Matrix::Zero(n_, n_);
  for (int i = 0; i < dim(); ++i) out += coords(i) * basis_[i];
  return out;
}

num::Coordinates MatrixSymmetricPair::decompose(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != n_) throw DimensionError("decompose: matrix size");
  num::Coordinates out;
  const Vector flat = num::flatten(x);
  out.x = pinv_ * flat;
  Matrix back = Matrix::Zero(n_, n_);
  for (int i = 0; i < dim(); ++i) back += out.x(i) * basis_[i];
  out.residual = (back - x).norm();
  return out;
}

Vector MatrixSymmetricPair::coordinates(const Matrix& x) const {
  auto c = decompose(x);
  if (c.residual > tol_.threshold(x.norm()) * 100.0) {
    throw DomainError("coordinates: matrix is not in the Lie algebra (residual " +
                      std::to_string(c.residual) + ")");
  }
  return c.x;
}

Matrix MatrixSymmetricPair::minus_element(const Vector& v) const {
  if (v.size() != algebra_.minus_dim()) {
    throw DimensionError("minus_element: expected " + std::to_string(algebra_.minus_dim()) +
                         " coordinates, got " + std::to_string(v.size()));
  }
  Matrix out = Matrix::Zero(n_, n_);
  for (int j = 0; j < v.size(); ++j) out += v(j) * minus_basis_[j];
  return out;
}

Vector MatrixSymmetricPair::minus_coordinates(const Matrix& x) const {
  const Vector c = coordinates(x);
  const Matrix& mb = algebra_.minus().basis();
  const Vector v = mb.transpose() * c;
  if ((mb * v - c).norm() > tol_.threshold(c.norm()) * 100.0) {
    throw DomainError("minus_coordinates: element has a component in the +1 part");
  }
  return v;
}

Matrix MatrixSymmetricPair::sigma(const Matrix& g) const {
  if (g.rows() != n_ || g.cols() != n_) throw DimensionError("sigma: matrix size");
  switch (sigma_.kind) {
    case SigmaKind::conjugation:
      return sigma_.theta * g * theta_inv_;
    case SigmaKind::transpose_inverse:
      return num::inverse(g, tol_).transpose();
    case SigmaKind::composite:
      return sigma_.theta * num::inverse(g, tol_).transpose() * theta_inv_;
  }
  return g;
}

Matrix MatrixSymmetricPair::theta(const Matrix& x) const {
  switch (sigma_.kind) {
    case SigmaKind::conjugation:
      return sigma_.theta * x * theta_inv_;
    case SigmaKind::transpose_inverse:
      return -x.transpose();
    case SigmaKind::composite:
      return -(sigma_.theta * x.transpose() * theta_inv_);
  }
  return x;
}

Matrix MatrixSymmetricPair::cartan(const Matrix& g) const {
  return g * sigma(num::inverse(g, tol_));
}

bool same_pair(const MatrixSymmetricPair& a, const MatrixSymmetricPair& b) {
  return &a == &b || (a.label() == b.label() && a.ambient_n() == b.ambient_n() && a.dim() == b.dim());
}

PairPtr point_pair() {
  return std::make_shared<const MatrixSymmetricPair>(1, std::vector<Matrix>{},
                                                     SigmaRule::conjugation(Matrix::Identity(1, 1)),
                                                     "point");
}

Matrix group_sigma(const MatrixSymmetricPair& p, const Matrix& g) { return p.sigma(g); }

bool in_fixed_group(const MatrixSymmetricPair& p, const Matrix& g, const Tolerance& tol) {
  return (p.sigma(g) - g).norm() <= tol.threshold(g.norm());
}

Matrix trotter_group_sum(const Matrix& x, const Matrix& y, long long k) {
  if (k < 1) throw PreconditionError("trotter_group_sum: k must be at least 1");
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("trotter_group_sum: shapes");
  const double s = 1.0 / static_cast<double>(k);
  return num::mat_pow(num::mat_exp(s * x) * num::mat_exp(s * y), k);
}

Matrix trotter_group_commutator(const Matrix& x, const Matrix& y, long long k) {
  if (k < 1) throw PreconditionError("trotter_group_commutator: k must be at least 1");
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("trotter_group_commutator: shapes");
  }
  const double s = 1.0 / static_cast<double>(k);
  const Matrix step = num::mat_exp(s * x) * num::mat_exp(s * y) * num::mat_exp(-s * x) *
                      num::mat_exp(-s * y);
  return num::mat_pow(step, k * k);
}

Matrix trotter_group_sum(const MatrixSymmetricPair& p, const Vector& x, const Vector& y, long long k) {
  return trotter_group_sum(p.element(x), p.element(y), k);
}

Matrix trotter_group_commutator(const MatrixSymmetricPair& p, const Vector& x, const Vector& y,
                                long long k) {
  return trotter_group_commutator(p.element(x), p.element(y), k);
}

namespace {

// true iff log(m) exists on the principal branch and lies in L.
bool log_in(const MatrixSymmetricPair& p, const LinearSubspace& l, const Matrix& m,
            const Tolerance& tol) {
  const Matrix lg = num::mat_log(m);
  const auto c = p.decompose(lg);
  if (c.residual > tol.threshold(lg.norm()) * 100.0) return false;
  return l.contains(c.x, Tolerance(tol.abs_eps * 100.0, tol.rel_eps * 100.0));
}

}  // namespace

RelationElement relation_group_product(const MatrixSymmetricPair& p, const LinearSubspace& l_algebra,
                                       const RelationElement& a, const RelationElement& b,
                                       const Tolerance& tol) {
  if (l_algebra.ambient_dim() != p.dim()) throw DimensionError("relation_group_product: L ambient");
  if (!is_lie_ideal(p.algebra(), l_algebra, tol)) {
    throw PreconditionError("relation_group_product: L is not an ideal of the algebra");
  }
  if (!log_in(p, l_algebra, a.l, tol) || !log_in(p, l_algebra, b.l, tol)) {
    throw PreconditionError("relation_group_product: an l-component is not in exp(L)");
  }
  RelationElement out;
  out.g = a.g * b.g;
  out.l = num::inverse(b.g, tol) * a.l * b.g * b.l;
  if (!log_in(p, l_algebra, out.l, tol)) {
    throw VerificationError("relation_group_product: product left L");
  }
  return out;
}

Matrix evaluate_word(const MatrixSymmetricPair& p, const GroupWord& word) {
  Matrix out = p.identity();
  for (const auto& letter : word.letters) {
    if (letter.size() != p.dim()) throw DimensionError("word letter has the wrong length");
    out = out * num::mat_exp(p.element(letter));
  }
  return out;
}

Matrix PairMorphism::minus_map() const {
  const Matrix& s = source->algebra().minus().basis();
  const Matrix& t = target->algebra().minus().basis();
  return t.transpose() * algebra_map * s;
}

PairMorphism block_morphism(PairPtr source, PairPtr target,
                            std::function<Matrix(const Matrix&)> group_map,
                            std::function<Matrix(const Matrix&)> algebra_rule, std::string label) {
  Matrix a(target->dim(), source->dim());
  for (int i = 0; i < source->dim(); ++i) a.col(i) = target->coordinates(algebra_rule(source->basis()[i]));
  return PairMorphism{std::move(source), std::move(target), std::move(a), std::move(group_map),
                      std::move(label)};
}

MorphismReport check_pair_morphism(const PairMorphism& f, const Tolerance& tol) {
  const auto& s = *f.source;
  const auto& t = *f.target;
  if (f.algebra_map.rows() != t.dim() || f.algebra_map.cols() != s.dim()) {
    throw DimensionError("check_pair_morphism: algebra map shape");
  }
  MorphismReport rep;
  const auto& ga = s.algebra();
  const auto& gb = t.algebra();
  const Matrix& a = f.algebra_map;
  for (int i = 0; i < s.dim(); ++i) {
    const Vector ei = Vector::Unit(s.dim(), i);
    for (int j = 0; j < s.dim(); ++j) {
      const Vector ej = Vector::Unit(s.dim(), j);
      rep.bracket = std::max(rep.bracket, (a * ga.bracket(ei, ej) - gb.bracket(a * ei, a * ej)).norm());
    }
  }
  if (s.dim() > 0) rep.involution = (a * ga.theta() - gb.theta() * a).norm();
  for (int i = 0; i < s.dim(); ++i) {
    for (double tt : {0.5, 1.0}) {
      const Matrix g = num::mat_exp(tt * s.basis()[i]);
      const Matrix fg = f.group_map(g);
      rep.exp_compat = std::max(rep.exp_compat, rel_diff(fg, num::mat_exp(tt * t.element(a.col(i)))));
      rep.sigma_compat = std::max(rep.sigma_compat, rel_diff(f.group_map(s.sigma(g)), t.sigma(fg)));
    }
  }
  const double scale = std::max(1.0, num::op_norm(a));
  rep.passed = rep.bracket <= tol.threshold(scale * scale * std::max(1.0, ga.scale())) &&
               rep.involution <= tol.threshold(scale) && rep.exp_compat <= tol.threshold(1.0) &&
               rep.sigma_compat <= tol.threshold(1.0);
  return rep;
}

Matrix apply_pair_morphism(const PairMorphism& f, const GroupWord& word) {
  Matrix out = f.target->identity();
  for (const auto& letter : word.letters) {
    if (letter.size() != f.source->dim()) throw DimensionError("word letter has the wrong length");
    out = out * f.group_map(num::mat_exp(f.source->element(letter)));
  }
  return out;
}

PairInvariantReport check_pair_invariants(const MatrixSymmetricPair& p, std::mt19937_64& rng,
                                          int samples) {
  PairInvariantReport rep;
  for (int s = 0; s < samples; ++s) {
    const Matrix g = sample::group_element(p, rng, 3, 1.0);
    rep.sigma_involution = std::max(rep.sigma_involution, rel_diff(p.sigma(p.sigma(g)), g));
  }
  const auto& g = p.algebra();
  const auto& plus = g.plus();
  const auto& minus = g.minus();
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      const Vector bi = Vector::Unit(g.dim(), i);
      const Vector bj = Vector::Unit(g.dim(), j);
      const Vector pi = plus.project(bi), pj = plus.project(bj);
      const Vector mi = bi - pi, mj = bj - pj;
      rep.eigenspace_split = std::max({rep.eigenspace_split, plus.distance(g.bracket(pi, pj)),
                                       minus.distance(g.bracket(pi, mj)),
                                       plus.distance(g.bracket(mi, mj))});
    }
  }
  for (int i = 0; i < p.dim(); ++i) {
    for (double t : {-1.0, -0.25, 0.1, 0.7}) {
      const Matrix lhs = p.sigma(num::mat_exp(t * p.basis()[i]));
      const Matrix rhs = num::mat_exp(t * p.theta(p.basis()[i]));
      rep.sigma_exp = std::max(rep.sigma_exp, rel_diff(lhs, rhs));
    }
  }
  return rep;
}

namespace sample {

Vector gaussian(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = nd(rng);
  return v;
}

Vector on_sphere(std::mt19937_64& rng, int dim, double radius) {
  if (dim == 0) return Vector(0);
  Vector v = gaussian(rng, dim);
  while (v.norm() < 1e-12) v = gaussian(rng, dim);
  return radius * v / v.norm();
}

Vector in_ball(std::mt19937_64& rng, int dim, double radius) {
  if (dim == 0) return Vector(0);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const double r = radius * std::pow(ud(rng), 1.0 / dim);
  return on_sphere(rng, dim, r);
}

Matrix group_element(const MatrixSymmetricPair& p, std::mt19937_64& rng, int letters, double radius) {
  Matrix g = p.identity();
  for (int i = 0; i < letters; ++i) g = g * num::mat_exp(p.element(in_ball(rng, p.dim(), radius)));
  return g;
}

}  // namespace sample

}  // namespace symkit
