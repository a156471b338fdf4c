#include "symkit/lts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace symkit {

namespace {

// Modified Gram-Schmidt with one re-orthogonalization pass. A column survives
// when its residual exceeds the tolerance relative to the largest input norm.
Matrix orthonormalize(const Matrix& cols, const Matrix& against, const Tolerance& tol) {
  double scale = 0.0;
  for (Eigen::Index c = 0; c < cols.cols(); ++c) scale = std::max(scale, cols.col(c).norm());
  std::vector<Vector> kept;
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    Vector v = cols.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index a = 0; a < against.cols(); ++a) v -= against.col(a).dot(v) * against.col(a);
      for (const auto& q : kept) v -= q.dot(v) * q;
    }
    const double r = v.norm();
    if (r > tol.threshold(scale)) kept.push_back(v / r);
  }
  Matrix out(cols.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = kept[i];
  return out;
}

Vector unit(int n, int i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

void require_ambient(const LinearSubspace& n, int dim, const char* what) {
  if (n.ambient_dim() != dim) {
    throw DimensionError(std::string(what) + ": subspace lives in dimension " +
                         std::to_string(n.ambient_dim()) + ", expected " + std::to_string(dim));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearSubspace

LinearSubspace LinearSubspace::zero(int ambient_dim) {
  return LinearSubspace(ambient_dim, Matrix(ambient_dim, 0));
}

LinearSubspace LinearSubspace::full(int ambient_dim) {
  return LinearSubspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

LinearSubspace LinearSubspace::span(const Matrix& columns, const Tolerance& tol) {
  num::require_finite(columns, "LinearSubspace::span");
  const auto n = static_cast<int>(columns.rows());
  return LinearSubspace(n, orthonormalize(columns, Matrix(n, 0), tol));
}

LinearSubspace LinearSubspace::span(int ambient_dim, std::span<const Vector> vectors,
                                    const Tolerance& tol) {
  Matrix cols(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim) throw DimensionError("LinearSubspace::span: vector length");
    cols.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return span(cols, tol);
}

LinearSubspace LinearSubspace::coordinate(int ambient_dim, std::span<const int> axes) {
  Matrix cols(ambient_dim, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] < 0 || axes[i] >= ambient_dim) throw DimensionError("coordinate axis out of range");
    cols.col(static_cast<Eigen::Index>(i)) = unit(ambient_dim, axes[i]);
  }
  return span(cols);
}

Vector LinearSubspace::project(const Vector& v) const {
  if (v.size() != ambient_) throw DimensionError("LinearSubspace::project: vector length");
  if (basis_.cols() == 0) return Vector::Zero(ambient_);
  return basis_ * (basis_.transpose() * v);
}

double LinearSubspace::distance(const Vector& v) const { return (v - project(v)).norm(); }

bool LinearSubspace::contains(const Vector& v, const Tolerance& tol) const {
  return distance(v) <= tol.threshold(v.norm());
}

bool LinearSubspace::contains(const LinearSubspace& other, const Tolerance& tol) const {
  if (other.ambient_ != ambient_) throw DimensionError("LinearSubspace::contains: ambient mismatch");
  for (Eigen::Index c = 0; c < other.basis_.cols(); ++c) {
    if (!contains(Vector(other.basis_.col(c)), tol)) return false;
  }
  return true;
}

bool LinearSubspace::equals(const LinearSubspace& other, const Tolerance& tol) const {
  return other.ambient_ == ambient_ && other.dim() == dim() && contains(other, tol) &&
         other.contains(*this, tol);
}

LinearSubspace LinearSubspace::orthogonal_complement() const {
  // Greedily pick the coordinate axis farthest from the current span, then
  // orthonormalize the chosen axes in ascending order.
  const int need = ambient_ - dim();
  std::vector<int> chosen;
  Matrix current = basis_;
  for (int round = 0; round < need; ++round) {
    int best = -1;
    double best_r = -1.0;
    for (int i = 0; i < ambient_; ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      Vector v = unit(ambient_, i);
      if (current.cols() > 0) v -= current * (current.transpose() * v);
      const double r = v.norm();
      if (r > best_r) {
        best_r = r;
        best = i;
      }
    }
    chosen.push_back(best);
    Vector v = unit(ambient_, best);
    for (int pass = 0; pass < 2; ++pass) {
      if (current.cols() > 0) v -= current * (current.transpose() * v);
    }
    current.conservativeResize(Eigen::NoChange, current.cols() + 1);
    current.col(current.cols() - 1) = v.normalized();
  }
  std::sort(chosen.begin(), chosen.end());
  Matrix axes(ambient_, need);
  for (int i = 0; i < need; ++i) axes.col(i) = unit(ambient_, chosen[static_cast<std::size_t>(i)]);
  // Selected axes are well separated from the span, so no column is dropped.
  Tolerance loose(1e-8, 1e-8);
  return LinearSubspace(ambient_, orthonormalize(axes, basis_, loose));
}

LinearSubspace LinearSubspace::sum(const LinearSubspace& other, const Tolerance& tol) const {
  if (other.ambient_ != ambient_) throw DimensionError("LinearSubspace::sum: ambient mismatch");
  Matrix cols(ambient_, dim() + other.dim());
  cols << basis_, other.basis_;
  return span(cols, tol);
}

LinearSubspace LinearSubspace::image(const Matrix& map, const Tolerance& tol) const {
  if (map.cols() != ambient_) throw DimensionError("LinearSubspace::image: map columns");
  return span(Matrix(map * basis_), tol);
}

LinearSubspace LinearSubspace::preimage(const Matrix& map, const LinearSubspace& target,
                                        const Tolerance& tol) {
  if (map.rows() != target.ambient_dim()) throw DimensionError("LinearSubspace::preimage: map rows");
  const auto n = static_cast<int>(map.cols());
  Matrix residual = map;
  if (target.dim() > 0) residual -= target.basis() * (target.basis().transpose() * map);
  residual /= std::max(1.0, num::op_norm(map));
  return LinearSubspace(n, num::nullspace(residual, tol));
}

// ---------------------------------------------------------------------------
// LieTripleSystem

LieTripleSystem::LieTripleSystem(int dim, std::vector<double> tensor, std::string label)
    : dim_(dim), tensor_(std::move(tensor)), label_(std::move(label)) {
  if (dim < 0) throw DimensionError("LieTripleSystem: negative dimension");
  const auto d = static_cast<std::size_t>(dim);
  if (tensor_.size() != d * d * d * d) {
    throw DimensionError("LieTripleSystem: tensor has " + std::to_string(tensor_.size()) +
                         " entries, expected dim^4 = " + std::to_string(d * d * d * d));
  }
  for (double v : tensor_) {
    if (!std::isfinite(v)) throw DomainError("LieTripleSystem: non-finite structure constant");
  }
}

LieTripleSystem LieTripleSystem::abelian(int dim, std::string label) {
  const auto d = static_cast<std::size_t>(dim);
  return LieTripleSystem(dim, std::vector<double>(d * d * d * d, 0.0), std::move(label));
}

Vector LieTripleSystem::bracket_basis(int i, int j, int k) const {
  Vector out(dim_);
  for (int l = 0; l < dim_; ++l) out(l) = coeff(i, j, k, l);
  return out;
}

Vector LieTripleSystem::bracket(const Vector& x, const Vector& y, const Vector& z) const {
  if (x.size() != dim_ || y.size() != dim_ || z.size() != dim_) {
    throw DimensionError("LieTripleSystem::bracket: operand length differs from dim " +
                         std::to_string(dim_));
  }
  Vector out = Vector::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double xy = x(i) * y(j);
      if (xy == 0.0) continue;
      for (int k = 0; k < dim_; ++k) {
        const double w = xy * z(k);
        if (w == 0.0) continue;
        const double* row = &tensor_[index(i, j, k, 0)];
        for (int l = 0; l < dim_; ++l) out(l) += w * row[l];
      }
    }
  }
  return out;
}

double LieTripleSystem::scale() const {
  double s = 0.0;
  for (double v : tensor_) s = std::max(s, std::abs(v));
  return s;
}

LieTripleSystem LieTripleSystem::restricted(const LinearSubspace& n, const Tolerance& tol) const {
  require_ambient(n, dim_, "LieTripleSystem::restricted");
  const int r = n.dim();
  const Matrix& b = n.basis();
  const double s = std::max(1.0, scale());
  LieTripleSystem out = abelian(r, label_);
  for (int a = 0; a < r; ++a) {
    for (int c = 0; c < r; ++c) {
      for (int e = 0; e < r; ++e) {
        const Vector w = bracket(b.col(a), b.col(c), b.col(e));
        const Vector coords = b.transpose() * w;
        if ((w - b * coords).norm() > tol.threshold(s)) {
          throw PreconditionError("restricted: subspace is not closed under the triple bracket");
        }
        for (int l = 0; l < r; ++l) out.coeff(a, c, e, l) = coords(l);
      }
    }
  }
  return out;
}

LieTripleSystem LieTripleSystem::direct_sum(const LieTripleSystem& other) const {
  const int d = dim_ + other.dim_;
  LieTripleSystem out = abelian(d, label_ + "+" + other.label_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) out.coeff(i, j, k, l) = coeff(i, j, k, l);
  const int o = dim_;
  for (int i = 0; i < other.dim_; ++i)
    for (int j = 0; j < other.dim_; ++j)
      for (int k = 0; k < other.dim_; ++k)
        for (int l = 0; l < other.dim_; ++l) out.coeff(o + i, o + j, o + k, o + l) = other.coeff(i, j, k, l);
  return out;
}

LieTripleSystem LieTripleSystem::relabeled(std::string label) const {
  LieTripleSystem out = *this;
  out.label_ = std::move(label);
  return out;
}

double AxiomReport::max_residual() const {
  return std::max({antisymmetry.max_residual, cyclic.max_residual, derivation.max_residual});
}

AxiomReport check_lts_axioms(const LieTripleSystem& m, const Tolerance& tol) {
  const int d = m.dim();
  const double s = std::max(1.0, m.scale());
  AxiomReport rep;

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          rep.antisymmetry.max_residual =
              std::max(rep.antisymmetry.max_residual, std::abs(m.coeff(i, j, k, l) + m.coeff(j, i, k, l)));
          rep.cyclic.max_residual = std::max(
              rep.cyclic.max_residual,
              std::abs(m.coeff(i, j, k, l) + m.coeff(j, k, i, l) + m.coeff(k, i, j, l)));
        }

  // D = [u,v,-] as a matrix: D(l, k) = c(u,v,k,l). For each basis triple,
  // D[x,y,z] - [Dx,y,z] - [x,Dy,z] - [x,y,Dz] must vanish.
  for (int u = 0; u < d; ++u) {
    for (int v = 0; v < d; ++v) {
      Matrix dm(d, d);
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) dm(l, k) = m.coeff(u, v, k, l);
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
          for (int z = 0; z < d; ++z)
            for (int l = 0; l < d; ++l) {
              double r = 0.0;
              for (int q = 0; q < d; ++q) {
                r += dm(l, q) * m.coeff(x, y, z, q);
                r -= dm(q, x) * m.coeff(q, y, z, l);
                r -= dm(q, y) * m.coeff(x, q, z, l);
                r -= dm(q, z) * m.coeff(x, y, q, l);
              }
              rep.derivation.max_residual = std::max(rep.derivation.max_residual, std::abs(r));
            }
    }
  }

  rep.antisymmetry.passed = rep.antisymmetry.max_residual <= tol.threshold(s);
  rep.cyclic.passed = rep.cyclic.max_residual <= tol.threshold(s);
  rep.derivation.passed = rep.derivation.max_residual <= tol.threshold(s * s * std::max(1, d));
  return rep;
}

double LtsMorphism::homomorphism_residual() const {
  if (matrix.rows() != target.dim() || matrix.cols() != source.dim()) {
    throw DimensionError("LtsMorphism: matrix is " + std::to_string(matrix.rows()) + "x" +
                         std::to_string(matrix.cols()) + ", expected " +
                         std::to_string(target.dim()) + "x" + std::to_string(source.dim()));
  }
  const int d = source.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const Vector lhs = matrix * source.bracket_basis(i, j, k);
        const Vector rhs = target.bracket(matrix.col(i), matrix.col(j), matrix.col(k));
        worst = std::max(worst, (lhs - rhs).norm());
      }
  return worst;
}

bool LtsMorphism::is_valid(const Tolerance& tol) const {
  const double a = std::max(1.0, num::op_norm(matrix));
  const double s = std::max({1.0, source.scale(), target.scale()});
  return homomorphism_residual() <= tol.threshold(s * a * a * a);
}

bool is_subsystem(const LieTripleSystem& m, const LinearSubspace& n, const Tolerance& tol) {
  require_ambient(n, m.dim(), "is_subsystem");
  const Matrix& b = n.basis();
  const double s = std::max(1.0, m.scale());
  for (int a = 0; a < n.dim(); ++a)
    for (int c = a + 1; c < n.dim(); ++c)
      for (int e = 0; e < n.dim(); ++e) {
        if (n.distance(m.bracket(b.col(a), b.col(c), b.col(e))) > tol.threshold(s)) return false;
      }
  return true;
}

IdealReport ideal_report(const LieTripleSystem& m, const LinearSubspace& n, const Tolerance& tol) {
  require_ambient(n, m.dim(), "ideal_report");
  const int d = m.dim();
  const Matrix& b = n.basis();
  const double s = std::max(1.0, m.scale());
  IdealReport rep{true, true, true};
  for (int a = 0; a < n.dim(); ++a) {
    const Vector na = b.col(a);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const Vector ej = unit(d, j), ek = unit(d, k);
        if (rep.left && n.distance(m.bracket(na, ej, ek)) > tol.threshold(s)) rep.left = false;
        if (rep.middle && n.distance(m.bracket(ej, na, ek)) > tol.threshold(s)) rep.middle = false;
        if (rep.right && n.distance(m.bracket(ej, ek, na)) > tol.threshold(s)) rep.right = false;
      }
  }
  return rep;
}

bool is_ideal(const LieTripleSystem& m, const LinearSubspace& n, const Tolerance& tol) {
  return ideal_report(m, n, tol).ideal();
}

LtsQuotient quotient_lts(const LieTripleSystem& m, const LinearSubspace& n, const Tolerance& tol) {
  if (!is_ideal(m, n, tol)) throw PreconditionError("quotient_lts: subspace is not an ideal");
  LinearSubspace comp = n.orthogonal_complement();
  const Matrix& q = comp.basis();
  const int r = comp.dim();
  LieTripleSystem quot = LieTripleSystem::abelian(r, m.label() + "/n");
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        const Vector w = q.transpose() * m.bracket(q.col(a), q.col(b), q.col(c));
        for (int l = 0; l < r; ++l) quot.coeff(a, b, c, l) = w(l);
      }
  LtsMorphism proj{m, quot, q.transpose()};
  return LtsQuotient{std::move(quot), std::move(proj), std::move(comp)};
}

// ---------------------------------------------------------------------------
// SymmetricLieAlgebra

SymmetricLieAlgebra::SymmetricLieAlgebra(int dim, std::vector<double> tensor, Matrix theta,
                                         std::string label, const Tolerance& tol)
    : dim_(dim), tensor_(std::move(tensor)), theta_(std::move(theta)), label_(std::move(label)) {
  const auto d = static_cast<std::size_t>(dim);
  if (dim < 0 || tensor_.size() != d * d * d) {
    throw DimensionError("SymmetricLieAlgebra: tensor must have dim^3 entries");
  }
  if (theta_.rows() != dim || theta_.cols() != dim) {
    throw DimensionError("SymmetricLieAlgebra: theta must be dim x dim");
  }
  num::require_finite(theta_, "SymmetricLieAlgebra theta");
  const Matrix id = Matrix::Identity(dim, dim);
  const double tn = dim == 0 ? 0.0 : num::op_norm(theta_);
  if (dim > 0 && (theta_ * theta_ - id).norm() > tol.threshold(tn * tn)) {
    throw PreconditionError("SymmetricLieAlgebra: theta is not an involution");
  }
  plus_ = LinearSubspace::span(Matrix((id + theta_) / 2.0), tol);
  minus_ = LinearSubspace::span(Matrix((id - theta_) / 2.0), tol);
  if (plus_.dim() + minus_.dim() != dim) {
    throw VerificationError("SymmetricLieAlgebra: eigenspaces of theta do not span the algebra");
  }
}

Vector SymmetricLieAlgebra::bracket(const Vector& x, const Vector& y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw DimensionError("SymmetricLieAlgebra::bracket: operand length");
  }
  Vector out = Vector::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double w = x(i) * y(j);
      if (w == 0.0) continue;
      const double* row = &tensor_[(static_cast<std::size_t>(i) * dim_ + j) * dim_];
      for (int l = 0; l < dim_; ++l) out(l) += w * row[l];
    }
  }
  return out;
}

Matrix SymmetricLieAlgebra::ad(const Vector& x) const {
  Matrix out(dim_, dim_);
  for (int j = 0; j < dim_; ++j) out.col(j) = bracket(x, unit(dim_, j));
  return out;
}

LinearSubspace SymmetricLieAlgebra::embed_minus(const LinearSubspace& n, const Tolerance& tol) const {
  require_ambient(n, minus_dim(), "embed_minus");
  return n.image(minus_.basis(), tol);
}

double SymmetricLieAlgebra::scale() const {
  double s = 0.0;
  for (double v : tensor_) s = std::max(s, std::abs(v));
  return s;
}

LieTripleSystem SymmetricLieAlgebra::minus_lts(const Tolerance& tol) const {
  const Matrix& b = minus_.basis();
  const int r = minus_.dim();
  const double s = std::max(1.0, scale());
  LieTripleSystem out = LieTripleSystem::abelian(r, label_);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const Vector xy = bracket(b.col(i), b.col(j));
      for (int k = 0; k < r; ++k) {
        const Vector w = bracket(xy, b.col(k));
        const Vector coords = b.transpose() * w;
        if ((w - b * coords).norm() > tol.threshold(s * s)) {
          throw VerificationError("minus_lts: [[x,y],z] leaves the -1 eigenspace");
        }
        for (int l = 0; l < r; ++l) out.coeff(i, j, k, l) = coords(l);
      }
    }
  }
  return out;
}

SymmetricLieAlgebra::Report SymmetricLieAlgebra::check(const Tolerance& tol) const {
  Report rep;
  const int d = dim_;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l)
        rep.antisymmetry = std::max(rep.antisymmetry, std::abs(coeff(i, j, l) + coeff(j, i, l)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const Vector ei = unit(d, i), ej = unit(d, j), ek = unit(d, k);
        const Vector jac = bracket(ei, bracket(ej, ek)) + bracket(ej, bracket(ek, ei)) +
                           bracket(ek, bracket(ei, ej));
        rep.jacobi = std::max(rep.jacobi, jac.norm());
      }
  if (d > 0) rep.involution = (theta_ * theta_ - Matrix::Identity(d, d)).norm();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Vector ei = unit(d, i), ej = unit(d, j);
      const Vector diff = theta_ * bracket(ei, ej) - bracket(theta_ * ei, theta_ * ej);
      rep.automorphism = std::max(rep.automorphism, diff.norm());
    }
  const double s = std::max(1.0, scale());
  const double t = d == 0 ? 1.0 : std::max(1.0, num::op_norm(theta_));
  rep.passed = rep.antisymmetry <= tol.threshold(s) && rep.jacobi <= tol.threshold(s * s * d) &&
               rep.involution <= tol.threshold(t * t) &&
               rep.automorphism <= tol.threshold(s * t * t);
  return rep;
}

SymmetricLieAlgebra direct_sum(const SymmetricLieAlgebra& a, const SymmetricLieAlgebra& b) {
  const int da = a.dim(), db = b.dim(), d = da + db;
  const auto idx = [d](int i, int j, int l) {
    return (static_cast<std::size_t>(i) * d + j) * d + l;
  };
  std::vector<double> t(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int l = 0; l < da; ++l) t[idx(i, j, l)] = a.coeff(i, j, l);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int l = 0; l < db; ++l) t[idx(da + i, da + j, da + l)] = b.coeff(i, j, l);
  Matrix theta = Matrix::Zero(d, d);
  theta.topLeftCorner(da, da) = a.theta();
  theta.bottomRightCorner(db, db) = b.theta();
  return SymmetricLieAlgebra(d, std::move(t), std::move(theta), a.label() + "+" + b.label());
}

bool is_subalgebra(const SymmetricLieAlgebra& g, const LinearSubspace& h, const Tolerance& tol) {
  require_ambient(h, g.dim(), "is_subalgebra");
  const Matrix& b = h.basis();
  const double s = std::max(1.0, g.scale());
  for (int i = 0; i < h.dim(); ++i)
    for (int j = i + 1; j < h.dim(); ++j) {
      if (h.distance(g.bracket(b.col(i), b.col(j))) > tol.threshold(s)) return false;
    }
  return true;
}

bool is_lie_ideal(const SymmetricLieAlgebra& g, const LinearSubspace& l, const Tolerance& tol) {
  require_ambient(l, g.dim(), "is_lie_ideal");
  const Matrix& b = l.basis();
  const double s = std::max(1.0, g.scale());
  for (int i = 0; i < g.dim(); ++i)
    for (int a = 0; a < l.dim(); ++a) {
      if (l.distance(g.bracket(unit(g.dim(), i), b.col(a))) > tol.threshold(s)) return false;
    }
  return true;
}

bool is_theta_invariant(const SymmetricLieAlgebra& g, const LinearSubspace& l, const Tolerance& tol) {
  require_ambient(l, g.dim(), "is_theta_invariant");
  const Matrix& b = l.basis();
  for (int a = 0; a < l.dim(); ++a) {
    if (!l.contains(Vector(g.theta() * b.col(a)), tol)) return false;
  }
  return true;
}

LinearSubspace bracket_span(const SymmetricLieAlgebra& g, const LinearSubspace& a,
                            const LinearSubspace& b, const Tolerance& tol) {
  require_ambient(a, g.dim(), "bracket_span");
  require_ambient(b, g.dim(), "bracket_span");
  Matrix cols(g.dim(), a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) cols.col(i * b.dim() + j) = g.bracket(a.basis().col(i), b.basis().col(j));
  return LinearSubspace::span(cols, tol);
}

SymmetricLieAlgebra standard_embedding(const LieTripleSystem& m, const LinearSubspace& n,
                                       const Tolerance& tol) {
  const LieTripleSystem mn = m.restricted(n, tol);
  const int r = mn.dim();

  // Inner derivations D_{a,b} = [a,b,-], flattened, spanning the +1 part.
  auto derivation = [&](const Vector& x, const Vector& y) {
    Matrix dm(r, r);
    for (int k = 0; k < r; ++k) {
      Vector ek = Vector::Zero(r);
      ek(k) = 1.0;
      dm.col(k) = mn.bracket(x, y, ek);
    }
    return dm;
  };
  std::vector<Vector> flat;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) flat.push_back(num::flatten(derivation(unit(r, a), unit(r, b))));
  const LinearSubspace der = LinearSubspace::span(r * r, flat, tol);
  const int p = der.dim();
  const int d = p + r;
  const Matrix& e = der.basis();
  const auto as_matrix = [&](int s) { return Matrix(Eigen::Map<const Matrix>(e.col(s).data(), r, r)); };

  std::vector<double> t(static_cast<std::size_t>(d) * d * d, 0.0);
  const auto idx = [d](int i, int j, int l) { return (static_cast<std::size_t>(i) * d + j) * d + l; };
  const double s = std::max(1.0, m.scale());

  auto plus_coords = [&](const Matrix& op) {
    const Vector v = num::flatten(op);
    const Vector c = e.transpose() * v;
    if ((v - e * c).norm() > tol.threshold(s * s)) {
      throw VerificationError("standard_embedding: derivations do not close under commutator");
    }
    return c;
  };

  for (int i = 0; i < p; ++i) {
    const Matrix di = as_matrix(i);
    for (int j = 0; j < p; ++j) {
      const Vector c = plus_coords(num::commutator(di, as_matrix(j)));
      for (int l = 0; l < p; ++l) t[idx(i, j, l)] = c(l);
    }
    for (int a = 0; a < r; ++a) {
      const Vector v = di.col(a);
      for (int l = 0; l < r; ++l) {
        t[idx(i, p + a, p + l)] = v(l);
        t[idx(p + a, i, p + l)] = -v(l);
      }
    }
  }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      const Vector c = plus_coords(derivation(unit(r, a), unit(r, b)));
      for (int l = 0; l < p; ++l) t[idx(p + a, p + b, l)] = c(l);
    }

  Matrix theta = Matrix::Identity(d, d);
  theta.bottomRightCorner(r, r) *= -1.0;
  return SymmetricLieAlgebra(d, std::move(t), std::move(theta), "emb(" + m.label() + ")", tol);
}

namespace {

void require_displacement_plus(const SymmetricLieAlgebra& g, const Tolerance& tol) {
  const LinearSubspace gen = bracket_span(g, g.minus(), g.minus(), tol);
  if (!gen.equals(g.plus(), tol)) {
    throw PreconditionError("the +1 part is not spanned by brackets of the -1 part");
  }
}

void require_lts_ideal(const SymmetricLieAlgebra& g, const LinearSubspace& n, const Tolerance& tol) {
  require_ambient(n, g.minus_dim(), "ideal construction");
  if (!is_ideal(g.minus_lts(tol), n, tol)) {
    throw PreconditionError("subspace is not an ideal of the triple system");
  }
}

void verify_theta_ideal(const SymmetricLieAlgebra& g, const LinearSubspace& l, const Tolerance& tol,
                        const char* what) {
  if (!is_lie_ideal(g, l, tol) || !is_theta_invariant(g, l, tol)) {
    throw VerificationError(std::string(what) + ": result is not a theta-invariant ideal");
  }
}

}  // namespace

PsiRepresentation psi_representation(const SymmetricLieAlgebra& g, const LinearSubspace& n,
                                     const Tolerance& tol) {
  require_lts_ideal(g, n, tol);
  require_displacement_plus(g, tol);

  PsiRepresentation out;
  out.complement = n.orthogonal_complement();
  const Matrix& q = out.complement.basis();
  const Matrix& mb = g.minus().basis();
  const Matrix& pb = g.plus().basis();
  const int r = out.complement.dim();
  const int p = g.plus_dim();
  const double s = std::max(1.0, g.scale());

  Matrix stacked(r * r, p);
  for (int a = 0; a < p; ++a) {
    const Matrix ad_minus = g.ad(pb.col(a)) * mb;  // columns in algebra coordinates
    const Matrix coords = mb.transpose() * ad_minus;
    if ((ad_minus - mb * coords).norm() > tol.threshold(s)) {
      throw VerificationError("psi_representation: ad of the +1 part does not preserve the -1 part");
    }
    Matrix psi = q.transpose() * coords * q;
    stacked.col(a) = num::flatten(psi);
    out.operators.push_back(std::move(psi));
  }
  const Matrix ker = num::nullspace(stacked, tol);
  out.kernel = LinearSubspace::span(Matrix(pb * ker), tol);
  return out;
}

LinearSubspace ideal_ker_psi_plus_n(const SymmetricLieAlgebra& g, const LinearSubspace& n,
                                    const Tolerance& tol) {
  const PsiRepresentation psi = psi_representation(g, n, tol);
  const LinearSubspace l = psi.kernel.sum(g.embed_minus(n, tol), tol);
  verify_theta_ideal(g, l, tol, "ideal_ker_psi_plus_n");
  return l;
}

LinearSubspace ideal_bracket_plus_n(const SymmetricLieAlgebra& g, const LinearSubspace& n,
                                    const Tolerance& tol) {
  require_lts_ideal(g, n, tol);
  const LinearSubspace ng = g.embed_minus(n, tol);
  const LinearSubspace l = bracket_span(g, g.minus(), ng, tol).sum(ng, tol);
  verify_theta_ideal(g, l, tol, "ideal_bracket_plus_n");
  return l;
}

LinearSubspace displacement_algebra(const SymmetricLieAlgebra& g, const Tolerance& tol) {
  const LinearSubspace h = bracket_span(g, g.minus(), g.minus(), tol).sum(g.minus(), tol);
  if (!is_subalgebra(g, h, tol) || !is_theta_invariant(g, h, tol)) {
    throw VerificationError("displacement_algebra: not a theta-invariant subalgebra");
  }
  return h;
}

SymmetricLieAlgebra restrict_algebra(const SymmetricLieAlgebra& g, const LinearSubspace& h,
                                     const Tolerance& tol) {
  if (!is_subalgebra(g, h, tol) || !is_theta_invariant(g, h, tol)) {
    throw PreconditionError("restrict_algebra: subspace is not a theta-invariant subalgebra");
  }
  const Matrix& b = h.basis();
  const int q = h.dim();
  std::vector<double> t(static_cast<std::size_t>(q) * q * q, 0.0);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const Vector c = b.transpose() * g.bracket(b.col(i), b.col(j));
      for (int l = 0; l < q; ++l) t[(static_cast<std::size_t>(i) * q + j) * q + l] = c(l);
    }
  Matrix theta = b.transpose() * g.theta() * b;
  return SymmetricLieAlgebra(q, std::move(t), std::move(theta), g.label(), tol);
}

KillingSignature killing_signature(const SymmetricLieAlgebra& g, const Tolerance& tol) {
  const int d = g.dim();
  KillingSignature sig;
  if (d == 0) return sig;
  std::vector<Matrix> ads;
  for (int i = 0; i < d; ++i) ads.push_back(g.ad(unit(d, i)));
  Matrix k(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) k(i, j) = (ads[i] * ads[j]).trace();
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  const Vector& ev = es.eigenvalues();
  const double cutoff = tol.threshold(ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) ++sig.positive;
    else if (ev(i) < -cutoff) ++sig.negative;
    else ++sig.zero;
  }
  return sig;
}

}  // namespace symkit
