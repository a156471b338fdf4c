#pragma once

#include <span>
#include <string>
#include <vector>

#include "symkit/numkernel.hpp"

namespace symkit {

/// A linear subspace of R^ambient_dim, stored as an orthonormal basis.
///
/// Spanning sets are orthonormalized by modified Gram-Schmidt in input order,
/// so span{e1} stays e1 and eigenspaces of diagonal involutions keep their
/// coordinate ordering. Dependent inputs are dropped.
class LinearSubspace {
 public:
  LinearSubspace() = default;

  static LinearSubspace zero(int ambient_dim);
  static LinearSubspace full(int ambient_dim);
  /// Span of the columns of `columns` (ambient dimension = rows).
  static LinearSubspace span(const Matrix& columns, const Tolerance& tol = {});
  static LinearSubspace span(int ambient_dim, std::span<const Vector> vectors,
                             const Tolerance& tol = {});
  /// Span of selected coordinate axes.
  static LinearSubspace coordinate(int ambient_dim, std::span<const int> axes);

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  Vector project(const Vector& v) const;
  /// Distance of v from the subspace.
  double distance(const Vector& v) const;
  bool contains(const Vector& v, const Tolerance& tol = {}) const;
  bool contains(const LinearSubspace& other, const Tolerance& tol = {}) const;
  bool equals(const LinearSubspace& other, const Tolerance& tol = {}) const;

  /// Orthogonal complement, built from coordinate axes in ascending order.
  LinearSubspace orthogonal_complement() const;
  LinearSubspace sum(const LinearSubspace& other, const Tolerance& tol = {}) const;
  /// Image under a linear map (rows = new ambient dimension).
  LinearSubspace image(const Matrix& map, const Tolerance& tol = {}) const;
  /// Preimage {v : map v in this}, computed by nullspace of (I - P) map.
  static LinearSubspace preimage(const Matrix& map, const LinearSubspace& target,
                                 const Tolerance& tol = {});

 private:
  LinearSubspace(int ambient, Matrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

  int ambient_ = 0;
  Matrix basis_ = Matrix(0, 0);
};

/// Finite-dimensional Lie triple system given by its structure tensor:
/// [e_i, e_j, e_k] = sum_l c(i,j,k,l) e_l.
///
/// The constructor does not enforce the axioms; use check_lts_axioms.
class LieTripleSystem {
 public:
  LieTripleSystem() = default;
  LieTripleSystem(int dim, std::vector<double> tensor, std::string label = {});

  static LieTripleSystem abelian(int dim, std::string label = "abelian");

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  const std::vector<double>& tensor() const { return tensor_; }

  double coeff(int i, int j, int k, int l) const { return tensor_[index(i, j, k, l)]; }
  double& coeff(int i, int j, int k, int l) { return tensor_[index(i, j, k, l)]; }

  Vector bracket_basis(int i, int j, int k) const;
  /// Trilinear bracket; DimensionError on length mismatch.
  Vector bracket(const Vector& x, const Vector& y, const Vector& z) const;

  /// Bracket restricted to a subsystem, in the coordinates of n's basis.
  /// PreconditionError if n is not a subsystem.
  LieTripleSystem restricted(const LinearSubspace& n, const Tolerance& tol = {}) const;

  LieTripleSystem direct_sum(const LieTripleSystem& other) const;
  LieTripleSystem relabeled(std::string label) const;

  /// Largest |c| over the tensor.
  double scale() const;

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l;
  }

  int dim_ = 0;
  std::vector<double> tensor_;
  std::string label_;
};

struct AxiomCheck {
  bool passed = true;
  double max_residual = 0.0;
};

/// Residuals of the three axiom families over all basis tuples.
struct AxiomReport {
  AxiomCheck antisymmetry;  // [x,y,z] + [y,x,z] = 0
  AxiomCheck cyclic;        // [x,y,z] + [y,z,x] + [z,x,y] = 0
  AxiomCheck derivation;    // [x,y,-] is a derivation of the bracket

  bool passed() const { return antisymmetry.passed && cyclic.passed && derivation.passed; }
  double max_residual() const;
};

AxiomReport check_lts_axioms(const LieTripleSystem& m, const Tolerance& tol = {});

/// Linear map between triple systems: matrix is dim(target) x dim(source).
struct LtsMorphism {
  LieTripleSystem source;
  LieTripleSystem target;
  Matrix matrix;

  /// max over basis triples of |A[x,y,z] - [Ax,Ay,Az]|.
  double homomorphism_residual() const;
  bool is_valid(const Tolerance& tol = {}) const;
};

/// true iff [n,n,n] is contained in n.
bool is_subsystem(const LieTripleSystem& m, const LinearSubspace& n, const Tolerance& tol = {});

/// The ideal condition [n,m,m] in n together with its two consequences,
/// each checked independently.
struct IdealReport {
  bool left = false;    // [n,m,m] in n
  bool middle = false;  // [m,n,m] in n
  bool right = false;   // [m,m,n] in n

  bool ideal() const { return left; }
  bool consistent() const { return !left || (middle && right); }
};

IdealReport ideal_report(const LieTripleSystem& m, const LinearSubspace& n,
                         const Tolerance& tol = {});
bool is_ideal(const LieTripleSystem& m, const LinearSubspace& n, const Tolerance& tol = {});

struct LtsQuotient {
  LieTripleSystem quotient;
  LtsMorphism projection;
  /// Orthogonal complement of n; its basis is the quotient's coordinate basis.
  LinearSubspace complement;
};

/// m/n on the orthogonal complement of n. PreconditionError unless n is an ideal.
LtsQuotient quotient_lts(const LieTripleSystem& m, const LinearSubspace& n,
                         const Tolerance& tol = {});

/// Real Lie algebra with structure constants [e_i, e_j] = sum_l b(i,j,l) e_l and
/// an involutive automorphism theta.
class SymmetricLieAlgebra {
 public:
  SymmetricLieAlgebra() = default;
  /// PreconditionError if theta is not an involution of the right size.
  SymmetricLieAlgebra(int dim, std::vector<double> tensor, Matrix theta, std::string label = {},
                      const Tolerance& tol = {});

  int dim() const { return dim_; }
  int plus_dim() const { return plus_.dim(); }
  int minus_dim() const { return minus_.dim(); }
  const std::string& label() const { return label_; }
  const std::vector<double>& tensor() const { return tensor_; }
  const Matrix& theta() const { return theta_; }

  double coeff(int i, int j, int l) const {
    return tensor_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + l];
  }

  /// +1 and -1 eigenspaces, in algebra coordinates.
  const LinearSubspace& plus() const { return plus_; }
  const LinearSubspace& minus() const { return minus_; }

  Vector bracket(const Vector& x, const Vector& y) const;
  /// Matrix of ad(x) = [x, -].
  Matrix ad(const Vector& x) const;

  /// g_- coordinates -> algebra coordinates.
  Vector embed_minus(const Vector& v) const { return minus_.basis() * v; }
  LinearSubspace embed_minus(const LinearSubspace& n, const Tolerance& tol = {}) const;

  /// g_- as a triple system under [[x,y],z], in minus-basis coordinates.
  /// VerificationError if a bracket leaves g_-.
  LieTripleSystem minus_lts(const Tolerance& tol = {}) const;

  struct Report {
    double antisymmetry = 0.0;
    double jacobi = 0.0;
    double involution = 0.0;      // ||theta^2 - I||
    double automorphism = 0.0;    // theta[x,y] - [theta x, theta y]
    bool passed = false;
  };
  Report check(const Tolerance& tol = {}) const;

  double scale() const;

 private:
  int dim_ = 0;
  std::vector<double> tensor_;
  Matrix theta_ = Matrix(0, 0);
  std::string label_;
  LinearSubspace plus_;
  LinearSubspace minus_;
};

SymmetricLieAlgebra direct_sum(const SymmetricLieAlgebra& a, const SymmetricLieAlgebra& b);

bool is_subalgebra(const SymmetricLieAlgebra& g, const LinearSubspace& h, const Tolerance& tol = {});
bool is_lie_ideal(const SymmetricLieAlgebra& g, const LinearSubspace& l, const Tolerance& tol = {});
bool is_theta_invariant(const SymmetricLieAlgebra& g, const LinearSubspace& l,
                        const Tolerance& tol = {});

/// span{[a,b] : a in A, b in B} for subspaces given in algebra coordinates.
LinearSubspace bracket_span(const SymmetricLieAlgebra& g, const LinearSubspace& a,
                            const LinearSubspace& b, const Tolerance& tol = {});

/// The symmetric Lie algebra h = span{D_{x,y}} + n of inner derivations
/// D_{x,y} = [x,y,-] acting on the subsystem n, with theta = +1 on the
/// derivation part and -1 on n. Coordinates: derivations first, then n.
SymmetricLieAlgebra standard_embedding(const LieTripleSystem& m, const LinearSubspace& n,
                                       const Tolerance& tol = {});

/// The representation of g_+ on g_-/n induced by ad.
struct PsiRepresentation {
  /// One operator per g_+ basis vector, in the coordinates of `complement`.
  std::vector<Matrix> operators;
  /// ker(psi) in algebra coordinates.
  LinearSubspace kernel;
  /// Orthogonal complement of n inside g_- (g_- coordinates).
  LinearSubspace complement;
};

/// n is given in g_- coordinates and must be an ideal of the triple system g_-;
/// g_+ must equal span[g_-, g_-].
PsiRepresentation psi_representation(const SymmetricLieAlgebra& g, const LinearSubspace& n,
                                     const Tolerance& tol = {});

/// ker(psi) + n in algebra coordinates, verified to be a theta-invariant ideal.
LinearSubspace ideal_ker_psi_plus_n(const SymmetricLieAlgebra& g, const LinearSubspace& n,
                                    const Tolerance& tol = {});

/// span[g_-, n] + n in algebra coordinates, verified to be a theta-invariant ideal.
LinearSubspace ideal_bracket_plus_n(const SymmetricLieAlgebra& g, const LinearSubspace& n,
                                    const Tolerance& tol = {});

/// span[g_-, g_-] + g_-, verified to be a theta-invariant subalgebra.
LinearSubspace displacement_algebra(const SymmetricLieAlgebra& g, const Tolerance& tol = {});

/// The symmetric Lie algebra structure induced on a theta-invariant subalgebra,
/// in the coordinates of h's basis.
SymmetricLieAlgebra restrict_algebra(const SymmetricLieAlgebra& g, const LinearSubspace& h,
                                     const Tolerance& tol = {});

/// Signature (positive, negative, zero) of the Killing form tr(ad x ad y).
struct KillingSignature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};
KillingSignature killing_signature(const SymmetricLieAlgebra& g, const Tolerance& tol = {});

}  // namespace symkit
