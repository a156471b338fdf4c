#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "symkit/lts.hpp"

namespace symkit {

enum class SigmaKind { conjugation, transpose_inverse, composite };

const char* to_string(SigmaKind kind);
SigmaKind sigma_kind_from_string(const std::string& name);

/// Group-level involution. Conjugation and composite rules carry a matrix
/// Theta with Theta^2 = +-I:
///   conjugation        g -> Theta g Theta^-1
///   transpose_inverse  g -> g^-T
///   composite          g -> Theta g^-T Theta^-1
struct SigmaRule {
  SigmaKind kind = SigmaKind::conjugation;
  Matrix theta = Matrix(0, 0);

  static SigmaRule conjugation(Matrix theta) { return {SigmaKind::conjugation, std::move(theta)}; }
  static SigmaRule transpose_inverse() { return {SigmaKind::transpose_inverse, Matrix(0, 0)}; }
  static SigmaRule composite(Matrix theta) { return {SigmaKind::composite, std::move(theta)}; }
};

/// Discrete kernel of exp on an abelian pair, described in g_- coordinates.
/// unwrap maps a Cartan matrix to some v with exp_point(v) equal to it.
struct PeriodLattice {
  Matrix generators;  // columns span the lattice, in g_- coordinates
  std::function<Vector(const Matrix&)> unwrap;
};

/// A connected matrix group G given by its Lie algebra basis, with an
/// involution sigma. K is always the full fixed group G^sigma.
class MatrixSymmetricPair {
 public:
  /// Validates commutator closure, the derived involution theta and
  /// sigma(exp(t x)) = exp(t theta(x)) on basis rays; PreconditionError otherwise.
  MatrixSymmetricPair(int ambient_n, std::vector<Matrix> basis, SigmaRule sigma, std::string label,
                      const Tolerance& tol = {}, std::optional<PeriodLattice> lattice = {});

  int ambient_n() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const std::vector<Matrix>& minus_basis() const { return minus_basis_; }
  const SymmetricLieAlgebra& algebra() const { return algebra_; }
  const SigmaRule& sigma_rule() const { return sigma_; }
  const std::string& label() const { return label_; }
  const Tolerance& tolerance() const { return tol_; }
  const std::optional<PeriodLattice>& lattice() const { return lattice_; }

  Matrix identity() const { return Matrix::Identity(n_, n_); }

  /// sum_i c_i B_i.
  Matrix element(const Vector& coords) const;
  /// Least-squares coordinates with the residual of the fit.
  num::Coordinates decompose(const Matrix& x) const;
  /// Coordinates; DomainError if x is not in the algebra.
  Vector coordinates(const Matrix& x) const;

  Matrix minus_element(const Vector& v) const;
  /// g_- coordinates; DomainError if x is not in g_-.
  Vector minus_coordinates(const Matrix& x) const;

  Matrix sigma(const Matrix& g) const;
  /// Derivative of sigma at the identity.
  Matrix theta(const Matrix& x) const;
  /// g sigma(g)^-1.
  Matrix cartan(const Matrix& g) const;

 private:
  int n_ = 0;
  std::vector<Matrix> basis_;
  std::vector<Matrix> minus_basis_;
  Matrix pinv_;
  SigmaRule sigma_;
  Matrix theta_inv_ = Matrix(0, 0);
  std::string label_;
  Tolerance tol_;
  std::optional<PeriodLattice> lattice_;
  SymmetricLieAlgebra algebra_;
};

using PairPtr = std::shared_ptr<const MatrixSymmetricPair>;

/// Pairs compare equal when they are the same object or carry the same label
/// and ambient size (catalog rebuilds yield distinct objects).
bool same_pair(const MatrixSymmetricPair& a, const MatrixSymmetricPair& b);

/// A zero-dimensional pair: one point.
PairPtr point_pair();

Matrix group_sigma(const MatrixSymmetricPair& p, const Matrix& g);
bool in_fixed_group(const MatrixSymmetricPair& p, const Matrix& g, const Tolerance& tol = {});

/// (exp(x/k) exp(y/k))^k.
Matrix trotter_group_sum(const Matrix& x, const Matrix& y, long long k);
/// (exp(x/k) exp(y/k) exp(-x/k) exp(-y/k))^(k^2).
Matrix trotter_group_commutator(const Matrix& x, const Matrix& y, long long k);

/// The same formulas with x, y in algebra coordinates of p.
Matrix trotter_group_sum(const MatrixSymmetricPair& p, const Vector& x, const Vector& y, long long k);
Matrix trotter_group_commutator(const MatrixSymmetricPair& p, const Vector& x, const Vector& y,
                                long long k);

/// Coordinates (g, l) on S = {(g, g l) : g in G, l in L}.
struct RelationElement {
  Matrix g;
  Matrix l;
};

/// (g1 g2, g2^-1 l1 g2 l2). L is given in algebra coordinates and must be a
/// Lie ideal; the l-components are checked through their logarithms.
RelationElement relation_group_product(const MatrixSymmetricPair& p, const LinearSubspace& l_algebra,
                                       const RelationElement& a, const RelationElement& b,
                                       const Tolerance& tol = {});

/// exp(w_1) exp(w_2) ... exp(w_m), letters in algebra coordinates.
struct GroupWord {
  std::vector<Vector> letters;
};

Matrix evaluate_word(const MatrixSymmetricPair& p, const GroupWord& word);

struct PairMorphism {
  PairPtr source;
  PairPtr target;
  Matrix algebra_map;  // target.dim() x source.dim()
  std::function<Matrix(const Matrix&)> group_map;
  std::string label;

  /// algebra_map restricted to g_- (in g_- coordinates on both sides).
  Matrix minus_map() const;
};

/// Morphism built from a block operation that acts linearly on matrices, so
/// the same rule serves as group map and algebra map.
PairMorphism block_morphism(PairPtr source, PairPtr target,
                            std::function<Matrix(const Matrix&)> group_map,
                            std::function<Matrix(const Matrix&)> algebra_rule, std::string label);

struct MorphismReport {
  double bracket = 0.0;     // A[x,y] - [Ax,Ay]
  double involution = 0.0;  // A theta1 - theta2 A
  double exp_compat = 0.0;  // f(exp(tx)) - exp(t A x)
  double sigma_compat = 0.0;
  bool passed = false;
};

MorphismReport check_pair_morphism(const PairMorphism& f, const Tolerance& tol = {});

/// Image of a word: product of the images of its letters.
Matrix apply_pair_morphism(const PairMorphism& f, const GroupWord& word);

/// Sampled invariant residuals of a pair.
struct PairInvariantReport {
  double sigma_involution = 0.0;  // sigma(sigma(g)) - g, relative
  double eigenspace_split = 0.0;  // [g+,g+] in g+, [g+,g-] in g-, [g-,g-] in g+
  double sigma_exp = 0.0;         // sigma(exp(t x)) - exp(t theta x)
};

PairInvariantReport check_pair_invariants(const MatrixSymmetricPair& p, std::mt19937_64& rng,
                                          int samples);

namespace sample {

Vector gaussian(std::mt19937_64& rng, int dim);
/// Uniform in the closed ball of the given radius.
Vector in_ball(std::mt19937_64& rng, int dim, double radius);
/// Uniform on the sphere of the given radius.
Vector on_sphere(std::mt19937_64& rng, int dim, double radius);
/// A product of `letters` exponentials of algebra elements in the ball.
Matrix group_element(const MatrixSymmetricPair& p, std::mt19937_64& rng, int letters, double radius);

}  // namespace sample

}  // namespace symkit
