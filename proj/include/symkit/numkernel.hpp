#pragma once

#include <Eigen/Dense>

#include "symkit/error.hpp"

namespace symkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance policy shared by every approximate comparison.
///
/// A quantity of magnitude `scale` is treated as zero when it does not
/// exceed `abs_eps + rel_eps * scale`.
struct Tolerance {
  double abs_eps = 1e-10;
  double rel_eps = 1e-9;

  Tolerance() = default;
  Tolerance(double abs, double rel);

  double threshold(double scale) const { return abs_eps + rel_eps * scale; }
  bool negligible(double value, double scale = 0.0) const {
    return value <= threshold(scale);
  }
};

namespace num {

/// Throws DimensionError unless `a` is square.
void require_square(const Matrix& a, const char* what);

/// Throws DomainError if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* what);

/// Matrix exponential by scaling and squaring with a Pade core.
///
/// Throws DimensionError for non-square input and DomainError when the
/// 1-norm exceeds kExpNormBudget (the squaring phase would overflow).
Matrix mat_exp(const Matrix& a);

inline constexpr double kExpNormBudget = 700.0;

/// Principal logarithm. DomainError when an eigenvalue lies on (or within a
/// small angle of) the closed negative real axis.
Matrix mat_log(const Matrix& a);

/// Principal square root; DomainError if the spectrum touches the closed
/// negative real axis (the result would not be real or not principal).
Matrix mat_sqrt(const Matrix& a);

/// Inverse with a singularity check scaled by the tolerance.
Matrix inverse(const Matrix& a, const Tolerance& tol = {});

/// Largest singular value (operator 2-norm).
double op_norm(const Matrix& a);

/// Number of singular values above abs_eps + rel_eps * sigma_max.
int numerical_rank(const Matrix& a, const Tolerance& tol = {});

/// Orthonormal basis (as columns) of the numerical kernel of `a`.
/// Dimension equals cols - numerical_rank.
Matrix nullspace(const Matrix& a, const Tolerance& tol = {});

/// Orthonormal basis (as columns) of the numerical column space of `a`.
Matrix range(const Matrix& a, const Tolerance& tol = {});

/// Least-squares coordinates of `b` in the columns of `basis`, together with
/// the residual norm ||basis * x - b||.
struct Coordinates {
  Vector x;
  double residual = 0.0;
};
Coordinates solve_coordinates(const Matrix& basis, const Vector& b);

/// Commutator ab - ba.
inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// a^k for k >= 0 by repeated squaring.
Matrix mat_pow(const Matrix& a, long long k);

/// Column-major flattening of a matrix into a vector.
Vector flatten(const Matrix& a);

}  // namespace num
}  // namespace symkit
