#include "symkit/numkernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace symkit {

Tolerance::Tolerance(double abs, double rel) : abs_eps(abs), rel_eps(rel) {
  if (!(abs > 0.0) || !(rel > 0.0)) {
    throw PreconditionError("tolerance components must be strictly positive");
  }
}

namespace num {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

Matrix mat_exp(const Matrix& a) {
  require_square(a, "mat_exp");
  require_finite(a, "mat_exp");
  if (a.size() == 0) return a;
  if (a.lpNorm<1>() > kExpNormBudget) {
    // ||A||_1 bounds every column sum; beyond this the squarings overflow.
    throw DomainError("mat_exp: norm exceeds scaling budget");
  }
  Matrix result = a.exp();
  require_finite(result, "mat_exp");
  return result;
}

Matrix mat_log(const Matrix& a) {
  require_square(a, "mat_log");
  require_finite(a, "mat_log");
  if (a.size() == 0) return a;
  // The principal branch needs the spectrum off the closed negative real
  // axis; a thin margin around it keeps the result well conditioned.
  const Eigen::VectorXcd eig = a.eigenvalues();
  const double scale = std::max(1.0, eig.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (std::abs(eig[i]) <= 1e-12 * scale || std::abs(std::arg(eig[i])) > std::numbers::pi - 1e-6) {
      throw DomainError("mat_log: eigenvalue on or near the closed negative real axis");
    }
  }
  Matrix result = a.log();
  require_finite(result, "mat_log");
  if ((mat_exp(result) - a).norm() > 1e-8 * (1.0 + a.norm())) {
    throw DomainError("mat_log: principal logarithm not representable");
  }
  return result;
}

Matrix mat_sqrt(const Matrix& a) {
  require_square(a, "mat_sqrt");
  require_finite(a, "mat_sqrt");
  if (a.size() == 0) return a;
  const Eigen::VectorXcd eig = a.eigenvalues();
  const double scale = std::max(1.0, eig.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig[i].real() <= 1e-12 * scale && std::abs(eig[i].imag()) <= 1e-12 * scale) {
      throw DomainError("mat_sqrt: eigenvalue on the closed negative real axis");
    }
  }
  Matrix result = a.sqrt();
  if (!result.allFinite() || (result * result - a).norm() > 1e-8 * (1.0 + a.norm())) {
    throw DomainError("mat_sqrt: principal root not representable");
  }
  return result;
}

Matrix inverse(const Matrix& a, const Tolerance& tol) {
  require_square(a, "inverse");
  require_finite(a, "inverse");
  if (a.size() == 0) return a;
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(tol.rel_eps);
  if (!lu.isInvertible()) throw DomainError("inverse: matrix is numerically singular");
  return lu.inverse();
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

namespace {

struct SvdRank {
  Eigen::JacobiSVD<Matrix> svd;
  int rank = 0;
};

SvdRank rank_revealing(const Matrix& a, const Tolerance& tol, unsigned options) {
  SvdRank out{Eigen::JacobiSVD<Matrix>(a, options), 0};
  const Vector& s = out.svd.singularValues();
  if (s.size() == 0) return out;
  const double cutoff = tol.threshold(s(0));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++out.rank;
  }
  return out;
}

}  // namespace

int numerical_rank(const Matrix& a, const Tolerance& tol) {
  if (a.size() == 0) return 0;
  return rank_revealing(a, tol, 0).rank;
}

Matrix nullspace(const Matrix& a, const Tolerance& tol) {
  const auto n = a.cols();
  if (n == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(n, n);
  const auto sr = rank_revealing(a, tol, Eigen::ComputeFullV);
  return sr.svd.matrixV().rightCols(n - sr.rank);
}

Matrix range(const Matrix& a, const Tolerance& tol) {
  const auto m = a.rows();
  if (a.size() == 0) return Matrix(m, 0);
  const auto sr = rank_revealing(a, tol, Eigen::ComputeFullU);
  return sr.svd.matrixU().leftCols(sr.rank);
}

Coordinates solve_coordinates(const Matrix& basis, const Vector& b) {
  if (basis.rows() != b.size()) {
    throw DimensionError("solve_coordinates: basis rows do not match vector length");
  }
  Coordinates out;
  if (basis.cols() == 0) {
    out.x = Vector(0);
    out.residual = b.norm();
    return out;
  }
  out.x = basis.completeOrthogonalDecomposition().solve(b);
  out.residual = (basis * out.x - b).norm();
  return out;
}

Matrix mat_pow(const Matrix& a, long long k) {
  require_square(a, "mat_pow");
  if (k < 0) throw PreconditionError("mat_pow: negative exponent");
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Vector flatten(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

}  // namespace num
}  // namespace symkit
