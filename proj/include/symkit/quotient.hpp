#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symkit/subspace.hpp"

namespace symkit {

/// x ~ y iff x.rep^-1 y.rep lies in L K, for the ideal l = [g_-, n] + n.
/// Decided through the class of the base point N = <Exp(n)> = L.b, so it is
/// chart-local and may answer unknown.
struct CongruenceRelation {
  PairPtr pair;
  LinearSubspace n;          // g_- coordinates
  LinearSubspace l_algebra;  // algebra coordinates
  ReflectionSubspace klass;

  Membership relates(const SymPoint& x, const SymPoint& y, const Tolerance& tol = {}) const;
};

/// PreconditionError unless n is an ideal of Lts(p).
CongruenceRelation congruence_from_ideal(PairPtr p, const LinearSubspace& n, const Tolerance& tol = {});

/// is_ideal(Lts(M), lts_of_subspace(N)).
bool normal_lts_is_ideal(const ReflectionSubspace& n, const Tolerance& tol = {});

/// Sampled pass rates of the congruence axioms. Implications whose premise or
/// conclusion is undecided are counted in `undecided` and left out of the rates.
struct CongruenceReport {
  double reflexive = 0.0;
  double symmetric = 0.0;
  double transitive = 0.0;
  double reflection = 0.0;  // x1~y1, x2~y2 => mu(x1,x2) ~ mu(y1,y2)
  double inner = 0.0;       // x~y => mu_z(x) ~ mu_z(y)
  int samples = 0;
  int undecided = 0;

  bool passed() const {
    return reflexive == 1.0 && symmetric == 1.0 && transitive == 1.0 && reflection == 1.0 && inner == 1.0;
  }
};

CongruenceReport check_congruence(const CongruenceRelation& r, int samples, std::uint64_t seed = 42,
                                  const Tolerance& tol = {});

/// Sequential closedness of R: related sequences are built by shrinking
/// perturbations inside n, and, where the class supplies approximants, by
/// points of N approaching an offset in the complement. A limit that leaves R
/// fails the check.
struct ClosureReport {
  bool passed = true;
  int sequences = 0;
  double final_gap = 0.0;       // distance of the last sequence element to its limit
  std::optional<Vector> limit;  // escaping offset in g_- coordinates
};

ClosureReport relation_closure_check(const CongruenceRelation& r, int samples, std::uint64_t seed = 42,
                                     double radius = 0.5, const Tolerance& tol = {});

/// Outcome of the go/no-go test that N = <Exp(n)> is a symmetric subspace.
struct GateReport {
  ChartSplitReport chart;
  ComplementReport complement;
  bool passed = false;
};

/// The chart-split gate failed: no quotient exists as a weak submersion.
class GateRejection : public Error {
 public:
  GateRejection(const std::string& what, GateReport report) : Error(what), report_(std::move(report)) {}
  const GateReport& report() const { return report_; }

 private:
  GateReport report_;
};

/// ker(ad_{g/l}) is larger than l: the adjoint realization is not faithful.
class FaithfulnessError : public VerificationError {
 public:
  FaithfulnessError(const std::string& what, int kernel_dim, int l_dim)
      : VerificationError(what), kernel_dim_(kernel_dim), l_dim_(l_dim) {}
  int kernel_dim() const { return kernel_dim_; }
  int l_dim() const { return l_dim_; }

 private:
  int kernel_dim_;
  int l_dim_;
};

struct QuotientOptions {
  ChartSplitOptions chart;
  int complement_samples = 64;
  double complement_radius = 0.5;
};

struct QuotientResult {
  PairPtr source;
  LinearSubspace n;
  LinearSubspace l_algebra;   // ker(psi) + n
  Matrix quotient_basis;      // algebra coordinates; theta-adapted complement of l, plus part first
  Matrix quotient_projection; // g -> g/l coordinates, kills l
  PairPtr quotient_pair;      // basis = ad_{g/l}(quotient_basis columns)
  Matrix projection_algebra;  // g_- -> (g/l)_-
  PointMap projection_points;
  double faithfulness_residual = 0.0;  // max |ad_{g/l}(x)| over the l basis
  GateReport gate;

  /// ad_{g/l}(x) for x in algebra coordinates.
  Matrix quotient_ad(const Vector& x) const;
  /// Ad_{g/l}(g) for g in the source group.
  Matrix quotient_Ad(const Matrix& g) const;
};

/// PreconditionError if n is not an ideal; GateRejection if the chart-split
/// gate fails; FaithfulnessError if ker(ad_{g/l}) != l.
QuotientResult quotient_theorem_pipeline(PairPtr p, const LinearSubspace& n, const QuotientOptions& options = {},
                                         const Tolerance& tol = {});

struct WeakSubmersionReport {
  bool full_row_rank = false;
  bool kernel_is_n = false;
  double morphism_pass_rate = 0.0;  // pi(mu(x,y)) = mu(pi x, pi y)
  double max_morphism_residual = 0.0;
  int samples = 0;

  bool passed() const { return full_row_rank && kernel_is_n && morphism_pass_rate == 1.0; }
};

WeakSubmersionReport weak_submersion_report(const QuotientResult& qr, int samples = 100, std::uint64_t seed = 42,
                                            const Tolerance& tol = {});
bool weak_submersion_check(const QuotientResult& qr, int samples = 100, std::uint64_t seed = 42,
                           const Tolerance& tol = {});

struct RankChecks {
  int g_dim = 0;
  int l_dim = 0;
  int l_prime_dim = 0;          // [g_-, n] + n
  bool l_contains_l_prime = false;
  int projection_rank = 0;
  int quotient_minus_dim = 0;
  bool kernel_is_n = false;
  int faithful_kernel_dim = 0;  // dim ker(ad_{g/l})
};

struct PassRates {
  double exp_functoriality = 0.0;  // pi(Exp v) = Exp(A v)
  double kernel_relation = 0.0;    // x ~ y <=> pi x = pi y
  double morphism = 0.0;           // pi(mu(x,y)) = mu(pi x, pi y)
  int samples = 0;
  int undecided = 0;
};

/// Everything the command-line report serializes.
struct QuotientReport {
  Matrix l_basis;
  double faithfulness_residual = 0.0;
  LieTripleSystem quotient_lts_pair;   // Lts of the quotient pair
  LieTripleSystem quotient_lts_formal; // quotient_lts(m, n)
  Matrix alignment;                    // formal coordinates -> quotient pair g_- coordinates
  double tensor_residual = 0.0;
  RankChecks ranks;
  PassRates rates;

  bool passed(double tensor_tol = 1e-8) const;
};

QuotientReport quotient_report(const QuotientResult& qr, int samples = 100, std::uint64_t seed = 42,
                               const Tolerance& tol = {});

}  // namespace symkit
