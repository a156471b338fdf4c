#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symkit/symspace.hpp"

namespace symkit {

enum class Membership { no, yes, unknown };

const char* to_string(Membership m);

enum class SubspaceKind { whole, point, algebraic, fixed_point, generated, preimage };

const char* to_string(SubspaceKind k);

/// How far a point is from satisfying the defining condition of a subspace.
/// The vector vanishes exactly on members; `scale` sets the tolerance.
struct Defect {
  Vector value;
  double scale = 1.0;
};

/// std::nullopt means membership cannot be decided for this point.
using DefectFn = std::function<std::optional<Defect>(const SymPoint&)>;

/// Vectors w in the complement F (g_- coordinates) with 0 < |w| <= radius that
/// are known to satisfy Exp(w) in N. Supplied by models that can produce them.
using WitnessFn = std::function<std::vector<Vector>(const LinearSubspace& complement, double radius)>;

/// Vectors w in the complement F with Exp(w) in N approaching `target` (in F),
/// ordered by increasing accuracy. Empty when N is locally closed near target.
using ApproximantFn = std::function<std::vector<Vector>(const LinearSubspace& complement, const Vector& target)>;

/// A reflection subspace N of M, pointed at the base point.
struct ReflectionSubspace {
  PairPtr pair;
  SubspaceKind kind = SubspaceKind::whole;
  std::string label;
  DefectFn defect;
  std::optional<LinearSubspace> seed;          // generated kind
  std::optional<PairMorphism> automorphism;    // fixed-point kind
  WitnessFn witnesses;                         // may be empty
  ApproximantFn approximants;                  // may be empty

  Membership contains(const SymPoint& x, const Tolerance& tol = {}) const;
};

ReflectionSubspace whole_subspace(PairPtr p);
ReflectionSubspace point_subspace(PairPtr p);
/// Zero set of a matrix-valued function of the Cartan matrix.
ReflectionSubspace algebraic_subspace(PairPtr p, std::function<Matrix(const Matrix&)> constraint,
                                      std::string label);
/// Fixed points of an automorphism of the pair (source = target = p).
ReflectionSubspace fixed_point_subspace(PairPtr p, PairMorphism automorphism, std::string label);

/// A failed certification, with the offending direction and parameter.
class CertificationError : public VerificationError {
 public:
  CertificationError(const std::string& what, Vector v, double t)
      : VerificationError(what), v_(std::move(v)), t_(t) {}
  const Vector& direction() const { return v_; }
  double parameter() const { return t_; }

 private:
  Vector v_;
  double t_;
};

/// The parameter grid used to certify rays Exp(t v) in N.
inline constexpr double kCertificationGrid[] = {-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0};

/// n = {v : Exp(R v) in N}. The candidate comes from the linearized defect at
/// the base point (the +1 eigenspace of d(phi) for fixed-point sets, the seed
/// for generated subspaces); it is certified on the grid and by is_subsystem.
LinearSubspace lts_of_subspace(const ReflectionSubspace& n, const Tolerance& tol = {});

/// <Exp(seed)>. Membership halves a point towards the base point by principal
/// square roots of its Cartan matrix until the logarithm is available, then
/// tests the logarithm against the seed. Pairs with a period lattice use the
/// lattice instead. PreconditionError if the seed is not a subsystem.
ReflectionSubspace generate_integral(const LinearSubspace& seed, PairPtr p, const Tolerance& tol = {});

bool lts_roundtrip_check(const LinearSubspace& seed, PairPtr p, const Tolerance& tol = {});

struct ChartSplitReport {
  bool passed = false;
  double radius = 0.0;          // the accepted radius, or the floor on failure
  double max_violation = 0.0;   // distance from n of the worst offending sample
  std::vector<double> radii_tried;
  std::optional<Vector> witness;  // a sample where Exp(v) in N disagrees with v in n
  std::string witness_kind;       // "outside-n-member", "inside-n-nonmember", "undecided"
};

struct ChartSplitOptions {
  double initial_radius = 1.0;
  double floor = 1.0 / 1024.0;
  int samples = 24;
  std::uint64_t seed = 42;
};

/// Searches r = initial, initial/2, ... down to the floor for a ball V with
/// Exp(v) in N <=> v in n on all samples (random points of the ball inside
/// and outside n, plus any witnesses the subspace supplies).
ChartSplitReport exp_chart_split(const ReflectionSubspace& subspace, const LinearSubspace& n,
                                 const ChartSplitOptions& options = {}, const Tolerance& tol = {});

struct ComplementReport {
  bool passed = false;
  std::optional<Vector> witness;  // w in F, w != 0, Exp(w) in N
  int samples_checked = 0;
};

/// Falsification check of N cap Exp(W) = {b} for a ball W in F.
/// PreconditionError unless g_- = n + F (direct).
ComplementReport split_complement_criterion(const ReflectionSubspace& subspace, const LinearSubspace& n,
                                            const LinearSubspace& f, int samples, double radius = 0.5,
                                            std::uint64_t seed = 42, const Tolerance& tol = {});

/// f^-1(N2). Its extracted triple system is checked against A^-1(n2) before return.
ReflectionSubspace preimage_subspace(const PairMorphism& f, const ReflectionSubspace& target,
                                     const Tolerance& tol = {});

ReflectionSubspace kernel_subspace(const PairMorphism& f, const Tolerance& tol = {});

/// A_-^-1(n2) for the minus part of the algebra map.
LinearSubspace algebra_preimage(const PairMorphism& f, const LinearSubspace& n2, const Tolerance& tol = {});

}  // namespace symkit
