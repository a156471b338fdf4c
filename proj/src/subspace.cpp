#include "symkit/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace symkit {

const char* to_string(Membership m) {
  switch (m) {
    case Membership::no: return "no";
    case Membership::yes: return "yes";
    case Membership::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(SubspaceKind k) {
  switch (k) {
    case SubspaceKind::whole: return "whole";
    case SubspaceKind::point: return "point";
    case SubspaceKind::algebraic: return "algebraic";
    case SubspaceKind::fixed_point: return "fixed_point";
    case SubspaceKind::generated: return "generated";
    case SubspaceKind::preimage: return "preimage";
  }
  return "?";
}

Membership ReflectionSubspace::contains(const SymPoint& x, const Tolerance& tol) const {
  if (!same_pair(*x.pair, *pair)) throw PreconditionError("membership: point of another pair");
  const auto d = defect(x);
  if (!d) return Membership::unknown;
  return d->value.norm() <= tol.threshold(d->scale) ? Membership::yes : Membership::no;
}

namespace {

Defect matrix_defect(const Matrix& diff, const Matrix& cartan) {
  return Defect{num::flatten(diff), 1.0 + cartan.norm()};
}

}  // namespace

ReflectionSubspace whole_subspace(PairPtr p) {
  ReflectionSubspace s;
  s.pair = p;
  s.kind = SubspaceKind::whole;
  s.label = "whole";
  s.defect = [](const SymPoint&) { return std::optional<Defect>(Defect{Vector(0), 1.0}); };
  return s;
}

ReflectionSubspace point_subspace(PairPtr p) {
  ReflectionSubspace s;
  s.pair = p;
  s.kind = SubspaceKind::point;
  s.label = "base";
  s.defect = [](const SymPoint& x) {
    const Matrix id = Matrix::Identity(x.cartan.rows(), x.cartan.cols());
    return std::optional<Defect>(matrix_defect(x.cartan - id, x.cartan));
  };
  return s;
}

ReflectionSubspace algebraic_subspace(PairPtr p, std::function<Matrix(const Matrix&)> constraint,
                                      std::string label) {
  ReflectionSubspace s;
  s.pair = p;
  s.kind = SubspaceKind::algebraic;
  s.label = std::move(label);
  s.defect = [constraint = std::move(constraint)](const SymPoint& x) {
    return std::optional<Defect>(matrix_defect(constraint(x.cartan), x.cartan));
  };
  return s;
}

ReflectionSubspace fixed_point_subspace(PairPtr p, PairMorphism automorphism, std::string label) {
  if (!same_pair(*automorphism.source, *p) || !same_pair(*automorphism.target, *p)) {
    throw PreconditionError("fixed_point_subspace: automorphism must map the pair to itself");
  }
  ReflectionSubspace s;
  s.pair = p;
  s.kind = SubspaceKind::fixed_point;
  s.label = std::move(label);
  auto phi = automorphism.group_map;
  s.defect = [phi](const SymPoint& x) {
    // phi commutes with sigma, so phi(gK) = gK iff phi fixes the Cartan image.
    return std::optional<Defect>(matrix_defect(phi(x.cartan) - x.cartan, x.cartan));
  };
  s.automorphism = std::move(automorphism);
  return s;
}

namespace {

LinearSubspace linearized_kernel(const ReflectionSubspace& s) {
  const auto& p = s.pair;
  const int m = p->algebra().minus_dim();
  const double h = 1e-5;
  const auto at = [&](const Vector& v) {
    const auto d = s.defect(exp_point(p, v));
    if (!d) throw VerificationError("lts_of_subspace: membership undecided next to the base point");
    return d->value;
  };
  const Vector d0 = at(Vector::Zero(m));
  if (d0.size() == 0) return LinearSubspace::full(m);
  Matrix jac(d0.size(), m);
  for (int j = 0; j < m; ++j) {
    const Vector e = Vector::Unit(m, j);
    jac.col(j) = (at(h * e) - at(-h * e)) / (2.0 * h);
  }
  // Central differences are accurate to about 1e-10 here; rank decisions use a
  // cutoff far above that and far below the O(1) singular values of genuine
  // constraints.
  return LinearSubspace::span(num::nullspace(jac, Tolerance(1e-7, 1e-5)));
}

}  // namespace

LinearSubspace lts_of_subspace(const ReflectionSubspace& s, const Tolerance& tol) {
  const auto& p = s.pair;
  const int m = p->algebra().minus_dim();
  LinearSubspace candidate;
  switch (s.kind) {
    case SubspaceKind::whole:
      candidate = LinearSubspace::full(m);
      break;
    case SubspaceKind::point:
      candidate = LinearSubspace::zero(m);
      break;
    case SubspaceKind::generated:
      candidate = *s.seed;
      break;
    case SubspaceKind::fixed_point: {
      const Matrix dphi = s.automorphism->minus_map();
      candidate = LinearSubspace::span(num::nullspace(dphi - Matrix::Identity(m, m), tol));
      break;
    }
    case SubspaceKind::algebraic:
    case SubspaceKind::preimage:
      candidate = linearized_kernel(s);
      break;
  }

  for (int i = 0; i < candidate.dim(); ++i) {
    const Vector v = candidate.basis().col(i);
    for (double t : kCertificationGrid) {
      const Membership mem = s.contains(exp_point(p, t * v), tol);
      if (mem != Membership::yes) {
        throw CertificationError("lts_of_subspace: Exp(t v) is " + std::string(to_string(mem)) +
                                     " a member of '" + s.label + "' at t = " + std::to_string(t),
                                 v, t);
      }
    }
  }
  if (!is_subsystem(lts_of_pair(*p), candidate, tol)) {
    throw CertificationError("lts_of_subspace: candidate is not a triple subsystem",
                             candidate.dim() > 0 ? Vector(candidate.basis().col(0)) : Vector(0), 0.0);
  }
  return candidate;
}

namespace {

constexpr int kLatticeWindow = 8192;

// The lattice translate v - L m closest to the seed, for rank-two lattices
// with a one-dimensional seed complement: the distance along the unit normal
// nu is |nu.v - (nu^T L) m|, scanned over one coordinate and rounded in the other.
Vector closest_translate(const PeriodLattice& lat, const LinearSubspace& seed, const Vector& v,
                         int window) {
  const Matrix& gens = lat.generators;
  const LinearSubspace normal = seed.orthogonal_complement();
  if (normal.dim() == 0) return v;
  if (gens.cols() == 2 && normal.dim() == 1) {
    const Vector nu = normal.basis().col(0);
    const double target = nu.dot(v);
    const Eigen::RowVectorXd a = nu.transpose() * gens;
    const int scan = std::abs(a(1)) >= std::abs(a(0)) ? 0 : 1;
    const int solve = 1 - scan;
    double best = std::abs(target);
    Eigen::Vector2d best_m(0.0, 0.0);
    for (int k = -window; k <= window; ++k) {
      const double rest = target - a(scan) * k;
      const double j = std::round(rest / a(solve));
      const double dist = std::abs(rest - a(solve) * j);
      if (dist < best) {
        best = dist;
        best_m(scan) = k;
        best_m(solve) = j;
      }
    }
    return v - gens * best_m;
  }
  // Other shapes: nearest lattice images only.
  const Eigen::VectorXd c = gens.completeOrthogonalDecomposition().solve(v);
  Vector best_v = v;
  double best = seed.distance(v);
  const auto r = static_cast<int>(gens.cols());
  const int total = static_cast<int>(std::pow(3, r));
  for (int code = 0; code < total; ++code) {
    Eigen::VectorXd m(r);
    int rest = code;
    for (int i = 0; i < r; ++i) {
      m(i) = std::round(c(i)) + (rest % 3) - 1;
      rest /= 3;
    }
    const Vector cand = v - gens * m;
    const double dist = seed.distance(cand);
    if (dist < best) {
      best = dist;
      best_v = cand;
    }
  }
  return best_v;
}

std::optional<Vector> principal_half_log(const SymPoint& x) {
  const auto& p = *x.pair;
  Matrix c = x.cartan;
  const Matrix id = p.identity();
  int halvings = 0;
  try {
    while (num::op_norm(c - id) >= 0.5) {
      if (++halvings > 40) return std::nullopt;
      c = num::mat_sqrt(c);
    }
  } catch (const DomainError&) {
    return std::nullopt;
  }
  const Matrix half = std::ldexp(1.0, halvings - 1) * num::mat_log(c);
  const auto coords = p.decompose(half);
  if (coords.residual > 1e-8 * (1.0 + half.norm())) return std::nullopt;
  const Matrix& mb = p.algebra().minus().basis();
  const Vector v = mb.transpose() * coords.x;
  if ((mb * v - coords.x).norm() > 1e-8 * (1.0 + v.norm())) return std::nullopt;
  return v;
}

}  // namespace

ReflectionSubspace generate_integral(const LinearSubspace& seed, PairPtr p, const Tolerance& tol) {
  if (seed.ambient_dim() != p->algebra().minus_dim()) {
    throw DimensionError("generate_integral: seed lives in the wrong dimension");
  }
  if (!is_subsystem(lts_of_pair(*p), seed, tol)) {
    throw PreconditionError("generate_integral: seed is not a triple subsystem");
  }
  ReflectionSubspace s;
  s.pair = p;
  s.kind = SubspaceKind::generated;
  s.label = "generated";
  s.seed = seed;
  if (p->lattice()) {
    const PeriodLattice lat = *p->lattice();
    s.defect = [lat, seed](const SymPoint& x) {
      const Vector v = closest_translate(lat, seed, lat.unwrap(x.cartan), kLatticeWindow);
      return std::optional<Defect>(Defect{v - seed.project(v), 1.0 + lat.generators.norm()});
    };
    s.witnesses = [lat, seed](const LinearSubspace& f, double radius) {
      // F-components (along the seed) of lattice points; Exp of each lies in N
      // because the lattice is the kernel of Exp.
      std::vector<std::pair<double, Vector>> found;
      const int m = static_cast<int>(seed.ambient_dim());
      const LinearSubspace normal = seed.orthogonal_complement();
      if (f.dim() == 0 || lat.generators.cols() != 2 || normal.dim() != 1) return std::vector<Vector>{};
      Matrix split(m, seed.dim() + f.dim());
      split << seed.basis(), f.basis();
      const auto solver = split.fullPivLu();
      const Eigen::RowVectorXd a = normal.basis().col(0).transpose() * lat.generators;
      const int scan = std::abs(a(1)) >= std::abs(a(0)) ? 0 : 1;
      for (int k = -kLatticeWindow; k <= kLatticeWindow; ++k) {
        Eigen::Vector2d mk;
        mk(scan) = k;
        mk(1 - scan) = std::round(-a(scan) * k / a(1 - scan));
        const Vector coef = solver.solve(Vector(lat.generators * mk));
        const Vector w = f.basis() * coef.tail(f.dim());
        const double nw = w.norm();
        if (nw > 1e-12 && nw <= radius) found.emplace_back(std::abs(static_cast<double>(k)), w);
      }
      std::stable_sort(found.begin(), found.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<Vector> out;
      for (std::size_t i = 0; i < found.size() && out.size() < 8; ++i) out.push_back(found[i].second);
      return out;
    };
    s.approximants = [lat, seed](const LinearSubspace& f, const Vector& target) {
      // Normal components of lattice points m found with growing windows:
      // Exp(L m - (d.L m) d) = Exp(-(d.L m) d) lies on the line.
      std::vector<Vector> out;
      const LinearSubspace normal = seed.orthogonal_complement();
      if (f.dim() == 0 || lat.generators.cols() != 2 || normal.dim() != 1) return out;
      const Vector nu = normal.basis().col(0);
      for (int window = 2; window <= kLatticeWindow; window *= 2) {
        const Vector lm = target - closest_translate(lat, seed, target, window);
        const Vector w = nu * nu.dot(lm);
        if (!f.contains(w, Tolerance(1e-9, 1e-9))) break;
        out.push_back(w);
      }
      return out;
    };
  } else {
    s.defect = [seed](const SymPoint& x) -> std::optional<Defect> {
      const auto v = principal_half_log(x);
      if (!v) return std::nullopt;
      return Defect{*v - seed.project(*v), 1.0 + v->norm()};
    };
  }
  return s;
}

bool lts_roundtrip_check(const LinearSubspace& seed, PairPtr p, const Tolerance& tol) {
  const ReflectionSubspace n = generate_integral(seed, p, tol);
  const LinearSubspace back = lts_of_subspace(n, tol);
  return back.dim() == seed.dim() && back.contains(seed, tol) && seed.contains(back, tol);
}

ChartSplitReport exp_chart_split(const ReflectionSubspace& subspace, const LinearSubspace& n,
                                 const ChartSplitOptions& options, const Tolerance& tol) {
  const auto& p = subspace.pair;
  const int m = p->algebra().minus_dim();
  if (n.ambient_dim() != m) throw DimensionError("exp_chart_split: n lives in the wrong dimension");
  const LinearSubspace f = n.orthogonal_complement();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> frac(0.25, 0.5);

  ChartSplitReport rep;
  for (double r = options.initial_radius; r >= options.floor * (1.0 - 1e-12); r /= 2.0) {
    rep.radii_tried.push_back(r);
    rep.radius = r;
    double worst = 0.0;
    std::optional<Vector> witness;
    std::string kind;
    const auto offend = [&](const Vector& v, double size, const char* what) {
      if (!witness || size > worst) {
        worst = std::max(worst, size);
        witness = v;
        kind = what;
      }
    };
    for (int s = 0; s < options.samples; ++s) {
      const Vector v = n.basis() * sample::in_ball(rng, n.dim(), r);
      const Membership mem = subspace.contains(exp_point(p, v), tol);
      if (mem != Membership::yes) {
        offend(v, v.norm(), mem == Membership::unknown ? "undecided" : "inside-n-nonmember");
      }
    }
    if (f.dim() > 0) {
      for (int s = 0; s < options.samples; ++s) {
        const Vector fv = f.basis() * sample::on_sphere(rng, f.dim(), r * frac(rng));
        const Vector v = n.basis() * sample::in_ball(rng, n.dim(), r / 2.0) + fv;
        const Membership mem = subspace.contains(exp_point(p, v), tol);
        if (mem != Membership::no) {
          offend(v, fv.norm(), mem == Membership::unknown ? "undecided" : "outside-n-member");
        }
      }
      if (subspace.witnesses) {
        for (const Vector& w : subspace.witnesses(f, r)) {
          if (subspace.contains(exp_point(p, w), tol) == Membership::yes) offend(w, w.norm(), "outside-n-member");
        }
      }
    }
    if (!witness) {
      rep.passed = true;
      rep.witness.reset();
      rep.witness_kind.clear();
      rep.max_violation = 0.0;
      return rep;
    }
    rep.max_violation = worst;
    rep.witness = witness;
    rep.witness_kind = kind;
  }
  rep.passed = false;
  return rep;
}

ComplementReport split_complement_criterion(const ReflectionSubspace& subspace, const LinearSubspace& n,
                                            const LinearSubspace& f, int samples, double radius,
                                            std::uint64_t seed, const Tolerance& tol) {
  const auto& p = subspace.pair;
  const int m = p->algebra().minus_dim();
  if (n.ambient_dim() != m || f.ambient_dim() != m) {
    throw DimensionError("split_complement_criterion: subspaces live in the wrong dimension");
  }
  if (n.dim() + f.dim() != m || n.sum(f, tol).dim() != m) {
    throw PreconditionError("split_complement_criterion: F is not a complement of n");
  }
  ComplementReport rep;
  rep.passed = true;
  if (f.dim() == 0) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.05, 1.0);
  std::vector<Vector> probes;
  for (int s = 0; s < samples; ++s) probes.push_back(f.basis() * sample::on_sphere(rng, f.dim(), radius * frac(rng)));
  if (subspace.witnesses) {
    for (Vector& w : subspace.witnesses(f, radius)) probes.push_back(std::move(w));
  }
  for (const Vector& w : probes) {
    ++rep.samples_checked;
    if (subspace.contains(exp_point(p, w), tol) == Membership::yes) {
      rep.passed = false;
      rep.witness = w;
      return rep;
    }
  }
  return rep;
}

LinearSubspace algebra_preimage(const PairMorphism& f, const LinearSubspace& n2, const Tolerance& tol) {
  return LinearSubspace::preimage(f.minus_map(), n2, tol);
}

ReflectionSubspace preimage_subspace(const PairMorphism& f, const ReflectionSubspace& target,
                                     const Tolerance& tol) {
  if (!same_pair(*target.pair, *f.target)) {
    throw PreconditionError("preimage_subspace: subspace does not live in the target of f");
  }
  ReflectionSubspace s;
  s.pair = f.source;
  s.kind = SubspaceKind::preimage;
  s.label = "preimage(" + target.label + ")";
  const PointMap map = sym_morphism(f);
  auto inner = target.defect;
  s.defect = [map, inner](const SymPoint& x) { return inner(map(x)); };

  const LinearSubspace n1 = lts_of_subspace(s, tol);
  const LinearSubspace expected = algebra_preimage(f, lts_of_subspace(target, tol), tol);
  const Tolerance loose(1e-6, 1e-6);
  if (!n1.equals(expected, loose)) {
    throw VerificationError("preimage_subspace: extracted triple system (dim " + std::to_string(n1.dim()) +
                            ") differs from the algebraic preimage (dim " +
                            std::to_string(expected.dim()) + ")");
  }
  return s;
}

ReflectionSubspace kernel_subspace(const PairMorphism& f, const Tolerance& tol) {
  ReflectionSubspace k = preimage_subspace(f, point_subspace(f.target), tol);
  k.label = "kernel(" + f.label + ")";
  return k;
}

}  // namespace symkit
