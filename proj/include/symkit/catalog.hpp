#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symkit/dense_line.hpp"
#include "symkit/subspace.hpp"

namespace symkit {

/// Unknown model name or parameters out of range.
class ModelError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct NamedSeed {
  std::string label;
  LinearSubspace seed;  // in g_- coordinates
};

struct ModelDescriptor {
  std::string name;
  std::vector<std::string> params;
  std::string spec;  // canonical "name(p1,p2)" form
  PairPtr pair;
  std::vector<ReflectionSubspace> designated_subspaces;
  std::vector<NamedSeed> designated_subsystems;
  std::vector<PairMorphism> designated_morphisms;
  std::map<std::string, std::string> metadata;
  std::optional<DenseLineOracle> dense_line;  // torus_abelian only
};

/// sphere(n), spd(n), grassmann(k,n), torus_abelian(a,b,d), product(A,B).
ModelDescriptor build_model(const std::string& name, const std::vector<std::string>& params);
/// Parses a spec such as "grassmann(1,3)" or "product(sphere(2),sphere(2))".
ModelDescriptor build_model(const std::string& spec);

/// Splits "name(a,b(c,d))" into name and top-level arguments.
std::pair<std::string, std::vector<std::string>> parse_model_spec(const std::string& spec);

std::vector<std::string> model_names();
/// One representative spec per catalog family.
std::vector<std::string> default_model_specs();

/// SO(n+1) with sigma = conjugation by diag(1,...,1,-1).
PairPtr sphere_pair(int n);
/// GL(n)^+ with sigma(g) = g^-T; g_- is Sym(n), basis E_ii then E_ij + E_ji.
PairPtr spd_pair(int n);
/// SO(n) with sigma = conjugation by diag(I_k, -I_{n-k}).
PairPtr grassmann_pair(int k, int n);
/// Two commuting rotation generators in R^4, sigma inverting both; carries the
/// period lattice pi Z^2 of exp on g_-.
PairPtr torus_pair(const std::string& label = "torus_abelian");
/// Block-diagonal product; both factors must use the same sigma kind.
PairPtr product_pair(const PairPtr& a, const PairPtr& b);

}  // namespace symkit
