#include "symkit/catalog.hpp"

#include <cmath>
#include <numbers>

namespace symkit {

namespace {

Matrix unit_skew(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  m(j, i) = -1.0;
  return m;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

int parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ModelError(std::string(what) + ": expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw ModelError(std::string(what) + ": expected an integer, got '" + s + "'");
  return v;
}

std::string join_spec(const std::string& name, const std::vector<std::string>& params) {
  std::string s = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) s += (i ? "," : "") + params[i];
  return s + ")";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

void require_params(const std::string& name, const std::vector<std::string>& params, std::size_t n) {
  if (params.size() != n) {
    throw ModelError(name + " takes " + std::to_string(n) + " parameter(s), got " +
                     std::to_string(params.size()));
  }
}

PairMorphism identity_morphism(const PairPtr& p) {
  auto id = [](const Matrix& g) { return g; };
  return block_morphism(p, p, id, id, "identity");
}

PairMorphism trivial_morphism(const PairPtr& p) {
  const PairPtr pt = point_pair();
  return block_morphism(
      p, pt, [](const Matrix&) { return Matrix(Matrix::Identity(1, 1)); },
      [](const Matrix&) { return Matrix(Matrix::Zero(1, 1)); }, "trivial");
}

}  // namespace

PairPtr sphere_pair(int n) {
  if (n < 1) throw ModelError("sphere(n) needs n >= 1");
  const int dim = n + 1;
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) basis.push_back(unit_skew(dim, i, j));
  for (int i = 0; i < n; ++i) basis.push_back(unit_skew(dim, i, n));
  Matrix theta = Matrix::Identity(dim, dim);
  theta(n, n) = -1.0;
  return std::make_shared<const MatrixSymmetricPair>(dim, std::move(basis), SigmaRule::conjugation(theta),
                                                     "sphere(" + std::to_string(n) + ")");
}

PairPtr spd_pair(int n) {
  if (n < 1) throw ModelError("spd(n) needs n >= 1");
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) basis.push_back(unit_skew(n, i, j));
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = e(j, i) = 1.0;
      basis.push_back(e);
    }
  return std::make_shared<const MatrixSymmetricPair>(n, std::move(basis), SigmaRule::transpose_inverse(),
                                                     "spd(" + std::to_string(n) + ")");
}

PairPtr grassmann_pair(int k, int n) {
  if (k < 1 || k >= n) throw ModelError("grassmann(k,n) needs 1 <= k < n");
  std::vector<Matrix> plus, minus;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) ((i < k) == (j < k) ? plus : minus).push_back(unit_skew(n, i, j));
  plus.insert(plus.end(), minus.begin(), minus.end());
  Matrix theta = Matrix::Identity(n, n);
  for (int i = k; i < n; ++i) theta(i, i) = -1.0;
  return std::make_shared<const MatrixSymmetricPair>(
      n, std::move(plus), SigmaRule::conjugation(theta),
      "grassmann(" + std::to_string(k) + "," + std::to_string(n) + ")");
}

PairPtr torus_pair(const std::string& label) {
  const Matrix j2 = unit_skew(2, 1, 0);  // [[0,-1],[1,0]]
  const Matrix z2 = Matrix::Zero(2, 2);
  std::vector<Matrix> basis{block_diag(j2, z2), block_diag(z2, j2)};
  const Matrix theta = Eigen::Vector4d(1.0, -1.0, 1.0, -1.0).asDiagonal();
  PeriodLattice lattice;
  lattice.generators = std::numbers::pi * Matrix::Identity(2, 2);
  lattice.unwrap = [](const Matrix& c) {
    // Cartan blocks are rotations by 2 v_i.
    Vector v(2);
    v(0) = 0.5 * std::atan2(c(1, 0), c(0, 0));
    v(1) = 0.5 * std::atan2(c(3, 2), c(2, 2));
    return v;
  };
  return std::make_shared<const MatrixSymmetricPair>(4, std::move(basis), SigmaRule::conjugation(theta),
                                                     label, Tolerance{}, std::move(lattice));
}

PairPtr product_pair(const PairPtr& a, const PairPtr& b) {
  const auto& ra = a->sigma_rule();
  const auto& rb = b->sigma_rule();
  if (ra.kind != rb.kind) {
    throw ModelError("product: factors must use the same kind of involution (" +
                     std::string(to_string(ra.kind)) + " vs " + to_string(rb.kind) + ")");
  }
  const int na = a->ambient_n(), nb = b->ambient_n();
  const Matrix za = Matrix::Zero(na, na), zb = Matrix::Zero(nb, nb);
  std::vector<Matrix> basis;
  auto push_part = [&](const PairPtr& p, const LinearSubspace& part, bool first) {
    for (int i = 0; i < part.dim(); ++i) {
      const Matrix x = p->element(part.basis().col(i));
      basis.push_back(first ? block_diag(x, zb) : block_diag(za, x));
    }
  };
  push_part(a, a->algebra().plus(), true);
  push_part(b, b->algebra().plus(), false);
  push_part(a, a->algebra().minus(), true);
  push_part(b, b->algebra().minus(), false);
  SigmaRule rule{ra.kind, ra.kind == SigmaKind::transpose_inverse ? Matrix(0, 0) : block_diag(ra.theta, rb.theta)};
  return std::make_shared<const MatrixSymmetricPair>(na + nb, std::move(basis), std::move(rule),
                                                     "product(" + a->label() + "," + b->label() + ")");
}

std::pair<std::string, std::vector<std::string>> parse_model_spec(const std::string& raw) {
  const std::string spec = trim(raw);
  const auto open = spec.find('(');
  if (open == std::string::npos) return {spec, {}};
  if (spec.back() != ')') throw ModelError("model spec '" + spec + "' is missing ')'");
  const std::string name = trim(spec.substr(0, open));
  const std::string inner = spec.substr(open + 1, spec.size() - open - 2);
  std::vector<std::string> args;
  int depth = 0;
  std::string cur;
  for (char ch : inner) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth < 0) throw ModelError("model spec '" + spec + "' has unbalanced parentheses");
    if (ch == ',' && depth == 0) {
      args.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (depth != 0) throw ModelError("model spec '" + spec + "' has unbalanced parentheses");
  if (!trim(cur).empty() || !args.empty()) args.push_back(trim(cur));
  return {name, args};
}

std::vector<std::string> model_names() { return {"sphere", "spd", "grassmann", "torus_abelian", "product"}; }

std::vector<std::string> default_model_specs() {
  return {"sphere(2)", "spd(2)", "grassmann(1,3)", "torus_abelian(0,1,2)", "product(sphere(2),sphere(2))"};
}

ModelDescriptor build_model(const std::string& spec) {
  auto [name, params] = parse_model_spec(spec);
  return build_model(name, params);
}

ModelDescriptor build_model(const std::string& name, const std::vector<std::string>& params_in) {
  ModelDescriptor md;
  md.name = name;
  md.params = params_in;
  md.metadata["K"] = "full fixed-point group of sigma";

  if (name == "sphere") {
    require_params(name, params_in, 1);
    const int n = parse_int(params_in[0], "sphere(n)");
    md.pair = sphere_pair(n);
    const int m = md.pair->algebra().minus_dim();
    md.metadata["closed"] = "compact; every subspace listed here is closed";
    md.metadata["realization"] = "with K the full fixed group, antipodal points are identified (real projective space)";
    md.designated_subsystems = {{"zero", LinearSubspace::zero(m)},
                                {"full", LinearSubspace::full(m)},
                                {"geodesic", LinearSubspace::coordinate(m, std::vector<int>{0})}};
    md.designated_morphisms = {identity_morphism(md.pair), trivial_morphism(md.pair)};
    if (n >= 2) {
      // Reflection in the second coordinate fixes a totally geodesic equator.
      Matrix d = Matrix::Identity(n + 1, n + 1);
      d(1, 1) = -1.0;
      auto conj = [d](const Matrix& g) { return Matrix(d * g * d); };
      md.designated_subspaces.push_back(
          fixed_point_subspace(md.pair, block_morphism(md.pair, md.pair, conj, conj, "reflection"), "equator"));
      const PairPtr prod = product_pair(md.pair, md.pair);
      auto diag = [](const Matrix& g) { return block_diag(g, g); };
      md.designated_morphisms.push_back(block_morphism(md.pair, prod, diag, diag, "diagonal"));
    }
  } else if (name == "spd") {
    require_params(name, params_in, 1);
    const int n = parse_int(params_in[0], "spd(n)");
    md.pair = spd_pair(n);
    const int m = md.pair->algebra().minus_dim();
    md.metadata["closed"] = "Exp is a global diffeomorphism; generated subspaces are closed";
    std::vector<int> diag_axes;
    for (int i = 0; i < n; ++i) diag_axes.push_back(i);
    const LinearSubspace diagonal = LinearSubspace::coordinate(m, diag_axes);
    md.designated_subsystems = {{"zero", LinearSubspace::zero(m)},
                                {"full", LinearSubspace::full(m)},
                                {"diagonal", diagonal}};
    ReflectionSubspace diag_sub = generate_integral(diagonal, md.pair);
    diag_sub.label = "diagonal";
    md.designated_subspaces.push_back(std::move(diag_sub));
    md.designated_morphisms = {identity_morphism(md.pair), trivial_morphism(md.pair)};
  } else if (name == "grassmann") {
    require_params(name, params_in, 2);
    const int k = parse_int(params_in[0], "grassmann(k,n)");
    const int n = parse_int(params_in[1], "grassmann(k,n)");
    md.pair = grassmann_pair(k, n);
    const int m = md.pair->algebra().minus_dim();
    md.metadata["closed"] = "compact; unoriented subspaces since K is the full fixed group";
    md.designated_subsystems = {{"zero", LinearSubspace::zero(m)},
                                {"full", LinearSubspace::full(m)},
                                {"geodesic", LinearSubspace::coordinate(m, std::vector<int>{0})}};
    md.designated_morphisms = {identity_morphism(md.pair), trivial_morphism(md.pair)};
  } else if (name == "torus_abelian") {
    std::vector<std::string> p = params_in;
    if (p.empty()) p = {"0", "1", "2"};
    require_params(name, p, 3);
    md.params = p;
    const Rational a = parse_rational(p[0]);
    const Rational b = parse_rational(p[1]);
    const int d = parse_int(p[2], "torus_abelian(a,b,d)");
    md.dense_line.emplace(a, b, d);
    md.pair = torus_pair(join_spec(name, p));
    const double alpha = md.dense_line->slope_value();
    const LinearSubspace line = LinearSubspace::span(Matrix(Eigen::Vector2d(1.0, alpha)));
    md.metadata["closed"] = md.dense_line->irrational()
                                ? "the line of slope a + b sqrt(d) is dense: not closed"
                                : "rational slope: the line closes up";
    md.metadata["lattice"] = "pi Z^2 in g_- coordinates";
    md.designated_subsystems = {{"zero", LinearSubspace::zero(2)},
                                {"full", LinearSubspace::full(2)},
                                {"dense_line", line}};
    ReflectionSubspace dense = generate_integral(line, md.pair);
    dense.label = "dense_line";
    md.designated_subspaces.push_back(std::move(dense));
    md.designated_morphisms = {identity_morphism(md.pair)};
  } else if (name == "product") {
    require_params(name, params_in, 2);
    const ModelDescriptor a = build_model(params_in[0]);
    const ModelDescriptor b = build_model(params_in[1]);
    md.pair = product_pair(a.pair, b.pair);
    const int ma = a.pair->algebra().minus_dim();
    const int mb = b.pair->algebra().minus_dim();
    std::vector<int> first, second;
    for (int i = 0; i < ma; ++i) first.push_back(i);
    for (int i = 0; i < mb; ++i) second.push_back(ma + i);
    md.metadata["closed"] = "factor subspaces are closed";
    md.designated_subsystems = {{"first_factor", LinearSubspace::coordinate(ma + mb, first)},
                                {"second_factor", LinearSubspace::coordinate(ma + mb, second)}};
    const int na = a.pair->ambient_n(), nb = b.pair->ambient_n();
    md.designated_subspaces.push_back(algebraic_subspace(
        md.pair,
        [na, nb](const Matrix& c) {
          return Matrix(c.bottomRightCorner(nb, nb) - Matrix::Identity(nb, nb));
        },
        "first_factor"));
    auto proj = [na](const Matrix& g) { return Matrix(g.topLeftCorner(na, na)); };
    md.designated_morphisms = {identity_morphism(md.pair),
                               block_morphism(md.pair, a.pair, proj, proj, "projection")};
  } else {
    throw ModelError("unknown model '" + name + "' (known: sphere, spd, grassmann, torus_abelian, product)");
  }
  md.spec = md.pair->label();
  return md;
}

}  // namespace symkit
