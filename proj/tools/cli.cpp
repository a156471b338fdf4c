#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "symkit/catalog.hpp"
#include "symkit/quotient.hpp"
#include "symkit/serialize.hpp"

namespace symkit::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model;
  std::string params;
  std::string out;
  std::string format = "json";
  bool format_given = false;
  double tol_abs = 1e-10;
  double tol_rel = 1e-9;
  std::uint64_t seed = 42;
  std::optional<int> k_min, k_max;
  std::string x, y, z;
  std::string ideal;
  std::string tensor;
  std::string subspace;
  int samples = 50;

  Tolerance tol() const { return Tolerance(tol_abs, tol_rel); }
};

// Sampled residual thresholds of the verify suite.
constexpr double kPairInvariantTol = 1e-9;
constexpr double kReflectionTol = 1e-8;
constexpr double kTangentTol = 1e-3;  // first-order identity, error O(eps^2)
constexpr double kChainTol = 1e-9;
constexpr double kFunctorialityTol = 1e-9;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

ModelDescriptor resolve_model(const Options& o) {
  if (o.model.empty()) throw UsageError("--model is required");
  std::string spec = o.model;
  if (!o.params.empty()) {
    if (spec.find('(') != std::string::npos) throw UsageError("--params cannot be combined with 'name(...)' in --model");
    spec += "(" + o.params + ")";
  }
  try {
    return build_model(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Vector parse_vector(const std::string& text, int dim, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  const auto parts = split(text, ',');
  if (static_cast<int>(parts.size()) != dim) {
    throw UsageError(std::string(flag) + ": expected " + std::to_string(dim) + " coordinates, got " +
                     std::to_string(parts.size()));
  }
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    std::size_t used = 0;
    try {
      v(i) = std::stod(parts[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != parts[i].size() || !std::isfinite(v(i))) {
      throw UsageError(std::string(flag) + ": cannot parse '" + parts[i] + "'");
    }
  }
  return v;
}

LinearSubspace parse_ideal(const Options& o, const ModelDescriptor& md) {
  const int m = md.pair->algebra().minus_dim();
  if (o.ideal.empty()) throw UsageError("--ideal is required");
  for (const auto& s : md.designated_subsystems)
    if (s.label == o.ideal) return s.seed;
  if (o.ideal == "zero") return LinearSubspace::zero(m);
  if (o.ideal == "full") return LinearSubspace::full(m);
  std::vector<Vector> rows;
  for (const auto& row : split(o.ideal, ';')) rows.push_back(parse_vector(row, m, "--ideal"));
  return LinearSubspace::span(m, rows);
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + o.out);
  file << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double threshold = 0.0;
};

Check residual_check(std::string name, double residual, double threshold) {
  return Check{std::move(name), residual <= threshold, residual, threshold};
}

std::vector<Check> axiom_checks(const LieTripleSystem& m, const Tolerance& tol) {
  const AxiomReport r = check_lts_axioms(m, tol);
  const double t = tol.threshold(m.scale() * m.scale());
  return {Check{"axiom1.antisymmetry", r.antisymmetry.passed, r.antisymmetry.max_residual, t},
          Check{"axiom2.cyclic", r.cyclic.passed, r.cyclic.max_residual, t},
          Check{"axiom3.derivation", r.derivation.passed, r.derivation.max_residual, t}};
}

std::vector<Check> model_checks(const ModelDescriptor& md, const Options& o) {
  const Tolerance tol = o.tol();
  const PairPtr& p = md.pair;
  const int m = p->algebra().minus_dim();
  std::mt19937_64 rng(o.seed);
  std::vector<Check> checks = axiom_checks(lts_of_pair(*p), tol);

  const auto alg = p->algebra().check(tol);
  checks.push_back(Check{"algebra.structure", alg.passed,
                         std::max({alg.antisymmetry, alg.jacobi, alg.involution, alg.automorphism}),
                         tol.threshold(p->algebra().scale())});

  const auto inv = check_pair_invariants(*p, rng, o.samples);
  checks.push_back(residual_check("pair.sigma_involution", inv.sigma_involution, kPairInvariantTol));
  checks.push_back(residual_check("pair.eigenspace_split", inv.eigenspace_split, kPairInvariantTol));
  checks.push_back(residual_check("pair.sigma_exp", inv.sigma_exp, kPairInvariantTol));

  const auto refl = check_reflection_axioms(p, rng, o.samples);
  checks.push_back(residual_check("reflection.involutive", refl.involutive, kReflectionTol));
  checks.push_back(residual_check("reflection.fixed_point", refl.fixed_point, kReflectionTol));
  checks.push_back(residual_check("reflection.automorphism", refl.automorphism, kReflectionTol));
  checks.push_back(residual_check("reflection.isolated", refl.isolated, kReflectionTol));
  checks.push_back(residual_check("reflection.tangent_product", refl.tangent_product, kTangentTol));

  double chain = 0.0;
  for (int s = 0; s < o.samples; ++s) {
    std::vector<Vector> xs, ys;
    for (int i = 0; i < 3; ++i) {
      xs.push_back(sample::in_ball(rng, m, 1.0));
      ys.push_back(sample::in_ball(rng, m, 1.0));
    }
    // Noncompact models reach Cartan matrices of norm ~e^6 here, so compare relatively.
    Matrix word = p->identity();
    for (int i = 2; i >= 0; --i) word = word * num::mat_exp(p->minus_element(xs[i])) * num::mat_exp(p->minus_element(ys[i]));
    const double scale = 1.0 + make_point(p, word).cartan.norm();
    chain = std::max(chain, chain_identity_check(p, xs, ys) / scale);
  }
  checks.push_back(residual_check("chain_identity", chain, kChainTol));

  for (const auto& f : md.designated_morphisms) {
    const auto r = check_pair_morphism(f, tol);
    checks.push_back(Check{"morphism." + f.label, r.passed,
                           std::max({r.bracket, r.involution, r.exp_compat, r.sigma_compat}), tol.threshold(1.0)});
    const PointMap map = sym_morphism(f);
    const Matrix a = f.minus_map();
    double worst = 0.0;
    for (int s = 0; s < o.samples; ++s) {
      const Vector v = sample::in_ball(rng, m, 1.0);
      const SymPoint lhs = map(exp_point(p, v));
      const SymPoint rhs = exp_point(f.target, Vector(a * v));
      worst = std::max(worst, cartan_distance(lhs, rhs) / (1.0 + lhs.cartan.norm()));
    }
    checks.push_back(residual_check("exp_functoriality." + f.label, worst, kFunctorialityTol));
  }

  for (const auto& s : md.designated_subsystems) {
    const bool ok = lts_roundtrip_check(s.seed, p, tol);
    checks.push_back(Check{"roundtrip." + s.label, ok, ok ? 0.0 : 1.0, 0.0});
  }
  for (const auto& s : md.designated_subspaces) {
    bool ok = true;
    try {
      ok = is_subsystem(lts_of_pair(*p), lts_of_subspace(s, tol), tol);
    } catch (const VerificationError&) {
      ok = false;
    }
    checks.push_back(Check{"subspace_lts." + s.label, ok, ok ? 0.0 : 1.0, 0.0});
  }
  return checks;
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<Check> checks;
  Json head{{"command", "verify"}};
  if (!o.tensor.empty()) {
    std::ifstream file(o.tensor);
    if (!file) throw UsageError("cannot read tensor file " + o.tensor);
    LieTripleSystem m;
    try {
      m = lts_from_json(Json::parse(file));
    } catch (const Json::exception& e) {
      throw UsageError(std::string("tensor file: ") + e.what());
    } catch (const Error& e) {
      throw UsageError(std::string("tensor file: ") + e.what());
    }
    head["source"] = "tensor";
    head["dim"] = m.dim();
    checks = axiom_checks(m, o.tol());
  } else {
    const ModelDescriptor md = resolve_model(o);
    head["model"] = md.spec;
    head["samples"] = o.samples;
    checks = model_checks(md, o);
  }
  bool all = true;
  for (const auto& c : checks) all = all && c.passed;

  if (o.format == "text") {
    std::ostringstream os;
    for (const auto& c : checks)
      os << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << number(c.residual) << "\n";
    os << (all ? "PASS" : "FAIL") << " verify\n";
    emit(o, os.str(), out);
  } else if (o.format == "csv") {
    std::ostringstream os;
    os << "check,passed,residual,threshold\n";
    for (const auto& c : checks)
      os << c.name << "," << (c.passed ? 1 : 0) << "," << number(c.residual) << "," << number(c.threshold) << "\n";
    emit(o, os.str(), out);
  } else {
    Json j = head;
    j["seed"] = o.seed;
    j["tolerance"] = to_json(o.tol());
    Json arr = Json::array();
    for (const auto& c : checks)
      arr.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}, {"threshold", c.threshold}});
    j["checks"] = std::move(arr);
    j["passed"] = all;
    emit(o, dump(j), out);
  }
  return all ? kPass : kCheckFailure;
}

int cmd_trotter(const Options& o, std::ostream& out) {
  const ModelDescriptor md = resolve_model(o);
  const int m = md.pair->algebra().minus_dim();
  const Vector x = parse_vector(o.x, m, "--x");
  const Vector y = parse_vector(o.y, m, "--y");
  const bool bracket = !o.z.empty();
  std::vector<ConvergenceRow> rows;
  if (bracket) {
    const Vector z = parse_vector(o.z, m, "--z");
    std::vector<std::pair<long long, long long>> kls;
    for (long long k : dyadic_range(o.k_min.value_or(3), o.k_max.value_or(5))) kls.emplace_back(k, k);
    rows = trotter_bracket_table(md.pair, x, y, z, kls);
  } else {
    rows = trotter_sum_table(md.pair, x, y, dyadic_range(o.k_min.value_or(4), o.k_max.value_or(12)));
  }

  const std::string format = o.format_given ? o.format : "csv";
  std::ostringstream os;
  if (format == "json") {
    Json j{{"command", "trotter"}, {"model", md.spec}, {"formula", bracket ? "bracket" : "sum"}, {"x", to_json(x)},
           {"y", to_json(y)}};
    if (bracket) j["z"] = to_json(parse_vector(o.z, m, "--z"));
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    j["rows"] = std::move(arr);
    os << dump(j);
  } else {
    const char sep = format == "csv" ? ',' : ' ';
    os << (bracket ? std::string("k") + sep + "l" + sep + "error" : std::string("k") + sep + "error") << "\n";
    for (const auto& r : rows) {
      os << r.k << sep;
      if (bracket) os << r.l << sep;
      os << number(r.error) << "\n";
    }
  }
  emit(o, os.str(), out);
  return kPass;
}

Json exact_density_witness(const DenseLineOracle& oracle) {
  // Bound (1/4096)^2 in lattice units; the lattice is pi Z^2 and pi < 4, so a
  // witness lies within 1/1024 of the base point in g_- coordinates.
  const Rational bound(1, 4096 * 4096);
  const auto m = oracle.density_witness(bound, 1 << 16);
  if (!m) return Json(nullptr);
  const auto w = oracle.normal_component((*m)[0], (*m)[1]);
  const Surd n2 = oracle.norm2(w);
  const auto surd = [&](const Surd& s) {
    return s.a.str() + " + (" + s.b.str() + ") sqrt(" + std::to_string(oracle.radicand()) + ")";
  };
  return Json{{"lattice_point", {(*m)[0].str(), (*m)[1].str()}},
              {"normal_component", {surd(w[0]), surd(w[1])}},
              {"norm2", surd(n2)},
              {"bound", bound.str()},
              {"in_generated_subspace", oracle.contains(w)},
              {"below_bound", sign(sub(Surd(bound, Rational(0)), n2), oracle.radicand()) > 0}};
}

int cmd_quotient(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelDescriptor md = resolve_model(o);
  const LinearSubspace n = parse_ideal(o, md);
  const Tolerance tol = o.tol();
  QuotientOptions qo;
  qo.chart.seed = o.seed;

  Json j{{"command", "quotient"}, {"model", md.spec}, {"seed", o.seed}, {"ideal_basis", to_json(n.basis())}};
  try {
    const QuotientResult qr = quotient_theorem_pipeline(md.pair, n, qo, tol);
    const QuotientReport rep = quotient_report(qr, 100, o.seed, tol);
    const WeakSubmersionReport ws = weak_submersion_report(qr, 100, o.seed, tol);
    const bool ok = rep.passed() && ws.passed();
    j["verdict"] = "quotient";
    j["gate"] = to_json(qr.gate);
    const Json rj = to_json(rep);
    for (const auto& [k, v] : rj.items()) j[k] = v;
    j["weak_submersion"] = to_json(ws);
    j["quotient_pair"] = to_json(*qr.quotient_pair);
    j["projection_algebra"] = to_json(qr.projection_algebra);
    j["passed"] = ok;
    if (o.format == "text") {
      std::ostringstream os;
      os << (ok ? "PASS" : "FAIL") << " quotient of " << md.spec << ": dim l = " << qr.l_algebra.dim()
         << ", quotient g_- dim = " << qr.quotient_pair->algebra().minus_dim()
         << ", tensor residual = " << number(rep.tensor_residual) << "\n";
      emit(o, os.str(), out);
    } else {
      emit(o, dump(j), out);
    }
    return ok ? kPass : kCheckFailure;
  } catch (const GateRejection& e) {
    j["verdict"] = "rejected";
    j["explanation"] = e.what();
    j["gate"] = to_json(e.report());
    if (md.dense_line) j["density_witness"] = exact_density_witness(*md.dense_line);
    j["passed"] = false;
    err << "quotient rejected: " << e.what() << "\n";
    if (e.report().chart.witness) {
      err << "  witness w = " << to_json(*e.report().chart.witness).dump() << " (" << e.report().chart.witness_kind
          << ")\n";
    }
    emit(o, o.format == "text" ? std::string("REJECTED ") + e.what() + "\n" : dump(j), out);
    return kGateRejected;
  } catch (const FaithfulnessError& e) {
    j["verdict"] = "unfaithful";
    j["explanation"] = e.what();
    j["passed"] = false;
    err << e.what() << "\n";
    emit(o, dump(j), out);
    return kCheckFailure;
  }
}

int cmd_subspace(const Options& o, std::ostream& out) {
  const ModelDescriptor md = resolve_model(o);
  const Tolerance tol = o.tol();
  ChartSplitOptions co;
  co.seed = o.seed;
  bool all = true;
  bool found = o.subspace.empty();
  Json subs = Json::array();
  for (const auto& s : md.designated_subspaces) {
    if (!o.subspace.empty() && s.label != o.subspace) continue;
    found = true;
    Json e = to_json(s);
    try {
      const LinearSubspace n = lts_of_subspace(s, tol);
      e["certified"] = true;
      e["lts_basis"] = to_json(n.basis());
      const auto chart = exp_chart_split(s, n, co, tol);
      const auto comp = split_complement_criterion(s, n, n.orthogonal_complement(), o.samples, 0.5, o.seed, tol);
      e["chart"] = to_json(chart);
      e["complement"] = to_json(comp);
      e["symmetric"] = chart.passed && comp.passed;
    } catch (const CertificationError& ex) {
      all = false;
      e["certified"] = false;
      e["error"] = ex.what();
      e["failing_direction"] = to_json(ex.direction());
      e["failing_parameter"] = ex.parameter();
    }
    subs.push_back(std::move(e));
  }
  if (!found) throw UsageError("model " + md.spec + " has no designated subspace '" + o.subspace + "'");
  Json trips = Json::array();
  if (o.subspace.empty()) {
    for (const auto& s : md.designated_subsystems) {
      const bool ok = lts_roundtrip_check(s.seed, md.pair, tol);
      all = all && ok;
      trips.push_back(Json{{"label", s.label}, {"seed_basis", to_json(s.seed.basis())}, {"passed", ok}});
    }
  }
  Json j{{"command", "subspace"}, {"model", md.spec}, {"seed", o.seed}, {"subspaces", std::move(subs)},
         {"roundtrips", std::move(trips)}, {"passed", all}};
  if (o.format == "text") {
    std::ostringstream os;
    for (const auto& e : j["subspaces"]) {
      os << e["label"].get<std::string>() << ": certified=" << e["certified"].dump();
      if (e.contains("symmetric")) os << " symmetric=" << e["symmetric"].dump();
      os << "\n";
    }
    os << (all ? "PASS" : "FAIL") << " subspace\n";
    emit(o, os.str(), out);
  } else {
    emit(o, dump(j), out);
  }
  return all ? kPass : kCheckFailure;
}

Json model_summary(const ModelDescriptor& md) {
  Json labels = Json::array(), seeds = Json::array(), maps = Json::array();
  for (const auto& s : md.designated_subspaces) labels.push_back(s.label);
  for (const auto& s : md.designated_subsystems) seeds.push_back(s.label);
  for (const auto& f : md.designated_morphisms) maps.push_back(f.label);
  Json meta = Json::object();
  for (const auto& [k, v] : md.metadata) meta[k] = v;
  return Json{{"name", md.name},
              {"spec", md.spec},
              {"ambient_n", md.pair->ambient_n()},
              {"dim", md.pair->dim()},
              {"minus_dim", md.pair->algebra().minus_dim()},
              {"subspaces", labels},
              {"subsystems", seeds},
              {"morphisms", maps},
              {"metadata", meta}};
}

int cmd_models(const Options& o, std::ostream& out) {
  Json arr = Json::array();
  if (!o.model.empty()) {
    const ModelDescriptor md = resolve_model(o);
    Json j = model_summary(md);
    j["pair"] = to_json(*md.pair);
    arr.push_back(std::move(j));
  } else {
    for (const auto& spec : default_model_specs()) arr.push_back(model_summary(build_model(spec)));
  }
  if (o.format == "text") {
    std::ostringstream os;
    for (const auto& m : arr)
      os << m["spec"].get<std::string>() << "  dim g = " << m["dim"].dump() << ", dim g_- = " << m["minus_dim"].dump()
         << "\n";
    emit(o, os.str(), out);
  } else {
    emit(o, dump(Json{{"command", "models"}, {"names", model_names()}, {"models", arr}}), out);
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lie triple systems and symmetric spaces on matrix groups", "symkit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "catalog model, e.g. sphere(2) or product(sphere(2),sphere(2))");
    sub->add_option("--params", o.params, "comma-separated model parameters (with a bare --model name)");
    sub->add_option("--out", o.out, "write the report to this file instead of stdout");
    sub->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--tol-abs", o.tol_abs, "absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-rel", o.tol_rel, "relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "random seed for sampled checks")->capture_default_str();
    sub->add_option("--samples", o.samples, "samples per sampled check")->check(CLI::PositiveNumber);
  };

  CLI::App* verify = app.add_subcommand("verify", "axiom and functoriality suites for a model");
  add_common(verify);
  verify->add_option("--tensor", o.tensor, "JSON file {dim, tensor} to check instead of a model");

  CLI::App* trotter = app.add_subcommand("trotter", "Trotter convergence table (CSV by default)");
  add_common(trotter);
  trotter->add_option("--x", o.x, "g_- coordinates, comma-separated");
  trotter->add_option("--y", o.y, "g_- coordinates, comma-separated");
  trotter->add_option("--z", o.z, "with z: bracket formula, rows (k, l = k)");
  trotter->add_option_function<int>("--k-min", [&](int v) { o.k_min = v; }, "smallest k = 2^k-min");
  trotter->add_option_function<int>("--k-max", [&](int v) { o.k_max = v; }, "largest k = 2^k-max");

  CLI::App* quotient = app.add_subcommand("quotient", "run the quotient pipeline for an ideal");
  add_common(quotient);
  quotient->add_option("--ideal", o.ideal,
                       "designated subsystem label, zero, full, or basis rows 'a,b;c,d' in g_- coordinates");

  CLI::App* subspace = app.add_subcommand("subspace", "extract and test the designated subspaces of a model");
  add_common(subspace);
  subspace->add_option("--subspace", o.subspace, "only this designated subspace");

  CLI::App* models = app.add_subcommand("models", "list the catalog");
  add_common(models);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  for (auto* sub : {verify, trotter, quotient, subspace, models})
    if (sub->parsed()) o.format_given = sub->count("--format") > 0;

  try {
    if (verify->parsed()) return cmd_verify(o, out);
    if (trotter->parsed()) return cmd_trotter(o, out);
    if (quotient->parsed()) return cmd_quotient(o, out, err);
    if (subspace->parsed()) return cmd_subspace(o, out);
    return cmd_models(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
}

}  // namespace symkit::cli
