#include "symkit/serialize.hpp"

namespace symkit {

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Tolerance& tol) { return Json{{"abs", tol.abs_eps}, {"rel", tol.rel_eps}}; }

Json to_json(const LieTripleSystem& m) {
  return Json{{"label", m.label()}, {"dim", m.dim()}, {"tensor", m.tensor()}};
}

Json to_json(const MatrixSymmetricPair& p) {
  Json basis = Json::array();
  for (const auto& b : p.basis()) basis.push_back(to_json(b));
  Json sigma{{"kind", to_string(p.sigma_rule().kind)}};
  if (p.sigma_rule().kind != SigmaKind::transpose_inverse) sigma["theta"] = to_json(p.sigma_rule().theta);
  Json j{{"label", p.label()},
         {"ambient_n", p.ambient_n()},
         {"dim", p.dim()},
         {"minus_dim", p.algebra().minus_dim()},
         {"sigma", std::move(sigma)},
         {"basis", std::move(basis)}};
  if (p.lattice()) j["lattice"] = to_json(p.lattice()->generators);
  return j;
}

Json to_json(const ReflectionSubspace& s) {
  Json j{{"kind", to_string(s.kind)}, {"label", s.label}};
  switch (s.kind) {
    case SubspaceKind::generated:
      j["seed_basis"] = to_json(s.seed->basis());
      break;
    case SubspaceKind::fixed_point:
      j["automorphism"] = Json{{"label", s.automorphism->label}, {"minus_map", to_json(s.automorphism->minus_map())}};
      break;
    case SubspaceKind::algebraic:
    case SubspaceKind::preimage:
      j["constraints"] = "zero set of a matrix function of the Cartan matrix";
      break;
    default:
      break;
  }
  return j;
}

Json to_json(const ChartSplitReport& r) {
  Json j{{"passed", r.passed},
         {"radius", r.radius},
         {"max_violation", r.max_violation},
         {"radii_tried", r.radii_tried}};
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  j["witness_kind"] = r.witness_kind;
  return j;
}

Json to_json(const ComplementReport& r) {
  return Json{{"passed", r.passed},
              {"samples_checked", r.samples_checked},
              {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)}};
}

Json to_json(const GateReport& r) {
  return Json{{"passed", r.passed}, {"chart", to_json(r.chart)}, {"complement", to_json(r.complement)}};
}

Json to_json(const WeakSubmersionReport& r) {
  return Json{{"passed", r.passed()},
              {"full_row_rank", r.full_row_rank},
              {"kernel_is_n", r.kernel_is_n},
              {"morphism_pass_rate", r.morphism_pass_rate},
              {"max_morphism_residual", r.max_morphism_residual},
              {"samples", r.samples}};
}

Json to_json(const QuotientReport& r) {
  return Json{{"l_basis", to_json(r.l_basis)},
              {"faithfulness_residual", r.faithfulness_residual},
              {"quotient_tensor", to_json(r.quotient_lts_pair)},
              {"formal_quotient_tensor", to_json(r.quotient_lts_formal)},
              {"alignment", to_json(r.alignment)},
              {"tensor_residual", r.tensor_residual},
              {"rank_checks",
               Json{{"g_dim", r.ranks.g_dim},
                    {"l_dim", r.ranks.l_dim},
                    {"l_prime_dim", r.ranks.l_prime_dim},
                    {"l_contains_l_prime", r.ranks.l_contains_l_prime},
                    {"projection_rank", r.ranks.projection_rank},
                    {"quotient_minus_dim", r.ranks.quotient_minus_dim},
                    {"kernel_is_n", r.ranks.kernel_is_n},
                    {"faithful_kernel_dim", r.ranks.faithful_kernel_dim}}},
              {"sample_pass_rates",
               Json{{"exp_functoriality", r.rates.exp_functoriality},
                    {"kernel_relation", r.rates.kernel_relation},
                    {"morphism", r.rates.morphism},
                    {"samples", r.rates.samples},
                    {"undecided", r.rates.undecided}}},
              {"passed", r.passed()}};
}

Json to_json(const ConvergenceRow& row) {
  Json j{{"k", row.k}};
  if (row.l != 0) j["l"] = row.l;
  j["error"] = row.error;
  return j;
}

Json to_json(const AxiomReport& r) {
  const auto one = [](const AxiomCheck& c) { return Json{{"passed", c.passed}, {"max_residual", c.max_residual}}; };
  return Json{{"passed", r.passed()},
              {"antisymmetry", one(r.antisymmetry)},
              {"cyclic", one(r.cyclic)},
              {"derivation", one(r.derivation)}};
}

LieTripleSystem lts_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("tensor")) {
    throw DimensionError("tensor document needs \"dim\" and \"tensor\"");
  }
  if (!j["dim"].is_number_integer() || !j["tensor"].is_array()) {
    throw DimensionError("tensor document: \"dim\" must be an integer and \"tensor\" an array");
  }
  const int d = j["dim"].get<int>();
  if (d < 0) throw DimensionError("tensor document: negative dimension");
  std::vector<double> t;
  for (const auto& x : j["tensor"]) {
    if (!x.is_number()) throw DimensionError("tensor document: non-numeric entry");
    t.push_back(x.get<double>());
  }
  const auto expected = static_cast<std::size_t>(d) * d * d * d;
  if (t.size() != expected) {
    throw DimensionError("tensor document: expected " + std::to_string(expected) + " entries, got " +
                         std::to_string(t.size()));
  }
  return LieTripleSystem(d, std::move(t), j.value("label", std::string("file")));
}

}  // namespace symkit
