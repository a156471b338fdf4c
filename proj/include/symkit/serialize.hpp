#pragma once

#include "json.hpp"
#include "symkit/catalog.hpp"
#include "symkit/quotient.hpp"

namespace symkit {

// Insertion-ordered so that reports are byte-stable.
using Json = nlohmann::ordered_json;

Json to_json(const Matrix& m);  // array of rows
Json to_json(const Vector& v);
Json to_json(const Tolerance& tol);
Json to_json(const LieTripleSystem& m);
Json to_json(const MatrixSymmetricPair& p);
Json to_json(const ReflectionSubspace& s);
Json to_json(const ChartSplitReport& r);
Json to_json(const ComplementReport& r);
Json to_json(const GateReport& r);
Json to_json(const WeakSubmersionReport& r);
Json to_json(const QuotientReport& r);
Json to_json(const ConvergenceRow& row);
Json to_json(const AxiomReport& r);

/// {"dim": d, "tensor": [d^4 numbers]}; DimensionError on a malformed document.
LieTripleSystem lts_from_json(const Json& j);

}  // namespace symkit
