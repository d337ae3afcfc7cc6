#pragma once

#include <json.hpp>

#include "frechet/harness.hpp"

namespace frechet {

using Json = nlohmann::ordered_json;

// Exact rationals travel as strings "p" / "p/q", vectors as arrays of such
// strings, mod-p values as {"mod": p, "value": v}, floats as JSON numbers.
Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

Json monomial_spec_to_json(const MonomialSpec& spec);
MonomialSpec monomial_spec_from_json(const Json& j);

Json monomial_sum_to_json(const MonomialSum& sum);
MonomialSum monomial_sum_from_json(const Json& j);

Json table_to_json(const FunctionHandle::Table& table);
FunctionHandle::Table table_from_json(const Json& j);

Json candidate_to_json(const CandidateSolution& candidate);
CandidateSolution candidate_from_json(const Json& j);

struct EquationDescriptor {
    Equation equation = RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 2);
    VerifyMode mode = VerifyMode::ExactCharacteristic;
    double tol = 1e-9;
};

Json equation_to_json(const EquationDescriptor& descriptor);
EquationDescriptor equation_from_json(const Json& j);

Json verify_report_to_json(const VerifyReport& report);
Json triviality_report_to_json(const TrivialityReport& report);
Json fuzz_report_to_json(const FuzzReport& report);

} // namespace frechet
