#include "frechet/json_io.hpp"

namespace frechet {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw InvalidSpecError(message);
}

Json dense_tensor_to_json(const std::vector<Rational>& dense, int degree, int dim) {
    if (degree == 0)
        return Json(rational_to_string(dense.at(0)));
    std::size_t stride = 1;
    for (int i = 1; i < degree; ++i)
        stride *= static_cast<std::size_t>(dim);
    Json out = Json::array();
    for (int i = 0; i < dim; ++i) {
        std::vector<Rational> slice(dense.begin() + static_cast<std::ptrdiff_t>(stride) * i,
                                    dense.begin() + static_cast<std::ptrdiff_t>(stride) * (i + 1));
        out.push_back(dense_tensor_to_json(slice, degree - 1, dim));
    }
    return out;
}

void flatten_tensor_json(const Json& j, int degree, int dim, std::vector<Rational>& out) {
    if (degree == 0) {
        if (!j.is_string())
            fail("tensor entries must be rational strings");
        out.push_back(parse_rational(j.get<std::string>()));
        return;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        fail("tensor nesting does not match dim^degree");
    for (const auto& child : j)
        flatten_tensor_json(child, degree - 1, dim, out);
}

} // namespace

Json value_to_json(const Value& v) {
    if (const auto* q = std::get_if<Rational>(&v))
        return Json(rational_to_string(*q));
    if (const auto* d = std::get_if<double>(&v))
        return Json(*d);
    if (const auto* m = std::get_if<ModValue>(&v))
        return Json{{"mod", m->modulus}, {"value", m->value}};
    Json arr = Json::array();
    for (const auto& c : std::get<RatVec>(v))
        arr.push_back(rational_to_string(c));
    return arr;
}

Value value_from_json(const Json& j) {
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number())
        return j.get<double>();
    if (j.is_object()) {
        if (!j.contains("mod") || !j.contains("value"))
            fail("mod-p value needs {\"mod\", \"value\"}");
        const auto p = j.at("mod").get<std::int64_t>();
        auto v = j.at("value").get<std::int64_t>();
        if (p < 2)
            fail("mod-p value with modulus < 2");
        v = ((v % p) + p) % p;
        return ModValue{p, v};
    }
    if (j.is_array()) {
        RatVec vec;
        vec.reserve(j.size());
        for (const auto& c : j) {
            if (!c.is_string())
                fail("vector values must be arrays of rational strings");
            vec.push_back(parse_rational(c.get<std::string>()));
        }
        return vec;
    }
    fail("unrecognized value encoding: " + j.dump());
}

Json monomial_spec_to_json(const MonomialSpec& spec) {
    Json out;
    out["degree"] = spec.degree;
    if (spec.form == MonomialSpec::Form::Power) {
        out["form"] = "power";
        out["coefficient"] = value_to_json(spec.coefficient);
    } else {
        out["form"] = "tensor";
        out["dim"] = spec.tensor_dim;
        out["tensor"] = dense_tensor_to_json(spec.dense_tensor(), spec.degree, spec.tensor_dim);
    }
    return out;
}

MonomialSpec monomial_spec_from_json(const Json& j) {
    try {
        const int degree = j.at("degree").get<int>();
        const std::string form = j.value("form", "power");
        if (form == "power")
            return MonomialSpec::power(degree, value_from_json(j.at("coefficient")));
        if (form != "tensor")
            fail("monomial form must be \"power\" or \"tensor\"");
        const int dim = j.at("dim").get<int>();
        std::vector<Rational> dense;
        flatten_tensor_json(j.at("tensor"), degree, dim, dense);
        return MonomialSpec::tensor(degree, dim, dense);
    } catch (const Json::exception& e) {
        fail(std::string("malformed monomial: ") + e.what());
    }
}

Json monomial_sum_to_json(const MonomialSum& sum) {
    Json out;
    out["schema"] = "1";
    Json components = Json::array();
    for (const auto& c : sum.components())
        components.push_back(monomial_spec_to_json(c));
    out["components"] = std::move(components);
    return out;
}

MonomialSum monomial_sum_from_json(const Json& j) {
    try {
        const Json& components = j.is_array() ? j : j.at("components");
        std::vector<MonomialSpec> specs;
        for (const auto& c : components)
            specs.push_back(monomial_spec_from_json(c));
        return MonomialSum(std::move(specs));
    } catch (const Json::exception& e) {
        fail(std::string("malformed monomial sum: ") + e.what());
    }
}

Json table_to_json(const FunctionHandle::Table& table) {
    Json out = Json::array();
    for (const auto& [point, value] : table)
        out.push_back(Json::array({value_to_json(point), value_to_json(value)}));
    return out;
}

FunctionHandle::Table table_from_json(const Json& j) {
    if (!j.is_array())
        fail("a table is an array of [point, value] pairs");
    FunctionHandle::Table table;
    table.reserve(j.size());
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2)
            fail("each table entry is a [point, value] pair");
        table.emplace_back(value_from_json(entry.at(0)), value_from_json(entry.at(1)));
    }
    return table;
}

Json candidate_to_json(const CandidateSolution& candidate) {
    Json out;
    out["schema"] = "1";
    if (const auto* canonical = candidate.canonical()) {
        out["form"] = "canonical";
        out["pair"] = canonical->pair_name;
        if (canonical->m != 0)
            out["m"] = canonical->m;
        out["rho"] = monomial_sum_to_json(canonical->rho);
    } else {
        const auto& raw = *candidate.raw();
        out["form"] = "raw";
        out["space"] = raw.space == CandidateSolution::TableSpace::U ? "u" : "characteristic";
        out["table"] = table_to_json(raw.table);
    }
    if (!candidate.extension.empty()) {
        Json ext = Json::object();
        for (const auto& [k, value] : candidate.extension)
            ext[std::to_string(k)] = value_to_json(value);
        out["extension"] = std::move(ext);
    }
    return out;
}

CandidateSolution candidate_from_json(const Json& j) {
    try {
        CandidateSolution candidate;
        const std::string form = j.at("form").get<std::string>();
        if (form == "canonical") {
            CandidateSolution::Canonical canonical;
            canonical.pair_name = j.at("pair").get<std::string>();
            canonical.m = j.value("m", 0);
            canonical.rho = monomial_sum_from_json(j.at("rho"));
            candidate.body = std::move(canonical);
        } else if (form == "raw") {
            CandidateSolution::Raw raw;
            raw.table = table_from_json(j.at("table"));
            const std::string space = j.value("space", "u");
            if (space == "u")
                raw.space = CandidateSolution::TableSpace::U;
            else if (space == "characteristic")
                raw.space = CandidateSolution::TableSpace::Characteristic;
            else
                fail("table space must be \"u\" or \"characteristic\"");
            candidate.body = std::move(raw);
        } else {
            fail("candidate form must be \"canonical\" or \"raw\"");
        }
        if (j.contains("extension")) {
            for (const auto& [key, value] : j.at("extension").items())
                candidate.extension[std::stoi(key)] = value_from_json(value);
        }
        return candidate;
    } catch (const Json::exception& e) {
        fail(std::string("malformed candidate: ") + e.what());
    } catch (const std::invalid_argument&) {
        fail("extension keys must be integers (multiples of pi)");
    }
}

Json equation_to_json(const EquationDescriptor& descriptor) {
    Json out;
    out["equation"] = equation_name(descriptor.equation);
    out["n"] = equation_degree(descriptor.equation);
    if (const auto* rad = std::get_if<RadicalEquation>(&descriptor.equation))
        out["m"] = rad->m;
    out["mode"] = descriptor.mode == VerifyMode::ExactCharacteristic ? "exact" : "float";
    out["tol"] = descriptor.tol;
    return out;
}

EquationDescriptor equation_from_json(const Json& j) {
    try {
        EquationDescriptor descriptor;
        const std::string name = j.at("equation").get<std::string>();
        const int n = j.at("n").get<int>();
        if (name == "eq1" || name == "eq2") {
            const int m = j.at("m").get<int>();
            descriptor.equation = RadicalEquation::make(name == "eq1"
                                                            ? RadicalEquation::Variant::Monomial
                                                            : RadicalEquation::Variant::Polynomial,
                                                        n, m);
            descriptor.mode = VerifyMode::ExactCharacteristic;
        } else if (name == "eq3" || name == "eq4") {
            descriptor.equation = ArcsineEquation::make(name == "eq3"
                                                            ? ArcsineEquation::Variant::Monomial
                                                            : ArcsineEquation::Variant::Polynomial,
                                                        n);
            descriptor.mode = VerifyMode::DirectFloat;
        } else {
            fail("equation must be one of eq1..eq4");
        }
        if (j.contains("mode")) {
            const std::string mode = j.at("mode").get<std::string>();
            if (mode == "exact")
                descriptor.mode = VerifyMode::ExactCharacteristic;
            else if (mode == "float")
                descriptor.mode = VerifyMode::DirectFloat;
            else
                fail("mode must be \"exact\" or \"float\"");
        }
        descriptor.tol = j.value("tol", 1e-9);
        return descriptor;
    } catch (const Json::exception& e) {
        fail(std::string("malformed equation descriptor: ") + e.what());
    }
}

Json verify_report_to_json(const VerifyReport& report) {
    Json out;
    out["schema"] = "1";
    out["verdict"] = report.holds ? "holds" : "fails";
    out["max_residual"] = report.max_residual;
    out["checked_pairs"] = report.checked_pairs;
    out["skipped_pairs"] = report.skipped_pairs;
    if (report.witness) {
        out["witness"] = Json{{"first", value_to_json(report.witness->first)},
                              {"second", value_to_json(report.witness->second)},
                              {"lhs", value_to_json(report.witness->lhs)},
                              {"rhs", value_to_json(report.witness->rhs)}};
    } else {
        out["witness"] = nullptr;
    }
    out["residuals"] = report.residuals;
    return out;
}

Json triviality_report_to_json(const TrivialityReport& report) {
    Json out;
    out["schema"] = "1";
    out["applicable"] = report.applicable;
    out["verdict"] = report.flagged ? "flagged" : "pass";
    out["samples_checked"] = report.samples_checked;
    Json violations = Json::array();
    for (const auto& v : report.violations)
        violations.push_back(Json{{"at", value_to_json(v.at)},
                                  {"value", value_to_json(v.value)},
                                  {"forced", value_to_json(v.forced)}});
    out["violations"] = std::move(violations);
    return out;
}

Json fuzz_report_to_json(const FuzzReport& report) {
    Json out;
    out["schema"] = "1";
    Json config;
    config["family"] = report.config.family == FuzzConfig::Family::Radical ? "radical" : "arcsine";
    config["cases"] = report.config.cases;
    config["seed"] = report.config.seed;
    config["n"] = Json::array({report.config.n_lo, report.config.n_hi});
    if (report.config.family == FuzzConfig::Family::Radical)
        config["m"] = Json::array({report.config.m_lo, report.config.m_hi});
    else
        config["tol"] = report.config.tol;
    out["config"] = std::move(config);
    out["cases_run"] = report.cases_run;
    out["holds_count"] = report.holds_count;
    out["fails_count"] = report.fails_count;
    Json unexpected = Json::array();
    for (const auto& u : report.unexpected)
        unexpected.push_back(Json{{"case", u.case_index},
                                  {"phase", u.phase},
                                  {"equation", u.equation},
                                  {"n", u.n},
                                  {"m", u.m},
                                  {"detail", u.detail}});
    out["unexpected"] = std::move(unexpected);
    return out;
}

} // namespace frechet
