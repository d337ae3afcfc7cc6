#include "frechet/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "frechet/json_io.hpp"

namespace frechet {

namespace {

using Clock = std::chrono::steady_clock;

struct Failure {
    std::string message;
};

void expect(bool condition, const std::string& message, std::vector<std::string>& failures) {
    if (!condition)
        failures.push_back(message);
}

std::string format_residual(double r) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << r;
    return out.str();
}

MonomialSum random_rational_sum(Rng& rng, int max_degree, bool force_top) {
    std::vector<MonomialSpec> components;
    for (int j = 0; j <= max_degree; ++j) {
        Rational c = (force_top && j == max_degree) ? rng.next_nonzero_rational(20, 20)
                                                    : rng.next_rational(20, 20);
        if (c != 0)
            components.push_back(MonomialSpec::power(j, c));
    }
    return MonomialSum(std::move(components));
}

MonomialSpec random_tensor_spec(Rng& rng, int degree, int dim) {
    // assign each sorted multi-index a value, then fill the dense tensor symmetrically
    std::map<std::vector<int>, Rational> sorted_values;
    std::size_t size = 1;
    for (int i = 0; i < degree; ++i)
        size *= static_cast<std::size_t>(dim);
    std::vector<Rational> dense(size);
    std::vector<int> idx(static_cast<std::size_t>(degree), 0);
    std::size_t flat = 0;
    for (;;) {
        std::vector<int> key = idx;
        std::sort(key.begin(), key.end());
        auto it = sorted_values.find(key);
        if (it == sorted_values.end())
            it = sorted_values.emplace(key, rng.next_rational(10, 10)).first;
        dense[flat++] = it->second;
        bool carried = false;
        for (auto rit = idx.rbegin(); rit != idx.rend(); ++rit) {
            if (++*rit < dim) {
                carried = true;
                break;
            }
            *rit = 0;
        }
        if (!carried)
            break;
    }
    return MonomialSpec::tensor(degree, dim, dense);
}

Grid random_vector_grid(Rng& rng, int dim, int count) {
    Grid grid;
    for (int k = 0; k < count; ++k) {
        RatVec x(static_cast<std::size_t>(dim)), y(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            x[static_cast<std::size_t>(i)] = rng.next_rational(10, 10);
            y[static_cast<std::size_t>(i)] = rng.next_rational(10, 10);
        }
        grid.emplace_back(SemigroupPoint(x), SemigroupPoint(y));
    }
    return grid;
}

Grid random_mod_grid(Rng& rng, std::int64_t p, int count) {
    Grid grid;
    for (int k = 0; k < count; ++k) {
        const auto a = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(p)));
        auto b = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(p)));
        if (b == 0)
            b = 1;
        grid.emplace_back(SemigroupPoint(ModValue{p, a}), SemigroupPoint(ModValue{p, b}));
    }
    return grid;
}

// --- criterion bodies -------------------------------------------------------

std::vector<std::string> criterion_monomial_identity() {
    std::vector<std::string> failures;
    Rng rng(1001);
    const auto scalar_domain = SemigroupInstance::real_line();
    const auto rationals = AbelianGroup::exact_rational();
    for (int round = 0; round < 200 && failures.size() < 3; ++round) {
        const bool tensor_case = rng.next_below(3) == 0;
        if (!tensor_case) {
            const int j = static_cast<int>(rng.next_int(0, 4));
            const auto spec = MonomialSpec::power(j, rng.next_nonzero_rational(20, 20));
            const auto handle = make_monomial(scalar_domain, rationals, spec);
            GridSpec gspec;
            gspec.kind = GridSpec::Kind::RationalBox;
            gspec.count = 50;
            gspec.seed = rng.next();
            const auto check = check_monomial(handle, j, sample_grid(gspec));
            expect(check.holds && check.max_residual == 0.0 && check.pairs_checked == 50,
                   "power monomial of degree " + std::to_string(j) + " failed at round " +
                       std::to_string(round),
                   failures);
        } else {
            const int j = static_cast<int>(rng.next_int(1, 4));
            const int dim = static_cast<int>(rng.next_int(2, 3));
            const auto spec = random_tensor_spec(rng, j, dim);
            const auto handle =
                make_monomial(SemigroupInstance::rational_vector(dim), rationals, spec);
            const auto check = check_monomial(handle, j, random_vector_grid(rng, dim, 50));
            expect(check.holds && check.max_residual == 0.0 && check.pairs_checked == 50,
                   "tensor monomial of degree " + std::to_string(j) + " failed at round " +
                       std::to_string(round),
                   failures);
        }
    }
    return failures;
}

std::vector<std::string> criterion_polynomial_annihilation() {
    std::vector<std::string> failures;
    Rng rng(2002);
    const auto domain = SemigroupInstance::real_line();
    const auto rationals = AbelianGroup::exact_rational();
    for (int round = 0; round < 200 && failures.size() < 3; ++round) {
        const int n = static_cast<int>(rng.next_int(0, 4));
        const MonomialSum sum = random_rational_sum(rng, n, true);
        const auto handle = make_polynomial(domain, rationals, sum);
        GridSpec gspec;
        gspec.kind = GridSpec::Kind::RationalBox;
        gspec.count = 20;
        gspec.seed = rng.next();
        gspec.nonzero = true;
        const Grid grid = sample_grid(gspec);
        const auto annihilated = check_polynomial(handle, n, grid);
        expect(annihilated.holds && annihilated.max_residual == 0.0,
               "degree-" + std::to_string(n) + " sum not annihilated at round " +
                   std::to_string(round),
               failures);
        if (n >= 1) {
            const auto lower = check_polynomial(handle, n - 1, grid);
            expect(!lower.holds && lower.witness.has_value(),
                   "nonzero top component survived degree " + std::to_string(n - 1) +
                       " at round " + std::to_string(round),
                   failures);
        }
    }
    return failures;
}

std::vector<std::string> criterion_decomposition_roundtrip() {
    std::vector<std::string> failures;
    Rng rng(3003);
    const auto scalar_domain = SemigroupInstance::real_line();
    const auto rationals = AbelianGroup::exact_rational();

    for (int round = 0; round < 100 && failures.size() < 3; ++round) {
        const int n = static_cast<int>(rng.next_int(0, 4));
        const MonomialSum sum = random_rational_sum(rng, n, false);
        const auto handle = make_polynomial(scalar_domain, rationals, sum);
        GridSpec gspec;
        gspec.kind = GridSpec::Kind::RationalBox;
        gspec.count = 10;
        gspec.seed = rng.next();
        gspec.nonzero = true;
        const Grid grid = sample_grid(gspec);
        const MonomialSum recovered = decompose(handle, n, grid);
        for (int j = 0; j <= n; ++j) {
            const auto* original = sum.component_of_degree(j);
            const auto* extracted = recovered.component_of_degree(j);
            for (const auto& [x, y] : grid) {
                for (const auto& point : {x, y}) {
                    const GroupValue a = original
                                             ? original->evaluate(scalar_domain, rationals, point)
                                             : rationals.zero();
                    const GroupValue b = extracted
                                             ? extracted->evaluate(scalar_domain, rationals, point)
                                             : rationals.zero();
                    expect(rationals.equal(a, b),
                           "rational component " + std::to_string(j) + " differs at round " +
                               std::to_string(round),
                           failures);
                }
            }
        }
    }

    const std::int64_t p = 101;
    const auto mod_domain = SemigroupInstance::mod_p(p);
    const auto mod_group = AbelianGroup::mod_p(p);
    for (int round = 0; round < 100 && failures.size() < 3; ++round) {
        const int n = static_cast<int>(rng.next_int(0, 4));
        std::vector<MonomialSpec> specs;
        for (int j = 0; j <= n; ++j) {
            const auto c = static_cast<std::int64_t>(rng.next_below(p));
            if (c != 0)
                specs.push_back(MonomialSpec::power(j, ModValue{p, c}));
        }
        const MonomialSum sum{std::move(specs)};
        const auto handle = make_polynomial(mod_domain, mod_group, sum);
        const Grid grid = random_mod_grid(rng, p, 10);
        const MonomialSum recovered = decompose(handle, n, grid);
        for (int j = 0; j <= n; ++j) {
            const auto* original = sum.component_of_degree(j);
            const auto* extracted = recovered.component_of_degree(j);
            for (const auto& [x, y] : grid) {
                const GroupValue a =
                    original ? original->evaluate(mod_domain, mod_group, x) : mod_group.zero();
                const GroupValue b =
                    extracted ? extracted->evaluate(mod_domain, mod_group, x) : mod_group.zero();
                expect(mod_group.equal(a, b),
                       "mod-101 component " + std::to_string(j) + " differs at round " +
                           std::to_string(round),
                       failures);
            }
        }
    }
    return failures;
}

std::vector<std::string> criterion_radical_theorems() {
    std::vector<std::string> failures;
    Rng rng(4004);
    for (int n = 1; n <= 3; ++n)
        for (int m = 2; m <= 4; ++m)
            for (int round = 0; round < 50 && failures.size() < 3; ++round) {
                const bool monomial = rng.next_below(2) == 0;
                const auto eq_struct = RadicalEquation::make(
                    monomial ? RadicalEquation::Variant::Monomial
                             : RadicalEquation::Variant::Polynomial,
                    n, m);
                const Equation eq = eq_struct;
                MonomialSum coeffs =
                    monomial ? MonomialSum({MonomialSpec::power(n, rng.next_nonzero_rational(20, 20))})
                             : random_rational_sum(rng, n, false);
                const CandidateSolution candidate = solve(eq, coeffs);
                const std::string tag = eq_struct.name() + " n=" + std::to_string(n) +
                                        " m=" + std::to_string(m) + " round " +
                                        std::to_string(round);

                GridSpec xspec;
                xspec.kind = GridSpec::Kind::CharacteristicBox;
                xspec.count = 12;
                xspec.seed = rng.next();
                xspec.sign = m % 2 == 0 ? GridSpec::Sign::Nonneg : GridSpec::Sign::Any;
                const auto exact =
                    verify(eq, candidate, sample_grid(xspec), VerifyMode::ExactCharacteristic);
                expect(exact.holds && exact.max_residual == 0.0,
                       "exact verification failed for " + tag, failures);

                // recover o solve == identity on the coefficients
                FunctionHandle::Table table;
                const auto domain = eq_struct.characteristic_domain();
                const auto group = AbelianGroup::exact_rational();
                for (int k = 0; k <= n + 2; ++k) {
                    const Rational u(k, 2);
                    const Rational x = rational_pow(u, m);
                    table.emplace_back(SemigroupPoint(u),
                                       coeffs.evaluate(domain, group, SemigroupPoint(x)));
                }
                const MonomialSum recovered = recover(eq, table);
                for (int j = 0; j <= n; ++j) {
                    const auto* original = coeffs.component_of_degree(j);
                    const auto* extracted = recovered.component_of_degree(j);
                    const Rational a = original ? std::get<Rational>(original->coefficient) : 0;
                    const Rational b = extracted ? std::get<Rational>(extracted->coefficient) : 0;
                    expect(a == b, "recovered coefficient " + std::to_string(j) +
                                       " differs for " + tag,
                           failures);
                }

                GridSpec uspec;
                uspec.kind = GridSpec::Kind::FloatBoxAvoidingKpi;
                uspec.count = 12;
                uspec.seed = rng.next();
                uspec.lo = -10.0;
                uspec.hi = 10.0;
                uspec.kpi_margin = 0.0;
                const auto direct =
                    verify(eq, candidate, sample_grid(uspec), VerifyMode::DirectFloat, 1e-9);
                expect(direct.holds && direct.max_residual <= 1e-9,
                       "direct-float residual " + format_residual(direct.max_residual) +
                           " too large for " + tag,
                       failures);
            }
    return failures;
}

std::vector<std::string> criterion_arcsine_theorems(double tol) {
    std::vector<std::string> failures;
    Rng rng(5005);
    for (int n = 1; n <= 3 && failures.size() < 3; ++n)
        for (int round = 0; round < 10 && failures.size() < 3; ++round) {
            const bool monomial = rng.next_below(2) == 0;
            const auto eq_struct = ArcsineEquation::make(
                monomial ? ArcsineEquation::Variant::Monomial : ArcsineEquation::Variant::Polynomial,
                n);
            const Equation eq = eq_struct;
            MonomialSum coeffs =
                monomial ? MonomialSum({MonomialSpec::power(n, rng.next_nonzero_rational(20, 20))})
                         : random_rational_sum(rng, n, false);
            const CandidateSolution candidate = solve(eq, coeffs);
            const std::string tag =
                eq_struct.name() + " n=" + std::to_string(n) + " round " + std::to_string(round);

            GridSpec gspec;
            gspec.kind = GridSpec::Kind::FloatBoxAvoidingKpi;
            gspec.count = 200;
            gspec.seed = rng.next();
            const Grid grid = sample_grid(gspec);
            const auto direct = verify(eq, candidate, grid, VerifyMode::DirectFloat, tol);
            expect(direct.holds && direct.max_residual <= tol,
                   "canonical residual " + format_residual(direct.max_residual) + " too large for " +
                       tag,
                   failures);

            auto table = tabulate_arcsine_solution(eq, coeffs, grid);
            const std::size_t pair_index = smallest_magnitude_pair(eq, candidate, grid, tol);
            const auto pts = required_points(eq, std::get<double>(grid[pair_index].first),
                                             std::get<double>(grid[pair_index].second));
            const double target = monomial ? pts[static_cast<std::size_t>(n)] : pts.back();
            for (auto& [u, value] : table)
                if (std::get<double>(u) == target)
                    value = std::get<double>(value) + 1e-5;
            CandidateSolution raw;
            raw.body = CandidateSolution::Raw{std::move(table), CandidateSolution::TableSpace::U};
            const auto refuted = verify(eq, raw, grid, VerifyMode::DirectFloat, tol);
            expect(!refuted.holds, "1e-5 perturbation not refuted for " + tag, failures);
        }
    return failures;
}

std::vector<std::string> criterion_triviality(double tol) {
    std::vector<std::string> failures;
    Rng rng(6006);
    std::vector<double> samples;
    for (int k = 0; k < 25; ++k)
        samples.push_back(rng.next_double(-20.0, 20.0));
    samples.erase(std::remove_if(samples.begin(), samples.end(),
                                 [](double u) {
                                     return std::fabs(std::remainder(u, std::acos(-1.0))) < 1e-3;
                                 }),
                  samples.end());

    const auto zero_extension = [] {
        std::map<int, GroupValue> ext;
        for (int k = -2; k <= 2; ++k)
            ext[k] = 0.0;
        return ext;
    }();

    for (int n = 1; n <= 3 && failures.size() < 3; ++n) {
        const auto eq3 = ArcsineEquation::make(ArcsineEquation::Variant::Monomial, n);
        const auto eq4 = ArcsineEquation::make(ArcsineEquation::Variant::Polynomial, n);

        // zero function passes both
        CandidateSolution zero = solve(Equation(eq3), MonomialSum({MonomialSpec::power(n, Rational(0))}));
        zero.extension = zero_extension;
        auto report = triviality_check(eq3, zero, samples, tol);
        expect(report.applicable && !report.flagged, "zero flagged by eq3 at n=" + std::to_string(n),
               failures);
        report = triviality_check(eq4, zero, samples, tol);
        expect(report.applicable && !report.flagged, "zero flagged by eq4 at n=" + std::to_string(n),
               failures);

        // nonzero canonical candidates are flagged
        for (int round = 0; round < 10; ++round) {
            CandidateSolution nonzero = solve(
                Equation(eq3), MonomialSum({MonomialSpec::power(n, rng.next_nonzero_rational(20, 20))}));
            nonzero.extension = zero_extension;
            report = triviality_check(eq3, nonzero, samples, tol);
            expect(report.flagged, "nonzero canonical not flagged by eq3 at n=" + std::to_string(n),
                   failures);
        }

        // a candidate that vanishes on U but not at the extension points is flagged
        CandidateSolution hidden = zero;
        hidden.extension[2] = 1.0;
        report = triviality_check(eq3, hidden, samples, tol);
        expect(report.flagged, "nonzero extension value not flagged by eq3", failures);

        // non-constant candidates are flagged by the eq4 collapse f(u) = f(0)
        for (int round = 0; round < 10; ++round) {
            std::vector<MonomialSpec> specs{
                MonomialSpec::power(0, rng.next_rational(20, 20)),
                MonomialSpec::power(n, rng.next_nonzero_rational(20, 20))};
            CandidateSolution sloped = solve(Equation(eq4), MonomialSum(std::move(specs)));
            sloped.extension = zero_extension;
            report = triviality_check(eq4, sloped, samples, tol);
            expect(report.flagged, "non-constant candidate not flagged by eq4 at n=" + std::to_string(n),
                   failures);
        }
    }
    return failures;
}

std::vector<std::string> criterion_oracle_equivalence() {
    std::vector<std::string> failures;
    Rng rng(7007);
    const auto domain = SemigroupInstance::real_line();
    const auto rationals = AbelianGroup::exact_rational();
    for (int round = 0; round < 1000 && failures.size() < 3; ++round) {
        const int degree = static_cast<int>(rng.next_int(0, 4));
        const MonomialSum sum = random_rational_sum(rng, degree, false);
        const auto handle = make_polynomial(domain, rationals, sum);
        const int order = static_cast<int>(rng.next_int(0, 6));
        const SemigroupPoint x = rng.next_rational(20, 20);
        const SemigroupPoint y = rng.next_rational(20, 20);
        const GroupValue fast = forward_difference(handle, order, x, y);
        const GroupValue reference = forward_difference_reference(handle, order, x, y);
        expect(rationals.equal(fast, reference),
               "difference mismatch at round " + std::to_string(round), failures);
    }
    return failures;
}

std::vector<std::string> criterion_fuzz_determinism(double tol) {
    std::vector<std::string> failures;
    FuzzConfig radical;
    radical.family = FuzzConfig::Family::Radical;
    radical.cases = 20;
    radical.seed = 8008;
    const std::string r1 = fuzz_report_to_json(fuzz(radical)).dump();
    const std::string r2 = fuzz_report_to_json(fuzz(radical)).dump();
    expect(r1 == r2, "radical fuzz reports differ across runs", failures);
    expect(fuzz(radical).unexpected.empty(), "radical fuzz produced unexpected outcomes", failures);

    FuzzConfig arcsine;
    arcsine.family = FuzzConfig::Family::Arcsine;
    arcsine.cases = 10;
    arcsine.seed = 8009;
    arcsine.tol = tol;
    const std::string a1 = fuzz_report_to_json(fuzz(arcsine)).dump();
    const std::string a2 = fuzz_report_to_json(fuzz(arcsine)).dump();
    expect(a1 == a2, "arcsine fuzz reports differ across runs", failures);
    return failures;
}

CriterionResult run_criterion(int index, const std::string& name, double limit_seconds,
                              const std::function<std::vector<std::string>()>& body) {
    CriterionResult result;
    result.index = index;
    result.name = name;
    result.limit_seconds = limit_seconds;
    const auto start = Clock::now();
    std::vector<std::string> failures;
    try {
        failures = body();
    } catch (const std::exception& e) {
        failures.push_back(std::string("exception: ") + e.what());
    }
    result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::ostringstream detail;
    if (failures.empty()) {
        result.passed = true;
        detail << "ok";
    } else {
        detail << failures.front();
        if (failures.size() > 1)
            detail << " (+" << failures.size() - 1 << " more)";
    }
    if (limit_seconds > 0.0 && result.seconds >= limit_seconds) {
        result.passed = false;
        detail << "; runtime " << result.seconds << " s exceeded the " << limit_seconds
               << " s limit";
    }
    result.detail = detail.str();
    return result;
}

} // namespace

std::vector<CriterionResult> run_acceptance_suite(const AcceptanceConfig& config) {
    std::vector<CriterionResult> results;
    results.push_back(run_criterion(1, "monomial identity (power and tensor, exact)", 5.0,
                                    criterion_monomial_identity));
    results.push_back(run_criterion(2, "polynomial annihilation and degree sharpness", 5.0,
                                    criterion_polynomial_annihilation));
    results.push_back(run_criterion(3, "decomposition round-trip (exact and mod-101)", 5.0,
                                    criterion_decomposition_roundtrip));
    results.push_back(run_criterion(4, "radical equations: solve/verify/recover", 30.0,
                                    criterion_radical_theorems));
    results.push_back(run_criterion(5, "arcsine equations: verify and refute", 10.0,
                                    [&] { return criterion_arcsine_theorems(config.arcsine_tol); }));
    results.push_back(run_criterion(6, "maximal-domain triviality", 2.0,
                                    [&] { return criterion_triviality(config.arcsine_tol); }));
    results.push_back(
        run_criterion(7, "difference oracle equivalence", 2.0, criterion_oracle_equivalence));
    results.push_back(run_criterion(8, "fuzz determinism", 0.0,
                                    [&] { return criterion_fuzz_determinism(config.arcsine_tol); }));
    return results;
}

bool print_acceptance_table(const std::vector<CriterionResult>& results, std::ostream& out) {
    bool all_passed = true;
    for (const auto& r : results) {
        out << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.index << "  ["
            << r.seconds << " s]  " << r.name;
        if (!r.passed || r.detail != "ok")
            out << " -- " << r.detail;
        out << "\n";
        all_passed = all_passed && r.passed;
    }
    out << (all_passed ? "all criteria passed" : "some criteria FAILED") << "\n";
    return all_passed;
}

} // namespace frechet
