#include <doctest.h>

#include <cmath>
#include <map>

#include "frechet/harness.hpp"

using namespace frechet;

namespace {

const double kPi = std::acos(-1.0);

Grid characteristic_grid(std::uint64_t seed, int count, bool nonneg) {
    GridSpec spec;
    spec.kind = GridSpec::Kind::CharacteristicBox;
    spec.count = count;
    spec.seed = seed;
    spec.sign = nonneg ? GridSpec::Sign::Nonneg : GridSpec::Sign::Any;
    return sample_grid(spec);
}

Grid float_grid(std::uint64_t seed, int count, double bound = 20.0, double margin = 1e-3) {
    GridSpec spec;
    spec.kind = GridSpec::Kind::FloatBoxAvoidingKpi;
    spec.count = count;
    spec.seed = seed;
    spec.lo = -bound;
    spec.hi = bound;
    spec.kpi_margin = margin;
    return sample_grid(spec);
}

} // namespace

TEST_CASE("equation constructors validate their parameters") {
    CHECK_THROWS_AS(RadicalEquation::make(RadicalEquation::Variant::Monomial, 0, 2),
                    InvalidParameterError);
    CHECK_THROWS_AS(RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 1),
                    InvalidParameterError);
    CHECK_THROWS_AS(ArcsineEquation::make(ArcsineEquation::Variant::Polynomial, 0),
                    InvalidParameterError);
    CHECK(RadicalEquation::make(RadicalEquation::Variant::Polynomial, 2, 5).name() == "eq2");
    // the parity rule picks the characteristic domain
    CHECK(RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 3)
              .characteristic_domain()
              .kind() == SemigroupKind::RealLine);
    CHECK(RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 4)
              .characteristic_domain()
              .kind() == SemigroupKind::NonnegHalfLine);
}

TEST_CASE("solve validates coefficient shapes") {
    const Equation eq1 = RadicalEquation::make(RadicalEquation::Variant::Monomial, 2, 3);
    CHECK_THROWS_AS(solve(eq1, MonomialSum({MonomialSpec::power(1, Rational(1))})),
                    InvalidParameterError); // wrong degree
    CHECK_THROWS_AS(solve(eq1, MonomialSum({MonomialSpec::power(0, Rational(1)),
                                            MonomialSpec::power(2, Rational(1))})),
                    InvalidParameterError); // monomial variant wants one component
    const Equation eq2 = RadicalEquation::make(RadicalEquation::Variant::Polynomial, 1, 2);
    CHECK_THROWS_AS(solve(eq2, MonomialSum({MonomialSpec::power(2, Rational(1))})),
                    InvalidParameterError); // degree above n
    CHECK_NOTHROW(solve(eq2, MonomialSum({MonomialSpec::power(0, Rational(2)),
                                          MonomialSpec::power(1, Rational(-1, 2))})));
}

TEST_CASE("eq1 worked example: n=1, m=3, rho = 2x") {
    const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 3);
    const auto candidate = solve(eq, MonomialSum({MonomialSpec::power(1, Rational(2))}));

    // at u=1, v=2 in characteristic coordinates: x=1, y=8
    Grid pair{{Rational(1), Rational(8)}};
    const auto report = verify(eq, candidate, pair, VerifyMode::ExactCharacteristic);
    CHECK(report.holds);
    CHECK(report.checked_pairs == 1);

    // f(cbrt(9)) - f(1) = 18 - 2 = 16 = 1! f(2), through the actual roots
    Grid upair{{Value(1.0), Value(2.0)}};
    const auto direct = verify(eq, candidate, upair, VerifyMode::DirectFloat, 1e-9);
    CHECK(direct.holds);

    const auto pts = required_points(eq, 1.0, 2.0);
    CHECK(pts[1] == doctest::Approx(std::cbrt(9.0)));
    CHECK(pts.back() == 2.0);
}

TEST_CASE("eq2 worked example: a + b u^2 solves n=1, m=2") {
    const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Polynomial, 1, 2);
    const auto candidate = solve(eq, MonomialSum({MonomialSpec::power(0, Rational(7, 3)),
                                                  MonomialSpec::power(1, Rational(-5, 4))}));
    const auto report =
        verify(eq, candidate, characteristic_grid(41, 20, true), VerifyMode::ExactCharacteristic);
    CHECK(report.holds);
    CHECK(report.max_residual == 0.0);
}

TEST_CASE("eq3 worked example: ln|sin u| solves n=1") {
    const Equation eq = ArcsineEquation::make(ArcsineEquation::Variant::Monomial, 1);
    const auto candidate = solve(eq, MonomialSum({MonomialSpec::power(1, Rational(1))}));
    const auto report = verify(eq, candidate, float_grid(42, 30), VerifyMode::DirectFloat, 1e-9);
    CHECK(report.holds);

    // f(arcsin|sin u sin v|) - f(u) = ln|sin v| at a concrete pair
    const double u = 0.7, v = 1.1;
    const double lhs = std::log(std::fabs(std::sin(u) * std::sin(v))) -
                       std::log(std::fabs(std::sin(u)));
    CHECK(lhs == doctest::Approx(std::log(std::fabs(std::sin(v)))).epsilon(1e-12));
}

TEST_CASE("u^m + 1 is not an eq1 solution") {
    const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 3);
    CandidateSolution affine;
    affine.body = CandidateSolution::Canonical{
        MonomialSum({MonomialSpec::power(0, Rational(1)), MonomialSpec::power(1, Rational(1))}),
        "power-root", 3};
    const auto report =
        verify(eq, affine, characteristic_grid(43, 10, false), VerifyMode::ExactCharacteristic);
    CHECK_FALSE(report.holds);
    CHECK(report.witness.has_value());
}

TEST_CASE("the zero function solves all four equations") {
    const MonomialSum zero_monomial({MonomialSpec::power(1, Rational(0))});
    for (int m : {2, 3}) {
        const Equation eq1 = RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, m);
        CHECK(verify(eq1, solve(eq1, zero_monomial), characteristic_grid(44, 10, m % 2 == 0),
                     VerifyMode::ExactCharacteristic)
                  .holds);
        const Equation eq2 = RadicalEquation::make(RadicalEquation::Variant::Polynomial, 1, m);
        CHECK(verify(eq2, solve(eq2, MonomialSum()), characteristic_grid(45, 10, m % 2 == 0),
                     VerifyMode::ExactCharacteristic)
                  .holds);
    }
    const Equation eq3 = ArcsineEquation::make(ArcsineEquation::Variant::Monomial, 2);
    CHECK(verify(eq3, solve(eq3, MonomialSum({MonomialSpec::power(2, Rational(0))})),
                 float_grid(46, 10), VerifyMode::DirectFloat, 1e-9)
              .holds);
    const Equation eq4 = ArcsineEquation::make(ArcsineEquation::Variant::Polynomial, 2);
    CHECK(verify(eq4, solve(eq4, MonomialSum()), float_grid(47, 10), VerifyMode::DirectFloat, 1e-9)
              .holds);
}

TEST_CASE("parity rule: even m rejects negative characteristic points") {
    const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 2);
    const auto candidate = solve(eq, MonomialSum({MonomialSpec::power(1, Rational(1))}));
    Grid bad{{Rational(-1), Rational(2)}};
    CHECK_THROWS_AS(verify(eq, candidate, bad, VerifyMode::ExactCharacteristic), DomainError);
}

TEST_CASE("arcsine grids touching k*pi are rejected") {
    const Equation eq = ArcsineEquation::make(ArcsineEquation::Variant::Monomial, 1);
    const auto candidate = solve(eq, MonomialSum({MonomialSpec::power(1, Rational(1))}));
    Grid bad{{Value(kPi), Value(1.0)}};
    CHECK_THROWS_AS(verify(eq, candidate, bad, VerifyMode::DirectFloat, 1e-9), DomainError);
}

TEST_CASE("exact mode is only for the radical equations") {
    const Equation eq = ArcsineEquation::make(ArcsineEquation::Variant::Monomial, 1);
    const auto candidate = solve(eq, MonomialSum({MonomialSpec::power(1, Rational(1))}));
    Grid grid{{Value(0.5), Value(1.0)}};
    CHECK_THROWS_AS(verify(eq, candidate, grid, VerifyMode::ExactCharacteristic),
                    InvalidParameterError);
}

TEST_CASE("raw tables verify and single perturbations are refuted") {
    SUBCASE("radical, exact characteristic table") {
        const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 2, 2);
        const MonomialSum coeffs({MonomialSpec::power(2, Rational(3, 2))});
        const Grid grid = characteristic_grid(48, 6, true);

        FunctionHandle::Table table;
        const auto domain = std::get<RadicalEquation>(eq).characteristic_domain();
        const auto group = AbelianGroup::exact_rational();
        std::map<Rational, Rational> keys;
        for (const auto& [xv, yv] : grid) {
            const Rational x = std::get<Rational>(xv);
            const Rational y = std::get<Rational>(yv);
            for (int i = 0; i <= 2; ++i)
                keys.emplace(x + i * y, 0);
            keys.emplace(y, 0);
        }
        for (auto& [x, value] : keys)
            value = std::get<Rational>(coeffs.evaluate(domain, group, SemigroupPoint(x)));

        CandidateSolution raw;
        FunctionHandle::Table entries;
        for (const auto& [x, value] : keys)
            entries.emplace_back(SemigroupPoint(x), GroupValue(value));
        raw.body = CandidateSolution::Raw{entries, CandidateSolution::TableSpace::Characteristic};
        CHECK(verify(eq, raw, grid, VerifyMode::ExactCharacteristic).holds);

        // perturb the top sample of the first pair by 1/2
        const Rational target =
            std::get<Rational>(grid.front().first) + 2 * std::get<Rational>(grid.front().second);
        for (auto& [point, value] : entries)
            if (std::get<Rational>(point) == target)
                value = std::get<Rational>(value) + Rational(1, 2);
        CandidateSolution perturbed;
        perturbed.body =
            CandidateSolution::Raw{entries, CandidateSolution::TableSpace::Characteristic};
        const auto refuted = verify(eq, perturbed, grid, VerifyMode::ExactCharacteristic);
        CHECK_FALSE(refuted.holds);
        CHECK(refuted.witness.has_value());
    }
    SUBCASE("arcsine, u-space float table") {
        const Equation eq = ArcsineEquation::make(ArcsineEquation::Variant::Monomial, 1);
        const MonomialSum coeffs({MonomialSpec::power(1, Rational(2))});
        const Grid grid = float_grid(49, 8);
        auto table = tabulate_arcsine_solution(eq, coeffs, grid);

        CandidateSolution raw;
        raw.body = CandidateSolution::Raw{table, CandidateSolution::TableSpace::U};
        CHECK(verify(eq, raw, grid, VerifyMode::DirectFloat, 1e-9).holds);

        const auto candidate = solve(eq, coeffs);
        const auto pair_index = smallest_magnitude_pair(eq, candidate, grid, 1e-9);
        const auto pts = required_points(eq, std::get<double>(grid[pair_index].first),
                                         std::get<double>(grid[pair_index].second));
        for (auto& [point, value] : table)
            if (std::get<double>(point) == pts[1])
                value = std::get<double>(value) + 1e-5;
        CandidateSolution perturbed;
        perturbed.body = CandidateSolution::Raw{table, CandidateSolution::TableSpace::U};
        CHECK_FALSE(verify(eq, perturbed, grid, VerifyMode::DirectFloat, 1e-9).holds);
    }
}

TEST_CASE("u-space exact tables verify through the characteristic pullback") {
    const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 2);
    const MonomialSum coeffs({MonomialSpec::power(1, Rational(5, 3))});

    // the pulled-back keys are the squares {0, 1, 4, 9, 16, 25}; both grid
    // pairs keep x, x + y, and y inside that set (16 + 9 = 25), and +-u
    // collapse to one x
    Grid grid{{Rational(16), Rational(9)}, {Rational(0), Rational(4)}};
    FunctionHandle::Table table;
    for (int k = -5; k <= 5; ++k) {
        const Rational u(k);
        table.emplace_back(SemigroupPoint(u), GroupValue(Rational(5, 3) * rational_pow(u, 2)));
    }
    CandidateSolution raw;
    raw.body = CandidateSolution::Raw{table, CandidateSolution::TableSpace::U};
    const auto report = verify(eq, raw, grid, VerifyMode::ExactCharacteristic);
    CHECK(report.holds);
    CHECK(report.checked_pairs == 2);

    // a table that disagrees at +-u has no characteristic pullback
    table[0].second = Rational(99);
    CandidateSolution inconsistent;
    inconsistent.body = CandidateSolution::Raw{table, CandidateSolution::TableSpace::U};
    CHECK_THROWS_AS(verify(eq, inconsistent, grid, VerifyMode::ExactCharacteristic),
                    InvalidSpecError);
}

TEST_CASE("triviality check") {
    const auto eq3 = ArcsineEquation::make(ArcsineEquation::Variant::Monomial, 1);
    const auto eq4 = ArcsineEquation::make(ArcsineEquation::Variant::Polynomial, 1);
    std::vector<double> samples{0.5, 1.3, 2.0, -0.9, 4.0};

    std::map<int, GroupValue> zero_ext;
    for (int k = -2; k <= 2; ++k)
        zero_ext[k] = 0.0;

    SUBCASE("the zero function passes") {
        CandidateSolution zero = solve(Equation(eq3), MonomialSum({MonomialSpec::power(1, Rational(0))}));
        zero.extension = zero_ext;
        CHECK_FALSE(triviality_check(eq3, zero, samples).flagged);
        CHECK_FALSE(triviality_check(eq4, zero, samples).flagged);
    }
    SUBCASE("ln|sin v| extended by 0 at k*pi is flagged wherever sin v != 1") {
        CandidateSolution cand = solve(Equation(eq3), MonomialSum({MonomialSpec::power(1, Rational(1))}));
        cand.extension = zero_ext;
        const auto report = triviality_check(eq3, cand, samples);
        CHECK(report.applicable);
        CHECK(report.flagged);
        CHECK(report.violations.size() == samples.size()); // no sample here has |sin v| = 1
    }
    SUBCASE("the collapse relies on the vanishing alternating binomial sum") {
        for (int n = 1; n <= 6; ++n) {
            const auto row = pascal_row(n);
            BigInt alternating = 0;
            for (int i = 0; i <= n; ++i)
                alternating += ((n - i) % 2 == 0 ? 1 : -1) * row[static_cast<std::size_t>(i)];
            CHECK(alternating == 0);
        }
    }
    SUBCASE("candidates with no extension are not applicable") {
        CandidateSolution cand = solve(Equation(eq3), MonomialSum({MonomialSpec::power(1, Rational(1))}));
        CHECK_THROWS_AS(triviality_check(eq3, cand, samples), NotApplicableError);
        cand.extension[2] = 0.0; // defined somewhere, but not at 0
        CHECK_THROWS_AS(triviality_check(eq3, cand, samples), NotApplicableError);
    }
    SUBCASE("a nonzero extension value over a vanishing candidate is flagged") {
        CandidateSolution cand = solve(Equation(eq3), MonomialSum({MonomialSpec::power(1, Rational(0))}));
        cand.extension = zero_ext;
        cand.extension[2] = 1.5;
        CHECK(triviality_check(eq3, cand, samples).flagged);
    }
    SUBCASE("eq4 flags non-constant candidates and admits consistent constants") {
        CandidateSolution sloped = solve(
            Equation(eq4),
            MonomialSum({MonomialSpec::power(0, Rational(1)), MonomialSpec::power(1, Rational(2))}));
        sloped.extension = zero_ext;
        CHECK(triviality_check(eq4, sloped, samples).flagged);

        // substituting v = k*pi collapses eq4 to f(u) = f(0); a constant that
        // extends by its own value satisfies every forced relation
        CandidateSolution constant =
            solve(Equation(eq4), MonomialSum({MonomialSpec::power(0, Rational(3))}));
        for (int k = -2; k <= 2; ++k)
            constant.extension[k] = 3.0;
        CHECK_FALSE(triviality_check(eq4, constant, samples).flagged);
    }
}

TEST_CASE("recover worked examples") {
    SUBCASE("f(u) = u^4 over rational u with m = 2 recovers rho(x) = x^2") {
        const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 2, 2);
        FunctionHandle::Table table;
        for (int k = 0; k <= 5; ++k) {
            const Rational u(k, 2);
            table.emplace_back(SemigroupPoint(u), GroupValue(rational_pow(u, 4)));
        }
        const auto sum = recover(eq, table);
        REQUIRE(sum.components().size() == 1);
        CHECK(sum.components().front().degree == 2);
        CHECK(std::get<Rational>(sum.components().front().coefficient) == 1);
    }
    SUBCASE("the zero table recovers the zero sum") {
        const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 2, 3);
        FunctionHandle::Table table;
        for (int k = -2; k <= 3; ++k)
            table.emplace_back(SemigroupPoint(Rational(k)), GroupValue(Rational(0)));
        CHECK(recover(eq, table).is_zero());
    }
    SUBCASE("f(u) = 2 ln|sin u| recovers the degree-1 coefficient 2 within tol") {
        const Equation eq = ArcsineEquation::make(ArcsineEquation::Variant::Monomial, 1);
        FunctionHandle::Table table;
        for (double x : {0.0, -0.5, -1.0, -2.0}) {
            const double u = std::asin(std::exp(x));
            table.emplace_back(SemigroupPoint(u),
                               GroupValue(2.0 * std::log(std::fabs(std::sin(u)))));
        }
        const auto sum = recover(eq, table, 1e-9);
        const auto* linear = sum.component_of_degree(1);
        REQUIRE(linear != nullptr);
        CHECK(std::get<double>(linear->coefficient) == doctest::Approx(2.0).epsilon(1e-9));
        const auto* constant = sum.component_of_degree(0);
        if (constant)
            CHECK(std::fabs(std::get<double>(constant->coefficient)) <= 1e-9);
    }
    SUBCASE("tables that are not solutions are refuted") {
        const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 3);
        FunctionHandle::Table table;
        for (int k = 0; k <= 4; ++k)
            table.emplace_back(SemigroupPoint(Rational(k)),
                               GroupValue(rational_pow(Rational(k), 6))); // degree 2 in x
        CHECK_THROWS_AS(recover(eq, table), DecompositionError);
    }
    SUBCASE("the pulled-back grid must contain 0") {
        const Equation eq = RadicalEquation::make(RadicalEquation::Variant::Monomial, 1, 2);
        FunctionHandle::Table table{{SemigroupPoint(Rational(1)), GroupValue(Rational(1))},
                                    {SemigroupPoint(Rational(2)), GroupValue(Rational(4))},
                                    {SemigroupPoint(Rational(3)), GroupValue(Rational(9))}};
        CHECK_THROWS_AS(recover(eq, table), InvalidParameterError);
    }
}

TEST_CASE("recover inverts solve across the radical families") {
    Rng rng(51);
    for (int n = 1; n <= 3; ++n)
        for (int m = 2; m <= 4; ++m) {
            const bool monomial = rng.next_below(2) == 0;
            const Equation eq = RadicalEquation::make(monomial
                                                          ? RadicalEquation::Variant::Monomial
                                                          : RadicalEquation::Variant::Polynomial,
                                                      n, m);
            std::vector<MonomialSpec> specs;
            if (monomial) {
                specs.push_back(MonomialSpec::power(n, rng.next_nonzero_rational(20, 20)));
            } else {
                for (int j = 0; j <= n; ++j)
                    specs.push_back(MonomialSpec::power(j, rng.next_nonzero_rational(20, 20)));
            }
            const MonomialSum coeffs(std::move(specs));

            const auto domain = std::get<RadicalEquation>(eq).characteristic_domain();
            const auto group = AbelianGroup::exact_rational();
            FunctionHandle::Table table;
            for (int k = 0; k <= n + 2; ++k) {
                const Rational u(k, 3);
                table.emplace_back(SemigroupPoint(u),
                                   coeffs.evaluate(domain, group,
                                                   SemigroupPoint(rational_pow(u, m))));
            }
            const auto recovered = recover(eq, table);
            for (int j = 0; j <= n; ++j) {
                const auto* original = coeffs.component_of_degree(j);
                const auto* extracted = recovered.component_of_degree(j);
                const Rational a = original ? std::get<Rational>(original->coefficient) : 0;
                const Rational b = extracted ? std::get<Rational>(extracted->coefficient) : 0;
                CHECK(a == b);
            }
        }
}

TEST_CASE("soundness across the full parameter box") {
    // solve -> verify holds bit-exactly (radical) and within tol (arcsine)
    // for n up to 4 and m up to 5
    Rng rng(52);
    for (int n = 1; n <= 4; ++n) {
        for (int m = 2; m <= 5; ++m) {
            const bool monomial = (n + m) % 2 == 0;
            const Equation eq = RadicalEquation::make(monomial
                                                          ? RadicalEquation::Variant::Monomial
                                                          : RadicalEquation::Variant::Polynomial,
                                                      n, m);
            std::vector<MonomialSpec> specs;
            if (monomial) {
                specs.push_back(MonomialSpec::power(n, rng.next_nonzero_rational(20, 20)));
            } else {
                for (int j = 0; j <= n; ++j) {
                    const Rational c = rng.next_rational(20, 20);
                    if (c != 0)
                        specs.push_back(MonomialSpec::power(j, c));
                }
            }
            const auto candidate = solve(eq, MonomialSum(std::move(specs)));
            const auto exact = verify(eq, candidate,
                                      characteristic_grid(520 + static_cast<std::uint64_t>(n * m),
                                                          8, m % 2 == 0),
                                      VerifyMode::ExactCharacteristic);
            CHECK(exact.holds);
            CHECK(exact.max_residual == 0.0);
        }
        const Equation arc = ArcsineEquation::make(
            n % 2 == 0 ? ArcsineEquation::Variant::Polynomial : ArcsineEquation::Variant::Monomial,
            n);
        std::vector<MonomialSpec> specs;
        if (n % 2 == 0) {
            for (int j = 0; j <= n; ++j)
                specs.push_back(MonomialSpec::power(j, rng.next_nonzero_rational(20, 20)));
        } else {
            specs.push_back(MonomialSpec::power(n, rng.next_nonzero_rational(20, 20)));
        }
        const auto candidate = solve(arc, MonomialSum(std::move(specs)));
        const auto direct = verify(arc, candidate, float_grid(530 + static_cast<std::uint64_t>(n), 30),
                                   VerifyMode::DirectFloat, 1e-9);
        CHECK(direct.holds);
    }
}

TEST_CASE("required_points layout matches the verifier's lookups") {
    const Equation eq1 = RadicalEquation::make(RadicalEquation::Variant::Monomial, 2, 2);
    const auto mono = required_points(eq1, 1.5, 0.5);
    CHECK(mono.size() == 4); // w_0, w_1, w_2, then v
    CHECK(mono.back() == 0.5);
    CHECK(mono[0] == doctest::Approx(1.5)); // i = 0 root of u^m

    const Equation eq2 = RadicalEquation::make(RadicalEquation::Variant::Polynomial, 2, 3);
    const auto poly = required_points(eq2, -1.25, 2.0);
    CHECK(poly.size() == 4); // u, then w_1..w_3
    CHECK(poly.front() == -1.25);
}
