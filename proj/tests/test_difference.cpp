#include <doctest.h>

#include <algorithm>
#include <map>

#include "frechet/difference.hpp"
#include "frechet/harness.hpp"
#include "symbolic_oracle.hpp"

using namespace frechet;

namespace {

const SemigroupInstance kLine = SemigroupInstance::real_line();
const AbelianGroup kRationals = AbelianGroup::exact_rational();

FunctionHandle power_handle(int degree, const Rational& c) {
    return make_monomial(kLine, kRationals, MonomialSpec::power(degree, c));
}

Grid rational_grid(std::uint64_t seed, int count, bool nonzero = false) {
    GridSpec spec;
    spec.kind = GridSpec::Kind::RationalBox;
    spec.count = count;
    spec.seed = seed;
    spec.nonzero = nonzero;
    return sample_grid(spec);
}

MonomialSum random_sum(Rng& rng, int max_degree) {
    std::vector<MonomialSpec> specs;
    for (int j = 0; j <= max_degree; ++j) {
        const Rational c = rng.next_rational(10, 10);
        if (c != 0)
            specs.push_back(MonomialSpec::power(j, c));
    }
    return MonomialSum(std::move(specs));
}

} // namespace

TEST_CASE("iterated difference worked examples") {
    const auto square = power_handle(2, 1);
    // rho(7) - 2 rho(4) + rho(1) = 49 - 32 + 1
    CHECK(kRationals.equal(forward_difference(square, 2, Rational(1), Rational(3)), Rational(18)));
    CHECK(kRationals.equal(kRationals.scale(factorial(2), square.evaluate(Rational(3))),
                           Rational(18)));

    const auto linear = power_handle(1, 5);
    CHECK(kRationals.equal(forward_difference(linear, 1, Rational(2), Rational(4)), Rational(20)));

    // order 0 is evaluation
    CHECK(kRationals.equal(forward_difference(square, 0, Rational(5, 2), Rational(9)),
                           Rational(25, 4)));
}

TEST_CASE("difference of a power monomial matches the symbolic expansion") {
    Rng rng(7);
    for (int j = 0; j <= 6; ++j) {
        const Rational c = rng.next_nonzero_rational(12, 8);
        const auto expanded = oracle::symbolic_difference_of_power(c, j);

        // symbolically, the only surviving term is j! * c * y^j
        oracle::Bivariate expected;
        oracle::add_term(expected, 0, j, Rational(factorial(j)) * c);
        CHECK(expanded == expected);

        const auto handle = power_handle(j, c);
        for (const auto& [x, y] : rational_grid(100 + static_cast<std::uint64_t>(j), 10)) {
            const auto direct =
                forward_difference(handle, j, x, y);
            CHECK(kRationals.equal(direct, oracle::evaluate(expanded, std::get<Rational>(x),
                                                            std::get<Rational>(y))));
        }
    }
}

TEST_CASE("monomial identity check") {
    SUBCASE("cubic power monomial holds on any grid") {
        const auto cubic = power_handle(3, 1);
        const auto result = check_monomial(cubic, 3, rational_grid(11, 40));
        CHECK(result.holds);
        CHECK(result.max_residual == 0.0);
        CHECK(result.pairs_checked == 40);
    }
    SUBCASE("x^2 + 1 is not a 2-monomial; witness frozen at (0, 1)") {
        const MonomialSum sum({MonomialSpec::power(0, Rational(1)), MonomialSpec::power(2, Rational(1))});
        const auto handle = make_polynomial(kLine, kRationals, sum);
        Grid grid{{Rational(0), Rational(1)}};
        const auto result = check_monomial(handle, 2, grid);
        REQUIRE_FALSE(result.holds);
        REQUIRE(result.witness.has_value());
        CHECK(std::get<Rational>(result.witness->lhs) == 2);  // delta^2 rho(0) with y = 1
        CHECK(std::get<Rational>(result.witness->rhs) == 4);  // 2! * rho(1)
    }
    SUBCASE("the zero function is a j-monomial for every j") {
        const auto zero = power_handle(4, 0);
        for (int j = 0; j <= 4; ++j)
            CHECK(check_monomial(zero, j, rational_grid(12, 10)).holds);
    }
}

TEST_CASE("polynomial identity check") {
    SUBCASE("sum of degrees {0,1,2} is annihilated at n = 2") {
        const MonomialSum sum({MonomialSpec::power(0, Rational(3)),
                               MonomialSpec::power(1, Rational(2)),
                               MonomialSpec::power(2, Rational(1))});
        const auto handle = make_polynomial(kLine, kRationals, sum);
        CHECK(check_polynomial(handle, 2, rational_grid(13, 20)).holds);
    }
    SUBCASE("x^3 is not a 2-polynomial") {
        const auto cubic = power_handle(3, 1);
        const auto result = check_polynomial(cubic, 2, rational_grid(14, 20, true));
        CHECK_FALSE(result.holds);
        CHECK(result.witness.has_value());
    }
    SUBCASE("constants are 0-polynomials") {
        CHECK(check_polynomial(power_handle(0, Rational(7)), 0, rational_grid(15, 10)).holds);
    }
    SUBCASE("a degree-n power monomial fails at n - 1") {
        for (int n = 1; n <= 4; ++n) {
            const auto handle = power_handle(n, Rational(3, 2));
            CHECK_FALSE(check_polynomial(handle, n - 1, rational_grid(16, 10, true)).holds);
        }
    }
}

TEST_CASE("operator recurrence: delta^{j+1} = delta^j after a first difference") {
    Rng rng(17);
    for (int round = 0; round < 20; ++round) {
        const auto sum = random_sum(rng, 4);
        const auto handle = make_polynomial(kLine, kRationals, sum);
        const SemigroupPoint x = rng.next_rational(10, 6);
        const SemigroupPoint y = rng.next_rational(10, 6);
        for (int j = 0; j <= 4; ++j) {
            const auto stepped = first_difference(handle, y);
            CHECK(kRationals.equal(forward_difference(handle, j + 1, x, y),
                                   forward_difference(stepped, j, x, y)));
        }
    }
}

TEST_CASE("first differences with different steps commute") {
    Rng rng(18);
    for (int round = 0; round < 20; ++round) {
        const auto sum = random_sum(rng, 4);
        const auto handle = make_polynomial(kLine, kRationals, sum);
        const SemigroupPoint x = rng.next_rational(10, 6);
        const SemigroupPoint y = rng.next_rational(10, 6);
        const SemigroupPoint z = rng.next_rational(10, 6);
        const auto dy_dz = first_difference(first_difference(handle, z), y);
        const auto dz_dy = first_difference(first_difference(handle, y), z);
        CHECK(kRationals.equal(dy_dz.evaluate(x), dz_dy.evaluate(x)));
    }
}

TEST_CASE("table-backed handles report missing samples") {
    FunctionHandle::Table table{{Rational(0), Rational(0)},
                                {Rational(1), Rational(1)},
                                {Rational(2), Rational(4)}};
    const auto handle = FunctionHandle::sampled(kLine, kRationals, table);
    CHECK_THROWS_AS(forward_difference(handle, 2, Rational(1), Rational(1)), MissingSampleError);

    // pairs whose points are all present are checked, the rest are skipped
    Grid grid{{Rational(0), Rational(1)}, {Rational(1), Rational(1)}};
    const auto result = check_monomial(handle, 2, grid);
    CHECK(result.pairs_checked == 1);
    CHECK(result.pairs_skipped == 1);
    CHECK(result.coverage() == doctest::Approx(0.5));
}

TEST_CASE("duplicate table keys are rejected") {
    FunctionHandle::Table table{{Rational(1), Rational(1)}, {Rational(1), Rational(2)}};
    CHECK_THROWS_AS(FunctionHandle::sampled(kLine, kRationals, table), InvalidSpecError);
}

TEST_CASE("make_monomial worked examples") {
    SUBCASE("power form") {
        const auto half_square = make_monomial(kLine, kRationals, MonomialSpec::power(2, Rational(1, 2)));
        CHECK(kRationals.equal(half_square.evaluate(Rational(3)), Rational(9, 2)));
        const auto constant = make_monomial(kLine, kRationals, MonomialSpec::power(0, Rational(7)));
        CHECK(kRationals.equal(constant.evaluate(Rational(-5)), Rational(7)));
    }
    SUBCASE("linear form over a dim-2 domain") {
        const auto spec = MonomialSpec::tensor(1, 2, {Rational(3), Rational(-2)});
        const auto handle = make_monomial(SemigroupInstance::rational_vector(2), kRationals, spec);
        CHECK(kRationals.equal(handle.evaluate(RatVec{Rational(1, 2), Rational(5)}),
                               Rational(3, 2) - Rational(10)));
    }
    SUBCASE("asymmetric tensors are rejected") {
        CHECK_THROWS_AS(MonomialSpec::tensor(2, 2, {Rational(0), Rational(1), Rational(2), Rational(3)}),
                        InvalidSpecError);
        CHECK_NOTHROW(MonomialSpec::tensor(2, 2, {Rational(0), Rational(1), Rational(1), Rational(3)}));
    }
    SUBCASE("tensor monomials satisfy the monomial identity") {
        Rng rng(19);
        for (int j = 1; j <= 4; ++j) {
            std::vector<Rational> dense;
            // build a symmetric tensor over dim 2 by seeding sorted entries
            std::map<std::vector<int>, Rational> sorted;
            const std::size_t size = std::size_t(1) << j;
            for (std::size_t flat = 0; flat < size; ++flat) {
                std::vector<int> idx;
                for (int b = j - 1; b >= 0; --b)
                    idx.push_back(static_cast<int>((flat >> b) & 1));
                std::sort(idx.begin(), idx.end());
                if (!sorted.count(idx))
                    sorted[idx] = rng.next_rational(6, 4);
                dense.push_back(sorted[idx]);
            }
            const auto spec = MonomialSpec::tensor(j, 2, dense);
            const auto handle =
                make_monomial(SemigroupInstance::rational_vector(2), kRationals, spec);
            Grid grid;
            for (int k = 0; k < 10; ++k)
                grid.emplace_back(SemigroupPoint(RatVec{rng.next_rational(5, 3), rng.next_rational(5, 3)}),
                                  SemigroupPoint(RatVec{rng.next_rational(5, 3), rng.next_rational(5, 3)}));
            const auto result = check_monomial(handle, j, grid);
            CHECK(result.holds);
            CHECK(result.max_residual == 0.0);
        }
    }
}

TEST_CASE("decompose worked examples") {
    SUBCASE("3 + 2x + x^2") {
        const MonomialSum sum({MonomialSpec::power(0, Rational(3)),
                               MonomialSpec::power(1, Rational(2)),
                               MonomialSpec::power(2, Rational(1))});
        const auto handle = make_polynomial(kLine, kRationals, sum);
        const auto components = decompose(handle, 2, rational_grid(20, 10, true));
        REQUIRE(components.components().size() == 3);
        CHECK(std::get<Rational>(components.component_of_degree(0)->coefficient) == 3);
        CHECK(std::get<Rational>(components.component_of_degree(1)->coefficient) == 2);
        CHECK(std::get<Rational>(components.component_of_degree(2)->coefficient) == 1);
    }
    SUBCASE("zero function decomposes to zero components") {
        const auto zero = power_handle(3, 0);
        const auto components = decompose(zero, 3, rational_grid(21, 10));
        CHECK(components.is_zero());
    }
    SUBCASE("identity over Z_5") {
        const auto domain = SemigroupInstance::mod_p(5);
        const auto group = AbelianGroup::mod_p(5, 2);
        const auto handle =
            make_monomial(domain, group, MonomialSpec::power(1, ModValue{5, 1}));
        Grid grid;
        Rng rng(22);
        for (int k = 0; k < 8; ++k)
            grid.emplace_back(SemigroupPoint(ModValue{5, static_cast<std::int64_t>(rng.next_below(5))}),
                              SemigroupPoint(ModValue{5, 1 + static_cast<std::int64_t>(rng.next_below(4))}));
        const auto components = decompose(handle, 1, grid);
        CHECK(group.equal(components.component_of_degree(1)->coefficient, ModValue{5, 1}));
        const auto* constant = components.component_of_degree(0);
        if (constant)
            CHECK(group.equal(constant->coefficient, ModValue{5, 0}));
    }
    SUBCASE("non-polynomial input is rejected with the failing check") {
        const auto cubic = power_handle(3, 1);
        CHECK_THROWS_AS(decompose(cubic, 2, rational_grid(23, 10, true)), DecompositionError);
    }
    SUBCASE("degree above the divisibility bound is refused") {
        const auto group4 = AbelianGroup::exact_rational(4);
        const auto handle = make_monomial(kLine, group4, MonomialSpec::power(2, Rational(1)));
        CHECK_THROWS_AS(decompose(handle, 5, rational_grid(24, 5)), UnsupportedDivisionError);
    }
}

TEST_CASE("decompose round-trips random sums") {
    Rng rng(25);
    for (int round = 0; round < 25; ++round) {
        const int n = static_cast<int>(rng.next_int(0, 4));
        const auto sum = random_sum(rng, n);
        const auto handle = make_polynomial(kLine, kRationals, sum);
        const auto grid = rational_grid(2500 + static_cast<std::uint64_t>(round), 8, true);
        const auto recovered = decompose(handle, n, grid);
        for (int j = 0; j <= n; ++j) {
            const auto* original = sum.component_of_degree(j);
            const auto* extracted = recovered.component_of_degree(j);
            const Rational a = original ? std::get<Rational>(original->coefficient) : 0;
            const Rational b = extracted ? std::get<Rational>(extracted->coefficient) : 0;
            CHECK(a == b);
        }
    }
}

TEST_CASE("decompose handles tensor components over a vector domain") {
    const auto domain = SemigroupInstance::rational_vector(2);
    const auto linear = MonomialSpec::tensor(1, 2, {Rational(2), Rational(-1)});
    const auto quadratic =
        MonomialSpec::tensor(2, 2, {Rational(1), Rational(3), Rational(3), Rational(-2)});
    const auto handle = make_polynomial(domain, kRationals, MonomialSum({linear, quadratic}));

    Rng rng(26);
    Grid grid;
    for (int k = 0; k < 8; ++k)
        grid.emplace_back(SemigroupPoint(RatVec{rng.next_rational(5, 3), rng.next_rational(5, 3)}),
                          SemigroupPoint(RatVec{rng.next_rational(5, 3), rng.next_rational(5, 3)}));
    const auto recovered = decompose(handle, 2, grid);

    for (const auto& [x, y] : grid)
        for (const auto& point : {x, y})
            CHECK(kRationals.equal(recovered.evaluate(domain, kRationals, point),
                                   handle.evaluate(point)));
    // the extracted degree-2 entries reproduce the generating tensor
    const auto* deg2 = recovered.component_of_degree(2);
    REQUIRE(deg2 != nullptr);
    CHECK(deg2->dense_tensor() ==
          std::vector<Rational>{Rational(1), Rational(3), Rational(3), Rational(-2)});
}

TEST_CASE("decompose works straight off a table") {
    // rho(x) = 3 + 2x + x^2 sampled on {0..8}; extraction probes {0, 1, 2}
    // and the grid pairs keep x + i*y inside the sampled range
    FunctionHandle::Table table;
    for (int k = 0; k <= 8; ++k) {
        const Rational x(k);
        table.emplace_back(SemigroupPoint(x), GroupValue(3 + 2 * x + x * x));
    }
    const auto handle = FunctionHandle::sampled(kLine, kRationals, table);
    Grid grid{{Rational(1), Rational(1)}, {Rational(2), Rational(2)}, {Rational(0), Rational(1)}};
    const auto components = decompose(handle, 2, grid);
    CHECK(std::get<Rational>(components.component_of_degree(0)->coefficient) == 3);
    CHECK(std::get<Rational>(components.component_of_degree(1)->coefficient) == 2);
    CHECK(std::get<Rational>(components.component_of_degree(2)->coefficient) == 1);
}

TEST_CASE("decompose on the nonpositive half-line probes at -1") {
    const auto domain = SemigroupInstance::nonpos_half_line(PointRepr::Exact);
    const MonomialSum sum({MonomialSpec::power(1, Rational(-3)),
                           MonomialSpec::power(2, Rational(7, 2))});
    const auto handle = make_polynomial(domain, kRationals, sum);
    GridSpec spec;
    spec.kind = GridSpec::Kind::CharacteristicBox;
    spec.count = 8;
    spec.seed = 27;
    spec.sign = GridSpec::Sign::Nonpos;
    spec.nonzero = true;
    const auto components = decompose(handle, 2, sample_grid(spec));
    CHECK(std::get<Rational>(components.component_of_degree(1)->coefficient) == -3);
    CHECK(std::get<Rational>(components.component_of_degree(2)->coefficient) == Rational(7, 2));
}

TEST_CASE("float-instance monomials pass their identity within eps") {
    const auto domain = SemigroupInstance::nonpos_half_line(PointRepr::Float);
    const auto floats = AbelianGroup::float_tolerance(1e-9);
    const auto handle = make_monomial(domain, floats, MonomialSpec::power(3, Rational(5, 4)));
    Rng rng(28);
    Grid grid;
    for (int k = 0; k < 25; ++k)
        grid.emplace_back(SemigroupPoint(-rng.next_double(0.0, 8.0)),
                          SemigroupPoint(-rng.next_double(0.0, 8.0)));
    const auto result = check_monomial(handle, 3, grid);
    CHECK(result.holds);
    CHECK(result.max_residual <= 1e-10);
}

TEST_CASE("monomial sums reject duplicate degrees") {
    CHECK_THROWS_AS(MonomialSum({MonomialSpec::power(1, Rational(1)),
                                 MonomialSpec::power(1, Rational(2))}),
                    InvalidSpecError);
}

TEST_CASE("empty verification grids are rejected") {
    const auto handle = power_handle(1, 1);
    CHECK_THROWS_AS(check_monomial(handle, 1, Grid{}), InvalidParameterError);
    CHECK_THROWS_AS(check_polynomial(handle, 1, Grid{}), InvalidParameterError);
}
