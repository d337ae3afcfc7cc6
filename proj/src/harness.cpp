#include "frechet/harness.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace frechet {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

const double kPi = std::acos(-1.0);

Rational draw_signed(Rng& rng, const GridSpec& spec) {
    Rational q = spec.nonzero ? rng.next_nonzero_rational(spec.max_numerator, spec.max_denominator)
                              : rng.next_rational(spec.max_numerator, spec.max_denominator);
    if (spec.sign == GridSpec::Sign::Nonneg && q < 0)
        q = -q;
    if (spec.sign == GridSpec::Sign::Nonpos && q > 0)
        q = -q;
    return q;
}

double draw_float_off_kpi(Rng& rng, const GridSpec& spec) {
    for (;;) {
        const double u = rng.next_double(spec.lo, spec.hi);
        if (std::fabs(std::remainder(u, kPi)) >= spec.kpi_margin)
            return u;
    }
}

} // namespace

Grid sample_grid(const GridSpec& spec) {
    if (spec.count < 0)
        throw InvalidSpecError("grid count must be nonnegative");
    if (spec.max_numerator < 1 || spec.max_denominator < 1)
        throw InvalidSpecError("rational grid bounds must be positive");
    if (spec.kind == GridSpec::Kind::FloatBoxAvoidingKpi) {
        if (!(spec.lo < spec.hi))
            throw InvalidSpecError("float grid needs lo < hi");
        if (!(spec.kpi_margin >= 0.0) || spec.kpi_margin >= 1.5)
            throw InvalidSpecError("k*pi margin must lie in [0, 1.5)");
        if (spec.hi - spec.lo <= 2.0 * spec.kpi_margin)
            throw InvalidSpecError("float grid box is narrower than the k*pi margin");
    }

    Rng rng(spec.seed);
    Grid grid;
    grid.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        switch (spec.kind) {
        case GridSpec::Kind::RationalBox:
        case GridSpec::Kind::CharacteristicBox: {
            const Rational a = draw_signed(rng, spec);
            const Rational b = draw_signed(rng, spec);
            grid.emplace_back(a, b);
            break;
        }
        case GridSpec::Kind::FloatBoxAvoidingKpi: {
            const double a = draw_float_off_kpi(rng, spec);
            const double b = draw_float_off_kpi(rng, spec);
            grid.emplace_back(a, b);
            break;
        }
        }
    }
    return grid;
}

GroupValue forward_difference_reference(const FunctionHandle& rho, int order,
                                        const SemigroupPoint& x, const SemigroupPoint& y) {
    if (order < 0)
        throw InvalidParameterError("difference order must be nonnegative");
    const auto& domain = rho.domain();
    const auto& group = rho.codomain();
    GroupValue acc = group.zero();
    for (int i = order; i >= 0; --i) {
        BigInt binom = 1;
        for (int t = 1; t <= i; ++t) {
            binom *= order - t + 1;
            binom /= t;
        }
        const SemigroupPoint point = domain.add(x, domain.scale(i, y));
        GroupValue term = group.scale(binom, rho.evaluate(point));
        if ((order - i) % 2 != 0)
            term = group.negate(term);
        acc = group.add(acc, term);
    }
    return acc;
}

namespace {

std::string witness_string(const VerifyReport& report) {
    std::ostringstream out;
    out << "max_residual=" << report.max_residual << " checked=" << report.checked_pairs;
    if (report.witness)
        out << " witness(" << value_to_display(report.witness->first) << ", "
            << value_to_display(report.witness->second) << ")";
    return out.str();
}

// Random characteristic coefficients; monomial variants get their single
// degree-n component, polynomial variants a full span of degrees.
MonomialSum draw_coefficients(Rng& rng, int n, bool monomial_variant) {
    std::vector<MonomialSpec> components;
    if (monomial_variant) {
        components.push_back(MonomialSpec::power(n, rng.next_nonzero_rational(20, 20)));
    } else {
        for (int j = 0; j <= n; ++j) {
            const Rational c = rng.next_rational(20, 20);
            if (c != 0)
                components.push_back(MonomialSpec::power(j, c));
        }
    }
    return MonomialSum(std::move(components));
}

struct CaseOutcome {
    VerifyReport solution;
    VerifyReport perturbed;
    std::string equation;
    int n = 0;
    int m = 0;
};

CaseOutcome run_radical_case(Rng& rng, const FuzzConfig& config) {
    const int n = static_cast<int>(rng.next_int(config.n_lo, config.n_hi));
    const int m = static_cast<int>(rng.next_int(config.m_lo, config.m_hi));
    const bool monomial = rng.next_below(2) == 0;
    const auto eq_struct = RadicalEquation::make(
        monomial ? RadicalEquation::Variant::Monomial : RadicalEquation::Variant::Polynomial, n, m);
    const Equation eq = eq_struct;
    const MonomialSum coeffs = draw_coefficients(rng, n, monomial);
    const CandidateSolution canonical = solve(eq, coeffs);

    GridSpec gspec;
    gspec.kind = GridSpec::Kind::CharacteristicBox;
    gspec.count = 6;
    gspec.seed = rng.next();
    gspec.nonzero = true;
    gspec.sign = m % 2 == 0 ? GridSpec::Sign::Nonneg : GridSpec::Sign::Any;
    const Grid grid = sample_grid(gspec);

    CaseOutcome outcome;
    outcome.equation = eq_struct.name();
    outcome.n = n;
    outcome.m = m;
    outcome.solution = verify(eq, canonical, grid, VerifyMode::ExactCharacteristic);

    // Raw characteristic table covering the grid, with one value perturbed by
    // a rational from {+-1, +-1/2} at the first pair's top sample point.
    const SemigroupInstance domain = eq_struct.characteristic_domain();
    const AbelianGroup group = AbelianGroup::exact_rational();
    const int top = monomial ? n : n + 1;
    std::map<Rational, Rational> table;
    for (const auto& [xv, yv] : grid) {
        const Rational x = std::get<Rational>(xv);
        const Rational y = std::get<Rational>(yv);
        table.emplace(x, 0);
        table.emplace(y, 0);
        for (int i = 0; i <= top; ++i)
            table.emplace(x + i * y, 0);
    }
    for (auto& [x, value] : table)
        value = std::get<Rational>(coeffs.evaluate(domain, group, SemigroupPoint(x)));

    static const Rational deltas[4] = {Rational(1), Rational(-1), Rational(1, 2), Rational(-1, 2)};
    const Rational delta = deltas[rng.next_below(4)];
    const Rational target =
        std::get<Rational>(grid.front().first) + top * std::get<Rational>(grid.front().second);
    table[target] += delta;

    CandidateSolution raw;
    FunctionHandle::Table entries;
    for (const auto& [x, value] : table)
        entries.emplace_back(SemigroupPoint(x), GroupValue(value));
    raw.body = CandidateSolution::Raw{std::move(entries), CandidateSolution::TableSpace::Characteristic};
    outcome.perturbed = verify(eq, raw, grid, VerifyMode::ExactCharacteristic);
    return outcome;
}

CaseOutcome run_arcsine_case(Rng& rng, const FuzzConfig& config) {
    const double tol = config.tol;
    const int n = static_cast<int>(rng.next_int(config.n_lo, config.n_hi));
    const bool monomial = rng.next_below(2) == 0;
    const auto eq_struct = ArcsineEquation::make(
        monomial ? ArcsineEquation::Variant::Monomial : ArcsineEquation::Variant::Polynomial, n);
    const Equation eq = eq_struct;
    const MonomialSum coeffs = draw_coefficients(rng, n, monomial);
    const CandidateSolution canonical = solve(eq, coeffs);

    GridSpec gspec;
    gspec.kind = GridSpec::Kind::FloatBoxAvoidingKpi;
    gspec.count = 6;
    gspec.seed = rng.next();
    const Grid grid = sample_grid(gspec);

    CaseOutcome outcome;
    outcome.equation = eq_struct.name();
    outcome.n = n;
    outcome.m = 0;
    outcome.solution = verify(eq, canonical, grid, VerifyMode::DirectFloat, tol);

    const double delta = (rng.next_below(2) == 0 ? 1.0 : -1.0) * 1e4 * tol;

    FunctionHandle::Table entries = tabulate_arcsine_solution(eq, coeffs, grid);

    // Perturbation target: the top argument point of the grid pair with the
    // smallest equation sides. Its net coefficient within that pair is
    // +-1 (or 1 - n! when it coincides with the right-hand point), never 0.
    const std::size_t best_pair = smallest_magnitude_pair(eq, canonical, grid, tol);
    const auto pts = required_points(eq, std::get<double>(grid[best_pair].first),
                                     std::get<double>(grid[best_pair].second));
    const double target = monomial ? pts[static_cast<std::size_t>(n)] : pts.back();
    for (auto& [u, value] : entries)
        if (std::get<double>(u) == target)
            value = std::get<double>(value) + delta;

    CandidateSolution raw;
    raw.body = CandidateSolution::Raw{std::move(entries), CandidateSolution::TableSpace::U};
    outcome.perturbed = verify(eq, raw, grid, VerifyMode::DirectFloat, tol);
    return outcome;
}

} // namespace

FunctionHandle::Table tabulate_arcsine_solution(const Equation& eq, const MonomialSum& coeffs,
                                                const Grid& grid) {
    if (!std::holds_alternative<ArcsineEquation>(eq))
        throw InvalidParameterError("tabulation through ln|sin u| applies to arcsine equations");
    std::map<double, double> table;
    for (const auto& [uv, vv] : grid) {
        const auto pts = required_points(eq, std::get<double>(uv), std::get<double>(vv));
        for (double p : pts) {
            const Quad x = log(abs(sin(Quad(p))));
            Quad acc = 0;
            for (const auto& c : coeffs.components()) {
                Quad xp = 1;
                for (int i = 0; i < c.degree; ++i)
                    xp *= x;
                if (const auto* q = std::get_if<Rational>(&c.coefficient))
                    acc += q->convert_to<Quad>() * xp;
                else
                    acc += Quad(std::get<double>(c.coefficient)) * xp;
            }
            table.emplace(p, acc.convert_to<double>());
        }
    }
    FunctionHandle::Table entries;
    entries.reserve(table.size());
    for (const auto& [u, value] : table)
        entries.emplace_back(SemigroupPoint(u), GroupValue(value));
    return entries;
}

std::size_t smallest_magnitude_pair(const Equation& eq, const CandidateSolution& canonical,
                                    const Grid& grid, double tol) {
    const auto report = verify(eq, canonical, grid, VerifyMode::DirectFloat, tol);
    if (report.side_scales.empty())
        throw InvalidParameterError("no checkable pairs in the grid");
    std::size_t best_pair = 0;
    for (std::size_t k = 1; k < report.side_scales.size(); ++k)
        if (report.side_scales[k] < report.side_scales[best_pair])
            best_pair = k;
    return best_pair;
}

FuzzReport fuzz(const FuzzConfig& config) {
    if (config.n_lo < 1 || config.n_hi < config.n_lo)
        throw InvalidParameterError("fuzz degree range is empty or out of bounds");
    if (config.family == FuzzConfig::Family::Radical && (config.m_lo < 2 || config.m_hi < config.m_lo))
        throw InvalidParameterError("fuzz root-order range is empty or out of bounds");

    Rng rng(config.seed);
    FuzzReport report;
    report.config = config;
    for (std::size_t index = 0; index < config.cases; ++index) {
        const CaseOutcome outcome = config.family == FuzzConfig::Family::Radical
                                        ? run_radical_case(rng, config)
                                        : run_arcsine_case(rng, config);
        ++report.cases_run;
        if (outcome.solution.holds) {
            ++report.holds_count;
        } else {
            ++report.fails_count;
            report.unexpected.push_back(FuzzUnexpected{index, "solution", outcome.equation,
                                                       outcome.n, outcome.m,
                                                       witness_string(outcome.solution)});
        }
        ++report.cases_run;
        if (!outcome.perturbed.holds) {
            ++report.fails_count;
        } else {
            ++report.holds_count;
            report.unexpected.push_back(FuzzUnexpected{index, "perturbation", outcome.equation,
                                                       outcome.n, outcome.m,
                                                       witness_string(outcome.perturbed)});
        }
    }
    return report;
}

} // namespace frechet
