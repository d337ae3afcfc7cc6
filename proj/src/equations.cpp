#include "frechet/equations.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace frechet {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

const double kPi = std::acos(-1.0);

double value_as_double(const GroupValue& v) {
    if (const auto* q = std::get_if<Rational>(&v))
        return q->convert_to<double>();
    if (const auto* d = std::get_if<double>(&v))
        return *d;
    throw InstanceMismatchError("value " + value_to_display(v) + " has no float meaning");
}

Quad value_as_quad(const GroupValue& v) {
    if (const auto* q = std::get_if<Rational>(&v))
        return q->convert_to<Quad>();
    if (const auto* d = std::get_if<double>(&v))
        return Quad(*d);
    throw InstanceMismatchError("value " + value_to_display(v) + " has no float meaning");
}

double double_root(double x, int m) {
    if (m % 2 == 0) {
        if (x < 0.0)
            throw DomainError("even-order root of a negative number");
        return std::pow(x, 1.0 / m);
    }
    return x < 0.0 ? -std::pow(-x, 1.0 / m) : std::pow(x, 1.0 / m);
}

Quad quad_root(const Quad& x, int m) {
    const Quad inv = Quad(1) / m;
    if (m % 2 == 0) {
        if (x < 0)
            throw DomainError("even-order root of a negative number");
        return pow(x, inv);
    }
    return x < 0 ? Quad(-pow(-x, inv)) : Quad(pow(x, inv));
}

Quad quad_pow(const Quad& x, int e) {
    Quad r = 1;
    for (int i = 0; i < e; ++i)
        r *= x;
    return r;
}

BigInt integer_nth_root_floor(const BigInt& a, int m) {
    if (a < 0)
        throw InvalidParameterError("nth root of negative integer");
    if (a == 0 || a == 1)
        return a;
    BigInt lo = 0, hi = a;
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        BigInt p = 1;
        bool over = false;
        for (int i = 0; i < m; ++i) {
            p *= mid;
            if (p > a) {
                over = true;
                break;
            }
        }
        if (over)
            hi = mid - 1;
        else
            lo = mid;
    }
    return lo;
}

// Exact rational m-th root when one exists.
std::optional<Rational> exact_root(const Rational& x, int m) {
    const bool negative = x < 0;
    if (negative && m % 2 == 0)
        throw DomainError("even-order root of a negative rational");
    const BigInt num = negative ? BigInt(-numerator(x)) : numerator(x);
    const BigInt den = denominator(x);
    const BigInt rn = integer_nth_root_floor(num, m);
    const BigInt rd = integer_nth_root_floor(den, m);
    BigInt pn = 1, pd = 1;
    for (int i = 0; i < m; ++i) {
        pn *= rn;
        pd *= rd;
    }
    if (pn != num || pd != den)
        return std::nullopt;
    Rational root(rn, rd);
    return negative ? Rational(-root) : root;
}

// Evaluates a scalar power-form monomial sum at a quad point.
Quad eval_sum_quad(const MonomialSum& sum, const Quad& x) {
    Quad acc = 0;
    for (const auto& c : sum.components()) {
        if (c.form != MonomialSpec::Form::Power)
            throw InvalidParameterError("equation candidates must use scalar power monomials");
        acc += value_as_quad(c.coefficient) * quad_pow(x, c.degree);
    }
    return acc;
}

double normalized_residual(const Quad& lhs, const Quad& rhs) {
    const Quad scale = std::max({Quad(1), Quad(abs(lhs)), Quad(abs(rhs))});
    return (abs(lhs - rhs) / scale).convert_to<double>();
}

template <typename Scalar>
std::vector<Scalar> newton_coefficients(const std::vector<Scalar>& xs,
                                        const std::vector<Scalar>& ys) {
    const std::size_t count = xs.size();
    std::vector<Scalar> dd = ys;
    for (std::size_t level = 1; level < count; ++level)
        for (std::size_t i = count - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
            if (i == level)
                break;
        }
    // expand dd_0 + (X - x_0)(dd_1 + (X - x_1)(...)) into monomial coefficients
    std::vector<Scalar> coeffs{dd[count - 1]};
    for (std::size_t i = count - 1; i-- > 0;) {
        std::vector<Scalar> next(coeffs.size() + 1, Scalar(0));
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            next[k + 1] += coeffs[k];
            next[k] -= xs[i] * coeffs[k];
        }
        next[0] += dd[i];
        coeffs = std::move(next);
    }
    return coeffs;
}

} // namespace

RadicalEquation RadicalEquation::make(Variant variant, int n, int m) {
    if (n < 1)
        throw InvalidParameterError("radical equation needs n >= 1");
    if (m < 2)
        throw InvalidParameterError("radical equation needs m >= 2");
    return RadicalEquation{variant, n, m};
}

SemigroupInstance RadicalEquation::characteristic_domain() const {
    return m % 2 == 0 ? SemigroupInstance::nonneg_half_line(PointRepr::Exact)
                      : SemigroupInstance::real_line(PointRepr::Exact);
}

EquationForm RadicalEquation::form() const {
    return variant == Variant::Monomial ? monomial_form(n) : polynomial_form(n);
}

ArcsineEquation ArcsineEquation::make(Variant variant, int n) {
    if (n < 1)
        throw InvalidParameterError("arcsine equation needs n >= 1");
    return ArcsineEquation{variant, n};
}

SemigroupInstance ArcsineEquation::characteristic_domain() const {
    return SemigroupInstance::nonpos_half_line(PointRepr::Float);
}

EquationForm ArcsineEquation::form() const {
    return variant == Variant::Monomial ? monomial_form(n) : polynomial_form(n);
}

std::string equation_name(const Equation& eq) {
    if (const auto* rad = std::get_if<RadicalEquation>(&eq))
        return rad->name();
    return std::get<ArcsineEquation>(eq).name();
}

int equation_degree(const Equation& eq) {
    if (const auto* rad = std::get_if<RadicalEquation>(&eq))
        return rad->n;
    return std::get<ArcsineEquation>(eq).n;
}

SectionPair power_root_pair(int m) {
    if (m < 2)
        throw InvalidParameterError("power-root pair needs m >= 2");
    SectionPair pair;
    pair.name = "power-root";
    pair.power = m;
    pair.target = m % 2 == 0 ? SemigroupInstance::nonneg_half_line(PointRepr::Exact)
                             : SemigroupInstance::real_line(PointRepr::Exact);
    pair.surjection = [m](const Value& u) -> SemigroupPoint {
        if (const auto* q = std::get_if<Rational>(&u))
            return rational_pow(*q, m);
        if (const auto* d = std::get_if<double>(&u)) {
            double r = 1.0;
            for (int i = 0; i < m; ++i)
                r *= *d;
            return r;
        }
        throw DomainError("power-root surjection needs a scalar argument");
    };
    pair.section = [m](const SemigroupPoint& x) -> Value {
        if (const auto* q = std::get_if<Rational>(&x)) {
            if (auto root = exact_root(*q, m))
                return *root;
            return double_root(q->convert_to<double>(), m);
        }
        if (const auto* d = std::get_if<double>(&x))
            return double_root(*d, m);
        throw DomainError("power-root section needs a scalar argument");
    };
    pair.in_domain = [](const Value& u) {
        if (const auto* d = std::get_if<double>(&u))
            return std::isfinite(*d);
        return std::holds_alternative<Rational>(u);
    };
    return pair;
}

SectionPair log_abs_sin_pair() {
    SectionPair pair;
    pair.name = "log-abs-sin";
    pair.target = SemigroupInstance::nonpos_half_line(PointRepr::Float);
    pair.in_domain = [](const Value& u) {
        const auto* d = std::get_if<double>(&u);
        return d && std::isfinite(*d) && std::fabs(std::remainder(*d, kPi)) > 1e-12;
    };
    pair.surjection = [in = pair.in_domain](const Value& u) -> SemigroupPoint {
        if (!in(u))
            throw DomainError("ln|sin u| is undefined at multiples of pi, got " +
                              value_to_display(u));
        const double s = std::fabs(std::sin(std::get<double>(u)));
        if (s == 0.0)
            throw DomainError("ln|sin u| is undefined at multiples of pi");
        return std::log(s);
    };
    pair.section = [](const SemigroupPoint& x) -> Value {
        const auto* d = std::get_if<double>(&x);
        if (!d || *d > 0.0)
            throw DomainError("arcsin(e^x) section needs x <= 0");
        return std::asin(std::exp(*d));
    };
    return pair;
}

namespace {

void validate_scalar_coefficients(const MonomialSum& coeffs, bool allow_float) {
    for (const auto& c : coeffs.components()) {
        if (c.form != MonomialSpec::Form::Power)
            throw InvalidParameterError("equation coefficients must be scalar power monomials");
        if (std::holds_alternative<Rational>(c.coefficient))
            continue;
        if (allow_float && std::holds_alternative<double>(c.coefficient))
            continue;
        throw InvalidParameterError("equation coefficient " + value_to_display(c.coefficient) +
                                    " is not admissible here");
    }
}

void validate_solution_degrees(const Equation& eq, const MonomialSum& coeffs) {
    const int n = equation_degree(eq);
    const bool monomial_variant =
        std::holds_alternative<RadicalEquation>(eq)
            ? std::get<RadicalEquation>(eq).variant == RadicalEquation::Variant::Monomial
            : std::get<ArcsineEquation>(eq).variant == ArcsineEquation::Variant::Monomial;
    if (monomial_variant) {
        if (coeffs.components().size() != 1 || coeffs.components().front().degree != n)
            throw InvalidParameterError("the monomial variant needs a single component of degree " +
                                        std::to_string(n));
    } else if (coeffs.max_degree() > n) {
        throw InvalidParameterError("coefficient degrees must not exceed n = " + std::to_string(n));
    }
}

} // namespace

CandidateSolution solve(const Equation& eq, const MonomialSum& coeffs) {
    validate_solution_degrees(eq, coeffs);
    CandidateSolution candidate;
    if (const auto* rad = std::get_if<RadicalEquation>(&eq)) {
        validate_scalar_coefficients(coeffs, false);
        candidate.body = CandidateSolution::Canonical{coeffs, "power-root", rad->m};
    } else {
        validate_scalar_coefficients(coeffs, true);
        candidate.body = CandidateSolution::Canonical{coeffs, "log-abs-sin", 0};
    }
    return candidate;
}

namespace {

struct PairSides {
    Quad lhs;
    Quad rhs;
};

// Direct evaluation of the composite equation at (u, v), in quad precision,
// for a canonical candidate.
PairSides canonical_sides(const Equation& eq, const MonomialSum& rho, double u, double v) {
    const auto binom = [](int order) { return pascal_row(order); };
    if (const auto* rad = std::get_if<RadicalEquation>(&eq)) {
        const int n = rad->n;
        const int m = rad->m;
        const auto f = [&](const Quad& w) { return eval_sum_quad(rho, quad_pow(w, m)); };
        const Quad x = quad_pow(Quad(u), m);
        const Quad y = quad_pow(Quad(v), m);
        if (rad->variant == RadicalEquation::Variant::Monomial) {
            const auto row = binom(n);
            Quad lhs = 0;
            for (int i = 0; i <= n; ++i) {
                const Quad w = quad_root(x + i * y, m);
                Quad term = row[static_cast<std::size_t>(i)].convert_to<Quad>() * f(w);
                lhs += ((n - i) % 2 != 0) ? -term : term;
            }
            // the right side samples f at v itself: f(v) = rho(v^m)
            return PairSides{lhs, factorial(n).convert_to<Quad>() * eval_sum_quad(rho, y)};
        }
        const auto row = binom(n + 1);
        Quad lhs = 0;
        for (int i = 1; i <= n + 1; ++i) {
            const Quad w = quad_root(x + i * y, m);
            Quad term = row[static_cast<std::size_t>(i)].convert_to<Quad>() * f(w);
            lhs += (i % 2 != 0) ? -term : term;
        }
        return PairSides{lhs, -eval_sum_quad(rho, x)};
    }

    const auto& arc = std::get<ArcsineEquation>(eq);
    const int n = arc.n;
    static const Quad qpi = acos(Quad(-1));
    const Quad su = sin(Quad(u));
    const Quad sv = sin(Quad(v));
    const auto arg_point = [&](int i) {
        const Quad a = abs(su * quad_pow(sv, i));
        if (a == 0)
            throw DomainError("arcsine argument degenerates to 0; grid touches a multiple of pi");
        if (a > 1)
            throw DomainError("arcsine argument above 1");
        const Quad w = asin(a);
        if (!(w > 0 && w <= qpi / 2))
            throw DomainError("arcsine argument left (0, pi/2]");
        return w;
    };
    const auto f = [&](const Quad& w) { return eval_sum_quad(rho, log(sin(w))); };
    if (arc.variant == ArcsineEquation::Variant::Monomial) {
        const auto row = binom(n);
        Quad lhs = 0;
        for (int i = 0; i <= n; ++i) {
            Quad term = row[static_cast<std::size_t>(i)].convert_to<Quad>() * f(arg_point(i));
            lhs += ((n - i) % 2 != 0) ? -term : term;
        }
        const Quad fv = eval_sum_quad(rho, log(abs(sv)));
        return PairSides{lhs, factorial(n).convert_to<Quad>() * fv};
    }
    const auto row = binom(n + 1);
    Quad lhs = 0;
    for (int i = 1; i <= n + 1; ++i) {
        Quad term = row[static_cast<std::size_t>(i)].convert_to<Quad>() * f(arg_point(i));
        lhs += (i % 2 != 0) ? -term : term;
    }
    const Quad fu = eval_sum_quad(rho, log(abs(su)));
    return PairSides{lhs, -fu};
}

// Same equation sides for a raw u-space table; sample points are computed in
// double arithmetic so they match required_points().
PairSides table_sides(const Equation& eq, const FunctionHandle& table, double u, double v) {
    const auto pts = required_points(eq, u, v);
    const auto f = [&](double w) { return value_as_quad(table.evaluate(SemigroupPoint(w))); };
    if (const auto* rad = std::get_if<RadicalEquation>(&eq)) {
        if (rad->variant == RadicalEquation::Variant::Monomial) {
            const auto row = pascal_row(rad->n);
            Quad lhs = 0;
            for (int i = 0; i <= rad->n; ++i) {
                Quad term =
                    row[static_cast<std::size_t>(i)].convert_to<Quad>() * f(pts[static_cast<std::size_t>(i)]);
                lhs += ((rad->n - i) % 2 != 0) ? -term : term;
            }
            return PairSides{lhs, factorial(rad->n).convert_to<Quad>() * f(pts.back())};
        }
        const auto row = pascal_row(rad->n + 1);
        Quad lhs = 0;
        for (int i = 1; i <= rad->n + 1; ++i) {
            Quad term =
                row[static_cast<std::size_t>(i)].convert_to<Quad>() * f(pts[static_cast<std::size_t>(i)]);
            lhs += (i % 2 != 0) ? -term : term;
        }
        return PairSides{lhs, -f(pts.front())};
    }
    const auto& arc = std::get<ArcsineEquation>(eq);
    if (arc.variant == ArcsineEquation::Variant::Monomial) {
        const auto row = pascal_row(arc.n);
        Quad lhs = 0;
        for (int i = 0; i <= arc.n; ++i) {
            Quad term =
                row[static_cast<std::size_t>(i)].convert_to<Quad>() * f(pts[static_cast<std::size_t>(i)]);
            lhs += ((arc.n - i) % 2 != 0) ? -term : term;
        }
        return PairSides{lhs, factorial(arc.n).convert_to<Quad>() * f(pts.back())};
    }
    const auto row = pascal_row(arc.n + 1);
    Quad lhs = 0;
    for (int i = 1; i <= arc.n + 1; ++i) {
        Quad term =
            row[static_cast<std::size_t>(i)].convert_to<Quad>() * f(pts[static_cast<std::size_t>(i)]);
        lhs += (i % 2 != 0) ? -term : term;
    }
    return PairSides{lhs, -f(pts.front())};
}

VerifyReport verify_exact_characteristic(const RadicalEquation& eq,
                                         const CandidateSolution& candidate, const Grid& grid) {
    const SemigroupInstance domain = eq.characteristic_domain();
    const AbelianGroup group = AbelianGroup::exact_rational(std::max(6, eq.n + 1));
    for (const auto& [x, y] : grid) {
        if (!domain.contains(x) || !domain.contains(y))
            throw DomainError("characteristic grid point outside " + domain.describe() +
                              " (even m admits only nonnegative points)");
    }

    FunctionHandle rho = [&]() -> FunctionHandle {
        if (const auto* canonical = candidate.canonical()) {
            if (canonical->pair_name != "power-root" || canonical->m != eq.m)
                throw InvalidParameterError("candidate was built for a different section pair");
            validate_scalar_coefficients(canonical->rho, false);
            return FunctionHandle::closed_form(domain, group, canonical->rho);
        }
        const auto& raw = *candidate.raw();
        FunctionHandle::Table table;
        if (raw.space == CandidateSolution::TableSpace::Characteristic) {
            table = raw.table;
        } else {
            std::map<Rational, Rational> merged;
            for (const auto& [u, value] : raw.table) {
                const auto* uq = std::get_if<Rational>(&u);
                const auto* vq = std::get_if<Rational>(&value);
                if (!uq || !vq)
                    throw InvalidParameterError("exact verification needs rational table samples");
                const Rational x = rational_pow(*uq, eq.m);
                auto [it, inserted] = merged.emplace(x, *vq);
                if (!inserted && it->second != *vq)
                    throw InvalidSpecError("u-space table is inconsistent at x = " +
                                           rational_to_string(x));
            }
            for (auto& [x, value] : merged)
                table.emplace_back(x, value);
        }
        return FunctionHandle::sampled(domain, group, std::move(table));
    }();

    const EquationForm form = eq.form();
    VerifyReport report;
    for (const auto& [x, y] : grid) {
        GroupValue lhs, rhs;
        try {
            lhs = form.lhs(rho, x, y);
            rhs = form.rhs(group, rho.evaluate(x), rho.evaluate(y));
        } catch (const MissingSampleError&) {
            ++report.skipped_pairs;
            continue;
        }
        ++report.checked_pairs;
        const double residual = group.residual(lhs, rhs);
        report.residuals.push_back(residual);
        report.side_scales.push_back(1.0);
        report.max_residual = std::max(report.max_residual, residual);
        if (!group.equal(lhs, rhs) && report.holds) {
            report.holds = false;
            report.witness = VerifyWitness{x, y, lhs, rhs};
        }
    }
    return report;
}

VerifyReport verify_direct_float(const Equation& eq, const CandidateSolution& candidate,
                                 const Grid& grid, double tol) {
    const bool arcsine = std::holds_alternative<ArcsineEquation>(eq);
    if (arcsine) {
        const auto pair = log_abs_sin_pair();
        for (const auto& [u, v] : grid)
            if (!pair.in_domain(u) || !pair.in_domain(v))
                throw DomainError("float grid touches a multiple of pi");
    }

    std::optional<FunctionHandle> table_handle;
    const MonomialSum* rho = nullptr;
    if (const auto* canonical = candidate.canonical()) {
        const std::string expected = arcsine ? "log-abs-sin" : "power-root";
        if (canonical->pair_name != expected)
            throw InvalidParameterError("candidate was built for a different section pair");
        if (!arcsine && canonical->m != std::get<RadicalEquation>(eq).m)
            throw InvalidParameterError("candidate was built for a different root order");
        rho = &canonical->rho;
    } else {
        const auto& raw = *candidate.raw();
        if (raw.space != CandidateSolution::TableSpace::U)
            throw InvalidParameterError("direct-float verification needs a u-space table");
        FunctionHandle::Table table;
        table.reserve(raw.table.size());
        for (const auto& [u, value] : raw.table)
            table.emplace_back(SemigroupPoint(value_as_double(u)), GroupValue(value_as_double(value)));
        table_handle = FunctionHandle::sampled(SemigroupInstance::real_line(PointRepr::Float),
                                               AbelianGroup::float_tolerance(tol),
                                               std::move(table));
    }

    VerifyReport report;
    for (const auto& [up, vp] : grid) {
        const double u = value_as_double(up);
        const double v = value_as_double(vp);
        PairSides sides;
        try {
            sides = rho ? canonical_sides(eq, *rho, u, v) : table_sides(eq, *table_handle, u, v);
        } catch (const MissingSampleError&) {
            ++report.skipped_pairs;
            continue;
        }
        ++report.checked_pairs;
        const double residual = normalized_residual(sides.lhs, sides.rhs);
        report.residuals.push_back(residual);
        report.side_scales.push_back(
            std::max({Quad(1), Quad(abs(sides.lhs)), Quad(abs(sides.rhs))}).convert_to<double>());
        report.max_residual = std::max(report.max_residual, residual);
        if (residual > tol && report.holds) {
            report.holds = false;
            report.witness = VerifyWitness{u, v, sides.lhs.convert_to<double>(),
                                           sides.rhs.convert_to<double>()};
        }
    }
    return report;
}

} // namespace

VerifyReport verify(const Equation& eq, const CandidateSolution& candidate, const Grid& grid,
                    VerifyMode mode, double tol) {
    if (grid.empty())
        throw InvalidParameterError("verification grid must be nonempty");
    if (mode == VerifyMode::ExactCharacteristic) {
        const auto* rad = std::get_if<RadicalEquation>(&eq);
        if (!rad)
            throw InvalidParameterError(
                "exact-characteristic mode applies to the radical equations only");
        return verify_exact_characteristic(*rad, candidate, grid);
    }
    return verify_direct_float(eq, candidate, grid, tol);
}

std::vector<double> required_points(const Equation& eq, double u, double v) {
    std::vector<double> pts;
    if (const auto* rad = std::get_if<RadicalEquation>(&eq)) {
        double x = 1.0, y = 1.0;
        for (int i = 0; i < rad->m; ++i) {
            x *= u;
            y *= v;
        }
        if (rad->variant == RadicalEquation::Variant::Monomial) {
            for (int i = 0; i <= rad->n; ++i)
                pts.push_back(double_root(x + i * y, rad->m));
            pts.push_back(v);
        } else {
            pts.push_back(u);
            for (int i = 1; i <= rad->n + 1; ++i)
                pts.push_back(double_root(x + i * y, rad->m));
        }
        return pts;
    }
    const auto& arc = std::get<ArcsineEquation>(eq);
    const double su = std::sin(u);
    const double sv = std::sin(v);
    const auto arg_point = [&](int i) {
        double p = su;
        for (int k = 0; k < i; ++k)
            p *= sv;
        return std::asin(std::fabs(p));
    };
    if (arc.variant == ArcsineEquation::Variant::Monomial) {
        for (int i = 0; i <= arc.n; ++i)
            pts.push_back(arg_point(i));
        pts.push_back(v);
    } else {
        pts.push_back(u);
        for (int i = 1; i <= arc.n + 1; ++i)
            pts.push_back(arg_point(i));
    }
    return pts;
}

TrivialityReport triviality_check(const ArcsineEquation& eq, const CandidateSolution& candidate,
                                  const std::vector<double>& samples, double tol) {
    if (candidate.extension.empty())
        throw NotApplicableError("candidate defines no value at any multiple of pi");
    if (!candidate.extension.count(0))
        throw NotApplicableError(
            "the collapsed equation evaluates f at arcsin 0 = 0; the extension must define f(0)");

    const AbelianGroup group = AbelianGroup::float_tolerance(tol);
    const auto pair = log_abs_sin_pair();
    const auto eval = [&](double u) -> std::optional<double> {
        if (const auto* canonical = candidate.canonical()) {
            const Quad x = log(abs(sin(Quad(u))));
            return eval_sum_quad(canonical->rho, x).convert_to<double>();
        }
        const auto& raw = *candidate.raw();
        for (const auto& [key, value] : raw.table)
            if (std::fabs(value_as_double(key) - u) <= 1e-9 * std::max(1.0, std::fabs(u)))
                return value_as_double(value);
        return std::nullopt;
    };

    TrivialityReport report;
    report.applicable = true;
    const BigInt nf = factorial(eq.n);

    if (eq.variant == ArcsineEquation::Variant::Monomial) {
        // u = k*pi collapses the left side to 0, forcing (n!) f(v) = 0 at every v.
        const auto check_value = [&](const Value& at, double fv) {
            ++report.samples_checked;
            const double forced = nf.convert_to<double>() * fv;
            if (!group.equal(GroupValue(forced), group.zero())) {
                report.flagged = true;
                report.violations.push_back(TrivialityViolation{at, forced, 0.0});
            }
        };
        for (double v : samples) {
            if (!pair.in_domain(Value(v)))
                throw DomainError("triviality sample lies at a multiple of pi");
            if (auto fv = eval(v))
                check_value(Value(v), *fv);
        }
        for (const auto& [k, value] : candidate.extension)
            check_value(Value(k * kPi), value_as_double(value));
        return report;
    }

    // v = k*pi collapses the polynomial variant to f(u) - f(0) = 0.
    const double f0 = value_as_double(candidate.extension.at(0));
    const auto check_value = [&](const Value& at, double fu) {
        ++report.samples_checked;
        if (!group.equal(GroupValue(fu), GroupValue(f0))) {
            report.flagged = true;
            report.violations.push_back(TrivialityViolation{at, fu, f0});
        }
    };
    for (double u : samples) {
        if (!pair.in_domain(Value(u)))
            throw DomainError("triviality sample lies at a multiple of pi");
        if (auto fu = eval(u))
            check_value(Value(u), *fu);
    }
    for (const auto& [k, value] : candidate.extension)
        check_value(Value(k * kPi), value_as_double(value));
    return report;
}

MonomialSum recover(const Equation& eq, const FunctionHandle::Table& u_table, double tol) {
    const int n = equation_degree(eq);

    if (const auto* rad = std::get_if<RadicalEquation>(&eq)) {
        std::map<Rational, Rational> merged;
        for (const auto& [u, value] : u_table) {
            const auto* uq = std::get_if<Rational>(&u);
            const auto* vq = std::get_if<Rational>(&value);
            if (!uq || !vq)
                throw InvalidParameterError("radical recovery needs rational samples");
            const Rational x = rational_pow(*uq, rad->m);
            auto [it, inserted] = merged.emplace(x, *vq);
            if (!inserted && it->second != *vq)
                throw DecompositionError("table is inconsistent in characteristic coordinates at x = " +
                                         rational_to_string(x));
        }
        if (!merged.count(Rational(0)))
            throw InvalidParameterError("recovery grid must contain u = 0");
        if (merged.size() < static_cast<std::size_t>(n) + 1)
            throw InvalidParameterError("recovery needs at least n + 1 distinct points");

        std::vector<Rational> xs, ys;
        for (const auto& [x, y] : merged) {
            if (xs.size() < static_cast<std::size_t>(n) + 1) {
                xs.push_back(x);
                ys.push_back(y);
            }
        }
        const auto coeffs = newton_coefficients(xs, ys);
        std::vector<MonomialSpec> components;
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            if (coeffs[j] != 0)
                components.push_back(MonomialSpec::power(static_cast<int>(j), coeffs[j]));
        MonomialSum sum{std::move(components)};

        for (const auto& [x, y] : merged) {
            Rational value = 0;
            for (const auto& c : sum.components())
                value += std::get<Rational>(c.coefficient) * rational_pow(x, c.degree);
            if (value != y)
                throw DecompositionError("candidate is not a solution: mismatch at x = " +
                                         rational_to_string(x));
        }
        return sum;
    }

    const auto pair = log_abs_sin_pair();
    std::map<double, double> merged;
    for (const auto& [u, value] : u_table) {
        const double ud = value_as_double(u);
        if (!pair.in_domain(Value(ud)))
            throw DomainError("recovery sample lies at a multiple of pi");
        const double x = std::log(std::fabs(std::sin(ud)));
        auto [it, inserted] = merged.emplace(x, value_as_double(value));
        if (!inserted && std::fabs(it->second - value_as_double(value)) >
                             tol * std::max(1.0, std::fabs(it->second)))
            throw DecompositionError("table is inconsistent in characteristic coordinates");
    }
    const bool has_zero = std::any_of(merged.begin(), merged.end(),
                                      [](const auto& kv) { return std::fabs(kv.first) <= 1e-12; });
    if (!has_zero)
        throw InvalidParameterError("recovery grid must contain a point with |sin u| = 1");
    if (merged.size() < static_cast<std::size_t>(n) + 1)
        throw InvalidParameterError("recovery needs at least n + 1 distinct points");

    std::vector<double> xs, ys;
    for (const auto& [x, y] : merged) {
        if (xs.size() < static_cast<std::size_t>(n) + 1) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    const auto coeffs = newton_coefficients(xs, ys);
    std::vector<MonomialSpec> components;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (coeffs[j] != 0.0)
            components.push_back(MonomialSpec::power(static_cast<int>(j), coeffs[j]));
    MonomialSum sum{std::move(components)};

    const AbelianGroup group = AbelianGroup::float_tolerance(tol);
    for (const auto& [x, y] : merged) {
        double value = 0.0;
        for (const auto& c : sum.components()) {
            double xp = 1.0;
            for (int i = 0; i < c.degree; ++i)
                xp *= x;
            value += std::get<double>(c.coefficient) * xp;
        }
        if (!group.equal(GroupValue(value), GroupValue(y)))
            throw DecompositionError("candidate is not a solution: mismatch at x = " +
                                     std::to_string(x));
    }
    return sum;
}

} // namespace frechet
