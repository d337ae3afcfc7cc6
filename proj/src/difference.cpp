#include "frechet/difference.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace frechet {

namespace {

double value_as_double(const GroupValue& v) {
    if (const auto* q = std::get_if<Rational>(&v))
        return q->convert_to<double>();
    if (const auto* d = std::get_if<double>(&v))
        return *d;
    throw InstanceMismatchError("value " + value_to_display(v) + " has no float meaning");
}

std::int64_t mod_pow(std::int64_t base, int exp, std::int64_t p) {
    __int128 r = 1;
    __int128 b = ((base % p) + p) % p;
    while (exp > 0) {
        if (exp & 1)
            r = (r * b) % p;
        b = (b * b) % p;
        exp >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

double double_pow(double base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

// Walks all multi-indices of length `degree` over {0..dim-1} in row-major order.
bool advance_index(std::vector<int>& idx, int dim) {
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
        if (++*it < dim)
            return true;
        *it = 0;
    }
    return false;
}

} // namespace

MonomialSpec MonomialSpec::power(int degree, GroupValue coefficient) {
    if (degree < 0)
        throw InvalidSpecError("monomial degree must be nonnegative");
    MonomialSpec spec;
    spec.form = Form::Power;
    spec.degree = degree;
    spec.coefficient = std::move(coefficient);
    return spec;
}

MonomialSpec MonomialSpec::tensor(int degree, int dim, const std::vector<Rational>& dense) {
    if (degree < 0)
        throw InvalidSpecError("monomial degree must be nonnegative");
    if (dim < 1)
        throw InvalidSpecError("tensor dimension must be positive");
    std::size_t expected = 1;
    for (int i = 0; i < degree; ++i)
        expected *= static_cast<std::size_t>(dim);
    if (dense.size() != expected)
        throw InvalidSpecError("tensor data has " + std::to_string(dense.size()) +
                               " entries, expected dim^degree = " + std::to_string(expected));

    // Fold onto sorted representatives, verifying symmetry along the way.
    std::map<std::vector<int>, std::pair<Rational, BigInt>> folded;
    std::vector<int> idx(static_cast<std::size_t>(degree), 0);
    std::size_t flat = 0;
    do {
        std::vector<int> sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        auto [it, inserted] = folded.emplace(sorted, std::make_pair(dense[flat], BigInt(0)));
        if (!inserted && it->second.first != dense[flat])
            throw InvalidSpecError("tensor is not symmetric at index permutation " +
                                   std::to_string(flat));
        it->second.second += 1;
        ++flat;
    } while (degree > 0 && advance_index(idx, dim));

    std::vector<TensorEntry> entries;
    entries.reserve(folded.size());
    for (auto& [key, val] : folded) {
        if (val.first == 0)
            continue;
        entries.push_back(TensorEntry{key, val.first, val.second});
    }
    MonomialSpec spec;
    spec.form = Form::Tensor;
    spec.degree = degree;
    spec.tensor_dim = dim;
    spec.entries = std::move(entries);
    return spec;
}

MonomialSpec MonomialSpec::tensor_from_entries(int degree, int dim,
                                               std::vector<TensorEntry> entries) {
    MonomialSpec spec;
    spec.form = Form::Tensor;
    spec.degree = degree;
    spec.tensor_dim = dim;
    for (auto& e : entries) {
        if (static_cast<int>(e.index.size()) != degree ||
            !std::is_sorted(e.index.begin(), e.index.end()))
            throw InvalidSpecError("tensor entry index must be sorted and of length degree");
        for (int i : e.index)
            if (i < 0 || i >= dim)
                throw InvalidSpecError("tensor entry index out of range");
    }
    spec.entries = std::move(entries);
    return spec;
}

std::vector<Rational> MonomialSpec::dense_tensor() const {
    if (form != Form::Tensor)
        throw InvalidSpecError("dense_tensor on a power-form monomial");
    std::size_t size = 1;
    for (int i = 0; i < degree; ++i)
        size *= static_cast<std::size_t>(tensor_dim);
    std::vector<Rational> dense(size, Rational(0));
    std::vector<int> idx(static_cast<std::size_t>(degree), 0);
    std::size_t flat = 0;
    do {
        std::vector<int> sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& e : entries)
            if (e.index == sorted) {
                dense[flat] = e.value;
                break;
            }
        ++flat;
    } while (degree > 0 && advance_index(idx, tensor_dim));
    return dense;
}

bool MonomialSpec::is_zero() const {
    if (form == Form::Tensor)
        return entries.empty();
    if (const auto* q = std::get_if<Rational>(&coefficient))
        return *q == 0;
    if (const auto* d = std::get_if<double>(&coefficient))
        return *d == 0.0;
    if (const auto* m = std::get_if<ModValue>(&coefficient))
        return m->value == 0;
    const auto& vec = std::get<RatVec>(coefficient);
    return std::all_of(vec.begin(), vec.end(), [](const Rational& c) { return c == 0; });
}

GroupValue MonomialSpec::evaluate(const SemigroupInstance& domain, const AbelianGroup& codomain,
                                  const SemigroupPoint& x) const {
    if (!domain.contains(x))
        throw DomainError("monomial evaluated outside its domain at " + value_to_display(x));

    if (form == Form::Tensor) {
        if (domain.kind() != SemigroupKind::RationalVector || domain.dim() != tensor_dim)
            throw InstanceMismatchError("tensor monomial needs a rational-vector domain of dim " +
                                        std::to_string(tensor_dim));
        if (codomain.kind() != GroupKind::ExactRational)
            throw InstanceMismatchError("tensor monomial needs the exact-rational codomain");
        const auto& coords = std::get<RatVec>(x);
        Rational acc = 0;
        for (const auto& e : entries) {
            Rational term = e.value;
            for (int i : e.index)
                term *= coords[static_cast<std::size_t>(i)];
            acc += Rational(e.multiplicity) * term;
        }
        return acc;
    }

    if (degree == 0) {
        if (codomain.contains(coefficient))
            return coefficient;
        // rational constants are admissible in the float codomain
        if (codomain.kind() == GroupKind::FloatTolerance &&
            std::holds_alternative<Rational>(coefficient))
            return std::get<Rational>(coefficient).convert_to<double>();
        throw InstanceMismatchError("constant coefficient outside the codomain");
    }

    switch (domain.kind()) {
    case SemigroupKind::RealLine:
    case SemigroupKind::NonnegHalfLine:
    case SemigroupKind::NonposHalfLine: {
        if (const auto* q = std::get_if<Rational>(&x)) {
            const Rational xj = rational_pow(*q, degree);
            switch (codomain.kind()) {
            case GroupKind::ExactRational:
                return std::get<Rational>(coefficient) * xj;
            case GroupKind::RationalVector: {
                RatVec out = std::get<RatVec>(coefficient);
                for (auto& c : out)
                    c *= xj;
                return out;
            }
            case GroupKind::FloatTolerance:
                return value_as_double(coefficient) * xj.convert_to<double>();
            case GroupKind::ModP:
                break;
            }
            throw InstanceMismatchError("power monomial on a rational point needs a rational or "
                                        "float codomain");
        }
        const double xd = std::get<double>(x);
        if (codomain.kind() != GroupKind::FloatTolerance)
            throw InstanceMismatchError("power monomial on a float point needs the float codomain");
        return value_as_double(coefficient) * double_pow(xd, degree);
    }
    case SemigroupKind::ModP: {
        if (codomain.kind() != GroupKind::ModP || codomain.modulus() != domain.modulus())
            throw InstanceMismatchError("mod-p monomial needs the matching mod-p codomain");
        const auto& pt = std::get<ModValue>(x);
        const std::int64_t xj = mod_pow(pt.value, degree, domain.modulus());
        const std::int64_t c = std::get<ModValue>(coefficient).value;
        return ModValue{domain.modulus(),
                        static_cast<std::int64_t>((static_cast<__int128>(c) * xj) % domain.modulus())};
    }
    case SemigroupKind::RationalVector:
        throw InstanceMismatchError("power monomial of positive degree is not defined on a "
                                    "vector domain; use a tensor form");
    }
    throw Error("unreachable");
}

MonomialSum::MonomialSum(std::vector<MonomialSpec> components) : components_(std::move(components)) {
    std::sort(components_.begin(), components_.end(),
              [](const MonomialSpec& a, const MonomialSpec& b) { return a.degree < b.degree; });
    for (std::size_t i = 1; i < components_.size(); ++i)
        if (components_[i - 1].degree == components_[i].degree)
            throw InvalidSpecError("monomial sum with duplicate degree " +
                                   std::to_string(components_[i].degree));
}

int MonomialSum::max_degree() const {
    return components_.empty() ? -1 : components_.back().degree;
}

const MonomialSpec* MonomialSum::component_of_degree(int degree) const {
    for (const auto& c : components_)
        if (c.degree == degree)
            return &c;
    return nullptr;
}

bool MonomialSum::is_zero() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const MonomialSpec& c) { return c.is_zero(); });
}

GroupValue MonomialSum::evaluate(const SemigroupInstance& domain, const AbelianGroup& codomain,
                                 const SemigroupPoint& x) const {
    GroupValue acc = codomain.zero();
    for (const auto& c : components_)
        acc = codomain.add(acc, c.evaluate(domain, codomain, x));
    return acc;
}

FunctionHandle::FunctionHandle(SemigroupInstance domain, AbelianGroup codomain,
                               std::variant<MonomialSum, Table, NativeFn> body)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), body_(std::move(body)) {}

FunctionHandle FunctionHandle::closed_form(SemigroupInstance domain, AbelianGroup codomain,
                                           MonomialSum sum) {
    return FunctionHandle(std::move(domain), std::move(codomain), std::move(sum));
}

FunctionHandle FunctionHandle::sampled(SemigroupInstance domain, AbelianGroup codomain,
                                       Table table) {
    for (const auto& [point, value] : table) {
        if (!domain.contains(point))
            throw DomainError("table key " + value_to_display(point) + " outside " +
                              domain.describe());
        if (!codomain.contains(value))
            throw InstanceMismatchError("table value " + value_to_display(value) + " outside " +
                                        codomain.describe());
    }
    for (std::size_t i = 0; i < table.size(); ++i)
        for (std::size_t j = i + 1; j < table.size(); ++j)
            if (domain.equal(table[i].first, table[j].first))
                throw InvalidSpecError("table keys are not pairwise distinct at " +
                                       value_to_display(table[i].first));
    return FunctionHandle(std::move(domain), std::move(codomain), std::move(table));
}

FunctionHandle FunctionHandle::native(SemigroupInstance domain, AbelianGroup codomain, NativeFn fn) {
    return FunctionHandle(std::move(domain), std::move(codomain), std::move(fn));
}

const MonomialSum* FunctionHandle::closed_form_body() const {
    return std::get_if<MonomialSum>(&body_);
}

const FunctionHandle::Table* FunctionHandle::table_body() const {
    return std::get_if<Table>(&body_);
}

void FunctionHandle::set_lift_provenance(std::shared_ptr<const FunctionHandle> rho,
                                         std::string pair_name) {
    characteristic_ = std::move(rho);
    lifted_through_ = std::move(pair_name);
}

GroupValue FunctionHandle::evaluate(const SemigroupPoint& x) const {
    if (const auto* sum = std::get_if<MonomialSum>(&body_))
        return sum->evaluate(domain_, codomain_, x);
    if (const auto* fn = std::get_if<NativeFn>(&body_))
        return (*fn)(x);

    const auto& table = std::get<Table>(body_);
    for (const auto& [point, value] : table)
        if (point == x)
            return value;
    // Float keys admit a tight nearest-match window; recomputed grid points
    // may differ from stored keys in the last few ulps.
    if (const auto* xd = std::get_if<double>(&x)) {
        const Table::value_type* best = nullptr;
        double best_gap = 1e-9 * std::max(1.0, std::fabs(*xd));
        for (const auto& entry : table) {
            if (const auto* kd = std::get_if<double>(&entry.first)) {
                const double gap = std::fabs(*kd - *xd);
                if (gap <= best_gap) {
                    best_gap = gap;
                    best = &entry;
                }
            }
        }
        if (best)
            return best->second;
    }
    throw MissingSampleError("no sample at " + value_to_display(x));
}

GroupValue forward_difference(const FunctionHandle& rho, int order, const SemigroupPoint& x,
                              const SemigroupPoint& y) {
    if (order < 0)
        throw InvalidParameterError("difference order must be nonnegative");
    const auto& domain = rho.domain();
    if (!domain.contains(x) || !domain.contains(y))
        throw DomainError("difference arguments outside " + domain.describe());

    const auto binomials = pascal_row(order);
    const auto& group = rho.codomain();
    GroupValue acc = group.zero();
    for (int i = 0; i <= order; ++i) {
        const SemigroupPoint point = domain.add(x, domain.scale(i, y));
        GroupValue term = group.scale(binomials[static_cast<std::size_t>(i)], rho.evaluate(point));
        if ((order - i) % 2 != 0)
            term = group.negate(term);
        acc = group.add(acc, term);
    }
    return acc;
}

FunctionHandle first_difference(const FunctionHandle& rho, const SemigroupPoint& step) {
    const auto domain = rho.domain();
    const auto codomain = rho.codomain();
    auto body = std::make_shared<FunctionHandle>(rho);
    auto step_copy = step;
    return FunctionHandle::native(domain, codomain, [=](const SemigroupPoint& x) {
        return codomain.subtract(body->evaluate(domain.add(x, step_copy)), body->evaluate(x));
    });
}

FunctionHandle subtract(const FunctionHandle& f, const FunctionHandle& g) {
    if (!f.domain().same_instance(g.domain()) || !f.codomain().same_instance(g.codomain()))
        throw InstanceMismatchError("subtracting handles over different instances");
    const auto codomain = f.codomain();
    auto lhs = std::make_shared<FunctionHandle>(f);
    auto rhs = std::make_shared<FunctionHandle>(g);
    return FunctionHandle::native(f.domain(), codomain, [=](const SemigroupPoint& x) {
        return codomain.subtract(lhs->evaluate(x), rhs->evaluate(x));
    });
}

namespace {

CheckResult run_pair_check(
    const FunctionHandle& rho, const Grid& grid,
    const std::function<std::pair<GroupValue, GroupValue>(const SemigroupPoint&,
                                                          const SemigroupPoint&)>& sides) {
    if (grid.empty())
        throw InvalidParameterError("verification grid must be nonempty");
    CheckResult result;
    const auto& group = rho.codomain();
    for (const auto& [x, y] : grid) {
        std::pair<GroupValue, GroupValue> lr;
        try {
            lr = sides(x, y);
        } catch (const MissingSampleError&) {
            ++result.pairs_skipped;
            continue;
        }
        ++result.pairs_checked;
        result.max_residual = std::max(result.max_residual, group.residual(lr.first, lr.second));
        if (!group.equal(lr.first, lr.second) && result.holds) {
            result.holds = false;
            result.witness = CheckWitness{x, y, lr.first, lr.second};
        }
    }
    return result;
}

} // namespace

CheckResult check_monomial(const FunctionHandle& rho, int degree, const Grid& grid) {
    if (degree < 0)
        throw InvalidParameterError("monomial degree must be nonnegative");
    if (degree > rho.codomain().divisibility_bound())
        throw InvalidParameterError("monomial degree exceeds the codomain divisibility bound");
    const BigInt jf = factorial(degree);
    const auto& group = rho.codomain();
    return run_pair_check(rho, grid, [&](const SemigroupPoint& x, const SemigroupPoint& y) {
        return std::make_pair(forward_difference(rho, degree, x, y),
                              group.scale(jf, rho.evaluate(y)));
    });
}

CheckResult check_polynomial(const FunctionHandle& rho, int degree, const Grid& grid) {
    if (degree < 0)
        throw InvalidParameterError("polynomial degree must be nonnegative");
    const auto& group = rho.codomain();
    return run_pair_check(rho, grid, [&](const SemigroupPoint& x, const SemigroupPoint& y) {
        return std::make_pair(forward_difference(rho, degree + 1, x, y), group.zero());
    });
}

FunctionHandle make_monomial(const SemigroupInstance& domain, const AbelianGroup& codomain,
                             const MonomialSpec& spec) {
    return FunctionHandle::closed_form(domain, codomain, MonomialSum({spec}));
}

FunctionHandle make_polynomial(const SemigroupInstance& domain, const AbelianGroup& codomain,
                               const MonomialSum& sum) {
    return FunctionHandle::closed_form(domain, codomain, sum);
}

namespace {

// c = v / probe^degree in the codomain, where probe is a scalar domain point.
GroupValue divide_by_probe_power(const AbelianGroup& codomain, const GroupValue& v,
                                 const SemigroupPoint& probe, int degree) {
    if (const auto* q = std::get_if<Rational>(&probe)) {
        const Rational factor = rational_pow(*q, degree);
        switch (codomain.kind()) {
        case GroupKind::ExactRational:
            return std::get<Rational>(v) / factor;
        case GroupKind::RationalVector: {
            RatVec out = std::get<RatVec>(v);
            for (auto& c : out)
                c /= factor;
            return out;
        }
        case GroupKind::FloatTolerance:
            return std::get<double>(v) / factor.convert_to<double>();
        case GroupKind::ModP:
            break;
        }
        throw InstanceMismatchError("cannot divide this codomain by a rational probe power");
    }
    if (const auto* d = std::get_if<double>(&probe))
        return std::get<double>(v) / double_pow(*d, degree);
    const auto& m = std::get<ModValue>(probe);
    const std::int64_t factor = mod_pow(m.value, degree, m.modulus);
    const std::int64_t inv = mod_inverse(factor, m.modulus);
    return ModValue{m.modulus, static_cast<std::int64_t>(
                                   (static_cast<__int128>(inv) * std::get<ModValue>(v).value) %
                                   m.modulus)};
}

SemigroupPoint extraction_probe(const SemigroupInstance& domain) {
    switch (domain.kind()) {
    case SemigroupKind::RealLine:
    case SemigroupKind::NonnegHalfLine:
        return domain.repr() == PointRepr::Exact ? SemigroupPoint(Rational(1)) : SemigroupPoint(1.0);
    case SemigroupKind::NonposHalfLine:
        return domain.repr() == PointRepr::Exact ? SemigroupPoint(Rational(-1))
                                                 : SemigroupPoint(-1.0);
    case SemigroupKind::ModP:
        return ModValue{domain.modulus(), 1};
    case SemigroupKind::RationalVector:
        throw InvalidParameterError("no scalar probe on a vector domain");
    }
    throw Error("unreachable");
}

// T(e_{i_1}, ..., e_{i_j}) = (1/j!) sum_{S subset of [j]} (-1)^(j-|S|) rho(sum_{k in S} e_{i_k})
MonomialSpec extract_tensor_component(const FunctionHandle& current, int degree) {
    const auto& domain = current.domain();
    const auto& group = current.codomain();
    const int dim = domain.dim();

    std::vector<MonomialSpec::TensorEntry> entries;
    std::vector<int> index(static_cast<std::size_t>(degree), 0);
    while (true) {
        if (std::is_sorted(index.begin(), index.end())) {
            GroupValue acc = group.zero();
            for (unsigned mask = 0; mask < (1u << degree); ++mask) {
                RatVec point(static_cast<std::size_t>(dim), Rational(0));
                int popcount = 0;
                for (int k = 0; k < degree; ++k)
                    if (mask & (1u << k)) {
                        point[static_cast<std::size_t>(index[static_cast<std::size_t>(k)])] += 1;
                        ++popcount;
                    }
                GroupValue term = current.evaluate(SemigroupPoint(point));
                if ((degree - popcount) % 2 != 0)
                    term = group.negate(term);
                acc = group.add(acc, term);
            }
            const Rational value = std::get<Rational>(group.divide_by_factorial(acc, degree));
            if (value != 0) {
                // multiplicity = degree! / prod (repeat counts)!
                BigInt mult = factorial(degree);
                int run = 1;
                for (std::size_t k = 1; k <= index.size(); ++k) {
                    if (k < index.size() && index[k] == index[k - 1]) {
                        ++run;
                        continue;
                    }
                    mult /= factorial(run);
                    run = 1;
                }
                entries.push_back(MonomialSpec::TensorEntry{index, value, mult});
            }
        }
        if (!advance_index(index, dim))
            break;
    }
    return MonomialSpec::tensor_from_entries(degree, dim, std::move(entries));
}

} // namespace

MonomialSum decompose(const FunctionHandle& rho, int degree, const Grid& grid) {
    const auto& domain = rho.domain();
    const auto& group = rho.codomain();
    if (degree < 0)
        throw InvalidParameterError("decomposition degree must be nonnegative");
    if (degree > group.divisibility_bound())
        throw UnsupportedDivisionError("decomposition degree exceeds the divisibility bound of " +
                                       group.describe());

    const auto poly_check = check_polynomial(rho, degree, grid);
    if (!poly_check.holds)
        throw DecompositionError(
            "input is not a degree-" + std::to_string(degree) + " polynomial; witness x = " +
            value_to_display(poly_check.witness->x) + ", y = " +
            value_to_display(poly_check.witness->y) + ", difference = " +
            value_to_display(poly_check.witness->lhs));

    const SemigroupPoint base = domain.zero();
    std::vector<MonomialSpec> components;
    FunctionHandle current = rho;
    for (int j = degree; j >= 1; --j) {
        MonomialSpec spec = MonomialSpec::power(0, group.zero());
        if (domain.kind() == SemigroupKind::RationalVector) {
            spec = extract_tensor_component(current, j);
        } else {
            const SemigroupPoint probe = extraction_probe(domain);
            const GroupValue dj = forward_difference(current, j, base, probe);
            const GroupValue rho_j_at_probe = group.divide_by_factorial(dj, j);
            spec = MonomialSpec::power(j, divide_by_probe_power(group, rho_j_at_probe, probe, j));
        }
        components.push_back(spec);
        current = subtract(current, make_monomial(domain, group, spec));
    }
    components.push_back(MonomialSpec::power(0, current.evaluate(base)));
    MonomialSum sum(std::move(components));

    // A posteriori: every component is a monomial of its degree, and the sum
    // reproduces rho at every grid point.
    for (const auto& component : sum.components()) {
        const auto check =
            check_monomial(make_monomial(domain, group, component), component.degree, grid);
        if (!check.holds)
            throw DecompositionError("extracted degree-" + std::to_string(component.degree) +
                                     " component fails the monomial identity at x = " +
                                     value_to_display(check.witness->x) + ", y = " +
                                     value_to_display(check.witness->y));
    }
    for (const auto& [x, y] : grid) {
        for (const auto& point : {x, y}) {
            GroupValue expected;
            try {
                expected = rho.evaluate(point);
            } catch (const MissingSampleError&) {
                continue;
            }
            if (!group.equal(sum.evaluate(domain, group, point), expected))
                throw DecompositionError("decomposition does not reproduce the input at " +
                                         value_to_display(point));
        }
    }
    return sum;
}

} // namespace frechet
