#include "frechet/section.hpp"

#include <memory>

namespace frechet {

EquationForm monomial_form(int n) {
    if (n < 1)
        throw InvalidParameterError("monomial form needs n >= 1");
    EquationForm form;
    form.name = "monomial";
    form.degree = n;
    form.lhs = [n](const FunctionHandle& rho, const SemigroupPoint& x, const SemigroupPoint& y) {
        return forward_difference(rho, n, x, y);
    };
    const BigInt nf = factorial(n);
    form.rhs = [nf](const AbelianGroup& group, const GroupValue&, const GroupValue& y2) {
        return group.scale(nf, y2);
    };
    form.fixed_side = EquationForm::FixedSide::First;
    return form;
}

EquationForm polynomial_form(int n) {
    if (n < 1)
        throw InvalidParameterError("polynomial form needs n >= 1");
    EquationForm form;
    form.name = "polynomial";
    form.degree = n;
    form.lhs = [n](const FunctionHandle& rho, const SemigroupPoint& x, const SemigroupPoint& y) {
        const auto binomials = pascal_row(n + 1);
        const auto& domain = rho.domain();
        const auto& group = rho.codomain();
        GroupValue acc = group.zero();
        for (int i = 1; i <= n + 1; ++i) {
            GroupValue term = group.scale(binomials[static_cast<std::size_t>(i)],
                                          rho.evaluate(domain.add(x, domain.scale(i, y))));
            if (i % 2 != 0)
                term = group.negate(term);
            acc = group.add(acc, term);
        }
        return acc;
    };
    form.rhs = [](const AbelianGroup& group, const GroupValue& y1, const GroupValue&) {
        return group.negate(y1);
    };
    form.fixed_side = EquationForm::FixedSide::Second;
    return form;
}

FunctionHandle lift_canonical(const FunctionHandle& rho, const SectionPair& pair) {
    if (!rho.domain().same_instance(pair.target))
        throw InstanceMismatchError("characteristic function domain " + rho.domain().describe() +
                                    " does not match the section pair target " +
                                    pair.target.describe());
    auto rho_shared = std::make_shared<const FunctionHandle>(rho);
    const auto carrier =
        SemigroupInstance::real_line(rho.domain().repr() == PointRepr::Float ? PointRepr::Float
                                                                             : PointRepr::Exact);
    auto g = pair.surjection;
    auto in_domain = pair.in_domain;
    auto pair_name = pair.name;
    FunctionHandle lifted = FunctionHandle::native(
        carrier, rho.codomain(), [rho_shared, g, in_domain, pair_name](const Value& u) {
            if (in_domain && !in_domain(u))
                throw DomainError("point " + value_to_display(u) + " is outside the domain of " +
                                  pair_name);
            return rho_shared->evaluate(g(u));
        });
    lifted.set_lift_provenance(rho_shared, pair.name);
    return lifted;
}

FunctionHandle pullback(const FunctionHandle& f, const SectionPair& pair) {
    if (auto rho = f.characteristic_part())
        return *rho;
    auto f_shared = std::make_shared<const FunctionHandle>(f);
    auto section = pair.section;
    return FunctionHandle::native(pair.target, f.codomain(),
                                  [f_shared, section](const SemigroupPoint& x) {
                                      return f_shared->evaluate(section(x));
                                  });
}

namespace {

CheckResult run_form_check(const FunctionHandle& rho, const EquationForm& form, const Grid& grid,
                           const FunctionHandle* value_source) {
    if (grid.empty())
        throw InvalidParameterError("verification grid must be nonempty");
    const auto& group = rho.codomain();
    CheckResult result;
    for (const auto& [x, y] : grid) {
        GroupValue lhs, rhs;
        try {
            lhs = form.lhs(rho, x, y);
            const auto& source = value_source ? *value_source : rho;
            rhs = form.rhs(group, source.evaluate(x), source.evaluate(y));
        } catch (const MissingSampleError&) {
            ++result.pairs_skipped;
            continue;
        }
        ++result.pairs_checked;
        result.max_residual = std::max(result.max_residual, group.residual(lhs, rhs));
        if (!group.equal(lhs, rhs) && result.holds) {
            result.holds = false;
            result.witness = CheckWitness{x, y, lhs, rhs};
        }
    }
    return result;
}

} // namespace

CheckResult check_characteristic(const FunctionHandle& rho, const EquationForm& form,
                                 const Grid& grid) {
    return run_form_check(rho, form, grid, nullptr);
}

InjectivityResult probe_injectivity(const FunctionHandle& f, const EquationForm& form,
                                    const Value& u0, const std::vector<GroupValue>& probes) {
    if (probes.empty())
        throw InvalidParameterError("injectivity test needs a nonempty probe set");
    const auto& group = f.codomain();
    const GroupValue fixed = f.evaluate(u0);
    auto image = [&](const GroupValue& y) {
        return form.fixed_side == EquationForm::FixedSide::First ? form.rhs(group, fixed, y)
                                                                 : form.rhs(group, y, fixed);
    };
    std::vector<GroupValue> images;
    images.reserve(probes.size());
    for (const auto& p : probes)
        images.push_back(image(p));

    InjectivityResult result;
    result.probes_checked = probes.size();
    for (std::size_t i = 0; i < probes.size() && result.holds; ++i)
        for (std::size_t j = i + 1; j < probes.size(); ++j) {
            if (group.equal(probes[i], probes[j]))
                continue; // coincident probes carry no information
            if (group.equal(images[i], images[j])) {
                result.holds = false;
                result.collided = std::make_pair(probes[i], probes[j]);
                break;
            }
        }
    return result;
}

CheckResult check_composite(const FunctionHandle& f, const EquationForm& form,
                            const SectionPair& pair, const Grid& grid) {
    if (grid.empty())
        throw InvalidParameterError("verification grid must be nonempty");
    const FunctionHandle pulled = pullback(f, pair);
    Grid characteristic_grid;
    characteristic_grid.reserve(grid.size());
    for (const auto& [u, v] : grid) {
        if (pair.in_domain && (!pair.in_domain(u) || !pair.in_domain(v)))
            throw DomainError("composite grid point outside the domain of " + pair.name);
        characteristic_grid.emplace_back(pair.surjection(u), pair.surjection(v));
    }

    const auto& group = f.codomain();
    CheckResult result;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        GroupValue lhs, rhs;
        try {
            lhs = form.lhs(pulled, characteristic_grid[k].first, characteristic_grid[k].second);
            rhs = form.rhs(group, f.evaluate(grid[k].first), f.evaluate(grid[k].second));
        } catch (const MissingSampleError&) {
            ++result.pairs_skipped;
            continue;
        }
        ++result.pairs_checked;
        result.max_residual = std::max(result.max_residual, group.residual(lhs, rhs));
        if (!group.equal(lhs, rhs) && result.holds) {
            result.holds = false;
            result.witness = CheckWitness{grid[k].first, grid[k].second, lhs, rhs};
        }
    }
    return result;
}

} // namespace frechet
