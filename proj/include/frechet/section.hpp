#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frechet/difference.hpp"

namespace frechet {

/// A surjection g : U -> X together with a section g' : X -> U (g o g' = id_X).
/// U is described only by a membership predicate; it need not be a semigroup.
struct SectionPair {
    std::string name;
    int power = 0; // m for the power-root pair, 0 otherwise
    SemigroupInstance target = SemigroupInstance::real_line();
    std::function<SemigroupPoint(const Value&)> surjection; // g
    std::function<Value(const SemigroupPoint&)> section;    // g'
    std::function<bool(const Value&)> in_domain;            // u in U
};

/// The two-sided shape G(rho, (x, y)) = H(rho(x), rho(y)) of a characteristic
/// equation. G and H are first-class so every equation family shares one
/// verification engine.
struct EquationForm {
    enum class FixedSide { First, Second };

    std::string name;
    int degree = 1;
    std::function<GroupValue(const FunctionHandle&, const SemigroupPoint&, const SemigroupPoint&)>
        lhs; // G
    std::function<GroupValue(const AbelianGroup&, const GroupValue&, const GroupValue&)> rhs; // H
    // Which argument of H is held fixed in the injectivity criterion.
    FixedSide fixed_side = FixedSide::First;
};

/// G = forward_difference(rho, n, x, y), H = (n!) y2; fixed first argument.
EquationForm monomial_form(int n);

/// G = sum_{i=1}^{n+1} (-1)^i C(n+1, i) rho(x + i y), H = -y1; fixed second argument.
EquationForm polynomial_form(int n);

/// f = rho o g with domain U. The returned handle remembers rho, so pullbacks
/// never evaluate the section g'.
FunctionHandle lift_canonical(const FunctionHandle& rho, const SectionPair& pair);

/// Checks G(rho, (x, y)) = H(rho(x), rho(y)) over a grid in X^2.
CheckResult check_characteristic(const FunctionHandle& rho, const EquationForm& form,
                                 const Grid& grid);

struct InjectivityResult {
    bool holds = true;
    std::optional<std::pair<GroupValue, GroupValue>> collided; // distinct probes, equal images
    std::size_t probes_checked = 0;
};

/// Probe-based test that y -> H(f(u0), y) (or y -> H(y, f(u0))) is injective
/// on the probe set. Refutation is sound; confirmation is evidence only.
InjectivityResult probe_injectivity(const FunctionHandle& f, const EquationForm& form,
                                    const Value& u0, const std::vector<GroupValue>& probes);

/// Checks G(f o g', (g(u), g(v))) = H(f(u), f(v)) over a grid in U^2. Uses the
/// lifted handle's remembered characteristic part when present, avoiding g'.
CheckResult check_composite(const FunctionHandle& f, const EquationForm& form,
                            const SectionPair& pair, const Grid& grid);

/// f o g' as a handle over X (the remembered characteristic part if available).
FunctionHandle pullback(const FunctionHandle& f, const SectionPair& pair);

} // namespace frechet
