#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "frechet/section.hpp"

namespace frechet {

/// sum_{i=0}^{n} (-1)^(n-i) C(n,i) f((u^m + i v^m)^(1/m)) = (n!) f(v)   [monomial variant]
/// f(u) + sum_{i=1}^{n+1} (-1)^i C(n+1,i) f((u^m + i v^m)^(1/m)) = 0   [polynomial variant]
/// over f : R -> Y. The characteristic domain is R for odd m and [0, inf) for even m.
struct RadicalEquation {
    enum class Variant { Monomial, Polynomial }; // eq1 / eq2

    Variant variant = Variant::Monomial;
    int n = 1;
    int m = 2;

    static RadicalEquation make(Variant variant, int n, int m);

    SemigroupInstance characteristic_domain() const;
    EquationForm form() const;
    std::string name() const { return variant == Variant::Monomial ? "eq1" : "eq2"; }
};

/// sum_{i=0}^{n} (-1)^(n-i) C(n,i) f(arcsin|sin u sin^i v|) = (n!) f(v)  [monomial variant]
/// f(u) + sum_{i=1}^{n+1} (-1)^i C(n+1,i) f(arcsin|sin u sin^i v|) = 0  [polynomial variant]
/// over f : R \ {k pi} -> Y. The characteristic domain is (-inf, 0].
struct ArcsineEquation {
    enum class Variant { Monomial, Polynomial }; // eq3 / eq4

    Variant variant = Variant::Monomial;
    int n = 1;

    static ArcsineEquation make(Variant variant, int n);

    SemigroupInstance characteristic_domain() const;
    EquationForm form() const;
    std::string name() const { return variant == Variant::Monomial ? "eq3" : "eq4"; }
};

using Equation = std::variant<RadicalEquation, ArcsineEquation>;

std::string equation_name(const Equation& eq);
int equation_degree(const Equation& eq);

/// g(u) = u^m with the principal root as section. Exact on rationals; the
/// section returns an exact rational root when one exists and falls back to
/// a double otherwise.
SectionPair power_root_pair(int m);

/// g(u) = ln|sin u| on U = R \ {k pi}, section g'(x) = arcsin(e^x) in (0, pi/2].
SectionPair log_abs_sin_pair();

enum class CandidateTableSpace { U, Characteristic };

struct CanonicalSolution {
    MonomialSum rho;
    std::string pair_name; // "power-root" or "log-abs-sin"
    int m = 0;
};

struct RawSolution {
    FunctionHandle::Table table;
    CandidateTableSpace space = CandidateTableSpace::U;
};

/// A candidate f for one of the four equations: canonical (a monomial sum in
/// characteristic coordinates plus the section pair it lifts through) or a raw
/// finite table. Raw tables live in u-space; exact radical tables may also be
/// given directly in characteristic coordinates. `extension` optionally
/// defines f at the points k*pi for the maximal-domain check.
struct CandidateSolution {
    using Canonical = CanonicalSolution;
    using Raw = RawSolution;
    using TableSpace = CandidateTableSpace;

    std::variant<CanonicalSolution, RawSolution> body;
    std::map<int, GroupValue> extension;

    const Canonical* canonical() const { return std::get_if<CanonicalSolution>(&body); }
    const Raw* raw() const { return std::get_if<RawSolution>(&body); }
};

/// Builds the canonical solution f = rho o g from characteristic coefficients.
/// Monomial variants require a single component of degree exactly n;
/// polynomial variants require all degrees <= n.
CandidateSolution solve(const Equation& eq, const MonomialSum& coeffs);

enum class VerifyMode { ExactCharacteristic, DirectFloat };

struct VerifyWitness {
    Value first; // x (exact mode) or u (float mode)
    Value second;
    Value lhs;
    Value rhs;
};

struct VerifyReport {
    bool holds = true;
    double max_residual = 0.0;
    std::size_t checked_pairs = 0;
    std::size_t skipped_pairs = 0;
    std::vector<double> residuals;
    std::vector<double> side_scales; // max(1, |lhs|, |rhs|) per checked pair
    std::optional<VerifyWitness> witness;
};

/// Exact-characteristic mode takes grid pairs (x, y) in X^2 as exact rationals
/// and demands bit-exact zero residuals. Direct-float mode takes (u, v) in U^2
/// as doubles, evaluates the composite equation through the actual roots or
/// arcsines in quad precision, and demands normalized residuals <= tol.
VerifyReport verify(const Equation& eq, const CandidateSolution& candidate, const Grid& grid,
                    VerifyMode mode, double tol = 1e-9);

/// The u-space sample points a raw table must contain so that `verify` can
/// evaluate the equation at the pair (u, v). Same double arithmetic as the
/// verifier's lookups.
std::vector<double> required_points(const Equation& eq, double u, double v);

struct TrivialityViolation {
    Value at;     // the sample (or k*pi extension point) where the forced value fails
    Value value;  // observed value
    Value forced; // value the collapsed equation forces
};

struct TrivialityReport {
    bool applicable = false;
    bool flagged = false;
    std::size_t samples_checked = 0;
    std::vector<TrivialityViolation> violations;
};

/// Maximal-domain check. With u = k*pi admitted, every argument of the
/// monomial equation collapses to arcsin 0 = 0 and the alternating binomial
/// sum of equal values vanishes, so the equation forces (n!) f(v) = 0 at
/// every v; any nonzero f(v) is flagged. For the polynomial variant the same
/// collapse at v = k*pi forces f(u) = f(0), so non-constant candidates are
/// flagged. The candidate must define f at 0 via `extension`.
TrivialityReport triviality_check(const ArcsineEquation& eq, const CandidateSolution& candidate,
                                  const std::vector<double>& samples, double tol = 1e-9);

/// Pulls a u-space table back to characteristic coordinates, interpolates the
/// degree-<=n polynomial through it (Newton divided differences, exact for
/// radical tables), and returns the monomial components. The returned sum's
/// lift must reproduce every table entry, else DecompositionError. The
/// pulled-back grid must contain 0 (u = 0 for radical tables, u with
/// |sin u| = 1 for arcsine tables).
MonomialSum recover(const Equation& eq, const FunctionHandle::Table& u_table, double tol = 1e-9);

} // namespace frechet
