#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frechet/equations.hpp"

namespace frechet {

/// Reproducible 64-bit linear congruential generator,
///   state <- state * 6364136223846793005 + 1442695040888963407,
/// so identical seeds give identical runs on any implementation.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state;
    }

    std::uint64_t next_below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double next_double(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// num in [-max_num, max_num], den in [1, max_den]; may be zero.
    Rational next_rational(int max_num, int max_den) {
        const auto num = next_int(-max_num, max_num);
        const auto den = next_int(1, max_den);
        return Rational(num, den);
    }

    Rational next_nonzero_rational(int max_num, int max_den) {
        Rational q = next_rational(max_num, max_den);
        while (q == 0)
            q = next_rational(max_num, max_den);
        return q;
    }
};

struct GridSpec {
    enum class Kind { RationalBox, FloatBoxAvoidingKpi, CharacteristicBox };
    enum class Sign { Any, Nonneg, Nonpos };

    Kind kind = Kind::RationalBox;
    int count = 50;
    std::uint64_t seed = 1;

    // rational kinds
    int max_numerator = 20;
    int max_denominator = 20;
    bool nonzero = false;
    Sign sign = Sign::Any;

    // float kind
    double lo = -20.0;
    double hi = 20.0;
    double kpi_margin = 1e-3;
};

/// Deterministic pseudo-random pairs; identical specs give identical grids.
Grid sample_grid(const GridSpec& spec);

/// Independent re-implementation of the iterated difference: terms are summed
/// from i = order down to 0 and each binomial is recomputed from the
/// multiplicative formula rather than the Pascal recurrence.
GroupValue forward_difference_reference(const FunctionHandle& rho, int order,
                                        const SemigroupPoint& x, const SemigroupPoint& y);

struct FuzzConfig {
    enum class Family { Radical, Arcsine };

    Family family = Family::Radical;
    int n_lo = 1;
    int n_hi = 3;
    int m_lo = 2; // radical only
    int m_hi = 4;
    std::size_t cases = 100;
    std::uint64_t seed = 1;
    double tol = 1e-9;
};

struct FuzzUnexpected {
    std::size_t case_index = 0;
    std::string phase; // "solution" or "perturbation"
    std::string equation;
    int n = 0;
    int m = 0;
    std::string detail;
};

/// cases_run counts verification runs (two per generated case: the canonical
/// solution, which must hold, and the perturbed raw table, which must fail),
/// so holds_count + fails_count = cases_run.
struct FuzzReport {
    FuzzConfig config;
    std::size_t cases_run = 0;
    std::size_t holds_count = 0;
    std::size_t fails_count = 0;
    std::vector<FuzzUnexpected> unexpected;
};

FuzzReport fuzz(const FuzzConfig& config);

/// Raw u-space table of the canonical arcsine solution, covering every sample
/// point the grid needs; values are computed in quad precision and stored as
/// doubles.
FunctionHandle::Table tabulate_arcsine_solution(const Equation& eq, const MonomialSum& coeffs,
                                                const Grid& grid);

/// Index of the grid pair whose equation sides have the smallest magnitude
/// under the given canonical candidate.
std::size_t smallest_magnitude_pair(const Equation& eq, const CandidateSolution& canonical,
                                    const Grid& grid, double tol);

} // namespace frechet
