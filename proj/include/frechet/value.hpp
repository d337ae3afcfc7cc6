#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "frechet/errors.hpp"

namespace frechet {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Residue v modulo a prime p, kept in [0, p).
struct ModValue {
    std::int64_t modulus = 0;
    std::int64_t value = 0;

    friend bool operator==(const ModValue& a, const ModValue& b) {
        return a.modulus == b.modulus && a.value == b.value;
    }
};

using RatVec = std::vector<Rational>;

/// Carrier for both group values and semigroup points. Which alternatives are
/// admissible is decided by the owning instance, not by the variant itself.
using Value = std::variant<Rational, double, ModValue, RatVec>;

using GroupValue = Value;
using SemigroupPoint = Value;

/// Parses "p", "-p/q" or "p/q" into a canonical reduced rational.
Rational parse_rational(const std::string& text);

/// Canonical encoding: "p" when the denominator is 1, else "p/q".
std::string rational_to_string(const Rational& q);

/// Human-readable rendering of any value alternative, for diagnostics.
std::string value_to_display(const Value& v);

BigInt factorial(int k);

/// Row j of Pascal's triangle, computed by the additive recurrence.
std::vector<BigInt> pascal_row(int j);

Rational rational_pow(const Rational& base, int exponent);

bool is_prime(std::int64_t p);

std::int64_t mod_inverse(std::int64_t a, std::int64_t p);

} // namespace frechet
