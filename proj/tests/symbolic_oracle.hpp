#pragma once

// Test-only symbolic oracle: bivariate polynomials over Q in (x, y), used to
// expand the iterated difference of c * t^j with t = x + i y in closed form,
// independently of the library's evaluation path.

#include <map>
#include <utility>

#include "frechet/value.hpp"

namespace oracle {

// (x-degree, y-degree) -> coefficient
using Bivariate = std::map<std::pair<int, int>, frechet::Rational>;

inline void add_term(Bivariate& poly, int dx, int dy, const frechet::Rational& c) {
    auto [it, inserted] = poly.emplace(std::make_pair(dx, dy), c);
    if (!inserted)
        it->second += c;
    if (it->second == 0)
        poly.erase(it);
}

// c * (x + i*y)^j expanded by the binomial theorem
inline Bivariate expand_shifted_power(const frechet::Rational& c, int j, int i) {
    Bivariate poly;
    const auto row = frechet::pascal_row(j);
    frechet::BigInt ipow = 1;
    for (int k = j; k >= 0; --k) {
        // term: C(j, k) x^k (i y)^(j-k)
        add_term(poly, k, j - k, c * frechet::Rational(row[static_cast<std::size_t>(k)] * ipow));
        ipow *= i;
    }
    return poly;
}

// sum_{i=0}^{j} (-1)^(j-i) C(j,i) * c * (x + i*y)^j, fully expanded
inline Bivariate symbolic_difference_of_power(const frechet::Rational& c, int j) {
    Bivariate total;
    const auto row = frechet::pascal_row(j);
    for (int i = 0; i <= j; ++i) {
        const frechet::Rational sign = (j - i) % 2 == 0 ? 1 : -1;
        for (const auto& [key, value] : expand_shifted_power(c, j, i))
            add_term(total, key.first, key.second,
                     sign * frechet::Rational(row[static_cast<std::size_t>(i)]) * value);
    }
    return total;
}

inline frechet::Rational evaluate(const Bivariate& poly, const frechet::Rational& x,
                                  const frechet::Rational& y) {
    frechet::Rational acc = 0;
    for (const auto& [key, c] : poly)
        acc += c * frechet::rational_pow(x, key.first) * frechet::rational_pow(y, key.second);
    return acc;
}

} // namespace oracle
