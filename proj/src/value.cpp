#include "frechet/value.hpp"

#include <sstream>
#include <utility>

namespace frechet {

Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw InvalidSpecError("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0)
            throw InvalidSpecError("rational literal with zero denominator: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw InvalidSpecError("malformed rational literal '" + text + "': " + e.what());
    }
}

std::string rational_to_string(const Rational& q) {
    std::ostringstream out;
    out << numerator(q);
    if (denominator(q) != 1)
        out << '/' << denominator(q);
    return out.str();
}

std::string value_to_display(const Value& v) {
    if (const auto* q = std::get_if<Rational>(&v))
        return rational_to_string(*q);
    if (const auto* d = std::get_if<double>(&v)) {
        std::ostringstream out;
        out.precision(17);
        out << *d;
        return out.str();
    }
    if (const auto* m = std::get_if<ModValue>(&v)) {
        std::ostringstream out;
        out << m->value << " (mod " << m->modulus << ")";
        return out.str();
    }
    const auto& vec = std::get<RatVec>(v);
    std::string out = "(";
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (i)
            out += ", ";
        out += rational_to_string(vec[i]);
    }
    return out + ")";
}

BigInt factorial(int k) {
    if (k < 0)
        throw InvalidParameterError("factorial of negative integer");
    BigInt r = 1;
    for (int i = 2; i <= k; ++i)
        r *= i;
    return r;
}

std::vector<BigInt> pascal_row(int j) {
    if (j < 0)
        throw InvalidParameterError("binomial row of negative order");
    std::vector<BigInt> row{BigInt(1)};
    for (int r = 1; r <= j; ++r) {
        std::vector<BigInt> next(static_cast<std::size_t>(r) + 1, BigInt(1));
        for (int i = 1; i < r; ++i)
            next[static_cast<std::size_t>(i)] =
                row[static_cast<std::size_t>(i) - 1] + row[static_cast<std::size_t>(i)];
        row = std::move(next);
    }
    return row;
}

Rational rational_pow(const Rational& base, int exponent) {
    if (exponent < 0)
        throw InvalidParameterError("negative exponent in rational_pow");
    Rational r = 1;
    Rational b = base;
    int e = exponent;
    while (e > 0) {
        if (e & 1)
            r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

bool is_prime(std::int64_t p) {
    if (p < 2)
        return false;
    if (p % 2 == 0)
        return p == 2;
    for (std::int64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0)
            return false;
    return true;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
    // extended Euclid; requires gcd(a, p) = 1
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p, new_r = ((a % p) + p) % p;
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1)
        throw InvalidParameterError("element not invertible modulo p");
    return ((t % p) + p) % p;
}

} // namespace frechet
