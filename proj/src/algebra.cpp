#include "frechet/algebra.hpp"

#include <cmath>
#include <sstream>

namespace frechet {

namespace {

std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t p) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % p);
}

std::int64_t mod_norm(const BigInt& k, std::int64_t p) {
    BigInt r = k % p;
    if (r < 0)
        r += p;
    return r.convert_to<std::int64_t>();
}

} // namespace

AbelianGroup::AbelianGroup(GroupKind kind, int dim, std::int64_t modulus, double eps, int bound)
    : kind_(kind), dim_(dim), modulus_(modulus), eps_(eps), divisibility_bound_(bound) {}

AbelianGroup AbelianGroup::exact_rational(int divisibility_bound) {
    if (divisibility_bound < 0)
        throw InvalidParameterError("divisibility bound must be nonnegative");
    return AbelianGroup(GroupKind::ExactRational, 0, 0, 0.0, divisibility_bound);
}

AbelianGroup AbelianGroup::rational_vector(int dim, int divisibility_bound) {
    if (dim < 1)
        throw InvalidParameterError("vector group dimension must be positive");
    if (divisibility_bound < 0)
        throw InvalidParameterError("divisibility bound must be nonnegative");
    return AbelianGroup(GroupKind::RationalVector, dim, 0, 0.0, divisibility_bound);
}

AbelianGroup AbelianGroup::mod_p(std::int64_t p, int divisibility_bound) {
    if (!is_prime(p))
        throw InvalidParameterError("mod-p group requires a prime modulus, got " + std::to_string(p));
    if (p <= divisibility_bound)
        throw InvalidParameterError("mod-p group with p = " + std::to_string(p) +
                                    " cannot support divisibility bound " +
                                    std::to_string(divisibility_bound));
    return AbelianGroup(GroupKind::ModP, 0, p, 0.0, divisibility_bound);
}

AbelianGroup AbelianGroup::float_tolerance(double eps, int divisibility_bound) {
    if (!(eps > 0.0))
        throw InvalidParameterError("float-tolerance group requires eps > 0");
    if (divisibility_bound < 0)
        throw InvalidParameterError("divisibility bound must be nonnegative");
    return AbelianGroup(GroupKind::FloatTolerance, 0, 0, eps, divisibility_bound);
}

bool AbelianGroup::contains(const GroupValue& v) const {
    switch (kind_) {
    case GroupKind::ExactRational:
        return std::holds_alternative<Rational>(v);
    case GroupKind::RationalVector: {
        const auto* vec = std::get_if<RatVec>(&v);
        return vec && static_cast<int>(vec->size()) == dim_;
    }
    case GroupKind::ModP: {
        const auto* m = std::get_if<ModValue>(&v);
        return m && m->modulus == modulus_ && m->value >= 0 && m->value < modulus_;
    }
    case GroupKind::FloatTolerance:
        return std::holds_alternative<double>(v) && std::isfinite(std::get<double>(v));
    }
    return false;
}

bool AbelianGroup::same_instance(const AbelianGroup& other) const {
    return kind_ == other.kind_ && dim_ == other.dim_ && modulus_ == other.modulus_ &&
           eps_ == other.eps_;
}

void AbelianGroup::require_member(const GroupValue& v) const {
    if (!contains(v))
        throw InstanceMismatchError("value " + value_to_display(v) + " does not belong to " +
                                    describe());
}

GroupValue AbelianGroup::zero() const {
    switch (kind_) {
    case GroupKind::ExactRational:
        return Rational(0);
    case GroupKind::RationalVector:
        return RatVec(static_cast<std::size_t>(dim_), Rational(0));
    case GroupKind::ModP:
        return ModValue{modulus_, 0};
    case GroupKind::FloatTolerance:
        return 0.0;
    }
    throw Error("unreachable");
}

GroupValue AbelianGroup::add(const GroupValue& a, const GroupValue& b) const {
    require_member(a);
    require_member(b);
    switch (kind_) {
    case GroupKind::ExactRational:
        return std::get<Rational>(a) + std::get<Rational>(b);
    case GroupKind::RationalVector: {
        RatVec out = std::get<RatVec>(a);
        const auto& rhs = std::get<RatVec>(b);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += rhs[i];
        return out;
    }
    case GroupKind::ModP:
        return ModValue{modulus_, (std::get<ModValue>(a).value + std::get<ModValue>(b).value) % modulus_};
    case GroupKind::FloatTolerance:
        return std::get<double>(a) + std::get<double>(b);
    }
    throw Error("unreachable");
}

GroupValue AbelianGroup::negate(const GroupValue& a) const {
    require_member(a);
    switch (kind_) {
    case GroupKind::ExactRational:
        return -std::get<Rational>(a);
    case GroupKind::RationalVector: {
        RatVec out = std::get<RatVec>(a);
        for (auto& c : out)
            c = -c;
        return out;
    }
    case GroupKind::ModP: {
        const auto v = std::get<ModValue>(a).value;
        return ModValue{modulus_, v == 0 ? 0 : modulus_ - v};
    }
    case GroupKind::FloatTolerance:
        return -std::get<double>(a);
    }
    throw Error("unreachable");
}

GroupValue AbelianGroup::subtract(const GroupValue& a, const GroupValue& b) const {
    return add(a, negate(b));
}

GroupValue AbelianGroup::scale(const BigInt& k, const GroupValue& a) const {
    require_member(a);
    switch (kind_) {
    case GroupKind::ExactRational:
        return Rational(k) * std::get<Rational>(a);
    case GroupKind::RationalVector: {
        RatVec out = std::get<RatVec>(a);
        for (auto& c : out)
            c *= Rational(k);
        return out;
    }
    case GroupKind::ModP:
        return ModValue{modulus_, mod_mul(mod_norm(k, modulus_), std::get<ModValue>(a).value, modulus_)};
    case GroupKind::FloatTolerance:
        return k.convert_to<double>() * std::get<double>(a);
    }
    throw Error("unreachable");
}

GroupValue AbelianGroup::divide_by_factorial(const GroupValue& a, int k) const {
    require_member(a);
    if (k < 0)
        throw InvalidParameterError("negative factorial order");
    if (k > divisibility_bound_)
        throw UnsupportedDivisionError("division by " + std::to_string(k) + "! exceeds the bound " +
                                       std::to_string(divisibility_bound_) + " of " + describe());
    const BigInt kf = factorial(k);
    switch (kind_) {
    case GroupKind::ExactRational:
        return std::get<Rational>(a) / Rational(kf);
    case GroupKind::RationalVector: {
        RatVec out = std::get<RatVec>(a);
        for (auto& c : out)
            c /= Rational(kf);
        return out;
    }
    case GroupKind::ModP: {
        const std::int64_t inv = mod_inverse(mod_norm(kf, modulus_), modulus_);
        return ModValue{modulus_, mod_mul(inv, std::get<ModValue>(a).value, modulus_)};
    }
    case GroupKind::FloatTolerance:
        return std::get<double>(a) / kf.convert_to<double>();
    }
    throw Error("unreachable");
}

bool AbelianGroup::equal(const GroupValue& a, const GroupValue& b) const {
    require_member(a);
    require_member(b);
    switch (kind_) {
    case GroupKind::ExactRational:
        return std::get<Rational>(a) == std::get<Rational>(b);
    case GroupKind::RationalVector:
        return std::get<RatVec>(a) == std::get<RatVec>(b);
    case GroupKind::ModP:
        return std::get<ModValue>(a).value == std::get<ModValue>(b).value;
    case GroupKind::FloatTolerance: {
        const double x = std::get<double>(a);
        const double y = std::get<double>(b);
        return std::fabs(x - y) <= eps_ * std::max({1.0, std::fabs(x), std::fabs(y)});
    }
    }
    throw Error("unreachable");
}

double AbelianGroup::residual(const GroupValue& a, const GroupValue& b) const {
    require_member(a);
    require_member(b);
    switch (kind_) {
    case GroupKind::ExactRational: {
        const Rational d = std::get<Rational>(a) - std::get<Rational>(b);
        return std::fabs(d.convert_to<double>());
    }
    case GroupKind::RationalVector: {
        double worst = 0.0;
        const auto& x = std::get<RatVec>(a);
        const auto& y = std::get<RatVec>(b);
        for (std::size_t i = 0; i < x.size(); ++i)
            worst = std::max(worst, std::fabs(Rational(x[i] - y[i]).convert_to<double>()));
        return worst;
    }
    case GroupKind::ModP: {
        const std::int64_t d = std::llabs(std::get<ModValue>(a).value - std::get<ModValue>(b).value);
        return static_cast<double>(std::min(d, modulus_ - d));
    }
    case GroupKind::FloatTolerance: {
        const double x = std::get<double>(a);
        const double y = std::get<double>(b);
        return std::fabs(x - y) / std::max({1.0, std::fabs(x), std::fabs(y)});
    }
    }
    throw Error("unreachable");
}

std::string AbelianGroup::describe() const {
    std::ostringstream out;
    switch (kind_) {
    case GroupKind::ExactRational:
        out << "exact-rational";
        break;
    case GroupKind::RationalVector:
        out << "rational-vector(" << dim_ << ")";
        break;
    case GroupKind::ModP:
        out << "mod-" << modulus_;
        break;
    case GroupKind::FloatTolerance:
        out << "float-tolerance(" << eps_ << ")";
        break;
    }
    return out.str();
}

SemigroupInstance::SemigroupInstance(SemigroupKind kind, PointRepr repr, std::int64_t modulus, int dim)
    : kind_(kind), repr_(repr), modulus_(modulus), dim_(dim) {}

SemigroupInstance SemigroupInstance::real_line(PointRepr repr) {
    return SemigroupInstance(SemigroupKind::RealLine, repr, 0, 0);
}

SemigroupInstance SemigroupInstance::nonneg_half_line(PointRepr repr) {
    return SemigroupInstance(SemigroupKind::NonnegHalfLine, repr, 0, 0);
}

SemigroupInstance SemigroupInstance::nonpos_half_line(PointRepr repr) {
    return SemigroupInstance(SemigroupKind::NonposHalfLine, repr, 0, 0);
}

SemigroupInstance SemigroupInstance::mod_p(std::int64_t p) {
    if (!is_prime(p))
        throw InvalidParameterError("mod-p semigroup requires a prime modulus");
    return SemigroupInstance(SemigroupKind::ModP, PointRepr::Exact, p, 0);
}

SemigroupInstance SemigroupInstance::rational_vector(int dim) {
    if (dim < 1)
        throw InvalidParameterError("vector semigroup dimension must be positive");
    return SemigroupInstance(SemigroupKind::RationalVector, PointRepr::Exact, 0, dim);
}

bool SemigroupInstance::contains(const SemigroupPoint& p) const {
    switch (kind_) {
    case SemigroupKind::RealLine:
        if (repr_ == PointRepr::Exact)
            return std::holds_alternative<Rational>(p);
        return std::holds_alternative<double>(p) && std::isfinite(std::get<double>(p));
    case SemigroupKind::NonnegHalfLine:
        if (repr_ == PointRepr::Exact)
            return std::holds_alternative<Rational>(p) && std::get<Rational>(p) >= 0;
        return std::holds_alternative<double>(p) && std::isfinite(std::get<double>(p)) &&
               std::get<double>(p) >= 0.0;
    case SemigroupKind::NonposHalfLine:
        if (repr_ == PointRepr::Exact)
            return std::holds_alternative<Rational>(p) && std::get<Rational>(p) <= 0;
        return std::holds_alternative<double>(p) && std::isfinite(std::get<double>(p)) &&
               std::get<double>(p) <= 0.0;
    case SemigroupKind::ModP: {
        const auto* m = std::get_if<ModValue>(&p);
        return m && m->modulus == modulus_ && m->value >= 0 && m->value < modulus_;
    }
    case SemigroupKind::RationalVector: {
        const auto* vec = std::get_if<RatVec>(&p);
        return vec && static_cast<int>(vec->size()) == dim_;
    }
    }
    return false;
}

bool SemigroupInstance::same_instance(const SemigroupInstance& other) const {
    return kind_ == other.kind_ && repr_ == other.repr_ && modulus_ == other.modulus_ &&
           dim_ == other.dim_;
}

void SemigroupInstance::require_member(const SemigroupPoint& p) const {
    if (!contains(p))
        throw InstanceMismatchError("point " + value_to_display(p) + " does not belong to " +
                                    describe());
}

SemigroupPoint SemigroupInstance::zero() const {
    switch (kind_) {
    case SemigroupKind::RealLine:
    case SemigroupKind::NonnegHalfLine:
    case SemigroupKind::NonposHalfLine:
        return repr_ == PointRepr::Exact ? SemigroupPoint(Rational(0)) : SemigroupPoint(0.0);
    case SemigroupKind::ModP:
        return ModValue{modulus_, 0};
    case SemigroupKind::RationalVector:
        return RatVec(static_cast<std::size_t>(dim_), Rational(0));
    }
    throw Error("unreachable");
}

SemigroupPoint SemigroupInstance::add(const SemigroupPoint& a, const SemigroupPoint& b) const {
    require_member(a);
    require_member(b);
    switch (kind_) {
    case SemigroupKind::RealLine:
    case SemigroupKind::NonnegHalfLine:
    case SemigroupKind::NonposHalfLine:
        if (repr_ == PointRepr::Exact)
            return std::get<Rational>(a) + std::get<Rational>(b);
        return std::get<double>(a) + std::get<double>(b);
    case SemigroupKind::ModP:
        return ModValue{modulus_, (std::get<ModValue>(a).value + std::get<ModValue>(b).value) % modulus_};
    case SemigroupKind::RationalVector: {
        RatVec out = std::get<RatVec>(a);
        const auto& rhs = std::get<RatVec>(b);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += rhs[i];
        return out;
    }
    }
    throw Error("unreachable");
}

SemigroupPoint SemigroupInstance::scale(int i, const SemigroupPoint& a) const {
    require_member(a);
    if (i < 0)
        throw InvalidParameterError("semigroup scaling requires a nonnegative multiplier");
    switch (kind_) {
    case SemigroupKind::RealLine:
    case SemigroupKind::NonnegHalfLine:
    case SemigroupKind::NonposHalfLine:
        if (repr_ == PointRepr::Exact)
            return Rational(i) * std::get<Rational>(a);
        return static_cast<double>(i) * std::get<double>(a);
    case SemigroupKind::ModP:
        return ModValue{modulus_, mod_mul(i % modulus_, std::get<ModValue>(a).value, modulus_)};
    case SemigroupKind::RationalVector: {
        RatVec out = std::get<RatVec>(a);
        for (auto& c : out)
            c *= i;
        return out;
    }
    }
    throw Error("unreachable");
}

bool SemigroupInstance::equal(const SemigroupPoint& a, const SemigroupPoint& b) const {
    require_member(a);
    require_member(b);
    return a == b;
}

std::string SemigroupInstance::describe() const {
    std::ostringstream out;
    switch (kind_) {
    case SemigroupKind::RealLine:
        out << "real-line";
        break;
    case SemigroupKind::NonnegHalfLine:
        out << "nonneg-half-line";
        break;
    case SemigroupKind::NonposHalfLine:
        out << "nonpos-half-line";
        break;
    case SemigroupKind::ModP:
        out << "mod-" << modulus_;
        return out.str();
    case SemigroupKind::RationalVector:
        out << "rational-vector(" << dim_ << ")";
        return out.str();
    }
    out << (repr_ == PointRepr::Exact ? " (exact)" : " (float)");
    return out.str();
}

} // namespace frechet
