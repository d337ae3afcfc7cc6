#pragma once

#include <cstdint>
#include <string>

#include "frechet/value.hpp"

namespace frechet {

enum class GroupKind { ExactRational, RationalVector, ModP, FloatTolerance };

/// An (n!)-divisible abelian group instance. Values are plain `GroupValue`s;
/// the instance owns membership checks and all arithmetic, so mixing values
/// from different instances is rejected rather than silently coerced.
class AbelianGroup {
public:
    static AbelianGroup exact_rational(int divisibility_bound = 6);
    static AbelianGroup rational_vector(int dim, int divisibility_bound = 6);
    /// Requires p prime and p > divisibility_bound, so every k! with
    /// k <= divisibility_bound is invertible mod p.
    static AbelianGroup mod_p(std::int64_t p, int divisibility_bound = 6);
    static AbelianGroup float_tolerance(double eps, int divisibility_bound = 6);

    GroupKind kind() const { return kind_; }
    int dim() const { return dim_; }
    std::int64_t modulus() const { return modulus_; }
    double eps() const { return eps_; }
    int divisibility_bound() const { return divisibility_bound_; }

    bool contains(const GroupValue& v) const;
    bool same_instance(const AbelianGroup& other) const;

    GroupValue zero() const;
    GroupValue add(const GroupValue& a, const GroupValue& b) const;
    GroupValue negate(const GroupValue& a) const;
    GroupValue subtract(const GroupValue& a, const GroupValue& b) const;
    GroupValue scale(const BigInt& k, const GroupValue& a) const;

    /// Returns b with (k!) * b = a. Requires k <= divisibility_bound.
    GroupValue divide_by_factorial(const GroupValue& a, int k) const;

    /// Exact instances compare bit-exactly; the float instance uses
    /// |a - b| <= eps * max(1, |a|, |b|).
    bool equal(const GroupValue& a, const GroupValue& b) const;

    /// 0 when equal; for the float instance the normalized residual
    /// |a - b| / max(1, |a|, |b|), otherwise a positive magnitude.
    double residual(const GroupValue& a, const GroupValue& b) const;

    std::string describe() const;

private:
    AbelianGroup(GroupKind kind, int dim, std::int64_t modulus, double eps, int bound);
    void require_member(const GroupValue& v) const;

    GroupKind kind_;
    int dim_ = 0;
    std::int64_t modulus_ = 0;
    double eps_ = 0.0;
    int divisibility_bound_ = 6;
};

enum class SemigroupKind { RealLine, NonnegHalfLine, NonposHalfLine, ModP, RationalVector };
enum class PointRepr { Exact, Float };

/// The domain semigroup (X, +). All five kinds contain the identity 0 and are
/// closed under addition of members.
class SemigroupInstance {
public:
    static SemigroupInstance real_line(PointRepr repr = PointRepr::Exact);
    static SemigroupInstance nonneg_half_line(PointRepr repr = PointRepr::Exact);
    static SemigroupInstance nonpos_half_line(PointRepr repr = PointRepr::Float);
    static SemigroupInstance mod_p(std::int64_t p);
    static SemigroupInstance rational_vector(int dim);

    SemigroupKind kind() const { return kind_; }
    PointRepr repr() const { return repr_; }
    std::int64_t modulus() const { return modulus_; }
    int dim() const { return dim_; }

    bool contains(const SemigroupPoint& p) const;
    bool same_instance(const SemigroupInstance& other) const;

    SemigroupPoint zero() const;
    SemigroupPoint add(const SemigroupPoint& a, const SemigroupPoint& b) const;

    /// i * a for i >= 0 (a added to itself i times; i = 0 gives the identity).
    SemigroupPoint scale(int i, const SemigroupPoint& a) const;

    bool equal(const SemigroupPoint& a, const SemigroupPoint& b) const;

    std::string describe() const;

private:
    SemigroupInstance(SemigroupKind kind, PointRepr repr, std::int64_t modulus, int dim);
    void require_member(const SemigroupPoint& p) const;

    SemigroupKind kind_;
    PointRepr repr_;
    std::int64_t modulus_ = 0;
    int dim_ = 0;
};

} // namespace frechet
