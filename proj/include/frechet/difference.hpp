#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "frechet/algebra.hpp"

namespace frechet {

/// One j-monomial in finite form: either a power form c * x^j over a scalar
/// domain, or the diagonal x -> T(x, ..., x) of a symmetric j-index tensor
/// over a rational-vector domain. Degree 0 is a constant.
struct MonomialSpec {
    enum class Form { Power, Tensor };

    struct TensorEntry {
        std::vector<int> index; // sorted ascending
        Rational value;
        BigInt multiplicity;    // number of index permutations folded into this entry
    };

    Form form = Form::Power;
    int degree = 0;
    GroupValue coefficient{}; // Power only
    int tensor_dim = 0;       // Tensor only
    std::vector<TensorEntry> entries;

    static MonomialSpec power(int degree, GroupValue coefficient);

    /// `dense` is the full tensor in row-major order, size dim^degree.
    /// Rejects tensors that are not symmetric under index permutation.
    static MonomialSpec tensor(int degree, int dim, const std::vector<Rational>& dense);

    static MonomialSpec tensor_from_entries(int degree, int dim, std::vector<TensorEntry> entries);

    /// Reconstructs the full row-major tensor from the folded entries.
    std::vector<Rational> dense_tensor() const;

    GroupValue evaluate(const SemigroupInstance& domain, const AbelianGroup& codomain,
                        const SemigroupPoint& x) const;

    bool is_zero() const;
};

/// A sum of monomials with pairwise distinct degrees, kept sorted ascending.
class MonomialSum {
public:
    MonomialSum() = default;
    explicit MonomialSum(std::vector<MonomialSpec> components);

    const std::vector<MonomialSpec>& components() const { return components_; }
    int max_degree() const;
    const MonomialSpec* component_of_degree(int degree) const;
    bool is_zero() const;

    GroupValue evaluate(const SemigroupInstance& domain, const AbelianGroup& codomain,
                        const SemigroupPoint& x) const;

private:
    std::vector<MonomialSpec> components_;
};

/// An immutable function rho : X -> Y. Backed by a closed form, a finite
/// table of samples, or an opaque evaluator.
class FunctionHandle {
public:
    using NativeFn = std::function<GroupValue(const SemigroupPoint&)>;
    using Table = std::vector<std::pair<SemigroupPoint, GroupValue>>;

    static FunctionHandle closed_form(SemigroupInstance domain, AbelianGroup codomain,
                                      MonomialSum sum);
    static FunctionHandle sampled(SemigroupInstance domain, AbelianGroup codomain, Table table);
    static FunctionHandle native(SemigroupInstance domain, AbelianGroup codomain, NativeFn fn);

    GroupValue evaluate(const SemigroupPoint& x) const;

    const SemigroupInstance& domain() const { return domain_; }
    const AbelianGroup& codomain() const { return codomain_; }

    const MonomialSum* closed_form_body() const;
    const Table* table_body() const;

    /// Set by lift_canonical: the characteristic function rho with f = rho o g.
    std::shared_ptr<const FunctionHandle> characteristic_part() const { return characteristic_; }
    const std::string& lifted_through() const { return lifted_through_; }
    void set_lift_provenance(std::shared_ptr<const FunctionHandle> rho, std::string pair_name);

private:
    FunctionHandle(SemigroupInstance domain, AbelianGroup codomain,
                   std::variant<MonomialSum, Table, NativeFn> body);

    SemigroupInstance domain_;
    AbelianGroup codomain_;
    std::variant<MonomialSum, Table, NativeFn> body_;
    std::shared_ptr<const FunctionHandle> characteristic_;
    std::string lifted_through_;
};

using Grid = std::vector<std::pair<SemigroupPoint, SemigroupPoint>>;

/// The iterated difference with step y:
///   sum_{i=0}^{order} (-1)^(order-i) C(order, i) rho(x + i y).
/// order 0 is rho(x) itself.
GroupValue forward_difference(const FunctionHandle& rho, int order, const SemigroupPoint& x,
                              const SemigroupPoint& y);

/// The handle x -> rho(x + step) - rho(x).
FunctionHandle first_difference(const FunctionHandle& rho, const SemigroupPoint& step);

FunctionHandle subtract(const FunctionHandle& f, const FunctionHandle& g);

struct CheckWitness {
    SemigroupPoint x;
    SemigroupPoint y;
    GroupValue lhs;
    GroupValue rhs;
};

struct CheckResult {
    bool holds = true;
    std::optional<CheckWitness> witness; // first failing pair, in grid order
    std::size_t pairs_checked = 0;
    std::size_t pairs_skipped = 0; // table pairs with missing samples
    double max_residual = 0.0;

    double coverage() const {
        const auto total = pairs_checked + pairs_skipped;
        return total == 0 ? 0.0 : static_cast<double>(pairs_checked) / static_cast<double>(total);
    }
};

/// Does rho satisfy the degree-j monomial identity
/// forward_difference(rho, j, x, y) = (j!) rho(y) at every grid pair?
CheckResult check_monomial(const FunctionHandle& rho, int degree, const Grid& grid);

/// Does rho satisfy forward_difference(rho, degree + 1, x, y) = 0 at every grid pair?
CheckResult check_polynomial(const FunctionHandle& rho, int degree, const Grid& grid);

FunctionHandle make_monomial(const SemigroupInstance& domain, const AbelianGroup& codomain,
                             const MonomialSpec& spec);

FunctionHandle make_polynomial(const SemigroupInstance& domain, const AbelianGroup& codomain,
                               const MonomialSum& sum);

/// Splits a degree-n polynomial into its monomial components by top-degree
/// extraction at base point 0:
///   rho_n(y) = divide_by_factorial(forward_difference(rho, n, 0, y), n),
/// then recursion on rho - rho_n. The grid is used to check the polynomial
/// precondition and to verify each returned component a posteriori; any
/// failed check raises DecompositionError.
MonomialSum decompose(const FunctionHandle& rho, int degree, const Grid& grid);

} // namespace frechet
