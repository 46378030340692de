#pragma once

#include <optional>
#include <vector>

#include "opseq/matrix.hpp"

namespace opseq {

struct RrefResult {
    Matrix reduced;
    std::vector<std::size_t> pivots;
    Matrix basis_change; // basis_change * m == reduced
};

/// Reduced row-echelon form over a field. Pivot rule: first nonzero entry
/// scanning top-to-bottom within the leftmost column that has one.
RrefResult rref(const Matrix& m, const Ring& ring);

/// Columns spanning ker m; over ℤ a basis of the kernel lattice.
Matrix kernel(const Matrix& m, const Ring& ring);

/// Some x with m x = b, or nullopt when b is not in the image.
std::optional<Vector> solve(const Matrix& m, const Vector& b, const Ring& ring);

struct SmithForm {
    Matrix U;
    Matrix D;
    Matrix V;
};

/// Smith normal form over ℤ: U m V = D, d1 | d2 | ..., U and V unimodular.
SmithForm snf(const Matrix& m);

/// Diagonal form over any supported ring. Over fields the nonzero diagonal
/// entries are 1. Also returns U^{-1}.
struct DiagonalForm {
    Matrix U;
    Matrix U_inverse;
    Matrix D;
    Matrix V;
    std::size_t rank = 0;
};
DiagonalForm diagonal_form(const Matrix& m, const Ring& ring);

std::size_t rank(const Matrix& m, const Ring& ring);
Integer determinant_integer(const Matrix& m);

/// Canonical basis (column echelon / Hermite style) of the column span.
Matrix span_basis(const Matrix& gens, const Ring& ring);
bool in_span(const Matrix& gens, const Vector& v, const Ring& ring);
bool span_contains(const Matrix& big, const Matrix& small, const Ring& ring);
bool same_span(const Matrix& a, const Matrix& b, const Ring& ring);
/// Basis of {x : m x ∈ span(target_gens)}.
Matrix preimage(const Matrix& m, const Matrix& target_gens, const Ring& ring);
/// Basis of span(a) ∩ span(b) (same ambient).
Matrix intersect_spans(const Matrix& a, const Matrix& b, const Ring& ring);
/// Coordinates of v with respect to independent columns `basis`; nullopt if outside.
std::optional<Vector> coordinates(const Matrix& basis, const Vector& v, const Ring& ring);

/// Relations lattice of a normal-form module: diag(orders) restricted to torsion coordinates.
Matrix relation_matrix(const std::vector<Integer>& orders);
/// Reduce torsion coordinates into [0, order).
Vector reduce_coordinates(const Ring& ring, const std::vector<Integer>& orders, Vector v);

/// Z/B for lattices B ⊆ Z in a free ambient module, with a normal form:
/// generators ordered as torsion (d1 | d2 | ..., each ≥ 2) then free.
class Subquotient {
public:
    Subquotient() = default;

    std::size_t ambient_rank() const noexcept { return ambient_; }
    const Matrix& generators() const noexcept { return z_basis_; }
    const Matrix& relations() const noexcept { return b_gens_; }
    /// Module orders per normal-form generator: 0 for free, d ≥ 2 for ℤ/d.
    const std::vector<Integer>& orders() const noexcept { return orders_; }
    std::size_t size() const noexcept { return orders_.size(); }
    std::size_t free_rank() const;
    std::vector<Integer> invariant_factors() const;
    /// Over a field: the dimension.
    std::size_t dimension() const { return size(); }
    bool is_zero() const noexcept { return orders_.empty(); }

    /// ambient × size(): representatives of the normal-form generators.
    const Matrix& lift() const noexcept { return lift_; }
    Vector lift(const Vector& coords) const;
    /// Normal-form coordinates of an ambient vector lying in span Z; nullopt otherwise.
    std::optional<Vector> project(const Vector& ambient) const;
    /// True when v ∈ span Z and its class vanishes.
    bool is_zero_class(const Vector& v) const;
    bool contains(const Vector& v) const { return project(v).has_value(); }

    const Ring& ring() const noexcept { return ring_; }

private:
    friend Subquotient subquotient(std::size_t, const Matrix&, const Matrix&, const Ring&);

    Ring ring_ = Ring::rationals();
    std::size_t ambient_ = 0;
    Matrix z_basis_;            // ambient × z, independent columns
    Matrix b_gens_;             // ambient × b
    Matrix u_;                  // z × z
    std::vector<std::size_t> kept_;
    std::vector<Integer> orders_;
    Matrix lift_;
};

/// Throws Error(not_a_submodule) when span B ⊄ span Z.
Subquotient subquotient(std::size_t ambient_rank, const Matrix& z, const Matrix& b, const Ring& ring);

} // namespace opseq
