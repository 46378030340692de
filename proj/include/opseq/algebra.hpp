#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "opseq/graded.hpp"
#include "opseq/operad.hpp"

namespace opseq {

struct Generator {
    Bidegree b;
    std::size_t index = 0;
    auto operator<=>(const Generator&) const = default;
};

/// Homogeneous element of a bigraded module.
struct Element {
    Bidegree b;
    Vector v;
};

struct GammaKey {
    int arity = 0;
    std::size_t op = 0;
    std::vector<Generator> inputs;
    auto operator<=>(const GammaKey&) const = default;
    bool operator==(const GammaKey&) const = default;
};

struct GammaKeyHash {
    std::size_t operator()(const GammaKey& k) const noexcept;
};

using GammaTable = std::unordered_map<GammaKey, Vector, GammaKeyHash>;

/// Γ(π; x_1..x_k) lands at (Σp, s + Σq). With clamp_p set, the horizontal
/// degree is min(Σp, clamp_p). Outputs outside the carrier support are zero.
class OperadAlgebra {
public:
    Operad operad;
    DGBigradedModule carrier;
    GammaTable gamma;
    std::optional<long> clamp_p;

    const Ring& ring() const noexcept { return carrier.ring(); }
    Bidegree output_bidegree(long op_degree, const std::vector<Bidegree>& inputs) const;
    /// Γ(e_op; generators); zero vector (possibly empty) when absent.
    Vector basis_action(int arity, std::size_t op, const std::vector<Generator>& inputs) const;
    void set(int arity, std::size_t op, std::vector<Generator> inputs, Vector value);
    /// Γ(unit; x) = x for all generators, when the unit is a basis vector of P(1).
    void fill_unit_action();
    std::vector<Generator> generators() const;
};

/// Calls fn on carrier generator tuples of length k whose bidegree tuple passes
/// admit; fn returns false to stop (then this returns false).
bool for_each_basis_tuple(const OperadAlgebra& a, int k, const std::function<bool(const std::vector<Bidegree>&)>& admit,
                          const std::function<bool(const std::vector<Generator>&)>& fn);

/// Multilinear extension of the tables. π must be homogeneous. Throws ArityOutOfRange.
Element act(const OperadAlgebra& a, int arity, const Vector& pi, const std::vector<Element>& xs);

CheckReport check_algebra(const OperadAlgebra& a);
/// Only the derivation relation d Γ(π; x) = Γ(δπ; x) + Σ ± Γ(π; .., d x_h, ..),
/// sign (-1)^{|π| + q_1 + ... + q_{h-1}}, against the carrier differential.
CheckReport check_derivation(const OperadAlgebra& a);

/// H(A) as an algebra over H(P). Carrier differential zero.
OperadAlgebra homology_action(const OperadAlgebra& a);

/// Product of two basis elements, as a vector at the output bidegree.
using BasisProduct = std::function<Vector(const Generator&, const Generator&)>;

/// Γ(μ_k) = iterated left-normed product.
OperadAlgebra comm_algebra(const DGBigradedModule& carrier, const BasisProduct& mult, int arity_cap = 3,
                           std::optional<long> clamp_p = std::nullopt);
/// Γ(w; x) = Koszul sign · x_{w1} ⋯ x_{wk}.
OperadAlgebra assoc_algebra(const DGBigradedModule& carrier, const BasisProduct& mult, int arity_cap = 3,
                            std::optional<long> clamp_p = std::nullopt);
/// Γ(b) = bracket; Γ(b∘₁b; x,y,z) = [[x,y],z], Γ(b∘₂b; x,y,z) = [x,[y,z]].
OperadAlgebra lie_algebra(const DGBigradedModule& carrier, const BasisProduct& bracket, std::optional<long> clamp_p = std::nullopt);

/// Linear extension of a basis product to homogeneous elements.
Element multiply(const OperadAlgebra& a, const BasisProduct& mult, const Element& x, const Element& y);

} // namespace opseq
