#pragma once

#include <map>

#include "opseq/spectral.hpp"

namespace opseq {

/// Abutment of a constant_above tower. H_q is the homology of the top stage
/// A_{p_max,q}; every lattice below lives in the chains of that stage.
struct ConvergenceData {
    Ring ring = Ring::rationals();
    long p_min = 0;
    long p_max = 0;
    std::map<long, Subquotient> H;
    /// F_p H_q: i^{p_max-p}(cycles of A_p) + boundaries, keyed by (p,q).
    std::map<Bidegree, Matrix> filtration;
    /// F_p H_q / F_{p-1} H_q.
    std::map<Bidegree, Subquotient> graded;
    /// Action of H(P) on the associated graded, zero differential.
    OperadAlgebra graded_action;
};

/// Throws Unsupported for repeat_last_map towers.
ConvergenceData colimit(const AlgebraTower& t);

/// Fills graded and graded_action. Throws WellDefinednessViolation when a
/// product depends on the representative modulo F_{p-1}.
void associated_graded(const AlgebraTower& t, ConvergenceData& cd);

/// Some a in A_{p,q} whose image in H_q is the chain x of F_p (cycle representative).
Vector stage_representative(const AlgebraTower& t, Bidegree b, const Vector& x);

struct GammaBlock {
    Matrix map; // size E^∞_b × size gr_b
    bool injective = false;
    bool surjective = false;
};

struct GammaMap {
    std::map<Bidegree, GammaBlock> blocks;
    bool injective() const;
    bool isomorphism() const;
};

/// [a] in F_p/F_{p-1} goes to [j(a)] in E^∞_{p,q}.
GammaMap gamma_map(const AlgebraTower& t, const ConvergenceData& cd, const Page& e_infinity);

/// γ(Γ_gr(π; y)) = Γ_{E^∞}(π; γ y) on all basis tuples.
CheckReport check_gamma_multiplicative(const ConvergenceData& cd, const GammaMap& g, const OperadAlgebra& e_infinity_action);

struct BoundedBelow {
    bool certified = false;
    std::map<long, long> p_of_q; // A_{p,q} = 0 for p < p(q)
    std::string note;
};

/// Windowed towers vanish below p_min, so the certificate always exists.
BoundedBelow bounded_below(const AlgebraTower& t);

} // namespace opseq
