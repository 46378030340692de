#pragma once

#include <map>
#include <memory>
#include <set>

#include "opseq/algebra.hpp"

namespace opseq {

enum class ExtensionPolicy {
    constant_above,  // i is the identity from p_max on, C vanishes above p_max
    repeat_last_map, // the block p_max-1 -> p_max repeats, C_p = C_{p_max} above p_max
};

const char* policy_name(ExtensionPolicy p);

/// 0 -> A_{p-1} --i--> A_p --j--> C_p -> 0 for p in [p_min, p_max], A_{p_min-1} = 0.
/// Stages above p_max are copies of stage p_max (see ExtensionPolicy).
struct AlgebraTower {
    OperadAlgebra A;
    GradedMap i; // shift (1,0), blocks keyed by source
    OperadAlgebra C;
    GradedMap j; // shift (0,0)
    long p_min = 0;
    long p_max = 0;
    ExtensionPolicy policy = ExtensionPolicy::constant_above;

    const Ring& ring() const noexcept { return A.ring(); }
    /// q-degrees occurring in A or C.
    std::set<long> q_values() const;

    // Stage data with the extension policy applied; zero below p_min.
    std::size_t a_rank(Bidegree b) const;
    std::size_t c_rank(Bidegree b) const;
    Matrix a_relations(Bidegree b) const;
    Matrix c_relations(Bidegree b) const;
    Matrix a_cycles(Bidegree b) const;
    Matrix a_boundaries(Bidegree b) const;
    Matrix c_cycles(Bidegree b) const;
    Matrix c_boundaries(Bidegree b) const;
    Matrix a_d(Bidegree b) const;
    /// A_b -> A_{b+(1,0)}.
    Matrix i_block(Bidegree b) const;
    /// A_b -> A_{b+(e,0)}, e >= 0.
    Matrix i_power(Bidegree b, long e) const;
    /// A_b -> C_b.
    Matrix j_block(Bidegree b) const;
};

/// Chain maps, exactness, extension policy, conditions (i) and (ii).
CheckReport check_tower(const AlgebraTower& t);

/// k = i^{-1} d j^{-1} on a cycle of C at b (chain level); result is a cycle of A at b-(1,1).
/// Throws LiftFailed when exactness is broken.
Vector connecting_chain(const AlgebraTower& t, Bidegree b, const Vector& cycle);

/// Class version: normal-form coordinates in H(C)_b to coordinates in H(A)_{b-(1,1)}.
Vector connecting(const AlgebraTower& t, const HomologyData& hc, const HomologyData& ha, Bidegree b, const Vector& coords);

/// Chain-level tower data: C side over p in [p_min, p_top], A side one stage further.
struct TowerChains {
    Ring ring = Ring::rationals();
    long p_min = 0;
    long p_max = 0;
    long p_top = 0;
    long a_top = 0; // A side is stored for p <= a_top (>= p_top + 1)
    std::set<long> qs;
    std::map<Bidegree, Matrix> za, ba, zc, bc; // lattices, relations included
    std::map<Bidegree, Matrix> i, j;           // blocks keyed by source
    std::map<Bidegree, std::size_t> arank, crank;

    static std::shared_ptr<const TowerChains> build(const AlgebraTower& t, long p_top, long a_top);
    std::size_t a_rank(Bidegree b) const;
    std::size_t c_rank(Bidegree b) const;
    /// Stored matrix at b, or an empty rows × 0 matrix.
    static Matrix get(const std::map<Bidegree, Matrix>& m, Bidegree b, std::size_t rows);
};

/// Exact couple at level r, presented in chain coordinates: E^r_b is a
/// subquotient of C_b and D^r_b = i^{r-1} D^1 a subquotient of A_b.
struct Couple {
    int level = 1;
    std::shared_ptr<const TowerChains> chains;
    std::map<Bidegree, Subquotient> E;
    std::map<Bidegree, Subquotient> D;
    /// k_r on E[b].generators(): chains of A at b-(1,1).
    std::map<Bidegree, Matrix> k;
    /// j_r on D[b].generators(): chains of C at b-(r-1,0).
    std::map<Bidegree, Matrix> j;

    const Ring& ring() const noexcept { return chains->ring; }
    /// d_r = j_r k_r on E[b].generators(): chains of C at b-(r,1).
    Matrix d_on_generators(Bidegree b) const;
    /// d_r in normal-form coordinates.
    Matrix d_block(Bidegree b) const;
    /// Exactness at D, E corners and d_r^2 = 0 for p in [p_lo, p_hi].
    CheckReport check_exactness(long p_lo, long p_hi) const;
};

/// p_top defaults to p_max; a larger top keeps derived pages exact near p_max
/// for repeat_last_map towers. D is kept up to d_top (default p_top + 1);
/// exactness of E^r at p is only checked when p + r - 1 <= d_top.
Couple first_couple(const AlgebraTower& t, std::optional<long> p_top = std::nullopt, std::optional<long> d_top = std::nullopt);
Couple derive(const Couple& c);

} // namespace opseq
