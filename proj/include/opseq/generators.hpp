#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "opseq/couple.hpp"

namespace opseq {

struct FilteredBasisElement {
    std::string label;
    long q = 0;
    long weight = 0; // filtration degree, >= 0
};

/// A dg algebra with a basis graded by (weight, q). d may only lower or keep
/// the weight; the product of basis elements has weight at most the sum.
struct FilteredAlgebra {
    Ring ring = Ring::rationals();
    std::vector<FilteredBasisElement> basis;
    Matrix d; // N × N, column e = d(e)
    /// Product of basis elements as a vector over the whole basis; empty means zero.
    std::function<Vector(std::size_t, std::size_t)> product;
    std::string operad = "comm"; // comm or assoc
    int arity_cap = 3;
};

/// A_p = weight <= p, C_p = weight == p, i inclusion, j projection,
/// window [0, max weight], constant_above. Γ_A clamps to p_max.
AlgebraTower filtered_tower(const FilteredAlgebra& f);

struct RandomAlgebraOptions {
    bool commutative = true;
    int max_rank = 4;     // per A_{p,q}
    int max_q_span = 6;   // number of q-degrees
    long max_p = 3;       // p_max bound
    bool gadget = false;  // append the v, u, w generators used by mutation towers
    int arity_cap = 3;
};

/// Random truncated free (graded-commutative or tensor) algebra on 2-3
/// generators with weights in {0,1,2}; d(g) is a random combination of
/// monomials in earlier cycle generators. Deterministic per seed.
FilteredAlgebra random_filtered_algebra(std::uint64_t seed, const Ring& ring, const RandomAlgebraOptions& opt = {});

/// Two-column bicomplex: weight-0 generators plus one odd weight-1 generator y.
FilteredAlgebra random_bicomplex_algebra(std::uint64_t seed, const Ring& ring);

struct BocksteinSpec {
    long q = 2;                                    // the prime
    std::vector<std::pair<long, int>> free;        // (degree m, count) of ℤ summands in H_m
    std::vector<std::pair<long, int>> torsion;     // (degree m, s): a ℤ/q^s summand in H_m
    std::uint64_t seed = 0;                        // unimodular scrambling
    long p_max = -1;                               // default 2(s_max + 1)
};

/// Stages A_p = the ℤ-complex for p in [0, p_max], i = ×q, C_0 = A, C_p = A/q
/// for p > 0, j = identity on coordinates, repeat_last_map. Products vanish.
AlgebraTower bockstein_tower(const BocksteinSpec& spec);

/// The integral complex used by bockstein_tower: per degree m, the block d: C_m -> C_{m-1}.
DGBigradedModule bockstein_complex(const BocksteinSpec& spec);

enum class TwistTarget { C_only, A_and_C };

/// Scale every Γ entry with inputs at stages p_1..p_k by λ^{Σ_{a<b} p_a p_b}.
/// Twisting C alone breaks condition (i); twisting both breaks (ii).
void twist_tower(AlgebraTower& t, TwistTarget target, long lambda);

} // namespace opseq
