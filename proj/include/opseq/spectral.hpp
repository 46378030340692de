#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opseq/couple.hpp"

namespace opseq {

enum class Route { derivation, cycles };

const char* route_name(Route r);

/// E^r_b = Z^r_b / B^r_b as lattices in the chains C_b: Z^r contains the
/// C-boundaries and relations, so E¹ = H(C). Pages cover p in [p_min, p_max].
struct Page {
    int r = 1;
    bool infinity = false;
    Route route = Route::derivation;
    Ring ring = Ring::rationals();
    std::map<Bidegree, Subquotient> E;
    /// d_r on E[b].generators(): chains of C at b-(r,1).
    std::map<Bidegree, Matrix> d_chain;
    /// d_r in normal-form coordinates, size(b-(r,1)) × size(b).
    std::map<Bidegree, Matrix> d;

    std::size_t size(Bidegree b) const;
    Bidegree d_shift() const { return {-r, -1}; }
    /// Nonzero components as a module (labels e0, e1, ..., torsion orders) with d_r.
    DGBigradedModule module() const;
    bool d_is_zero() const;
};

/// first_couple derived r-1 times. repeat_last_map towers are computed with a
/// margin of r(r+1)/2 + 1 stages above p_max.
Page page_via_derivation(const AlgebraTower& t, int r);
/// Pages 1..r_max from one chain of derived couples.
std::vector<Page> pages_via_derivation(const AlgebraTower& t, int r_max);

/// Z^r = k^{-1}(i^{r-1} D), B^r = j(ker i^{r-1}) + B(C). d_r[z] = [j(w)] with
/// i^{r-1} w = k z. exponent_offset shifts the i-exponent (mutation testing only).
Page page_via_cycles(const AlgebraTower& t, int r, long exponent_offset = 0);

/// Same lattices per bidegree, same invariants, and the identity on
/// representatives commutes with d_r.
CheckReport cross_check(const Page& a, const Page& b);

/// Same Z and B lattices at every bidegree; differentials are ignored.
bool same_subquotients(const Page& a, const Page& b);

/// Action of H(P) on the page through representatives. Throws ClosureViolation
/// when a product of Z^r cycles leaves Z^r and WellDefinednessViolation when
/// it depends on the representative modulo B^r.
OperadAlgebra page_action(const AlgebraTower& t, const Page& page);

/// Derivation relation of d_r against the page action, operad differential zero.
CheckReport check_leibniz(const OperadAlgebra& page_algebra);

/// (∩ Z^r) / (∪ B^r) computed in closed form: Z^∞ = ker k, B^∞ = j(ker i^N)
/// with N past the point where ker i^n stops growing.
Page e_infinity_page(const AlgebraTower& t);

struct Stabilization {
    bool certified = false;
    int r0 = 0;
    std::string certificate;
};

/// First r with Z^r = Z^∞, B^r = B^∞ at every bidegree and d_r = 0.
Stabilization detect_stabilization(const std::vector<Page>& pages, const Page& e_infinity);

struct SpectralOptions {
    int r_max = 16;
    Route route = Route::derivation;
    bool cross_check = false;
};

struct SpectralSequence {
    AlgebraTower tower;
    std::vector<Page> pages; // pages[r-1]
    std::vector<Page> alternate; // other route, when cross-checking
    std::vector<CheckReport> cross_checks;
    Stabilization stabilization;
    Page e_infinity;
    bool e_infinity_exact = false;
};

SpectralSequence compute_spectral_sequence(const AlgebraTower& t, const SpectralOptions& opt = {});

} // namespace opseq
