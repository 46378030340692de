#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "opseq/check.hpp"
#include "opseq/linalg.hpp"

namespace opseq {

/// Permutation of {1..n} stored 0-based: perm[k] = π(k+1) - 1.
using Permutation = std::vector<int>;

/// Adjacent transpositions a_1, a_2, ... with π ∘ s_{a_1} ∘ s_{a_2} ∘ ... = id (a is 1-based).
std::vector<int> transposition_word(const Permutation& perm);
Permutation compose_perm(const Permutation& rho, const Permutation& pi); // rho ∘ pi
Permutation inverse_perm(const Permutation& pi);
Permutation adjacent_transposition(int n, int a);

struct OperadComponent {
    std::vector<std::string> labels;
    std::vector<long> degrees;
    Matrix delta;                       // column j = δ(e_j)
    std::vector<Matrix> transpositions; // T_a at index a-1, a = 1..n-1

    std::size_t rank() const noexcept { return labels.size(); }
};

/// Operations act on inputs: (T_a op)(x_1..x_n) = op(.., x_{a+1}, x_a, ..).
/// Partial composition p ∘_i q substitutes q into input i of p.
class Operad {
public:
    Operad() = default;
    Operad(Ring ring, int arity_cap, std::string name);

    Ring ring = Ring::rationals();
    int arity_cap = 3;
    std::string name;
    std::vector<OperadComponent> components; // index = arity, 0 unused
    /// (m,n,i) -> dim P(m+n-1) × (dim P(m)·dim P(n)); column a·dim P(n) + b holds e_a ∘_i e_b.
    std::map<std::tuple<int, int, int>, Matrix> compositions;
    Vector unit; // in P(1)

    const OperadComponent& component(int n) const;
    OperadComponent& component(int n);
    std::size_t rank(int n) const { return component(n).rank(); }

    /// Set P(n) with the given labels/degrees, δ = 0 and trivial Σ action.
    void set_component(int n, std::vector<std::string> labels, std::vector<long> degrees);
    void set_composition(int m, int n, int i, std::size_t a, std::size_t b, const Vector& value);

    Vector compose(int m, int n, int i, const Vector& a, const Vector& b) const;
    Vector act_transposition(int n, int a, const Vector& v) const;
    Vector act(int n, const Permutation& perm, const Vector& v) const;
    Vector delta(int n, const Vector& v) const;
    /// Degree of a nonzero homogeneous element; nullopt for zero or mixed.
    std::optional<long> degree(int n, const Vector& v) const;
    std::size_t index_of(int n, const std::string& label) const;
};

Operad builtin_comm(const Ring& ring, int arity_cap = 3);
Operad builtin_assoc(const Ring& ring, int arity_cap = 3);
/// Basis of Lie(3): b∘₁b = [[x,y],z], b∘₂b = [x,[y,z]]. Throws UnsupportedArity for cap > 3.
Operad builtin_lie(const Ring& ring, int arity_cap = 3);
/// Operad by name: comm, assoc, lie.
Operad builtin_operad(const std::string& name, const Ring& ring, int arity_cap = 3);

/// Assoc basis element of arity k as a word (0-based letters).
std::vector<int> assoc_word(int k, std::size_t index);
std::size_t assoc_index(const std::vector<int>& word);

CheckReport check_operad(const Operad& o);

struct OperadHomology {
    Operad operad;                 // δ = 0
    std::vector<Matrix> lifts;     // per arity: dim P(n) × dim H(n)
};

/// H(P, δ) with induced action and compositions. Over ℤ the homology must be torsion free.
OperadHomology homology_operad_data(const Operad& o);
Operad homology_operad(const Operad& o);

} // namespace opseq
