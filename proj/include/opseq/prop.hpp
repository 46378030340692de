#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "opseq/algebra.hpp"

namespace opseq {

/// Component P(m,n): operations with m inputs and n outputs.
struct PropComponent {
    std::vector<std::string> labels;
    std::vector<long> degrees;
    Matrix delta;
    std::vector<Matrix> in_transpositions;  // permute inputs, index a-1
    std::vector<Matrix> out_transpositions; // permute outputs, index a-1

    std::size_t rank() const noexcept { return labels.size(); }
};

/// Components exist for m, n ≥ 0 with m + n ≤ cap.
/// vertical(f, g) is "g after f" for f ∈ P(m,n), g ∈ P(n,l).
class Prop {
public:
    Prop() = default;
    Prop(Ring ring, int cap, std::string name);

    Ring ring = Ring::rationals();
    int cap = 4;
    std::string name;
    std::map<std::pair<int, int>, PropComponent> components;
    /// (m,n,l) -> dim P(m,l) × (dim P(m,n)·dim P(n,l))
    std::map<std::tuple<int, int, int>, Matrix> vertical_table;
    /// (m1,n1,m2,n2) -> dim P(m1+m2,n1+n2) × (dim P(m1,n1)·dim P(m2,n2))
    std::map<std::tuple<int, int, int, int>, Matrix> horizontal_table;
    Vector unit;  // in P(1,1)
    Vector empty; // in P(0,0), unit of ⊗

    bool has(int m, int n) const { return m >= 0 && n >= 0 && m + n <= cap; }
    const PropComponent& component(int m, int n) const;
    PropComponent& component(int m, int n);
    std::size_t rank(int m, int n) const { return has(m, n) ? component(m, n).rank() : 0; }
    void set_component(int m, int n, std::vector<std::string> labels, std::vector<long> degrees);

    Vector vertical(int m, int n, int l, const Vector& f, const Vector& g) const;
    Vector horizontal(int m1, int n1, int m2, int n2, const Vector& f, const Vector& g) const;
    Vector act_in(int m, int n, int a, const Vector& f) const;
    Vector act_out(int m, int n, int a, const Vector& f) const;
    /// (R_π f)(x) = f(x_π) on inputs.
    Vector permute_inputs(int m, int n, const Permutation& pi, const Vector& f) const;
    /// (L_τ f)(x) = f(x)_τ on outputs.
    Vector permute_outputs(int m, int n, const Permutation& tau, const Vector& f) const;
    std::optional<long> degree(int m, int n, const Vector& f) const;
    /// 1_n = 1^{⊗n}; 1_0 = empty.
    Vector identity(int n) const;
};

CheckReport check_prop(const Prop& p);

/// End_V with V free of the given rank in degree 0; basis of P(m,n) = matrix units E_{J,I}.
Prop endomorphism_prop(const Ring& ring, std::size_t rank, int cap = 4);
/// P(n,n) = span{1_n}, all other components zero, trivial actions.
Prop trivial_prop(const Ring& ring, int cap = 4);

/// Sparse element of A^{⊗n}: tensor word of generators -> coefficient.
using TensorElement = std::map<std::vector<Generator>, Scalar>;

struct PropGammaKey {
    int m = 0;
    int n = 0;
    std::size_t op = 0;
    std::vector<Generator> inputs;
    auto operator<=>(const PropGammaKey&) const = default;
};

class PropAlgebra {
public:
    Prop prop;
    DGBigradedModule carrier;
    std::map<PropGammaKey, TensorElement> gamma;

    const Ring& ring() const noexcept { return carrier.ring(); }
    TensorElement act(int m, int n, const Vector& f, const TensorElement& x) const;
};

CheckReport check_prop_algebra(const PropAlgebra& a);

/// V of the given rank at bidegree (0,0), d = 0, Γ = evaluation of End_V.
PropAlgebra evaluation_algebra(const Ring& ring, std::size_t rank, int cap = 4);

} // namespace opseq
