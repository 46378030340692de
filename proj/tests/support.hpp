#pragma once

#include <initializer_list>

#include "opseq/operad.hpp"

namespace opseq::testing {

inline Matrix M(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<Vector> rs;
    std::size_t cols = 0;
    for (auto r : rows) {
        Vector v;
        for (long x : r)
            v.push_back(Scalar(x));
        cols = v.size();
        rs.push_back(v);
    }
    return Matrix::from_rows(rs, cols);
}

inline Vector V(std::initializer_list<long> xs)
{
    Vector v;
    for (long x : xs)
        v.push_back(Scalar(x));
    return v;
}

/// P(2) = {m, h} with δh = m, P(3) = {c, c'} with δc' = c; trivial Σ action.
inline Operad acyclic_operad(const Ring& ring)
{
    Operad o(ring, 3, "acyclic");
    o.set_component(1, {"id"}, {0});
    o.set_component(2, {"m", "h"}, {0, 1});
    o.set_component(3, {"c", "c'"}, {0, 1});
    o.component(2).delta(0, 1) = 1;
    o.component(3).delta(0, 1) = 1;
    o.unit = unit_vector(1, 0);
    for (int n = 1; n <= 3; ++n)
        for (std::size_t b = 0; b < o.rank(n); ++b)
            o.set_composition(1, n, 1, 0, b, unit_vector(o.rank(n), b));
    for (int m = 2; m <= 3; ++m)
        for (int i = 1; i <= m; ++i)
            for (std::size_t a = 0; a < o.rank(m); ++a)
                o.set_composition(m, 1, i, a, 0, unit_vector(o.rank(m), a));
    for (int i = 1; i <= 2; ++i) {
        o.set_composition(2, 2, i, 0, 0, V({1, 0}));
        o.set_composition(2, 2, i, 1, 0, V({0, 1}));
        o.set_composition(2, 2, i, 0, 1, V({0, 1}));
    }
    return o;
}

} // namespace opseq::testing

#include "opseq/algebra.hpp"

namespace opseq::testing {


/// Exterior algebra Λ(e) with |e| = (0,1), d = 0.
inline DGBigradedModule exterior_one(const Ring& ring)
{
    DGBigradedModule c{BigradedModule(ring), GradedMap{{0, -1}, {}}};
    c.module.set({0, 0}, Component{{"1"}, {}});
    c.module.set({0, 1}, Component{{"e"}, {}});
    return c;
}

inline BasisProduct exterior_one_product(const DGBigradedModule& c)
{
    return [&c](const Generator& x, const Generator& y) -> Vector {
        if (x.b.q + y.b.q > 1)
            return {};
        return unit_vector(c.module.rank({0, x.b.q + y.b.q}), 0);
    };
}

/// {1, x} at (0,0), {y, xy} at (0,1), d y = x, x² = 0.
inline DGBigradedModule koszul_small(const Ring& ring)
{
    DGBigradedModule c{BigradedModule(ring), GradedMap{{0, -1}, {}}};
    c.module.set({0, 0}, Component{{"1", "x"}, {}});
    c.module.set({0, 1}, Component{{"y", "xy"}, {}});
    c.d.blocks[{0, 1}] = M({{0, 0}, {1, 0}});
    return c;
}

/// Monomials x^a y^b (a ≤ 1 or b = 0 handled by the caller's table); encoded by index.
inline BasisProduct koszul_small_product()
{
    // (0,0): 1 -> (0,0), x -> (1,0); (0,1): y -> (0,1), xy -> (1,1)
    return [](const Generator& g, const Generator& h) -> Vector {
        auto exps = [](const Generator& z) { return std::pair<int, int>{int(z.index), int(z.b.q)}; };
        auto [a1, b1] = exps(g);
        auto [a2, b2] = exps(h);
        int a = a1 + a2, b = b1 + b2;
        if (b > 1)
            return {};
        Vector v(2);
        if (a > 1)
            return v;
        v[std::size_t(a)] = 1;
        return v;
    };
}

/// F2[x]/(x^4) ⊗ Λ(y), |x| = (0,0), |y| = (0,1), d y = x².
inline DGBigradedModule truncated_poly(const Ring& ring)
{
    DGBigradedModule c{BigradedModule(ring), GradedMap{{0, -1}, {}}};
    c.module.set({0, 0}, Component{{"1", "x", "x2", "x3"}, {}});
    c.module.set({0, 1}, Component{{"y", "yx", "yx2", "yx3"}, {}});
    Matrix d(4, 4);
    d(2, 0) = 1;
    d(3, 1) = 1;
    c.d.blocks[{0, 1}] = d;
    return c;
}

inline BasisProduct truncated_poly_product()
{
    return [](const Generator& g, const Generator& h) -> Vector {
        int a = int(g.index + h.index), b = int(g.b.q + h.b.q);
        if (b > 1)
            return {};
        Vector v(4);
        if (a > 3)
            return v;
        v[std::size_t(a)] = 1;
        return v;
    };
}

/// gl_2 at (0,0) with basis E11, E12, E21, E22 and matrix product.
inline DGBigradedModule gl2(const Ring& ring)
{
    DGBigradedModule c{BigradedModule(ring), GradedMap{{0, -1}, {}}};
    c.module.set({0, 0}, Component{{"E11", "E12", "E21", "E22"}, {}});
    return c;
}

inline BasisProduct gl2_product()
{
    return [](const Generator& g, const Generator& h) -> Vector {
        std::size_t i = g.index / 2, j = g.index % 2, k = h.index / 2, l = h.index % 2;
        Vector v(4);
        if (j == k)
            v[i * 2 + l] = 1;
        return v;
    };
}

inline BasisProduct gl2_bracket(const Ring& ring)
{
    auto p = gl2_product();
    return [p, ring](const Generator& g, const Generator& h) -> Vector { return sub(ring, p(g, h), p(h, g)); };
}

/// Λ(a, b) with |a| = |b| = (0,1): 1, a, b, ab.
inline DGBigradedModule exterior_two(const Ring& ring)
{
    DGBigradedModule c{BigradedModule(ring), GradedMap{{0, -1}, {}}};
    c.module.set({0, 0}, Component{{"1"}, {}});
    c.module.set({0, 1}, Component{{"a", "b"}, {}});
    c.module.set({0, 2}, Component{{"ab"}, {}});
    return c;
}

inline BasisProduct exterior_two_product(const Ring& ring)
{
    return [ring](const Generator& g, const Generator& h) -> Vector {
        auto mask = [](const Generator& z) { return z.b.q == 0 ? 0 : z.b.q == 2 ? 3 : int(z.index) + 1; };
        int m1 = mask(g), m2 = mask(h);
        if (m1 & m2)
            return {};
        int m = m1 | m2;
        long q = __builtin_popcount(unsigned(m));
        if (q > 2)
            return {};
        // sign: number of transpositions to sort (letters of g) before (letters of h)
        long sign = (m1 == 2 && m2 == 1) ? 1 : 0;
        Vector v(q == 1 ? 2 : 1);
        std::size_t idx = q == 1 ? std::size_t(m - 1) : 0;
        v[idx] = ring.from_int(sign ? -1 : 1);
        return v;
    };
}

} // namespace opseq::testing

#include "opseq/generators.hpp"

namespace opseq::testing {

/// 𝔽₂[x,y]/(x³, y², x²y), |x| = 0, |y| = 1, d y = x², filtered by the dg
/// ideal (x) in weight 0 with y in weight 1. Basis x, x², y, xy.
inline FilteredAlgebra dg_ideal_example()
{
    FilteredAlgebra f;
    f.ring = Ring::prime_field(2);
    f.basis = {{"x", 0, 0}, {"xx", 0, 0}, {"y", 1, 1}, {"xy", 1, 0}};
    f.d = Matrix(4, 4);
    f.d(1, 2) = 1;
    f.product = [](std::size_t a, std::size_t b) -> Vector {
        if (a > b)
            std::swap(a, b);
        Vector v(4);
        if (a == 0 && b == 0)
            v[1] = 1;
        else if (a == 0 && b == 2)
            v[3] = 1;
        else
            return {};
        return v;
    };
    return f;
}

} // namespace opseq::testing
