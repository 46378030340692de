#pragma once

// Direct computations used as independent references: they work from the raw
// basis data and never touch the couple machinery.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "opseq/generators.hpp"

namespace opseq::testing {

/// Rows/columns of the global differential between basis index lists.
inline Matrix sub_block(const Matrix& d, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols)
{
    Matrix m(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            m(r, c) = d(rows[r], cols[c]);
    return m;
}

inline std::vector<std::size_t> basis_where(const FilteredAlgebra& f, long q, long wlo, long whi)
{
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < f.basis.size(); ++n)
        if (f.basis[n].q == q && f.basis[n].weight >= wlo && f.basis[n].weight <= whi)
            out.push_back(n);
    return out;
}

inline Matrix cat(const Matrix& a, const Matrix& b)
{
    if (a.cols() == 0)
        return b.cols() == 0 ? Matrix(a.rows(), 0) : b;
    return b.cols() == 0 ? a : a.hcat(b);
}

inline Matrix kernel_or_all(const Matrix& m, std::size_t n, const Ring& ring)
{
    return m.rows() == 0 ? Matrix::identity(n) : kernel(m, ring);
}

/// E² of a two-column bicomplex (weights 0 and 1): H_h(H_v), by the textbook
/// formulas E²_1 = {z ∈ Z_v : d_h z ∈ B_v} / B_v and E²_0 = Z_v / (B_v + d_h Z_v).
inline std::map<Bidegree, Subquotient> bicomplex_e2(const FilteredAlgebra& f)
{
    const Ring& ring = f.ring;
    std::set<long> qs;
    for (const auto& e : f.basis)
        qs.insert(e.q);
    auto zv = [&](long w, long q) {
        auto src = basis_where(f, q, w, w);
        return kernel_or_all(sub_block(f.d, basis_where(f, q - 1, w, w), src), src.size(), ring);
    };
    auto bv = [&](long w, long q) { return sub_block(f.d, basis_where(f, q, w, w), basis_where(f, q + 1, w, w)); };
    auto dh = [&](long q) { return sub_block(f.d, basis_where(f, q - 1, 0, 0), basis_where(f, q, 1, 1)); };
    std::map<Bidegree, Subquotient> out;
    for (long q : qs) {
        std::size_t n0 = basis_where(f, q, 0, 0).size(), n1 = basis_where(f, q, 1, 1).size();
        if (n1 > 0) {
            Matrix z1 = zv(1, q);
            Matrix keep = z1;
            if (z1.cols() > 0 && dh(q).rows() > 0)
                keep = mul(ring, z1, preimage(mul(ring, dh(q), z1), bv(0, q - 1), ring));
            out.emplace(Bidegree{1, q}, subquotient(n1, keep, bv(1, q), ring));
        }
        if (n0 > 0) {
            Matrix z1 = zv(1, q + 1);
            Matrix hits = z1.cols() > 0 ? mul(ring, dh(q + 1), z1) : Matrix(n0, 0);
            out.emplace(Bidegree{0, q}, subquotient(n0, zv(0, q), cat(bv(0, q), hits), ring));
        }
    }
    return out;
}

/// gr H(Tot) for the weight filtration, from the raw basis: F_p H_q is spanned by
/// cycles supported in weight <= p, modulo total boundaries.
inline std::map<Bidegree, Subquotient> filtered_homology_gr(const FilteredAlgebra& f)
{
    const Ring& ring = f.ring;
    long wmax = 0;
    std::set<long> qs;
    for (const auto& e : f.basis) {
        wmax = std::max(wmax, e.weight);
        qs.insert(e.q);
    }
    std::map<Bidegree, Subquotient> out;
    for (long q : qs) {
        auto all = basis_where(f, q, 0, wmax);
        auto below = basis_where(f, q - 1, 0, wmax);
        std::size_t n = all.size();
        Matrix B = sub_block(f.d, all, basis_where(f, q + 1, 0, wmax));
        Matrix prev = B;
        for (long p = 0; p <= wmax; ++p) {
            auto part = basis_where(f, q, 0, p);
            Matrix z = part.empty() ? Matrix(0, 0) : kernel_or_all(sub_block(f.d, below, part), part.size(), ring);
            Matrix emb(n, z.cols());
            for (std::size_t r = 0; r < part.size(); ++r) {
                std::size_t at = std::size_t(std::find(all.begin(), all.end(), part[r]) - all.begin());
                for (std::size_t c = 0; c < z.cols(); ++c)
                    emb(at, c) = z(r, c);
            }
            Matrix F = cat(emb, B);
            if (F.rows() == 0)
                F = Matrix(n, 0);
            out.emplace(Bidegree{p, q}, subquotient(n, F, prev.rows() == 0 ? Matrix(n, 0) : prev, ring));
            prev = F;
        }
    }
    return out;
}

struct IntegralHomology {
    long free = 0;
    std::vector<long> torsion_exponents; // s with a ℤ/q^s summand
};

/// Integral homology of a complex concentrated in p = 0, from Smith normal forms
/// of the differentials. Every invariant factor must be a power of q.
inline std::map<long, IntegralHomology> integral_homology(const DGBigradedModule& c, long q)
{
    const Ring Q = Ring::rationals();
    std::map<long, IntegralHomology> out;
    auto block = [&](long m) { return c.d_block({0, m}); };
    for (const auto& [b, comp] : c.module.components()) {
        long m = b.q;
        std::size_t n = comp.rank();
        Matrix out_d = block(m), in_d = block(m + 1);
        std::size_t r_out = out_d.empty() ? 0 : rank(out_d, Q);
        std::size_t r_in = in_d.empty() ? 0 : rank(in_d, Q);
        IntegralHomology h;
        h.free = long(n - r_out - r_in);
        if (!in_d.empty()) {
            SmithForm f = snf(in_d);
            for (std::size_t k = 0; k < std::min(f.D.rows(), f.D.cols()); ++k) {
                Integer v = abs(f.D(k, k).get_num());
                if (v <= 1)
                    continue;
                long s = 0;
                while (v % q == 0) {
                    v /= q;
                    ++s;
                }
                if (v != 1)
                    throw std::logic_error("invariant factor is not a power of q");
                h.torsion_exponents.push_back(s);
            }
        }
        out[m] = h;
    }
    return out;
}

} // namespace opseq::testing
