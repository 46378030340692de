#include "opseq/generators.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>

#include <fmt/core.h>

#include "opseq/error.hpp"

namespace opseq {

namespace {

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    long uniform(long lo, long hi) { return lo + static_cast<long>(g() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin() { return (g() & 1) != 0; }
};

Scalar random_coefficient(Rng& rng, const Ring& ring)
{
    if (ring.is_field() && ring.characteristic() > 0)
        return Scalar(rng.uniform(1, static_cast<long>(ring.characteristic()) - 1));
    static const long choices[] = {-2, -1, 1, 2};
    return Scalar(choices[rng.uniform(0, 3)]);
}

} // namespace

// ---------------------------------------------------------------- filtered towers

AlgebraTower filtered_tower(const FilteredAlgebra& f)
{
    const Ring& ring = f.ring;
    const std::size_t N = f.basis.size();
    if (f.d.rows() != N || f.d.cols() != N)
        throw Error(Errc::invalid_argument, "differential must be square over the basis");
    long p_max = 0;
    for (const auto& e : f.basis) {
        if (e.weight < 0)
            throw Error(Errc::invalid_argument, "negative weight on " + e.label);
        p_max = std::max(p_max, e.weight);
    }
    std::set<long> qs;
    for (const auto& e : f.basis)
        qs.insert(e.q);

    std::map<Bidegree, std::vector<std::size_t>> alist, clist;
    for (long p = 0; p <= p_max; ++p)
        for (long q : qs)
            for (std::size_t n = 0; n < N; ++n) {
                const auto& e = f.basis[n];
                if (e.q != q)
                    continue;
                if (e.weight <= p)
                    alist[{p, q}].push_back(n);
                if (e.weight == p)
                    clist[{p, q}].push_back(n);
            }

    auto make_module = [&](const std::map<Bidegree, std::vector<std::size_t>>& lists) {
        BigradedModule m(ring);
        for (const auto& [b, idx] : lists) {
            Component c;
            for (auto n : idx)
                c.labels.push_back(f.basis[n].label);
            m.set(b, std::move(c));
        }
        return m;
    };
    // block of a global matrix between two index lists; entries outside `rows` must vanish unless dropped
    auto restrict = [&](const Vector& v, const std::vector<std::size_t>& rows, bool drop_lower, long weight_cap,
                        const char* what) {
        Vector out(rows.size());
        for (std::size_t n = 0; n < N; ++n) {
            if (v[n] == 0)
                continue;
            auto it = std::find(rows.begin(), rows.end(), n);
            if (it != rows.end())
                out[std::size_t(it - rows.begin())] = v[n];
            else if (!(drop_lower && f.basis[n].weight < weight_cap))
                throw Error(Errc::invalid_argument, fmt::format("{} raises the filtration at {}", what, f.basis[n].label));
        }
        return out;
    };

    AlgebraTower t;
    t.p_min = 0;
    t.p_max = p_max;
    t.policy = ExtensionPolicy::constant_above;
    BigradedModule am = make_module(alist), cm = make_module(clist);
    GradedMap ad{{0, -1}, {}}, cd{{0, -1}, {}};
    for (const auto& [b, idx] : alist) {
        Bidegree tb{b.p, b.q - 1};
        auto tl = alist.find(tb);
        std::vector<Vector> cols;
        for (auto n : idx) {
            Vector col = f.d.column(n);
            if (tl == alist.end()) {
                if (!is_zero(col))
                    throw Error(Errc::invalid_argument, "d of " + f.basis[n].label + " has the wrong degree");
                continue;
            }
            cols.push_back(restrict(col, tl->second, false, 0, "d"));
        }
        if (tl != alist.end())
            ad.blocks[b] = Matrix::from_columns(tl->second.size(), cols);
    }
    for (const auto& [b, idx] : clist) {
        Bidegree tb{b.p, b.q - 1};
        auto tl = clist.find(tb);
        if (tl == clist.end())
            continue;
        std::vector<Vector> cols;
        for (auto n : idx)
            cols.push_back(restrict(f.d.column(n), tl->second, true, b.p, "d"));
        cd.blocks[b] = Matrix::from_columns(tl->second.size(), cols);
    }
    t.i.shift = {1, 0};
    t.j.shift = {0, 0};
    for (const auto& [b, idx] : alist) {
        if (b.p < p_max) {
            const auto& up = alist.at({b.p + 1, b.q});
            Matrix m(up.size(), idx.size());
            for (std::size_t c = 0; c < idx.size(); ++c)
                m(std::size_t(std::find(up.begin(), up.end(), idx[c]) - up.begin()), c) = 1;
            t.i.blocks[b] = m;
        }
        auto cl = clist.find(b);
        if (cl == clist.end())
            continue;
        Matrix m(cl->second.size(), idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c)
            if (auto it = std::find(cl->second.begin(), cl->second.end(), idx[c]); it != cl->second.end())
                m(std::size_t(it - cl->second.begin()), c) = 1;
        t.j.blocks[b] = m;
    }

    DGBigradedModule acar{am, ad}, ccar{cm, cd};
    BasisProduct amul = [&](const Generator& x, const Generator& y) -> Vector {
        if (!f.product)
            return {};
        Bidegree out{std::min(x.b.p + y.b.p, p_max), x.b.q + y.b.q};
        auto it = alist.find(out);
        if (it == alist.end())
            return {};
        Vector v = f.product(alist.at(x.b)[x.index], alist.at(y.b)[y.index]);
        if (v.empty())
            return {};
        return restrict(v, it->second, false, 0, "product");
    };
    BasisProduct cmul = [&](const Generator& x, const Generator& y) -> Vector {
        if (!f.product)
            return {};
        Bidegree out{x.b.p + y.b.p, x.b.q + y.b.q};
        auto it = clist.find(out);
        if (it == clist.end())
            return {};
        Vector v = f.product(clist.at(x.b)[x.index], clist.at(y.b)[y.index]);
        if (v.empty())
            return {};
        return restrict(v, it->second, true, out.p, "product");
    };
    if (f.operad == "comm") {
        t.A = comm_algebra(acar, amul, f.arity_cap, p_max);
        t.C = comm_algebra(ccar, cmul, f.arity_cap);
    } else if (f.operad == "assoc") {
        t.A = assoc_algebra(acar, amul, f.arity_cap, p_max);
        t.C = assoc_algebra(ccar, cmul, f.arity_cap);
    } else {
        throw Error(Errc::invalid_argument, "filtered algebras support the comm and assoc operads, not " + f.operad);
    }
    return t;
}

// ---------------------------------------------------------------- random monomial algebras

namespace {

struct GenSpec {
    std::string name;
    long deg = 0;
    long weight = 0;
};

struct MonomialAlgebra {
    std::vector<GenSpec> gens;
    bool commutative = true;
    int L = 2;
    std::vector<std::vector<int>> monomials;
    std::map<std::vector<int>, std::size_t> index;

    long degree(const std::vector<int>& m) const
    {
        long s = 0;
        for (int g : m)
            s += gens[std::size_t(g)].deg;
        return s;
    }
    long weight(const std::vector<int>& m) const
    {
        long s = 0;
        for (int g : m)
            s += gens[std::size_t(g)].weight;
        return s;
    }

    void enumerate()
    {
        monomials.clear();
        index.clear();
        const int n = int(gens.size());
        std::vector<int> cur;
        std::function<void(int)> rec = [&](int start) {
            if (!cur.empty()) {
                index[cur] = monomials.size();
                monomials.push_back(cur);
            }
            if (int(cur.size()) == L)
                return;
            for (int g = commutative ? start : 0; g < n; ++g) {
                if (commutative && gens[std::size_t(g)].deg % 2 != 0 && !cur.empty() && cur.back() == g)
                    continue;
                cur.push_back(g);
                rec(g);
                cur.pop_back();
            }
        };
        rec(0);
        std::stable_sort(monomials.begin(), monomials.end(),
                         [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
        index.clear();
        for (std::size_t k = 0; k < monomials.size(); ++k)
            index[monomials[k]] = k;
    }

    /// a·b as (sign, monomial index), or nullopt when zero.
    std::optional<std::pair<int, std::size_t>> mul(const std::vector<int>& a, const std::vector<int>& b) const
    {
        std::vector<int> m = a;
        m.insert(m.end(), b.begin(), b.end());
        if (m.empty() || int(m.size()) > L)
            return std::nullopt;
        int sign = 1;
        if (commutative) {
            for (std::size_t i = 1; i < m.size(); ++i)
                for (std::size_t k = i; k > 0 && m[k - 1] > m[k]; --k) {
                    if (gens[std::size_t(m[k - 1])].deg % 2 != 0 && gens[std::size_t(m[k])].deg % 2 != 0)
                        sign = -sign;
                    std::swap(m[k - 1], m[k]);
                }
            for (std::size_t i = 1; i < m.size(); ++i)
                if (m[i] == m[i - 1] && gens[std::size_t(m[i])].deg % 2 != 0)
                    return std::nullopt;
        }
        auto it = index.find(m);
        if (it == index.end())
            return std::nullopt;
        return std::make_pair(sign, it->second);
    }
};

using Sparse = std::map<std::size_t, Scalar>;

/// Leibniz extension of the generator differentials to the monomial basis.
Matrix extend_differential(const MonomialAlgebra& alg, const std::vector<Sparse>& dgen, const Ring& ring)
{
    const std::size_t N = alg.monomials.size();
    Matrix d(N, N);
    for (std::size_t c = 0; c < N; ++c) {
        const auto& m = alg.monomials[c];
        long prefix_deg = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::vector<int> pre(m.begin(), m.begin() + std::ptrdiff_t(i));
            std::vector<int> suf(m.begin() + std::ptrdiff_t(i + 1), m.end());
            for (const auto& [mi, coeff] : dgen[std::size_t(m[i])]) {
                auto left = pre.empty() ? std::optional<std::pair<int, std::size_t>>({1, mi}) : alg.mul(pre, alg.monomials[mi]);
                if (!left)
                    continue;
                auto full = suf.empty() ? left : alg.mul(alg.monomials[left->second], suf);
                if (!full)
                    continue;
                int s = left->first * (suf.empty() ? 1 : full->first);
                Scalar v = coeff * Scalar(s) * sign_of(prefix_deg);
                d(full->second, c) = ring.reduce(d(full->second, c) + v);
            }
            prefix_deg += alg.gens[std::size_t(m[i])].deg;
        }
    }
    return d;
}

FilteredAlgebra to_filtered(const MonomialAlgebra& alg, const Matrix& d, const Ring& ring, int arity_cap)
{
    FilteredAlgebra f;
    f.ring = ring;
    f.d = d;
    f.arity_cap = arity_cap;
    f.operad = alg.commutative ? "comm" : "assoc";
    for (const auto& m : alg.monomials) {
        std::string label;
        for (int g : m)
            label += alg.gens[std::size_t(g)].name;
        f.basis.push_back({label, alg.degree(m), alg.weight(m)});
    }
    const std::size_t N = alg.monomials.size();
    f.product = [alg, N, ring](std::size_t a, std::size_t b) -> Vector {
        auto r = alg.mul(alg.monomials[a], alg.monomials[b]);
        if (!r)
            return {};
        Vector v(N);
        v[r->second] = ring.reduce(Scalar(r->first));
        return v;
    };
    return f;
}

/// Random d on generators: each non-gadget generator is a cycle or hits monomials in earlier cycles.
/// forced: generator -> monomial that must appear in its differential when
/// all of that monomial's letters are cycles.
std::vector<Sparse> random_generator_differentials(Rng& rng, const MonomialAlgebra& alg, const Ring& ring, std::size_t fixed,
                                                   std::vector<Sparse> dgen,
                                                   const std::map<std::size_t, std::vector<int>>& forced = {})
{
    std::vector<bool> cycle(alg.gens.size(), true);
    for (std::size_t g = 0; g < fixed; ++g)
        cycle[g] = dgen[g].empty();
    for (std::size_t g = fixed; g < alg.gens.size(); ++g) {
        auto target = forced.find(g);
        if (target == forced.end() && rng.coin())
            continue;
        Sparse dg;
        // half the time d g drops the weight strictly, which feeds d_r for r >= 1
        bool strict = rng.coin();
        for (std::size_t mi = 0; mi < alg.monomials.size(); ++mi) {
            const auto& m = alg.monomials[mi];
            long w = alg.weight(m), wg = alg.gens[g].weight;
            bool ok = alg.degree(m) == alg.gens[g].deg - 1 && (strict ? w < wg : w <= wg);
            for (int x : m)
                ok = ok && std::size_t(x) < g && cycle[std::size_t(x)];
            if (ok && rng.coin())
                dg[mi] = ring.reduce(random_coefficient(rng, ring));
        }
        if (target != forced.end()) {
            bool cycles = true;
            for (int x : target->second)
                cycles = cycles && cycle[std::size_t(x)];
            std::size_t mi = alg.index.at(target->second);
            if (cycles && ring.reduce(dg[mi]) == 0)
                dg[mi] = ring.reduce(random_coefficient(rng, ring));
        }
        for (auto it = dg.begin(); it != dg.end();)
            it = it->second == 0 ? dg.erase(it) : std::next(it);
        if (!dg.empty())
            cycle[g] = false;
        dgen[g] = std::move(dg);
    }
    return dgen;
}

bool within_limits(const FilteredAlgebra& f, const RandomAlgebraOptions& opt)
{
    long p_max = 0, qlo = 0, qhi = 0;
    bool first = true;
    std::map<long, std::vector<long>> weights_by_q;
    for (const auto& e : f.basis) {
        p_max = std::max(p_max, e.weight);
        qlo = first ? e.q : std::min(qlo, e.q);
        qhi = first ? e.q : std::max(qhi, e.q);
        first = false;
        weights_by_q[e.q].push_back(e.weight);
    }
    if (p_max > opt.max_p || qhi - qlo + 1 > opt.max_q_span)
        return false;
    for (const auto& [q, ws] : weights_by_q)
        if (long(ws.size()) > opt.max_rank)
            return false;
    return !f.basis.empty();
}

} // namespace

FilteredAlgebra random_filtered_algebra(std::uint64_t seed, const Ring& ring, const RandomAlgebraOptions& opt)
{
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 17);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        MonomialAlgebra alg;
        alg.commutative = opt.commutative;
        alg.L = int(rng.uniform(2, 3));
        std::vector<Sparse> dgen;
        std::size_t fixed = 0;
        if (opt.gadget) {
            alg.L = 2;
            alg.gens = {{"v", 0, 0}, {"u", 1, 1}, {"w", 0, 1}};
            fixed = 3;
        }
        long extra = opt.gadget ? rng.uniform(0, 1) : rng.uniform(2, 4);
        std::map<std::size_t, std::vector<int>> forced;
        for (long g = 0; g < extra; ++g) {
            GenSpec x{fmt::format("x{}", g), rng.uniform(0, 2), rng.uniform(0, 2)};
            // most later generators are built to bound a monomial of lower or equal weight
            std::size_t first = fixed, n = alg.gens.size();
            if (n > first && rng.uniform(0, 2) != 0) {
                std::vector<int> m{int(rng.uniform(long(first), long(n) - 1))};
                if (alg.L >= 2 && rng.coin())
                    m.push_back(int(rng.uniform(long(first), long(n) - 1)));
                if (alg.commutative)
                    std::sort(m.begin(), m.end());
                long w = alg.weight(m);
                if (w <= 2) {
                    x.deg = alg.degree(m) + 1;
                    x.weight = std::min<long>(2, w + rng.uniform(1, 2));
                    forced[alg.gens.size()] = m;
                }
            }
            alg.gens.push_back(x);
        }
        alg.enumerate();
        for (auto it = forced.begin(); it != forced.end();)
            it = alg.index.count(it->second) ? std::next(it) : forced.erase(it);
        dgen.assign(alg.gens.size(), {});
        if (opt.gadget)
            dgen[1][alg.index.at({0})] = Scalar(1); // d u = v
        dgen = random_generator_differentials(rng, alg, ring, fixed, std::move(dgen), forced);
        FilteredAlgebra f = to_filtered(alg, extend_differential(alg, dgen, ring), ring, opt.arity_cap);
        if (within_limits(f, opt))
            return f;
    }
    throw Error(Errc::invalid_argument, "no random algebra within the requested limits");
}

FilteredAlgebra random_bicomplex_algebra(std::uint64_t seed, const Ring& ring)
{
    Rng rng(seed * 0xD1B54A32D192ED03ULL + 5);
    RandomAlgebraOptions opt;
    opt.max_rank = 5;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        MonomialAlgebra alg;
        alg.L = int(rng.uniform(2, 3));
        long extra = rng.uniform(1, 2);
        for (long g = 0; g < extra; ++g)
            alg.gens.push_back({fmt::format("x{}", g), rng.uniform(0, 1), rng.uniform(0, 1)});
        // column-1 generators y bound a column-0 monomial, which feeds d_1
        std::map<std::size_t, std::vector<int>> forced;
        long ys = rng.uniform(1, 2);
        for (long g = 0; g < ys; ++g) {
            std::vector<int> m{int(rng.uniform(0, extra - 1))};
            if (rng.coin())
                m.push_back(int(rng.uniform(0, extra - 1)));
            std::sort(m.begin(), m.end());
            GenSpec y{ys == 1 ? "y" : fmt::format("y{}", g), 1, 1};
            if (alg.weight(m) == 0 && rng.uniform(0, 3) != 0) {
                y.deg = alg.degree(m) + 1;
                forced[alg.gens.size()] = m;
            }
            alg.gens.push_back(y);
        }
        alg.enumerate();
        for (auto it = forced.begin(); it != forced.end();)
            it = alg.index.count(it->second) ? std::next(it) : forced.erase(it);
        std::vector<Sparse> dgen(alg.gens.size());
        dgen = random_generator_differentials(rng, alg, ring, 0, std::move(dgen), forced);
        FilteredAlgebra f = to_filtered(alg, extend_differential(alg, dgen, ring), ring, 3);
        bool two_columns = true;
        for (const auto& e : f.basis)
            two_columns = two_columns && e.weight <= 1;
        if (two_columns && within_limits(f, opt))
            return f;
    }
    throw Error(Errc::invalid_argument, "no random bicomplex within the limits");
}

// ---------------------------------------------------------------- Bockstein

DGBigradedModule bockstein_complex(const BocksteinSpec& spec)
{
    const Ring Z = Ring::integers();
    std::map<long, std::size_t> rank;
    struct Arrow {
        long m;
        std::size_t from, to;
        long s;
    };
    std::vector<Arrow> arrows;
    for (const auto& [m, count] : spec.free)
        rank[m] += std::size_t(count);
    for (const auto& [m, s] : spec.torsion) {
        std::size_t to = rank[m]++;
        std::size_t from = rank[m + 1]++;
        arrows.push_back({m + 1, from, to, s});
    }
    std::map<long, Matrix> d; // source degree m
    for (const auto& [m, n] : rank)
        if (rank.count(m - 1))
            d[m] = Matrix(rank[m - 1], n);
    for (const auto& a : arrows) {
        Integer v;
        mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(spec.q), static_cast<unsigned long>(a.s));
        d[a.m](a.to, a.from) = Scalar(v);
    }
    // scramble each degree by a random unimodular change of basis
    Rng rng(spec.seed * 0xA24BAED4963EE407ULL + 3);
    std::map<long, std::pair<Matrix, Matrix>> change; // U, U^{-1}
    for (const auto& [m, n] : rank) {
        Matrix U = Matrix::identity(n), Ui = Matrix::identity(n);
        if (n > 1)
            for (std::size_t step = 0; step < 3 * n; ++step) {
                std::size_t a = std::size_t(rng.uniform(0, long(n) - 1)), b = std::size_t(rng.uniform(0, long(n) - 2));
                if (b >= a)
                    ++b;
                long c = rng.coin() ? 1 : -1;
                // U <- E U with E = I + c e_{ab}; U^{-1} <- U^{-1} E^{-1}
                for (std::size_t k = 0; k < n; ++k) {
                    U(a, k) += Scalar(c) * U(b, k);
                    Ui(k, b) -= Scalar(c) * Ui(k, a);
                }
            }
        change[m] = {U, Ui};
    }
    BigradedModule mod(Z);
    GradedMap dm{{0, -1}, {}};
    for (const auto& [m, n] : rank) {
        Component c;
        for (std::size_t k = 0; k < n; ++k)
            c.labels.push_back(fmt::format("a{}_{}", m, k));
        mod.set({0, m}, std::move(c));
    }
    for (const auto& [m, block] : d)
        dm.blocks[{0, m}] = mul(Z, mul(Z, change[m - 1].first, block), change[m].second);
    return {mod, dm};
}

AlgebraTower bockstein_tower(const BocksteinSpec& spec)
{
    const Ring Z = Ring::integers();
    DGBigradedModule base = bockstein_complex(spec);
    long s_max = 0;
    for (const auto& [m, s] : spec.torsion)
        s_max = std::max<long>(s_max, s);
    long p_max = spec.p_max >= 0 ? spec.p_max : 2 * (s_max + 1);
    AlgebraTower t;
    t.p_min = 0;
    t.p_max = p_max;
    t.policy = ExtensionPolicy::repeat_last_map;
    BigradedModule am(Z), cm(Z);
    GradedMap ad{{0, -1}, {}}, cd{{0, -1}, {}};
    t.i.shift = {1, 0};
    t.j.shift = {0, 0};
    for (long p = 0; p <= p_max; ++p)
        for (const auto& [b, comp] : base.module.components()) {
            Bidegree at{p, b.q};
            am.set(at, comp);
            Component cc = comp;
            if (p > 0)
                cc.orders.assign(comp.rank(), Integer(spec.q));
            cm.set(at, cc);
            if (auto it = base.d.blocks.find(b); it != base.d.blocks.end()) {
                ad.blocks[at] = it->second;
                cd.blocks[at] = it->second;
            }
            if (p < p_max)
                t.i.blocks[at] = scale(Z, Scalar(spec.q), Matrix::identity(comp.rank()));
            t.j.blocks[at] = Matrix::identity(comp.rank());
        }
    BasisProduct none = [](const Generator&, const Generator&) { return Vector{}; };
    t.A = comm_algebra({am, ad}, none, 2, p_max);
    t.C = comm_algebra({cm, cd}, none, 2);
    return t;
}

// ---------------------------------------------------------------- mutations

void twist_tower(AlgebraTower& t, TwistTarget target, long lambda)
{
    auto twist = [&](OperadAlgebra& a) {
        const Ring& ring = a.ring();
        for (auto& [key, value] : a.gamma) {
            long e = 0;
            for (std::size_t x = 0; x < key.inputs.size(); ++x)
                for (std::size_t y = x + 1; y < key.inputs.size(); ++y)
                    e += key.inputs[x].b.p * key.inputs[y].b.p;
            Scalar f(1);
            for (long k = 0; k < e; ++k)
                f = ring.mul(f, Scalar(lambda));
            value = scale(ring, f, value);
        }
    };
    twist(t.C);
    if (target == TwistTarget::A_and_C)
        twist(t.A);
}

} // namespace opseq
