#include "opseq/convergence.hpp"

#include <fmt/core.h>

#include "detail.hpp"
#include "opseq/error.hpp"

namespace opseq {

using detail::cat;
using detail::head;

namespace {

Matrix rows_or_empty(Matrix m, std::size_t rows) { return m.rows() == 0 ? Matrix(rows, 0) : m; }

bool contained(const Matrix& big, const Matrix& small, const Ring& ring)
{
    for (std::size_t c = 0; c < small.cols(); ++c)
        if (!detail::in_span_mod(ring, big, small.column(c)))
            return false;
    return true;
}

/// Kernel of m: Z^src -> (target module) modulo the target relations, tested
/// against the source relations.
bool is_injective(const Ring& ring, const Matrix& m, const std::vector<Integer>& src, const std::vector<Integer>& tgt)
{
    std::size_t n = src.size();
    if (n == 0)
        return true;
    Matrix ker = m.rows() == 0 ? Matrix::identity(n) : preimage(m, relation_matrix(tgt), ring);
    return contained(relation_matrix(src), ker, ring);
}

bool is_surjective(const Ring& ring, const Matrix& m, const std::vector<Integer>& tgt)
{
    std::size_t n = tgt.size();
    if (n == 0)
        return true;
    return contained(cat(rows_or_empty(m, n), relation_matrix(tgt)), Matrix::identity(n), ring);
}

Bidegree top_of(const ConvergenceData& cd, long q) { return {cd.p_max, q}; }

} // namespace

ConvergenceData colimit(const AlgebraTower& t)
{
    if (t.policy != ExtensionPolicy::constant_above)
        throw Error(Errc::unsupported, "the colimit of a repeat_last_map tower is not finitely presented; only E^inf is available");
    const Ring& ring = t.ring();
    ConvergenceData cd;
    cd.ring = ring;
    cd.p_min = t.p_min;
    cd.p_max = t.p_max;
    for (long q : t.q_values()) {
        Bidegree top{t.p_max, q};
        std::size_t n = t.a_rank(top);
        if (n == 0)
            continue;
        Matrix B = rows_or_empty(t.a_boundaries(top), n);
        cd.H.emplace(q, subquotient(n, rows_or_empty(t.a_cycles(top), n), B, ring));
        for (long p = t.p_min; p <= t.p_max; ++p) {
            Bidegree b{p, q};
            Matrix F = B;
            if (t.a_rank(b) > 0)
                F = cat(mul(ring, t.i_power(b, t.p_max - p), t.a_cycles(b)), B);
            cd.filtration[b] = std::move(F);
        }
    }
    return cd;
}

Vector stage_representative(const AlgebraTower& t, Bidegree b, const Vector& x)
{
    const Ring& ring = t.ring();
    Bidegree top{t.p_max, b.q};
    std::size_t n = t.a_rank(b);
    if (n == 0) {
        if (!is_zero(x) && !detail::in_span_mod(ring, t.a_boundaries(top), x))
            throw Error(Errc::lift_failed, "no stage representative at " + b.str());
        return Vector(n);
    }
    Matrix ZA = t.a_cycles(b);
    Matrix sys = cat(mul(ring, t.i_power(b, t.p_max - b.p), ZA), rows_or_empty(t.a_boundaries(top), t.a_rank(top)));
    auto c = sys.cols() == 0 ? std::nullopt : solve(sys, x, ring);
    if (!c) {
        if (is_zero(x))
            return Vector(n);
        throw Error(Errc::lift_failed, "no stage representative at " + b.str());
    }
    return apply(ring, ZA, head(*c, ZA.cols()));
}

void associated_graded(const AlgebraTower& t, ConvergenceData& cd)
{
    const Ring& ring = cd.ring;
    cd.graded.clear();
    for (const auto& [q, h] : cd.H) {
        std::size_t n = h.ambient_rank();
        Matrix below = rows_or_empty(t.a_boundaries(top_of(cd, q)), n);
        for (long p = cd.p_min; p <= cd.p_max; ++p) {
            const Matrix& F = cd.filtration.at({p, q});
            cd.graded.emplace(Bidegree{p, q}, subquotient(n, F, below, ring));
            below = F;
        }
    }

    OperadHomology oh = homology_operad_data(t.A.operad);
    OperadAlgebra& out = cd.graded_action;
    out = OperadAlgebra{};
    out.operad = oh.operad;
    out.carrier = DGBigradedModule{BigradedModule(ring), GradedMap{{0, -1}, {}}};
    for (const auto& [b, g] : cd.graded) {
        if (g.is_zero())
            continue;
        Component c;
        for (std::size_t s = 0; s < g.size(); ++s)
            c.labels.push_back(fmt::format("g{}", s));
        if (ring.is_integers())
            c.orders = g.orders();
        out.carrier.module.set(b, std::move(c));
    }
    const BigradedModule& mod = out.carrier.module;

    // chains of A_p representing F_{p-1}: i(cycles of A_{p-1}) + boundaries of A_p
    std::map<Bidegree, Matrix> lower;
    for (const auto& [b, g] : cd.graded) {
        std::size_t n = t.a_rank(b);
        if (n == 0)
            continue;
        Matrix L = rows_or_empty(t.a_boundaries(b), n);
        Bidegree prev{b.p - 1, b.q};
        if (t.a_rank(prev) > 0)
            L = cat(mul(ring, t.i_block(prev), t.a_cycles(prev)), L);
        lower[b] = L.cols() == 0 ? L : span_basis(L, ring);
    }
    auto to_top = [&](const Element& y) { return apply(ring, t.i_power(y.b, cd.p_max - y.b.p), y.v); };

    for (int k = 1; k <= out.operad.arity_cap; ++k) {
        for (std::size_t op = 0; op < out.operad.rank(k); ++op) {
            Vector lifted = oh.lifts[std::size_t(k)].column(op);
            long s = out.operad.component(k).degrees[op];
            for_each_basis_tuple(
                out, k, [&](const std::vector<Bidegree>& bs) { return mod.rank(out.output_bidegree(s, bs)) > 0; },
                [&](const std::vector<Generator>& gs) {
                    std::vector<Element> xs;
                    for (const auto& g : gs)
                        xs.push_back({g.b, stage_representative(t, g.b, cd.graded.at(g.b).lift().column(g.index))});
                    Bidegree ob = out.output_bidegree(s, [&] {
                        std::vector<Bidegree> bs;
                        for (const auto& g : gs)
                            bs.push_back(g.b);
                        return bs;
                    }());
                    Element y = act(t.A, k, lifted, xs);
                    if (y.b != ob)
                        throw Error(Errc::closure_violation, "product of filtration representatives lands at " + y.b.str());
                    const Subquotient& target = cd.graded.at(ob);
                    auto coords = target.project(to_top(y));
                    if (!coords)
                        throw Error(Errc::closure_violation, "product leaves F_p at " + ob.str());
                    for (std::size_t h = 0; h < xs.size(); ++h) {
                        auto it = lower.find(gs[h].b);
                        if (it == lower.end())
                            continue;
                        for (std::size_t c = 0; c < it->second.cols(); ++c) {
                            auto ys = xs;
                            ys[h].v = it->second.column(c);
                            if (!target.is_zero_class(to_top(act(t.A, k, lifted, ys))))
                                throw Error(Errc::well_definedness_violation,
                                            fmt::format("graded product depends on the representative in slot {} at {}", h + 1, ob.str()));
                        }
                    }
                    out.set(k, op, gs, *coords);
                    return true;
                });
        }
    }
}

bool GammaMap::injective() const
{
    for (const auto& [b, g] : blocks)
        if (!g.injective)
            return false;
    return true;
}

bool GammaMap::isomorphism() const
{
    for (const auto& [b, g] : blocks)
        if (!g.injective || !g.surjective)
            return false;
    return true;
}

GammaMap gamma_map(const AlgebraTower& t, const ConvergenceData& cd, const Page& e_infinity)
{
    const Ring& ring = cd.ring;
    GammaMap out;
    std::set<Bidegree> keys;
    for (const auto& [b, g] : cd.graded)
        keys.insert(b);
    for (const auto& [b, e] : e_infinity.E)
        keys.insert(b);
    for (Bidegree b : keys) {
        auto gi = cd.graded.find(b);
        auto ei = e_infinity.E.find(b);
        std::vector<Integer> src = gi == cd.graded.end() ? std::vector<Integer>{} : gi->second.orders();
        std::vector<Integer> tgt = ei == e_infinity.E.end() ? std::vector<Integer>{} : ei->second.orders();
        GammaBlock blk;
        blk.map = Matrix(tgt.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            Vector a = stage_representative(t, b, gi->second.lift().column(c));
            Vector ja = apply(ring, t.j_block(b), a);
            if (tgt.empty()) {
                if (ei != e_infinity.E.end() && !ei->second.is_zero_class(ja))
                    throw Error(Errc::preimage_failed, "j(a) is not an infinite cycle at " + b.str());
                continue;
            }
            auto v = ei->second.project(ja);
            if (!v)
                throw Error(Errc::preimage_failed, "j(a) is not an infinite cycle at " + b.str());
            blk.map.set_column(c, *v);
        }
        blk.injective = is_injective(ring, blk.map, src, tgt);
        blk.surjective = is_surjective(ring, blk.map, tgt);
        out.blocks.emplace(b, std::move(blk));
    }
    return out;
}

CheckReport check_gamma_multiplicative(const ConvergenceData& cd, const GammaMap& g, const OperadAlgebra& einf)
{
    const Ring& ring = cd.ring;
    const OperadAlgebra& gr = cd.graded_action;
    const BigradedModule& emod = einf.carrier.module;
    auto apply_gamma = [&](Bidegree b, const Vector& v) {
        auto it = g.blocks.find(b);
        if (it == g.blocks.end() || it->second.map.rows() == 0)
            return Vector(emod.rank(b));
        return apply(ring, it->second.map, v);
    };
    auto equal_mod = [&](Bidegree b, const Vector& x, const Vector& y) {
        Vector d = sub(ring, x, y);
        if (is_zero(d))
            return true;
        Matrix rel = emod.relations(b);
        return rel.cols() > 0 && in_span(rel, d, ring);
    };
    std::optional<CheckReport> failure;
    for (int k = 1; k <= gr.operad.arity_cap && !failure; ++k)
        for (std::size_t op = 0; op < gr.operad.rank(k) && !failure; ++op) {
            Vector pi = unit_vector(gr.operad.rank(k), op);
            long s = gr.operad.component(k).degrees[op];
            for_each_basis_tuple(
                gr, k, [&](const std::vector<Bidegree>&) { return true; },
                [&](const std::vector<Generator>& gs) {
                    std::vector<Element> xs, ys;
                    std::vector<Bidegree> bs;
                    for (const auto& x : gs) {
                        Element e{x.b, unit_vector(gr.carrier.module.rank(x.b), x.index)};
                        ys.push_back({x.b, apply_gamma(x.b, e.v)});
                        xs.push_back(std::move(e));
                        bs.push_back(x.b);
                    }
                    Bidegree ob = einf.output_bidegree(s, bs);
                    if (emod.rank(ob) == 0)
                        return true;
                    Element lhs_gr = act(gr, k, pi, xs);
                    Vector lhs = lhs_gr.v.empty() ? Vector(emod.rank(ob)) : apply_gamma(lhs_gr.b, lhs_gr.v);
                    Vector rhs = act(einf, k, pi, ys).v;
                    if (!equal_mod(ob, lhs, rhs)) {
                        failure = CheckReport::fail("gamma multiplicative",
                                                    fmt::format("{} on generators at {}", gr.operad.component(k).labels[op], ob.str()));
                        return false;
                    }
                    return true;
                });
        }
    return failure ? *failure : CheckReport::pass();
}

BoundedBelow bounded_below(const AlgebraTower& t)
{
    BoundedBelow out;
    out.certified = true;
    for (long q : t.q_values())
        out.p_of_q[q] = t.p_min;
    out.note = fmt::format("A_(p,q) = 0 for p < {} by the window", t.p_min);
    return out;
}

} // namespace opseq
