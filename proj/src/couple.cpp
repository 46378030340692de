#include "opseq/couple.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "opseq/error.hpp"
#include "detail.hpp"

namespace opseq {

const char* policy_name(ExtensionPolicy p)
{
    return p == ExtensionPolicy::constant_above ? "constant_above" : "repeat_last_map";
}

using detail::head;
using detail::in_span_mod;
using detail::through_basis;

// ---------------------------------------------------------------- tower data

std::set<long> AlgebraTower::q_values() const
{
    std::set<long> qs;
    for (const auto& [b, c] : A.carrier.module.components())
        qs.insert(b.q);
    for (const auto& [b, c] : C.carrier.module.components())
        qs.insert(b.q);
    return qs;
}

std::size_t AlgebraTower::a_rank(Bidegree b) const
{
    if (b.p < p_min)
        return 0;
    return A.carrier.module.rank({std::min(b.p, p_max), b.q});
}

std::size_t AlgebraTower::c_rank(Bidegree b) const
{
    if (b.p < p_min)
        return 0;
    if (b.p > p_max)
        return policy == ExtensionPolicy::constant_above ? 0 : C.carrier.module.rank({p_max, b.q});
    return C.carrier.module.rank(b);
}

Matrix AlgebraTower::a_relations(Bidegree b) const
{
    if (a_rank(b) == 0)
        return Matrix(0, 0);
    return A.carrier.module.relations({std::min(b.p, p_max), b.q});
}

Matrix AlgebraTower::c_relations(Bidegree b) const
{
    if (c_rank(b) == 0)
        return Matrix(0, 0);
    return C.carrier.module.relations({std::min(b.p, p_max), b.q});
}

Matrix AlgebraTower::a_cycles(Bidegree b) const
{
    if (a_rank(b) == 0)
        return Matrix(0, 0);
    return cycles(A.carrier, {std::min(b.p, p_max), b.q});
}

Matrix AlgebraTower::a_boundaries(Bidegree b) const
{
    if (a_rank(b) == 0)
        return Matrix(0, 0);
    return boundaries(A.carrier, {std::min(b.p, p_max), b.q});
}

Matrix AlgebraTower::c_cycles(Bidegree b) const
{
    if (c_rank(b) == 0)
        return Matrix(0, 0);
    return cycles(C.carrier, {std::min(b.p, p_max), b.q});
}

Matrix AlgebraTower::c_boundaries(Bidegree b) const
{
    if (c_rank(b) == 0)
        return Matrix(0, 0);
    return boundaries(C.carrier, {std::min(b.p, p_max), b.q});
}

Matrix AlgebraTower::a_d(Bidegree b) const
{
    std::size_t n = a_rank(b), m = a_rank({b.p, b.q - 1});
    if (n == 0 || m == 0)
        return Matrix(m, n);
    return A.carrier.d_block({std::min(b.p, p_max), b.q});
}

Matrix AlgebraTower::i_block(Bidegree b) const
{
    std::size_t n = a_rank(b), m = a_rank({b.p + 1, b.q});
    if (n == 0 || m == 0)
        return Matrix(m, n);
    if (b.p + 1 <= p_max)
        return i.block(A.carrier.module, A.carrier.module, b);
    if (policy == ExtensionPolicy::constant_above)
        return Matrix::identity(n);
    return i.block(A.carrier.module, A.carrier.module, {p_max - 1, b.q});
}

Matrix AlgebraTower::i_power(Bidegree b, long e) const
{
    Matrix m = Matrix::identity(a_rank(b));
    for (long s = 0; s < e; ++s)
        m = mul(ring(), i_block({b.p + s, b.q}), m);
    return m;
}

Matrix AlgebraTower::j_block(Bidegree b) const
{
    std::size_t n = a_rank(b), m = c_rank(b);
    if (n == 0 || m == 0)
        return Matrix(m, n);
    return j.block(A.carrier.module, C.carrier.module, {std::min(b.p, p_max), b.q});
}

// ---------------------------------------------------------------- check_tower

namespace {

std::string tuple_text(const OperadAlgebra& a, int k, std::size_t op, const std::vector<Generator>& gs)
{
    std::string s = a.operad.component(k).labels[op] + "; ";
    for (std::size_t n = 0; n < gs.size(); ++n) {
        if (n)
            s += ", ";
        s += a.carrier.module.find(gs[n].b)->labels[gs[n].index] + "@" + gs[n].b.str();
    }
    return "(" + s + ")";
}

bool same_operad(const Operad& a, const Operad& b)
{
    if (a.name != b.name || a.arity_cap != b.arity_cap || !(a.ring == b.ring))
        return false;
    for (int n = 1; n <= a.arity_cap; ++n)
        if (a.rank(n) != b.rank(n))
            return false;
    return true;
}

CheckReport check_shape(const AlgebraTower& t)
{
    if (!(t.A.ring() == t.C.ring()))
        return CheckReport::fail("ring", "A and C have different rings");
    if (!same_operad(t.A.operad, t.C.operad))
        return CheckReport::fail("operad", "A and C are algebras over different operads");
    if (t.p_max < t.p_min)
        return CheckReport::fail("window", "p_max < p_min");
    if (t.i.shift != Bidegree{1, 0})
        return CheckReport::fail("i bidegree", "i must have bidegree (1,0)");
    if (t.j.shift != Bidegree{0, 0})
        return CheckReport::fail("j bidegree", "j must have bidegree (0,0)");
    auto inside = [&](Bidegree b) { return b.p >= t.p_min && b.p <= t.p_max; };
    for (const auto& b : t.A.carrier.module.support())
        if (!inside(b))
            return CheckReport::fail("window", "A has a component outside the window at " + b.str());
    for (const auto& b : t.C.carrier.module.support())
        if (!inside(b))
            return CheckReport::fail("window", "C has a component outside the window at " + b.str());
    for (const auto& [b, m] : t.i.blocks)
        if (b.p < t.p_min || b.p >= t.p_max)
            return CheckReport::fail("window", "i block outside the window at " + b.str());
    for (const auto& [b, m] : t.j.blocks)
        if (!inside(b))
            return CheckReport::fail("window", "j block outside the window at " + b.str());
    if (t.policy == ExtensionPolicy::repeat_last_map) {
        if (t.p_max <= t.p_min)
            return CheckReport::fail("extension policy", "repeat_last_map needs p_max > p_min");
        const auto& mod = t.A.carrier.module;
        for (long q : t.q_values()) {
            Bidegree lo{t.p_max - 1, q}, hi{t.p_max, q};
            if (mod.rank(lo) != mod.rank(hi) || mod.orders(lo) != mod.orders(hi))
                return CheckReport::fail("extension policy", fmt::format("A_{{p_max-1}} and A_{{p_max}} differ in degree q={}", q));
            if (mod.rank(lo) > 0 && !(t.A.carrier.d_block(lo) == t.A.carrier.d_block(hi)))
                return CheckReport::fail("extension policy", fmt::format("differentials of A_{{p_max-1}} and A_{{p_max}} differ in degree q={}", q));
        }
    }
    return CheckReport::pass();
}

CheckReport check_exact(const AlgebraTower& t)
{
    const Ring& ring = t.ring();
    for (long p = t.p_min; p <= t.p_max; ++p)
        for (long q : t.q_values()) {
            Bidegree b{p, q};
            Matrix I = t.i_block({p - 1, q});
            Matrix relA = t.a_relations(b);
            if (I.cols() > 0 && !same_span(preimage(I, relA, ring), t.a_relations({p - 1, q}), ring))
                return CheckReport::fail("exactness", "i is not injective at " + Bidegree{p - 1, q}.str());
            std::size_t n = t.c_rank(b);
            Matrix J = t.j_block(b);
            if (n > 0 && !span_contains(J.hcat(t.c_relations(b)), Matrix::identity(n), ring))
                return CheckReport::fail("exactness", "j is not surjective at " + b.str());
            if (t.a_rank(b) == 0)
                continue;
            Matrix ker = n > 0 ? preimage(J, t.c_relations(b), ring) : Matrix::identity(t.a_rank(b));
            Matrix im = I.cols() > 0 ? I.hcat(relA) : relA;
            if (!same_span(ker.hcat(relA), im, ring))
                return CheckReport::fail("exactness", "ker j != im i at " + b.str());
        }
    return CheckReport::pass();
}

bool equal_mod_rel(const Ring& ring, const Matrix& rel, const Vector& x, const Vector& y)
{
    return in_span_mod(ring, rel, sub(ring, x, y));
}

/// Condition (i): j Γ_A(π; x) = Γ_C(π; j x).
CheckReport check_condition_i(const AlgebraTower& t)
{
    const Ring& ring = t.ring();
    const Operad& o = t.A.operad;
    std::optional<CheckReport> failure;
    for (int k = 1; k <= o.arity_cap && !failure; ++k)
        for (std::size_t op = 0; op < o.rank(k) && !failure; ++op) {
            long s = o.component(k).degrees[op];
            Vector pi = unit_vector(o.rank(k), op);
            auto admit = [&](const std::vector<Bidegree>& bs) {
                Bidegree sum{0, s};
                for (const auto& b : bs)
                    sum = sum + b;
                return t.a_rank(sum) > 0 || t.C.carrier.module.rank(t.C.output_bidegree(s, bs)) > 0;
            };
            for_each_basis_tuple(
                t.A, k, admit,
                [&](const std::vector<Generator>& gs) {
                    std::vector<Element> xs, jxs;
                    long P = 0, Q = s;
                    for (const auto& g : gs) {
                        Vector v = unit_vector(t.a_rank(g.b), g.index);
                        xs.push_back({g.b, v});
                        jxs.push_back({g.b, apply(ring, t.j_block(g.b), v)});
                        P += g.b.p;
                        Q += g.b.q;
                    }
                    Bidegree virt{P, Q};
                    Element y = act(t.A, k, pi, xs);
                    Vector yv = y.b == Bidegree{std::min(P, t.p_max), Q} ? y.v : Vector(t.a_rank(virt));
                    Vector lhs = apply(ring, t.j_block(virt), yv);
                    Element rhs = act(t.C, k, pi, jxs);
                    bool same_place = virt.p >= t.p_min && t.c_rank(virt) > 0 && rhs.b == Bidegree{std::min(P, t.p_max), Q};
                    bool ok;
                    if (same_place)
                        ok = equal_mod_rel(ring, t.c_relations(virt), lhs, rhs.v);
                    else
                        ok = (lhs.empty() || equal_mod_rel(ring, t.c_relations(virt), lhs, Vector(lhs.size()))) &&
                             (rhs.v.empty() || equal_mod_rel(ring, t.C.carrier.module.relations(rhs.b), rhs.v, Vector(rhs.v.size())));
                    if (!ok) {
                        failure = CheckReport::fail("condition (i)", "j(Gamma(x)) != Gamma(j x) at " + tuple_text(t.A, k, op, gs));
                        return false;
                    }
                    return true;
                });
        }
    return failure.value_or(CheckReport::pass());
}

/// Condition (ii): i Γ(π; x) = Γ(π; .., i x_h, ..) for h = 1..k.
CheckReport check_condition_ii(const AlgebraTower& t)
{
    const Ring& ring = t.ring();
    const Operad& o = t.A.operad;
    const bool clamped = t.A.clamp_p && *t.A.clamp_p == t.p_max;
    std::optional<CheckReport> failure;
    for (int k = 1; k <= o.arity_cap && !failure; ++k)
        for (std::size_t op = 0; op < o.rank(k) && !failure; ++op) {
            long s = o.component(k).degrees[op];
            Vector pi = unit_vector(o.rank(k), op);
            auto admit = [&](const std::vector<Bidegree>& bs) {
                Bidegree sum{0, s};
                for (const auto& b : bs)
                    sum = sum + b;
                return t.a_rank(sum) > 0 || t.a_rank({sum.p + 1, sum.q}) > 0;
            };
            for_each_basis_tuple(
                t.A, k, admit,
                [&](const std::vector<Generator>& gs) {
                    std::vector<Element> xs;
                    long P = 0, Q = s;
                    for (const auto& g : gs) {
                        xs.push_back({g.b, unit_vector(t.a_rank(g.b), g.index)});
                        P += g.b.p;
                        Q += g.b.q;
                    }
                    Bidegree virt{P, Q}, up{P + 1, Q};
                    Element y = act(t.A, k, pi, xs);
                    Vector yv = y.b == Bidegree{std::min(P, t.p_max), Q} ? y.v : Vector(t.a_rank(virt));
                    Vector lhs = apply(ring, t.i_block(virt), yv);
                    const Bidegree up_stage{std::min(P + 1, t.p_max), Q};
                    for (int h = 0; h < k; ++h) {
                        const Element& x = xs[std::size_t(h)];
                        // i(x_h) beyond the window only has a value under output clamping
                        if (x.b.p >= t.p_max && !clamped)
                            continue;
                        auto ys = xs;
                        ys[std::size_t(h)] = {{std::min(x.b.p + 1, t.p_max), x.b.q}, apply(ring, t.i_block(x.b), x.v)};
                        Element rhs = act(t.A, k, pi, ys);
                        bool placed = rhs.b == up_stage;
                        Vector rv = placed ? rhs.v : Vector(lhs.size());
                        bool rhs_lost = !placed && !is_zero(rhs.v);
                        if (rhs_lost || !equal_mod_rel(ring, t.a_relations(up), lhs, rv)) {
                            failure = CheckReport::fail("condition (ii)", fmt::format("i(Gamma(x)) != Gamma(.., i x_{}, ..) at {}", h + 1,
                                                                                      tuple_text(t.A, k, op, gs)));
                            return false;
                        }
                    }
                    return true;
                });
        }
    return failure.value_or(CheckReport::pass());
}

} // namespace

CheckReport check_tower(const AlgebraTower& t)
{
    if (auto r = check_shape(t); !r)
        return r;
    if (auto r = check_chain_map(t.i, t.A.carrier, t.A.carrier); !r)
        return CheckReport::fail("i " + r.law, r.detail);
    if (auto r = check_chain_map(t.j, t.A.carrier, t.C.carrier); !r)
        return CheckReport::fail("j " + r.law, r.detail);
    if (auto r = check_exact(t); !r)
        return r;
    if (auto r = check_condition_i(t); !r)
        return r;
    return check_condition_ii(t);
}

// ---------------------------------------------------------------- connecting map

Vector connecting_chain(const AlgebraTower& t, Bidegree b, const Vector& cycle)
{
    const Ring& ring = t.ring();
    Bidegree down{b.p, b.q - 1}, target{b.p - 1, b.q - 1};
    std::size_t na = t.a_rank(b);
    Vector out(t.a_rank(target));
    if (is_zero(cycle) || na == 0) {
        if (!is_zero(cycle) && !in_span_mod(ring, t.c_relations(b), cycle))
            throw Error(Errc::lift_failed, "no j-preimage at " + b.str());
        return out;
    }
    Matrix lift_sys = t.j_block(b).hcat(t.c_relations(b));
    auto x = solve(lift_sys, cycle, ring);
    if (!x)
        throw Error(Errc::lift_failed, "no j-preimage at " + b.str());
    Vector da = apply(ring, t.a_d(b), head(*x, na));
    if (is_zero(da))
        return out;
    Matrix rel = t.a_relations(down);
    Matrix I = t.i_block(target);
    if (I.cols() == 0) {
        if (!in_span_mod(ring, rel, da))
            throw Error(Errc::lift_failed, "d of the j-lift is not in the image of i at " + down.str());
        return out;
    }
    auto y = solve(I.hcat(rel), da, ring);
    if (!y)
        throw Error(Errc::lift_failed, "d of the j-lift is not in the image of i at " + down.str());
    return head(*y, out.size());
}

Vector connecting(const AlgebraTower& t, const HomologyData& hc, const HomologyData& ha, Bidegree b, const Vector& coords)
{
    const Subquotient* src = hc.find(b);
    Bidegree tb{b.p - 1, b.q - 1};
    const Subquotient* tgt = ha.find(tb);
    if (!src || !tgt)
        return Vector(tgt ? tgt->size() : 0);
    Vector y = connecting_chain(t, b, src->lift(coords));
    auto c = tgt->project(y);
    if (!c)
        throw Error(Errc::project_undefined, "connecting image is not a cycle at " + tb.str());
    return *c;
}

// ---------------------------------------------------------------- couples

std::shared_ptr<const TowerChains> TowerChains::build(const AlgebraTower& t, long p_top, long a_top)
{
    auto out = std::make_shared<TowerChains>();
    out->ring = t.ring();
    out->p_min = t.p_min;
    out->p_max = t.p_max;
    out->p_top = std::max(p_top, t.p_max);
    out->a_top = std::max(a_top, out->p_top + 1);
    out->qs = t.q_values();
    for (long p = t.p_min; p <= out->a_top; ++p)
        for (long q : out->qs) {
            Bidegree b{p, q};
            if (std::size_t n = t.a_rank(b); n > 0) {
                out->arank[b] = n;
                out->za[b] = t.a_cycles(b);
                out->ba[b] = t.a_boundaries(b);
                out->i[b] = t.i_block(b);
                out->j[b] = p <= out->p_top ? t.j_block(b) : Matrix(0, n);
            }
            if (std::size_t n = t.c_rank(b); n > 0 && p <= out->p_top) {
                out->crank[b] = n;
                out->zc[b] = t.c_cycles(b);
                out->bc[b] = t.c_boundaries(b);
            }
        }
    return out;
}

std::size_t TowerChains::a_rank(Bidegree b) const
{
    auto it = arank.find(b);
    return it == arank.end() ? 0 : it->second;
}

std::size_t TowerChains::c_rank(Bidegree b) const
{
    auto it = crank.find(b);
    return it == crank.end() ? 0 : it->second;
}

Matrix TowerChains::get(const std::map<Bidegree, Matrix>& m, Bidegree b, std::size_t rows)
{
    auto it = m.find(b);
    return it == m.end() ? Matrix(rows, 0) : it->second;
}

Matrix Couple::d_on_generators(Bidegree b) const
{
    const Ring& ring = chains->ring;
    const Matrix& K = k.at(b);
    Bidegree t{b.p - 1, b.q - 1};
    Bidegree out{b.p - level, b.q - 1};
    std::size_t rows = chains->c_rank(out);
    auto dt = D.find(t);
    if (dt == D.end() || rows == 0)
        return Matrix(rows, K.cols());
    return through_basis(ring, dt->second.generators(), j.at(t), K, "k_r");
}

Matrix Couple::d_block(Bidegree b) const
{
    const Ring& ring = chains->ring;
    const Subquotient& src = E.at(b);
    Bidegree out{b.p - level, b.q - 1};
    auto et = E.find(out);
    std::size_t rows = et == E.end() ? 0 : et->second.size();
    Matrix m(rows, src.size());
    if (rows == 0 || src.size() == 0)
        return m;
    Matrix chains_out = through_basis(ring, src.generators(), d_on_generators(b), src.lift(), "E^r");
    for (std::size_t c = 0; c < src.size(); ++c) {
        auto v = et->second.project(chains_out.column(c));
        if (!v)
            throw Error(Errc::preimage_failed, "d_r leaves Z^r at " + out.str());
        m.set_column(c, *v);
    }
    return m;
}

CheckReport Couple::check_exactness(long p_lo, long p_hi) const
{
    const Ring& ring = chains->ring;
    const int r = level;
    auto inrange = [&](Bidegree b) { return b.p >= p_lo && b.p <= p_hi; };
    auto ba = [&](Bidegree b) { return TowerChains::get(chains->ba, b, chains->a_rank(b)); };
    auto cat = [](const Matrix& a, const Matrix& b) { return a.cols() == 0 ? b : (b.cols() == 0 ? a : a.hcat(b)); };

    for (const auto& [b, e] : E) {
        if (!inrange(b))
            continue;
        // ker k_r = im j_r
        Bidegree t{b.p - 1, b.q - 1};
        Matrix Z = e.generators();
        Matrix ker = Z;
        if (D.count(t) && Z.cols() > 0)
            ker = mul(ring, Z, preimage(k.at(b), ba(t), ring));
        Bidegree s{b.p + r - 1, b.q};
        Matrix im = j.count(s) ? j.at(s) : Matrix(Z.rows(), 0);
        if (s.p <= chains->a_top && !same_span(cat(ker, e.relations()), cat(im, e.relations()), ring))
            return CheckReport::fail("couple exactness", fmt::format("ker k != im j on E^{} at {}", r, b.str()));
        // d_r d_r = 0
        Bidegree o{b.p - r, b.q - 1};
        auto eo = E.find(o);
        if (eo != E.end()) {
            Matrix dd = through_basis(ring, eo->second.generators(), d_on_generators(o), d_on_generators(b), "d_r");
            Bidegree oo{o.p - r, o.q - 1};
            auto eoo = E.find(oo);
            for (std::size_t c = 0; c < dd.cols(); ++c)
                if (eoo == E.end() ? !is_zero(dd.column(c)) : !eoo->second.is_zero_class(dd.column(c)))
                    return CheckReport::fail("d_r^2", fmt::format("d_{} d_{} != 0 at {}", r, r, b.str()));
        }
    }
    for (const auto& [b, dm] : D) {
        if (!inrange(b))
            continue;
        Matrix G = dm.generators();
        Matrix rel = ba(b);
        // ker i_r = im k_r
        Bidegree up{b.p + 1, b.q};
        Matrix I = TowerChains::get(chains->i, b, chains->a_rank(up));
        Matrix ker = G;
        if (I.rows() > 0 && G.cols() > 0)
            ker = mul(ring, G, preimage(mul(ring, I, G), ba(up), ring));
        Bidegree ks{b.p + 1, b.q + 1};
        Matrix im = k.count(ks) ? k.at(ks) : Matrix(G.rows(), 0);
        if (!same_span(cat(ker, rel), cat(im, rel), ring))
            return CheckReport::fail("couple exactness", fmt::format("ker i != im k on D^{} at {}", r, b.str()));
        // im i_r = ker j_r
        Bidegree js{b.p - (r - 1), b.q};
        auto ej = E.find(js);
        Matrix kerj = G;
        if (ej != E.end() && G.cols() > 0)
            kerj = mul(ring, G, preimage(j.at(b), ej->second.relations(), ring));
        Bidegree down{b.p - 1, b.q};
        Matrix imi(G.rows(), 0);
        if (D.count(down))
            imi = mul(ring, TowerChains::get(chains->i, down, G.rows()), D.at(down).generators());
        if (!same_span(cat(kerj, rel), cat(imi, rel), ring))
            return CheckReport::fail("couple exactness", fmt::format("ker j != im i on D^{} at {}", r, b.str()));
    }
    return CheckReport::pass();
}

Couple first_couple(const AlgebraTower& t, std::optional<long> p_top, std::optional<long> d_top)
{
    const Ring& ring = t.ring();
    Couple c;
    c.level = 1;
    long top = p_top.value_or(t.p_max);
    c.chains = TowerChains::build(t, top, d_top.value_or(top + 1));
    const TowerChains& ch = *c.chains;
    for (const auto& [b, n] : ch.crank) {
        Subquotient e = subquotient(n, ch.zc.at(b), ch.bc.at(b), ring);
        std::vector<Vector> cols;
        const Matrix& G = e.generators();
        for (std::size_t s = 0; s < G.cols(); ++s)
            cols.push_back(connecting_chain(t, b, G.column(s)));
        c.k[b] = Matrix::from_columns(t.a_rank({b.p - 1, b.q - 1}), cols);
        c.E.emplace(b, std::move(e));
    }
    for (const auto& [b, n] : ch.arank) {
        Subquotient d = subquotient(n, ch.za.at(b), ch.ba.at(b), ring);
        c.j[b] = mul(ring, ch.j.at(b), d.generators());
        c.D.emplace(b, std::move(d));
    }
    return c;
}

Couple derive(const Couple& c)
{
    const Ring& ring = c.ring();
    const int r = c.level;
    const TowerChains& ch = *c.chains;
    Couple n;
    n.level = r + 1;
    n.chains = c.chains;

    std::map<Bidegree, Matrix> dmap;
    for (const auto& [b, e] : c.E)
        dmap[b] = c.d_on_generators(b);

    for (const auto& [b, e] : c.E) {
        const Matrix& Z = e.generators();
        Bidegree t{b.p - r, b.q - 1};
        Matrix Zn = Z;
        auto et = c.E.find(t);
        if (et != c.E.end() && Z.cols() > 0) {
            const Matrix& dm = dmap.at(b);
            for (std::size_t s = 0; s < dm.cols(); ++s)
                if (!et->second.contains(dm.column(s)))
                    throw Error(Errc::preimage_failed, "d_r leaves Z^r at " + t.str());
            Zn = mul(ring, Z, preimage(dm, et->second.relations(), ring));
        }
        Matrix Bn = e.relations();
        Bidegree s{b.p + r, b.q + 1};
        if (auto it = dmap.find(s); it != dmap.end() && it->second.cols() > 0)
            Bn = Bn.cols() == 0 ? it->second : Bn.hcat(it->second);
        Subquotient en = subquotient(e.ambient_rank(), Zn, Bn, ring);
        n.k[b] = through_basis(ring, Z, c.k.at(b), en.generators(), "Z^{r+1}");
        n.E.emplace(b, std::move(en));
    }

    for (const auto& [b, d] : c.D) {
        std::size_t rows = d.ambient_rank();
        Matrix rel = TowerChains::get(ch.ba, b, rows);
        Bidegree src{b.p - 1, b.q};
        Bidegree jt{b.p - r, b.q};
        std::size_t jrows = ch.c_rank(jt);
        auto ds = c.D.find(src);
        if (ds == c.D.end()) {
            Subquotient dn = subquotient(rows, rel, rel, ring);
            n.j[b] = Matrix(jrows, dn.generators().cols());
            n.D.emplace(b, std::move(dn));
            continue;
        }
        Matrix image = mul(ring, ch.i.at(src), ds->second.generators());
        std::size_t m = image.cols();
        Matrix sys = rel.cols() == 0 ? image : image.hcat(rel);
        Subquotient dn = subquotient(rows, sys, rel, ring);
        const Matrix& G = dn.generators();
        std::vector<Vector> cols;
        for (std::size_t s = 0; s < G.cols(); ++s) {
            auto x = solve(sys, G.column(s), ring);
            if (!x)
                throw Error(Errc::preimage_failed, "no i-preimage in D^r at " + b.str());
            cols.push_back(apply(ring, c.j.at(src), head(*x, m)));
        }
        n.j[b] = Matrix::from_columns(jrows, cols);
        n.D.emplace(b, std::move(dn));
    }
    return n;
}

} // namespace opseq
