#include "opseq/spectral.hpp"

#include <fmt/core.h>

#include "detail.hpp"
#include "opseq/error.hpp"

namespace opseq {

using detail::cat;
using detail::head;
using detail::through_basis;

const char* route_name(Route r) { return r == Route::derivation ? "derivation" : "cycles"; }

std::size_t Page::size(Bidegree b) const
{
    auto it = E.find(b);
    return it == E.end() ? 0 : it->second.size();
}

DGBigradedModule Page::module() const
{
    DGBigradedModule m{BigradedModule(ring), GradedMap{d_shift(), {}}};
    for (const auto& [b, e] : E) {
        if (e.is_zero())
            continue;
        Component c;
        for (std::size_t s = 0; s < e.size(); ++s)
            c.labels.push_back(fmt::format("e{}", s));
        if (e.ring().is_integers())
            c.orders = e.orders();
        m.module.set(b, std::move(c));
    }
    for (const auto& [b, blk] : d)
        if (blk.rows() > 0 && blk.cols() > 0 && !blk.is_zero())
            m.d.blocks[b] = blk;
    return m;
}

bool Page::d_is_zero() const
{
    for (const auto& [b, blk] : d)
        if (!blk.is_zero())
            return false;
    return true;
}

namespace {

bool in_window(const AlgebraTower& t, Bidegree b) { return b.p >= t.p_min && b.p <= t.p_max; }

/// Normal-form d blocks from d_chain; the target of b is b + shift.
void finish_page(Page& page, Bidegree shift)
{
    const Ring& ring = page.ring;
    for (const auto& [b, e] : page.E) {
        Bidegree out = b + shift;
        auto et = page.E.find(out);
        std::size_t rows = et == page.E.end() ? 0 : et->second.size();
        Matrix m(rows, e.size());
        if (rows > 0 && e.size() > 0) {
            Matrix chains = through_basis(ring, e.generators(), page.d_chain.at(b), e.lift(), "E^r");
            for (std::size_t c = 0; c < e.size(); ++c) {
                auto v = et->second.project(chains.column(c));
                if (!v)
                    throw Error(Errc::preimage_failed, "d_r leaves Z^r at " + out.str());
                m.set_column(c, *v);
            }
        }
        page.d[b] = std::move(m);
    }
}

/// Lattices of the cycles route with per-bidegree caches.
class CyclesData {
public:
    explicit CyclesData(const AlgebraTower& t) : t_(t), ring_(t.ring()) {}

    const AlgebraTower& tower() const { return t_; }

    /// k^{-1}(i^e D + B) inside Z(C)_b; e < 0 means the image term is dropped.
    Matrix z_lattice(Bidegree b, long e)
    {
        const Matrix& Z = zc(b);
        const Matrix& K = k1(b);
        if (Z.cols() == 0 || K.rows() == 0)
            return Z;
        Matrix target = image_target(b, e);
        return mul(ring_, Z, preimage(K, target, ring_));
    }

    /// j(cycles of A_b that i^e sends to boundaries) + B(C)_b.
    Matrix b_lattice(Bidegree b, long e)
    {
        Matrix bcb = t_.c_boundaries(b);
        if (bcb.rows() == 0)
            bcb = Matrix(t_.c_rank(b), 0);
        const Matrix& ZA = za(b);
        if (ZA.cols() == 0)
            return bcb;
        Bidegree up{b.p + e, b.q};
        Matrix killed = mul(ring_, ZA, preimage(mul(ring_, t_.i_power(b, e), ZA), ba(up), ring_));
        return cat(mul(ring_, t_.j_block(b), killed), bcb);
    }

    /// d_r on the columns of zgens: chains of C at b - (e+1, 1).
    Matrix d_chain(Bidegree b, long e, const Matrix& zgens)
    {
        Bidegree src{b.p - 1 - e, b.q - 1};
        std::size_t rows = t_.c_rank(src);
        Matrix out(rows, zgens.cols());
        if (rows == 0 || zgens.cols() == 0)
            return out;
        const Matrix& ZA = za(src);
        Matrix sys = image_target(b, e);
        Matrix J = mul(ring_, t_.j_block(src), ZA);
        for (std::size_t c = 0; c < zgens.cols(); ++c) {
            Vector y = connecting_chain(t_, b, zgens.column(c));
            if (is_zero(y))
                continue;
            auto x = sys.cols() == 0 ? std::nullopt : solve(sys, y, ring_);
            if (!x)
                throw Error(Errc::preimage_failed, fmt::format("k z is not in i^{} D at {}", e, b.str()));
            out.set_column(c, apply(ring_, J, head(*x, ZA.cols())));
        }
        return out;
    }

    /// Smallest n0 with ker i^{n0} = ker i^{n0+1} on the top stage, per q.
    long kernel_stable_exponent(long q)
    {
        if (t_.policy == ExtensionPolicy::constant_above)
            return 0;
        auto it = n0_.find(q);
        if (it != n0_.end())
            return it->second;
        Bidegree top{t_.p_max, q};
        auto kernel_at = [&](long n) {
            const Matrix& ZA = za(top);
            if (ZA.cols() == 0)
                return ZA;
            return cat(mul(ring_, ZA, preimage(mul(ring_, t_.i_power(top, n), ZA), ba({top.p + n, q}), ring_)), ba(top));
        };
        Matrix prev = kernel_at(0);
        for (long n = 0; n < kMaxKernelSteps; ++n) {
            Matrix next = kernel_at(n + 1);
            if (same_span(prev, next, ring_))
                return n0_[q] = n;
            prev = std::move(next);
        }
        throw Error(Errc::unsupported, fmt::format("ker i^n at q = {} does not stabilize within {} steps", q, kMaxKernelSteps));
    }

private:
    static constexpr long kMaxKernelSteps = 256;

    Matrix image_target(Bidegree b, long e)
    {
        Bidegree down{b.p - 1, b.q - 1};
        Matrix rel = ba(down);
        if (e < 0)
            return rel;
        Bidegree src{b.p - 1 - e, b.q - 1};
        const Matrix& ZA = za(src);
        if (ZA.cols() == 0)
            return rel;
        return cat(mul(ring_, t_.i_power(src, e), ZA), rel);
    }

    const Matrix& cached(std::map<Bidegree, Matrix>& cache, Bidegree b, std::size_t rows, Matrix (AlgebraTower::*f)(Bidegree) const)
    {
        auto it = cache.find(b);
        if (it != cache.end())
            return it->second;
        Matrix m = rows == 0 ? Matrix(0, 0) : (t_.*f)(b);
        if (m.rows() == 0)
            m = Matrix(rows, 0);
        return cache.emplace(b, std::move(m)).first->second;
    }

    const Matrix& za(Bidegree b) { return cached(za_, b, t_.a_rank(b), &AlgebraTower::a_cycles); }
    const Matrix& ba(Bidegree b) { return cached(ba_, b, t_.a_rank(b), &AlgebraTower::a_boundaries); }
    const Matrix& zc(Bidegree b) { return cached(zc_, b, t_.c_rank(b), &AlgebraTower::c_cycles); }

    const Matrix& k1(Bidegree b)
    {
        auto it = k1_.find(b);
        if (it != k1_.end())
            return it->second;
        const Matrix& Z = zc(b);
        std::vector<Vector> cols;
        for (std::size_t c = 0; c < Z.cols(); ++c)
            cols.push_back(connecting_chain(t_, b, Z.column(c)));
        return k1_.emplace(b, Matrix::from_columns(t_.a_rank({b.p - 1, b.q - 1}), cols)).first->second;
    }

    const AlgebraTower& t_;
    Ring ring_;
    std::map<Bidegree, Matrix> za_, ba_, zc_, k1_;
    std::map<long, long> n0_;
};

template <class F>
void for_window(const AlgebraTower& t, F&& f)
{
    for (long p = t.p_min; p <= t.p_max; ++p)
        for (long q : t.q_values())
            if (t.c_rank({p, q}) > 0)
                f(Bidegree{p, q});
}

Page cycles_page(CyclesData& data, int r, long offset)
{
    const AlgebraTower& t = data.tower();
    const Ring& ring = t.ring();
    long e = r - 1 + offset;
    Page page;
    page.r = r;
    page.route = Route::cycles;
    page.ring = ring;
    for_window(t, [&](Bidegree b) {
        Subquotient sq = subquotient(t.c_rank(b), data.z_lattice(b, e), data.b_lattice(b, e), ring);
        page.d_chain[b] = data.d_chain(b, e, sq.generators());
        page.E.emplace(b, std::move(sq));
    });
    finish_page(page, {-(e + 1), -1});
    return page;
}

Page couple_page(const Couple& c, const AlgebraTower& t)
{
    Page page;
    page.r = c.level;
    page.route = Route::derivation;
    page.ring = t.ring();
    for (const auto& [b, e] : c.E) {
        if (!in_window(t, b))
            continue;
        page.d_chain[b] = c.d_on_generators(b);
        page.E.emplace(b, e);
    }
    finish_page(page, page.d_shift());
    return page;
}

long derivation_top(const AlgebraTower& t, int r)
{
    if (t.policy == ExtensionPolicy::constant_above)
        return t.p_max;
    return t.p_max + long(r) * (r + 1) / 2 + 1;
}

bool matches(const Page& page, const Page& inf) { return page.d_is_zero() && same_subquotients(page, inf); }

std::vector<Page> cycles_pages_until(CyclesData& data, int r_max, const std::optional<Page>& inf)
{
    std::vector<Page> out;
    for (int r = 1; r <= r_max; ++r) {
        out.push_back(cycles_page(data, r, 0));
        if (inf && matches(out.back(), *inf))
            break;
    }
    return out;
}

std::vector<Page> derivation_pages_until(const AlgebraTower& t, int r_max, const std::optional<Page>& inf)
{
    int budget = t.policy == ExtensionPolicy::constant_above ? r_max : std::min(r_max, 4);
    while (true) {
        std::vector<Page> out;
        Couple c = first_couple(t, derivation_top(t, budget));
        for (int r = 1; r <= budget; ++r) {
            if (r > 1)
                c = derive(c);
            out.push_back(couple_page(c, t));
            if (inf && matches(out.back(), *inf))
                return out;
        }
        if (budget >= r_max)
            return out;
        budget = std::min(r_max, 2 * budget);
    }
}

} // namespace

bool same_subquotients(const Page& a, const Page& b)
{
    const Ring& ring = a.ring;
    if (a.E.size() != b.E.size())
        return false;
    for (const auto& [k, x] : a.E) {
        auto it = b.E.find(k);
        if (it == b.E.end())
            return false;
        Matrix none(x.ambient_rank(), 0);
        if (!same_span(cat(x.generators(), none), cat(it->second.generators(), none), ring))
            return false;
        if (!same_span(cat(x.relations(), none), cat(it->second.relations(), none), ring))
            return false;
    }
    return true;
}

Page page_via_cycles(const AlgebraTower& t, int r, long exponent_offset)
{
    if (r < 1)
        throw Error(Errc::invalid_argument, "page level must be at least 1");
    CyclesData data(t);
    return cycles_page(data, r, exponent_offset);
}

std::vector<Page> pages_via_derivation(const AlgebraTower& t, int r_max)
{
    if (r_max < 1)
        throw Error(Errc::invalid_argument, "page level must be at least 1");
    std::vector<Page> out;
    Couple c = first_couple(t, derivation_top(t, r_max));
    for (int r = 1; r <= r_max; ++r) {
        if (r > 1)
            c = derive(c);
        out.push_back(couple_page(c, t));
    }
    return out;
}

Page page_via_derivation(const AlgebraTower& t, int r) { return pages_via_derivation(t, r).back(); }

CheckReport cross_check(const Page& a, const Page& b)
{
    const Ring& ring = a.ring;
    if (a.r != b.r)
        return CheckReport::fail("cross-check", fmt::format("levels {} and {}", a.r, b.r));
    std::set<Bidegree> keys;
    for (const auto& [k, v] : a.E)
        keys.insert(k);
    for (const auto& [k, v] : b.E)
        keys.insert(k);
    for (Bidegree k : keys) {
        auto ia = a.E.find(k), ib = b.E.find(k);
        if (ia == a.E.end() || ib == b.E.end()) {
            const Subquotient& s = ia == a.E.end() ? ib->second : ia->second;
            if (!s.is_zero())
                return CheckReport::fail("cross-check", "component present on one route only at " + k.str());
            continue;
        }
        const Subquotient& x = ia->second;
        const Subquotient& y = ib->second;
        std::size_t n = x.ambient_rank();
        if (!same_span(cat(x.generators(), Matrix(n, 0)), cat(y.generators(), Matrix(n, 0)), ring))
            return CheckReport::fail("cross-check", fmt::format("Z^{} differs at {}", a.r, k.str()));
        if (!same_span(cat(x.relations(), Matrix(n, 0)), cat(y.relations(), Matrix(n, 0)), ring))
            return CheckReport::fail("cross-check", fmt::format("B^{} differs at {}", a.r, k.str()));
        if (x.orders() != y.orders())
            return CheckReport::fail("cross-check", fmt::format("invariants differ at {}", k.str()));
    }
    for (const auto& [k, x] : a.E) {
        if (x.generators().cols() == 0)
            continue;
        const Subquotient& y = b.E.at(k);
        const Matrix& da = a.d_chain.at(k);
        const Matrix& db = b.d_chain.at(k);
        if (da.rows() != db.rows())
            return CheckReport::fail("cross-check", fmt::format("d_{} targets differ at {}", a.r, k.str()));
        Matrix db_on_a = through_basis(ring, y.generators(), db, x.generators(), "cross-check");
        Matrix diff = sub(ring, da, db_on_a);
        auto et = a.E.find(k + a.d_shift());
        for (std::size_t c = 0; c < diff.cols(); ++c) {
            Vector v = diff.column(c);
            bool zero = et == a.E.end() ? is_zero(v) : et->second.is_zero_class(v);
            if (!zero)
                return CheckReport::fail("cross-check", fmt::format("d_{} differs on a generator at {}", a.r, k.str()));
        }
    }
    return CheckReport::pass();
}

OperadAlgebra page_action(const AlgebraTower& t, const Page& page)
{
    const Ring& ring = page.ring;
    const OperadAlgebra& C = t.C;
    OperadHomology oh = homology_operad_data(C.operad);
    OperadAlgebra out;
    out.operad = oh.operad;
    out.carrier = page.module();
    const BigradedModule& mod = out.carrier.module;

    std::map<Bidegree, Matrix> perturb;
    for (const auto& [b, e] : page.E)
        if (!e.is_zero())
            perturb[b] = e.relations().cols() == 0 ? e.relations() : span_basis(e.relations(), ring);

    for (int k = 1; k <= out.operad.arity_cap; ++k) {
        for (std::size_t op = 0; op < out.operad.rank(k); ++op) {
            Vector lifted = oh.lifts[std::size_t(k)].column(op);
            long s = out.operad.component(k).degrees[op];
            for_each_basis_tuple(
                out, k, [&](const std::vector<Bidegree>& bs) { return mod.rank(out.output_bidegree(s, bs)) > 0; },
                [&](const std::vector<Generator>& gs) {
                    std::vector<Element> xs;
                    for (const auto& g : gs)
                        xs.push_back({g.b, page.E.at(g.b).lift().column(g.index)});
                    Element y = act(C, k, lifted, xs);
                    const Subquotient& target = page.E.at(y.b);
                    auto coords = target.project(y.v);
                    if (!coords)
                        throw Error(Errc::closure_violation,
                                    fmt::format("Gamma of Z^{} cycles leaves Z^{} at {}", page.r, page.r, y.b.str()));
                    for (std::size_t h = 0; h < xs.size(); ++h) {
                        const Matrix& P = perturb.at(gs[h].b);
                        for (std::size_t c = 0; c < P.cols(); ++c) {
                            auto ys = xs;
                            ys[h].v = P.column(c);
                            Element z = act(C, k, lifted, ys);
                            if (!target.is_zero_class(z.v))
                                throw Error(Errc::well_definedness_violation,
                                            fmt::format("Gamma on page {} depends on the representative in slot {} at {}", page.r,
                                                        h + 1, y.b.str()));
                        }
                    }
                    out.set(k, op, gs, *coords);
                    return true;
                });
        }
    }
    return out;
}

CheckReport check_leibniz(const OperadAlgebra& page_algebra)
{
    auto r = check_derivation(page_algebra);
    if (!r)
        return CheckReport::fail("leibniz", r.detail);
    return r;
}

Page e_infinity_page(const AlgebraTower& t)
{
    CyclesData data(t);
    Page page;
    page.r = 0;
    page.infinity = true;
    page.route = Route::cycles;
    page.ring = t.ring();
    for_window(t, [&](Bidegree b) {
        long n = t.p_max - b.p + data.kernel_stable_exponent(b.q);
        Subquotient sq = subquotient(t.c_rank(b), data.z_lattice(b, -1), data.b_lattice(b, n), t.ring());
        page.d_chain[b] = Matrix(0, sq.generators().cols());
        page.E.emplace(b, std::move(sq));
    });
    for (auto& [b, e] : page.E)
        page.d[b] = Matrix(0, e.size());
    return page;
}

Stabilization detect_stabilization(const std::vector<Page>& pages, const Page& e_infinity)
{
    Stabilization s;
    for (const Page& p : pages)
        if (matches(p, e_infinity)) {
            s.certified = true;
            s.r0 = p.r;
            s.certificate = fmt::format("Z^{0} = Z^inf and B^{0} = B^inf at all {1} bidegrees, d_{0} = 0", p.r, p.E.size());
            return s;
        }
    s.certificate = fmt::format("undetermined through r = {}", pages.empty() ? 0 : pages.back().r);
    return s;
}

SpectralSequence compute_spectral_sequence(const AlgebraTower& t, const SpectralOptions& opt)
{
    if (opt.r_max < 1)
        throw Error(Errc::invalid_argument, "r_max must be at least 1");
    SpectralSequence ss;
    ss.tower = t;
    std::optional<Page> inf;
    try {
        inf = e_infinity_page(t);
    } catch (const Error& e) {
        if (e.code() != Errc::unsupported)
            throw;
    }
    CyclesData data(t);
    if (opt.route == Route::cycles)
        ss.pages = cycles_pages_until(data, opt.r_max, inf);
    else
        ss.pages = derivation_pages_until(t, opt.r_max, inf);
    if (opt.cross_check) {
        int top = ss.pages.back().r;
        if (opt.route == Route::cycles)
            ss.alternate = pages_via_derivation(t, top);
        else
            for (int r = 1; r <= top; ++r)
                ss.alternate.push_back(cycles_page(data, r, 0));
        for (std::size_t n = 0; n < ss.pages.size(); ++n)
            ss.cross_checks.push_back(cross_check(ss.pages[n], ss.alternate[n]));
    }
    if (inf) {
        ss.stabilization = detect_stabilization(ss.pages, *inf);
        ss.e_infinity = *inf;
    } else {
        ss.stabilization.certificate = fmt::format("undetermined through r = {}", ss.pages.back().r);
        ss.e_infinity = ss.pages.back();
        ss.e_infinity.infinity = true;
    }
    ss.e_infinity_exact = ss.stabilization.certified;
    return ss;
}

} // namespace opseq
