#include "opseq/algebra.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "opseq/error.hpp"

namespace opseq {

std::size_t GammaKeyHash::operator()(const GammaKey& k) const noexcept
{
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    mix(std::uint64_t(k.arity));
    mix(k.op);
    for (const auto& g : k.inputs) {
        mix(std::uint64_t(g.b.p));
        mix(std::uint64_t(g.b.q));
        mix(g.index);
    }
    return std::size_t(h);
}

Bidegree OperadAlgebra::output_bidegree(long op_degree, const std::vector<Bidegree>& inputs) const
{
    Bidegree out{0, op_degree};
    for (const auto& b : inputs)
        out = out + b;
    if (clamp_p && out.p > *clamp_p)
        out.p = *clamp_p;
    return out;
}

Vector OperadAlgebra::basis_action(int arity, std::size_t op, const std::vector<Generator>& inputs) const
{
    auto it = gamma.find(GammaKey{arity, op, inputs});
    if (it != gamma.end())
        return it->second;
    std::vector<Bidegree> bs;
    for (const auto& g : inputs)
        bs.push_back(g.b);
    return Vector(carrier.module.rank(output_bidegree(operad.component(arity).degrees[op], bs)));
}

void OperadAlgebra::set(int arity, std::size_t op, std::vector<Generator> inputs, Vector value)
{
    if (is_zero(value)) {
        gamma.erase(GammaKey{arity, op, inputs});
        return;
    }
    gamma[GammaKey{arity, op, std::move(inputs)}] = std::move(value);
}

void OperadAlgebra::fill_unit_action()
{
    const Vector& u = operad.unit;
    std::size_t nonzero = 0, idx = 0;
    for (std::size_t k = 0; k < u.size(); ++k)
        if (u[k] != 0) {
            ++nonzero;
            idx = k;
        }
    if (nonzero != 1 || u[idx] != 1)
        return;
    for (const auto& g : generators()) {
        GammaKey key{1, idx, {g}};
        if (!gamma.count(key))
            gamma[key] = unit_vector(carrier.module.rank(g.b), g.index);
    }
}

std::vector<Generator> OperadAlgebra::generators() const
{
    std::vector<Generator> out;
    for (const auto& [b, c] : carrier.module.components())
        for (std::size_t k = 0; k < c.rank(); ++k)
            out.push_back({b, k});
    return out;
}

Element act(const OperadAlgebra& a, int arity, const Vector& pi, const std::vector<Element>& xs)
{
    const Ring& ring = a.ring();
    if (arity < 1 || arity > a.operad.arity_cap)
        throw Error(Errc::arity_out_of_range, fmt::format("arity {} outside 1..{}", arity, a.operad.arity_cap));
    if (xs.size() != std::size_t(arity))
        throw Error(Errc::invalid_argument, fmt::format("{} inputs for an operation of arity {}", xs.size(), arity));
    if (pi.size() != a.operad.rank(arity))
        throw Error(Errc::invalid_argument, "operation vector has the wrong size");
    auto deg = a.operad.degree(arity, pi);
    if (!deg && !is_zero(pi))
        throw Error(Errc::invalid_argument, "operation is not homogeneous");
    std::vector<Bidegree> bs;
    for (const auto& x : xs) {
        if (x.v.size() != a.carrier.module.rank(x.b))
            throw Error(Errc::invalid_argument, "input " + x.b.str() + " has the wrong size");
        bs.push_back(x.b);
    }
    Element out{a.output_bidegree(deg.value_or(0), bs), {}};
    out.v = Vector(a.carrier.module.rank(out.b));
    if (out.v.empty() || is_zero(pi))
        return out;
    std::vector<std::vector<std::size_t>> nz(xs.size());
    for (std::size_t s = 0; s < xs.size(); ++s) {
        for (std::size_t k = 0; k < xs[s].v.size(); ++k)
            if (xs[s].v[k] != 0)
                nz[s].push_back(k);
        if (nz[s].empty())
            return out;
    }
    GammaKey key{arity, 0, std::vector<Generator>(xs.size())};
    for (std::size_t s = 0; s < xs.size(); ++s)
        key.inputs[s].b = xs[s].b;
    std::vector<std::size_t> pos(xs.size(), 0);
    for (std::size_t op = 0; op < pi.size(); ++op) {
        if (pi[op] == 0)
            continue;
        key.op = op;
        std::fill(pos.begin(), pos.end(), 0);
        while (true) {
            Scalar coeff = pi[op];
            for (std::size_t s = 0; s < xs.size(); ++s) {
                key.inputs[s].index = nz[s][pos[s]];
                coeff *= xs[s].v[nz[s][pos[s]]];
            }
            auto it = a.gamma.find(key);
            if (it != a.gamma.end())
                for (std::size_t k = 0; k < out.v.size(); ++k)
                    if (it->second[k] != 0)
                        out.v[k] += coeff * it->second[k];
            std::size_t s = 0;
            while (s < pos.size() && ++pos[s] == nz[s].size())
                pos[s++] = 0;
            if (s == pos.size())
                break;
        }
    }
    for (auto& x : out.v)
        x = ring.reduce(x);
    return out;
}

namespace {

Element basis_element(const BigradedModule& m, const Generator& g) { return {g.b, unit_vector(m.rank(g.b), g.index)}; }

bool equal_mod(const BigradedModule& m, Bidegree b, const Vector& x, const Vector& y)
{
    const Ring& ring = m.ring();
    Vector diff = sub(ring, x, y);
    if (is_zero(diff))
        return true;
    Matrix rel = m.relations(b);
    return rel.cols() > 0 && in_span(rel, diff, ring);
}

std::string describe_inputs(const OperadAlgebra& a, const std::vector<Generator>& xs)
{
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k)
            s += ", ";
        const auto* c = a.carrier.module.find(xs[k].b);
        s += c ? c->labels[xs[k].index] + "@" + xs[k].b.str() : "?";
    }
    return s;
}

std::string describe(const OperadAlgebra& a, int arity, std::size_t op, const std::vector<Generator>& xs)
{
    return "(" + a.operad.component(arity).labels[op] + "; " + describe_inputs(a, xs) + ")";
}

} // namespace

bool for_each_basis_tuple(const OperadAlgebra& a, int k, const std::function<bool(const std::vector<Bidegree>&)>& admit,
                    const std::function<bool(const std::vector<Generator>&)>& fn)
{
    std::vector<std::pair<Bidegree, std::size_t>> comps;
    for (const auto& [b, c] : a.carrier.module.components())
        if (c.rank() > 0)
            comps.push_back({b, c.rank()});
    if (comps.empty())
        return true;
    const auto len = static_cast<std::size_t>(k);
    std::vector<std::size_t> ci(len, 0);
    std::vector<Bidegree> bs(len);
    std::vector<Generator> gs(len);
    while (true) {
        for (std::size_t s = 0; s < ci.size(); ++s)
            bs[s] = comps[ci[s]].first;
        if (admit(bs)) {
            std::vector<std::size_t> idx(len, 0);
            while (true) {
                for (std::size_t s = 0; s < idx.size(); ++s)
                    gs[s] = {bs[s], idx[s]};
                if (!fn(gs))
                    return false;
                std::size_t s = 0;
                while (s < idx.size() && ++idx[s] == comps[ci[s]].second)
                    idx[s++] = 0;
                if (s == idx.size())
                    break;
            }
        }
        std::size_t s = 0;
        while (s < ci.size() && ++ci[s] == comps.size())
            ci[s++] = 0;
        if (s == ci.size())
            break;
    }
    return true;
}

CheckReport check_derivation(const OperadAlgebra& a)
{
    const Ring& ring = a.ring();
    const Operad& o = a.operad;
    const BigradedModule& mod = a.carrier.module;
    std::optional<CheckReport> failure;
    auto fail = [&](std::string law, std::string detail) {
        failure = CheckReport::fail(std::move(law), std::move(detail));
        return false;
    };
    auto in_support = [&](Bidegree b) { return mod.rank(b) > 0; };

    // derivation relation
    const Bidegree dshift = a.carrier.d.shift;
    for (int k = 1; k <= o.arity_cap && !failure; ++k) {
        const auto& comp = o.component(k);
        for (std::size_t op = 0; op < comp.rank() && !failure; ++op) {
            long s = comp.degrees[op];
            Vector pi = unit_vector(comp.rank(), op);
            Vector dpi = o.delta(k, pi);
            for_each_basis_tuple(
                a, k,
                [&](const std::vector<Bidegree>& bs) {
                    return in_support(a.output_bidegree(s, bs) + dshift);
                },
                [&](const std::vector<Generator>& gs) {
                    std::vector<Element> xs;
                    for (const auto& g : gs)
                        xs.push_back(basis_element(mod, g));
                    Element y = act(a, k, pi, xs);
                    Bidegree t = y.b + dshift;
                    Vector lhs = y.v.empty() ? Vector(mod.rank(t)) : apply(ring, a.carrier.d_block(y.b), y.v);
                    Vector rhs(mod.rank(t));
                    if (!is_zero(dpi))
                        rhs = act(a, k, dpi, xs).v;
                    long prefix = s;
                    for (int i = 0; i < k; ++i) {
                        Element x = xs[std::size_t(i)];
                        Element dx{x.b + dshift, apply(ring, a.carrier.d_block(x.b), x.v)};
                        if (!is_zero(dx.v)) {
                            auto ys = xs;
                            ys[std::size_t(i)] = dx;
                            rhs = add(ring, rhs, scale(ring, sign_of(prefix), act(a, k, pi, ys).v));
                        }
                        prefix += x.b.q;
                    }
                    if (!equal_mod(mod, t, lhs, rhs))
                        return fail("derivation", describe(a, k, op, gs));
                    return true;
                });
        }
    }
    if (failure)
        return *failure;
    return CheckReport::pass();
}

CheckReport check_algebra(const OperadAlgebra& a)
{
    const Ring& ring = a.ring();
    const Operad& o = a.operad;
    const BigradedModule& mod = a.carrier.module;
    if (!(o.ring == ring))
        return CheckReport::fail("ring", "operad and carrier rings differ");
    if (auto r = check_operad(o); !r)
        return CheckReport::fail("operad " + r.law, r.detail);
    if (auto r = check_complex(a.carrier); !r)
        return CheckReport::fail("carrier " + r.law, r.detail);

    // table shapes, bidegree law, well-definedness on torsion inputs
    for (const auto& [key, value] : a.gamma) {
        if (key.arity < 1 || key.arity > o.arity_cap || key.op >= o.rank(key.arity) || key.inputs.size() != std::size_t(key.arity))
            return CheckReport::fail("shape", "table entry with invalid arity or operation");
        std::vector<Bidegree> bs;
        for (const auto& g : key.inputs) {
            if (g.index >= mod.rank(g.b))
                return CheckReport::fail("shape", "table entry input outside the carrier at " + g.b.str());
            bs.push_back(g.b);
        }
        Bidegree out = a.output_bidegree(o.component(key.arity).degrees[key.op], bs);
        if (value.size() != mod.rank(out)) {
            if (!is_zero(value) || mod.rank(out) != 0)
                return CheckReport::fail("bidegree law", describe(a, key.arity, key.op, key.inputs) + " does not land at " + out.str());
        }
        for (std::size_t s = 0; s < key.inputs.size(); ++s) {
            Integer d = mod.find(key.inputs[s].b)->order(key.inputs[s].index);
            if (d == 0)
                continue;
            if (!equal_mod(mod, out, scale(ring, Scalar(d), value), Vector(value.size())))
                return CheckReport::fail("well-defined", describe(a, key.arity, key.op, key.inputs) + " is not killed by the input order");
        }
    }

    std::optional<CheckReport> failure;
    auto fail = [&](std::string law, std::string detail) {
        failure = CheckReport::fail(std::move(law), std::move(detail));
        return false;
    };

    // unit
    for (const auto& g : a.generators()) {
        Element x = basis_element(mod, g);
        Element y = act(a, 1, o.unit, {x});
        if (y.b != x.b || !equal_mod(mod, x.b, y.v, x.v))
            return CheckReport::fail("unit", "Gamma(1; x) != x for " + g.b.str());
    }

    auto in_support = [&](Bidegree b) { return mod.rank(b) > 0; };

    if (auto r = check_derivation(a); !r)
        return r;

    // equivariance on adjacent transpositions
    for (int k = 2; k <= o.arity_cap && !failure; ++k) {
        const auto& comp = o.component(k);
        for (std::size_t op = 0; op < comp.rank() && !failure; ++op) {
            Vector pi = unit_vector(comp.rank(), op);
            for (int t = 1; t < k && !failure; ++t) {
                Vector tpi = o.act_transposition(k, t, pi);
                for_each_basis_tuple(
                    a, k, [&](const std::vector<Bidegree>& bs) { return in_support(a.output_bidegree(comp.degrees[op], bs)); },
                    [&](const std::vector<Generator>& gs) {
                        std::vector<Element> xs;
                        for (const auto& g : gs)
                            xs.push_back(basis_element(mod, g));
                        Element lhs = act(a, k, tpi, xs);
                        auto ys = xs;
                        std::swap(ys[std::size_t(t - 1)], ys[std::size_t(t)]);
                        Element rhs = act(a, k, pi, ys);
                        Scalar sign = sign_of(xs[std::size_t(t - 1)].b.q * xs[std::size_t(t)].b.q);
                        if (!equal_mod(mod, lhs.b, lhs.v, scale(ring, sign, rhs.v)))
                            return fail("equivariance", fmt::format("T{} on {}", t, describe(a, k, op, gs)));
                        return true;
                    });
            }
        }
    }
    if (failure)
        return *failure;

    // associativity with partial compositions
    for (int m = 1; m <= o.arity_cap && !failure; ++m)
        for (int n = 1; m + n - 1 <= o.arity_cap && !failure; ++n) {
            int k = m + n - 1;
            for (std::size_t p = 0; p < o.rank(m) && !failure; ++p)
                for (std::size_t q = 0; q < o.rank(n) && !failure; ++q) {
                    long dp = o.component(m).degrees[p], dq = o.component(n).degrees[q];
                    Vector pv = unit_vector(o.rank(m), p), qv = unit_vector(o.rank(n), q);
                    for (int i = 1; i <= m && !failure; ++i) {
                        Vector comp = o.compose(m, n, i, pv, qv);
                        for_each_basis_tuple(
                            a, k, [&](const std::vector<Bidegree>& bs) { return in_support(a.output_bidegree(dp + dq, bs)); },
                            [&](const std::vector<Generator>& gs) {
                                std::vector<Element> xs;
                                for (const auto& g : gs)
                                    xs.push_back(basis_element(mod, g));
                                Element lhs = act(a, k, comp, xs);
                                std::vector<Element> inner_in(xs.begin() + (i - 1), xs.begin() + (i - 1 + n));
                                Element inner = act(a, n, qv, inner_in);
                                long prefix = 0;
                                std::vector<Element> outer;
                                for (int s = 0; s < i - 1; ++s) {
                                    outer.push_back(xs[std::size_t(s)]);
                                    prefix += xs[std::size_t(s)].b.q;
                                }
                                outer.push_back(inner);
                                for (int s = i - 1 + n; s < k; ++s)
                                    outer.push_back(xs[std::size_t(s)]);
                                Vector rhs;
                                if (mod.rank(inner.b) == 0)
                                    rhs = Vector(mod.rank(lhs.b));
                                else
                                    rhs = scale(ring, sign_of(dq * prefix), act(a, m, pv, outer).v);
                                if (!equal_mod(mod, lhs.b, lhs.v, rhs))
                                    return fail("associativity",
                                                fmt::format("{} o_{} {} on ({})", o.component(m).labels[p], i, o.component(n).labels[q],
                                                            describe_inputs(a, gs)));
                                return true;
                            });
                    }
                }
        }
    if (failure)
        return *failure;
    return CheckReport::pass();
}

OperadAlgebra homology_action(const OperadAlgebra& a)
{
    OperadHomology oh = homology_operad_data(a.operad);
    HomologyData h = homology(a.carrier);
    OperadAlgebra out;
    out.operad = oh.operad;
    out.clamp_p = a.clamp_p;
    out.carrier = DGBigradedModule{h.as_module(), GradedMap{{0, -1}, {}}};
    const BigradedModule& hm = out.carrier.module;
    for (int k = 1; k <= out.operad.arity_cap; ++k) {
        for (std::size_t op = 0; op < out.operad.rank(k); ++op) {
            Vector lifted = oh.lifts[std::size_t(k)].column(op);
            long s = out.operad.component(k).degrees[op];
            for_each_basis_tuple(
                out, k, [&](const std::vector<Bidegree>& bs) { return hm.rank(out.output_bidegree(s, bs)) > 0; },
                [&](const std::vector<Generator>& gs) {
                    std::vector<Element> xs;
                    for (const auto& g : gs)
                        xs.push_back({g.b, h.groups.at(g.b).lift().column(g.index)});
                    Element y = act(a, k, lifted, xs);
                    const Subquotient& target = h.groups.at(y.b);
                    auto coords = target.project(y.v);
                    if (!coords)
                        throw Error(Errc::project_undefined, "product of cycles is not a cycle at " + y.b.str());
                    out.set(k, op, gs, *coords);
                    return true;
                });
        }
    }
    return out;
}

Element multiply(const OperadAlgebra& a, const BasisProduct& mult, const Element& x, const Element& y)
{
    const Ring& ring = a.ring();
    Element out{a.output_bidegree(0, {x.b, y.b}), {}};
    out.v = Vector(a.carrier.module.rank(out.b));
    if (out.v.empty())
        return out;
    for (std::size_t i = 0; i < x.v.size(); ++i) {
        if (x.v[i] == 0)
            continue;
        for (std::size_t j = 0; j < y.v.size(); ++j) {
            if (y.v[j] == 0)
                continue;
            Vector p = mult({x.b, i}, {y.b, j});
            if (p.empty())
                continue;
            if (p.size() != out.v.size())
                throw Error(Errc::invalid_argument, "product lands in a component of the wrong size at " + out.b.str());
            axpy(ring, out.v, x.v[i] * y.v[j], p);
        }
    }
    return out;
}

namespace {

OperadAlgebra start(const Operad& o, const DGBigradedModule& carrier, std::optional<long> clamp_p)
{
    OperadAlgebra a;
    a.operad = o;
    a.carrier = carrier;
    a.clamp_p = clamp_p;
    a.fill_unit_action();
    return a;
}

Element left_normed(const OperadAlgebra& a, const BasisProduct& mult, const std::vector<Element>& xs)
{
    Element acc = xs[0];
    for (std::size_t t = 1; t < xs.size(); ++t) {
        acc = multiply(a, mult, acc, xs[t]);
        if (acc.v.empty())
            break;
    }
    return acc;
}

} // namespace

OperadAlgebra comm_algebra(const DGBigradedModule& carrier, const BasisProduct& mult, int arity_cap, std::optional<long> clamp_p)
{
    OperadAlgebra a = start(builtin_comm(carrier.ring(), arity_cap), carrier, clamp_p);
    for (int k = 2; k <= arity_cap; ++k)
        for_each_basis_tuple(
            a, k, [&](const std::vector<Bidegree>& bs) { return a.carrier.module.rank(a.output_bidegree(0, bs)) > 0; },
            [&](const std::vector<Generator>& gs) {
                std::vector<Element> xs;
                for (const auto& g : gs)
                    xs.push_back(basis_element(a.carrier.module, g));
                Element y = left_normed(a, mult, xs);
                if (!y.v.empty())
                    a.set(k, 0, gs, y.v);
                return true;
            });
    return a;
}

OperadAlgebra assoc_algebra(const DGBigradedModule& carrier, const BasisProduct& mult, int arity_cap, std::optional<long> clamp_p)
{
    OperadAlgebra a = start(builtin_assoc(carrier.ring(), arity_cap), carrier, clamp_p);
    for (int k = 2; k <= arity_cap; ++k)
        for (std::size_t op = 0; op < a.operad.rank(k); ++op) {
            std::vector<int> w = assoc_word(k, op);
            for_each_basis_tuple(
                a, k, [&](const std::vector<Bidegree>& bs) { return a.carrier.module.rank(a.output_bidegree(0, bs)) > 0; },
                [&](const std::vector<Generator>& gs) {
                    std::vector<Element> xs;
                    long sign = 0;
                    for (int s = 0; s < k; ++s) {
                        xs.push_back(basis_element(a.carrier.module, gs[std::size_t(w[std::size_t(s)])]));
                        for (int t = s + 1; t < k; ++t)
                            if (w[std::size_t(s)] > w[std::size_t(t)])
                                sign += gs[std::size_t(w[std::size_t(s)])].b.q * gs[std::size_t(w[std::size_t(t)])].b.q;
                    }
                    Element y = left_normed(a, mult, xs);
                    if (!y.v.empty())
                        a.set(k, op, gs, scale(a.ring(), sign_of(sign), y.v));
                    return true;
                });
        }
    return a;
}

OperadAlgebra lie_algebra(const DGBigradedModule& carrier, const BasisProduct& bracket, std::optional<long> clamp_p)
{
    OperadAlgebra a = start(builtin_lie(carrier.ring(), 3), carrier, clamp_p);
    auto admit = [&](const std::vector<Bidegree>& bs) { return a.carrier.module.rank(a.output_bidegree(0, bs)) > 0; };
    for_each_basis_tuple(a, 2, admit, [&](const std::vector<Generator>& gs) {
        Element y = multiply(a, bracket, basis_element(a.carrier.module, gs[0]), basis_element(a.carrier.module, gs[1]));
        if (!y.v.empty())
            a.set(2, 0, gs, y.v);
        return true;
    });
    for_each_basis_tuple(a, 3, admit, [&](const std::vector<Generator>& gs) {
        Element x = basis_element(a.carrier.module, gs[0]), y = basis_element(a.carrier.module, gs[1]),
                z = basis_element(a.carrier.module, gs[2]);
        Element xy = multiply(a, bracket, x, y);
        Element e1 = xy.v.empty() ? Element{} : multiply(a, bracket, xy, z);
        Element yz = multiply(a, bracket, y, z);
        Element e2 = yz.v.empty() ? Element{} : multiply(a, bracket, x, yz);
        if (!e1.v.empty())
            a.set(3, 0, gs, e1.v);
        if (!e2.v.empty())
            a.set(3, 1, gs, e2.v);
        return true;
    });
    return a;
}

} // namespace opseq
