#include "opseq/prop.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "opseq/error.hpp"

namespace opseq {

namespace {

Vector bilinear(const Ring& ring, const Matrix& table, std::size_t nb, const Vector& a, const Vector& b)
{
    Vector r(table.rows());
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (a[x] == 0)
            continue;
        for (std::size_t y = 0; y < b.size(); ++y) {
            if (b[y] == 0)
                continue;
            Scalar c = a[x] * b[y];
            std::size_t col = x * nb + y;
            for (std::size_t k = 0; k < r.size(); ++k)
                if (table(k, col) != 0)
                    r[k] += c * table(k, col);
        }
    }
    for (auto& v : r)
        v = ring.reduce(v);
    return r;
}

} // namespace

Prop::Prop(Ring ring_, int cap_, std::string name_) : ring(ring_), cap(cap_), name(std::move(name_))
{
    if (cap_ < 2)
        throw Error(Errc::invalid_argument, "PROP cap must be at least 2");
    for (int m = 0; m <= cap_; ++m)
        for (int n = 0; m + n <= cap_; ++n)
            set_component(m, n, {}, {});
}

const PropComponent& Prop::component(int m, int n) const
{
    auto it = components.find({m, n});
    if (it == components.end())
        throw Error(Errc::arity_out_of_range, fmt::format("biarity ({},{}) outside the cap {}", m, n, cap));
    return it->second;
}

PropComponent& Prop::component(int m, int n)
{
    auto it = components.find({m, n});
    if (it == components.end())
        throw Error(Errc::arity_out_of_range, fmt::format("biarity ({},{}) outside the cap {}", m, n, cap));
    return it->second;
}

void Prop::set_component(int m, int n, std::vector<std::string> labels, std::vector<long> degrees)
{
    if (!has(m, n))
        throw Error(Errc::arity_out_of_range, fmt::format("biarity ({},{}) outside the cap {}", m, n, cap));
    PropComponent c;
    std::size_t r = labels.size();
    c.labels = std::move(labels);
    c.degrees = std::move(degrees);
    c.delta = Matrix(r, r);
    c.in_transpositions.assign(std::size_t(std::max(m - 1, 0)), Matrix::identity(r));
    c.out_transpositions.assign(std::size_t(std::max(n - 1, 0)), Matrix::identity(r));
    components[{m, n}] = std::move(c);
}

Vector Prop::vertical(int m, int n, int l, const Vector& f, const Vector& g) const
{
    auto it = vertical_table.find({m, n, l});
    if (it == vertical_table.end())
        return Vector(rank(m, l));
    return bilinear(ring, it->second, rank(n, l), f, g);
}

Vector Prop::horizontal(int m1, int n1, int m2, int n2, const Vector& f, const Vector& g) const
{
    auto it = horizontal_table.find({m1, n1, m2, n2});
    if (it == horizontal_table.end())
        return Vector(rank(m1 + m2, n1 + n2));
    return bilinear(ring, it->second, rank(m2, n2), f, g);
}

Vector Prop::act_in(int m, int n, int a, const Vector& f) const
{
    return apply(ring, component(m, n).in_transpositions.at(std::size_t(a - 1)), f);
}

Vector Prop::act_out(int m, int n, int a, const Vector& f) const
{
    return apply(ring, component(m, n).out_transpositions.at(std::size_t(a - 1)), f);
}

Vector Prop::permute_inputs(int m, int n, const Permutation& pi, const Vector& f) const
{
    Vector out = f;
    for (int a : transposition_word(pi))
        out = act_in(m, n, a, out);
    return out;
}

Vector Prop::permute_outputs(int m, int n, const Permutation& tau, const Vector& f) const
{
    // L_{πρ} = L_ρ L_π, so the word is applied from its last letter.
    auto word = transposition_word(tau);
    Vector out = f;
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        out = act_out(m, n, *it, out);
    return out;
}

std::optional<long> Prop::degree(int m, int n, const Vector& f) const
{
    const auto& c = component(m, n);
    std::optional<long> deg;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[k] == 0)
            continue;
        if (deg && *deg != c.degrees[k])
            return std::nullopt;
        deg = c.degrees[k];
    }
    return deg;
}

Vector Prop::identity(int n) const
{
    if (n == 0)
        return empty;
    Vector id = unit;
    for (int k = 2; k <= n; ++k)
        id = horizontal(k - 1, k - 1, 1, 1, id, unit);
    return id;
}

namespace {

struct Bi {
    int m, n;
};

std::vector<Bi> biarities(const Prop& p)
{
    std::vector<Bi> out;
    for (const auto& [key, c] : p.components)
        out.push_back({key.first, key.second});
    return out;
}

long deg_of(const Prop& p, int m, int n, std::size_t k) { return p.component(m, n).degrees[k]; }

} // namespace

CheckReport check_prop(const Prop& p)
{
    const Ring& ring = p.ring;
    for (int m = 0; m <= p.cap; ++m)
        for (int n = 0; m + n <= p.cap; ++n) {
            if (!p.components.count({m, n}))
                return CheckReport::fail("shape", fmt::format("missing component P({},{})", m, n));
            const auto& c = p.component(m, n);
            std::size_t r = c.rank();
            if (c.degrees.size() != r || c.delta.rows() != r || c.delta.cols() != r ||
                c.in_transpositions.size() != std::size_t(std::max(m - 1, 0)) || c.out_transpositions.size() != std::size_t(std::max(n - 1, 0)))
                return CheckReport::fail("shape", fmt::format("component P({},{}) is malformed", m, n));
        }
    if (p.unit.size() != p.rank(1, 1) || p.empty.size() != p.rank(0, 0) || is_zero(p.unit) || is_zero(p.empty))
        return CheckReport::fail("unit", "units must be nonzero elements of P(1,1) and P(0,0)");
    for (const auto& [key, t] : p.vertical_table) {
        auto [m, n, l] = key;
        if (!p.has(m, n) || !p.has(n, l) || !p.has(m, l) || t.rows() != p.rank(m, l) || t.cols() != p.rank(m, n) * p.rank(n, l))
            return CheckReport::fail("shape", fmt::format("vertical table ({},{},{}) is malformed", m, n, l));
    }
    for (const auto& [key, t] : p.horizontal_table) {
        auto [m1, n1, m2, n2] = key;
        if (!p.has(m1, n1) || !p.has(m2, n2) || !p.has(m1 + m2, n1 + n2) || t.rows() != p.rank(m1 + m2, n1 + n2) ||
            t.cols() != p.rank(m1, n1) * p.rank(m2, n2))
            return CheckReport::fail("shape", fmt::format("horizontal table ({},{},{},{}) is malformed", m1, n1, m2, n2));
    }

    auto bis = biarities(p);
    // differential and symmetric group actions
    for (auto [m, n] : bis) {
        const auto& c = p.component(m, n);
        Matrix id = Matrix::identity(c.rank());
        if (!mul(ring, c.delta, c.delta).is_zero())
            return CheckReport::fail("delta^2 = 0", fmt::format("in P({},{})", m, n));
        for (int side = 0; side < 2; ++side) {
            const auto& ts = side == 0 ? c.in_transpositions : c.out_transpositions;
            const char* which = side == 0 ? "input" : "output";
            for (std::size_t a = 0; a < ts.size(); ++a) {
                if (mul(ring, ts[a], ts[a]) != id)
                    return CheckReport::fail("involution", fmt::format("{} T{}^2 != id in P({},{})", which, a + 1, m, n));
                if (mul(ring, c.delta, ts[a]) != mul(ring, ts[a], c.delta))
                    return CheckReport::fail("delta equivariance", fmt::format("{} T{} in P({},{})", which, a + 1, m, n));
                for (std::size_t b = a + 1; b < ts.size(); ++b) {
                    bool ok = b == a + 1 ? mul(ring, mul(ring, ts[a], ts[b]), ts[a]) == mul(ring, mul(ring, ts[b], ts[a]), ts[b])
                                         : mul(ring, ts[a], ts[b]) == mul(ring, ts[b], ts[a]);
                    if (!ok)
                        return CheckReport::fail("braid relation", fmt::format("{} T{}, T{} in P({},{})", which, a + 1, b + 1, m, n));
                }
            }
            for (const auto& tin : c.in_transpositions)
                for (const auto& tout : c.out_transpositions)
                    if (mul(ring, tin, tout) != mul(ring, tout, tin))
                        return CheckReport::fail("bimodule", fmt::format("input and output actions do not commute in P({},{})", m, n));
        }
    }

    // units
    for (auto [m, n] : bis)
        for (std::size_t k = 0; k < p.rank(m, n); ++k) {
            Vector f = unit_vector(p.rank(m, n), k);
            std::string lab = p.component(m, n).labels[k];
            if ((p.has(m, m) && p.vertical(m, m, n, p.identity(m), f) != f) || (p.has(n, n) && p.vertical(m, n, n, f, p.identity(n)) != f))
                return CheckReport::fail("unit law", "vertical identity on " + lab);
            if (p.horizontal(0, 0, m, n, p.empty, f) != f || p.horizontal(m, n, 0, 0, f, p.empty) != f)
                return CheckReport::fail("unit law", "horizontal unit on " + lab);
        }

    // interchange
    for (auto [m1, n1] : bis)
        for (auto [m2, n2] : bis) {
            if (!p.has(m1 + m2, n1 + n2))
                continue;
            for (int l1 = 0; p.has(n1, l1); ++l1)
                for (int l2 = 0; p.has(n2, l2); ++l2) {
                    if (!p.has(n1 + n2, l1 + l2) || !p.has(m1 + m2, l1 + l2) || !p.has(m1, l1) || !p.has(m2, l2))
                        continue;
                    for (std::size_t a1 = 0; a1 < p.rank(m1, n1); ++a1)
                        for (std::size_t b1 = 0; b1 < p.rank(n1, l1); ++b1)
                            for (std::size_t a2 = 0; a2 < p.rank(m2, n2); ++a2)
                                for (std::size_t b2 = 0; b2 < p.rank(n2, l2); ++b2) {
                                    Vector f1 = unit_vector(p.rank(m1, n1), a1), g1 = unit_vector(p.rank(n1, l1), b1);
                                    Vector f2 = unit_vector(p.rank(m2, n2), a2), g2 = unit_vector(p.rank(n2, l2), b2);
                                    Vector lhs = p.vertical(m1 + m2, n1 + n2, l1 + l2, p.horizontal(m1, n1, m2, n2, f1, f2),
                                                            p.horizontal(n1, l1, n2, l2, g1, g2));
                                    Vector rhs = p.horizontal(m1, l1, m2, l2, p.vertical(m1, n1, l1, f1, g1), p.vertical(m2, n2, l2, f2, g2));
                                    rhs = scale(ring, sign_of(deg_of(p, m2, n2, a2) * deg_of(p, n1, l1, b1)), rhs);
                                    if (lhs != rhs)
                                        return CheckReport::fail(
                                            "interchange",
                                            fmt::format("f1={} g1={} f2={} g2={}", p.component(m1, n1).labels[a1], p.component(n1, l1).labels[b1],
                                                        p.component(m2, n2).labels[a2], p.component(n2, l2).labels[b2]));
                                }
                }
        }

    // vertical associativity
    for (auto [m, n] : bis)
        for (int l = 0; p.has(n, l); ++l)
            for (int k = 0; p.has(l, k); ++k) {
                if (!p.has(m, l) || !p.has(m, k) || !p.has(n, k))
                    continue;
                for (std::size_t a = 0; a < p.rank(m, n); ++a)
                    for (std::size_t b = 0; b < p.rank(n, l); ++b)
                        for (std::size_t c = 0; c < p.rank(l, k); ++c) {
                            Vector f = unit_vector(p.rank(m, n), a), g = unit_vector(p.rank(n, l), b), h = unit_vector(p.rank(l, k), c);
                            if (p.vertical(m, l, k, p.vertical(m, n, l, f, g), h) != p.vertical(m, n, k, f, p.vertical(n, l, k, g, h)))
                                return CheckReport::fail("vertical associativity", fmt::format("({},{},{})", p.component(m, n).labels[a],
                                                                                              p.component(n, l).labels[b], p.component(l, k).labels[c]));
                        }
            }

    // horizontal associativity
    for (auto [m1, n1] : bis)
        for (auto [m2, n2] : bis)
            for (auto [m3, n3] : bis) {
                if (!p.has(m1 + m2 + m3, n1 + n2 + n3))
                    continue;
                for (std::size_t a = 0; a < p.rank(m1, n1); ++a)
                    for (std::size_t b = 0; b < p.rank(m2, n2); ++b)
                        for (std::size_t c = 0; c < p.rank(m3, n3); ++c) {
                            Vector f = unit_vector(p.rank(m1, n1), a), g = unit_vector(p.rank(m2, n2), b), h = unit_vector(p.rank(m3, n3), c);
                            Vector lhs = p.horizontal(m1 + m2, n1 + n2, m3, n3, p.horizontal(m1, n1, m2, n2, f, g), h);
                            Vector rhs = p.horizontal(m1, n1, m2 + m3, n2 + n3, f, p.horizontal(m2, n2, m3, n3, g, h));
                            if (lhs != rhs)
                                return CheckReport::fail("horizontal associativity", fmt::format("({},{},{})", p.component(m1, n1).labels[a],
                                                                                                p.component(m2, n2).labels[b], p.component(m3, n3).labels[c]));
                        }
            }

    // equivariance of vertical composition
    for (auto [m, n] : bis)
        for (int l = 0; p.has(n, l); ++l) {
            if (!p.has(m, l))
                continue;
            for (std::size_t a = 0; a < p.rank(m, n); ++a)
                for (std::size_t b = 0; b < p.rank(n, l); ++b) {
                    Vector f = unit_vector(p.rank(m, n), a), g = unit_vector(p.rank(n, l), b);
                    Vector fg = p.vertical(m, n, l, f, g);
                    for (int t = 1; t < n; ++t)
                        if (p.vertical(m, n, l, p.act_out(m, n, t, f), g) != p.vertical(m, n, l, f, p.act_in(n, l, t, g)))
                            return CheckReport::fail("vertical equivariance", fmt::format("middle T{} on ({},{})", t, p.component(m, n).labels[a], p.component(n, l).labels[b]));
                    for (int t = 1; t < m; ++t)
                        if (p.act_in(m, l, t, fg) != p.vertical(m, n, l, p.act_in(m, n, t, f), g))
                            return CheckReport::fail("vertical equivariance", fmt::format("input T{} on ({},{})", t, p.component(m, n).labels[a], p.component(n, l).labels[b]));
                    for (int t = 1; t < l; ++t)
                        if (p.act_out(m, l, t, fg) != p.vertical(m, n, l, f, p.act_out(n, l, t, g)))
                            return CheckReport::fail("vertical equivariance", fmt::format("output T{} on ({},{})", t, p.component(m, n).labels[a], p.component(n, l).labels[b]));
                }
        }

    // equivariance of horizontal composition and the block swap
    for (auto [m1, n1] : bis)
        for (auto [m2, n2] : bis) {
            if (!p.has(m1 + m2, n1 + n2))
                continue;
            int m = m1 + m2, n = n1 + n2;
            Permutation in_swap, out_swap;
            for (int k = 0; k < m1; ++k)
                in_swap.push_back(m2 + k);
            for (int k = 0; k < m2; ++k)
                in_swap.push_back(k);
            for (int k = 0; k < n2; ++k)
                out_swap.push_back(n1 + k);
            for (int k = 0; k < n1; ++k)
                out_swap.push_back(k);
            for (std::size_t a = 0; a < p.rank(m1, n1); ++a)
                for (std::size_t b = 0; b < p.rank(m2, n2); ++b) {
                    Vector f = unit_vector(p.rank(m1, n1), a), g = unit_vector(p.rank(m2, n2), b);
                    Vector fg = p.horizontal(m1, n1, m2, n2, f, g);
                    std::string lab = fmt::format("({},{})", p.component(m1, n1).labels[a], p.component(m2, n2).labels[b]);
                    for (int t = 1; t < m; ++t) {
                        if (t == m1)
                            continue;
                        Vector rhs = t < m1 ? p.horizontal(m1, n1, m2, n2, p.act_in(m1, n1, t, f), g)
                                            : p.horizontal(m1, n1, m2, n2, f, p.act_in(m2, n2, t - m1, g));
                        if (p.act_in(m, n, t, fg) != rhs)
                            return CheckReport::fail("horizontal equivariance", fmt::format("input T{} on {}", t, lab));
                    }
                    for (int t = 1; t < n; ++t) {
                        if (t == n1)
                            continue;
                        Vector rhs = t < n1 ? p.horizontal(m1, n1, m2, n2, p.act_out(m1, n1, t, f), g)
                                            : p.horizontal(m1, n1, m2, n2, f, p.act_out(m2, n2, t - n1, g));
                        if (p.act_out(m, n, t, fg) != rhs)
                            return CheckReport::fail("horizontal equivariance", fmt::format("output T{} on {}", t, lab));
                    }
                    Vector swapped = p.permute_outputs(m, n, out_swap, p.permute_inputs(m, n, in_swap, fg));
                    swapped = scale(ring, sign_of(deg_of(p, m1, n1, a) * deg_of(p, m2, n2, b)), swapped);
                    if (p.horizontal(m2, n2, m1, n1, g, f) != swapped)
                        return CheckReport::fail("symmetry", "block swap on " + lab);
                }
        }

    // Leibniz for both compositions
    for (auto [m, n] : bis)
        for (std::size_t a = 0; a < p.rank(m, n); ++a) {
            Vector f = unit_vector(p.rank(m, n), a);
            Vector df = apply(ring, p.component(m, n).delta, f);
            long deg = deg_of(p, m, n, a);
            for (int l = 0; p.has(n, l); ++l) {
                if (!p.has(m, l))
                    continue;
                for (std::size_t b = 0; b < p.rank(n, l); ++b) {
                    Vector g = unit_vector(p.rank(n, l), b);
                    Vector dg = apply(ring, p.component(n, l).delta, g);
                    Vector lhs = apply(ring, p.component(m, l).delta, p.vertical(m, n, l, f, g));
                    Vector rhs = add(ring, p.vertical(m, n, l, f, dg), scale(ring, sign_of(deg_of(p, n, l, b)), p.vertical(m, n, l, df, g)));
                    if (lhs != rhs)
                        return CheckReport::fail("Leibniz", "vertical composition");
                }
            }
            for (auto [m2, n2] : bis) {
                if (!p.has(m + m2, n + n2))
                    continue;
                for (std::size_t b = 0; b < p.rank(m2, n2); ++b) {
                    Vector g = unit_vector(p.rank(m2, n2), b);
                    Vector dg = apply(ring, p.component(m2, n2).delta, g);
                    Vector lhs = apply(ring, p.component(m + m2, n + n2).delta, p.horizontal(m, n, m2, n2, f, g));
                    Vector rhs = add(ring, p.horizontal(m, n, m2, n2, df, g), scale(ring, sign_of(deg), p.horizontal(m, n, m2, n2, f, dg)));
                    if (lhs != rhs)
                        return CheckReport::fail("Leibniz", "horizontal composition");
                }
            }
        }
    return CheckReport::pass();
}

namespace {

std::size_t power(std::size_t r, int k)
{
    std::size_t out = 1;
    for (int i = 0; i < k; ++i)
        out *= r;
    return out;
}

std::vector<std::size_t> digits(std::size_t index, std::size_t r, int k)
{
    std::vector<std::size_t> out(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
        out[std::size_t(i)] = index % r;
        index /= r;
    }
    return out;
}

std::size_t from_digits(const std::vector<std::size_t>& ds, std::size_t r)
{
    std::size_t out = 0;
    for (auto d : ds)
        out = out * r + d;
    return out;
}

} // namespace

Prop endomorphism_prop(const Ring& ring, std::size_t rank, int cap)
{
    if (rank == 0 || rank > 3)
        throw Error(Errc::invalid_argument, "endomorphism PROP supports ranks 1..3");
    Prop p(ring, cap, fmt::format("endo({})", rank));
    const std::size_t r = rank;
    for (int m = 0; m <= cap; ++m)
        for (int n = 0; m + n <= cap; ++n) {
            std::size_t dm = power(r, m), dn = power(r, n);
            std::vector<std::string> labels;
            for (std::size_t j = 0; j < dn; ++j)
                for (std::size_t i = 0; i < dm; ++i) {
                    std::string s = "E";
                    for (auto d : digits(j, r, n))
                        s += std::to_string(d + 1);
                    s += "|";
                    for (auto d : digits(i, r, m))
                        s += std::to_string(d + 1);
                    labels.push_back(s);
                }
            p.set_component(m, n, labels, std::vector<long>(labels.size(), 0));
            auto& c = p.component(m, n);
            for (int a = 1; a < m; ++a) {
                Matrix t(dm * dn, dm * dn);
                for (std::size_t j = 0; j < dn; ++j)
                    for (std::size_t i = 0; i < dm; ++i) {
                        auto ds = digits(i, r, m);
                        std::swap(ds[std::size_t(a - 1)], ds[std::size_t(a)]);
                        t(j * dm + from_digits(ds, r), j * dm + i) = 1;
                    }
                c.in_transpositions[std::size_t(a - 1)] = t;
            }
            for (int a = 1; a < n; ++a) {
                Matrix t(dm * dn, dm * dn);
                for (std::size_t j = 0; j < dn; ++j)
                    for (std::size_t i = 0; i < dm; ++i) {
                        auto ds = digits(j, r, n);
                        std::swap(ds[std::size_t(a - 1)], ds[std::size_t(a)]);
                        t(from_digits(ds, r) * dm + i, j * dm + i) = 1;
                    }
                c.out_transpositions[std::size_t(a - 1)] = t;
            }
        }
    p.unit = Vector(r * r);
    for (std::size_t k = 0; k < r; ++k)
        p.unit[k * r + k] = 1;
    p.empty = Vector{Scalar(1)};
    for (int m = 0; m <= cap; ++m)
        for (int n = 0; m + n <= cap; ++n)
            for (int l = 0; n + l <= cap; ++l) {
                if (!p.has(m, l))
                    continue;
                std::size_t dm = power(r, m), dn = power(r, n), dl = power(r, l);
                Matrix t(dl * dm, dn * dm * dl * dn);
                for (std::size_t j = 0; j < dn; ++j)
                    for (std::size_t i = 0; i < dm; ++i)
                        for (std::size_t k = 0; k < dl; ++k) {
                            std::size_t a = j * dm + i, b = k * dn + j;
                            t(k * dm + i, a * (dl * dn) + b) = 1;
                        }
                p.vertical_table[{m, n, l}] = t;
            }
    for (int m1 = 0; m1 <= cap; ++m1)
        for (int n1 = 0; m1 + n1 <= cap; ++n1)
            for (int m2 = 0; m1 + n1 + m2 <= cap; ++m2)
                for (int n2 = 0; m1 + n1 + m2 + n2 <= cap; ++n2) {
                    std::size_t dm1 = power(r, m1), dn1 = power(r, n1), dm2 = power(r, m2), dn2 = power(r, n2);
                    Matrix t(dm1 * dn1 * dm2 * dn2, dm1 * dn1 * dm2 * dn2);
                    for (std::size_t j1 = 0; j1 < dn1; ++j1)
                        for (std::size_t i1 = 0; i1 < dm1; ++i1)
                            for (std::size_t j2 = 0; j2 < dn2; ++j2)
                                for (std::size_t i2 = 0; i2 < dm2; ++i2) {
                                    std::size_t a = j1 * dm1 + i1, b = j2 * dm2 + i2;
                                    std::size_t j = j1 * dn2 + j2, i = i1 * dm2 + i2;
                                    t(j * (dm1 * dm2) + i, a * (dm2 * dn2) + b) = 1;
                                }
                    p.horizontal_table[{m1, n1, m2, n2}] = t;
                }
    return p;
}

Prop trivial_prop(const Ring& ring, int cap)
{
    Prop p(ring, cap, "trivial");
    for (int n = 0; 2 * n <= cap; ++n)
        p.set_component(n, n, {fmt::format("1_{}", n)}, {0});
    p.unit = Vector{Scalar(1)};
    p.empty = Vector{Scalar(1)};
    for (int n = 0; 2 * n <= cap; ++n)
        p.vertical_table[{n, n, n}] = Matrix::identity(1);
    for (int a = 0; 2 * a <= cap; ++a)
        for (int b = 0; 2 * (a + b) <= cap; ++b)
            p.horizontal_table[{a, a, b, b}] = Matrix::identity(1);
    return p;
}

namespace {

void add_term(const Ring& ring, TensorElement& t, const std::vector<Generator>& w, const Scalar& c)
{
    Scalar& slot = t[w];
    slot = ring.add(slot, c);
    if (slot == 0)
        t.erase(w);
}

TensorElement scale_tensor(const Ring& ring, const Scalar& s, const TensorElement& t)
{
    TensorElement out;
    for (const auto& [w, c] : t)
        add_term(ring, out, w, s * c);
    return out;
}

TensorElement add_tensor(const Ring& ring, TensorElement a, const TensorElement& b)
{
    for (const auto& [w, c] : b)
        add_term(ring, a, w, c);
    return a;
}

long q_sum(const std::vector<Generator>& w, std::size_t from, std::size_t to)
{
    long s = 0;
    for (std::size_t k = from; k < to; ++k)
        s += w[k].b.q;
    return s;
}

/// d(y_1 ⊗ ... ⊗ y_n) with Koszul signs in the vertical degree.
TensorElement tensor_d(const PropAlgebra& a, const TensorElement& t)
{
    const Ring& ring = a.ring();
    TensorElement out;
    for (const auto& [w, c] : t)
        for (std::size_t i = 0; i < w.size(); ++i) {
            Vector dv = a.carrier.d_block(w[i].b).column(w[i].index);
            Scalar sign = sign_of(q_sum(w, 0, i));
            for (std::size_t k = 0; k < dv.size(); ++k) {
                if (dv[k] == 0)
                    continue;
                auto w2 = w;
                w2[i] = {{w[i].b.p, w[i].b.q - 1}, k};
                add_term(ring, out, w2, sign * c * dv[k]);
            }
        }
    return out;
}

std::vector<std::vector<Generator>> words(const PropAlgebra& a, int m)
{
    std::vector<Generator> gens;
    for (const auto& [b, c] : a.carrier.module.components())
        for (std::size_t k = 0; k < c.rank(); ++k)
            gens.push_back({b, k});
    std::vector<std::vector<Generator>> out{{}};
    for (int s = 0; s < m; ++s) {
        std::vector<std::vector<Generator>> next;
        for (const auto& w : out)
            for (const auto& g : gens) {
                auto w2 = w;
                w2.push_back(g);
                next.push_back(w2);
            }
        out = std::move(next);
    }
    return out;
}

TensorElement word_element(const std::vector<Generator>& w) { return TensorElement{{w, Scalar(1)}}; }

std::string word_label(const PropAlgebra& a, const std::vector<Generator>& w)
{
    std::string s;
    for (const auto& g : w) {
        if (!s.empty())
            s += "⊗";
        s += a.carrier.module.find(g.b)->labels[g.index];
    }
    return s.empty() ? "()" : s;
}

} // namespace

TensorElement PropAlgebra::act(int m, int n, const Vector& f, const TensorElement& x) const
{
    const Ring& ring = this->ring();
    TensorElement out;
    for (std::size_t op = 0; op < f.size(); ++op) {
        if (f[op] == 0)
            continue;
        for (const auto& [w, c] : x) {
            auto it = gamma.find(PropGammaKey{m, n, op, w});
            if (it == gamma.end())
                continue;
            for (const auto& [w2, c2] : it->second)
                add_term(ring, out, w2, f[op] * c * c2);
        }
    }
    return out;
}

CheckReport check_prop_algebra(const PropAlgebra& a)
{
    const Ring& ring = a.ring();
    const Prop& p = a.prop;
    if (auto r = check_prop(p); !r)
        return CheckReport::fail("prop " + r.law, r.detail);
    if (auto r = check_complex(a.carrier); !r)
        return CheckReport::fail("carrier " + r.law, r.detail);
    if (!a.carrier.module.is_free())
        return CheckReport::fail("carrier", "PROP algebra carriers must be free");

    auto bis = biarities(p);
    std::map<int, std::vector<std::vector<Generator>>> word_cache;
    auto all_words = [&](int m) -> const std::vector<std::vector<Generator>>& {
        auto it = word_cache.find(m);
        if (it == word_cache.end())
            it = word_cache.emplace(m, words(a, m)).first;
        return it->second;
    };

    // table shapes and bidegree law: output total q = op degree + input q
    for (const auto& [key, value] : a.gamma) {
        if (!p.has(key.m, key.n) || key.op >= p.rank(key.m, key.n) || key.inputs.size() != std::size_t(key.m))
            return CheckReport::fail("shape", "table entry with invalid biarity or operation");
        long q = p.component(key.m, key.n).degrees[key.op] + q_sum(key.inputs, 0, key.inputs.size());
        long ps = 0;
        for (const auto& g : key.inputs)
            ps += g.b.p;
        for (const auto& [w, c] : value) {
            long pw = 0;
            for (const auto& g : w)
                pw += g.b.p;
            if (w.size() != std::size_t(key.n) || q_sum(w, 0, w.size()) != q || pw != ps)
                return CheckReport::fail("bidegree law", "output word " + word_label(a, w) + " has the wrong shape or degree");
        }
    }

    // units
    for (const auto& w : all_words(1))
        if (a.act(1, 1, p.unit, word_element(w)) != word_element(w))
            return CheckReport::fail("unit", "Gamma(1; " + word_label(a, w) + ")");
    if (a.act(0, 0, p.empty, word_element({})) != word_element({}))
        return CheckReport::fail("unit", "Gamma(1_0; ()) is not the empty tensor");

    for (auto [m, n] : bis)
        for (std::size_t op = 0; op < p.rank(m, n); ++op) {
            Vector f = unit_vector(p.rank(m, n), op);
            long deg = p.component(m, n).degrees[op];
            const std::string& lab = p.component(m, n).labels[op];
            for (const auto& w : all_words(m)) {
                TensorElement x = word_element(w);
                TensorElement y = a.act(m, n, f, x);
                // input action
                for (int t = 1; t < m; ++t) {
                    auto w2 = w;
                    std::swap(w2[std::size_t(t - 1)], w2[std::size_t(t)]);
                    Scalar sign = sign_of(w[std::size_t(t - 1)].b.q * w[std::size_t(t)].b.q);
                    if (a.act(m, n, p.act_in(m, n, t, f), x) != scale_tensor(ring, sign, a.act(m, n, f, word_element(w2))))
                        return CheckReport::fail("input equivariance", fmt::format("T{} on ({}; {})", t, lab, word_label(a, w)));
                }
                // output action
                for (int t = 1; t < n; ++t) {
                    TensorElement swapped;
                    for (const auto& [yw, c] : y) {
                        auto w2 = yw;
                        std::swap(w2[std::size_t(t - 1)], w2[std::size_t(t)]);
                        add_term(ring, swapped, w2, sign_of(yw[std::size_t(t - 1)].b.q * yw[std::size_t(t)].b.q) * c);
                    }
                    if (a.act(m, n, p.act_out(m, n, t, f), x) != swapped)
                        return CheckReport::fail("output equivariance", fmt::format("T{} on ({}; {})", t, lab, word_label(a, w)));
                }
                // derivation relation
                TensorElement lhs = tensor_d(a, y);
                TensorElement rhs = a.act(m, n, apply(ring, p.component(m, n).delta, f), x);
                for (std::size_t i = 0; i < w.size(); ++i) {
                    Vector dv = a.carrier.d_block(w[i].b).column(w[i].index);
                    for (std::size_t k = 0; k < dv.size(); ++k) {
                        if (dv[k] == 0)
                            continue;
                        auto w2 = w;
                        w2[i] = {{w[i].b.p, w[i].b.q - 1}, k};
                        rhs = add_tensor(ring, rhs, scale_tensor(ring, sign_of(deg + q_sum(w, 0, i)) * dv[k], a.act(m, n, f, word_element(w2))));
                    }
                }
                if (lhs != rhs)
                    return CheckReport::fail("derivation", fmt::format("({}; {})", lab, word_label(a, w)));
                // vertical composition
                for (int l = 0; p.has(n, l); ++l) {
                    if (!p.has(m, l))
                        continue;
                    for (std::size_t gop = 0; gop < p.rank(n, l); ++gop) {
                        Vector g = unit_vector(p.rank(n, l), gop);
                        if (a.act(m, l, p.vertical(m, n, l, f, g), x) != a.act(n, l, g, y))
                            return CheckReport::fail("vertical composition",
                                                     fmt::format("{} after {} on {}", p.component(n, l).labels[gop], lab, word_label(a, w)));
                    }
                }
            }
            // horizontal composition
            for (auto [m2, n2] : bis) {
                if (!p.has(m + m2, n + n2))
                    continue;
                for (std::size_t gop = 0; gop < p.rank(m2, n2); ++gop) {
                    Vector g = unit_vector(p.rank(m2, n2), gop);
                    long gdeg = p.component(m2, n2).degrees[gop];
                    Vector fg = p.horizontal(m, n, m2, n2, f, g);
                    for (const auto& w : all_words(m + m2)) {
                        std::vector<Generator> w1(w.begin(), w.begin() + m), w2(w.begin() + m, w.end());
                        TensorElement left = a.act(m, n, f, word_element(w1)), right = a.act(m2, n2, g, word_element(w2));
                        TensorElement prod;
                        for (const auto& [u1, c1] : left)
                            for (const auto& [u2, c2] : right) {
                                auto u = u1;
                                u.insert(u.end(), u2.begin(), u2.end());
                                add_term(ring, prod, u, c1 * c2);
                            }
                        prod = scale_tensor(ring, sign_of(gdeg * q_sum(w1, 0, w1.size())), prod);
                        if (a.act(m + m2, n + n2, fg, word_element(w)) != prod)
                            return CheckReport::fail("horizontal composition",
                                                     fmt::format("{} ⊗ {} on {}", lab, p.component(m2, n2).labels[gop], word_label(a, w)));
                    }
                }
            }
        }
    return CheckReport::pass();
}

PropAlgebra evaluation_algebra(const Ring& ring, std::size_t rank, int cap)
{
    PropAlgebra a;
    a.prop = endomorphism_prop(ring, rank, cap);
    a.carrier = DGBigradedModule{BigradedModule(ring), GradedMap{{0, -1}, {}}};
    a.carrier.module.set_free({0, 0}, rank, "v");
    for (int m = 0; m <= cap; ++m)
        for (int n = 0; m + n <= cap; ++n) {
            std::size_t dm = power(rank, m), dn = power(rank, n);
            for (std::size_t j = 0; j < dn; ++j)
                for (std::size_t i = 0; i < dm; ++i) {
                    std::vector<Generator> in, out;
                    for (auto d : digits(i, rank, m))
                        in.push_back({{0, 0}, d});
                    for (auto d : digits(j, rank, n))
                        out.push_back({{0, 0}, d});
                    a.gamma[PropGammaKey{m, n, j * dm + i, in}] = TensorElement{{out, Scalar(1)}};
                }
        }
    return a;
}

} // namespace opseq
