#include "opseq/operad.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/core.h>

#include "opseq/error.hpp"

namespace opseq {

std::vector<int> transposition_word(const Permutation& perm)
{
    Permutation arr = perm;
    std::vector<int> word;
    bool swapped = true;
    while (swapped) {
        swapped = false;
        for (std::size_t k = 0; k + 1 < arr.size(); ++k)
            if (arr[k] > arr[k + 1]) {
                std::swap(arr[k], arr[k + 1]);
                word.push_back(int(k) + 1);
                swapped = true;
            }
    }
    return word;
}

Permutation compose_perm(const Permutation& rho, const Permutation& pi)
{
    Permutation out(pi.size());
    for (std::size_t k = 0; k < pi.size(); ++k)
        out[k] = rho[std::size_t(pi[k])];
    return out;
}

Permutation inverse_perm(const Permutation& pi)
{
    Permutation out(pi.size());
    for (std::size_t k = 0; k < pi.size(); ++k)
        out[std::size_t(pi[k])] = int(k);
    return out;
}

Permutation adjacent_transposition(int n, int a)
{
    Permutation p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[std::size_t(a - 1)], p[std::size_t(a)]);
    return p;
}

Operad::Operad(Ring ring_, int arity_cap_, std::string name_)
    : ring(ring_), arity_cap(arity_cap_), name(std::move(name_)), components(std::size_t(arity_cap_) + 1)
{
    if (arity_cap_ < 1)
        throw Error(Errc::invalid_argument, "arity cap must be at least 1");
}

const OperadComponent& Operad::component(int n) const
{
    if (n < 1 || n > arity_cap)
        throw Error(Errc::arity_out_of_range, fmt::format("arity {} outside 1..{}", n, arity_cap));
    return components[std::size_t(n)];
}

OperadComponent& Operad::component(int n)
{
    if (n < 1 || n > arity_cap)
        throw Error(Errc::arity_out_of_range, fmt::format("arity {} outside 1..{}", n, arity_cap));
    return components[std::size_t(n)];
}

void Operad::set_component(int n, std::vector<std::string> labels, std::vector<long> degrees)
{
    auto& c = component(n);
    std::size_t r = labels.size();
    c.labels = std::move(labels);
    c.degrees = std::move(degrees);
    c.delta = Matrix(r, r);
    c.transpositions.assign(std::size_t(n - 1), Matrix::identity(r));
}

void Operad::set_composition(int m, int n, int i, std::size_t a, std::size_t b, const Vector& value)
{
    auto key = std::make_tuple(m, n, i);
    auto it = compositions.find(key);
    if (it == compositions.end())
        it = compositions.emplace(key, Matrix(rank(m + n - 1), rank(m) * rank(n))).first;
    it->second.set_column(a * rank(n) + b, value);
}

Vector Operad::compose(int m, int n, int i, const Vector& a, const Vector& b) const
{
    std::size_t out = rank(m + n - 1);
    Vector r(out);
    auto it = compositions.find({m, n, i});
    if (it == compositions.end())
        return r;
    const Matrix& t = it->second;
    std::size_t nb = rank(n);
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (a[x] == 0)
            continue;
        for (std::size_t y = 0; y < b.size(); ++y) {
            if (b[y] == 0)
                continue;
            Scalar coeff = a[x] * b[y];
            std::size_t col = x * nb + y;
            for (std::size_t k = 0; k < out; ++k)
                if (t(k, col) != 0)
                    r[k] += coeff * t(k, col);
        }
    }
    for (auto& v : r)
        v = ring.reduce(v);
    return r;
}

Vector Operad::act_transposition(int n, int a, const Vector& v) const
{
    const auto& c = component(n);
    if (a < 1 || a >= n)
        throw Error(Errc::invalid_argument, fmt::format("transposition {} in arity {}", a, n));
    return apply(ring, c.transpositions[std::size_t(a - 1)], v);
}

Vector Operad::act(int n, const Permutation& perm, const Vector& v) const
{
    Vector out = v;
    for (int a : transposition_word(perm))
        out = act_transposition(n, a, out);
    return out;
}

Vector Operad::delta(int n, const Vector& v) const { return apply(ring, component(n).delta, v); }

std::optional<long> Operad::degree(int n, const Vector& v) const
{
    const auto& c = component(n);
    std::optional<long> deg;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] == 0)
            continue;
        if (deg && *deg != c.degrees[k])
            return std::nullopt;
        deg = c.degrees[k];
    }
    return deg;
}

std::size_t Operad::index_of(int n, const std::string& label) const
{
    const auto& c = component(n);
    auto it = std::find(c.labels.begin(), c.labels.end(), label);
    if (it == c.labels.end())
        throw Error(Errc::invalid_argument, fmt::format("no operation '{}' in arity {}", label, n));
    return std::size_t(it - c.labels.begin());
}

namespace {

void add_unit_compositions(Operad& o)
{
    for (int n = 1; n <= o.arity_cap; ++n)
        for (std::size_t b = 0; b < o.rank(n); ++b)
            o.set_composition(1, n, 1, 0, b, unit_vector(o.rank(n), b));
    for (int m = 2; m <= o.arity_cap; ++m)
        for (int i = 1; i <= m; ++i)
            for (std::size_t a = 0; a < o.rank(m); ++a)
                o.set_composition(m, 1, i, a, 0, unit_vector(o.rank(m), a));
}

std::vector<Permutation> all_permutations(int k)
{
    Permutation p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    std::vector<Permutation> out;
    do
        out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::string word_label(const std::vector<int>& w)
{
    std::string s = "w";
    for (int x : w)
        s += std::to_string(x + 1);
    return s;
}

} // namespace

std::vector<int> assoc_word(int k, std::size_t index) { return all_permutations(k).at(index); }

std::size_t assoc_index(const std::vector<int>& word)
{
    auto all = all_permutations(int(word.size()));
    return std::size_t(std::find(all.begin(), all.end(), word) - all.begin());
}

Operad builtin_comm(const Ring& ring, int arity_cap)
{
    Operad o(ring, arity_cap, "comm");
    for (int n = 1; n <= arity_cap; ++n)
        o.set_component(n, {n == 1 ? std::string("id") : fmt::format("mu{}", n)}, {0});
    o.unit = unit_vector(1, 0);
    add_unit_compositions(o);
    for (int m = 2; m <= arity_cap; ++m)
        for (int n = 2; m + n - 1 <= arity_cap; ++n)
            for (int i = 1; i <= m; ++i)
                o.set_composition(m, n, i, 0, 0, unit_vector(1, 0));
    return o;
}

Operad builtin_assoc(const Ring& ring, int arity_cap)
{
    Operad o(ring, arity_cap, "assoc");
    std::vector<std::vector<Permutation>> words(std::size_t(arity_cap) + 1);
    for (int k = 1; k <= arity_cap; ++k) {
        words[std::size_t(k)] = all_permutations(k);
        std::vector<std::string> labels;
        for (const auto& w : words[std::size_t(k)])
            labels.push_back(word_label(w));
        o.set_component(k, labels, std::vector<long>(labels.size(), 0));
        auto& c = o.component(k);
        for (int a = 1; a < k; ++a) {
            Matrix t(labels.size(), labels.size());
            for (std::size_t j = 0; j < labels.size(); ++j) {
                auto w = words[std::size_t(k)][j];
                for (auto& x : w)
                    if (x == a - 1)
                        x = a;
                    else if (x == a)
                        x = a - 1;
                t(assoc_index(w), j) = 1;
            }
            c.transpositions[std::size_t(a - 1)] = t;
        }
    }
    o.unit = unit_vector(1, 0);
    for (int m = 1; m <= arity_cap; ++m)
        for (int n = 1; m + n - 1 <= arity_cap; ++n)
            for (int i = 1; i <= m; ++i)
                for (std::size_t a = 0; a < o.rank(m); ++a)
                    for (std::size_t b = 0; b < o.rank(n); ++b) {
                        const auto& u = words[std::size_t(m)][a];
                        const auto& v = words[std::size_t(n)][b];
                        std::vector<int> w;
                        for (int t : u) {
                            if (t == i - 1)
                                for (int s : v)
                                    w.push_back(i - 1 + s);
                            else if (t < i - 1)
                                w.push_back(t);
                            else
                                w.push_back(t + n - 1);
                        }
                        o.set_composition(m, n, i, a, b, unit_vector(o.rank(m + n - 1), assoc_index(w)));
                    }
    return o;
}

Operad builtin_lie(const Ring& ring, int arity_cap)
{
    if (arity_cap > 3)
        throw Error(Errc::unsupported_arity, "the Lie operad is encoded up to arity 3");
    if (ring.kind() == RingKind::prime_field && ring.characteristic() == 2)
        throw Error(Errc::unsupported, "the Lie encoding needs characteristic different from 2");
    Operad o(ring, arity_cap, "lie");
    o.set_component(1, {"id"}, {0});
    o.unit = unit_vector(1, 0);
    if (arity_cap >= 2) {
        o.set_component(2, {"b"}, {0});
        o.component(2).transpositions[0] = reduce(ring, Matrix::diagonal({Scalar(-1)}));
    }
    if (arity_cap >= 3) {
        o.set_component(3, {"b1b", "b2b"}, {0, 0});
        Matrix t1(2, 2), t2(2, 2);
        // T1 e1 = -e1, T1 e2 = e2 - e1; T2 e1 = e1 - e2, T2 e2 = -e2 (Jacobi)
        t1(0, 0) = -1;
        t1(0, 1) = -1;
        t1(1, 1) = 1;
        t2(0, 0) = 1;
        t2(1, 0) = -1;
        t2(1, 1) = -1;
        o.component(3).transpositions = {reduce(ring, t1), reduce(ring, t2)};
    }
    add_unit_compositions(o);
    if (arity_cap >= 3) {
        o.set_composition(2, 2, 1, 0, 0, unit_vector(2, 0));
        o.set_composition(2, 2, 2, 0, 0, unit_vector(2, 1));
    }
    return o;
}

Operad builtin_operad(const std::string& name, const Ring& ring, int arity_cap)
{
    if (name == "comm")
        return builtin_comm(ring, arity_cap);
    if (name == "assoc")
        return builtin_assoc(ring, arity_cap);
    if (name == "lie")
        return builtin_lie(ring, arity_cap);
    throw Error(Errc::invalid_argument, "unknown operad '" + name + "'");
}

namespace {

std::string tuple_label(const Operad& o, std::initializer_list<std::pair<int, std::size_t>> xs)
{
    std::string s;
    for (auto [n, k] : xs) {
        if (!s.empty())
            s += ", ";
        s += o.component(n).labels[k];
    }
    return "(" + s + ")";
}

bool homogeneous_of(const Operad& o, int n, const Vector& v, long deg)
{
    auto d = o.degree(n, v);
    return is_zero(v) || (d && *d == deg);
}

} // namespace

CheckReport check_operad(const Operad& o)
{
    const Ring& ring = o.ring;
    const int N = o.arity_cap;
    if (int(o.components.size()) != N + 1)
        return CheckReport::fail("shape", "component count does not match the arity cap");
    for (int n = 1; n <= N; ++n) {
        const auto& c = o.component(n);
        std::size_t r = c.rank();
        if (c.degrees.size() != r || c.delta.rows() != r || c.delta.cols() != r || c.transpositions.size() != std::size_t(n - 1))
            return CheckReport::fail("shape", fmt::format("component P({}) is malformed", n));
        for (const auto& t : c.transpositions)
            if (t.rows() != r || t.cols() != r)
                return CheckReport::fail("shape", fmt::format("transposition matrix of P({}) is malformed", n));
    }
    if (o.unit.size() != o.rank(1) || is_zero(o.unit) || !homogeneous_of(o, 1, o.unit, 0))
        return CheckReport::fail("unit", "unit must be a nonzero degree-0 element of P(1)");

    // degree laws, δ² = 0, δ commutes with Σ
    for (int n = 1; n <= N; ++n) {
        const auto& c = o.component(n);
        for (std::size_t j = 0; j < c.rank(); ++j) {
            if (!homogeneous_of(o, n, c.delta.column(j), c.degrees[j] - 1))
                return CheckReport::fail("degree", fmt::format("delta of {} in P({}) is not of degree {}", c.labels[j], n, c.degrees[j] - 1));
            for (int a = 1; a < n; ++a)
                if (!homogeneous_of(o, n, c.transpositions[std::size_t(a - 1)].column(j), c.degrees[j]))
                    return CheckReport::fail("degree", fmt::format("T{} does not preserve the degree of {} in P({})", a, c.labels[j], n));
        }
        if (!mul(ring, c.delta, c.delta).is_zero())
            return CheckReport::fail("delta^2 = 0", fmt::format("in P({})", n));
        for (int a = 1; a < n; ++a) {
            const Matrix& t = c.transpositions[std::size_t(a - 1)];
            if (mul(ring, c.delta, t) != mul(ring, t, c.delta))
                return CheckReport::fail("delta equivariance", fmt::format("delta and T{} do not commute in P({})", a, n));
        }
    }
    for (const auto& [key, t] : o.compositions) {
        auto [m, n, i] = key;
        if (m < 1 || n < 1 || m + n - 1 > N || i < 1 || i > m)
            return CheckReport::fail("shape", fmt::format("composition ({},{},{}) out of range", m, n, i));
        if (t.rows() != o.rank(m + n - 1) || t.cols() != o.rank(m) * o.rank(n))
            return CheckReport::fail("shape", fmt::format("composition table ({},{},{}) is malformed", m, n, i));
        for (std::size_t a = 0; a < o.rank(m); ++a)
            for (std::size_t b = 0; b < o.rank(n); ++b) {
                long deg = o.component(m).degrees[a] + o.component(n).degrees[b];
                if (!homogeneous_of(o, m + n - 1, t.column(a * o.rank(n) + b), deg))
                    return CheckReport::fail("degree", fmt::format("composition {} in slot {} is not of degree {}", tuple_label(o, {{m, a}, {n, b}}), i, deg));
            }
    }

    // Σ_n: involutions, braid relations, far commutation
    for (int n = 2; n <= N; ++n) {
        const auto& c = o.component(n);
        Matrix id = Matrix::identity(c.rank());
        for (int a = 1; a < n; ++a) {
            const Matrix& ta = c.transpositions[std::size_t(a - 1)];
            if (mul(ring, ta, ta) != id)
                return CheckReport::fail("involution", fmt::format("T{}^2 != id in P({})", a, n));
            for (int b = a + 1; b < n; ++b) {
                const Matrix& tb = c.transpositions[std::size_t(b - 1)];
                if (b == a + 1) {
                    if (mul(ring, mul(ring, ta, tb), ta) != mul(ring, mul(ring, tb, ta), tb))
                        return CheckReport::fail("braid relation", fmt::format("T{} T{} T{} in P({})", a, b, a, n));
                } else if (mul(ring, ta, tb) != mul(ring, tb, ta)) {
                    return CheckReport::fail("braid relation", fmt::format("T{} and T{} do not commute in P({})", a, b, n));
                }
            }
        }
    }

    // unit laws
    for (int n = 1; n <= N; ++n)
        for (std::size_t a = 0; a < o.rank(n); ++a) {
            Vector p = unit_vector(o.rank(n), a);
            if (o.compose(1, n, 1, o.unit, p) != p)
                return CheckReport::fail("unit law", fmt::format("1 o_1 {} != {}", o.component(n).labels[a], o.component(n).labels[a]));
            for (int i = 1; i <= n; ++i)
                if (o.compose(n, 1, i, p, o.unit) != p)
                    return CheckReport::fail("unit law", fmt::format("{} o_{} 1 != {}", o.component(n).labels[a], i, o.component(n).labels[a]));
        }

    // equivariance of ∘_i
    for (int m = 1; m <= N; ++m)
        for (int n = 1; m + n - 1 <= N; ++n) {
            int total = m + n - 1;
            for (int i = 1; i <= m; ++i)
                for (std::size_t a = 0; a < o.rank(m); ++a)
                    for (std::size_t b = 0; b < o.rank(n); ++b) {
                        Vector p = unit_vector(o.rank(m), a), q = unit_vector(o.rank(n), b);
                        for (int s = 1; s < m; ++s) {
                            Permutation sigma = adjacent_transposition(m, s);
                            int k = sigma[std::size_t(i - 1)] + 1; // σ^{-1}(i) = σ(i)
                            Permutation big;
                            for (int t = 0; t < m; ++t) {
                                int v = sigma[std::size_t(t)] + 1;
                                if (v == i)
                                    for (int u = 0; u < n; ++u)
                                        big.push_back(i - 1 + u);
                                else if (v < i)
                                    big.push_back(v - 1);
                                else
                                    big.push_back(v + n - 2);
                            }
                            Vector lhs = o.compose(m, n, i, o.act_transposition(m, s, p), q);
                            Vector rhs = o.act(total, big, o.compose(m, n, k, p, q));
                            if (lhs != rhs)
                                return CheckReport::fail("equivariance",
                                                         fmt::format("(T{} p) o_{} q for {}", s, i, tuple_label(o, {{m, a}, {n, b}})));
                        }
                        for (int s = 1; s < n; ++s) {
                            Permutation big(static_cast<std::size_t>(total));
                            std::iota(big.begin(), big.end(), 0);
                            std::swap(big[std::size_t(i - 1 + s - 1)], big[std::size_t(i - 1 + s)]);
                            Vector lhs = o.compose(m, n, i, p, o.act_transposition(n, s, q));
                            Vector rhs = o.act(total, big, o.compose(m, n, i, p, q));
                            if (lhs != rhs)
                                return CheckReport::fail("equivariance",
                                                         fmt::format("p o_{} (T{} q) for {}", i, s, tuple_label(o, {{m, a}, {n, b}})));
                        }
                    }
        }

    // associativity
    for (int m = 1; m <= N; ++m)
        for (int n = 1; m + n - 1 <= N; ++n)
            for (int l = 1; m + n + l - 2 <= N; ++l)
                for (std::size_t a = 0; a < o.rank(m); ++a)
                    for (std::size_t b = 0; b < o.rank(n); ++b)
                        for (std::size_t c = 0; c < o.rank(l); ++c) {
                            Vector p = unit_vector(o.rank(m), a), q = unit_vector(o.rank(n), b), r = unit_vector(o.rank(l), c);
                            for (int i = 1; i <= m; ++i)
                                for (int j = 1; j <= n; ++j) {
                                    Vector lhs = o.compose(m + n - 1, l, i + j - 1, o.compose(m, n, i, p, q), r);
                                    Vector rhs = o.compose(m, n + l - 1, i, p, o.compose(n, l, j, q, r));
                                    if (lhs != rhs)
                                        return CheckReport::fail("associativity",
                                                                 fmt::format("sequential slots ({},{}) for {}", i, j, tuple_label(o, {{m, a}, {n, b}, {l, c}})));
                                }
                            Scalar sign = sign_of(o.component(n).degrees[b] * o.component(l).degrees[c]);
                            for (int i = 1; i <= m; ++i)
                                for (int j = i + 1; j <= m; ++j) {
                                    Vector lhs = o.compose(m + n - 1, l, j + n - 1, o.compose(m, n, i, p, q), r);
                                    Vector rhs = scale(ring, sign, o.compose(m + l - 1, n, i, o.compose(m, l, j, p, r), q));
                                    if (lhs != rhs)
                                        return CheckReport::fail("associativity",
                                                                 fmt::format("parallel slots ({},{}) for {}", i, j, tuple_label(o, {{m, a}, {n, b}, {l, c}})));
                                }
                        }

    // Leibniz rule for δ
    for (int m = 1; m <= N; ++m)
        for (int n = 1; m + n - 1 <= N; ++n)
            for (int i = 1; i <= m; ++i)
                for (std::size_t a = 0; a < o.rank(m); ++a)
                    for (std::size_t b = 0; b < o.rank(n); ++b) {
                        Vector p = unit_vector(o.rank(m), a), q = unit_vector(o.rank(n), b);
                        Vector lhs = o.delta(m + n - 1, o.compose(m, n, i, p, q));
                        Vector rhs = add(ring, o.compose(m, n, i, o.delta(m, p), q),
                                         scale(ring, sign_of(o.component(m).degrees[a]), o.compose(m, n, i, p, o.delta(n, q))));
                        if (lhs != rhs)
                            return CheckReport::fail("Leibniz", fmt::format("delta(p o_{} q) for {}", i, tuple_label(o, {{m, a}, {n, b}})));
                    }
    return CheckReport::pass();
}

namespace {

struct DegreePiece {
    long degree;
    std::vector<std::size_t> indices; // basis indices of this degree
    Subquotient group;
    std::size_t offset; // first H coordinate
};

struct ArityHomology {
    std::vector<DegreePiece> pieces;
    std::size_t size = 0;
    Matrix lift;
};

ArityHomology arity_homology(const Operad& o, int n)
{
    const Ring& ring = o.ring;
    const auto& c = o.component(n);
    std::vector<long> degs = c.degrees;
    std::sort(degs.begin(), degs.end());
    degs.erase(std::unique(degs.begin(), degs.end()), degs.end());
    auto indices_of = [&](long s) {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < c.rank(); ++k)
            if (c.degrees[k] == s)
                out.push_back(k);
        return out;
    };
    auto sub_block = [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
        Matrix m(rows.size(), cols.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t k = 0; k < cols.size(); ++k)
                m(r, k) = c.delta(rows[r], cols[k]);
        return m;
    };
    ArityHomology h;
    std::vector<Vector> lift_cols;
    for (long s : degs) {
        auto here = indices_of(s), below = indices_of(s - 1), above = indices_of(s + 1);
        Matrix z = below.empty() ? Matrix::identity(here.size()) : kernel(sub_block(below, here), ring);
        Matrix b = above.empty() ? Matrix(here.size(), 0) : sub_block(here, above);
        Subquotient g = subquotient(here.size(), z, b, ring);
        if (!g.invariant_factors().empty())
            throw Error(Errc::unsupported, fmt::format("operad homology of P({}) has torsion", n));
        for (std::size_t k = 0; k < g.size(); ++k) {
            Vector v(c.rank());
            Vector local = g.lift().column(k);
            for (std::size_t t = 0; t < here.size(); ++t)
                v[here[t]] = local[t];
            lift_cols.push_back(v);
        }
        h.pieces.push_back({s, here, g, h.size});
        h.size += g.size();
    }
    h.lift = Matrix::from_columns(c.rank(), lift_cols);
    return h;
}

Vector project_homology(const ArityHomology& h, int n, const Vector& v)
{
    Vector out(h.size);
    std::size_t covered = 0;
    for (const auto& piece : h.pieces) {
        Vector local(piece.indices.size());
        for (std::size_t t = 0; t < piece.indices.size(); ++t)
            local[t] = v[piece.indices[t]];
        covered += piece.indices.size();
        auto coords = piece.group.project(local);
        if (!coords)
            throw Error(Errc::project_undefined, fmt::format("element of P({}) is not a cycle", n));
        for (std::size_t k = 0; k < coords->size(); ++k)
            out[piece.offset + k] = (*coords)[k];
    }
    if (covered != v.size())
        throw Error(Errc::invalid_argument, fmt::format("element of P({}) has the wrong size", n));
    return out;
}

} // namespace

OperadHomology homology_operad_data(const Operad& o)
{
    OperadHomology result;
    Operad& h = result.operad;
    h = Operad(o.ring, o.arity_cap, o.name.empty() ? "H" : "H(" + o.name + ")");
    std::vector<ArityHomology> data(std::size_t(o.arity_cap) + 1);
    result.lifts.resize(std::size_t(o.arity_cap) + 1);
    for (int n = 1; n <= o.arity_cap; ++n) {
        data[std::size_t(n)] = arity_homology(o, n);
        const auto& ah = data[std::size_t(n)];
        std::vector<std::string> labels;
        std::vector<long> degrees;
        for (const auto& piece : ah.pieces)
            for (std::size_t k = 0; k < piece.group.size(); ++k) {
                Vector col = ah.lift.column(piece.offset + k);
                std::size_t nonzero = 0, last = 0;
                for (std::size_t t = 0; t < col.size(); ++t)
                    if (col[t] != 0) {
                        ++nonzero;
                        last = t;
                    }
                labels.push_back(nonzero == 1 && col[last] == 1 ? "[" + o.component(n).labels[last] + "]"
                                                                : fmt::format("h{}_{}", n, piece.offset + k));
                degrees.push_back(piece.degree);
            }
        h.set_component(n, labels, degrees);
        auto& hc = h.component(n);
        for (int a = 1; a < n; ++a) {
            Matrix t(ah.size, ah.size);
            for (std::size_t k = 0; k < ah.size; ++k)
                t.set_column(k, project_homology(ah, n, o.act_transposition(n, a, ah.lift.column(k))));
            hc.transpositions[std::size_t(a - 1)] = t;
        }
        result.lifts[std::size_t(n)] = ah.lift;
    }
    h.unit = project_homology(data[1], 1, o.unit);
    for (int m = 1; m <= o.arity_cap; ++m)
        for (int n = 1; m + n - 1 <= o.arity_cap; ++n)
            for (int i = 1; i <= m; ++i)
                for (std::size_t a = 0; a < h.rank(m); ++a)
                    for (std::size_t b = 0; b < h.rank(n); ++b) {
                        Vector v = o.compose(m, n, i, data[std::size_t(m)].lift.column(a), data[std::size_t(n)].lift.column(b));
                        h.set_composition(m, n, i, a, b, project_homology(data[std::size_t(m + n - 1)], m + n - 1, v));
                    }
    return result;
}

Operad homology_operad(const Operad& o) { return homology_operad_data(o).operad; }

} // namespace opseq
