#include "opseq/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

#include <fmt/core.h>

#include "opseq/error.hpp"

namespace opseq {

namespace {

// Row reduction over 𝔽_p on machine words.
struct FpOps {
    std::uint64_t p;
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const
    {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    std::uint64_t inv(std::uint64_t a) const
    {
        std::uint64_t result = 1, base = a, e = p - 2;
        while (e) {
            if (e & 1)
                result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }
};

template <typename T, typename Ops>
void rref_in_place(std::vector<std::vector<T>>& a, std::vector<std::vector<T>>& e, std::size_t cols,
                   std::vector<std::size_t>& pivots, const Ops& ops)
{
    std::size_t rows = a.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t found = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                found = i;
                break;
            }
        if (found == rows)
            continue;
        std::swap(a[found], a[r]);
        std::swap(e[found], e[r]);
        T inv = ops.inv(a[r][c]);
        for (auto& x : a[r])
            x = ops.mul(x, inv);
        for (auto& x : e[r])
            x = ops.mul(x, inv);
        for (std::size_t k = 0; k < rows; ++k) {
            if (k == r || a[k][c] == 0)
                continue;
            T f = a[k][c];
            for (std::size_t j = 0; j < cols; ++j)
                if (a[r][j] != 0)
                    a[k][j] = ops.sub(a[k][j], ops.mul(f, a[r][j]));
            for (std::size_t j = 0; j < e[r].size(); ++j)
                if (e[r][j] != 0)
                    e[k][j] = ops.sub(e[k][j], ops.mul(f, e[r][j]));
        }
        pivots.push_back(c);
        ++r;
    }
}

struct QOps {
    Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
    Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
    Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
    Scalar inv(const Scalar& a) const { return Scalar(1) / a; }
};

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

using IntRows = std::vector<std::vector<Integer>>;

IntRows to_int_rows(const Matrix& m)
{
    IntRows rows(m.rows(), std::vector<Integer>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (m(r, c).get_den() != 1)
                throw Error(Errc::invalid_argument, "non-integral matrix entry over Z");
            rows[r][c] = m(r, c).get_num();
        }
    return rows;
}

Matrix from_int_rows(const IntRows& rows, std::size_t cols)
{
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = Scalar(rows[r][c]);
    return m;
}

IntRows int_identity(std::size_t n)
{
    IntRows e(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
        e[i][i] = 1;
    return e;
}

void row_axpy(std::vector<Integer>& target, const Integer& f, const std::vector<Integer>& src)
{
    if (f == 0)
        return;
    for (std::size_t j = 0; j < target.size(); ++j)
        if (src[j] != 0)
            target[j] += f * src[j];
}

// Hermite normal form by rows: U * m = H, U unimodular.
struct Hermite {
    IntRows U;
    IntRows H;
    std::size_t rank = 0;
};

Hermite hermite_rows(const Matrix& m)
{
    Hermite h;
    h.H = to_int_rows(m);
    h.U = int_identity(m.rows());
    std::size_t rows = m.rows(), cols = m.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        while (true) {
            std::size_t best = rows;
            for (std::size_t i = r; i < rows; ++i)
                if (h.H[i][c] != 0 && (best == rows || abs(h.H[i][c]) < abs(h.H[best][c])))
                    best = i;
            if (best == rows)
                break;
            std::swap(h.H[best], h.H[r]);
            std::swap(h.U[best], h.U[r]);
            bool clean = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (h.H[i][c] == 0)
                    continue;
                Integer q = floor_div(h.H[i][c], h.H[r][c]);
                row_axpy(h.H[i], -q, h.H[r]);
                row_axpy(h.U[i], -q, h.U[r]);
                if (h.H[i][c] != 0)
                    clean = false;
            }
            if (clean)
                break;
        }
        if (h.H[r][c] == 0)
            continue;
        if (h.H[r][c] < 0) {
            for (auto& x : h.H[r])
                x = -x;
            for (auto& x : h.U[r])
                x = -x;
        }
        for (std::size_t k = 0; k < r; ++k) {
            Integer q = floor_div(h.H[k][c], h.H[r][c]);
            row_axpy(h.H[k], -q, h.H[r]);
            row_axpy(h.U[k], -q, h.U[r]);
        }
        ++r;
    }
    h.rank = r;
    return h;
}

Matrix negate(const Ring& ring, const Matrix& m) { return scale(ring, Scalar(-1), m); }

} // namespace

RrefResult rref(const Matrix& m, const Ring& ring)
{
    if (!ring.is_field())
        throw Error(Errc::invalid_argument, "rref requires a field; use snf over Z");
    RrefResult res;
    std::size_t rows = m.rows(), cols = m.cols();
    if (ring.kind() == RingKind::prime_field) {
        FpOps ops{ring.characteristic()};
        std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols));
        std::vector<std::vector<std::uint64_t>> e(rows, std::vector<std::uint64_t>(rows));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c)
                a[r][c] = ring.reduce(m(r, c)).get_num().get_ui();
            e[r][r] = 1;
        }
        rref_in_place(a, e, cols, res.pivots, ops);
        res.reduced = Matrix(rows, cols);
        res.basis_change = Matrix(rows, rows);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c)
                res.reduced(r, c) = Scalar(static_cast<unsigned long>(a[r][c]));
            for (std::size_t c = 0; c < rows; ++c)
                res.basis_change(r, c) = Scalar(static_cast<unsigned long>(e[r][c]));
        }
        return res;
    }
    std::vector<Vector> a(rows), e(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        a[r] = m.row(r);
        e[r] = unit_vector(rows, r);
    }
    rref_in_place(a, e, cols, res.pivots, QOps{});
    res.reduced = Matrix::from_rows(a, cols);
    res.basis_change = Matrix::from_rows(e, rows);
    return res;
}

Matrix kernel(const Matrix& m, const Ring& ring)
{
    std::size_t cols = m.cols();
    if (ring.is_field()) {
        auto rr = rref(m, ring);
        std::vector<bool> is_pivot(cols, false);
        for (auto c : rr.pivots)
            is_pivot[c] = true;
        std::vector<Vector> basis;
        for (std::size_t f = 0; f < cols; ++f) {
            if (is_pivot[f])
                continue;
            Vector v(cols);
            v[f] = 1;
            for (std::size_t i = 0; i < rr.pivots.size(); ++i)
                v[rr.pivots[i]] = ring.neg(rr.reduced(i, f));
            basis.push_back(std::move(v));
        }
        return Matrix::from_columns(cols, basis);
    }
    Hermite h = hermite_rows(m.transpose());
    IntRows tail(h.U.begin() + std::ptrdiff_t(h.rank), h.U.end());
    Matrix k = from_int_rows(tail, cols).transpose();
    if (k.cols() == 0)
        return Matrix(cols, 0);
    return span_basis(k, ring);
}

DiagonalForm diagonal_form(const Matrix& m, const Ring& ring)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    const bool field = ring.is_field();
    DiagonalForm f;
    Matrix& D = f.D;
    Matrix& U = f.U;
    Matrix& Ui = f.U_inverse;
    Matrix& V = f.V;
    D = reduce(ring, m);
    U = Matrix::identity(rows);
    Ui = Matrix::identity(rows);
    V = Matrix::identity(cols);

    auto quotient = [&](const Scalar& a, const Scalar& b) -> Scalar {
        if (field)
            return ring.mul(a, ring.inverse(b));
        return Scalar(floor_div(a.get_num(), b.get_num()));
    };
    // row_i -= q row_t
    auto row_op = [&](std::size_t i, std::size_t t, const Scalar& q) {
        if (q == 0)
            return;
        for (std::size_t c = 0; c < cols; ++c)
            if (D(t, c) != 0)
                D(i, c) = ring.sub(D(i, c), q * D(t, c));
        for (std::size_t c = 0; c < rows; ++c)
            if (U(t, c) != 0)
                U(i, c) = ring.sub(U(i, c), q * U(t, c));
        for (std::size_t r = 0; r < rows; ++r)
            if (Ui(r, i) != 0)
                Ui(r, t) = ring.add(Ui(r, t), q * Ui(r, i));
    };
    // col_j -= q col_t
    auto col_op = [&](std::size_t j, std::size_t t, const Scalar& q) {
        if (q == 0)
            return;
        for (std::size_t r = 0; r < rows; ++r)
            if (D(r, t) != 0)
                D(r, j) = ring.sub(D(r, j), q * D(r, t));
        for (std::size_t r = 0; r < cols; ++r)
            if (V(r, t) != 0)
                V(r, j) = ring.sub(V(r, j), q * V(r, t));
    };
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t c = 0; c < cols; ++c)
            std::swap(D(a, c), D(b, c));
        for (std::size_t c = 0; c < rows; ++c)
            std::swap(U(a, c), U(b, c));
        for (std::size_t r = 0; r < rows; ++r)
            std::swap(Ui(r, a), Ui(r, b));
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t r = 0; r < rows; ++r)
            std::swap(D(r, a), D(r, b));
        for (std::size_t r = 0; r < cols; ++r)
            std::swap(V(r, a), V(r, b));
    };
    auto scale_row = [&](std::size_t t, const Scalar& s) {
        Scalar s_inv = ring.inverse(s);
        for (std::size_t c = 0; c < cols; ++c)
            D(t, c) = ring.mul(D(t, c), s);
        for (std::size_t c = 0; c < rows; ++c)
            U(t, c) = ring.mul(U(t, c), s);
        for (std::size_t r = 0; r < rows; ++r)
            Ui(r, t) = ring.mul(Ui(r, t), s_inv);
    };

    std::size_t t = 0;
    const std::size_t limit = std::min(rows, cols);
    while (t < limit) {
        // pivot selection
        std::size_t pr = rows, pc = cols;
        for (std::size_t c = t; c < cols; ++c) {
            for (std::size_t r = t; r < rows; ++r) {
                if (D(r, c) == 0)
                    continue;
                if (pr == rows || (!field && abs(D(r, c)) < abs(D(pr, pc)))) {
                    pr = r;
                    pc = c;
                }
                if (field)
                    break;
            }
            if (field && pr != rows)
                break;
        }
        if (pr == rows)
            break;
        swap_rows(t, pr);
        swap_cols(t, pc);
        while (true) {
            bool done = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (D(i, t) == 0)
                    continue;
                row_op(i, t, quotient(D(i, t), D(t, t)));
                if (D(i, t) != 0) {
                    swap_rows(i, t);
                    done = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (D(t, j) == 0)
                    continue;
                col_op(j, t, quotient(D(t, j), D(t, t)));
                if (D(t, j) != 0) {
                    swap_cols(j, t);
                    done = false;
                }
            }
            if (!done)
                continue;
            if (!field) {
                // enforce d_t | every remaining entry
                bool fixed = false;
                for (std::size_t i = t + 1; i < rows && !fixed; ++i)
                    for (std::size_t j = t + 1; j < cols; ++j) {
                        if (D(i, j) == 0)
                            continue;
                        Integer rem;
                        mpz_fdiv_r(rem.get_mpz_t(), D(i, j).get_num_mpz_t(), D(t, t).get_num_mpz_t());
                        if (rem != 0) {
                            row_op(t, i, Scalar(-1)); // row_t += row_i
                            fixed = true;
                            break;
                        }
                    }
                if (fixed)
                    continue;
            }
            break;
        }
        if (field)
            scale_row(t, ring.inverse(D(t, t)));
        else if (D(t, t) < 0)
            scale_row(t, Scalar(-1));
        ++t;
    }
    f.rank = t;
    return f;
}

SmithForm snf(const Matrix& m)
{
    auto f = diagonal_form(m, Ring::integers());
    return SmithForm{std::move(f.U), std::move(f.D), std::move(f.V)};
}

std::size_t rank(const Matrix& m, const Ring& ring)
{
    if (ring.is_field())
        return rref(m, ring).pivots.size();
    return hermite_rows(m).rank;
}

Integer determinant_integer(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw Error(Errc::invalid_argument, "determinant of a non-square matrix");
    std::size_t n = m.rows();
    std::vector<Vector> a(n);
    for (std::size_t r = 0; r < n; ++r)
        a[r] = m.row(r);
    Scalar det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = n;
        for (std::size_t r = c; r < n; ++r)
            if (a[r][c] != 0) {
                p = r;
                break;
            }
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0)
                continue;
            Scalar f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j)
                a[r][j] -= f * a[c][j];
        }
    }
    return det.get_num();
}

std::optional<Vector> solve(const Matrix& m, const Vector& b, const Ring& ring)
{
    if (b.size() != m.rows())
        throw Error(Errc::invalid_argument, fmt::format("solve shape mismatch {}x{} vs {}", m.rows(), m.cols(), b.size()));
    if (m.cols() == 0) {
        for (const auto& x : b)
            if (ring.reduce(x) != 0)
                return std::nullopt;
        return Vector{};
    }
    if (ring.is_field()) {
        auto rr = rref(m, ring);
        Vector bb = apply(ring, rr.basis_change, b);
        for (std::size_t i = rr.pivots.size(); i < bb.size(); ++i)
            if (bb[i] != 0)
                return std::nullopt;
        Vector x(m.cols());
        for (std::size_t i = 0; i < rr.pivots.size(); ++i)
            x[rr.pivots[i]] = bb[i];
        return x;
    }
    auto f = diagonal_form(m, ring);
    Vector bb = apply(ring, f.U, b);
    Vector y(m.cols());
    for (std::size_t i = 0; i < bb.size(); ++i) {
        if (i < f.rank) {
            Integer rem;
            mpz_fdiv_r(rem.get_mpz_t(), bb[i].get_num_mpz_t(), f.D(i, i).get_num_mpz_t());
            if (rem != 0)
                return std::nullopt;
            y[i] = bb[i] / f.D(i, i);
        } else if (bb[i] != 0) {
            return std::nullopt;
        }
    }
    return apply(ring, f.V, y);
}

Matrix span_basis(const Matrix& gens, const Ring& ring)
{
    std::size_t n = gens.rows();
    if (gens.cols() == 0)
        return Matrix(n, 0);
    if (ring.is_field()) {
        auto rr = rref(gens.transpose(), ring);
        return rr.reduced.row_range(0, rr.pivots.size()).transpose();
    }
    Hermite h = hermite_rows(gens.transpose());
    IntRows head(h.H.begin(), h.H.begin() + std::ptrdiff_t(h.rank));
    if (head.empty())
        return Matrix(n, 0);
    return from_int_rows(head, n).transpose();
}

bool in_span(const Matrix& gens, const Vector& v, const Ring& ring)
{
    if (gens.cols() == 0)
        return is_zero(v);
    return solve(gens, v, ring).has_value();
}

bool span_contains(const Matrix& big, const Matrix& small, const Ring& ring)
{
    for (std::size_t c = 0; c < small.cols(); ++c)
        if (!in_span(big, small.column(c), ring))
            return false;
    return true;
}

bool same_span(const Matrix& a, const Matrix& b, const Ring& ring)
{
    return span_contains(a, b, ring) && span_contains(b, a, ring);
}

Matrix preimage(const Matrix& m, const Matrix& target_gens, const Ring& ring)
{
    std::size_t n = m.cols();
    if (n == 0)
        return Matrix(0, 0);
    Matrix stacked = m;
    if (target_gens.cols() > 0)
        stacked = m.hcat(negate(ring, target_gens));
    Matrix k = kernel(stacked, ring);
    if (k.cols() == 0)
        return Matrix(n, 0);
    return span_basis(k.row_range(0, n), ring);
}

Matrix intersect_spans(const Matrix& a, const Matrix& b, const Ring& ring)
{
    std::size_t n = a.rows();
    if (a.cols() == 0 || b.cols() == 0)
        return Matrix(n, 0);
    Matrix k = kernel(a.hcat(negate(ring, b)), ring);
    if (k.cols() == 0)
        return Matrix(n, 0);
    return span_basis(mul(ring, a, k.row_range(0, a.cols())), ring);
}

std::optional<Vector> coordinates(const Matrix& basis, const Vector& v, const Ring& ring)
{
    return solve(basis, v, ring);
}

Matrix relation_matrix(const std::vector<Integer>& orders)
{
    std::vector<Vector> cols;
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (orders[i] != 0) {
            Vector v(orders.size());
            v[i] = Scalar(orders[i]);
            cols.push_back(std::move(v));
        }
    return Matrix::from_columns(orders.size(), cols);
}

Vector reduce_coordinates(const Ring& ring, const std::vector<Integer>& orders, Vector v)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = ring.reduce(v[i]);
        if (i < orders.size() && orders[i] != 0) {
            Integer r;
            mpz_fdiv_r(r.get_mpz_t(), v[i].get_num_mpz_t(), orders[i].get_mpz_t());
            v[i] = Scalar(r);
        }
    }
    return v;
}

std::size_t Subquotient::free_rank() const
{
    return std::size_t(std::count(orders_.begin(), orders_.end(), Integer(0)));
}

std::vector<Integer> Subquotient::invariant_factors() const
{
    std::vector<Integer> out;
    for (const auto& d : orders_)
        if (d != 0)
            out.push_back(d);
    return out;
}

Vector Subquotient::lift(const Vector& coords) const { return apply(ring_, lift_, coords); }

std::optional<Vector> Subquotient::project(const Vector& ambient) const
{
    if (ambient.size() != ambient_)
        throw Error(Errc::invalid_argument, "project: ambient size mismatch");
    auto c = coordinates(z_basis_, ambient, ring_);
    if (!c)
        return std::nullopt;
    Vector y = apply(ring_, u_, *c);
    Vector out(kept_.size());
    for (std::size_t k = 0; k < kept_.size(); ++k)
        out[k] = y[kept_[k]];
    return reduce_coordinates(ring_, orders_, std::move(out));
}

bool Subquotient::is_zero_class(const Vector& v) const
{
    auto p = project(v);
    return p && opseq::is_zero(*p);
}

Subquotient subquotient(std::size_t ambient_rank, const Matrix& z, const Matrix& b, const Ring& ring)
{
    if ((z.cols() > 0 && z.rows() != ambient_rank) || (b.cols() > 0 && b.rows() != ambient_rank))
        throw Error(Errc::invalid_argument, "subquotient: generator rows differ from the ambient rank");
    Subquotient s;
    s.ring_ = ring;
    s.ambient_ = ambient_rank;
    s.z_basis_ = z.cols() ? span_basis(z, ring) : Matrix(ambient_rank, 0);
    s.b_gens_ = b.cols() ? b : Matrix(ambient_rank, 0);
    const std::size_t zr = s.z_basis_.cols();
    std::vector<Vector> rel_cols;
    for (std::size_t c = 0; c < s.b_gens_.cols(); ++c) {
        auto coords = coordinates(s.z_basis_, s.b_gens_.column(c), ring);
        if (!coords)
            throw Error(Errc::not_a_submodule, fmt::format("relation column {} is not in the span of Z", c));
        rel_cols.push_back(std::move(*coords));
    }
    Matrix rel = Matrix::from_columns(zr, rel_cols);
    DiagonalForm f = diagonal_form(rel, ring);
    s.u_ = f.U;
    for (std::size_t i = 0; i < zr; ++i) {
        if (i < f.rank) {
            if (ring.is_unit(f.D(i, i)))
                continue;
            s.kept_.push_back(i);
            s.orders_.push_back(abs(f.D(i, i).get_num()));
        } else {
            s.kept_.push_back(i);
            s.orders_.push_back(0);
        }
    }
    s.lift_ = mul(ring, s.z_basis_, f.U_inverse.select_columns(s.kept_));
    if (s.lift_.rows() != ambient_rank)
        s.lift_ = Matrix(ambient_rank, s.kept_.size());
    return s;
}

} // namespace opseq
