#include <doctest.h>

#include <numeric>
#include <random>

#include "opseq/error.hpp"
#include "opseq/linalg.hpp"

using namespace opseq;

namespace {

Matrix M(std::initializer_list<std::initializer_list<long>> rows)
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

Vector V(std::initializer_list<long> xs)
{
    Vector v;
    for (long x : xs)
        v.push_back(Scalar(x));
    return v;
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi)
{
    std::uniform_int_distribution<int> d(lo, hi);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = d(rng);
    return m;
}

// Inverse over ℚ by textbook Gauss-Jordan on an augmented matrix.
std::optional<Matrix> rational_inverse(const Matrix& m)
{
    std::size_t n = m.rows();
    std::vector<Vector> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = m.row(i);
        for (std::size_t j = 0; j < n; ++j)
            a[i].push_back(Scalar(i == j ? 1 : 0));
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            return std::nullopt;
        std::swap(a[p], a[c]);
        Scalar inv = 1 / a[c][c];
        for (auto& x : a[c])
            x *= inv;
        for (std::size_t r = 0; r < n; ++r)
            if (r != c && a[r][c] != 0) {
                Scalar f = a[r][c];
                for (std::size_t j = 0; j < 2 * n; ++j)
                    a[r][j] -= f * a[c][j];
            }
    }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = a[i][n + j];
    return out;
}

} // namespace

TEST_CASE("rref over F5")
{
    auto r = rref(M({{2, 4}, {1, 2}}), Ring::prime_field(5));
    CHECK(r.reduced == M({{1, 2}, {0, 0}}));
    CHECK(r.pivots == std::vector<std::size_t>{0});
    CHECK(mul(Ring::prime_field(5), r.basis_change, M({{2, 4}, {1, 2}})) == r.reduced);
}

TEST_CASE("rref rejects Z")
{
    CHECK_THROWS_AS(rref(M({{1}}), Ring::integers()), Error);
}

TEST_CASE("kernel over Z")
{
    Matrix k = kernel(M({{1, 1}}), Ring::integers());
    REQUIRE(k.cols() == 1);
    CHECK(k(0, 0) == -k(1, 0));
    CHECK(abs(k(0, 0)) == 1);
}

TEST_CASE("solve over Z")
{
    CHECK_FALSE(solve(M({{2}}), V({3}), Ring::integers()).has_value());
    auto x = solve(M({{2}}), V({4}), Ring::integers());
    REQUIRE(x);
    CHECK(*x == V({2}));
}

TEST_CASE("snf diag(2,3)")
{
    auto s = snf(M({{2, 0}, {0, 3}}));
    CHECK(s.D == M({{1, 0}, {0, 6}}));
    Ring z = Ring::integers();
    CHECK(mul(z, mul(z, s.U, M({{2, 0}, {0, 3}})), s.V) == s.D);
}

TEST_CASE("subquotient Z/4")
{
    auto sq = subquotient(1, M({{1}}), M({{4}}), Ring::integers());
    CHECK(sq.orders() == std::vector<Integer>{4});
    CHECK(sq.free_rank() == 0);
}

TEST_CASE("subquotient rejects B outside Z")
{
    CHECK_THROWS_AS(subquotient(2, M({{1}, {0}}), M({{0}, {1}}), Ring::integers()), Error);
    try {
        subquotient(2, M({{1}, {0}}), M({{0}, {1}}), Ring::integers());
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_a_submodule);
    }
}

TEST_CASE("rank-nullity and solve round trip")
{
    std::mt19937_64 rng(7);
    for (Ring ring : {Ring::prime_field(2), Ring::prime_field(5), Ring::rationals(), Ring::integers()}) {
        for (int t = 0; t < 60; ++t) {
            std::size_t r = rng() % 5, c = rng() % 5;
            Matrix m = reduce(ring, random_matrix(rng, r, c, -3, 3));
            Matrix k = kernel(m, ring);
            CHECK(rank(m, ring) + k.cols() == c);
            CHECK(mul(ring, m, k).is_zero());
            Vector x0 = reduce_coordinates(ring, {}, random_matrix(rng, c, 1, -3, 3).column(0));
            Vector b = apply(ring, m, x0);
            auto x = solve(m, b, ring);
            REQUIRE(x);
            CHECK(apply(ring, m, *x) == b);
        }
    }
}

TEST_CASE("diagonal form is a factorisation with unimodular transforms")
{
    std::mt19937_64 rng(11);
    Ring z = Ring::integers();
    for (int t = 0; t < 80; ++t) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        Matrix m = random_matrix(rng, r, c, -6, 6);
        auto f = diagonal_form(m, z);
        CHECK(mul(z, mul(z, f.U, m), f.V) == f.D);
        CHECK(abs(determinant_integer(f.U)) == 1);
        CHECK(abs(determinant_integer(f.V)) == 1);
        CHECK(mul(z, f.U, f.U_inverse) == Matrix::identity(r));
        for (std::size_t i = 0; i + 1 < f.rank; ++i)
            CHECK(f.D(i + 1, i + 1).get_num() % f.D(i, i).get_num() == 0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j || i >= f.rank)
                    CHECK(f.D(i, j) == 0);
        // Invariant: product of invariant factors = gcd of maximal minors (square full-rank case).
        if (r == c && f.rank == r)
            CHECK(abs(determinant_integer(m)) == abs(determinant_integer(f.D)));
    }
}

TEST_CASE("subquotient orders agree with brute-force counting")
{
    // Z = span of a random basis; B = Z * N with N nonsingular.
    // Z/B ≅ ℤ^r / N ℤ^r; count k-torsion by enumerating a box of representatives.
    std::mt19937_64 rng(3);
    Ring z = Ring::integers();
    int tested = 0;
    while (tested < 40) {
        std::size_t n = 1 + rng() % 3;
        std::size_t r = 1 + rng() % n;
        Matrix zb = random_matrix(rng, n, r, -2, 2);
        if (rank(zb, z) != r)
            continue;
        Matrix nm = random_matrix(rng, r, r, -3, 3);
        Integer det = abs(determinant_integer(nm));
        if (det == 0 || det > 12)
            continue;
        auto inv = rational_inverse(nm);
        REQUIRE(inv);
        auto sq = subquotient(n, zb, mul(z, zb, nm), z);
        CHECK(sq.free_rank() == 0);
        Integer prod = 1;
        for (auto& d : sq.orders())
            prod *= d;
        CHECK(prod == det);
        long N = det.get_si();
        for (long k = 1; k <= N; ++k) {
            // Number of classes x with k x ∈ N ℤ^r.
            long count = 0;
            std::vector<long> x(r, 0);
            while (true) {
                Vector v(r);
                for (std::size_t i = 0; i < r; ++i)
                    v[i] = Scalar(k * x[i]);
                Vector y(r);
                bool integral = true;
                for (std::size_t i = 0; i < r; ++i) {
                    Scalar s = 0;
                    for (std::size_t j = 0; j < r; ++j)
                        s += (*inv)(i, j) * v[j];
                    if (s.get_den() != 1)
                        integral = false;
                }
                if (integral)
                    ++count;
                std::size_t i = 0;
                while (i < r && ++x[i] == N)
                    x[i++] = 0;
                if (i == r)
                    break;
            }
            long classes = count;
            for (std::size_t i = 0; i + 1 < r; ++i)
                classes /= N;
            long expected = 1;
            for (auto& d : sq.orders())
                expected *= std::gcd(k, d.get_si());
            CHECK(classes == expected);
        }
        ++tested;
    }
}

TEST_CASE("subquotient over a prime field matches enumeration")
{
    std::mt19937_64 rng(5);
    Ring f = Ring::prime_field(3);
    for (int t = 0; t < 40; ++t) {
        std::size_t n = 1 + rng() % 3;
        Matrix zg = reduce(f, random_matrix(rng, n, 1 + rng() % 3, 0, 2));
        Matrix bg = mul(f, zg, reduce(f, random_matrix(rng, zg.cols(), rng() % 3, 0, 2)));
        auto sq = subquotient(n, zg, bg, f);
        // Enumerate all vectors of F3^n, count those in span Z and in span B.
        long total = 1;
        for (std::size_t i = 0; i < n; ++i)
            total *= 3;
        long inz = 0, inb = 0;
        for (long code = 0; code < total; ++code) {
            Vector v(n);
            long c = code;
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = c % 3;
                c /= 3;
            }
            bool a = in_span(zg, v, f), b = bg.cols() ? in_span(bg, v, f) : is_zero(v);
            inz += a;
            inb += b;
            if (a)
                CHECK(sq.is_zero_class(v) == b);
        }
        long q = inz / inb;
        long expected = 1;
        for (std::size_t i = 0; i < sq.dimension(); ++i)
            expected *= 3;
        CHECK(q == expected);
        // lift then project is the identity on coordinates
        for (std::size_t i = 0; i < sq.size(); ++i) {
            auto p = sq.project(sq.lift().column(i));
            REQUIRE(p);
            CHECK(*p == unit_vector(sq.size(), i));
        }
    }
}

TEST_CASE("span operations")
{
    Ring z = Ring::integers();
    Matrix a = M({{2, 0}, {0, 1}, {0, 0}});
    Matrix b = M({{1, 0}, {0, 0}, {0, 1}});
    Matrix i = intersect_spans(a, b, z);
    REQUIRE(i.cols() == 1);
    CHECK(same_span(i, M({{2}, {0}, {0}}), z));
    Matrix pre = preimage(M({{2, 0}, {0, 3}}), M({{4}, {0}}), z);
    CHECK(same_span(pre, M({{2}, {0}}), z));
    CHECK(span_basis(M({{2, 4}, {0, 0}}), z) == M({{2}, {0}}));
}
