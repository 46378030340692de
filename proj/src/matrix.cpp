#include "opseq/matrix.hpp"

#include <cassert>

#include <fmt/core.h>

#include "opseq/error.hpp"

namespace opseq {

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vector>& columns)
{
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != rows)
            throw Error(Errc::invalid_argument, "column length mismatch");
        for (std::size_t r = 0; r < rows; ++r)
            m(r, c) = columns[c][r];
    }
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, std::size_t cols)
{
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw Error(Errc::invalid_argument, "row length mismatch");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = rows[r][c];
    }
    return m;
}

Matrix Matrix::diagonal(const Vector& entries)
{
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        m(i, i) = entries[i];
    return m;
}

Vector Matrix::column(std::size_t c) const
{
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        v[r] = (*this)(r, c);
    return v;
}

Vector Matrix::row(std::size_t r) const
{
    return Vector(data_.begin() + std::ptrdiff_t(r * cols_), data_.begin() + std::ptrdiff_t((r + 1) * cols_));
}

void Matrix::set_column(std::size_t c, const Vector& v)
{
    assert(v.size() == rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        (*this)(r, c) = v[r];
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const
{
    Matrix m(rows_, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t r = 0; r < rows_; ++r)
            m(r, k) = (*this)(r, idx[k]);
    return m;
}

Matrix Matrix::column_range(std::size_t begin, std::size_t end) const
{
    Matrix m(rows_, end - begin);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = begin; c < end; ++c)
            m(r, c - begin) = (*this)(r, c);
    return m;
}

Matrix Matrix::row_range(std::size_t begin, std::size_t end) const
{
    Matrix m(end - begin, cols_);
    for (std::size_t r = begin; r < end; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m(r - begin, c) = (*this)(r, c);
    return m;
}

Matrix Matrix::hcat(const Matrix& other) const
{
    if (cols_ == 0 && (rows_ == other.rows_ || rows_ == 0))
        return other;
    if (other.cols_ == 0 && (rows_ == other.rows_ || other.rows_ == 0))
        return *this;
    if (rows_ != other.rows_)
        throw Error(Errc::invalid_argument, fmt::format("hcat row mismatch {} vs {}", rows_, other.rows_));
    Matrix m(rows_, cols_ + other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c)
            m(r, c) = (*this)(r, c);
        for (std::size_t c = 0; c < other.cols_; ++c)
            m(r, cols_ + c) = other(r, c);
    }
    return m;
}

Matrix Matrix::vcat(const Matrix& other) const
{
    if (rows_ == 0 && (cols_ == other.cols_ || cols_ == 0))
        return other;
    if (other.rows_ == 0 && (cols_ == other.cols_ || other.cols_ == 0))
        return *this;
    if (cols_ != other.cols_)
        throw Error(Errc::invalid_argument, "vcat column mismatch");
    Matrix m(rows_ + other.rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m(r, c) = (*this)(r, c);
    for (std::size_t r = 0; r < other.rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m(rows_ + r, c) = other(r, c);
    return m;
}

bool Matrix::is_zero() const
{
    for (const auto& x : data_)
        if (x != 0)
            return false;
    return true;
}

std::string Matrix::debug_string() const
{
    std::string out = "[";
    for (std::size_t r = 0; r < rows_; ++r) {
        out += r ? "; " : "";
        for (std::size_t c = 0; c < cols_; ++c)
            out += (c ? " " : "") + (*this)(r, c).get_str();
    }
    return out + "]";
}

Matrix mul(const Ring& ring, const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw Error(Errc::invalid_argument, fmt::format("mul shape mismatch {}x{} * {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
    Matrix m(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Scalar& x = a(r, k);
            if (x == 0)
                continue;
            for (std::size_t c = 0; c < b.cols(); ++c)
                if (b(k, c) != 0)
                    m(r, c) += x * b(k, c);
        }
    if (ring.kind() != RingKind::rationals)
        return reduce(ring, std::move(m));
    return m;
}

Vector apply(const Ring& ring, const Matrix& m, const Vector& v)
{
    if (m.cols() != v.size())
        throw Error(Errc::invalid_argument, fmt::format("apply shape mismatch {}x{} * {}", m.rows(), m.cols(), v.size()));
    Vector out(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (v[c] == 0)
            continue;
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (m(r, c) != 0)
                out[r] += m(r, c) * v[c];
    }
    if (ring.kind() == RingKind::prime_field)
        for (auto& x : out)
            x = ring.reduce(x);
    return out;
}

Matrix add(const Ring& ring, const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(Errc::invalid_argument, "add shape mismatch");
    Matrix m(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            m(r, c) = ring.add(a(r, c), b(r, c));
    return m;
}

Matrix sub(const Ring& ring, const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(Errc::invalid_argument, "sub shape mismatch");
    Matrix m(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            m(r, c) = ring.sub(a(r, c), b(r, c));
    return m;
}

Matrix scale(const Ring& ring, const Scalar& s, const Matrix& m)
{
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(r, c) = ring.mul(s, m(r, c));
    return out;
}

Matrix reduce(const Ring& ring, Matrix m)
{
    if (ring.kind() == RingKind::rationals)
        return m;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            m(r, c) = ring.reduce(m(r, c));
    return m;
}

Vector zero_vector(std::size_t n) { return Vector(n); }

Vector unit_vector(std::size_t n, std::size_t i)
{
    Vector v(n);
    v[i] = 1;
    return v;
}

Vector add(const Ring& ring, const Vector& a, const Vector& b)
{
    assert(a.size() == b.size());
    Vector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[i] = ring.add(a[i], b[i]);
    return v;
}

Vector sub(const Ring& ring, const Vector& a, const Vector& b)
{
    assert(a.size() == b.size());
    Vector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[i] = ring.sub(a[i], b[i]);
    return v;
}

Vector scale(const Ring& ring, const Scalar& s, const Vector& v)
{
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = ring.mul(s, v[i]);
    return out;
}

void axpy(const Ring& ring, Vector& a, const Scalar& s, const Vector& b)
{
    assert(a.size() == b.size());
    if (s == 0)
        return;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != 0)
            a[i] = ring.add(a[i], s * b[i]);
}

bool is_zero(const Vector& v)
{
    for (const auto& x : v)
        if (x != 0)
            return false;
    return true;
}

} // namespace opseq
