#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "opseq/ring.hpp"

namespace opseq {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix of exact scalars. Ring reduction is applied by the
/// free functions taking a Ring; the container itself is ring-agnostic.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);
    static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns);
    static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);
    static Matrix diagonal(const Vector& entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector column(std::size_t c) const;
    Vector row(std::size_t r) const;
    void set_column(std::size_t c, const Vector& v);

    Matrix transpose() const;
    Matrix select_columns(const std::vector<std::size_t>& idx) const;
    Matrix column_range(std::size_t begin, std::size_t end) const;
    Matrix row_range(std::size_t begin, std::size_t end) const;
    /// [this | other]; row counts must agree (empty operands adopt the other's rows).
    Matrix hcat(const Matrix& other) const;
    /// [this ; other]
    Matrix vcat(const Matrix& other) const;

    bool is_zero() const;
    bool operator==(const Matrix& other) const = default;

    std::string debug_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

Matrix mul(const Ring& ring, const Matrix& a, const Matrix& b);
Vector apply(const Ring& ring, const Matrix& m, const Vector& v);
Matrix add(const Ring& ring, const Matrix& a, const Matrix& b);
Matrix sub(const Ring& ring, const Matrix& a, const Matrix& b);
Matrix scale(const Ring& ring, const Scalar& s, const Matrix& m);
Matrix reduce(const Ring& ring, Matrix m);

Vector zero_vector(std::size_t n);
Vector unit_vector(std::size_t n, std::size_t i);
Vector add(const Ring& ring, const Vector& a, const Vector& b);
Vector sub(const Ring& ring, const Vector& a, const Vector& b);
Vector scale(const Ring& ring, const Scalar& s, const Vector& v);
/// a += s * b
void axpy(const Ring& ring, Vector& a, const Scalar& s, const Vector& b);
bool is_zero(const Vector& v);

} // namespace opseq
