#pragma once

// Helpers shared by the couple and spectral sequence sources.

#include <string>

#include "opseq/error.hpp"
#include "opseq/linalg.hpp"

namespace opseq::detail {

inline Vector head(const Vector& v, std::size_t n) { return Vector(v.begin(), v.begin() + std::ptrdiff_t(n)); }

/// values · (coordinates of v in the independent columns `basis`).
inline Vector through_basis(const Ring& ring, const Matrix& basis, const Matrix& values, const Vector& v, const char* what)
{
    if (basis.cols() == 0) {
        if (!is_zero(v))
            throw Error(Errc::preimage_failed, std::string(what) + ": vector outside the lattice");
        return Vector(values.rows());
    }
    auto c = solve(basis, v, ring);
    if (!c)
        throw Error(Errc::preimage_failed, std::string(what) + ": vector outside the lattice");
    return apply(ring, values, *c);
}

inline Matrix through_basis(const Ring& ring, const Matrix& basis, const Matrix& values, const Matrix& vs, const char* what)
{
    std::vector<Vector> cols;
    for (std::size_t c = 0; c < vs.cols(); ++c)
        cols.push_back(through_basis(ring, basis, values, vs.column(c), what));
    return Matrix::from_columns(values.rows(), cols);
}

inline bool in_span_mod(const Ring& ring, const Matrix& gens, const Vector& v)
{
    return is_zero(v) || (gens.cols() > 0 && in_span(gens, v, ring));
}

/// [a | b] tolerating empty operands.
inline Matrix cat(const Matrix& a, const Matrix& b)
{
    if (a.cols() == 0)
        return b.cols() == 0 ? Matrix(std::max(a.rows(), b.rows()), 0) : b;
    return b.cols() == 0 ? a : a.hcat(b);
}

} // namespace opseq::detail
