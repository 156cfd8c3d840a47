#pragma once

// Subspaces of GF(q)^B in canonical (reduced row echelon) basis form, with
// the sum and intersection operations the storage-code checkers need.

#include <cstddef>
#include <vector>

#include "regen/matrix.hpp"

namespace regen {

class Subspace {
public:
    // Span of the given rows; the stored basis is the RREF with zero rows
    // dropped, so equal spans compare equal.
    static Subspace span(const Matrix& rows) {
        Rref r = rref(rows);
        Matrix basis(r.pivots.size(), rows.cols(), rows.field_ptr());
        for (size_t i = 0; i < r.pivots.size(); ++i)
            for (size_t c = 0; c < rows.cols(); ++c) basis.at(i, c) = r.reduced.at(i, c);
        return Subspace(std::move(basis));
    }

    static Subspace zero(size_t ambient, FieldPtr field) { return Subspace(Matrix(0, ambient, std::move(field))); }

    size_t ambient_dim() const { return basis_.cols(); }
    size_t dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }

    bool contains(const Vec& v) const {
        Matrix probe = stack_rows(basis_, Matrix::from_rows({v}, ambient_dim(), basis_.field_ptr()));
        return rank(probe) == dim();
    }

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

private:
    explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

inline void check_same_ambient(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw ParamError("subspaces live in different ambient spaces");
    if (!a.basis().field().same_as(b.basis().field())) throw FieldMismatchError("subspaces over different fields");
}

inline Subspace sum(const std::vector<Subspace>& spaces) {
    if (spaces.empty()) throw ParamError("sum of zero subspaces");
    Matrix stacked = spaces[0].basis();
    for (size_t i = 1; i < spaces.size(); ++i) {
        check_same_ambient(spaces[0], spaces[i]);
        stacked = stack_rows(stacked, spaces[i].basis());
    }
    return Subspace::span(stacked);
}

inline size_t sum_dim(const std::vector<Subspace>& spaces) { return sum(spaces).dim(); }

// Intersection via the kernel of the stacked-basis relation: a vector lies in
// both spans iff it is a combination of A's rows whose coefficients, together
// with coefficients on B's rows, solve [A^t | -B^t] x = 0.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
    check_same_ambient(a, b);
    const Field& f = a.basis().field();
    const size_t n = a.ambient_dim();
    const size_t ra = a.dim(), rb = b.dim();
    if (ra == 0 || rb == 0) return Subspace::zero(n, a.basis().field_ptr());

    Matrix rel(n, ra + rb, a.basis().field_ptr());
    for (size_t c = 0; c < n; ++c) {
        for (size_t i = 0; i < ra; ++i) rel.at(c, i) = a.basis().at(i, c);
        for (size_t j = 0; j < rb; ++j) rel.at(c, ra + j) = f.neg(b.basis().at(j, c));
    }
    Matrix kernel = nullspace(rel);
    Matrix vectors(kernel.rows(), n, a.basis().field_ptr());
    for (size_t r = 0; r < kernel.rows(); ++r)
        for (size_t c = 0; c < n; ++c) {
            uint32_t acc = 0;
            for (size_t i = 0; i < ra; ++i) acc = f.add(acc, f.mul(kernel.at(r, i), a.basis().at(i, c)));
            vectors.at(r, c) = acc;
        }
    return Subspace::span(vectors);
}

}  // namespace regen
