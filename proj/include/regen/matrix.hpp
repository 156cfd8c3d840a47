#pragma once

// Dense matrices over GF(q) and the row-reduction machinery everything else
// is built on: rref, rank, solve, nullspace, inverse. All arithmetic is
// exact; there is no floating point anywhere in the library.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "regen/field.hpp"

namespace regen {

using Vec = std::vector<uint32_t>;

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}  // empty placeholder, no field attached

    Matrix(size_t rows, size_t cols, FieldPtr field)
        : rows_(rows), cols_(cols), field_(std::move(field)), a_(rows * cols, 0) {}

    static Matrix identity(size_t n, FieldPtr field) {
        Matrix m(n, n, std::move(field));
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<Vec>& rows, size_t cols, FieldPtr field) {
        Matrix m(rows.size(), cols, std::move(field));
        for (size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw ParamError("row length mismatch");
            for (size_t c = 0; c < cols; ++c) m.at(r, c) = m.field().check(rows[r][c]);
        }
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const Field& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }

    uint32_t& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
    uint32_t at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    Vec row(size_t r) const { return Vec(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_); }

    void set_row(size_t r, const Vec& v) {
        if (v.size() != cols_) throw ParamError("row length mismatch");
        for (size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_, field_);
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_->same_as(*b.field_) && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    size_t rows_, cols_;
    FieldPtr field_;
    Vec a_;
};

inline void check_same_field(const Matrix& a, const Matrix& b) {
    if (!a.field().same_as(b.field())) throw FieldMismatchError("matrices over different fields");
}

inline Matrix mul(const Matrix& a, const Matrix& b) {
    check_same_field(a, b);
    if (a.cols() != b.rows()) throw ParamError("matrix shape mismatch in multiply");
    const Field& f = a.field();
    Matrix out(a.rows(), b.cols(), a.field_ptr());
    for (size_t r = 0; r < a.rows(); ++r)
        for (size_t i = 0; i < a.cols(); ++i) {
            uint32_t v = a.at(r, i);
            if (v == 0) continue;
            for (size_t c = 0; c < b.cols(); ++c)
                out.at(r, c) = f.add(out.at(r, c), f.mul(v, b.at(i, c)));
        }
    return out;
}

inline Vec mul_vec(const Matrix& a, const Vec& x) {
    if (a.cols() != x.size()) throw ParamError("matrix/vector shape mismatch");
    const Field& f = a.field();
    Vec out(a.rows(), 0);
    for (size_t r = 0; r < a.rows(); ++r) {
        uint32_t acc = 0;
        for (size_t c = 0; c < a.cols(); ++c) acc = f.add(acc, f.mul(a.at(r, c), x[c]));
        out[r] = acc;
    }
    return out;
}

inline uint32_t dot(const Field& f, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ParamError("vector length mismatch in dot product");
    uint32_t acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
    return acc;
}

inline Matrix stack_rows(const Matrix& a, const Matrix& b) {
    check_same_field(a, b);
    if (a.cols() != b.cols()) throw ParamError("column count mismatch in stack");
    Matrix out(a.rows() + b.rows(), a.cols(), a.field_ptr());
    for (size_t r = 0; r < a.rows(); ++r)
        for (size_t c = 0; c < a.cols(); ++c) out.at(r, c) = a.at(r, c);
    for (size_t r = 0; r < b.rows(); ++r)
        for (size_t c = 0; c < b.cols(); ++c) out.at(a.rows() + r, c) = b.at(r, c);
    return out;
}

struct Rref {
    Matrix reduced;
    std::vector<size_t> pivots;  // pivot column per pivot row, ascending
};

inline Rref rref(Matrix m) {
    const Field& f = m.field();
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t sel = row;
        while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (size_t c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(row, c));
        uint32_t scale = f.inv(m.at(row, col));
        for (size_t c = col; c < m.cols(); ++c) m.at(row, c) = f.mul(m.at(row, c), scale);
        for (size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col) == 0) continue;
            uint32_t factor = m.at(r, col);
            for (size_t c = col; c < m.cols(); ++c)
                m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(row, c)));
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

inline size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

// Basis of the right nullspace, one solution per row. May have zero rows.
inline Matrix nullspace(const Matrix& m) {
    Rref r = rref(m);
    const Field& f = m.field();
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t p : r.pivots) is_pivot[p] = true;
    std::vector<size_t> free_cols;
    for (size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    Matrix basis(free_cols.size(), m.cols(), m.field_ptr());
    for (size_t i = 0; i < free_cols.size(); ++i) {
        size_t fc = free_cols[i];
        basis.at(i, fc) = 1;
        for (size_t pr = 0; pr < r.pivots.size(); ++pr)
            basis.at(i, r.pivots[pr]) = f.neg(r.reduced.at(pr, fc));
    }
    return basis;
}

enum class SolveStatus { Unique, Parametric, Inconsistent };

// Outcome of solve(). For Parametric systems the particular solution is the
// one with every free variable set to zero; this convention is relied on for
// reproducible repair coefficients.
struct Solution {
    SolveStatus status = SolveStatus::Inconsistent;
    Vec particular;             // empty when Inconsistent
    Matrix nullspace_basis;     // rows span the solution space offset

    bool ok() const { return status != SolveStatus::Inconsistent; }
};

inline Solution solve(const Matrix& a, const Vec& b) {
    if (a.rows() != b.size()) throw ParamError("rhs length does not match row count");
    const Field& f = a.field();
    Matrix aug(a.rows(), a.cols() + 1, a.field_ptr());
    for (size_t r = 0; r < a.rows(); ++r) {
        for (size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = f.check(b[r]);
    }
    Rref r = rref(std::move(aug));
    Solution s{SolveStatus::Inconsistent, {}, Matrix(0, a.cols(), a.field_ptr())};
    for (size_t p : r.pivots)
        if (p == a.cols()) return s;  // row [0 ... 0 | 1]
    s.particular.assign(a.cols(), 0);
    for (size_t pr = 0; pr < r.pivots.size(); ++pr) s.particular[r.pivots[pr]] = r.reduced.at(pr, a.cols());
    s.nullspace_basis = nullspace(a);
    s.status = s.nullspace_basis.rows() == 0 ? SolveStatus::Unique : SolveStatus::Parametric;
    return s;
}

inline Matrix invert(const Matrix& m) {
    if (m.rows() != m.cols()) throw ParamError("only square matrices can be inverted");
    const size_t n = m.rows();
    Matrix aug(n, 2 * n, m.field_ptr());
    for (size_t r = 0; r < n; ++r) {
        for (size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = 1;
    }
    Rref red = rref(std::move(aug));
    if (red.pivots.size() < n || red.pivots[n - 1] >= n) throw ParamError("matrix is singular");
    Matrix out(n, n, m.field_ptr());
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) out.at(r, c) = red.reduced.at(r, n + c);
    return out;
}

}  // namespace regen
