#pragma once

// MDS vector families: sets of length-B vectors over GF(q) any B of which
// are linearly independent. The default construction is Vandermonde at the
// first `count` field elements; two special cases avoid large fields when
// the counts line up (identity when count == dim, single parity check when
// count == dim + 1).

#include <cstddef>
#include <string>

#include "regen/matrix.hpp"

namespace regen {

enum class FamilyTag { Vandermonde, SingleParityCheck, Identity, Custom };

inline std::string to_string(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::Vandermonde: return "vandermonde";
        case FamilyTag::SingleParityCheck: return "single-parity-check";
        case FamilyTag::Identity: return "identity";
        case FamilyTag::Custom: return "custom";
    }
    throw ParamError("bad family tag");
}

inline FamilyTag family_tag_from_string(const std::string& s) {
    if (s == "vandermonde") return FamilyTag::Vandermonde;
    if (s == "single-parity-check") return FamilyTag::SingleParityCheck;
    if (s == "identity") return FamilyTag::Identity;
    if (s == "custom") return FamilyTag::Custom;
    throw ParamError("unknown construction tag: " + s);
}

struct VectorFamily {
    size_t dim = 0;    // vector length B
    size_t count = 0;  // number of vectors
    Matrix vectors;    // count x dim, row i = vector i
    FamilyTag tag = FamilyTag::Custom;

    Vec vector(size_t i) const { return vectors.row(i); }
};

// Builds a family of `count` vectors of length `dim` over `field`, every
// dim-subset independent. Vandermonde rows (1, x, x^2, ...) at the first
// `count` field elements require q >= count; the identity and single parity
// check layouts work on any field and cover count == dim and count == dim+1.
inline VectorFamily make_mds(size_t count, size_t dim, FieldPtr field) {
    if (dim == 0 || count < dim) throw ParamError("MDS family needs count >= dim >= 1");
    const Field& f = *field;

    if (count == dim) {
        Matrix v = Matrix::identity(dim, field);
        return {dim, count, std::move(v), FamilyTag::Identity};
    }
    if (f.order() >= count) {
        Matrix v(count, dim, field);
        for (size_t i = 0; i < count; ++i) {
            uint32_t x = static_cast<uint32_t>(i);
            uint32_t p = 1;
            for (size_t c = 0; c < dim; ++c) {
                v.at(i, c) = p;
                p = f.mul(p, x);
            }
        }
        return {dim, count, std::move(v), FamilyTag::Vandermonde};
    }
    if (count == dim + 1) {
        // dim unit vectors plus the all-ones parity vector
        Matrix v(count, dim, field);
        for (size_t i = 0; i < dim; ++i) v.at(i, i) = 1;
        for (size_t c = 0; c < dim; ++c) v.at(dim, c) = 1;
        return {dim, count, std::move(v), FamilyTag::SingleParityCheck};
    }
    throw ParamError("field order " + std::to_string(f.order()) + " too small for " + std::to_string(count) +
                     " Vandermonde vectors");
}

// True iff every k-subset of the family has full rank k. Exhaustive, meant
// for desk-scale counts.
inline bool verify_mds(const VectorFamily& fam, size_t k) {
    if (k > fam.dim) throw ParamError("k exceeds family dimension");
    if (k == 0) return true;
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        Matrix sub(k, fam.dim, fam.vectors.field_ptr());
        for (size_t r = 0; r < k; ++r)
            for (size_t c = 0; c < fam.dim; ++c) sub.at(r, c) = fam.vectors.at(idx[r], c);
        if (rank(sub) != k) return false;

        size_t i = k;
        while (i > 0 && idx[i - 1] == fam.count - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return true;
}

}  // namespace regen
