#pragma once

// Executable checkers for the subspace characterization of linear exact
// regenerating codes at the minimum-bandwidth point. A code is described by
// the coefficient vectors each node stores; the checkers compute subspace
// dimensions and intersection patterns and report them per node / subset.
// check_structure is the full certificate: it passes iff every (d+1)-subset
// of nodes carries the complete-graph intersection pattern.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "regen/mbr.hpp"
#include "regen/msr.hpp"
#include "regen/subspace.hpp"

namespace regen {

struct LinearStorageCode {
    uint32_t n = 0, k = 0, d = 0;
    uint32_t alpha = 0, beta = 0;
    size_t B = 0;
    FieldPtr field;
    std::vector<Matrix> node_vectors;  // n entries, alpha x B each; index = node id - 1
};

inline LinearStorageCode to_linear_code(const MbrCodeSpec& spec) {
    const MbrParams& p = spec.params;
    LinearStorageCode code{p.n, p.k, p.d, p.alpha, p.beta, p.B, spec.field, {}};
    for (uint32_t j = 1; j <= p.n; ++j) {
        Matrix m(p.alpha, p.B, spec.field);
        size_t r = 0;
        for (size_t col : spec.node_columns[j - 1]) m.set_row(r++, spec.family.vector(col));
        code.node_vectors.push_back(std::move(m));
    }
    return code;
}

inline LinearStorageCode to_linear_code(const MsrCodeSpec& spec) {
    const MsrParams& p = spec.params;
    LinearStorageCode code{p.n, p.k, p.d, p.alpha, p.beta, p.B, spec.field, {}};
    for (uint32_t i = 1; i <= p.n; ++i) {
        // stored symbols are f.p_i and g.p_i + f.u_i, as vectors over (f, g)
        Matrix m(2, p.B, spec.field);
        Vec pi = spec.main_vector(i), ui = spec.aux_vector(i);
        for (uint32_t c = 0; c < p.k; ++c) {
            m.at(0, c) = pi[c];
            m.at(1, c) = ui[c];
            m.at(1, p.k + c) = pi[c];
        }
        code.node_vectors.push_back(std::move(m));
    }
    return code;
}

inline Subspace node_subspace(const LinearStorageCode& code, uint32_t node) {
    if (node < 1 || node > code.n) throw ParamError("node id out of range");
    return Subspace::span(code.node_vectors[node - 1]);
}

namespace detail {

inline void check_node_ids(const LinearStorageCode& code, const std::vector<uint32_t>& ids, uint32_t exclude) {
    std::vector<bool> seen(code.n + 1, false);
    for (uint32_t id : ids) {
        if (id < 1 || id > code.n) throw ParamError("node id out of range");
        if (id == exclude) throw ParamError("node " + std::to_string(id) + " cannot appear in its own helper set");
        if (seen[id]) throw ParamError("duplicate node id");
        seen[id] = true;
    }
}

// Visits every k-subset of {0, .., n-1} in lexicographic order.
inline void for_each_combination(size_t n, size_t k, const std::function<void(const std::vector<size_t>&)>& fn) {
    if (k > n) return;
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

struct Lemma1Report {
    std::vector<size_t> node_dims;  // index = node id - 1
    uint32_t expected = 0;          // alpha
    bool pass = false;
};

// Every node must store a full alpha-dimensional subspace.
inline Lemma1Report check_lemma1(const LinearStorageCode& code) {
    Lemma1Report r;
    r.expected = code.alpha;
    r.pass = true;
    for (uint32_t j = 1; j <= code.n; ++j) {
        size_t dim = node_subspace(code, j).dim();
        r.node_dims.push_back(dim);
        if (dim != code.alpha) r.pass = false;
    }
    return r;
}

struct Corollary1Report {
    uint32_t node = 0;
    std::vector<uint32_t> subset;
    size_t dim = 0;       // dim(W_i intersect sum of subset spaces)
    size_t expected = 0;  // m * beta
    bool pass = false;
};

// dim(W_i intersect sum_{j in D_m} W_j) must equal m * beta, for m < k.
inline Corollary1Report check_corollary1(const LinearStorageCode& code, uint32_t node,
                                         const std::vector<uint32_t>& subset) {
    if (node < 1 || node > code.n) throw ParamError("node id out of range");
    if (subset.empty()) throw ParamError("subset must be nonempty");
    if (subset.size() >= code.k) throw ParamError("corollary applies only to subsets of size m < k");
    detail::check_node_ids(code, subset, node);

    std::vector<Subspace> spaces;
    for (uint32_t j : subset) spaces.push_back(node_subspace(code, j));
    Subspace merged = sum(spaces);
    Corollary1Report r{node, subset, 0, subset.size() * size_t(code.beta), false};
    r.dim = intersect(node_subspace(code, node), merged).dim();
    r.pass = r.dim == r.expected;
    return r;
}

// Pairwise intersection dimension a valid code must show. For k >= 2 this
// is beta (the m = 1 case of the corollary). k = 1 is degenerate: every node
// alone must span all B dimensions, so any two node spaces coincide and the
// intersection is B-dimensional.
inline size_t expected_pair_dim(const LinearStorageCode& code) {
    return code.k == 1 ? code.B : code.beta;
}

struct Lemma2Report {
    uint32_t node = 0;
    std::vector<uint32_t> helpers;
    std::vector<size_t> pair_dims;  // dim(W_i intersect W_j), aligned with helpers
    size_t sum_dim = 0;             // dim of the sum of those intersections
    size_t expected_pair = 0;       // beta (B when k = 1)
    size_t expected_sum = 0;        // d * beta
    bool pass = false;
};

// The intersections of W_i with each of d helper spaces must each have
// dimension beta and be linearly independent (their sum has dimension
// d*beta); those intersections are exactly what helpers pass during repair.
inline Lemma2Report check_lemma2(const LinearStorageCode& code, uint32_t node,
                                 const std::vector<uint32_t>& helpers) {
    if (node < 1 || node > code.n) throw ParamError("node id out of range");
    if (helpers.size() != code.d) throw ParamError("helper set must have exactly d nodes");
    detail::check_node_ids(code, helpers, node);

    Lemma2Report r;
    r.node = node;
    r.helpers = helpers;
    r.expected_pair = expected_pair_dim(code);
    r.expected_sum = size_t(code.d) * code.beta;
    Subspace wi = node_subspace(code, node);
    std::vector<Subspace> intersections;
    r.pass = true;
    for (uint32_t j : helpers) {
        Subspace s = intersect(wi, node_subspace(code, j));
        r.pair_dims.push_back(s.dim());
        if (s.dim() != r.expected_pair) r.pass = false;
        intersections.push_back(std::move(s));
    }
    r.sum_dim = sum_dim(intersections);
    if (r.sum_dim != r.expected_sum) r.pass = false;
    return r;
}

struct SubsetStructureReport {
    std::vector<uint32_t> nodes;  // the d+1 nodes examined
    bool pairwise_ok = false;     // every pair meets in a beta-dim subspace
    bool node_sums_ok = false;    // each node's d intersections are independent and fill W_i
    bool collectors_ok = false;   // every k-subset spans B
    bool pass = false;
};

struct StructureReport {
    bool params_ok = false;  // parameters sit on the beta=1-scaled MBR point
    std::vector<SubsetStructureReport> subsets;
    bool pass = false;
};

// Full certificate: necessary and sufficient for the code to be a linear
// exact regenerating code at the MBR point. Every (d+1)-subset must look
// like a complete graph whose edges are beta-dimensional intersection
// subspaces, each node's space the direct sum of its d edges, and every
// k of the d+1 nodes jointly spanning all B dimensions.
inline StructureReport check_structure(const LinearStorageCode& code) {
    StructureReport report;
    size_t expect_B = size_t(code.beta) * (size_t(code.k) * code.d - size_t(code.k) * (code.k - 1) / 2);
    report.params_ok = code.k >= 1 && code.k <= code.d && code.d < code.n && code.beta >= 1 &&
                       code.alpha == code.d * code.beta && code.B == expect_B;
    if (!report.params_ok) {
        report.pass = false;
        return report;
    }

    std::vector<Subspace> spaces;
    for (uint32_t j = 1; j <= code.n; ++j) spaces.push_back(node_subspace(code, j));

    report.pass = true;
    detail::for_each_combination(code.n, size_t(code.d) + 1, [&](const std::vector<size_t>& pick) {
        SubsetStructureReport sub;
        for (size_t i : pick) sub.nodes.push_back(static_cast<uint32_t>(i + 1));

        sub.pairwise_ok = true;
        const size_t pair_dim = expected_pair_dim(code);
        std::vector<std::vector<Subspace>> edges(pick.size());
        for (size_t a = 0; a < pick.size(); ++a)
            for (size_t b = a + 1; b < pick.size(); ++b) {
                Subspace s = intersect(spaces[pick[a]], spaces[pick[b]]);
                if (s.dim() != pair_dim) sub.pairwise_ok = false;
                edges[a].push_back(s);
                edges[b].push_back(std::move(s));
            }

        sub.node_sums_ok = true;
        for (size_t a = 0; a < pick.size(); ++a)
            if (sum_dim(edges[a]) != size_t(code.d) * code.beta) sub.node_sums_ok = false;

        sub.collectors_ok = true;
        detail::for_each_combination(pick.size(), code.k, [&](const std::vector<size_t>& inner) {
            std::vector<Subspace> chosen;
            for (size_t t : inner) chosen.push_back(spaces[pick[t]]);
            if (sum_dim(chosen) != code.B) sub.collectors_ok = false;
        });

        sub.pass = sub.pairwise_ok && sub.node_sums_ok && sub.collectors_ok;
        if (!sub.pass) report.pass = false;
        report.subsets.push_back(std::move(sub));
    });
    return report;
}

// ---- plain-text code description ------------------------------------------
//
// Header line:   n k d alpha beta B field=<spec>
// Then n lines, one per node, each holding alpha vectors of length B as
// alpha*B space-separated integers.

inline std::string format_code_text(const LinearStorageCode& code) {
    std::ostringstream out;
    out << code.n << ' ' << code.k << ' ' << code.d << ' ' << code.alpha << ' ' << code.beta << ' ' << code.B
        << " field=" << code.field->to_string() << '\n';
    for (const Matrix& m : code.node_vectors) {
        for (size_t r = 0; r < m.rows(); ++r)
            for (size_t c = 0; c < m.cols(); ++c) {
                if (r + c > 0) out << ' ';
                out << m.at(r, c);
            }
        out << '\n';
    }
    return out.str();
}

inline LinearStorageCode parse_code_text(std::istream& in) {
    LinearStorageCode code;
    std::string header;
    while (std::getline(in, header) && header.find_first_not_of(" \t\r") == std::string::npos) {
    }
    std::istringstream hs(header);
    uint64_t B = 0;
    std::string field_token;
    if (!(hs >> code.n >> code.k >> code.d >> code.alpha >> code.beta >> B >> field_token))
        throw ParamError("bad code description header");
    code.B = B;
    if (field_token.rfind("field=", 0) != 0) throw ParamError("header must end with field=<spec>");
    code.field = Field::parse(field_token.substr(6));
    if (code.n < 1 || code.alpha < 1 || code.B < 1) throw ParamError("bad code description header");

    for (uint32_t node = 0; node < code.n; ++node) {
        Matrix m(code.alpha, code.B, code.field);
        for (size_t r = 0; r < code.alpha; ++r)
            for (size_t c = 0; c < code.B; ++c) {
                uint64_t v;
                if (!(in >> v)) throw ParamError("truncated code description");
                m.at(r, c) = code.field->check(static_cast<uint32_t>(v));
            }
        code.node_vectors.push_back(std::move(m));
    }
    return code;
}

inline LinearStorageCode parse_code_text(const std::string& text) {
    std::istringstream in(text);
    return parse_code_text(in);
}

}  // namespace regen
