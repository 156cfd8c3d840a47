#pragma once

// Exact regenerating code at the minimum-bandwidth point with d = n-1.
// Symbols live on the edges of the complete graph K_n: column e of the
// incidence matrix is an edge {i, j}, both endpoints store the coded symbol
// f . v_e, and a failed node is rebuilt by pulling exactly the shared symbol
// from each of the other n-1 nodes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "regen/matrix.hpp"
#include "regen/mds.hpp"
#include "regen/types.hpp"

namespace regen {

struct MbrParams {
    uint32_t n = 0, k = 0, d = 0;
    uint32_t alpha = 0, beta = 1;
    size_t B = 0;      // source symbols per chunk
    size_t theta = 0;  // coded vectors = edges of K_n
};

inline MbrParams derive_mbr_params(uint32_t n, uint32_t k) {
    if (k < 1 || k >= n) throw ParamError("MBR needs 1 <= k < n");
    MbrParams p;
    p.n = n;
    p.k = k;
    p.d = n - 1;
    p.alpha = p.d;
    p.beta = 1;
    p.B = size_t(k) * p.d - size_t(k) * (k - 1) / 2;
    p.theta = size_t(p.d) * (p.d + 1) / 2;
    return p;
}

// 0/1 incidence structure of K_n. Columns enumerate edges {i, j} with i < j
// in lexicographic order: all edges of node 1 first, then the remaining
// edges of node 2, and so on.
struct IncidenceMatrix {
    uint32_t n = 0;
    std::vector<std::pair<uint32_t, uint32_t>> edges;  // column -> {i, j}, 1-based, i < j

    size_t theta() const { return edges.size(); }

    bool at(uint32_t node, size_t col) const {
        return edges[col].first == node || edges[col].second == node;
    }

    // Column of edge {a, b}.
    size_t column(uint32_t a, uint32_t b) const {
        if (a == b || a < 1 || b < 1 || a > n || b > n) throw ParamError("bad edge endpoints");
        uint32_t i = std::min(a, b), j = std::max(a, b);
        return size_t(i - 1) * n - size_t(i) * (i - 1) / 2 + (j - i - 1);
    }

    std::vector<size_t> node_columns(uint32_t node) const {
        std::vector<size_t> cols;
        for (size_t c = 0; c < edges.size(); ++c)
            if (at(node, c)) cols.push_back(c);
        return cols;
    }
};

inline IncidenceMatrix build_incidence(uint32_t n) {
    if (n < 2) throw ParamError("incidence matrix needs n >= 2");
    IncidenceMatrix v;
    v.n = n;
    for (uint32_t i = 1; i <= n; ++i)
        for (uint32_t j = i + 1; j <= n; ++j) v.edges.emplace_back(i, j);
    return v;
}

struct MbrCodeSpec {
    MbrParams params;
    FieldPtr field;
    IncidenceMatrix incidence;
    VectorFamily family;                           // theta vectors of length B
    std::vector<std::vector<size_t>> node_columns; // per node (1-based id - 1), ascending
};

// Smallest field the construction supports for these parameters: GF(2) when
// the identity or single-parity-check family applies (n-k = 1 or 2), else
// the smallest supported field with q >= theta.
inline FieldPtr default_mbr_field(const MbrParams& p) {
    if (p.theta == p.B || p.theta == p.B + 1) return Field::prime(2);
    return Field::with_order_at_least(static_cast<uint32_t>(p.theta));
}

inline MbrCodeSpec make_mbr_spec(uint32_t n, uint32_t k, FieldPtr field = nullptr) {
    MbrParams params = derive_mbr_params(n, k);
    if (!field) field = default_mbr_field(params);
    MbrCodeSpec spec{params, field, build_incidence(n), make_mds(params.theta, params.B, field), {}};
    spec.node_columns.reserve(n);
    for (uint32_t j = 1; j <= n; ++j) spec.node_columns.push_back(spec.incidence.node_columns(j));
    return spec;
}

inline std::vector<NodeState> encode(const MbrCodeSpec& spec, const Vec& source) {
    if (source.size() != spec.params.B) throw ParamError("source length must be B");
    const Field& f = *spec.field;
    std::vector<uint32_t> symbols(spec.params.theta);
    for (size_t e = 0; e < spec.params.theta; ++e) symbols[e] = dot(f, source, spec.family.vector(e));
    std::vector<NodeState> nodes;
    nodes.reserve(spec.params.n);
    for (uint32_t j = 1; j <= spec.params.n; ++j) {
        NodeState st{j, true, {}};
        st.symbols.reserve(spec.params.alpha);
        for (size_t c : spec.node_columns[j - 1]) st.symbols.push_back(symbols[c]);
        nodes.push_back(std::move(st));
    }
    return nodes;
}

// Reusable data-collector decoder for a fixed k-subset: dedupes the shared
// edge symbols and applies the precomputed inverse of the B x B vector
// matrix, so decoding many chunks costs one matrix-vector product each.
class MbrDecoder {
public:
    MbrDecoder(const MbrCodeSpec& spec, std::vector<uint32_t> node_ids)
        : spec_(&spec), node_ids_(std::move(node_ids)), inverse_(0, 0, spec.field) {
        const MbrParams& p = spec.params;
        if (node_ids_.size() != p.k) throw ParamError("reconstruction needs exactly k nodes");
        std::vector<bool> seen(p.n + 1, false);
        for (uint32_t id : node_ids_) {
            if (id < 1 || id > p.n) throw ParamError("node id out of range");
            if (seen[id]) throw ParamError("duplicate node id in reconstruction set");
            seen[id] = true;
        }

        std::map<size_t, std::pair<size_t, size_t>> primary;  // col -> (node idx, symbol pos)
        for (size_t i = 0; i < node_ids_.size(); ++i) {
            const auto& cols = spec.node_columns[node_ids_[i] - 1];
            for (size_t pos = 0; pos < cols.size(); ++pos) {
                auto [it, inserted] = primary.try_emplace(cols[pos], i, pos);
                if (!inserted) duplicates_.push_back({it->second, {i, pos}});
            }
        }
        if (primary.size() != p.B) throw CorruptionError("distinct edge count does not match B");

        Matrix m(p.B, p.B, spec.field);
        size_t r = 0;
        for (const auto& [col, src] : primary) {
            for (size_t c = 0; c < p.B; ++c) m.at(r, c) = spec.family.vectors.at(col, c);
            sources_.push_back(src);
            ++r;
        }
        inverse_ = invert(m);
    }

    const std::vector<uint32_t>& node_ids() const { return node_ids_; }

    // node_symbols[i] holds the alpha symbols of node_ids()[i].
    Vec decode(const std::vector<Vec>& node_symbols) const {
        const MbrParams& p = spec_->params;
        if (node_symbols.size() != node_ids_.size()) throw ParamError("symbol row count mismatch");
        for (const Vec& s : node_symbols)
            if (s.size() != p.alpha) throw ParamError("node must provide alpha symbols");
        for (const auto& [a, b] : duplicates_)
            if (node_symbols[a.first][a.second] != node_symbols[b.first][b.second])
                throw CorruptionError("shared edge symbols disagree between nodes");
        Vec rhs(p.B);
        for (size_t r = 0; r < p.B; ++r) rhs[r] = node_symbols[sources_[r].first][sources_[r].second];
        return mul_vec(inverse_, rhs);
    }

private:
    const MbrCodeSpec* spec_;
    std::vector<uint32_t> node_ids_;
    std::vector<std::pair<size_t, size_t>> sources_;  // row -> (node idx, symbol pos)
    std::vector<std::pair<std::pair<size_t, size_t>, std::pair<size_t, size_t>>> duplicates_;
    Matrix inverse_;
};

inline Vec reconstruct(const MbrCodeSpec& spec, const std::vector<NodeState>& nodes) {
    std::vector<uint32_t> ids;
    std::vector<Vec> symbols;
    for (const NodeState& n : nodes) {
        if (!n.alive) throw ParamError("reconstruction from a dead node");
        ids.push_back(n.node);
        symbols.push_back(n.symbols);
    }
    return MbrDecoder(spec, std::move(ids)).decode(symbols);
}

// Position map for rebuilding one node: entry i says which helper holds the
// failed node's i-th symbol and at which offset. The map depends only on the
// incidence structure, so one plan serves every chunk.
struct MbrRepairPlan {
    uint32_t failed = 0;
    std::vector<uint32_t> helpers;                     // ascending, the other n-1 ids
    std::vector<std::pair<uint32_t, size_t>> sources;  // symbol i <- (helper id, offset in helper)
};

inline MbrRepairPlan make_mbr_repair_plan(const MbrCodeSpec& spec, uint32_t failed) {
    const MbrParams& p = spec.params;
    if (failed < 1 || failed > p.n) throw ParamError("failed node id out of range");
    MbrRepairPlan plan;
    plan.failed = failed;
    const auto& own_cols = spec.node_columns[failed - 1];
    plan.sources.resize(own_cols.size());
    for (uint32_t j = 1; j <= p.n; ++j) {
        if (j == failed) continue;
        size_t col = spec.incidence.column(failed, j);
        const auto& hcols = spec.node_columns[j - 1];
        size_t pos = std::lower_bound(hcols.begin(), hcols.end(), col) - hcols.begin();
        size_t own = std::lower_bound(own_cols.begin(), own_cols.end(), col) - own_cols.begin();
        plan.sources[own] = {j, pos};
        plan.helpers.push_back(j);
    }
    return plan;
}

// Exact regeneration: helper j hands over the one symbol it shares with the
// failed node. The rebuilt state is identical to what the node stored.
inline std::pair<NodeState, RepairTranscript> regenerate(const MbrCodeSpec& spec, uint32_t failed,
                                                         const std::vector<NodeState>& helpers) {
    const MbrParams& p = spec.params;
    if (helpers.size() != size_t(p.n) - 1) throw ParamError("MBR regeneration needs all n-1 helpers");
    MbrRepairPlan plan = make_mbr_repair_plan(spec, failed);

    std::vector<const NodeState*> by_id(p.n + 1, nullptr);
    for (const NodeState& h : helpers) {
        if (h.node < 1 || h.node > p.n || h.node == failed) throw ParamError("bad helper id");
        if (!h.alive) throw ParamError("dead helper cannot assist regeneration");
        if (h.symbols.size() != p.alpha) throw ParamError("helper must hold alpha symbols");
        if (by_id[h.node]) throw ParamError("duplicate helper id");
        by_id[h.node] = &h;
    }
    for (uint32_t j : plan.helpers)
        if (!by_id[j]) throw ParamError("missing helper node");

    NodeState fresh{failed, true, Vec(p.alpha)};
    for (size_t i = 0; i < plan.sources.size(); ++i)
        fresh.symbols[i] = by_id[plan.sources[i].first]->symbols[plan.sources[i].second];

    RepairTranscript t;
    t.failed = failed;
    t.helpers = plan.helpers;
    t.per_helper_symbols.assign(plan.helpers.size(), 1);
    t.total_symbols = plan.helpers.size();
    return {std::move(fresh), std::move(t)};
}

// Change of basis making the chosen k nodes systematic: the B distinct
// vectors those nodes store become the standard basis (in ascending column
// order), so a collector reading them gets the source symbols uncoded.
// Every other subset keeps the reconstruction property because all vectors
// are transformed by the same invertible map.
inline MbrCodeSpec systematize(const MbrCodeSpec& spec, const std::vector<uint32_t>& nodes) {
    const MbrParams& p = spec.params;
    if (nodes.size() != p.k) throw ParamError("systematize needs exactly k nodes");
    std::vector<bool> seen(p.n + 1, false);
    std::vector<size_t> union_cols;
    for (uint32_t id : nodes) {
        if (id < 1 || id > p.n) throw ParamError("node id out of range");
        if (seen[id]) throw ParamError("duplicate node id");
        seen[id] = true;
        const auto& cols = spec.node_columns[id - 1];
        union_cols.insert(union_cols.end(), cols.begin(), cols.end());
    }
    std::sort(union_cols.begin(), union_cols.end());
    union_cols.erase(std::unique(union_cols.begin(), union_cols.end()), union_cols.end());
    if (union_cols.size() != p.B) throw CorruptionError("chosen nodes do not cover B distinct vectors");

    Matrix m(p.B, p.B, spec.field);
    for (size_t r = 0; r < p.B; ++r)
        for (size_t c = 0; c < p.B; ++c) m.at(r, c) = spec.family.vectors.at(union_cols[r], c);
    Matrix t = invert(m.transpose());  // t * v maps the r-th union vector to e_r

    Matrix transformed(p.theta, p.B, spec.field);
    for (size_t e = 0; e < p.theta; ++e) {
        Vec v = mul_vec(t, spec.family.vector(e));
        transformed.set_row(e, v);
    }
    if (transformed == spec.family.vectors) return spec;  // already systematic on these nodes

    MbrCodeSpec out = spec;
    out.family.vectors = std::move(transformed);
    out.family.tag = FamilyTag::Custom;
    return out;
}

}  // namespace regen
