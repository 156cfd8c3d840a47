#pragma once

// Regenerating code at the minimum-storage point with d = k+1: B = 2k source
// symbols, two symbols per node. Node i holds (f.p_i, g.p_i + f.u_i) for a
// main vector p_i from an [n, k] MDS family and an arbitrary auxiliary
// vector u_i. Repair rebuilds the main component exactly; the auxiliary
// vector of the replacement node is allowed to differ and is tracked in the
// spec so later repairs and collectors keep working.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "regen/matrix.hpp"
#include "regen/types.hpp"

namespace regen {

struct MsrParams {
    uint32_t n = 0, k = 0, d = 0;
    uint32_t alpha = 2, beta = 1;
    size_t B = 0;  // = 2k
};

inline MsrParams derive_msr_params(uint32_t n, uint32_t k) {
    if (k < 1) throw ParamError("MSR needs k >= 1");
    if (n < k + 2) throw ParamError("MSR with d = k+1 needs n >= k+2");
    MsrParams p;
    p.n = n;
    p.k = k;
    p.d = k + 1;
    p.alpha = 2;
    p.beta = 1;
    p.B = 2 * size_t(k);
    return p;
}

namespace detail {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D4A2C62D02A8D5ULL;
    return z ^ (z >> 31);
}

// Auxiliary vector of one node as a pure function of (seed, node id), so
// adding nodes later never disturbs existing ones.
inline Vec aux_vector(uint64_t seed, uint32_t node, uint32_t k, uint32_t q) {
    uint64_t state = seed ^ (0xA5A5A5A5A5A5A5A5ULL * node);
    Vec u(k);
    for (uint32_t i = 0; i < k; ++i) u[i] = static_cast<uint32_t>(splitmix64(state) % q);
    return u;
}

}  // namespace detail

struct MsrCodeSpec {
    MsrParams params;
    FieldPtr field;
    Matrix main;  // n x k, row i-1 = p_i
    Matrix aux;   // n x k, row i-1 = u_i; rewritten as nodes are regenerated
    uint64_t aux_seed = 0;
    uint64_t aux_version = 0;

    Vec main_vector(uint32_t node) const { return main.row(node - 1); }
    Vec aux_vector(uint32_t node) const { return aux.row(node - 1); }
};

inline FieldPtr default_msr_field(uint32_t n) { return Field::with_order_at_least(n); }

inline MsrCodeSpec make_msr_spec(uint32_t n, uint32_t k, FieldPtr field = nullptr, uint64_t aux_seed = 0,
                                 bool zero_aux = false) {
    MsrParams params = derive_msr_params(n, k);
    if (!field) field = default_msr_field(n);
    if (field->order() < n) throw ParamError("MSR main vectors need field order q >= n");

    const Field& f = *field;
    Matrix main(n, k, field);
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t p = 1;
        for (uint32_t c = 0; c < k; ++c) {
            main.at(i, c) = p;
            p = f.mul(p, i);
        }
    }
    Matrix aux(n, k, field);
    if (!zero_aux)
        for (uint32_t i = 0; i < n; ++i) aux.set_row(i, detail::aux_vector(aux_seed, i + 1, k, f.order()));
    return {params, field, std::move(main), std::move(aux), aux_seed, 0};
}

// Extends the Vandermonde family with the next unused evaluation point.
// Returns the new node's id; requires a spare field element.
inline uint32_t add_node(MsrCodeSpec& spec) {
    const Field& f = *spec.field;
    uint32_t n = spec.params.n;
    if (f.order() < uint64_t(n) + 1) throw ParamError("field exhausted: cannot add a node beyond q points");
    Matrix main(n + 1, spec.params.k, spec.field);
    Matrix aux(n + 1, spec.params.k, spec.field);
    for (uint32_t i = 0; i < n; ++i) {
        main.set_row(i, spec.main.row(i));
        aux.set_row(i, spec.aux.row(i));
    }
    uint32_t p = 1;
    for (uint32_t c = 0; c < spec.params.k; ++c) {
        main.at(n, c) = p;
        p = f.mul(p, n);
    }
    aux.set_row(n, detail::aux_vector(spec.aux_seed, n + 1, spec.params.k, f.order()));
    spec.main = std::move(main);
    spec.aux = std::move(aux);
    spec.params.n = n + 1;
    return n + 1;
}

inline std::vector<NodeState> encode(const MsrCodeSpec& spec, const Vec& source) {
    const MsrParams& p = spec.params;
    if (source.size() != p.B) throw ParamError("source length must be 2k");
    const Field& f = *spec.field;
    Vec fpart(source.begin(), source.begin() + p.k);
    Vec gpart(source.begin() + p.k, source.end());
    std::vector<NodeState> nodes;
    nodes.reserve(p.n);
    for (uint32_t i = 1; i <= p.n; ++i) {
        Vec pi = spec.main_vector(i), ui = spec.aux_vector(i);
        uint32_t s1 = dot(f, fpart, pi);
        uint32_t s2 = f.add(dot(f, gpart, pi), dot(f, fpart, ui));
        nodes.push_back({i, true, {s1, s2}});
    }
    return nodes;
}

// Data collector for a fixed k-subset. The k x k Vandermonde block on the
// main vectors is inverted once; each chunk then costs two back-substitution
// products. The auxiliary contribution f.u_i is cancelled between them, so
// the result never depends on the u table's contents.
class MsrDecoder {
public:
    MsrDecoder(const MsrCodeSpec& spec, std::vector<uint32_t> node_ids)
        : spec_(&spec), node_ids_(std::move(node_ids)), inverse_(0, 0, spec.field) {
        const MsrParams& p = spec.params;
        if (node_ids_.size() != p.k) throw ParamError("reconstruction needs exactly k nodes");
        std::vector<bool> seen(p.n + 1, false);
        Matrix m(p.k, p.k, spec.field);
        for (size_t r = 0; r < node_ids_.size(); ++r) {
            uint32_t id = node_ids_[r];
            if (id < 1 || id > p.n) throw ParamError("node id out of range");
            if (seen[id]) throw ParamError("duplicate node id in reconstruction set");
            seen[id] = true;
            m.set_row(r, spec.main_vector(id));
        }
        inverse_ = invert(m);
    }

    const std::vector<uint32_t>& node_ids() const { return node_ids_; }

    Vec decode(const std::vector<Vec>& node_symbols) const {
        const MsrParams& p = spec_->params;
        const Field& f = *spec_->field;
        if (node_symbols.size() != node_ids_.size()) throw ParamError("symbol row count mismatch");
        Vec s1(p.k), s2(p.k);
        for (size_t i = 0; i < node_ids_.size(); ++i) {
            if (node_symbols[i].size() != 2) throw ParamError("MSR node must provide two symbols");
            s1[i] = node_symbols[i][0];
            s2[i] = node_symbols[i][1];
        }
        Vec fpart = mul_vec(inverse_, s1);
        for (size_t i = 0; i < node_ids_.size(); ++i)
            s2[i] = f.sub(s2[i], dot(f, fpart, spec_->aux_vector(node_ids_[i])));
        Vec gpart = mul_vec(inverse_, s2);
        fpart.insert(fpart.end(), gpart.begin(), gpart.end());
        return fpart;
    }

private:
    const MsrCodeSpec* spec_;
    std::vector<uint32_t> node_ids_;
    Matrix inverse_;
};

inline Vec reconstruct(const MsrCodeSpec& spec, const std::vector<NodeState>& nodes) {
    std::vector<uint32_t> ids;
    std::vector<Vec> symbols;
    for (const NodeState& n : nodes) {
        if (!n.alive) throw ParamError("reconstruction from a dead node");
        ids.push_back(n.node);
        symbols.push_back(n.symbols);
    }
    return MsrDecoder(spec, std::move(ids)).decode(symbols);
}

// Coefficients of one repair. Helper i combines its own two symbols into
// v_i = a_i * s1 + b_i * s2; the replacement node stores
// (sum delta_i v_i, sum rho_i v_i).
struct RegenCoefficients {
    std::vector<uint32_t> helpers;  // d helper ids, in the order used below
    Vec a, b, delta, rho;
};

inline RegenCoefficients regen_coefficients(const MsrCodeSpec& spec, uint32_t failed,
                                            std::vector<uint32_t> helpers) {
    const MsrParams& p = spec.params;
    const Field& f = *spec.field;
    if (failed < 1 || failed > p.n) throw ParamError("failed node id out of range");
    if (helpers.size() != p.d) throw ParamError("MSR regeneration needs exactly d = k+1 helpers");
    std::vector<bool> seen(p.n + 1, false);
    for (uint32_t h : helpers) {
        if (h < 1 || h > p.n || h == failed) throw ParamError("bad helper id");
        if (seen[h]) throw ParamError("duplicate helper id");
        seen[h] = true;
    }

    // k x d system whose columns are the helpers' main vectors
    Matrix cols(p.k, p.d, spec.field);
    for (size_t i = 0; i < helpers.size(); ++i) {
        Vec pi = spec.main_vector(helpers[i]);
        for (uint32_t r = 0; r < p.k; ++r) cols.at(r, i) = pi[r];
    }
    Vec target = spec.main_vector(failed);

    RegenCoefficients out;
    out.helpers = std::move(helpers);
    out.b.assign(p.d, 1);

    Solution rho = solve(cols, target);
    if (!rho.ok()) throw CorruptionError("main vectors cannot express the failed node's vector");
    out.rho = std::move(rho.particular);

    Matrix ns = nullspace(cols);
    if (ns.rows() != 1) throw CorruptionError("helper main vectors do not have a 1-dimensional kernel");
    out.delta = ns.row(0);
    for (uint32_t v : out.delta)
        if (v == 0) throw CorruptionError("kernel coefficient is zero; main vectors are not MDS");
    uint32_t scale = f.inv(out.delta[0]);
    for (uint32_t& v : out.delta) v = f.mul(v, scale);

    // sum delta_i a_i p_i = p_failed - sum delta_i b_i u_i, solved for
    // x_i = delta_i a_i, then a_i = x_i / delta_i
    Vec rhs = target;
    for (size_t i = 0; i < out.helpers.size(); ++i) {
        Vec ui = spec.aux_vector(out.helpers[i]);
        uint32_t w = f.mul(out.delta[i], out.b[i]);
        for (uint32_t r = 0; r < p.k; ++r) rhs[r] = f.sub(rhs[r], f.mul(w, ui[r]));
    }
    Solution ax = solve(cols, rhs);
    if (!ax.ok()) throw CorruptionError("no solution for helper combination coefficients");
    out.a.assign(p.d, 0);
    for (size_t i = 0; i < p.d; ++i) out.a[i] = f.div(ax.particular[i], out.delta[i]);
    return out;
}

// What helper i sends, computed from its own two stored symbols.
inline uint32_t helper_symbol(const Field& f, const RegenCoefficients& c, size_t i, uint32_t s1, uint32_t s2) {
    return f.add(f.mul(c.a[i], s1), f.mul(c.b[i], s2));
}

// Combines the d helper symbols into the replacement node's two symbols.
inline std::pair<uint32_t, uint32_t> regenerate_symbols(const Field& f, const RegenCoefficients& c,
                                                        const Vec& v) {
    if (v.size() != c.helpers.size()) throw ParamError("wrong helper symbol count");
    uint32_t s1 = 0, s2 = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        s1 = f.add(s1, f.mul(c.delta[i], v[i]));
        s2 = f.add(s2, f.mul(c.rho[i], v[i]));
    }
    return {s1, s2};
}

// The auxiliary vector the replacement node ends up with:
// u~ = sum rho_i (a_i p_i + b_i u_i). Recording it in the spec is what keeps
// future repairs and collectors consistent.
inline Vec regenerated_aux(const MsrCodeSpec& spec, const RegenCoefficients& c) {
    const Field& f = *spec.field;
    Vec u(spec.params.k, 0);
    for (size_t i = 0; i < c.helpers.size(); ++i) {
        Vec pi = spec.main_vector(c.helpers[i]);
        Vec ui = spec.aux_vector(c.helpers[i]);
        for (uint32_t r = 0; r < spec.params.k; ++r) {
            uint32_t term = f.add(f.mul(c.a[i], pi[r]), f.mul(c.b[i], ui[r]));
            u[r] = f.add(u[r], f.mul(c.rho[i], term));
        }
    }
    return u;
}

inline void apply_regeneration(MsrCodeSpec& spec, uint32_t failed, const RegenCoefficients& c) {
    spec.aux.set_row(failed - 1, regenerated_aux(spec, c));
    ++spec.aux_version;
}

struct HelperSymbol {
    uint32_t node = 0;
    uint32_t value = 0;
};

struct MsrRegenResult {
    NodeState node;
    Vec new_aux;
    RepairTranscript transcript;
};

// Single-chunk regeneration from helper contributions. Mutates the spec's
// auxiliary table for the failed node and bumps its version.
inline MsrRegenResult regenerate(MsrCodeSpec& spec, uint32_t failed, const std::vector<HelperSymbol>& from) {
    std::vector<uint32_t> ids;
    Vec values;
    for (const HelperSymbol& h : from) {
        ids.push_back(h.node);
        values.push_back(h.value);
    }
    RegenCoefficients c = regen_coefficients(spec, failed, ids);
    auto [s1, s2] = regenerate_symbols(*spec.field, c, values);
    Vec new_aux = regenerated_aux(spec, c);
    spec.aux.set_row(failed - 1, new_aux);
    ++spec.aux_version;

    MsrRegenResult r{{failed, true, {s1, s2}}, std::move(new_aux), {}};
    r.transcript.failed = failed;
    r.transcript.helpers = c.helpers;
    r.transcript.per_helper_symbols.assign(c.helpers.size(), 1);
    r.transcript.total_symbols = c.helpers.size();
    return r;
}

}  // namespace regen
