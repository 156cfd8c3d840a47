#pragma once

// Deterministic storage-cluster simulator: file chunking, node lifecycle,
// failure injection, repair orchestration, bandwidth accounting, and
// data-collector reads, for both code families.
//
// On disk a cluster is one directory per node plus manifest.txt:
//
//   <cluster>/manifest.txt            key=value lines
//   <cluster>/node_<id>/chunk_<c>.sym alpha packed symbols per chunk
//
// A node whose directory is missing is dead. Everything is deterministic
// given the ingest seed; the event log records every state change.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "regen/mbr.hpp"
#include "regen/msr.hpp"
#include "regen/packing.hpp"

namespace regen {

struct Manifest {
    uint32_t version = 1;
    std::string code;  // "mbr" | "msr"
    uint32_t n = 0, k = 0, d = 0, alpha = 0, beta = 0;
    size_t B = 0;
    size_t theta = 0;  // 0 for MSR, which has no edge-vector count
    std::string field;
    uint64_t length = 0;  // original payload bytes
    size_t chunks = 0;
    size_t padding = 0;  // zero symbols appended to fill the last chunk
    std::string construction;
    uint64_t aux_seed = 0;     // MSR only
    uint64_t aux_version = 0;  // MSR only
    std::vector<Vec> aux;      // MSR only: current u_i rows
    std::vector<Vec> vectors;  // MBR custom construction only: raw v_i rows

    std::string to_text() const {
        std::ostringstream out;
        out << "version=" << version << '\n';
        out << "code=" << code << '\n';
        out << "n=" << n << '\n' << "k=" << k << '\n' << "d=" << d << '\n';
        out << "alpha=" << alpha << '\n' << "beta=" << beta << '\n';
        out << "B=" << B << '\n' << "theta=" << theta << '\n';
        out << "field=" << field << '\n';
        out << "length=" << length << '\n';
        out << "chunks=" << chunks << '\n' << "padding=" << padding << '\n';
        out << "construction=" << construction << '\n';
        if (code == "msr") {
            out << "aux_seed=" << aux_seed << '\n';
            out << "aux_version=" << aux_version << '\n';
            for (size_t i = 0; i < aux.size(); ++i) {
                out << "aux_" << (i + 1) << '=';
                for (size_t c = 0; c < aux[i].size(); ++c) out << (c ? " " : "") << aux[i][c];
                out << '\n';
            }
        }
        for (size_t i = 0; i < vectors.size(); ++i) {
            out << "vec_" << (i + 1) << '=';
            for (size_t c = 0; c < vectors[i].size(); ++c) out << (c ? " " : "") << vectors[i][c];
            out << '\n';
        }
        return out.str();
    }

    static Manifest parse_text(const std::string& text) {
        std::map<std::string, std::string> kv;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw CorruptionError("manifest line without '=': " + line);
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
        auto need = [&](const std::string& key) -> const std::string& {
            auto it = kv.find(key);
            if (it == kv.end()) throw CorruptionError("manifest missing key: " + key);
            return it->second;
        };
        auto num = [&](const std::string& key) -> uint64_t {
            try {
                return std::stoull(need(key));
            } catch (const std::logic_error&) {
                throw CorruptionError("manifest key is not a number: " + key);
            }
        };
        auto vec_of = [&](const std::string& value) {
            Vec v;
            std::istringstream vs(value);
            uint64_t x;
            while (vs >> x) v.push_back(static_cast<uint32_t>(x));
            return v;
        };

        Manifest m;
        m.version = static_cast<uint32_t>(num("version"));
        if (m.version != 1) throw CorruptionError("unsupported manifest version");
        m.code = need("code");
        m.n = static_cast<uint32_t>(num("n"));
        m.k = static_cast<uint32_t>(num("k"));
        m.d = static_cast<uint32_t>(num("d"));
        m.alpha = static_cast<uint32_t>(num("alpha"));
        m.beta = static_cast<uint32_t>(num("beta"));
        m.B = num("B");
        m.theta = num("theta");
        m.field = need("field");
        m.length = num("length");
        m.chunks = num("chunks");
        m.padding = num("padding");
        m.construction = need("construction");
        if (m.code == "msr") {
            m.aux_seed = num("aux_seed");
            m.aux_version = num("aux_version");
            for (uint32_t i = 1; i <= m.n; ++i) m.aux.push_back(vec_of(need("aux_" + std::to_string(i))));
        }
        if (m.construction == "custom")
            for (size_t i = 1; i <= m.theta; ++i) m.vectors.push_back(vec_of(need("vec_" + std::to_string(i))));
        return m;
    }
};

class Cluster {
public:
    static Cluster ingest(const std::vector<uint8_t>& bytes, const std::string& code, uint32_t n, uint32_t k,
                          FieldPtr field = nullptr, uint64_t seed = 0) {
        if (bytes.empty()) throw ParamError("refusing to ingest an empty payload");
        Cluster c;
        c.seed_ = seed;
        c.rng_.seed(seed);
        if (code == "mbr") {
            c.spec_ = make_mbr_spec(n, k, std::move(field));
        } else if (code == "msr") {
            c.spec_ = make_msr_spec(n, k, std::move(field), seed);
        } else {
            throw ParamError("code must be mbr or msr");
        }
        c.length_ = bytes.size();

        const Field& f = c.field();
        Vec symbols = pack_bytes(bytes, f);
        size_t B = c.is_mbr() ? c.mbr().params.B : c.msr().params.B;
        c.chunks_ = (symbols.size() + B - 1) / B;
        c.padding_ = c.chunks_ * B - symbols.size();
        symbols.resize(c.chunks_ * B, 0);

        const uint32_t alpha = c.alpha();
        c.nodes_.assign(n, NodeStorage{});
        for (auto& ns : c.nodes_) ns.symbols.assign(c.chunks_ * alpha, 0);

        if (c.is_mbr()) {
            const MbrCodeSpec& spec = c.mbr();
            // node/offset hit by each edge symbol, precomputed once
            std::vector<std::pair<std::pair<uint32_t, size_t>, std::pair<uint32_t, size_t>>> fanout;
            for (size_t e = 0; e < spec.params.theta; ++e) {
                auto [a, b] = spec.incidence.edges[e];
                auto offset_in = [&](uint32_t node) {
                    const auto& cols = spec.node_columns[node - 1];
                    return size_t(std::lower_bound(cols.begin(), cols.end(), e) - cols.begin());
                };
                fanout.push_back({{a, offset_in(a)}, {b, offset_in(b)}});
            }
            for (size_t ci = 0; ci < c.chunks_; ++ci) {
                const uint32_t* src = symbols.data() + ci * B;
                for (size_t e = 0; e < spec.params.theta; ++e) {
                    uint32_t acc = 0;
                    for (size_t t = 0; t < B; ++t) acc = f.add(acc, f.mul(src[t], spec.family.vectors.at(e, t)));
                    const auto& [fa, fb] = fanout[e];
                    c.nodes_[fa.first - 1].symbols[ci * alpha + fa.second] = acc;
                    c.nodes_[fb.first - 1].symbols[ci * alpha + fb.second] = acc;
                }
            }
        } else {
            const MsrCodeSpec& spec = c.msr();
            const uint32_t k2 = spec.params.k;
            for (size_t ci = 0; ci < c.chunks_; ++ci) {
                const uint32_t* fp = symbols.data() + ci * B;
                const uint32_t* gp = fp + k2;
                for (uint32_t i = 0; i < n; ++i) {
                    uint32_t s1 = 0, s2 = 0;
                    for (uint32_t t = 0; t < k2; ++t) {
                        uint32_t p = spec.main.at(i, t);
                        s1 = f.add(s1, f.mul(fp[t], p));
                        s2 = f.add(s2, f.add(f.mul(gp[t], p), f.mul(fp[t], spec.aux.at(i, t))));
                    }
                    c.nodes_[i].symbols[ci * 2] = s1;
                    c.nodes_[i].symbols[ci * 2 + 1] = s2;
                }
            }
        }
        c.log("ingest code=" + code + " bytes=" + std::to_string(c.length_) +
              " chunks=" + std::to_string(c.chunks_));
        return c;
    }

    bool is_mbr() const { return std::holds_alternative<MbrCodeSpec>(spec_); }
    const MbrCodeSpec& mbr() const { return std::get<MbrCodeSpec>(spec_); }
    const MsrCodeSpec& msr() const { return std::get<MsrCodeSpec>(spec_); }

    uint32_t n() const { return is_mbr() ? mbr().params.n : msr().params.n; }
    uint32_t k() const { return is_mbr() ? mbr().params.k : msr().params.k; }
    uint32_t d() const { return is_mbr() ? mbr().params.d : msr().params.d; }
    uint32_t alpha() const { return is_mbr() ? mbr().params.alpha : msr().params.alpha; }
    const Field& field() const { return is_mbr() ? *mbr().field : *msr().field; }
    FieldPtr field_ptr() const { return is_mbr() ? mbr().field : msr().field; }
    size_t chunk_count() const { return chunks_; }
    uint64_t length() const { return length_; }

    bool alive(uint32_t node) const {
        check_node(node);
        return nodes_[node - 1].alive;
    }

    Vec node_symbols(uint32_t node, size_t chunk) const {
        check_node(node);
        if (chunk >= chunks_) throw ParamError("chunk index out of range");
        const Vec& s = nodes_[node - 1].symbols;
        return Vec(s.begin() + chunk * alpha(), s.begin() + (chunk + 1) * alpha());
    }

    std::vector<uint32_t> live_nodes() const {
        std::vector<uint32_t> out;
        for (uint32_t j = 1; j <= n(); ++j)
            if (nodes_[j - 1].alive) out.push_back(j);
        return out;
    }

    const std::vector<std::string>& event_log() const { return log_; }

    Manifest manifest() const {
        Manifest m;
        m.code = is_mbr() ? "mbr" : "msr";
        if (is_mbr()) {
            const MbrParams& p = mbr().params;
            m.n = p.n; m.k = p.k; m.d = p.d; m.alpha = p.alpha; m.beta = p.beta;
            m.B = p.B; m.theta = p.theta;
            m.construction = to_string(mbr().family.tag);
            if (mbr().family.tag == FamilyTag::Custom)
                for (size_t e = 0; e < p.theta; ++e) m.vectors.push_back(mbr().family.vector(e));
        } else {
            const MsrParams& p = msr().params;
            m.n = p.n; m.k = p.k; m.d = p.d; m.alpha = p.alpha; m.beta = p.beta;
            m.B = p.B; m.theta = 0;
            m.construction = "vandermonde";
            m.aux_seed = msr().aux_seed;
            m.aux_version = msr().aux_version;
            for (uint32_t i = 1; i <= p.n; ++i) m.aux.push_back(msr().aux_vector(i));
        }
        m.field = field().to_string();
        m.length = length_;
        m.chunks = chunks_;
        m.padding = padding_;
        return m;
    }

    void fail(uint32_t node) {
        check_node(node);
        if (!nodes_[node - 1].alive) throw ParamError("node " + std::to_string(node) + " is already dead");
        nodes_[node - 1].alive = false;
        nodes_[node - 1].symbols.assign(nodes_[node - 1].symbols.size(), 0);  // erasure
        log("fail node=" + std::to_string(node));
    }

    uint32_t fail_random() {
        std::vector<uint32_t> live = live_nodes();
        if (live.empty()) throw ParamError("no live node left to fail");
        uint32_t victim = live[rng_() % live.size()];
        fail(victim);
        return victim;
    }

    // Rebuilds `node` from live helpers and marks it live. Helpers may be
    // given explicitly; the default policy picks the lexicographically
    // smallest eligible set. Throws DataLossError when fewer than k other
    // nodes survive and RepairImpossibleError when fewer than d do.
    RepairTranscript repair(uint32_t node, std::vector<uint32_t> helpers = {}) {
        check_node(node);
        std::vector<uint32_t> live_others;
        for (uint32_t j = 1; j <= n(); ++j)
            if (j != node && nodes_[j - 1].alive) live_others.push_back(j);
        if (live_others.size() < k())
            throw DataLossError("fewer than k nodes survive; data is permanently lost");
        if (live_others.size() < d())
            throw RepairImpossibleError("repair needs d = " + std::to_string(d()) +
                                        " live helpers, only " + std::to_string(live_others.size()) +
                                        " available");
        if (helpers.empty()) {
            helpers.assign(live_others.begin(), live_others.begin() + d());
        } else {
            if (helpers.size() != d()) throw ParamError("helper set must have exactly d nodes");
            std::vector<bool> seen(n() + 1, false);
            for (uint32_t h : helpers) {
                check_node(h);
                if (h == node) throw ParamError("failed node cannot help itself");
                if (seen[h]) throw ParamError("duplicate helper id");
                seen[h] = true;
                if (!nodes_[h - 1].alive) throw ParamError("helper " + std::to_string(h) + " is not live");
            }
        }

        RepairTranscript t;
        const uint32_t a = alpha();
        Vec& dst = nodes_[node - 1].symbols;
        dst.assign(chunks_ * a, 0);
        if (is_mbr()) {
            MbrRepairPlan plan = make_mbr_repair_plan(mbr(), node);
            for (size_t i = 0; i < plan.sources.size(); ++i) {
                const Vec& src = nodes_[plan.sources[i].first - 1].symbols;
                const size_t off = plan.sources[i].second;
                for (size_t ci = 0; ci < chunks_; ++ci) dst[ci * a + i] = src[ci * a + off];
            }
            t.failed = node;
            t.helpers = plan.helpers;
        } else {
            MsrCodeSpec& spec = std::get<MsrCodeSpec>(spec_);
            RegenCoefficients coeffs = regen_coefficients(spec, node, helpers);
            const Field& f = *spec.field;
            const size_t hcount = coeffs.helpers.size();
            Vec v(hcount);
            for (size_t ci = 0; ci < chunks_; ++ci) {
                for (size_t i = 0; i < hcount; ++i) {
                    const Vec& hs = nodes_[coeffs.helpers[i] - 1].symbols;
                    v[i] = helper_symbol(f, coeffs, i, hs[ci * 2], hs[ci * 2 + 1]);
                }
                auto [s1, s2] = regenerate_symbols(f, coeffs, v);
                dst[ci * 2] = s1;
                dst[ci * 2 + 1] = s2;
            }
            apply_regeneration(spec, node, coeffs);
            t.failed = node;
            t.helpers = coeffs.helpers;
        }
        nodes_[node - 1].alive = true;
        t.per_helper_symbols.assign(t.helpers.size(), chunks_);
        t.total_symbols = t.helpers.size() * chunks_;
        t.symbol_bytes = storage_symbol_bytes(field());

        std::string h;
        for (uint32_t id : t.helpers) h += (h.empty() ? "" : ",") + std::to_string(id);
        log("repair node=" + std::to_string(node) + " helpers=" + h +
            " symbols=" + std::to_string(t.total_symbols));
        return t;
    }

    // Reconstructs the original payload from k live nodes (the k smallest
    // live ids when none are named).
    std::vector<uint8_t> collect(std::vector<uint32_t> nodes = {}) const {
        if (nodes.empty()) {
            std::vector<uint32_t> live = live_nodes();
            if (live.size() < k())
                throw DataLossError("fewer than k nodes survive; data is permanently lost");
            nodes.assign(live.begin(), live.begin() + k());
        } else {
            for (uint32_t id : nodes) {
                check_node(id);
                if (!nodes_[id - 1].alive) throw ParamError("node " + std::to_string(id) + " is not live");
            }
        }

        const size_t B = is_mbr() ? mbr().params.B : msr().params.B;
        const uint32_t a = alpha();
        Vec symbols;
        symbols.reserve(chunks_ * B - padding_);
        std::vector<Vec> rows(nodes.size(), Vec(a));
        auto fill_rows = [&](size_t ci) {
            for (size_t i = 0; i < nodes.size(); ++i) {
                const Vec& s = nodes_[nodes[i] - 1].symbols;
                rows[i].assign(s.begin() + ci * a, s.begin() + (ci + 1) * a);
            }
        };
        auto append = [&](const Vec& chunk, size_t ci) {
            size_t take = (ci + 1 == chunks_) ? B - padding_ : B;
            symbols.insert(symbols.end(), chunk.begin(), chunk.begin() + take);
        };
        if (is_mbr()) {
            MbrDecoder dec(mbr(), nodes);
            for (size_t ci = 0; ci < chunks_; ++ci) {
                fill_rows(ci);
                append(dec.decode(rows), ci);
            }
        } else {
            MsrDecoder dec(msr(), nodes);
            for (size_t ci = 0; ci < chunks_; ++ci) {
                fill_rows(ci);
                append(dec.decode(rows), ci);
            }
        }
        return unpack_symbols(symbols, field(), length_);
    }

    std::vector<uint8_t> collect_random() {
        std::vector<uint32_t> live = live_nodes();
        if (live.size() < k()) throw DataLossError("fewer than k nodes survive; data is permanently lost");
        std::vector<uint32_t> pick;
        for (uint32_t i = 0; i < k(); ++i) {
            size_t idx = rng_() % live.size();
            pick.push_back(live[idx]);
            live.erase(live.begin() + idx);
        }
        std::sort(pick.begin(), pick.end());
        std::string ids;
        for (uint32_t id : pick) ids += (ids.empty() ? "" : ",") + std::to_string(id);
        log("collect nodes=" + ids);
        return collect(pick);
    }

    // Rewrites one node's directory to match in-memory state (used by repair,
    // which must not touch the other nodes' files).
    void save_node(const std::filesystem::path& dir, uint32_t node) const {
        namespace fs = std::filesystem;
        check_node(node);
        std::error_code ec;
        fs::path nd = dir / ("node_" + std::to_string(node));
        fs::remove_all(nd, ec);
        if (!nodes_[node - 1].alive) return;
        fs::create_directories(nd, ec);
        if (ec) throw IoError("cannot create " + nd.string() + ": " + ec.message());
        for (size_t ci = 0; ci < chunks_; ++ci) {
            auto bytes = symbols_to_file_bytes(node_symbols(node, ci), field());
            write_file(nd / ("chunk_" + std::to_string(ci) + ".sym"), std::string(bytes.begin(), bytes.end()));
        }
    }

    void save_manifest(const std::filesystem::path& dir) const {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
        write_file(dir / "manifest.txt", manifest().to_text());
    }

    void save(const std::filesystem::path& dir) const {
        save_manifest(dir);
        for (uint32_t j = 1; j <= n(); ++j) save_node(dir, j);
    }

    static Cluster load(const std::filesystem::path& dir) {
        namespace fs = std::filesystem;
        Manifest m = Manifest::parse_text(read_file(dir / "manifest.txt"));
        Cluster c;
        c.seed_ = m.aux_seed;
        c.rng_.seed(c.seed_);
        c.length_ = m.length;
        c.chunks_ = m.chunks;
        c.padding_ = m.padding;

        FieldPtr field = Field::parse(m.field);
        if (m.code == "mbr") {
            MbrCodeSpec spec = make_mbr_spec(m.n, m.k, field);
            if (m.construction == "custom") {
                spec.family.vectors = Matrix::from_rows(m.vectors, spec.params.B, field);
                spec.family.tag = FamilyTag::Custom;
            } else if (m.construction != to_string(spec.family.tag)) {
                throw CorruptionError("manifest construction tag does not match the field and parameters");
            }
            if (m.d != spec.params.d || m.alpha != spec.params.alpha || m.beta != spec.params.beta ||
                m.B != spec.params.B || m.theta != spec.params.theta)
                throw CorruptionError("manifest parameters are inconsistent");
            c.spec_ = std::move(spec);
        } else if (m.code == "msr") {
            MsrCodeSpec spec = make_msr_spec(m.n, m.k, field, m.aux_seed);
            if (m.d != spec.params.d || m.alpha != spec.params.alpha || m.beta != spec.params.beta ||
                m.B != spec.params.B || m.theta != 0)
                throw CorruptionError("manifest parameters are inconsistent");
            if (m.aux.size() != m.n) throw CorruptionError("manifest auxiliary table is incomplete");
            for (uint32_t i = 0; i < m.n; ++i) {
                if (m.aux[i].size() != m.k) throw CorruptionError("manifest auxiliary vector has wrong length");
                for (uint32_t v : m.aux[i])
                    if (v >= field->order()) throw CorruptionError("manifest auxiliary value exceeds field order");
                spec.aux.set_row(i, m.aux[i]);
            }
            spec.aux_version = m.aux_version;
            c.spec_ = std::move(spec);
        } else {
            throw CorruptionError("manifest code must be mbr or msr");
        }

        size_t payload = payload_symbol_count(c.field(), m.length);
        if (m.chunks * (c.is_mbr() ? c.mbr().params.B : c.msr().params.B) != payload + m.padding)
            throw CorruptionError("manifest length, chunks and padding disagree");

        const uint32_t alpha = c.alpha();
        c.nodes_.assign(m.n, NodeStorage{});
        for (uint32_t j = 1; j <= m.n; ++j) {
            c.nodes_[j - 1].symbols.assign(m.chunks * alpha, 0);
            fs::path nd = dir / ("node_" + std::to_string(j));
            if (!fs::exists(nd)) {
                c.nodes_[j - 1].alive = false;
                continue;
            }
            for (size_t ci = 0; ci < m.chunks; ++ci) {
                std::string raw = read_file(nd / ("chunk_" + std::to_string(ci) + ".sym"));
                std::vector<uint8_t> bytes(raw.begin(), raw.end());
                Vec syms = file_bytes_to_symbols(bytes, c.field(), alpha);
                std::copy(syms.begin(), syms.end(), c.nodes_[j - 1].symbols.begin() + ci * alpha);
            }
        }
        c.log("load dir=" + dir.string());
        return c;
    }

private:
    struct NodeStorage {
        bool alive = true;
        Vec symbols;  // flat, chunk c occupies [c*alpha, (c+1)*alpha)
    };

    Cluster() = default;

    void check_node(uint32_t node) const {
        if (node < 1 || node > n()) throw ParamError("node id out of range");
    }

    void log(std::string entry) { log_.push_back(std::move(entry)); }

    static void write_file(const std::filesystem::path& path, const std::string& data) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + path.string() + " for writing");
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw IoError("write failed: " + path.string());
    }

    static std::string read_file(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    std::variant<MbrCodeSpec, MsrCodeSpec> spec_{MbrCodeSpec{}};
    std::vector<NodeStorage> nodes_;
    uint64_t length_ = 0;
    size_t chunks_ = 0, padding_ = 0;
    uint64_t seed_ = 0;
    std::mt19937_64 rng_;
    std::vector<std::string> log_;
};

// ---- simulation trials -----------------------------------------------------

struct TrialConfig {
    std::string code = "mbr";
    uint32_t n = 5, k = 3;
    std::string field;  // optional override, e.g. "gf2:8"
    uint32_t cycles = 100;
    uint64_t seed = 0;
    uint32_t burst = 1;  // simultaneous failures per cycle, <= n - d
    size_t payload_bytes = 64;
};

struct RepairRow {
    uint32_t cycle = 0;
    uint32_t failed = 0;
    std::vector<uint32_t> helpers;
    size_t symbols = 0;
};

struct TrialResult {
    TrialConfig config;
    uint32_t d = 0, alpha = 0, beta = 0;
    size_t B = 0, theta = 0;
    std::string field;
    uint32_t q = 0;
    size_t chunks = 0;
    size_t repairs = 0;
    size_t symbols_moved_total = 0;
    size_t collect_checks = 0, collect_successes = 0;
    std::vector<RepairRow> rows;

    std::string metrics_text() const {
        std::ostringstream out;
        out << "code=" << config.code << '\n';
        out << "n=" << config.n << '\n' << "k=" << config.k << '\n' << "d=" << d << '\n';
        out << "alpha=" << alpha << '\n' << "beta=" << beta << '\n';
        out << "B=" << B << '\n' << "theta=" << theta << '\n';
        out << "field=" << field << '\n' << "q=" << q << '\n';
        out << "cycles=" << config.cycles << '\n' << "burst=" << config.burst << '\n';
        out << "seed=" << config.seed << '\n';
        out << "payload_bytes=" << config.payload_bytes << '\n';
        out << "chunks=" << chunks << '\n';
        out << "repairs=" << repairs << '\n';
        out << "symbols_moved_total=" << symbols_moved_total << '\n';
        size_t per = (repairs && chunks) ? symbols_moved_total / repairs / chunks : 0;
        out << "symbols_per_repair_per_chunk=" << per << '\n';
        out << "theoretical_repair_symbols_per_chunk=" << size_t(d) * beta << '\n';
        out << "naive_repair_symbols_per_chunk=" << size_t(alpha) * config.k << '\n';
        out << "collect_checks=" << collect_checks << '\n';
        out << "collect_successes=" << collect_successes << '\n';
        return out.str();
    }

    std::string csv_text() const {
        std::ostringstream out;
        out << "cycle,failed,helpers,symbols\n";
        for (const RepairRow& r : rows) {
            out << r.cycle << ',' << r.failed << ',';
            for (size_t i = 0; i < r.helpers.size(); ++i) out << (i ? "|" : "") << r.helpers[i];
            out << ',' << r.symbols << '\n';
        }
        return out.str();
    }
};

// Runs `cycles` rounds of (fail burst nodes, repair them in ascending id
// order, reconstruct from a random k-subset and compare). Fully determined
// by the config.
inline TrialResult run_trial(const TrialConfig& cfg) {
    if (cfg.payload_bytes == 0) throw ParamError("trial payload must be nonempty");
    if (cfg.burst < 1) throw ParamError("burst must be at least 1");

    uint32_t d = cfg.code == "mbr" ? derive_mbr_params(cfg.n, cfg.k).d : derive_msr_params(cfg.n, cfg.k).d;
    if (cfg.burst > cfg.n - d)
        throw ParamError("burst of " + std::to_string(cfg.burst) + " exceeds repairable failures n-d = " +
                         std::to_string(cfg.n - d));

    FieldPtr field = cfg.field.empty() ? nullptr : Field::parse(cfg.field);

    std::vector<uint8_t> payload(cfg.payload_bytes);
    uint64_t state = cfg.seed ^ 0xD1B54A32D192ED03ULL;
    for (auto& b : payload) b = static_cast<uint8_t>(detail::splitmix64(state));

    Cluster cluster = Cluster::ingest(payload, cfg.code, cfg.n, cfg.k, field, cfg.seed);

    TrialResult res;
    res.config = cfg;
    res.d = cluster.d();
    res.alpha = cluster.alpha();
    res.beta = cfg.code == "mbr" ? cluster.mbr().params.beta : cluster.msr().params.beta;
    res.B = cfg.code == "mbr" ? cluster.mbr().params.B : cluster.msr().params.B;
    res.theta = cfg.code == "mbr" ? cluster.mbr().params.theta : 0;
    res.field = cluster.field().to_string();
    res.q = cluster.field().order();
    res.chunks = cluster.chunk_count();

    auto check_collect = [&]() {
        ++res.collect_checks;
        if (cluster.collect_random() == payload) ++res.collect_successes;
    };
    check_collect();

    for (uint32_t cycle = 1; cycle <= cfg.cycles; ++cycle) {
        std::vector<uint32_t> failed;
        for (uint32_t b = 0; b < cfg.burst; ++b) failed.push_back(cluster.fail_random());
        std::sort(failed.begin(), failed.end());
        for (uint32_t node : failed) {
            RepairTranscript t = cluster.repair(node);
            res.rows.push_back({cycle, node, t.helpers, t.total_symbols});
            ++res.repairs;
            res.symbols_moved_total += t.total_symbols;
        }
        check_collect();
    }
    return res;
}

}  // namespace regen
