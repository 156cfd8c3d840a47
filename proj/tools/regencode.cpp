// Command-line frontend for the regenerating-code library: encode a file
// into a cluster directory, repair a node, reconstruct the file, run the
// subspace certificate, or drive failure/repair simulations.
//
// Exit codes: 0 ok, 1 usage/parameter error, 2 I/O error, 3 data loss or
// verification failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regen/regen.hpp"

namespace fs = std::filesystem;
using namespace regen;

namespace {

std::vector<uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string s = buf.str();
    return {s.begin(), s.end()};
}

void write_binary(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::string join_ids(const std::vector<uint32_t>& ids) {
    std::string s;
    for (uint32_t id : ids) s += (s.empty() ? "" : ",") + std::to_string(id);
    return s;
}

struct EncodeArgs {
    std::string code = "mbr";
    uint32_t n = 0, k = 0;
    std::string field;
    uint64_t seed = 0;
    std::string input, out;
};

int cmd_encode(const EncodeArgs& a) {
    FieldPtr field = a.field.empty() ? nullptr : Field::parse(a.field);
    // validate parameters before touching any file
    if (a.code == "mbr")
        derive_mbr_params(a.n, a.k);
    else if (a.code == "msr")
        derive_msr_params(a.n, a.k);
    else
        throw ParamError("--code must be mbr or msr");

    std::vector<uint8_t> bytes = read_binary(a.input);
    Cluster cluster = Cluster::ingest(bytes, a.code, a.n, a.k, field, a.seed);
    cluster.save(a.out);

    Manifest m = cluster.manifest();
    std::cout << "code=" << m.code << "\n";
    std::cout << "n=" << m.n << "\nk=" << m.k << "\nd=" << m.d << "\n";
    std::cout << "alpha=" << m.alpha << "\nbeta=" << m.beta << "\n";
    std::cout << "B=" << m.B << "\n";
    if (m.code == "mbr") std::cout << "theta=" << m.theta << "\n";
    std::cout << "field=" << m.field << "\nq=" << cluster.field().order() << "\n";
    std::cout << "chunks=" << m.chunks << "\npadding=" << m.padding << "\n";
    std::cout << "out=" << a.out << "\n";
    return 0;
}

struct RepairArgs {
    std::string cluster;
    uint32_t node = 0;
    std::vector<uint32_t> helpers;
};

int cmd_repair(const RepairArgs& a) {
    Cluster cluster = Cluster::load(a.cluster);
    RepairTranscript t = cluster.repair(a.node, a.helpers);
    cluster.save_node(a.cluster, a.node);
    if (!cluster.is_mbr()) cluster.save_manifest(a.cluster);  // auxiliary table changed

    std::cout << "failed=" << t.failed << "\n";
    std::cout << "helpers=" << join_ids(t.helpers) << "\n";
    std::cout << "chunks=" << cluster.chunk_count() << "\n";
    std::cout << "symbols_moved=" << t.total_symbols << "\n";
    std::cout << "symbols_per_chunk=" << t.total_symbols / cluster.chunk_count() << "\n";
    return 0;
}

struct ReconstructArgs {
    std::string cluster;
    std::vector<uint32_t> nodes;
    std::string out;
};

int cmd_reconstruct(const ReconstructArgs& a) {
    Cluster cluster = Cluster::load(a.cluster);
    std::vector<uint32_t> nodes = a.nodes;
    std::vector<uint8_t> bytes = cluster.collect(nodes);
    if (nodes.empty()) {
        auto live = cluster.live_nodes();
        nodes.assign(live.begin(), live.begin() + cluster.k());
    }
    write_binary(a.out, bytes);
    std::cout << "nodes=" << join_ids(nodes) << "\n";
    std::cout << "bytes=" << bytes.size() << "\n";
    std::cout << "out=" << a.out << "\n";
    return 0;
}

struct VerifyArgs {
    std::string cluster;
    std::string codefile;
};

int cmd_verify(const VerifyArgs& a) {
    LinearStorageCode code;
    if (!a.codefile.empty()) {
        std::ifstream in(a.codefile);
        if (!in) throw IoError("cannot open code file: " + a.codefile);
        code = parse_code_text(in);
    } else {
        Cluster cluster = Cluster::load(a.cluster);
        code = cluster.is_mbr() ? to_linear_code(cluster.mbr()) : to_linear_code(cluster.msr());
    }

    bool all_pass = true;

    Lemma1Report l1 = check_lemma1(code);
    std::cout << "lemma1: ";
    for (size_t i = 0; i < l1.node_dims.size(); ++i) std::cout << (i ? "," : "") << l1.node_dims[i];
    std::cout << " (expected " << l1.expected << " per node) -> " << (l1.pass ? "PASS" : "FAIL") << "\n";
    all_pass &= l1.pass;

    size_t c1_total = 0, c1_pass = 0;
    std::string c1_first_fail;
    for (uint32_t i = 1; i <= code.n; ++i) {
        std::vector<uint32_t> others;
        for (uint32_t j = 1; j <= code.n; ++j)
            if (j != i) others.push_back(j);
        for (uint32_t m = 1; m < code.k; ++m) {
            detail::for_each_combination(others.size(), m, [&](const std::vector<size_t>& pick) {
                std::vector<uint32_t> subset;
                for (size_t t : pick) subset.push_back(others[t]);
                Corollary1Report r = check_corollary1(code, i, subset);
                ++c1_total;
                if (r.pass)
                    ++c1_pass;
                else if (c1_first_fail.empty())
                    c1_first_fail = "node " + std::to_string(i) + " vs {" + join_ids(subset) + "}: dim " +
                                    std::to_string(r.dim) + " != " + std::to_string(r.expected);
            });
        }
    }
    std::cout << "corollary1: " << c1_pass << "/" << c1_total << " intersections at m*beta";
    if (!c1_first_fail.empty()) std::cout << " (first failure: " << c1_first_fail << ")";
    std::cout << " -> " << (c1_pass == c1_total ? "PASS" : "FAIL") << "\n";
    all_pass &= c1_pass == c1_total;

    size_t l2_total = 0, l2_pass = 0;
    std::string l2_first_fail;
    for (uint32_t i = 1; i <= code.n; ++i) {
        std::vector<uint32_t> others;
        for (uint32_t j = 1; j <= code.n; ++j)
            if (j != i) others.push_back(j);
        if (others.size() < code.d) continue;
        detail::for_each_combination(others.size(), code.d, [&](const std::vector<size_t>& pick) {
            std::vector<uint32_t> helpers;
            for (size_t t : pick) helpers.push_back(others[t]);
            Lemma2Report r = check_lemma2(code, i, helpers);
            ++l2_total;
            if (r.pass)
                ++l2_pass;
            else if (l2_first_fail.empty())
                l2_first_fail = "node " + std::to_string(i) + " with helpers {" + join_ids(helpers) + "}";
        });
    }
    std::cout << "lemma2: " << l2_pass << "/" << l2_total << " helper sets";
    if (!l2_first_fail.empty()) std::cout << " (first failure: " << l2_first_fail << ")";
    std::cout << " -> " << (l2_pass == l2_total ? "PASS" : "FAIL") << "\n";
    all_pass &= l2_pass == l2_total;

    StructureReport st = check_structure(code);
    size_t st_pass = 0;
    for (const auto& s : st.subsets)
        if (s.pass) ++st_pass;
    std::cout << "structure: ";
    if (!st.params_ok) {
        std::cout << "parameters are not on the minimum-bandwidth point";
    } else {
        std::cout << st_pass << "/" << st.subsets.size() << " subsets of size d+1";
        for (const auto& s : st.subsets) {
            if (s.pass) continue;
            std::cout << " (first failure: {" << join_ids(s.nodes) << "}"
                      << (s.pairwise_ok ? "" : " pairwise-dim") << (s.node_sums_ok ? "" : " direct-sum")
                      << (s.collectors_ok ? "" : " collector-span") << ")";
            break;
        }
    }
    std::cout << " -> " << (st.pass ? "PASS" : "FAIL") << "\n";
    all_pass &= st.pass;

    std::cout << "verdict: " << (all_pass ? "PASS" : "FAIL") << "\n";
    return all_pass ? 0 : 3;
}

struct SimulateArgs {
    TrialConfig cfg;
    std::string csv;
};

int cmd_simulate(const SimulateArgs& a) {
    TrialResult res = run_trial(a.cfg);
    std::cout << res.metrics_text();
    if (!a.csv.empty()) {
        std::ofstream out(a.csv, std::ios::trunc);
        if (!out) throw IoError("cannot open CSV output: " + a.csv);
        out << res.csv_text();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact regenerating codes: encode, repair, reconstruct, verify, simulate"};
    app.require_subcommand(1);

    EncodeArgs enc;
    CLI::App* encode = app.add_subcommand("encode", "encode a file into a cluster directory");
    encode->add_option("--code", enc.code, "code family: mbr or msr")->required();
    encode->add_option("--n", enc.n, "number of storage nodes")->required();
    encode->add_option("--k", enc.k, "nodes needed to reconstruct")->required();
    encode->add_option("--field", enc.field, "field override, prime:<p> or gf2:<m>");
    encode->add_option("--seed", enc.seed, "seed for the MSR auxiliary vectors");
    encode->add_option("--input", enc.input, "file to encode")->required();
    encode->add_option("--out", enc.out, "cluster directory to create")->required();

    RepairArgs rep;
    CLI::App* repair = app.add_subcommand("repair", "regenerate one node in place");
    repair->add_option("--cluster", rep.cluster, "cluster directory")->required();
    repair->add_option("--node", rep.node, "node id to rebuild")->required();
    repair->add_option("--helpers", rep.helpers, "helper node ids")->delimiter(',');

    ReconstructArgs rec;
    CLI::App* reconstruct = app.add_subcommand("reconstruct", "rebuild the original file from k nodes");
    reconstruct->add_option("--cluster", rec.cluster, "cluster directory")->required();
    reconstruct->add_option("--nodes", rec.nodes, "node ids to read (default: first k live)")->delimiter(',');
    reconstruct->add_option("--out", rec.out, "output file")->required();

    VerifyArgs ver;
    CLI::App* verify = app.add_subcommand("verify", "run the subspace certificate");
    auto* vc = verify->add_option("--cluster", ver.cluster, "cluster directory");
    auto* vf = verify->add_option("--codefile", ver.codefile, "plain-text code description");
    vc->excludes(vf);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run failure/repair cycles and report bandwidth");
    simulate->add_option("--code", sim.cfg.code, "code family: mbr or msr")->required();
    simulate->add_option("--n", sim.cfg.n, "number of storage nodes")->required();
    simulate->add_option("--k", sim.cfg.k, "nodes needed to reconstruct")->required();
    simulate->add_option("--cycles", sim.cfg.cycles, "failure/repair cycles")->required();
    simulate->add_option("--seed", sim.cfg.seed, "simulation seed");
    simulate->add_option("--burst", sim.cfg.burst, "simultaneous failures per cycle");
    simulate->add_option("--field", sim.cfg.field, "field override");
    simulate->add_option("--payload-bytes", sim.cfg.payload_bytes, "synthetic payload size");
    simulate->add_option("--csv", sim.csv, "write per-repair rows to this CSV file");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(encode)) return cmd_encode(enc);
        if (app.got_subcommand(repair)) return cmd_repair(rep);
        if (app.got_subcommand(reconstruct)) return cmd_reconstruct(rec);
        if (app.got_subcommand(verify)) {
            if (ver.cluster.empty() == ver.codefile.empty())
                throw ParamError("verify needs exactly one of --cluster or --codefile");
            return cmd_verify(ver);
        }
        if (app.got_subcommand(simulate)) return cmd_simulate(sim);
        throw ParamError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const DataLossError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const RepairImpossibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CorruptionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
