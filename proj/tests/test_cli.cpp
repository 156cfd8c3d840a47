#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
    static int counter = 0;
    fs::path log = fs::temp_directory_path() / ("regencode_cli_" + std::to_string(counter++) + ".log");
    std::string cmd = std::string(REGENCODE_BIN) + " " + args + " > " + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    fs::remove(log);
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("regen_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_file(const fs::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << data;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("encode prints the derived parameters") {
    TempDir tmp;
    write_file(tmp.path / "in.bin", "derived parameter check");
    auto r = run("encode --code mbr --n 5 --k 3 --input " + (tmp.path / "in.bin").string() + " --out " +
                 (tmp.path / "cluster").string());
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "alpha=4"));
    CHECK(contains(r.output, "beta=1"));
    CHECK(contains(r.output, "B=9"));
    CHECK(contains(r.output, "theta=10"));
    CHECK(contains(r.output, "q=2"));
    CHECK(fs::exists(tmp.path / "cluster" / "manifest.txt"));
    CHECK(fs::exists(tmp.path / "cluster" / "node_5" / "chunk_0.sym"));
}

TEST_CASE("msr encode reports B=6 alpha=2 and a field of at least five elements") {
    TempDir tmp;
    write_file(tmp.path / "in.bin", "msr parameters");
    auto r = run("encode --code msr --n 5 --k 3 --input " + (tmp.path / "in.bin").string() + " --out " +
                 (tmp.path / "cluster").string());
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "B=6"));
    CHECK(contains(r.output, "alpha=2"));
    CHECK(contains(r.output, "q=5"));
}

TEST_CASE("missing input exits 2 and leaves no partial cluster") {
    TempDir tmp;
    auto r = run("encode --code mbr --n 5 --k 3 --input " + (tmp.path / "nope.bin").string() + " --out " +
                 (tmp.path / "cluster").string());
    CHECK(r.exit_code == 2);
    CHECK_FALSE(fs::exists(tmp.path / "cluster"));
}

TEST_CASE("parameter errors exit 1") {
    TempDir tmp;
    write_file(tmp.path / "in.bin", "x");
    auto bad_k = run("encode --code mbr --n 3 --k 3 --input " + (tmp.path / "in.bin").string() + " --out " +
                     (tmp.path / "c").string());
    CHECK(bad_k.exit_code == 1);
    auto bad_field = run("encode --code msr --n 5 --k 3 --field prime:3 --input " +
                         (tmp.path / "in.bin").string() + " --out " + (tmp.path / "c").string());
    CHECK(bad_field.exit_code == 1);
    auto bad_flag = run("encode --code mbr --n 5 --input " + (tmp.path / "in.bin").string());
    CHECK(bad_flag.exit_code == 1);
}

TEST_CASE("repair rebuilds exactly the failed node's files") {
    TempDir tmp;
    write_file(tmp.path / "in.bin", "repair me byte for byte, please");
    fs::path cluster = tmp.path / "cluster";
    REQUIRE(run("encode --code mbr --n 5 --k 3 --input " + (tmp.path / "in.bin").string() + " --out " +
                cluster.string())
                .exit_code == 0);

    // snapshot node 3, then destroy it
    std::vector<std::pair<std::string, std::string>> before;
    for (const auto& entry : fs::directory_iterator(cluster / "node_3"))
        before.emplace_back(entry.path().filename().string(), read_file(entry.path()));
    fs::remove_all(cluster / "node_3");

    auto r = run("repair --cluster " + cluster.string() + " --node 3");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "failed=3"));
    CHECK(contains(r.output, "helpers=1,2,4,5"));
    CHECK(contains(r.output, "symbols_per_chunk=4"));
    for (const auto& [name, data] : before) CHECK(read_file(cluster / "node_3" / name) == data);
}

TEST_CASE("reconstruct writes the original file and is idempotent") {
    TempDir tmp;
    std::string payload = "reconstruct this content";
    write_file(tmp.path / "in.bin", payload);
    fs::path cluster = tmp.path / "cluster";
    REQUIRE(run("encode --code mbr --n 5 --k 3 --input " + (tmp.path / "in.bin").string() + " --out " +
                cluster.string())
                .exit_code == 0);

    auto r = run("reconstruct --cluster " + cluster.string() + " --nodes 1,2,3 --out " +
                 (tmp.path / "out.bin").string());
    CHECK(r.exit_code == 0);
    CHECK(read_file(tmp.path / "out.bin") == payload);

    auto again = run("reconstruct --cluster " + cluster.string() + " --nodes 1,2,3 --out " +
                     (tmp.path / "out2.bin").string());
    CHECK(again.exit_code == 0);
    CHECK(read_file(tmp.path / "out2.bin") == read_file(tmp.path / "out.bin"));

    auto other = run("reconstruct --cluster " + cluster.string() + " --nodes 2,4,5 --out " +
                     (tmp.path / "out3.bin").string());
    CHECK(other.exit_code == 0);
    CHECK(read_file(tmp.path / "out3.bin") == payload);
}

TEST_CASE("msr repair keeps the cluster collectible and updates the manifest") {
    TempDir tmp;
    std::string payload = "auxiliary bookkeeping run";
    write_file(tmp.path / "in.bin", payload);
    fs::path cluster = tmp.path / "cluster";
    REQUIRE(run("encode --code msr --n 5 --k 3 --seed 9 --input " + (tmp.path / "in.bin").string() +
                " --out " + cluster.string())
                .exit_code == 0);
    std::string manifest_before = read_file(cluster / "manifest.txt");
    fs::remove_all(cluster / "node_2");

    auto r = run("repair --cluster " + cluster.string() + " --node 2 --helpers 1,3,4,5");
    CHECK(r.exit_code == 0);
    std::string manifest_after = read_file(cluster / "manifest.txt");
    CHECK(manifest_before != manifest_after);  // aux table version moved
    CHECK(contains(manifest_after, "aux_version=1"));

    auto rec = run("reconstruct --cluster " + cluster.string() + " --nodes 2,3,4 --out " +
                   (tmp.path / "out.bin").string());
    CHECK(rec.exit_code == 0);
    CHECK(read_file(tmp.path / "out.bin") == payload);
}

TEST_CASE("data loss surfaces as exit 3") {
    TempDir tmp;
    write_file(tmp.path / "in.bin", "gone");
    fs::path cluster = tmp.path / "cluster";
    REQUIRE(run("encode --code mbr --n 5 --k 3 --input " + (tmp.path / "in.bin").string() + " --out " +
                cluster.string())
                .exit_code == 0);
    fs::remove_all(cluster / "node_1");
    fs::remove_all(cluster / "node_2");
    fs::remove_all(cluster / "node_3");
    auto r = run("reconstruct --cluster " + cluster.string() + " --out " + (tmp.path / "out.bin").string());
    CHECK(r.exit_code == 3);

    // repair is equally impossible: only 2 of the 4 needed helpers remain
    auto rep = run("repair --cluster " + cluster.string() + " --node 1");
    CHECK(rep.exit_code == 3);
}

TEST_CASE("verify passes a healthy cluster and fails a tampered code description") {
    TempDir tmp;
    write_file(tmp.path / "in.bin", "verify me");
    fs::path cluster = tmp.path / "cluster";
    REQUIRE(run("encode --code mbr --n 5 --k 3 --field prime:11 --input " + (tmp.path / "in.bin").string() +
                " --out " + cluster.string())
                .exit_code == 0);
    auto ok = run("verify --cluster " + cluster.string());
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.output, "lemma1:"));
    CHECK(contains(ok.output, "corollary1:"));
    CHECK(contains(ok.output, "lemma2:"));
    CHECK(contains(ok.output, "structure:"));
    CHECK(contains(ok.output, "verdict: PASS"));

    // a code description with one stored vector zeroed out
    std::string desc =
        "2 1 1 1 1 1 field=prime:2\n"
        "1\n"
        "0\n";  // node 2 stores the zero vector
    write_file(tmp.path / "broken.code", desc);
    auto bad = run("verify --codefile " + (tmp.path / "broken.code").string());
    CHECK(bad.exit_code == 3);
    CHECK(contains(bad.output, "verdict: FAIL"));
    CHECK(contains(bad.output, "FAIL"));
}

TEST_CASE("verify catches a mutated cluster manifest") {
    TempDir tmp;
    write_file(tmp.path / "in.bin", "mutation target");
    fs::path cluster = tmp.path / "cluster";
    REQUIRE(run("encode --code mbr --n 4 --k 2 --input " + (tmp.path / "in.bin").string() + " --out " +
                cluster.string())
                .exit_code == 0);

    // rewrite the manifest with an explicit custom vector family carrying a
    // duplicated vector (nodes 1 and 2 both describe edges with v1 = v2)
    std::string manifest = read_file(cluster / "manifest.txt");
    auto pos = manifest.find("construction=single-parity-check");
    REQUIRE(pos != std::string::npos);
    manifest.replace(pos, std::string("construction=single-parity-check").size(), "construction=custom");
    manifest +=
        "vec_1=1 0 0 0 0\n"
        "vec_2=1 0 0 0 0\n"
        "vec_3=0 0 1 0 0\n"
        "vec_4=0 0 0 1 0\n"
        "vec_5=0 0 0 0 1\n"
        "vec_6=1 1 1 1 1\n";
    write_file(cluster / "manifest.txt", manifest);

    auto r = run("verify --cluster " + cluster.string());
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "verdict: FAIL"));
}

TEST_CASE("seeded encodes are byte-for-byte reproducible") {
    TempDir tmp;
    write_file(tmp.path / "in.bin", "same seed, same cluster");
    for (const char* name : {"a", "b"}) {
        auto r = run("encode --code msr --n 5 --k 3 --seed 31 --input " + (tmp.path / "in.bin").string() +
                     " --out " + (tmp.path / name).string());
        REQUIRE(r.exit_code == 0);
    }
    CHECK(read_file(tmp.path / "a" / "manifest.txt") == read_file(tmp.path / "b" / "manifest.txt"));
    for (int node = 1; node <= 5; ++node) {
        std::string dir = "node_" + std::to_string(node);
        CHECK(read_file(tmp.path / "a" / dir / "chunk_0.sym") == read_file(tmp.path / "b" / dir / "chunk_0.sym"));
    }
}

TEST_CASE("simulate prints reproducible metrics and writes CSV rows") {
    TempDir tmp;
    std::string args = "simulate --code msr --n 6 --k 3 --cycles 20 --seed 11 --csv " +
                       (tmp.path / "rows.csv").string();
    auto a = run(args);
    CHECK(a.exit_code == 0);
    CHECK(contains(a.output, "symbols_per_repair_per_chunk=4"));
    CHECK(contains(a.output, "theoretical_repair_symbols_per_chunk=4"));
    CHECK(contains(a.output, "collect_successes=21"));
    std::string csv = read_file(tmp.path / "rows.csv");
    CHECK(contains(csv, "cycle,failed,helpers,symbols"));

    auto b = run(args);
    CHECK(b.output == a.output);

    auto infeasible = run("simulate --code mbr --n 5 --k 3 --cycles 5 --burst 2");
    CHECK(infeasible.exit_code == 1);
}
