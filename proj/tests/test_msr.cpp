#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "regen/mds.hpp"
#include "regen/msr.hpp"
#include "regen/verify.hpp"

using namespace regen;

namespace {

Vec random_source(size_t len, uint32_t q, std::mt19937_64& gen) {
    Vec v(len);
    for (auto& x : v) x = gen() % q;
    return v;
}

void for_each_subset(uint32_t n, uint32_t k, const std::function<void(const std::vector<uint32_t>&)>& fn) {
    detail::for_each_combination(n, k, [&](const std::vector<size_t>& pick) {
        std::vector<uint32_t> ids;
        for (size_t i : pick) ids.push_back(static_cast<uint32_t>(i + 1));
        fn(ids);
    });
}

// full repair of `failed` against a live node array, driven like a helper
// protocol would be: each helper combines its own two symbols
MsrRegenResult repair_node(MsrCodeSpec& spec, uint32_t failed, std::vector<uint32_t> helper_ids,
                           std::vector<NodeState>& nodes) {
    RegenCoefficients c = regen_coefficients(spec, failed, helper_ids);
    std::vector<HelperSymbol> given;
    for (size_t i = 0; i < c.helpers.size(); ++i) {
        const NodeState& h = nodes[c.helpers[i] - 1];
        given.push_back({c.helpers[i], helper_symbol(*spec.field, c, i, h.symbols[0], h.symbols[1])});
    }
    MsrRegenResult r = regenerate(spec, failed, given);
    nodes[failed - 1] = r.node;
    return r;
}

}  // namespace

TEST_CASE("parameter derivation") {
    MsrParams p = derive_msr_params(5, 3);
    CHECK(p.d == 4);
    CHECK(p.B == 6);
    CHECK(p.alpha == 2);
    CHECK(p.beta == 1);

    MsrParams rep = derive_msr_params(3, 1);
    CHECK(rep.B == 2);
    CHECK(rep.d == 2);

    MsrParams p74 = derive_msr_params(7, 4);
    CHECK(p74.d == 5);
    CHECK(p74.B == 8);

    CHECK_THROWS_AS(derive_msr_params(4, 3), ParamError);  // n < k+2
    CHECK_THROWS_AS(derive_msr_params(3, 0), ParamError);
}

TEST_CASE("main vectors are Vandermonde rows at ascending points") {
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(7));
    for (uint32_t i = 1; i <= 5; ++i) {
        Vec p = spec.main_vector(i);
        uint32_t x = i - 1;
        CHECK(p[0] == 1);
        CHECK(p[1] == x);
        CHECK(p[2] == spec.field->mul(x, x));
    }
    CHECK_THROWS_AS(make_msr_spec(5, 3, Field::prime(3)), ParamError);  // q < n
    CHECK(make_msr_spec(5, 3).field->order() >= 5);

    // the n main vectors form a k-dimensional MDS family
    VectorFamily fam{3, 5, spec.main, FamilyTag::Custom};
    CHECK(verify_mds(fam, 3));
}

TEST_CASE("encoding matches hand-evaluated products over GF(7)") {
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(7), 0, /*zero_aux=*/true);
    Vec src = {1, 2, 3, 4, 5, 6};  // f = (1,2,3), g = (4,5,6)
    auto nodes = encode(spec, src);
    // f.p_i = 1 + 2x + 3x^2, g.p_i = 4 + 5x + 6x^2 at x = 0..4, mod 7
    const uint32_t s1[5] = {1, 6, 3, 6, 1};
    const uint32_t s2[5] = {4, 1, 3, 3, 1};
    for (uint32_t i = 1; i <= 5; ++i) {
        CHECK(nodes[i - 1].symbols[0] == s1[i - 1]);
        CHECK(nodes[i - 1].symbols[1] == s2[i - 1]);
    }
}

TEST_CASE("unit source probes the stored pair structure") {
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(11), 99);
    Vec src(6, 0);
    src[0] = 1;  // f = e_0, g = 0: node stores (p_i[0], u_i[0])
    auto nodes = encode(spec, src);
    for (uint32_t i = 1; i <= 5; ++i) {
        CHECK(nodes[i - 1].symbols[0] == spec.main_vector(i)[0]);
        CHECK(nodes[i - 1].symbols[1] == spec.aux_vector(i)[0]);
    }
    auto zeros = encode(spec, Vec(6, 0));
    for (const auto& n : zeros) CHECK(n.symbols == Vec{0, 0});
}

TEST_CASE("every k-subset reconstructs, whatever the auxiliary vectors") {
    std::mt19937_64 gen(8);
    Vec src = random_source(6, 7, gen);
    Vec out_a, out_b;
    MsrCodeSpec a = make_msr_spec(5, 3, Field::prime(7), 1);
    MsrCodeSpec b = make_msr_spec(5, 3, Field::prime(7), 2);
    auto na = encode(a, src);
    auto nb = encode(b, src);
    for_each_subset(5, 3, [&](const std::vector<uint32_t>& ids) {
        std::vector<NodeState> pa, pb;
        for (uint32_t id : ids) {
            pa.push_back(na[id - 1]);
            pb.push_back(nb[id - 1]);
        }
        out_a = reconstruct(a, pa);
        out_b = reconstruct(b, pb);
        CHECK(out_a == src);
        CHECK(out_a == out_b);  // auxiliary vectors never leak into the result
    });

    MsrCodeSpec z = make_msr_spec(5, 3, Field::prime(7), 0, /*zero_aux=*/true);
    auto nz = encode(z, src);
    CHECK(reconstruct(z, {nz[0], nz[2], nz[4]}) == src);
}

TEST_CASE("k=1 replication-like code reconstructs from any single node") {
    MsrCodeSpec spec = make_msr_spec(3, 1, Field::prime(5), 4);
    Vec src = {3, 2};
    auto nodes = encode(spec, src);
    for (uint32_t i = 1; i <= 3; ++i) CHECK(reconstruct(spec, {nodes[i - 1]}) == src);
}

TEST_CASE("repair coefficients satisfy their defining equations") {
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(7), 77);
    const Field& f = *spec.field;
    for (uint32_t failed = 1; failed <= 5; ++failed) {
        std::vector<uint32_t> helpers;
        for (uint32_t j = 1; j <= 5; ++j)
            if (j != failed) helpers.push_back(j);
        RegenCoefficients c = regen_coefficients(spec, failed, helpers);

        CHECK(c.b == Vec(4, 1));
        CHECK(c.delta[0] == 1);
        for (uint32_t dv : c.delta) CHECK(dv != 0);  // kernel vector fully nonzero

        // sum rho_i p_i = p_failed and sum delta_i p_i = 0, coordinatewise
        Vec rho_sum(3, 0), delta_sum(3, 0);
        for (size_t i = 0; i < 4; ++i) {
            Vec p = spec.main_vector(helpers[i]);
            for (int r = 0; r < 3; ++r) {
                rho_sum[r] = f.add(rho_sum[r], f.mul(c.rho[i], p[r]));
                delta_sum[r] = f.add(delta_sum[r], f.mul(c.delta[i], p[r]));
            }
        }
        CHECK(rho_sum == spec.main_vector(failed));
        CHECK(delta_sum == Vec(3, 0));

        // sum delta_i (a_i p_i + b_i u_i) = p_failed
        Vec lhs(3, 0);
        for (size_t i = 0; i < 4; ++i) {
            Vec p = spec.main_vector(helpers[i]);
            Vec u = spec.aux_vector(helpers[i]);
            for (int r = 0; r < 3; ++r)
                lhs[r] = f.add(lhs[r], f.mul(c.delta[i], f.add(f.mul(c.a[i], p[r]), u[r])));
        }
        CHECK(lhs == spec.main_vector(failed));
    }
}

TEST_CASE("with zero auxiliaries the a-equation collapses to the rho shape") {
    MsrCodeSpec spec = make_msr_spec(6, 3, Field::prime(7), 0, /*zero_aux=*/true);
    RegenCoefficients c = regen_coefficients(spec, 6, {1, 2, 3, 4});
    const Field& f = *spec.field;
    // with u = 0: sum delta_i a_i p_i = p_failed, the same system rho solves
    Vec lhs(3, 0);
    for (size_t i = 0; i < 4; ++i) {
        Vec p = spec.main_vector(c.helpers[i]);
        for (int r = 0; r < 3; ++r) lhs[r] = f.add(lhs[r], f.mul(f.mul(c.delta[i], c.a[i]), p[r]));
    }
    CHECK(lhs == spec.main_vector(6));
}

TEST_CASE("regeneration preserves the main symbol and updates the auxiliary table") {
    std::mt19937_64 gen(4);
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(7), 13);
    Vec src = random_source(6, 7, gen);
    auto nodes = encode(spec, src);
    Vec fpart(src.begin(), src.begin() + 3);

    uint64_t version_before = spec.aux_version;
    MsrRegenResult r = repair_node(spec, 2, {1, 3, 4, 5}, nodes);
    CHECK(spec.aux_version == version_before + 1);
    CHECK(r.transcript.total_symbols == 4);  // d*beta
    CHECK(r.node.symbols[0] == dot(*spec.field, fpart, spec.main_vector(2)));
    CHECK(spec.aux_vector(2) == r.new_aux);
    // the stored second symbol is g.p + f.u~ for the recorded u~
    Vec gpart(src.begin() + 3, src.end());
    uint32_t expect = spec.field->add(dot(*spec.field, gpart, spec.main_vector(2)),
                                      dot(*spec.field, fpart, r.new_aux));
    CHECK(r.node.symbols[1] == expect);

    // all collectors stay exact with the regenerated node in place
    for_each_subset(5, 3, [&](const std::vector<uint32_t>& ids) {
        std::vector<NodeState> picked;
        for (uint32_t id : ids) picked.push_back(nodes[id - 1]);
        CHECK(reconstruct(spec, picked) == src);
    });
}

TEST_CASE("zero source regenerates to a zero node") {
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(7), 5);
    auto nodes = encode(spec, Vec(6, 0));
    MsrRegenResult r = repair_node(spec, 4, {1, 2, 3, 5}, nodes);
    CHECK(r.node.symbols == Vec{0, 0});
}

TEST_CASE("delta entries are nonzero for every failure/helper choice up to n=8") {
    for (uint32_t n = 4; n <= 8; ++n) {
        for (uint32_t k = 1; k + 2 <= n; ++k) {
            MsrCodeSpec spec = make_msr_spec(n, k, nullptr, 3);
            for (uint32_t failed = 1; failed <= n; ++failed) {
                std::vector<uint32_t> others;
                for (uint32_t j = 1; j <= n; ++j)
                    if (j != failed) others.push_back(j);
                detail::for_each_combination(others.size(), k + 1, [&](const std::vector<size_t>& pick) {
                    std::vector<uint32_t> helpers;
                    for (size_t t : pick) helpers.push_back(others[t]);
                    RegenCoefficients c = regen_coefficients(spec, failed, helpers);
                    for (uint32_t dv : c.delta) CHECK(dv != 0);
                });
            }
        }
    }
}

TEST_CASE("main symbol is preserved across random sources") {
    std::mt19937_64 gen(1234);
    MsrCodeSpec base = make_msr_spec(6, 3, Field::prime(7), 21);
    for (int trial = 0; trial < 100; ++trial) {
        MsrCodeSpec spec = base;
        Vec src = random_source(6, 7, gen);
        auto nodes = encode(spec, src);
        uint32_t failed = 1 + gen() % 6;
        std::vector<uint32_t> helpers;
        for (uint32_t j = 1; j <= 6 && helpers.size() < 4; ++j)
            if (j != failed) helpers.push_back(j);
        MsrRegenResult r = repair_node(spec, failed, helpers, nodes);
        Vec fpart(src.begin(), src.begin() + 3);
        CHECK(r.node.symbols[0] == dot(*spec.field, fpart, spec.main_vector(failed)));
    }
}

TEST_CASE("end-to-end: regenerate node 2, then sweep every collector") {
    std::mt19937_64 gen(31337);
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(7), 8);
    Vec src = random_source(6, 7, gen);
    auto nodes = encode(spec, src);
    repair_node(spec, 2, {1, 3, 4, 5}, nodes);
    for_each_subset(5, 3, [&](const std::vector<uint32_t>& ids) {
        std::vector<NodeState> picked;
        for (uint32_t id : ids) picked.push_back(nodes[id - 1]);
        CHECK(reconstruct(spec, picked) == src);
    });
}

TEST_CASE("soak: a thousand seeded failure/repair cycles stay exact") {
    std::mt19937_64 gen(0xCAFE);
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(7), 0);
    Vec src = random_source(6, 7, gen);
    auto nodes = encode(spec, src);
    Vec fpart(src.begin(), src.begin() + 3);
    for (int cycle = 0; cycle < 1000; ++cycle) {
        uint32_t failed = 1 + gen() % 5;
        std::vector<uint32_t> helpers;
        for (uint32_t j = 1; j <= 5; ++j)
            if (j != failed) helpers.push_back(j);
        MsrRegenResult r = repair_node(spec, failed, helpers, nodes);
        CHECK(r.node.symbols[0] == dot(*spec.field, fpart, spec.main_vector(failed)));
    }
    for_each_subset(5, 3, [&](const std::vector<uint32_t>& ids) {
        std::vector<NodeState> picked;
        for (uint32_t id : ids) picked.push_back(nodes[id - 1]);
        CHECK(reconstruct(spec, picked) == src);
    });
}

TEST_CASE("two simultaneous failures at n = k+3 are repaired sequentially") {
    std::mt19937_64 gen(6);
    MsrCodeSpec spec = make_msr_spec(6, 3, Field::prime(7), 15);
    Vec src = random_source(6, 7, gen);
    auto nodes = encode(spec, src);

    // nodes 2 and 5 fail together; only the four survivors may help
    repair_node(spec, 2, {1, 3, 4, 6}, nodes);
    repair_node(spec, 5, {1, 2, 3, 4}, nodes);  // node 2 is usable again
    for_each_subset(6, 3, [&](const std::vector<uint32_t>& ids) {
        std::vector<NodeState> picked;
        for (uint32_t id : ids) picked.push_back(nodes[id - 1]);
        CHECK(reconstruct(spec, picked) == src);
    });
}

TEST_CASE("node addition extends the family and keeps decoding exact") {
    std::mt19937_64 gen(91);
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(11), 3);
    Vec src = random_source(6, 11, gen);
    uint32_t id = add_node(spec);
    CHECK(id == 6);
    CHECK(spec.params.n == 6);
    auto nodes = encode(spec, src);
    CHECK(reconstruct(spec, {nodes[3], nodes[4], nodes[5]}) == src);

    MsrCodeSpec full = make_msr_spec(5, 3, Field::prime(5), 3);
    CHECK_THROWS_AS(add_node(full), ParamError);  // q = n = 5, no spare point
}

TEST_CASE("regeneration rejects malformed helper sets") {
    MsrCodeSpec spec = make_msr_spec(5, 3, Field::prime(7), 1);
    CHECK_THROWS_AS(regen_coefficients(spec, 1, {2, 3, 4}), ParamError);        // wrong count
    CHECK_THROWS_AS(regen_coefficients(spec, 1, {1, 2, 3, 4}), ParamError);     // includes failed
    CHECK_THROWS_AS(regen_coefficients(spec, 1, {2, 2, 3, 4}), ParamError);     // duplicate
    CHECK_THROWS_AS(regen_coefficients(spec, 9, {1, 2, 3, 4}), ParamError);     // bad id
    std::vector<HelperSymbol> three = {{2, 0}, {3, 0}, {4, 0}};
    CHECK_THROWS_AS(regenerate(spec, 1, three), ParamError);
}
