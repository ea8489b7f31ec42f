#include <catch2/catch_amalgamated.hpp>

#include "pruw/probes.hpp"
#include "pruw/session.hpp"
#include "pruw/snapshot.hpp"

#include <cstdio>
#include <fstream>

#include "oracles.hpp"

using namespace pruw;

namespace {

constexpr Fe kBigPrime = 2147483647ULL;

std::vector<Rat> n12_mu() {
    std::vector<Rat> mu;
    for (int i = 0; i < 5; ++i) mu.push_back(parse_rational("0.37"));
    for (int i = 0; i < 7; ++i) mu.push_back(parse_rational("0.35"));
    return mu;
}

StoragePlan n12_plan(std::uint64_t model_count = 4, std::uint64_t len = 0) {
    return build_plan(StorageProfile::from_mu_with_k(n12_mu(), parse_rational("2.7")),
                      model_count, len, false);
}

FeVec random_model(std::uint64_t symbols, const FieldCtx& ctx, Rng& rng) {
    FeVec model(symbols);
    for (auto& v : model) v = ctx.random(rng);
    return model;
}

// Single-class homogeneous deployment realizing geometry (K, R).
Deployment single_class(std::size_t K, std::size_t R, std::uint64_t model_count,
                        std::uint64_t subpackets, Rng& rng, PlainOracle& oracle) {
    std::vector<Rat> mu(R, Rat(Int(1), Int(static_cast<std::int64_t>(K))));
    StoragePlan plan = build_plan(StorageProfile::from_mu(mu), model_count, 0, false);
    REQUIRE(plan.classes.size() == 1);
    REQUIRE(plan.classes[0].geom.K == K);
    REQUIRE(plan.classes[0].geom.R == R);
    const std::uint64_t L = plan.classes[0].geom.subpacket_params() * subpackets;
    plan = build_plan(StorageProfile::from_mu(mu), model_count, L, false);
    FieldCtx ctx(kBigPrime);
    FeVec model = random_model(model_count * L, ctx, rng);
    oracle = PlainOracle{model_count, L};
    oracle.w = model;
    return install_plan(plan, model, kBigPrime, rng);
}

} // namespace

TEST_CASE("install_plan fills every database exactly") {
    SECTION("N=12 example at granularity") {
        StoragePlan plan = n12_plan();
        Rng rng(2);
        FieldCtx ctx(kBigPrime);
        FeVec model = random_model(plan.model_count * plan.submodel_len, ctx, rng);
        Deployment dep = install_plan(plan, model, kBigPrime, rng);
        for (const auto& db : dep.databases)
            CHECK(Rat(Int(db.occupied_symbols())) == db.capacity);

        // replication audit: each partition's shard sits on exactly R databases
        for (std::size_t p = 0; p < dep.partitions.size(); ++p) {
            const auto& pl = dep.partitions[p];
            const auto& geom = dep.geoms[pl.cls];
            CHECK(pl.members.size() == geom.R);
            std::size_t holders = 0;
            for (const auto& db : dep.databases)
                if (!db.shards[p].empty()) {
                    ++holders;
                    CHECK(db.shards[p].size() ==
                          pl.n_subpackets * geom.y * dep.model_count());
                }
            CHECK(holders == geom.R);
        }

        // total stored = p * M * L
        std::uint64_t total = 0;
        for (const auto& db : dep.databases) total += db.occupied_symbols();
        CHECK(Rat(Int(total)) ==
              dep.plan.profile.p * Rat(Int(plan.model_count) * Int(plan.submodel_len)));
    }
    SECTION("homogeneous deployment has identical occupancy") {
        Rng rng(3);
        PlainOracle oracle;
        Deployment dep = single_class(2, 7, 2, 2, rng, oracle);
        const std::uint64_t first = dep.databases[0].occupied_symbols();
        for (const auto& db : dep.databases) CHECK(db.occupied_symbols() == first);
    }
    SECTION("model size must match the plan") {
        StoragePlan plan = n12_plan();
        Rng rng(4);
        CHECK_THROWS_AS(install_plan(plan, FeVec(17, 0), kBigPrime, rng), Error);
    }
}

TEST_CASE("sessions read and write exactly") {
    Rng rng(11);
    FieldCtx ctx(kBigPrime);
    PlainOracle oracle;
    Deployment dep = single_class(3, 11, 4, 2, rng, oracle);
    const std::uint64_t L = dep.submodel_len();

    SECTION("zero update changes storage but not contents") {
        auto before = dep.databases[0].shards;
        FeVec zero(L, 0);
        SessionResult res = run_session(dep, 1, zero, rng);
        CHECK(res.recovered == oracle.submodel(1));
        CHECK(dep.databases[0].shards != before);  // fresh write noise
        SessionResult res2 = run_session(dep, 1, zero, rng);
        CHECK(res2.recovered == oracle.submodel(1));
    }
    SECTION("random updates round trip against the oracle") {
        for (int s = 0; s < 4; ++s) {
            const std::uint64_t theta = rng.below(4);
            FeVec delta = random_model(L, ctx, rng);
            SessionResult res = run_session(dep, theta, delta, rng);
            REQUIRE(res.recovered == oracle.submodel(theta));
            oracle.apply_update(theta, delta, ctx);
        }
        // verify all submodels via zero-update sessions
        for (std::uint64_t m = 0; m < 4; ++m) {
            FeVec zero(L, 0);
            SessionResult res = run_session(dep, m, zero, rng);
            REQUIRE(res.recovered == oracle.submodel(m));
        }
    }
    SECTION("two users on different submodels") {
        FeVec d1 = random_model(L, ctx, rng), d2 = random_model(L, ctx, rng);
        run_session(dep, 0, d1, rng);
        oracle.apply_update(0, d1, ctx);
        run_session(dep, 2, d2, rng);
        oracle.apply_update(2, d2, ctx);
        FeVec zero(L, 0);
        CHECK(run_session(dep, 0, zero, rng).recovered == oracle.submodel(0));
        CHECK(run_session(dep, 2, zero, rng).recovered == oracle.submodel(2));
    }
}

TEST_CASE("per-class measured costs equal the closed forms exactly") {
    struct GeomCase {
        std::size_t K, R;
    } cases[] = {{1, 4}, {2, 7}, {2, 8}, {3, 11}, {3, 12}, {4, 8}};
    Rng rng(21);
    FieldCtx ctx(kBigPrime);
    for (const auto& g : cases) {
        PlainOracle oracle;
        Deployment dep = single_class(g.K, g.R, 2, 2, rng, oracle);
        FeVec delta = random_model(dep.submodel_len(), ctx, rng);
        SessionResult res = run_session(dep, 1, delta, rng);
        REQUIRE(res.recovered == oracle.submodel(1));
        CostReport report = measure_costs(res.ledger, dep.plan);
        REQUIRE(report.per_class.size() == 1);
        const auto& c = report.per_class[0];
        const Int denom(static_cast<std::int64_t>(c.Rprime - c.K - 1));
        CHECK(c.measured_read == Rat(Int(2 * c.Rprime), denom));
        CHECK(c.measured_write == Rat(Int(2 * c.R), denom));
        CHECK(c.exact_match);
        CHECK(report.measured_total == total_cost(Int(g.K), Int(g.R)));
        CHECK(report.within_tolerance);
    }
}

TEST_CASE("(1,4) session costs are 4 + 4") {
    Rng rng(31);
    FieldCtx ctx(kBigPrime);
    PlainOracle oracle;
    Deployment dep = single_class(1, 4, 2, 3, rng, oracle);
    FeVec delta = random_model(dep.submodel_len(), ctx, rng);
    SessionResult res = run_session(dep, 0, delta, rng);
    CHECK(res.ledger.read_cost() == Rat(4));
    CHECK(res.ledger.write_cost() == Rat(4));
    CHECK(res.ledger.total_cost() == Rat(8));
}

TEST_CASE("N=12 aggregate cost matches the planner") {
    StoragePlan plan = n12_plan();
    Rng rng(41);
    FieldCtx ctx(kBigPrime);
    FeVec model = random_model(plan.model_count * plan.submodel_len, ctx, rng);
    Deployment dep = install_plan(plan, model, kBigPrime, rng);
    PlainOracle oracle{plan.model_count, plan.submodel_len};
    oracle.w = model;
    FeVec delta = random_model(plan.submodel_len, ctx, rng);
    SessionResult res = run_session(dep, 2, delta, rng);
    REQUIRE(res.recovered == oracle.submodel(2));
    CostReport report = measure_costs(res.ledger, plan);
    CHECK(report.measured_total == Rat(Int(539), Int(90)));  // exact at aligned L
    CHECK(report.within_tolerance);
    for (const auto& c : report.per_class) CHECK(c.exact_match);
}

TEST_CASE("deployments are deterministic in the seed") {
    StoragePlan plan = n12_plan(2);
    FieldCtx ctx(kBigPrime);

    auto build = [&](std::uint64_t seed) {
        Rng rng(seed);
        FeVec model = random_model(plan.model_count * plan.submodel_len, ctx, rng);
        Deployment dep = install_plan(plan, model, kBigPrime, rng);
        FeVec delta = random_model(plan.submodel_len, ctx, rng);
        SessionResult res = run_session(dep, 1, delta, rng);
        return std::pair(std::move(dep), std::move(res));
    };
    auto [dep_a, res_a] = build(77);
    auto [dep_b, res_b] = build(77);
    auto [dep_c, res_c] = build(78);

    for (std::size_t n = 0; n < dep_a.databases.size(); ++n)
        CHECK(dep_a.databases[n].shards == dep_b.databases[n].shards);
    CHECK(res_a.recovered == res_b.recovered);
    CHECK(res_a.ledger.downloaded == res_b.ledger.downloaded);

    bool any_diff = false;
    for (std::size_t n = 0; n < dep_a.databases.size(); ++n)
        any_diff = any_diff || dep_a.databases[n].shards != dep_c.databases[n].shards;
    CHECK(any_diff);

    // snapshot bytes are identical for identical seeds
    snapshot_deployment(dep_a, "/tmp/pruw_det_a.bin");
    snapshot_deployment(dep_b, "/tmp/pruw_det_b.bin");
    std::ifstream fa("/tmp/pruw_det_a.bin", std::ios::binary);
    std::ifstream fb("/tmp/pruw_det_b.bin", std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    std::remove("/tmp/pruw_det_a.bin");
    std::remove("/tmp/pruw_det_b.bin");
}

TEST_CASE("snapshot round trip preserves state and supports new sessions") {
    Rng rng(51);
    FieldCtx ctx(kBigPrime);
    PlainOracle oracle;
    Deployment dep = single_class(2, 8, 3, 2, rng, oracle);
    FeVec delta = random_model(dep.submodel_len(), ctx, rng);
    run_session(dep, 0, delta, rng);
    oracle.apply_update(0, delta, ctx);

    const std::string path = "/tmp/pruw_snapshot_test.bin";
    snapshot_deployment(dep, path);
    Deployment restored = restore_deployment(dep.plan, path);
    for (std::size_t n = 0; n < dep.databases.size(); ++n)
        CHECK(dep.databases[n].shards == restored.databases[n].shards);
    CHECK(restored.next_session == dep.next_session);

    FeVec zero(dep.submodel_len(), 0);
    SessionResult res = run_session(restored, 0, zero, rng);
    CHECK(res.recovered == oracle.submodel(0));

    SECTION("wrong plan is refused") {
        StoragePlan other = n12_plan(3);
        CHECK_THROWS_AS(restore_deployment(other, path), Error);
    }
    SECTION("corrupt magic is refused") {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << "NOTASNAP";
        f.close();
        CHECK_THROWS_AS(restore_deployment(dep.plan, path), Error);
    }
    std::remove(path.c_str());
}

TEST_CASE("retained queries are required for incremental updates") {
    DatabaseState db;
    db.index = 3;
    CHECK_THROWS_AS(db.retained_queries(0, 0), Error);
    try {
        db.retained_queries(0, 0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ProtocolViolation);
    }
}

TEST_CASE("privacy probes at desk scale are exactly private") {
    SECTION("index probe: q=7, M=2, (1,4)") {
        ProbeReport rep = privacy_probe(ProbeMode::Index, 7, 2, 1, 4);
        CHECK(rep.enumerated);
        CHECK(rep.max_tv == Rat(0));
        CHECK(rep.pass);
    }
    SECTION("update probe: q=7, y=1, K=1") {
        ProbeReport rep = privacy_probe(ProbeMode::Update, 7, 2, 1, 4);
        CHECK(rep.enumerated);
        CHECK(rep.max_tv == Rat(0));
        CHECK(rep.pass);
    }
    SECTION("security probe: q=7, y=1, M=1") {
        ProbeReport rep = privacy_probe(ProbeMode::Security, 7, 1, 1, 4);
        CHECK(rep.enumerated);
        CHECK(rep.max_tv == Rat(0));
        CHECK(rep.uniform);
        CHECK(rep.pass);
    }
}

TEST_CASE("sampled probes pass the chi-square test at q=31") {
    ProbeOptions opts;
    opts.enumeration_budget = 1;  // force sampling
    opts.samples = 20000;
    opts.seed = 9;
    for (ProbeMode mode : {ProbeMode::Index, ProbeMode::Update, ProbeMode::Security}) {
        const std::size_t m = mode == ProbeMode::Security ? 1 : 2;
        ProbeReport rep = privacy_probe(mode, 31, m, 1, 4, opts);
        CHECK(!rep.enumerated);
        CHECK(rep.min_p_value > 0.001);
        CHECK(rep.pass);
    }
}

TEST_CASE("probe budget violations") {
    ProbeOptions opts;
    opts.enumeration_budget = 1;
    opts.allow_sampling = false;
    CHECK_THROWS_AS(privacy_probe(ProbeMode::Index, 7, 2, 1, 4, opts), Error);
    try {
        privacy_probe(ProbeMode::Index, 7, 2, 1, 4, opts);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BudgetExceeded);
    }
}
