#include <catch2/catch_amalgamated.hpp>

#include "pruw/commands.hpp"
#include "pruw/config.hpp"
#include "pruw/plan_json.hpp"

#include <fstream>
#include <sstream>

using namespace pruw;

namespace {

const std::string kSourceDir = PRUW_SOURCE_DIR;

ScenarioConfig n12_config() { return load_config(kSourceDir + "/configs/hetero_n12.json"); }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config loading") {
    SECTION("well-formed N=12 config") {
        ScenarioConfig cfg = n12_config();
        CHECK(cfg.mu.size() == 12);
        CHECK(cfg.mu[0] == parse_rational("0.37"));
        CHECK(cfg.mu[11] == parse_rational("0.35"));
        CHECK(cfg.model_count == 4);
        CHECK(cfg.k_override.has_value());
        CHECK(*cfg.k_override == parse_rational("2.7"));
        CHECK(cfg.modulus == kDefaultModulus);
        CHECK(cfg.modulus_defaulted);  // q omitted -> default, noted in report
        CHECK(cfg.sessions == 5);
    }
    SECTION("out-of-range mu names the field") {
        nlohmann::json j = {{"mu", {"1.2"}}};
        try {
            parse_config(j);
            FAIL("expected ConfigError");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ConfigError);
            CHECK(std::string(e.what()).find("mu[0]") != std::string::npos);
        }
    }
    SECTION("float mu is rejected with advice") {
        nlohmann::json j = {{"mu", {0.37}}};
        try {
            parse_config(j);
            FAIL("expected ConfigError");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("strings") != std::string::npos);
        }
    }
    SECTION("zero mu is rejected") {
        nlohmann::json j = {{"mu", {"0"}}};
        CHECK_THROWS_AS(parse_config(j), Error);
    }
    SECTION("composite q is rejected") {
        nlohmann::json j = {{"mu", {"0.5", "0.5"}}, {"q", 10}};
        CHECK_THROWS_AS(parse_config(j), Error);
    }
    SECTION("missing file") { CHECK_THROWS_AS(load_config("/nonexistent.json"), Error); }
    SECTION("parse error carries diagnostics") {
        const std::string path = "/tmp/pruw_bad.json";
        std::ofstream(path) << "{ not json";
        try {
            load_config(path);
            FAIL("expected ConfigError");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("parse error") != std::string::npos);
        }
        std::remove(path.c_str());
    }
}

TEST_CASE("cmd_plan") {
    SECTION("N=12 config emits the reference numbers") {
        std::ostringstream out, err;
        const int rc = cmd_plan(n12_config(), "", out, err);
        REQUIRE(rc == 0);
        auto j = nlohmann::json::parse(out.str());
        CHECK(j["decision"]["chosen"] == "C2");
        CHECK(j["decision"]["c1"]["dec"] == "6.600000");
        CHECK(j["decision"]["c2"]["dec"] == "5.988889");
        CHECK(j["decision"]["alpha"]["rat"] == "2/9");
        CHECK(j["decision"]["beta"]["rat"] == "1");
        CHECK(j["decision"]["delta"]["rat"] == "9/70");
        CHECK(j["classes"].size() == 3);
        CHECK(j.contains("note"));  // q defaulted
    }
    SECTION("infeasible constraints exit 2") {
        ScenarioConfig cfg;
        cfg.mu = {Rat(1), Rat(1), Rat(1)};
        std::ostringstream out, err;
        CHECK(cmd_plan(cfg, "", out, err) == 2);
        CHECK(err.str().find("InfeasibleCode") != std::string::npos);
    }
    SECTION("plan golden files are byte-stable") {
        struct Golden {
            const char* config;
            const char* golden;
        } cases[] = {
            {"/configs/hetero_n12.json", "/tests/golden/hetero_n12_plan.json"},
            {"/configs/homogeneous_4_8.json", "/tests/golden/homogeneous_4_8_plan.json"},
        };
        for (const auto& g : cases) {
            std::ostringstream out, err;
            REQUIRE(cmd_plan(load_config(kSourceDir + g.config), "", out, err) == 0);
            CHECK(out.str() == slurp(kSourceDir + g.golden));
        }
    }
}

TEST_CASE("cmd_simulate") {
    SECTION("homogeneous config passes with probes") {
        ScenarioConfig cfg = load_config(kSourceDir + "/configs/homogeneous_4_8.json");
        std::ostringstream out, err;
        const int rc = cmd_simulate(cfg, 2, true, out, err);
        CAPTURE(out.str(), err.str());
        REQUIRE(rc == 0);
        CHECK(out.str().find("read ok") != std::string::npos);
        CHECK(out.str().find("TV distance = 0") != std::string::npos);
        CHECK(out.str().find("FAIL") == std::string::npos);
    }
    SECTION("incompatible L without padding exits 2") {
        ScenarioConfig cfg = n12_config();
        cfg.submodel_len = 12345;  // granularity is 70200
        cfg.pad = false;
        std::ostringstream out, err;
        CHECK(cmd_simulate(cfg, 1, false, out, err) == 2);
        CHECK(err.str().find("IncompatibleLength") != std::string::npos);
    }
}

TEST_CASE("cmd_sweep") {
    SECTION("single reference point") {
        std::ostringstream out, err;
        REQUIRE(cmd_sweep("2.7", "4.3", "", out, err) == 0);
        const std::string csv = out.str();
        CHECK(csv.find("k,p,r,s,C1,C2,chosen,alpha,beta,delta\n") == 0);
        CHECK(csv.find("2.700000,4.300000,11.610000,8.600000,6.600000,5.988889,5.988889,"
                       "0.222222,1.000000,0.128571") != std::string::npos);
    }
    SECTION("deterministic across runs") {
        std::ostringstream a, b, err;
        REQUIRE(cmd_sweep("1:3:0.5", "2:4:0.5", "", a, err) == 0);
        REQUIRE(cmd_sweep("1:3:0.5", "2:4:0.5", "", b, err) == 0);
        CHECK(a.str() == b.str());
        CHECK(a.str().find("\r") == std::string::npos);  // LF only
    }
    SECTION("infeasible points leave cost cells empty") {
        std::ostringstream out, err;
        REQUIRE(cmd_sweep("1", "2", "", out, err) == 0);
        // k=1, p=2: both mixtures land on the infeasible (1,2) code
        CHECK(out.str().find("1.000000,2.000000,2.000000,2.000000,,,,") != std::string::npos);
    }
    SECTION("empty range produces a header-only CSV") {
        std::ostringstream out, err;
        REQUIRE(cmd_sweep("", "", "", out, err) == 0);
        CHECK(out.str() == "k,p,r,s,C1,C2,chosen,alpha,beta,delta\n");
    }
}

TEST_CASE("error exit-code mapping") {
    CHECK(exit_code_for(Error(Errc::ConfigError, "x")) == 2);
    CHECK(exit_code_for(Error(Errc::InfeasibleCode, "x")) == 2);
    CHECK(exit_code_for(Error(Errc::IncompatibleLength, "x")) == 2);
    CHECK(exit_code_for(Error(Errc::ProtocolViolation, "x")) == 3);
    CHECK(exit_code_for(Error(Errc::BudgetExceeded, "x")) == 3);
}

TEST_CASE("range spec parsing") {
    RangeSpec single = RangeSpec::parse("2.7");
    CHECK(single.values() == std::vector<Rat>{parse_rational("2.7")});
    RangeSpec pair = RangeSpec::parse("1:1.3");
    CHECK(pair.values().size() == 4);  // default step 0.1
    RangeSpec full = RangeSpec::parse("1:2:0.5");
    CHECK(full.values() == std::vector<Rat>{Rat(1), parse_rational("1.5"), Rat(2)});
    CHECK_THROWS_AS(RangeSpec::parse("1:2:0"), Error);
    CHECK(RangeSpec::parse("3:1:1").values().empty());
}
