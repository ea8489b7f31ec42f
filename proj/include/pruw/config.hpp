#pragma once

// Scenario configuration files. Storage fractions are accepted as decimal or
// num/den strings and parsed to exact rationals; non-integral JSON numbers
// are rejected so planner inputs never inherit binary-float rounding.

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "pruw/errors.hpp"
#include "pruw/field.hpp"
#include "pruw/probes.hpp"
#include "pruw/profile.hpp"
#include "pruw/rational.hpp"

namespace pruw {

constexpr Fe kDefaultModulus = 2147483647;  // 2^31 - 1

struct ProbeConfig {
    Fe q = 7;
    std::size_t M = 2;
    std::size_t K = 1;
    std::size_t R = 4;
    ProbeOptions options;
};

struct ScenarioConfig {
    std::vector<Rat> mu;
    std::uint64_t model_count = 2;   // M
    std::uint64_t submodel_len = 0;  // L; 0 selects the plan granularity
    Fe modulus = kDefaultModulus;    // q
    bool modulus_defaulted = true;
    std::uint64_t seed = 1;
    bool pad = false;
    std::optional<Rat> k_override;
    std::uint64_t sessions = 3;
    ProbeConfig probe;

    StorageProfile profile() const {
        if (k_override) return StorageProfile::from_mu_with_k(mu, *k_override);
        return StorageProfile::from_mu(mu);
    }
};

namespace detail {

inline Rat json_rational(const nlohmann::json& v, const std::string& field) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rat(Int(v.get<std::int64_t>()));
    if (v.is_number_float())
        fail(Errc::ConfigError, "field '" + field +
                                    "': write fractions as strings (e.g. \"0.37\") so they "
                                    "stay exact");
    fail(Errc::ConfigError, "field '" + field + "' must be a rational string or integer");
}

} // namespace detail

inline ScenarioConfig parse_config(const nlohmann::json& j) {
    ScenarioConfig cfg;
    if (!j.is_object()) fail(Errc::ConfigError, "config root must be a JSON object");
    if (!j.contains("mu") || !j["mu"].is_array() || j["mu"].empty())
        fail(Errc::ConfigError, "field 'mu' must be a non-empty array of fractions");

    for (std::size_t n = 0; n < j["mu"].size(); ++n) {
        Rat m = detail::json_rational(j["mu"][n], "mu[" + std::to_string(n) + "]");
        if (m <= Rat(0) || m > Rat(1))
            fail(Errc::ConfigError,
                 "field 'mu[" + std::to_string(n) + "]' must lie in (0, 1]");
        cfg.mu.push_back(m);
    }
    if (cfg.mu.size() > 64) fail(Errc::ConfigError, "at most 64 databases supported");

    if (j.contains("M")) {
        if (!j["M"].is_number_unsigned() && !j["M"].is_number_integer())
            fail(Errc::ConfigError, "field 'M' must be an integer");
        const auto m = j["M"].get<std::int64_t>();
        if (m < 2) fail(Errc::ConfigError, "field 'M' must be at least 2");
        cfg.model_count = static_cast<std::uint64_t>(m);
    }
    if (j.contains("L")) {
        const auto l = j["L"].get<std::int64_t>();
        if (l < 0) fail(Errc::ConfigError, "field 'L' must be non-negative");
        cfg.submodel_len = static_cast<std::uint64_t>(l);
    }
    if (j.contains("q")) {
        const auto q = j["q"].get<std::int64_t>();
        if (q < 2) fail(Errc::ConfigError, "field 'q' must be a prime >= 2");
        cfg.modulus = static_cast<Fe>(q);
        cfg.modulus_defaulted = false;
        FieldCtx probe_ctx(cfg.modulus);  // validates primality
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("pad")) cfg.pad = j["pad"].get<bool>();
    if (j.contains("k")) cfg.k_override = detail::json_rational(j["k"], "k");
    if (j.contains("sessions")) {
        const auto s = j["sessions"].get<std::int64_t>();
        if (s < 1) fail(Errc::ConfigError, "field 'sessions' must be positive");
        cfg.sessions = static_cast<std::uint64_t>(s);
    }
    if (j.contains("probe")) {
        const auto& p = j["probe"];
        if (p.contains("q")) cfg.probe.q = p["q"].get<std::uint64_t>();
        if (p.contains("M")) cfg.probe.M = p["M"].get<std::size_t>();
        if (p.contains("K")) cfg.probe.K = p["K"].get<std::size_t>();
        if (p.contains("R")) cfg.probe.R = p["R"].get<std::size_t>();
        if (p.contains("samples")) cfg.probe.options.samples = p["samples"].get<std::size_t>();
        if (p.contains("budget"))
            cfg.probe.options.enumeration_budget = p["budget"].get<std::uint64_t>();
    }
    cfg.probe.options.seed = cfg.seed;
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ConfigError, "cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Errc::ConfigError, std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

} // namespace pruw
