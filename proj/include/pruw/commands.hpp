#pragma once

// Command implementations behind the CLI: plan reports, simulation runs with
// correctness verdicts, and (k, p) cost sweeps. Kept separate from argv
// handling so the exit-code contract is directly testable.
//
// Exit codes: 0 success, 2 invalid config / infeasible plan,
// 3 correctness or probe failure, 4 I/O failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pruw/config.hpp"
#include "pruw/errors.hpp"
#include "pruw/plan_json.hpp"
#include "pruw/probes.hpp"
#include "pruw/session.hpp"

namespace pruw {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

inline LogLevel log_level_from_env() {
    const char* v = std::getenv("PRUW_LOG");
    if (!v) return LogLevel::Info;
    std::string s(v);
    if (s == "quiet") return LogLevel::Quiet;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

inline int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::ConfigError:
        case Errc::InvalidConstraints:
        case Errc::InfeasibleCode:
        case Errc::InvalidMixture:
        case Errc::InfeasiblePartition:
        case Errc::IncompatibleLength:
            return 2;
        case Errc::ProtocolViolation:
        case Errc::SingularSystem:
        case Errc::BudgetExceeded:
            return 3;
        default:
            return 2;
    }
}

inline int cmd_plan(const ScenarioConfig& cfg, const std::string& out_path, std::ostream& out,
                    std::ostream& err) {
    try {
        StoragePlan plan = build_plan(cfg.profile(), cfg.model_count, cfg.submodel_len, cfg.pad);
        Json j = plan_to_json(plan);
        if (cfg.modulus_defaulted)
            j["note"] = "q not given; default modulus " + std::to_string(kDefaultModulus) +
                        " applies to simulation";
        if (!out_path.empty()) {
            std::ofstream file(out_path);
            if (!file) {
                err << "cannot write plan to '" << out_path << "'\n";
                return 4;
            }
            file << j.dump(2) << "\n";
        } else {
            out << j.dump(2) << "\n";
        }
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

inline int cmd_simulate(const ScenarioConfig& cfg, std::optional<std::uint64_t> sessions_override,
                        bool run_probes, std::ostream& out, std::ostream& err) {
    const LogLevel log = log_level_from_env();
    try {
        StoragePlan plan = build_plan(cfg.profile(), cfg.model_count, cfg.submodel_len, cfg.pad);
        const std::uint64_t M = plan.model_count, L = plan.submodel_len;
        const std::uint64_t sessions = sessions_override.value_or(cfg.sessions);
        FieldCtx ctx(cfg.modulus);
        Rng rng(cfg.seed);

        if (log >= LogLevel::Info)
            out << "plan: " << plan.classes.size() << " class(es), L = " << L
                << (plan.padded ? " (padded)" : "") << ", theoretical C_T = "
                << decimal_string(plan.decision.chosen_cost) << "\n";
        if (log >= LogLevel::Debug)
            for (const auto& pc : plan.classes)
                out << "  class (" << pc.geom.K << "," << pc.geom.R << "): fraction "
                    << decimal_string(pc.code.fraction) << ", " << pc.partitions.entries.size()
                    << " partition(s), y = " << pc.geom.y << "\n";

        FeVec model(M * L);
        for (auto& v : model) v = ctx.random(rng);
        if (plan.padded)  // padding region holds zero parameters
            for (std::uint64_t m = 0; m < M; ++m)
                for (std::uint64_t i = plan.requested_len; i < L; ++i) model[m * L + i] = 0;
        Deployment dep = install_plan(plan, model, cfg.modulus, rng);
        PlainOracle oracle{M, L};
        oracle.w = model;

        bool all_ok = true;
        std::optional<SessionLedger> first_ledger;
        for (std::uint64_t s = 0; s < sessions; ++s) {
            const std::uint64_t theta = rng.below(M);
            FeVec delta(L);
            for (auto& v : delta) v = ctx.random(rng);
            if (plan.padded)
                for (std::uint64_t i = plan.requested_len; i < L; ++i) delta[i] = 0;
            SessionResult res = run_session(dep, theta, delta, rng);
            const bool read_ok = res.recovered == oracle.submodel(theta);
            oracle.apply_update(theta, delta, ctx);
            all_ok = all_ok && read_ok;
            if (!first_ledger) first_ledger = res.ledger;
            if (log >= LogLevel::Info)
                out << "session " << s + 1 << ": theta = " << theta + 1
                    << ", read " << (read_ok ? "ok" : "MISMATCH") << "\n";
        }

        // Write-correctness verdict: a final zero-update session must see the
        // oracle's state for every submodel.
        bool write_ok = true;
        for (std::uint64_t m = 0; m < M && write_ok; ++m) {
            FeVec zero(L, 0);
            SessionResult res = run_session(dep, m, zero, rng);
            write_ok = res.recovered == oracle.submodel(m);
        }
        all_ok = all_ok && write_ok;
        if (log >= LogLevel::Info)
            out << "write-back verification: " << (write_ok ? "ok" : "MISMATCH") << "\n";

        if (first_ledger) {
            CostReport report = measure_costs(*first_ledger, plan);
            out << "costs per session (" << L << " parameters/submodel):\n";
            for (const auto& c : report.per_class)
                out << "  (" << c.K << "," << c.R << "): C_R = "
                    << decimal_string(c.measured_read) << " C_W = "
                    << decimal_string(c.measured_write) << " C_T = "
                    << decimal_string(c.measured_total)
                    << (c.exact_match ? " (matches closed form)" : " (DEVIATES from closed form)")
                    << "\n";
            out << "  aggregate C_T = " << decimal_string(report.measured_total)
                << ", theoretical = " << decimal_string(report.theoretical_total)
                << (report.within_tolerance ? "" : " (OUT OF TOLERANCE)") << "\n";
            out << "  query upload (excluded from C_W): " << first_ledger->query_upload
                << " symbols\n";
            all_ok = all_ok && report.within_tolerance;
            for (const auto& c : report.per_class) all_ok = all_ok && c.exact_match;
        }

        if (run_probes) {
            for (ProbeMode mode : {ProbeMode::Index, ProbeMode::Update, ProbeMode::Security}) {
                const std::size_t probe_m = mode == ProbeMode::Security ? 1 : cfg.probe.M;
                ProbeReport rep = privacy_probe(mode, cfg.probe.q, probe_m, cfg.probe.K,
                                                cfg.probe.R, cfg.probe.options);
                out << "probe " << probe_name(mode) << ": ";
                if (rep.enumerated)
                    out << "TV distance = " << rat_string(rep.max_tv);
                else
                    out << "chi-square min p = " << rep.min_p_value;
                if (mode == ProbeMode::Security && rep.enumerated)
                    out << ", share " << (rep.uniform ? "uniform" : "NOT uniform");
                out << " -> " << (rep.pass ? "pass" : "FAIL") << " (" << rep.detail << ")\n";
                all_ok = all_ok && rep.pass;
            }
        }

        if (!all_ok) {
            err << "simulation failed a correctness assertion\n";
            return 3;
        }
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

// "a", "a:b" and "a:b:step" range specs with exact-rational grid points.
struct RangeSpec {
    Rat from, to, step;

    static RangeSpec parse(const std::string& text) {
        RangeSpec r;
        const auto c1 = text.find(':');
        if (c1 == std::string::npos) {
            r.from = r.to = parse_rational(text);
            r.step = Rat(1);
            return r;
        }
        const auto c2 = text.find(':', c1 + 1);
        r.from = parse_rational(text.substr(0, c1));
        if (c2 == std::string::npos) {
            r.to = parse_rational(text.substr(c1 + 1));
            r.step = parse_rational("0.1");
        } else {
            r.to = parse_rational(text.substr(c1 + 1, c2 - c1 - 1));
            r.step = parse_rational(text.substr(c2 + 1));
        }
        if (r.step <= Rat(0)) fail(Errc::ConfigError, "range step must be positive");
        return r;
    }

    // Empty when to < from, producing a header-only sweep.
    std::vector<Rat> values() const {
        std::vector<Rat> vals;
        for (Rat v = from; v <= to; v += step) vals.push_back(v);
        return vals;
    }
};

inline int cmd_sweep(const std::string& k_range, const std::string& p_range,
                     const std::string& csv_path, std::ostream& out, std::ostream& err) {
    try {
        std::vector<Rat> ks =
            k_range.empty() ? std::vector<Rat>{} : RangeSpec::parse(k_range).values();
        std::vector<Rat> ps =
            p_range.empty() ? std::vector<Rat>{} : RangeSpec::parse(p_range).values();

        std::ostringstream csv;
        csv << "k,p,r,s,C1,C2,chosen,alpha,beta,delta\n";
        for (const auto& k : ks) {
            for (const auto& p : ps) {
                StorageProfile prof = StorageProfile::from_kp(k, p);
                C2Weights w = c2_weights(prof);
                std::string c1_cell, c2_cell, chosen_cell;
                std::optional<Rat> c1_cost, c2_cost;
                try {
                    c1_cost = mixture_c1(prof).cost;
                    c1_cell = decimal_string(*c1_cost);
                } catch (const Error&) {
                }
                try {
                    c2_cost = mixture_cost(w.classes);
                    c2_cell = decimal_string(*c2_cost);
                } catch (const Error&) {
                }
                if (c2_cost && (!c1_cost || *c2_cost <= *c1_cost))
                    chosen_cell = decimal_string(*c2_cost);
                else if (c1_cost)
                    chosen_cell = decimal_string(*c1_cost);
                csv << decimal_string(k) << "," << decimal_string(p) << ","
                    << decimal_string(prof.r) << "," << decimal_string(prof.s) << ","
                    << c1_cell << "," << c2_cell << "," << chosen_cell << ","
                    << decimal_string(w.alpha) << "," << decimal_string(w.beta) << ","
                    << decimal_string(w.delta) << "\n";
            }
        }

        if (!csv_path.empty()) {
            std::ofstream file(csv_path, std::ios::binary);  // keep LF endings
            if (!file) {
                err << "cannot write CSV to '" << csv_path << "'\n";
                return 4;
            }
            file << csv.str();
        } else {
            out << csv.str();
        }
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace pruw
