#pragma once

// JSON form of a storage plan. Every rational is emitted both exactly
// ("num/den") and as a 6-place decimal, so downstream tools can pick either.

#include <json.hpp>

#include <string>

#include "pruw/plan.hpp"
#include "pruw/rational.hpp"

namespace pruw {

using Json = nlohmann::ordered_json;

inline Json rat_json(const Rat& x) {
    return Json{{"rat", rat_string(x)}, {"dec", decimal_string(x)}};
}

inline Json plan_to_json(const StoragePlan& plan) {
    Json j;
    Json profile;
    profile["databases"] = plan.profile.n_databases();
    Json mu = Json::array();
    for (const auto& m : plan.profile.mu) mu.push_back(rat_json(m));
    profile["mu"] = mu;
    profile["k"] = rat_json(plan.profile.k);
    profile["p"] = rat_json(plan.profile.p);
    profile["r"] = rat_json(plan.profile.r);
    profile["s"] = rat_json(plan.profile.s);
    j["profile"] = profile;

    Json decision;
    decision["c1"] = plan.decision.c1_feasible ? rat_json(plan.decision.c1) : Json(nullptr);
    decision["c2"] = plan.decision.c2_feasible ? rat_json(plan.decision.c2) : Json(nullptr);
    decision["chosen"] = plan.decision.chose_c2 ? "C2" : "C1";
    decision["chosen_cost"] = rat_json(plan.decision.chosen_cost);
    decision["alpha"] = rat_json(plan.decision.alpha);
    decision["beta"] = rat_json(plan.decision.beta);
    decision["delta"] = rat_json(plan.decision.delta);
    j["decision"] = decision;

    Json classes = Json::array();
    for (const auto& pc : plan.classes) {
        Json c;
        c["label"] = pc.code.label;
        c["K"] = to_int64(pc.code.K);
        c["R"] = to_int64(pc.code.R);
        c["Rprime"] = pc.geom.Rprime;
        c["y"] = pc.geom.y;
        c["fraction"] = rat_json(pc.code.fraction);
        c["class_cost"] = rat_json(total_cost(pc.code.K, pc.code.R));
        Json alloc = Json::array();
        for (const auto& a : pc.code.alloc) alloc.push_back(rat_json(a));
        c["alloc"] = alloc;
        Json parts = Json::array();
        for (const auto& e : pc.partitions.entries) {
            Json part;
            part["mask"] = std::to_string(e.mask);
            Json dbs = Json::array();
            for (std::size_t n = 0; n < plan.profile.n_databases(); ++n)
                if (e.mask & (std::uint64_t(1) << n)) dbs.push_back(n);
            part["dbs"] = dbs;
            part["eta"] = rat_json(e.eta);
            parts.push_back(part);
        }
        c["partitions"] = parts;
        classes.push_back(c);
    }
    j["classes"] = classes;

    j["granularity"] = plan.granularity.str();
    Json model;
    model["M"] = plan.model_count;
    model["L"] = plan.submodel_len;
    model["requested_L"] = plan.requested_len;
    model["padded"] = plan.padded;
    j["model"] = model;
    return j;
}

} // namespace pruw
