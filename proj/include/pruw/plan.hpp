#pragma once

// Full storage plan: cost mixture decision, per-class allocations, partition
// tables and the model-length granularity they impose.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pruw/allocation.hpp"
#include "pruw/cost.hpp"
#include "pruw/errors.hpp"
#include "pruw/geometry.hpp"
#include "pruw/mixture.hpp"
#include "pruw/partition.hpp"
#include "pruw/profile.hpp"
#include "pruw/rational.hpp"

namespace pruw {

struct PlannedClass {
    CodeClass code;        // K, R, fraction, per-database alloc
    ClassGeometry geom;
    PartitionTable partitions;
};

struct StoragePlan {
    StorageProfile profile;
    MixtureDecision decision;
    std::vector<PlannedClass> classes;  // active classes of the chosen side only
    Int granularity = 1;                // minimal L making every partition whole subpackets
    std::uint64_t model_count = 0;      // M
    std::uint64_t submodel_len = 0;     // effective L (after padding, if any)
    std::uint64_t requested_len = 0;
    bool padded = false;
};

namespace detail {

// Classes + allocations for one side of the cost decision, before partitioning.
struct SideAssembly {
    Rat cost;
    std::vector<CodeClass> classes;
};

inline SideAssembly assemble_c1_side(const StorageProfile& prof) {
    SideAssembly side;
    side.classes = two_point_classes(floor_int(prof.k), prof.s, "C1");
    side.cost = mixture_cost(side.classes);
    TwoWayAllocation alloc = allocate_two_way(prof);
    side.classes[0].alloc = std::move(alloc.hat1);
    side.classes[1].alloc = std::move(alloc.hat2);
    return side;
}

inline SideAssembly assemble_c2_side(const StorageProfile& prof, const C2Weights& w) {
    SideAssembly side;
    side.classes = w.classes;
    side.cost = mixture_cost(side.classes);
    FourWayAllocation alloc = allocate_four_way(prof, w.alpha, w.beta, w.delta);
    side.classes[0].alloc = std::move(alloc.hat1);
    side.classes[1].alloc = std::move(alloc.hat2);
    side.classes[2].alloc = std::move(alloc.bar1);
    side.classes[3].alloc = std::move(alloc.bar2);
    return side;
}

} // namespace detail

// Smallest L such that every partition of every class covers a whole number
// of subpackets: lcm of the denominators of eta_i / (y*K).
inline Int plan_granularity(const std::vector<PlannedClass>& classes) {
    Int l0 = 1;
    for (const auto& pc : classes) {
        const Int per_subpacket(static_cast<std::int64_t>(pc.geom.subpacket_params()));
        for (const auto& entry : pc.partitions.entries) {
            Rat share = entry.eta / Rat(per_subpacket);
            l0 = boost::multiprecision::lcm(l0, share.denominator());
        }
    }
    return l0;
}

// Builds the complete plan: picks min(C1, C2), allocates, partitions, and
// validates the model length against the resulting granularity. L = 0 asks
// for the granularity itself.
inline StoragePlan build_plan(const StorageProfile& prof, std::uint64_t model_count,
                              std::uint64_t submodel_len, bool allow_padding = false) {
    if (prof.mu.empty()) fail(Errc::InvalidConstraints, "plan needs per-database constraints");
    if (model_count < 2) fail(Errc::InvalidConstraints, "need at least two submodels");

    std::optional<detail::SideAssembly> c1, c2;
    std::string c1_err, c2_err;
    try {
        c1 = detail::assemble_c1_side(prof);
    } catch (const Error& e) {
        c1_err = e.what();
    }

    C2Weights weights = c2_weights(prof);
    if (weights.alpha == Rat(1)) {
        // Degenerate mixture (integral k, or s = floor(r)): the C2 route
        // coincides with the C1 route.
        c2 = c1;
        c2_err = c1_err;
    } else {
        try {
            c2 = detail::assemble_c2_side(prof, weights);
        } catch (const Error& e) {
            c2_err = e.what();
        }
    }

    if (!c1 && !c2)
        fail(Errc::InfeasibleCode, "no feasible code mixture: C1: " + c1_err + "; C2: " + c2_err);

    // Ties go to C1; with alpha = 1 both routes are the same assembly anyway.
    const bool choose_c2 = c2 && (!c1 || c2->cost < c1->cost);
    const detail::SideAssembly& chosen = choose_c2 ? *c2 : *c1;

    StoragePlan plan;
    plan.profile = prof;
    plan.decision.alpha = weights.alpha;
    plan.decision.beta = weights.beta;
    plan.decision.delta = weights.delta;
    plan.decision.c1 = c1 ? c1->cost : Rat(0);
    plan.decision.c2 = c2 ? c2->cost : Rat(0);
    plan.decision.c1_feasible = c1.has_value();
    plan.decision.c2_feasible = c2.has_value();
    plan.decision.chosen_cost = chosen.cost;
    plan.decision.chose_c2 = choose_c2;
    plan.decision.classes = chosen.classes;

    for (const auto& cls : chosen.classes) {
        if (!cls.active()) continue;
        PlannedClass pc;
        pc.code = cls;
        pc.geom = ClassGeometry(static_cast<std::size_t>(to_int64(cls.K)),
                                static_cast<std::size_t>(to_int64(cls.R)));
        pc.partitions = solve_partition(cls.alloc, pc.geom.K, pc.geom.R);
        plan.classes.push_back(std::move(pc));
    }

    plan.granularity = plan_granularity(plan.classes);
    if (plan.granularity > Int(std::int64_t(1) << 62))
        fail(Errc::IncompatibleLength,
             "plan granularity " + plan.granularity.str() + " exceeds supported model lengths");
    const std::uint64_t l0 = static_cast<std::uint64_t>(to_int64(plan.granularity));

    plan.model_count = model_count;
    plan.requested_len = submodel_len;
    if (submodel_len == 0) {
        plan.submodel_len = l0;
    } else if (submodel_len % l0 == 0) {
        plan.submodel_len = submodel_len;
    } else if (allow_padding) {
        plan.submodel_len = (submodel_len / l0 + 1) * l0;
        plan.padded = true;
    } else {
        fail(Errc::IncompatibleLength, "L = " + std::to_string(submodel_len) +
                                           " is not a multiple of the plan granularity " +
                                           plan.granularity.str() + " (padding disabled)");
    }
    return plan;
}

inline StoragePlan build_plan(const std::vector<Rat>& mu, std::uint64_t model_count,
                              std::uint64_t submodel_len, bool allow_padding = false) {
    return build_plan(StorageProfile::from_mu(mu), model_count, submodel_len, allow_padding);
}

} // namespace pruw
