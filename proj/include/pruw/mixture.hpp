#pragma once

// Code-mixture selection: which MDS code classes carry which fraction of
// every submodel. C1 mixes two floor(k) codes around s; C2 mixes up to four
// codes around (k, r) with weights alpha, beta, delta chosen by the branch
// conditions on the parity of floor(r) - floor(k).

#include <string>
#include <vector>

#include "pruw/cost.hpp"
#include "pruw/errors.hpp"
#include "pruw/profile.hpp"
#include "pruw/rational.hpp"

namespace pruw {

struct CodeClass {
    Int K = 1;
    Int R = 0;
    Rat fraction;            // share of every submodel stored under this code
    std::vector<Rat> alloc;  // per-database space share, filled by the allocator
    std::string label;       // "C1-lo", "C2-3", ... for reports

    bool active() const { return fraction > Rat(0); }
};

// Weighted two-code mixture around a replication target x: (ceil(x)-x) parts
// (a, floor(x)) and (x-floor(x)) parts (a, ceil(x)). Integral x collapses to
// a single active (a, x) class carried in the hi slot, matching the beta = 0
// convention of the two-way allocator.
inline std::vector<CodeClass> two_point_classes(const Int& a, const Rat& x,
                                                const std::string& tag) {
    std::vector<CodeClass> classes;
    if (is_integer(x)) {
        classes.push_back({a, x.numerator(), Rat(0), {}, tag + "-lo"});
        classes.push_back({a, x.numerator(), Rat(1), {}, tag + "-hi"});
    } else {
        classes.push_back({a, floor_int(x), rat_ceil(x) - x, {}, tag + "-lo"});
        classes.push_back({a, ceil_int(x), x - rat_floor(x), {}, tag + "-hi"});
    }
    return classes;
}

// Sum of fraction-weighted class costs. Zero-fraction classes are skipped;
// an infeasible class that actually carries data raises InfeasibleCode.
inline Rat mixture_cost(const std::vector<CodeClass>& classes) {
    Rat cost(0);
    for (const auto& c : classes) {
        if (!c.active()) continue;
        cost += c.fraction * total_cost(c.K, c.R);
    }
    return cost;
}

struct C1Mixture {
    Rat cost;
    std::vector<CodeClass> classes;
};

inline C1Mixture mixture_c1(const StorageProfile& prof) {
    C1Mixture m;
    m.classes = two_point_classes(floor_int(prof.k), prof.s, "C1");
    m.cost = mixture_cost(m.classes);
    return m;
}

// The k = 1 special case: replication only, no coding. Its cost depends on
// the profile through p alone.
inline C1Mixture mixture_uncoded(const StorageProfile& prof) {
    C1Mixture m;
    m.classes = two_point_classes(Int(1), prof.p, "U");
    m.cost = mixture_cost(m.classes);
    return m;
}

struct C2Weights {
    Rat alpha, beta, delta;
    std::vector<CodeClass> classes;  // class order: (lo,lo),(lo,hi),(hi,lo),(hi,hi)
};

// alpha/beta/delta selection. Total over the whole (k, p) domain: integral k
// collapses onto the floor(k) pair (the delta branch would otherwise divide
// 0/0), and integral r makes the hi-R classes vanish through beta = delta = 1.
inline C2Weights c2_weights(const StorageProfile& prof) {
    const Rat& k = prof.k;
    const Rat& r = prof.r;
    const Int k_lo = floor_int(k), k_hi = ceil_int(k);
    const Int r_lo = floor_int(r), r_hi = ceil_int(r);
    const Rat r_frac = frac_part(r);
    const Rat k_frac = frac_part(k);

    C2Weights w;
    if (is_integer(k)) {
        // floor(k) = ceil(k): both code pairs coincide, weights follow C1 with
        // s = r. delta is inert and reported as 1.
        w.alpha = Rat(1);
        w.beta = is_integer(r) ? Rat(1) : rat_ceil(r) - r;
        w.delta = Rat(1);
    } else if ((r_lo - k_lo) % 2 != 0) {  // odd floor(r) - floor(k)
        const bool steep = r_frac > k_frac;
        if (steep && prof.s <= Rat(r_lo)) {
            w.alpha = Rat(k_lo) * (prof.p * Rat(k_hi) - Rat(r_hi)) / Rat(k_hi * r_lo - k_lo * r_hi);
        } else {
            w.alpha = Rat(k_lo) / k * (Rat(k_hi) - k);
        }
        w.beta = (steep && prof.s > Rat(r_lo)) ? (rat_ceil(r) - r) / (rat_ceil(k) - k) : Rat(1);
        w.delta = (r_frac <= k_frac) ? Rat(1) - r_frac / k_frac : Rat(0);
    } else {  // even floor(r) - floor(k)
        const bool small_frac = r_frac < Rat(k_hi) - k;
        if (small_frac) {
            w.alpha = Rat(k_lo) / k * (Rat(k_hi) - k);
            w.beta = Rat(1) - r_frac / (Rat(k_hi) - k);
        } else {
            w.alpha = Rat(k_lo) * (prof.p * Rat(k_hi) - Rat(r_lo)) / Rat(k_hi * r_hi - k_lo * r_lo);
            w.beta = Rat(0);
        }
        w.delta = Rat(1);
    }

    const Rat one(1);
    w.classes = {
        {k_lo, r_lo, w.alpha * w.beta, {}, "C2-1"},
        {k_lo, r_hi, w.alpha * (one - w.beta), {}, "C2-2"},
        {k_hi, r_lo, (one - w.alpha) * w.delta, {}, "C2-3"},
        {k_hi, r_hi, (one - w.alpha) * (one - w.delta), {}, "C2-4"},
    };
    return w;
}

struct C2Mixture {
    Rat cost;
    C2Weights weights;
};

inline C2Mixture mixture_c2(const StorageProfile& prof) {
    C2Mixture m;
    m.weights = c2_weights(prof);
    m.cost = mixture_cost(m.weights.classes);
    return m;
}

struct MixtureDecision {
    Rat alpha, beta, delta;
    Rat c1, c2, chosen_cost;
    bool c1_feasible = false;
    bool c2_feasible = false;
    bool chose_c2 = false;
    std::vector<CodeClass> classes;  // class shells of the chosen side
};

} // namespace pruw
