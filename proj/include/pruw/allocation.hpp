#pragma once

// Per-database storage allocations (water-filling splits). Both allocators
// share one primitive: split a capacity vector into two child vectors with
// prescribed totals such that no child entry exceeds its per-database cap.
// m(n) is the amount the first child must take (the rest of the database is
// claimed by the second child's cap), h(n) the converse, and gamma blends the
// slack so the totals come out exactly.

#include <cstddef>
#include <vector>

#include "pruw/errors.hpp"
#include "pruw/mixture.hpp"
#include "pruw/profile.hpp"
#include "pruw/rational.hpp"

namespace pruw {

struct SplitTrace {
    std::vector<Rat> m, h;
    Rat gamma;
};

struct SplitResult {
    std::vector<Rat> first, second;
    SplitTrace trace;
};

// Splits `mu` into (first, second) with sum(first) = first_total, respecting
// first(n) <= cap_first and second(n) <= cap_second. Requires the caps to be
// consistent with the totals (the callers' admissibility bounds guarantee this).
inline SplitResult split_allocation(const std::vector<Rat>& mu, const Rat& first_total,
                                    const Rat& cap_first, const Rat& cap_second) {
    const std::size_t n_db = mu.size();
    SplitResult res;
    res.trace.m.resize(n_db);
    res.trace.h.resize(n_db);
    res.first.resize(n_db);
    res.second.resize(n_db);

    Rat total(0), sum_m(0), sum_h(0);
    for (std::size_t n = 0; n < n_db; ++n) {
        total += mu[n];
        res.trace.m[n] = pos_part(mu[n] - cap_second);
        res.trace.h[n] = pos_part(mu[n] - cap_first);
        sum_m += res.trace.m[n];
        sum_h += res.trace.h[n];
    }

    const Rat denom = total - sum_m - sum_h;
    Rat gamma(0);
    if (denom != Rat(0)) {
        gamma = (first_total - sum_m) / denom;
    } else if (first_total != sum_m) {
        fail(Errc::InvalidMixture, "allocation split has no slack but totals disagree");
    }
    res.trace.gamma = gamma;

    for (std::size_t n = 0; n < n_db; ++n) {
        const Rat slack = mu[n] - res.trace.m[n] - res.trace.h[n];
        res.first[n] = res.trace.m[n] + slack * gamma;
        res.second[n] = res.trace.h[n] + slack * (Rat(1) - gamma);
    }
    return res;
}

struct AllocationTrace {
    SplitTrace top;     // mu -> (hat, bar); unused by the alpha = 1 split
    SplitTrace hat;     // hat -> (hat1, hat2), the beta split
    SplitTrace bar;     // bar -> (bar1, bar2), the delta split
    std::vector<Rat> hat_mu, bar_mu;
};

struct TwoWayAllocation {
    Rat beta;
    std::vector<Rat> hat1, hat2;  // (floor(k), floor(s)) and (floor(k), ceil(s)) shares
    AllocationTrace trace;
};

// alpha = 1 regime: the whole model lives on floor(k) codes with replication
// targets floor(s)/ceil(s); beta is pinned to ceil(s) - s.
inline TwoWayAllocation allocate_two_way(const StorageProfile& prof) {
    if (prof.mu.empty()) fail(Errc::InvalidConstraints, "allocation needs a mu vector");
    const Rat k_lo(floor_int(prof.k));
    const Rat& s = prof.s;
    const Rat beta = rat_ceil(s) - s;

    TwoWayAllocation out;
    out.beta = beta;
    if (beta == Rat(0) || beta == Rat(1)) {
        out.hat1.resize(prof.mu.size());
        out.hat2.resize(prof.mu.size());
        for (std::size_t n = 0; n < prof.mu.size(); ++n) {
            out.hat1[n] = prof.mu[n] * beta;
            out.hat2[n] = prof.mu[n] * (Rat(1) - beta);
        }
        return out;
    }

    const Rat target = rat_floor(s) / k_lo * beta;       // sum of hat1
    const Rat cap1 = beta / k_lo;                        // per-db cap, class (k_lo, floor(s))
    const Rat cap2 = (Rat(1) - beta) / k_lo;             // per-db cap, class (k_lo, ceil(s))
    SplitResult split = split_allocation(prof.mu, target, cap1, cap2);
    out.hat1 = std::move(split.first);
    out.hat2 = std::move(split.second);
    out.trace.hat = std::move(split.trace);
    return out;
}

struct FourWayAllocation {
    std::vector<Rat> hat1, hat2;  // (floor(k), floor(r)/ceil(r)) shares
    std::vector<Rat> bar1, bar2;  // (ceil(k), floor(r)/ceil(r)) shares
    AllocationTrace trace;
};

// alpha < 1 regime: first split every database between the floor(k) and
// ceil(k) code families, then split each family across its two replication
// levels. Replication targets generalize ceil(r) - beta so integral r (where
// floor and ceil coincide) stays exact.
inline FourWayAllocation allocate_four_way(const StorageProfile& prof, const Rat& alpha, const Rat& beta,
                                const Rat& delta) {
    if (prof.mu.empty()) fail(Errc::InvalidConstraints, "allocation needs a mu vector");
    const Rat zero(0), one(1);
    if (alpha < zero || alpha >= one || beta < zero || beta > one || delta < zero || delta > one)
        fail(Errc::InvalidMixture, "alpha must be in [0,1) and beta, delta in [0,1]");

    const Rat k_lo(floor_int(prof.k)), k_hi(ceil_int(prof.k));
    const Rat r_lo(floor_int(prof.r)), r_hi(ceil_int(prof.r));
    const Rat r_frac = frac_part(prof.r);

    // Admissibility bounds on (alpha, beta, delta).
    if (alpha < k_lo / prof.k * (k_hi - prof.k))
        fail(Errc::InvalidMixture, "alpha below the floor(k)/k(ceil(k)-k) bound");
    if (alpha > zero && beta < pos_part(one - k_lo * r_frac / (prof.k * alpha)))
        fail(Errc::InvalidMixture, "beta below its admissible bound");
    if (delta < pos_part(one - k_hi * r_frac / (prof.k * (one - alpha))))
        fail(Errc::InvalidMixture, "delta below its admissible bound");

    const Rat hat_total = alpha * (beta * r_lo + (one - beta) * r_hi) / k_lo;
    const Rat bar_total = (one - alpha) * (delta * r_lo + (one - delta) * r_hi) / k_hi;

    FourWayAllocation out;
    SplitResult top = split_allocation(prof.mu, hat_total, alpha / k_lo, (one - alpha) / k_hi);
    out.trace.top = std::move(top.trace);
    out.trace.hat_mu = std::move(top.first);
    out.trace.bar_mu = std::move(top.second);

    auto split_pair = [&](const std::vector<Rat>& parent, const Rat& weight, const Rat& share,
                          const Rat& k_val, SplitTrace& trace_slot) {
        std::vector<Rat> lo(parent.size()), hi(parent.size());
        if (weight == zero || weight == one) {
            for (std::size_t n = 0; n < parent.size(); ++n) {
                lo[n] = parent[n] * weight;
                hi[n] = parent[n] * (one - weight);
            }
        } else {
            const Rat lo_total = share * weight * r_lo / k_val;
            const Rat cap_lo = share * weight / k_val;
            const Rat cap_hi = share * (one - weight) / k_val;
            SplitResult sp = split_allocation(parent, lo_total, cap_lo, cap_hi);
            lo = std::move(sp.first);
            hi = std::move(sp.second);
            trace_slot = std::move(sp.trace);
        }
        return std::pair(std::move(lo), std::move(hi));
    };

    auto [hat1, hat2] = split_pair(out.trace.hat_mu, beta, alpha, k_lo, out.trace.hat);
    auto [bar1, bar2] = split_pair(out.trace.bar_mu, delta, one - alpha, k_hi, out.trace.bar);
    out.hat1 = std::move(hat1);
    out.hat2 = std::move(hat2);
    out.bar1 = std::move(bar1);
    out.bar2 = std::move(bar2);
    return out;
}

} // namespace pruw
