#pragma once

// Submodel partitioning: decompose a per-database allocation vector into
// partitions (eta_i, b_i), each replicating an eta_i fraction of every
// submodel on the R-database subset b_i, consuming the allocation exactly.

#include <algorithm>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "pruw/errors.hpp"
#include "pruw/rational.hpp"

namespace pruw {

struct PartitionEntry {
    std::uint64_t mask = 0;  // bit n set -> database n is in the subset
    Rat eta;
};

struct PartitionTable {
    std::vector<PartitionEntry> entries;

    Rat eta_sum() const {
        Rat sum(0);
        for (const auto& e : entries) sum += e.eta;
        return sum;
    }
};

// Necessary and sufficient feasibility condition: no database may demand more
// than a 1/R share of the class's total space.
inline bool check_condition(const std::vector<Rat>& alloc, std::size_t R) {
    Rat total(0);
    for (const auto& a : alloc) total += a;
    for (const auto& a : alloc)
        if (a * Rat(static_cast<std::int64_t>(R)) > total) return false;
    return true;
}

// Greedy water-filling: repeatedly place one partition on the R fullest
// databases, sized so that either some member empties or an excluded database
// rises to the remaining-fraction water level. Each step retires one of those
// two events, so the loop ends after at most ~2N partitions. Ties break on
// the lowest database index to keep plans deterministic.
inline PartitionTable solve_partition(const std::vector<Rat>& alloc, std::size_t K,
                                      std::size_t R) {
    const std::size_t n_db = alloc.size();
    if (R < 1 || R > n_db) fail(Errc::InfeasiblePartition, "replication exceeds database count");
    if (n_db > 64) fail(Errc::InfeasiblePartition, "more than 64 databases not supported");
    if (!check_condition(alloc, R))
        fail(Errc::InfeasiblePartition, "allocation violates the max <= sum/R condition");

    const Rat k_rat(static_cast<std::int64_t>(K));
    std::vector<Rat> work(n_db);
    Rat remaining(0);
    for (std::size_t n = 0; n < n_db; ++n) {
        work[n] = alloc[n] * k_rat;
        remaining += work[n];
    }
    remaining /= Rat(static_cast<std::int64_t>(R));  // total fraction still to place

    PartitionTable table;
    std::vector<std::size_t> order(n_db);
    const std::size_t max_steps = 4 * n_db + 16;
    for (std::size_t step = 0; remaining > Rat(0); ++step) {
        if (step >= max_steps) fail(Errc::InfeasiblePartition, "partition solver did not settle");

        for (std::size_t n = 0; n < n_db; ++n) order[n] = n;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return work[a] > work[b]; });

        Rat member_min = work[order[R - 1]];
        Rat outside_max(0);
        if (R < n_db) outside_max = work[order[R]];

        Rat eta = rat_min(member_min, remaining - outside_max);
        if (eta <= Rat(0))
            fail(Errc::InfeasiblePartition, "no feasible step; allocation inconsistent");

        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < R; ++i) {
            mask |= std::uint64_t(1) << order[i];
            work[order[i]] -= eta;
        }
        table.entries.push_back({mask, eta});
        remaining -= eta;
    }
    return table;
}

} // namespace pruw
