#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "pruw/allocation.hpp"
#include "pruw/field.hpp"
#include "pruw/partition.hpp"
#include "pruw/profile.hpp"
#include "pruw/protocol.hpp"
#include "pruw/rational.hpp"

namespace oracle {

using namespace pruw;

// Exhaustive inverse search.
inline std::optional<Fe> brute_inverse(Fe q, Fe x) {
    for (Fe y = 0; y < q; ++y)
        if (x * y % q == 1) return y;
    return std::nullopt;
}

// Brute-force 2x2 solve by scanning all q^2 candidate vectors.
inline std::optional<FeVec> brute_solve2(Fe q, const FeMat& a, const FeVec& b) {
    for (Fe x0 = 0; x0 < q; ++x0)
        for (Fe x1 = 0; x1 < q; ++x1) {
            const Fe r0 = (a[0][0] * x0 + a[0][1] * x1) % q;
            const Fe r1 = (a[1][0] * x0 + a[1][1] * x1) % q;
            if (r0 == b[0] && r1 == b[1]) return FeVec{x0, x1};
        }
    return std::nullopt;
}

// Total-cost oracle: runs one real subpacket session for a (K, R) class and
// counts the symbols that actually crossed the protocol boundary, normalized
// by the parameters recovered. Aborts (returns nullopt) if the round trip is
// not exact, so a count can never come from a broken transcript.
inline std::optional<Rat> session_cost(std::size_t K, std::size_t R, std::uint64_t seed = 17) {
    const Fe q = 2147483647ULL;
    FieldCtx ctx(q);
    ClassGeometry geom(K, R);
    Rng rng(seed);
    ConstantsPool pool = gen_constants(ctx, R, {{geom.y, K}}, rng);
    const std::size_t M = 3;

    std::vector<std::size_t> all_dbs(R);
    std::iota(all_dbs.begin(), all_dbs.end(), 0);
    const std::vector<std::size_t> readers = read_targets(all_dbs, geom);

    SubpacketPlain plain(M, geom.y, K);
    for (auto& v : plain.w) v = ctx.random(rng);
    StorageNoise snoise = StorageNoise::random(M, geom.y, ctx, rng);
    std::vector<FeVec> storage(R);
    for (std::size_t n = 0; n < R; ++n) storage[n] = encode_subpacket(plain, snoise, pool, 0, n);

    const std::size_t theta = 1;
    QueryNoise qnoise = QueryNoise::random(M, geom.y, K, ctx, rng);
    ReadQuerySet queries = gen_read_queries(theta, M, qnoise, pool, 0, all_dbs);

    std::uint64_t downloaded = 0, uploaded = 0;
    std::vector<FeVec> answers(K);
    for (std::size_t l = 0; l < K; ++l)
        for (std::size_t slot = 0; slot < readers.size(); ++slot) {
            answers[l].push_back(
                answer_query(storage[readers[slot]], queries.query(readers[slot], l), ctx));
            downloaded += 1;
        }
    FeMat decoded = decode_answers(answers, readers, pool, 0, geom);
    for (std::size_t j = 0; j < geom.y; ++j)
        for (std::size_t l = 0; l < K; ++l)
            if (decoded[j][l] != plain.at(theta, j, l)) return std::nullopt;

    FeMat delta(geom.y, FeVec(K));
    for (auto& row : delta)
        for (auto& v : row) v = ctx.random(rng);
    WriteNoise wnoise = WriteNoise::random(K, ctx, rng);
    for (std::size_t n = 0; n < R; ++n) {
        FeVec u = gen_write_updates(delta, wnoise, pool, 0, geom, n);
        uploaded += u.size();
        std::vector<FeVec> incs;
        for (std::size_t l = 0; l < K; ++l)
            incs.push_back(incremental_update(u[l], queries.query(n, l), pool, 0, geom, n, M));
        apply_updates(storage[n], incs, ctx);
    }

    QueryNoise qnoise2 = QueryNoise::random(M, geom.y, K, ctx, rng);
    ReadQuerySet queries2 = gen_read_queries(theta, M, qnoise2, pool, 0, all_dbs);
    for (std::size_t l = 0; l < K; ++l) {
        answers[l].clear();
        for (std::size_t slot = 0; slot < readers.size(); ++slot)
            answers[l].push_back(
                answer_query(storage[readers[slot]], queries2.query(readers[slot], l), ctx));
    }
    FeMat reread = decode_answers(answers, readers, pool, 0, geom);
    for (std::size_t j = 0; j < geom.y; ++j)
        for (std::size_t l = 0; l < K; ++l)
            if (reread[j][l] != ctx.add(plain.at(theta, j, l), delta[j][l])) return std::nullopt;

    const std::uint64_t params = geom.subpacket_params();
    return Rat(Int(downloaded + uploaded), Int(params));
}

// Constraint oracle for the storage allocators: verifies class totals, the
// per-database caps and the exact-fill identity by direct substitution.
struct AllocCheck {
    bool totals = false, caps = false, fill = false;
    bool ok() const { return totals && caps && fill; }
};

inline AllocCheck check_four_way(const StorageProfile& prof, const Rat& alpha, const Rat& beta,
                                 const Rat& delta, const FourWayAllocation& a) {
    AllocCheck res;
    const Rat one(1);
    const Rat k_lo(floor_int(prof.k)), k_hi(ceil_int(prof.k));
    const Rat r_lo(floor_int(prof.r)), r_hi(ceil_int(prof.r));

    auto sum = [](const std::vector<Rat>& v) {
        Rat s(0);
        for (const auto& x : v) s += x;
        return s;
    };
    res.totals = sum(a.hat1) == alpha * beta * r_lo / k_lo &&
                 sum(a.hat2) == alpha * (one - beta) * r_hi / k_lo &&
                 sum(a.bar1) == (one - alpha) * delta * r_lo / k_hi &&
                 sum(a.bar2) == (one - alpha) * (one - delta) * r_hi / k_hi;

    res.caps = true;
    res.fill = true;
    for (std::size_t n = 0; n < prof.mu.size(); ++n) {
        res.caps = res.caps && a.hat1[n] <= alpha * beta / k_lo &&
                   a.hat2[n] <= alpha * (one - beta) / k_lo &&
                   a.bar1[n] <= (one - alpha) * delta / k_hi &&
                   a.bar2[n] <= (one - alpha) * (one - delta) / k_hi &&
                   a.hat1[n] >= Rat(0) && a.hat2[n] >= Rat(0) && a.bar1[n] >= Rat(0) &&
                   a.bar2[n] >= Rat(0);
        res.fill = res.fill && a.hat1[n] + a.hat2[n] + a.bar1[n] + a.bar2[n] == prof.mu[n];
    }
    return res;
}

inline AllocCheck check_two_way(const StorageProfile& prof, const TwoWayAllocation& a) {
    AllocCheck res;
    const Rat one(1);
    const Rat k_lo(floor_int(prof.k));
    const Rat s_lo(floor_int(prof.s)), s_hi(ceil_int(prof.s));
    const Rat& beta = a.beta;

    auto sum = [](const std::vector<Rat>& v) {
        Rat s(0);
        for (const auto& x : v) s += x;
        return s;
    };
    res.totals =
        sum(a.hat1) == beta * s_lo / k_lo && sum(a.hat2) == (one - beta) * s_hi / k_lo;
    res.caps = true;
    res.fill = true;
    for (std::size_t n = 0; n < prof.mu.size(); ++n) {
        res.caps = res.caps && a.hat1[n] <= beta / k_lo && a.hat2[n] <= (one - beta) / k_lo &&
                   a.hat1[n] >= Rat(0) && a.hat2[n] >= Rat(0);
        res.fill = res.fill && a.hat1[n] + a.hat2[n] == prof.mu[n];
    }
    return res;
}

// Exact re-summation of a partition table against its allocation vector.
inline bool check_partition_table(const std::vector<Rat>& alloc, std::size_t K, std::size_t R,
                                  const PartitionTable& table) {
    std::vector<Rat> resum(alloc.size(), Rat(0));
    for (const auto& e : table.entries) {
        if (e.eta <= Rat(0)) return false;
        std::size_t bits = 0;
        for (std::size_t n = 0; n < alloc.size(); ++n)
            if (e.mask & (std::uint64_t(1) << n)) {
                resum[n] += e.eta / Rat(static_cast<std::int64_t>(K));
                ++bits;
            }
        if (bits != R) return false;
    }
    return resum == alloc;
}

// Deterministic random profile with exact small-denominator entries.
inline StorageProfile random_profile(Rng& rng, std::size_t min_db = 4, std::size_t max_db = 14) {
    const std::size_t n = min_db + rng.below(max_db - min_db + 1);
    const std::int64_t den = 20 + 10 * rng.below(9);  // 20..100
    std::vector<Rat> mu;
    for (std::size_t i = 0; i < n; ++i)
        mu.push_back(Rat(Int(1 + static_cast<std::int64_t>(rng.below(den))), Int(den)));
    return StorageProfile::from_mu(mu);
}

} // namespace oracle
