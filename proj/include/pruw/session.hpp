#pragma once

// Deployment construction and full read-update-write sessions across all
// code classes and partitions, with symbol-exact cost metering.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pruw/database.hpp"
#include "pruw/errors.hpp"
#include "pruw/plan.hpp"
#include "pruw/protocol.hpp"
#include "pruw/rng.hpp"

namespace pruw {

// Uncoded model mirror kept by the harness; ground truth for read/write
// correctness assertions.
struct PlainOracle {
    std::uint64_t M = 0, L = 0;
    FeVec w;  // w[m*L + pos]

    PlainOracle() = default;
    PlainOracle(std::uint64_t m, std::uint64_t l) : M(m), L(l), w(m * l, 0) {}

    FeVec submodel(std::uint64_t m) const {
        return FeVec(w.begin() + m * L, w.begin() + (m + 1) * L);
    }

    void apply_update(std::uint64_t theta, const FeVec& delta, const FieldCtx& ctx) {
        for (std::uint64_t i = 0; i < L; ++i)
            w[theta * L + i] = ctx.add(w[theta * L + i], delta[i]);
    }
};

struct ClassCounts {
    std::uint64_t downloaded = 0;  // answer symbols
    std::uint64_t uploaded = 0;    // combined-update symbols
    std::uint64_t subpackets = 0;
};

struct SessionLedger {
    std::uint64_t downloaded = 0;    // answer symbols, all classes
    std::uint64_t uploaded = 0;      // combined-update symbols, all classes
    std::uint64_t query_upload = 0;  // reading-phase query symbols, metered separately
    std::uint64_t submodel_len = 0;
    std::vector<ClassCounts> per_class;

    Rat read_cost() const { return Rat(Int(downloaded), Int(submodel_len)); }
    Rat write_cost() const { return Rat(Int(uploaded), Int(submodel_len)); }
    Rat total_cost() const { return read_cost() + write_cost(); }
};

struct SessionResult {
    FeVec recovered;  // submodel theta as read before the update was applied
    SessionLedger ledger;
};

// Encodes the model under the plan and fills every database exactly.
// model holds M*L symbols, L = plan.submodel_len.
inline Deployment install_plan(const StoragePlan& plan, const FeVec& model, Fe modulus,
                               Rng& rng) {
    const std::uint64_t M = plan.model_count, L = plan.submodel_len;
    if (model.size() != M * L)
        fail(Errc::IncompatibleLength, "model must hold M*L = " + std::to_string(M * L) +
                                           " symbols, got " + std::to_string(model.size()));

    FieldCtx ctx(modulus);
    const std::size_t n_db = plan.profile.n_databases();

    std::vector<ClassShape> shapes;
    std::vector<ClassGeometry> geoms;
    for (const auto& pc : plan.classes) {
        geoms.push_back(pc.geom);
        shapes.push_back({pc.geom.y, pc.geom.K});
    }
    Rng const_rng = rng.fork(0xC0);
    Rng noise_rng = rng.fork(0x2A);

    Deployment dep{plan, ctx, gen_constants(ctx, n_db, shapes, const_rng), std::move(geoms),
                   {}, {}, 0};

    dep.databases.resize(n_db);
    for (std::size_t n = 0; n < n_db; ++n) {
        dep.databases[n].index = n;
        dep.databases[n].capacity = plan.profile.mu[n] * Rat(Int(M) * Int(L));
    }

    // Resolve partitions against L and hand each its parameter range.
    std::uint64_t offset = 0;
    for (std::size_t c = 0; c < plan.classes.size(); ++c) {
        const auto& pc = plan.classes[c];
        const std::uint64_t sub_params = pc.geom.subpacket_params();
        for (const auto& entry : pc.partitions.entries) {
            Rat params = entry.eta * Rat(Int(L));
            if (!is_integer(params) || params.numerator() % sub_params != 0)
                fail(Errc::IncompatibleLength,
                     "L is not aligned with the plan granularity");
            PartitionLayout pl;
            pl.cls = c;
            pl.mask = entry.mask;
            pl.members = mask_members(entry.mask, n_db);
            pl.readers = read_targets(pl.members, pc.geom);
            pl.n_subpackets =
                static_cast<std::uint64_t>(to_int64(params.numerator())) / sub_params;
            pl.param_offset = offset;
            offset += pl.n_subpackets * sub_params;
            dep.partitions.push_back(std::move(pl));
        }
    }
    if (offset != L) fail(Errc::IncompatibleLength, "partitions do not cover the model exactly");

    for (auto& db : dep.databases) db.shards.resize(dep.partitions.size());

    // Encode subpacket by subpacket; the shard layout is subpacket-major.
    for (std::size_t p = 0; p < dep.partitions.size(); ++p) {
        const auto& pl = dep.partitions[p];
        const auto& geom = dep.geoms[pl.cls];
        const std::uint64_t sub_params = geom.subpacket_params();
        for (auto n : pl.members)
            dep.databases[n].shards[p].reserve(pl.n_subpackets * geom.y * M);

        SubpacketPlain plain(M, geom.y, geom.K);
        for (std::uint64_t u = 0; u < pl.n_subpackets; ++u) {
            const std::uint64_t base = pl.param_offset + u * sub_params;
            for (std::uint64_t m = 0; m < M; ++m)
                for (std::size_t j = 0; j < geom.y; ++j)
                    for (std::size_t i = 0; i < geom.K; ++i)
                        plain.at(m, j, i) = model[m * L + base + j * geom.K + i];
            StorageNoise noise = StorageNoise::random(M, geom.y, ctx, noise_rng);
            for (auto n : pl.members) {
                FeVec s = encode_subpacket(plain, noise, dep.pool, pl.cls, n);
                auto& shard = dep.databases[n].shards[p];
                shard.insert(shard.end(), s.begin(), s.end());
            }
        }
    }
    return dep;
}

// One full session: private read of submodel theta, then private write of
// delta (length L) onto it. Returns the submodel as read, pre-update.
inline SessionResult run_session(Deployment& dep, std::uint64_t theta, const FeVec& delta,
                                 Rng& rng) {
    const std::uint64_t M = dep.model_count(), L = dep.submodel_len();
    if (theta >= M) fail(Errc::ProtocolViolation, "submodel index out of range");
    if (delta.size() != L) fail(Errc::ProtocolViolation, "delta must have length L");
    const FieldCtx& ctx = dep.ctx;
    const std::uint64_t session = dep.next_session++;

    SessionResult res;
    res.recovered.assign(L, 0);
    res.ledger.submodel_len = L;
    res.ledger.per_class.resize(dep.plan.classes.size());

    // Reading phase: one query set per class, delivered to every database
    // holding that class (including the dropped reader of even R-K classes,
    // which needs it for the writing phase).
    std::vector<std::vector<bool>> in_class(dep.plan.classes.size(),
                                            std::vector<bool>(dep.databases.size(), false));
    for (const auto& pl : dep.partitions)
        for (auto n : pl.members) in_class[pl.cls][n] = true;

    Rng session_rng = rng.fork(session + 1);
    for (std::size_t c = 0; c < dep.plan.classes.size(); ++c) {
        const auto& geom = dep.geoms[c];
        QueryNoise qnoise = QueryNoise::random(M, geom.y, geom.K, ctx, session_rng);
        std::vector<std::size_t> targets;
        for (std::size_t n = 0; n < dep.databases.size(); ++n)
            if (in_class[c][n]) targets.push_back(n);
        ReadQuerySet queries =
            gen_read_queries(theta, M, qnoise, dep.pool, c, targets);
        for (std::size_t slot = 0; slot < targets.size(); ++slot) {
            dep.databases[targets[slot]].retained[{session, c}] = queries.q[slot];
            res.ledger.query_upload += geom.K * geom.y * M;
        }
    }

    // Download and decode, partition by partition.
    for (std::size_t p = 0; p < dep.partitions.size(); ++p) {
        const auto& pl = dep.partitions[p];
        const auto& geom = dep.geoms[pl.cls];
        const std::uint64_t sub_params = geom.subpacket_params();

        std::vector<DecodeSolver> solvers;
        solvers.reserve(geom.K);
        for (std::size_t l = 0; l < geom.K; ++l)
            solvers.emplace_back(dep.pool, pl.cls, geom, pl.readers, l);

        FeVec answers(geom.Rprime);
        for (std::uint64_t u = 0; u < pl.n_subpackets; ++u) {
            const std::uint64_t base = pl.param_offset + u * sub_params;
            for (std::size_t l = 0; l < geom.K; ++l) {
                for (std::size_t slot = 0; slot < pl.readers.size(); ++slot) {
                    const auto& db = dep.databases[pl.readers[slot]];
                    const FeVec& query = db.retained_queries(session, pl.cls)[l];
                    const Fe* sp = db.shards[p].data() + u * geom.y * M;
                    Fe acc = 0;
                    for (std::size_t i = 0; i < geom.y * M; ++i)
                        acc = ctx.add(acc, ctx.mul(sp[i], query[i]));
                    answers[slot] = acc;
                }
                res.ledger.downloaded += geom.Rprime;
                res.ledger.per_class[pl.cls].downloaded += geom.Rprime;
                FeVec col = solvers[l].decode(answers);
                for (std::size_t j = 0; j < geom.y; ++j)
                    res.recovered[base + j * geom.K + l] = col[j];
            }
            res.ledger.per_class[pl.cls].subpackets += 1;
        }
    }

    // Writing phase: K combined updates per database per subpacket; every
    // member applies the incremental expansion using its retained queries.
    for (std::size_t p = 0; p < dep.partitions.size(); ++p) {
        const auto& pl = dep.partitions[p];
        const auto& geom = dep.geoms[pl.cls];
        const std::uint64_t sub_params = geom.subpacket_params();

        FeMat delta_block(geom.y, FeVec(geom.K, 0));
        for (std::uint64_t u = 0; u < pl.n_subpackets; ++u) {
            const std::uint64_t base = pl.param_offset + u * sub_params;
            for (std::size_t j = 0; j < geom.y; ++j)
                for (std::size_t i = 0; i < geom.K; ++i)
                    delta_block[j][i] = delta[base + j * geom.K + i];
            WriteNoise wnoise = WriteNoise::random(geom.K, ctx, session_rng);

            for (auto n : pl.members) {
                FeVec u_syms = gen_write_updates(delta_block, wnoise, dep.pool, pl.cls, geom, n);
                res.ledger.uploaded += geom.K;
                res.ledger.per_class[pl.cls].uploaded += geom.K;

                auto& db = dep.databases[n];
                const auto& queries = db.retained_queries(session, pl.cls);
                std::vector<FeVec> incs;
                incs.reserve(geom.K);
                for (std::size_t l = 0; l < geom.K; ++l)
                    incs.push_back(
                        incremental_update(u_syms[l], queries[l], dep.pool, pl.cls, geom, n, M));
                Fe* sp = db.shards[p].data() + u * geom.y * M;
                for (const auto& inc : incs)
                    for (std::size_t i = 0; i < geom.y * M; ++i) sp[i] = ctx.add(sp[i], inc[i]);
            }
        }
    }
    return res;
}

struct ClassCostReport {
    std::size_t K = 0, R = 0, Rprime = 0, y = 0;
    Rat measured_read, measured_write, measured_total;
    Rat formula_read, formula_write, formula_total;
    bool exact_match = false;
};

struct CostReport {
    std::vector<ClassCostReport> per_class;
    Rat measured_total;      // aggregate C_T = (D + U) / L
    Rat theoretical_total;   // sum over classes of fraction * C_T(K, R)
    Rat tolerance;           // 2 * max subpacket size / L
    bool within_tolerance = false;
};

// Per-class cost identities and the aggregate check against the planner's
// theoretical cost. Per-class costs are normalized by the parameters the
// class actually carried (subpackets * y * K).
inline CostReport measure_costs(const SessionLedger& ledger, const StoragePlan& plan) {
    CostReport report;
    std::uint64_t max_sub = 1;
    for (std::size_t c = 0; c < plan.classes.size(); ++c) {
        const auto& pc = plan.classes[c];
        const auto& counts = ledger.per_class[c];
        ClassCostReport cr;
        cr.K = pc.geom.K;
        cr.R = pc.geom.R;
        cr.Rprime = pc.geom.Rprime;
        cr.y = pc.geom.y;
        const Int carried(counts.subpackets * pc.geom.subpacket_params());
        cr.measured_read = Rat(Int(counts.downloaded), carried);
        cr.measured_write = Rat(Int(counts.uploaded), carried);
        cr.measured_total = cr.measured_read + cr.measured_write;
        const Int denom(static_cast<std::int64_t>(pc.geom.Rprime - pc.geom.K - 1));
        cr.formula_read = Rat(Int(2 * pc.geom.Rprime), denom);
        cr.formula_write = Rat(Int(2 * pc.geom.R), denom);
        cr.formula_total = cr.formula_read + cr.formula_write;
        cr.exact_match =
            cr.measured_read == cr.formula_read && cr.measured_write == cr.formula_write;
        report.per_class.push_back(cr);
        max_sub = std::max<std::uint64_t>(max_sub, pc.geom.subpacket_params());
    }

    report.measured_total = ledger.total_cost();
    report.theoretical_total = Rat(0);
    for (const auto& pc : plan.classes)
        report.theoretical_total += pc.code.fraction * total_cost(pc.code.K, pc.code.R);
    report.tolerance = Rat(Int(2 * max_sub), Int(ledger.submodel_len));
    Rat dev = report.measured_total - report.theoretical_total;
    if (dev < Rat(0)) dev = -dev;
    report.within_tolerance = dev <= report.tolerance * report.theoretical_total;
    return report;
}

} // namespace pruw
