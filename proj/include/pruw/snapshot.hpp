#pragma once

// Binary snapshot/restore of deployed database states. The file carries the
// field modulus, the resolved geometry table, the evaluation constants and
// the raw storage symbols (little-endian u64). Retained queries are
// session-scoped and not serialized; snapshots are taken between sessions.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "pruw/database.hpp"
#include "pruw/errors.hpp"
#include "pruw/session.hpp"

namespace pruw {

namespace detail {

constexpr char kSnapshotMagic[8] = {'P', 'R', 'U', 'W', 'D', 'B', 'S', '1'};

inline void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

inline std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

} // namespace detail

inline void snapshot_deployment(const Deployment& dep, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::ConfigError, "cannot open snapshot file '" + path + "' for writing");
    using namespace detail;

    out.write(kSnapshotMagic, 8);
    write_u32(out, 1);  // version
    write_u64(out, dep.ctx.q);
    write_u32(out, static_cast<std::uint32_t>(dep.databases.size()));
    write_u64(out, dep.model_count());
    write_u64(out, dep.submodel_len());
    write_u64(out, dep.next_session);

    write_u32(out, static_cast<std::uint32_t>(dep.geoms.size()));
    for (const auto& g : dep.geoms) {
        write_u32(out, static_cast<std::uint32_t>(g.K));
        write_u32(out, static_cast<std::uint32_t>(g.R));
    }
    write_u32(out, static_cast<std::uint32_t>(dep.partitions.size()));
    for (const auto& pl : dep.partitions) {
        write_u32(out, static_cast<std::uint32_t>(pl.cls));
        write_u64(out, pl.mask);
        write_u64(out, pl.n_subpackets);
    }

    for (Fe a : dep.pool.alphas) write_u64(out, a);
    for (const auto& grid : dep.pool.f_grids)
        for (const auto& row : grid)
            for (Fe v : row) write_u64(out, v);

    for (std::size_t p = 0; p < dep.partitions.size(); ++p)
        for (auto n : dep.partitions[p].members)
            for (Fe v : dep.databases[n].shards[p]) write_u64(out, v);

    if (!out) fail(Errc::ConfigError, "short write to snapshot file '" + path + "'");
}

// Restores states against a plan re-derived by the caller; the header must
// agree with the plan's geometry or the restore is refused.
inline Deployment restore_deployment(const StoragePlan& plan, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::ConfigError, "cannot open snapshot file '" + path + "'");
    using namespace detail;

    char magic[8];
    in.read(magic, 8);
    if (!in || std::string(magic, 8) != std::string(kSnapshotMagic, 8))
        fail(Errc::ConfigError, "not a PRUW snapshot file");
    if (read_u32(in) != 1) fail(Errc::ConfigError, "unsupported snapshot version");

    const std::uint64_t q = read_u64(in);
    const std::uint32_t n_db = read_u32(in);
    const std::uint64_t m_count = read_u64(in);
    const std::uint64_t s_len = read_u64(in);
    const std::uint64_t next_session = read_u64(in);

    if (n_db != plan.profile.n_databases() || m_count != plan.model_count ||
        s_len != plan.submodel_len)
        fail(Errc::ConfigError, "snapshot dimensions do not match the plan");

    FieldCtx ctx(q);
    Deployment dep{plan, ctx, ConstantsPool{ctx, {}, {}}, {}, {}, {}, next_session};

    const std::uint32_t n_classes = read_u32(in);
    if (n_classes != plan.classes.size())
        fail(Errc::ConfigError, "snapshot class table does not match the plan");
    for (std::uint32_t c = 0; c < n_classes; ++c) {
        const std::uint32_t k = read_u32(in), r = read_u32(in);
        const auto& geom = plan.classes[c].geom;
        if (k != geom.K || r != geom.R)
            fail(Errc::ConfigError, "snapshot geometry table does not match the plan");
        dep.geoms.push_back(geom);
    }

    const std::uint32_t n_parts = read_u32(in);
    std::uint64_t offset = 0;
    for (std::uint32_t p = 0; p < n_parts; ++p) {
        PartitionLayout pl;
        pl.cls = read_u32(in);
        pl.mask = read_u64(in);
        pl.n_subpackets = read_u64(in);
        if (pl.cls >= dep.geoms.size()) fail(Errc::ConfigError, "snapshot partition table corrupt");
        pl.members = mask_members(pl.mask, n_db);
        pl.readers = read_targets(pl.members, dep.geoms[pl.cls]);
        pl.param_offset = offset;
        offset += pl.n_subpackets * dep.geoms[pl.cls].subpacket_params();
        dep.partitions.push_back(std::move(pl));
    }
    if (offset != s_len) fail(Errc::ConfigError, "snapshot partitions do not cover the model");

    dep.pool.alphas.resize(n_db);
    for (auto& a : dep.pool.alphas) a = read_u64(in);
    for (const auto& geom : dep.geoms) {
        FeMat grid(geom.y, FeVec(geom.K));
        for (auto& row : grid)
            for (auto& v : row) v = read_u64(in);
        dep.pool.f_grids.push_back(std::move(grid));
    }

    dep.databases.resize(n_db);
    for (std::size_t n = 0; n < n_db; ++n) {
        dep.databases[n].index = n;
        dep.databases[n].capacity =
            plan.profile.mu[n] * Rat(Int(m_count) * Int(s_len));
        dep.databases[n].shards.resize(dep.partitions.size());
    }
    for (std::size_t p = 0; p < dep.partitions.size(); ++p) {
        const auto& pl = dep.partitions[p];
        const std::size_t shard_len = pl.n_subpackets * dep.geoms[pl.cls].y * m_count;
        for (auto n : pl.members) {
            auto& shard = dep.databases[n].shards[p];
            shard.resize(shard_len);
            for (auto& v : shard) v = read_u64(in);
        }
    }
    if (!in) fail(Errc::ConfigError, "snapshot file truncated");
    return dep;
}

} // namespace pruw
