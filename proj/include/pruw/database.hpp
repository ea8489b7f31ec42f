#pragma once

// In-process database state machines plus the deployed-system bundle. The
// costs of interest are symbol counts, so databases are plain state holders and
// the ledger meters symbols at the call boundary.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "pruw/constants.hpp"
#include "pruw/errors.hpp"
#include "pruw/field.hpp"
#include "pruw/geometry.hpp"
#include "pruw/plan.hpp"
#include "pruw/rational.hpp"

namespace pruw {

// One partition of one class, resolved against a concrete model length.
struct PartitionLayout {
    std::size_t cls = 0;                 // index into plan.classes
    std::uint64_t mask = 0;
    std::vector<std::size_t> members;    // R database indices, ascending
    std::vector<std::size_t> readers;    // the R' read-phase participants
    std::uint64_t n_subpackets = 0;      // per submodel
    std::uint64_t param_offset = 0;      // first parameter this partition covers
};

struct DatabaseState {
    std::size_t index = 0;
    Rat capacity;                        // mu(n) * M * L symbols
    // shards[partition_id]: n_subpackets * (y*M) symbols; empty if not a member
    std::vector<FeVec> shards;
    // queries retained from the reading phase, keyed by (session, class):
    // K vectors of y*M symbols each
    std::map<std::pair<std::uint64_t, std::size_t>, std::vector<FeVec>> retained;

    std::uint64_t occupied_symbols() const {
        std::uint64_t total = 0;
        for (const auto& s : shards) total += s.size();
        return total;
    }

    const std::vector<FeVec>& retained_queries(std::uint64_t session, std::size_t cls) const {
        auto it = retained.find({session, cls});
        if (it == retained.end())
            fail(Errc::ProtocolViolation, "database " + std::to_string(index) +
                                              " holds no retained query for this session");
        return it->second;
    }
};

struct Deployment {
    StoragePlan plan;
    FieldCtx ctx;
    ConstantsPool pool;
    std::vector<ClassGeometry> geoms;          // aligned with plan.classes
    std::vector<PartitionLayout> partitions;   // all classes, in plan order
    std::vector<DatabaseState> databases;
    std::uint64_t next_session = 0;

    std::uint64_t submodel_len() const { return plan.submodel_len; }
    std::uint64_t model_count() const { return plan.model_count; }
};

inline std::vector<std::size_t> mask_members(std::uint64_t mask, std::size_t n_db) {
    std::vector<std::size_t> members;
    for (std::size_t n = 0; n < n_db; ++n)
        if (mask & (std::uint64_t(1) << n)) members.push_back(n);
    return members;
}

} // namespace pruw
