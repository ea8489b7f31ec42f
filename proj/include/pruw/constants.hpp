#pragma once

// Globally known evaluation constants: one alpha per database plus a y-by-K
// grid of f constants per code class. Every 1/(f - alpha) term in the scheme
// exists because the generator keeps f values disjoint from every alpha.

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "pruw/errors.hpp"
#include "pruw/field.hpp"
#include "pruw/rng.hpp"

namespace pruw {

struct ClassShape {
    std::size_t y = 0;  // coded symbols per subpacket
    std::size_t K = 0;  // parameters per coded symbol
};

struct ConstantsPool {
    FieldCtx ctx;
    FeVec alphas;                 // alphas[n], one per database
    std::vector<FeMat> f_grids;   // per class: f[j][i], j < y, i < K

    Fe alpha(std::size_t db) const {
        if (db >= alphas.size()) fail(Errc::ProtocolViolation, "database index out of range");
        return alphas[db];
    }

    const FeMat& f(std::size_t cls) const {
        if (cls >= f_grids.size()) fail(Errc::ProtocolViolation, "class index out of range");
        return f_grids[cls];
    }
};

// Draws N + sum(y*K) distinct nonzero elements, deterministically for a fixed
// seed. Zero is excluded so query and update noise multipliers never vanish.
inline ConstantsPool gen_constants(const FieldCtx& ctx, std::size_t n_databases,
                                   const std::vector<ClassShape>& shapes, Rng& rng) {
    std::size_t needed = n_databases;
    for (const auto& s : shapes) needed += s.y * s.K;
    if (ctx.q - 1 < needed)
        fail(Errc::FieldTooSmall, "need " + std::to_string(needed) +
                                      " distinct nonzero constants, field has " +
                                      std::to_string(ctx.q - 1));

    std::set<Fe> used;
    auto draw = [&]() {
        Fe v;
        do {
            v = 1 + rng.below(ctx.q - 1);
        } while (used.count(v));
        used.insert(v);
        return v;
    };

    ConstantsPool pool{ctx, {}, {}};
    pool.alphas.reserve(n_databases);
    for (std::size_t n = 0; n < n_databases; ++n) pool.alphas.push_back(draw());
    for (const auto& s : shapes) {
        FeMat grid(s.y, FeVec(s.K, 0));
        for (std::size_t j = 0; j < s.y; ++j)
            for (std::size_t i = 0; i < s.K; ++i) grid[j][i] = draw();
        pool.f_grids.push_back(std::move(grid));
    }
    return pool;
}

} // namespace pruw
