#pragma once

// The read/update/write scheme for one (K, R) code class, stated per
// subpacket: y coded symbols of every submodel, each packing K parameters
// behind Cauchy-style 1/(f - alpha) terms, masked by a degree-y noise
// polynomial in alpha.
//
// Layouts (all row-major, 0-based):
//   plaintext  w[m][j][i]   submodel m, coded symbol j, slot i
//   storage    s[j*M + m]   per database: y blocks of M entries
//   queries    q[j*M + m]   same shape as storage

#include <algorithm>
#include <cstddef>
#include <vector>

#include "pruw/constants.hpp"
#include "pruw/errors.hpp"
#include "pruw/field.hpp"
#include "pruw/geometry.hpp"
#include "pruw/rng.hpp"

namespace pruw {

struct SubpacketPlain {
    std::size_t M = 0, y = 0, K = 0;
    FeVec w;  // M*y*K

    SubpacketPlain(std::size_t m, std::size_t y_, std::size_t k)
        : M(m), y(y_), K(k), w(m * y_ * k, 0) {}

    Fe& at(std::size_t m, std::size_t j, std::size_t i) { return w[(m * y + j) * K + i]; }
    Fe at(std::size_t m, std::size_t j, std::size_t i) const { return w[(m * y + j) * K + i]; }
};

// Storage noise Z_{j,t}: y*(y+1) vectors of length M, drawn by the
// initializer. The zeros() hook exists for unit tests only.
struct StorageNoise {
    std::size_t M = 0, y = 0;
    FeVec z;  // y*(y+1)*M

    Fe at(std::size_t j, std::size_t t, std::size_t m) const { return z[(j * (y + 1) + t) * M + m]; }

    static StorageNoise zeros(std::size_t m, std::size_t y_) {
        return {m, y_, FeVec(y_ * (y_ + 1) * m, 0)};
    }
    static StorageNoise random(std::size_t m, std::size_t y_, const FieldCtx& ctx, Rng& rng) {
        StorageNoise n{m, y_, FeVec(y_ * (y_ + 1) * m)};
        for (auto& v : n.z) v = ctx.random(rng);
        return n;
    }
};

// Query noise Z~_{j,l}: y*K vectors of length M, drawn by the user once per
// session and shared across every database and subpacket of the class.
struct QueryNoise {
    std::size_t M = 0, y = 0, K = 0;
    FeVec z;  // y*K*M

    Fe at(std::size_t j, std::size_t l, std::size_t m) const { return z[(j * K + l) * M + m]; }

    static QueryNoise zeros(std::size_t m, std::size_t y_, std::size_t k) {
        return {m, y_, k, FeVec(y_ * k * m, 0)};
    }
    static QueryNoise random(std::size_t m, std::size_t y_, std::size_t k, const FieldCtx& ctx,
                             Rng& rng) {
        QueryNoise n{m, y_, k, FeVec(y_ * k * m)};
        for (auto& v : n.z) v = ctx.random(rng);
        return n;
    }
};

// Update noise z^_l: K scalars, fresh per subpacket, shared across databases.
struct WriteNoise {
    FeVec z;  // K

    static WriteNoise zeros(std::size_t k) { return {FeVec(k, 0)}; }
    static WriteNoise random(std::size_t k, const FieldCtx& ctx, Rng& rng) {
        WriteNoise n{FeVec(k)};
        for (auto& v : n.z) v = ctx.random(rng);
        return n;
    }
};

// Storage of one subpacket at database db : Cauchy-coded data plus
// the noise polynomial evaluated at alpha_db.
inline FeVec encode_subpacket(const SubpacketPlain& plain, const StorageNoise& noise,
                              const ConstantsPool& pool, std::size_t cls, std::size_t db) {
    const FeMat& f = pool.f(cls);
    const FieldCtx& ctx = pool.ctx;
    const std::size_t y = plain.y, K = plain.K, M = plain.M;
    const Fe alpha = pool.alpha(db);

    FeVec s(y * M, 0);
    for (std::size_t j = 0; j < y; ++j) {
        for (std::size_t i = 0; i < K; ++i) {
            const Fe coeff = ctx.inv(ctx.sub(f[j][i], alpha));
            for (std::size_t m = 0; m < M; ++m)
                s[j * M + m] = ctx.add(s[j * M + m], ctx.mul(coeff, plain.at(m, j, i)));
        }
        Fe alpha_pow = 1;
        for (std::size_t t = 0; t <= y; ++t) {
            for (std::size_t m = 0; m < M; ++m)
                s[j * M + m] = ctx.add(s[j * M + m], ctx.mul(alpha_pow, noise.at(j, t, m)));
            alpha_pow = ctx.mul(alpha_pow, alpha);
        }
    }
    return s;
}

struct ReadQuerySet {
    std::size_t M = 0, y = 0, K = 0;
    std::vector<std::size_t> dbs;          // database indices, aligned with queries
    std::vector<std::vector<FeVec>> q;     // q[db_slot][l], each of length y*M

    const FeVec& query(std::size_t db_slot, std::size_t l) const { return q[db_slot][l]; }
};

// Queries hiding e_M(theta) behind the shared query noise. theta is 0-based.
inline ReadQuerySet gen_read_queries(std::size_t theta, std::size_t n_models,
                                     const QueryNoise& noise, const ConstantsPool& pool,
                                     std::size_t cls, const std::vector<std::size_t>& dbs) {
    const FeMat& f = pool.f(cls);
    const FieldCtx& ctx = pool.ctx;
    const std::size_t y = noise.y, K = noise.K, M = n_models;
    if (theta >= M) fail(Errc::ProtocolViolation, "submodel index out of range");

    ReadQuerySet set{M, y, K, dbs, {}};
    set.q.resize(dbs.size());
    for (std::size_t slot = 0; slot < dbs.size(); ++slot) {
        const Fe alpha = pool.alpha(dbs[slot]);
        set.q[slot].assign(K, FeVec(y * M, 0));
        for (std::size_t l = 0; l < K; ++l) {
            FeVec& out = set.q[slot][l];
            for (std::size_t j = 0; j < y; ++j) {
                Fe num = 1, den = 1, full = 1;
                for (std::size_t i = 0; i < K; ++i) {
                    const Fe fa = ctx.sub(f[j][i], alpha);
                    full = ctx.mul(full, fa);
                    if (i == l) continue;
                    num = ctx.mul(num, fa);
                    den = ctx.mul(den, ctx.sub(f[j][i], f[j][l]));
                }
                const Fe e_coeff = ctx.mul(num, ctx.inv(den));
                out[j * M + theta] = ctx.add(out[j * M + theta], e_coeff);
                for (std::size_t m = 0; m < M; ++m)
                    out[j * M + m] = ctx.add(out[j * M + m], ctx.mul(full, noise.at(j, l, m)));
            }
        }
    }
    return set;
}

// A_{n,l} = S_n . Q_{n,l}
inline Fe answer_query(const FeVec& storage, const FeVec& query, const FieldCtx& ctx) {
    return dot(storage, query, ctx);
}

// Exact decoder for one class and one slot l: R' answers determine the y
// submodel symbols plus the K+y+1 coefficients of the nuisance polynomial.
class DecodeSolver {
public:
    DecodeSolver(const ConstantsPool& pool, std::size_t cls, const ClassGeometry& geom,
                 const std::vector<std::size_t>& read_dbs, std::size_t l)
        : y_(geom.y), ctx_(pool.ctx) {
        if (read_dbs.size() != geom.Rprime)
            fail(Errc::ProtocolViolation, "decoder needs answers from exactly R' databases");
        const FeMat& f = pool.f(cls);
        const FieldCtx& ctx = pool.ctx;
        const std::size_t dim = geom.Rprime;  // y + (K + y + 1)

        FeMat a(dim, FeVec(dim, 0));
        for (std::size_t row = 0; row < dim; ++row) {
            const Fe alpha = pool.alpha(read_dbs[row]);
            for (std::size_t j = 0; j < y_; ++j)
                a[row][j] = ctx.inv(ctx.sub(f[j][l], alpha));
            Fe alpha_pow = 1;
            for (std::size_t t = 0; t + y_ < dim; ++t) {
                a[row][y_ + t] = alpha_pow;
                alpha_pow = ctx.mul(alpha_pow, alpha);
            }
        }
        inverse_ = invert_matrix(std::move(a), ctx);
    }

    // Returns the y submodel symbols W_{theta,j}^{[l]}.
    FeVec decode(const FeVec& answers) const {
        if (answers.size() != inverse_.size())
            fail(Errc::ProtocolViolation, "answer count does not match decoder dimension");
        FeVec w(y_, 0);
        for (std::size_t j = 0; j < y_; ++j)
            w[j] = dot(inverse_[j], answers, ctx_);
        return w;
    }

private:
    std::size_t y_;
    FieldCtx ctx_;
    FeMat inverse_;
};

// One-shot decode of a full subpacket: answers[l][slot] for the R' read
// databases, returning w[j][l].
inline FeMat decode_answers(const std::vector<FeVec>& answers,
                            const std::vector<std::size_t>& read_dbs, const ConstantsPool& pool,
                            std::size_t cls, const ClassGeometry& geom) {
    if (answers.size() != geom.K) fail(Errc::ProtocolViolation, "need K answer groups");
    FeMat w(geom.y, FeVec(geom.K, 0));
    for (std::size_t l = 0; l < geom.K; ++l) {
        DecodeSolver solver(pool, cls, geom, read_dbs, l);
        FeVec col = solver.decode(answers[l]);
        for (std::size_t j = 0; j < geom.y; ++j) w[j][l] = col[j];
    }
    return w;
}

// Combined update U_{n,l}: the y rescaled deltas of slot l, Lagrange-encoded
// over the f column and evaluated at alpha_n, plus masking noise.
// delta[j][l] is the update of parameter (j, l); all R databases get one.
inline FeVec gen_write_updates(const FeMat& delta, const WriteNoise& noise,
                               const ConstantsPool& pool, std::size_t cls,
                               const ClassGeometry& geom, std::size_t db) {
    const FeMat& f = pool.f(cls);
    const FieldCtx& ctx = pool.ctx;
    const std::size_t y = geom.y, K = geom.K;
    const Fe alpha = pool.alpha(db);

    FeVec u(K, 0);
    for (std::size_t l = 0; l < K; ++l) {
        Fe acc = 0;
        for (std::size_t j = 0; j < y; ++j) {
            // delta rescaling: prod_{i != l} (f_{j,i} - f_{j,l})
            // over prod_{i != j} (f_{i,l} - f_{j,l}).
            Fe num = 1, den = 1, basis = 1;
            for (std::size_t i = 0; i < K; ++i)
                if (i != l) num = ctx.mul(num, ctx.sub(f[j][i], f[j][l]));
            for (std::size_t i = 0; i < y; ++i) {
                if (i == j) continue;
                den = ctx.mul(den, ctx.sub(f[i][l], f[j][l]));
                basis = ctx.mul(basis, ctx.sub(f[i][l], alpha));
            }
            const Fe scaled = ctx.mul(delta[j][l], ctx.mul(num, ctx.inv(den)));
            acc = ctx.add(acc, ctx.mul(basis, scaled));
        }
        Fe full = 1;
        for (std::size_t i = 0; i < y; ++i) full = ctx.mul(full, ctx.sub(f[i][l], alpha));
        u[l] = ctx.add(acc, ctx.mul(full, noise.z[l]));
    }
    return u;
}

// Database-side expansion of one masked symbol into a storage-shaped additive
// update: U * diag(1/prod_i(f_{j,i} - alpha)) * Q_{n,l}.
inline FeVec incremental_update(Fe u, const FeVec& query, const ConstantsPool& pool,
                                std::size_t cls, const ClassGeometry& geom, std::size_t db,
                                std::size_t n_models) {
    const FeMat& f = pool.f(cls);
    const FieldCtx& ctx = pool.ctx;
    const std::size_t y = geom.y, K = geom.K, M = n_models;
    if (query.size() != y * M) fail(Errc::ProtocolViolation, "query size mismatch");
    const Fe alpha = pool.alpha(db);

    FeVec out(y * M, 0);
    for (std::size_t j = 0; j < y; ++j) {
        Fe prod = 1;
        for (std::size_t i = 0; i < K; ++i) prod = ctx.mul(prod, ctx.sub(f[j][i], alpha));
        const Fe scale = ctx.mul(u, ctx.inv(prod));
        for (std::size_t m = 0; m < M; ++m)
            out[j * M + m] = ctx.mul(scale, query[j * M + m]);
    }
    return out;
}

inline void apply_updates(FeVec& storage, const std::vector<FeVec>& increments,
                          const FieldCtx& ctx) {
    for (const auto& inc : increments) {
        if (inc.size() != storage.size())
            fail(Errc::ProtocolViolation, "incremental update size mismatch");
        for (std::size_t i = 0; i < storage.size(); ++i)
            storage[i] = ctx.add(storage[i], inc[i]);
    }
}

// Read-phase participants: the replication set minus its highest index when
// R - K is even. Only the count R' is pinned; dropping the highest index is
// this implementation's convention.
inline std::vector<std::size_t> read_targets(const std::vector<std::size_t>& replica_dbs,
                                             const ClassGeometry& geom) {
    if (replica_dbs.size() != geom.R)
        fail(Errc::ProtocolViolation, "replication set size does not match geometry");
    std::vector<std::size_t> dbs = replica_dbs;
    if (geom.Rprime == geom.R - 1) {
        auto it = std::max_element(dbs.begin(), dbs.end());
        dbs.erase(it);
    }
    return dbs;
}

} // namespace pruw
