#pragma once

// Prime-field arithmetic and the dense exact solver. Elements live in
// uint64_t; the modulus stays below 2^32 so products fit 64 bits.

#include <cstdint>
#include <vector>

#include "pruw/errors.hpp"
#include "pruw/rng.hpp"

namespace pruw {

using Fe = std::uint64_t;  // field element, value in [0, q)

struct FieldCtx {
    Fe q;  // prime modulus

    explicit FieldCtx(Fe modulus) : q(modulus) {
        if (q < 2 || !is_prime(q)) fail(Errc::InvalidConstraints, "modulus must be a prime >= 2");
        if (q > (1ULL << 32)) fail(Errc::InvalidConstraints, "modulus must fit 32 bits");
    }

    Fe add(Fe a, Fe b) const { return (a + b) % q; }
    Fe sub(Fe a, Fe b) const { return (a + q - b) % q; }
    Fe mul(Fe a, Fe b) const { return a * b % q; }
    Fe neg(Fe a) const { return a == 0 ? 0 : q - a; }

    Fe pow(Fe base, std::uint64_t exp) const {
        Fe result = 1;
        base %= q;
        while (exp > 0) {
            if (exp & 1) result = mul(result, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return result;
    }

    // Multiplicative inverse by Fermat: x^(q-2). q is prime by construction.
    Fe inv(Fe x) const {
        if (x % q == 0) fail(Errc::DivisionByZero, "inverse of zero");
        return pow(x, q - 2);
    }

    Fe reduce_i64(std::int64_t v) const {
        std::int64_t m = v % static_cast<std::int64_t>(q);
        return m < 0 ? static_cast<Fe>(m + static_cast<std::int64_t>(q)) : static_cast<Fe>(m);
    }

    Fe random(Rng& rng) const { return rng.below(q); }

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
};

using FeVec = std::vector<Fe>;
using FeMat = std::vector<FeVec>;  // row-major

// Gaussian elimination over F_q with first-nonzero pivoting. Exact field
// arithmetic needs no magnitude-based pivot choice.
inline FeVec solve_linear(FeMat a, FeVec b, const FieldCtx& ctx) {
    const size_t n = a.size();
    if (n == 0 || b.size() != n) fail(Errc::SingularSystem, "empty or mismatched system");
    for (const auto& row : a)
        if (row.size() != n) fail(Errc::SingularSystem, "matrix not square");

    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) fail(Errc::SingularSystem, "singular coefficient matrix");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);

        const Fe inv_p = ctx.inv(a[col][col]);
        for (size_t j = col; j < n; ++j) a[col][j] = ctx.mul(a[col][j], inv_p);
        b[col] = ctx.mul(b[col], inv_p);

        for (size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Fe factor = a[row][col];
            for (size_t j = col; j < n; ++j)
                a[row][j] = ctx.sub(a[row][j], ctx.mul(factor, a[col][j]));
            b[row] = ctx.sub(b[row], ctx.mul(factor, b[col]));
        }
    }
    return b;
}

// Full inverse, used to decode many subpackets against one coefficient matrix.
inline FeMat invert_matrix(FeMat a, const FieldCtx& ctx) {
    const size_t n = a.size();
    FeMat inv(n, FeVec(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;

    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) fail(Errc::SingularSystem, "singular matrix");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);

        const Fe inv_p = ctx.inv(a[col][col]);
        for (size_t j = 0; j < n; ++j) {
            a[col][j] = ctx.mul(a[col][j], inv_p);
            inv[col][j] = ctx.mul(inv[col][j], inv_p);
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Fe factor = a[row][col];
            for (size_t j = 0; j < n; ++j) {
                a[row][j] = ctx.sub(a[row][j], ctx.mul(factor, a[col][j]));
                inv[row][j] = ctx.sub(inv[row][j], ctx.mul(factor, inv[col][j]));
            }
        }
    }
    return inv;
}

inline Fe dot(const FeVec& a, const FeVec& b, const FieldCtx& ctx) {
    if (a.size() != b.size()) fail(Errc::ProtocolViolation, "dot product dimension mismatch");
    Fe acc = 0;
    for (size_t i = 0; i < a.size(); ++i) acc = ctx.add(acc, ctx.mul(a[i], b[i]));
    return acc;
}

} // namespace pruw
