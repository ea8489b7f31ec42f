#pragma once

// Storage profile: the N per-database capacity fractions and the derived
// scalars k = 1/max(mu), p = sum(mu), r = k*p, s = floor(k)*p, all exact.

#include <cstddef>
#include <string>
#include <vector>

#include "pruw/errors.hpp"
#include "pruw/rational.hpp"

namespace pruw {

struct StorageProfile {
    std::vector<Rat> mu;  // empty when built from (k, p) directly
    Rat k, p, r, s;

    std::size_t n_databases() const { return mu.size(); }

    static StorageProfile from_mu(const std::vector<Rat>& mu) {
        if (mu.empty()) fail(Errc::InvalidConstraints, "no storage constraints given");
        Rat max_mu(0);
        for (std::size_t n = 0; n < mu.size(); ++n) {
            if (mu[n] <= Rat(0) || mu[n] > Rat(1))
                fail(Errc::InvalidConstraints,
                     "mu(" + std::to_string(n + 1) + ") must lie in (0, 1]");
            max_mu = rat_max(max_mu, mu[n]);
        }
        return finish(mu, Rat(1) / max_mu);
    }

    // Capacities from mu, scalars from an explicitly given k. Reproduces
    // setups quoted with a rounded k, e.g. 2.7 standing in for 1/0.37.
    static StorageProfile from_mu_with_k(const std::vector<Rat>& mu, const Rat& k) {
        StorageProfile base = from_mu(mu);
        if (k < Rat(1)) fail(Errc::InvalidConstraints, "k override must be >= 1");
        return finish(base.mu, k);
    }

    // Scalars only, for cost sweeps over (k, p) grids with no database vector.
    static StorageProfile from_kp(const Rat& k, const Rat& p) {
        if (k < Rat(1)) fail(Errc::InvalidConstraints, "k must be >= 1");
        if (p <= Rat(0)) fail(Errc::InvalidConstraints, "p must be positive");
        StorageProfile prof;
        prof.k = k;
        prof.p = p;
        prof.r = k * p;
        prof.s = rat_floor(k) * p;
        return prof;
    }

private:
    static StorageProfile finish(const std::vector<Rat>& mu, const Rat& k) {
        StorageProfile prof;
        prof.mu = mu;
        prof.k = k;
        prof.p = Rat(0);
        for (const auto& m : mu) prof.p += m;
        prof.r = prof.k * prof.p;
        prof.s = rat_floor(prof.k) * prof.p;
        return prof;
    }
};

inline StorageProfile derive_profile(const std::vector<Rat>& mu) {
    return StorageProfile::from_mu(mu);
}

} // namespace pruw
