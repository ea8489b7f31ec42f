#pragma once

// Per-class protocol geometry. R' is the number of databases that answer in
// the reading phase (R, or R-1 when R-K is even so the subpacketization stays
// integral); y = (R'-K-1)/2 coded symbols are processed per protocol unit.

#include <cstddef>
#include <string>

#include "pruw/errors.hpp"

namespace pruw {

struct ClassGeometry {
    std::size_t K = 1;
    std::size_t R = 0;
    std::size_t Rprime = 0;
    std::size_t y = 0;

    ClassGeometry() = default;

    ClassGeometry(std::size_t k, std::size_t r) : K(k), R(r) {
        if (k < 1 || r <= k)
            fail(Errc::InfeasibleCode,
                 "invalid (" + std::to_string(k) + "," + std::to_string(r) + ") code");
        Rprime = ((r - k) % 2 != 0) ? r : r - 1;
        if (Rprime < k + 3)
            fail(Errc::InfeasibleCode, "(" + std::to_string(k) + "," + std::to_string(r) +
                                           ") code has subpacketization < 1");
        y = (Rprime - k - 1) / 2;
    }

    // Parameters of one submodel covered by a single subpacket.
    std::size_t subpacket_params() const { return y * K; }
};

} // namespace pruw
