#pragma once

// Total communication cost of one (a, b) MDS code class:
//   C_T(a,b) = 4b/(b-a-1)      for odd b-a,
//   C_T(a,b) = (4b-2)/(b-a-2)  for even b-a.
// A class is feasible iff its subpacketization y = (R'-a-1)/2 is >= 1,
// i.e. b-a >= 3 when odd and b-a >= 4 when even.

#include "pruw/errors.hpp"
#include "pruw/rational.hpp"

namespace pruw {

inline bool code_feasible(const Int& a, const Int& b) {
    Int gap = b - a;
    if (a < 1) return false;
    return (gap % 2 != 0) ? gap >= 3 : gap >= 4;
}

inline Rat total_cost(const Int& a, const Int& b) {
    if (!code_feasible(a, b))
        fail(Errc::InfeasibleCode,
             "(" + a.str() + "," + b.str() + ") code has no valid subpacketization");
    Int gap = b - a;
    if (gap % 2 != 0) return Rat(4 * b, gap - 1);
    return Rat(4 * b - 2, gap - 2);
}

inline Rat total_cost(std::int64_t a, std::int64_t b) { return total_cost(Int(a), Int(b)); }

} // namespace pruw
