#pragma once

#include "oracles.hpp"

#include <orderscope/quadfield.hpp>

namespace testutil {

inline oracle::Q to_q(const orderscope::QuadInt& x)
{
    return {orderscope::to_i64(x.a), orderscope::to_i64(x.b)};
}

inline orderscope::QuadInt from_q(const oracle::Q& x) { return {orderscope::Int(x.a), orderscope::Int(x.b)}; }

/// x lies in the ideal [A, B + C*w]: C | b and A | a - (b / C) * B.
inline bool ideal_contains(const orderscope::Ideal& I, const oracle::Q& x)
{
    auto A = orderscope::to_i64(I.A), B = orderscope::to_i64(I.B), C = orderscope::to_i64(I.C);
    if (x.b % C != 0)
        return false;
    return oracle::md(x.a - (x.b / C) * B, A) == 0;
}

}  // namespace testutil
