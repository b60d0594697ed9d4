#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace orderscope {

using Int = mpz_class;
using Rat = mpq_class;

Int isqrt(const Int& n);
bool is_perfect_square(const Int& n, Int* root = nullptr);

/// Remainder in [0, |m|).
Int mod(const Int& a, const Int& m);
Int floor_div(const Int& a, const Int& b);

/// Prime factorization of |n| by trial division, ascending primes.
std::vector<std::pair<Int, int>> factor_integer(const Int& n);

bool is_squarefree(std::int64_t n);
bool is_prime(std::int64_t n);

std::int64_t to_i64(const Int& n);
std::string to_string(const Int& n);

inline std::int64_t mod_i64(std::int64_t a, std::int64_t m)
{
    auto r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t gcd_i64(std::int64_t a, std::int64_t b);

}  // namespace orderscope
