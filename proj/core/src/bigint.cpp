#include "orderscope/bigint.hpp"

#include "orderscope/errors.hpp"

#include <cstdlib>
#include <numeric>

namespace orderscope {

Int isqrt(const Int& n)
{
    if (n < 0)
        raise(ErrorKind::Domain, "isqrt of negative number");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const Int& n, Int* root)
{
    if (n < 0)
        return false;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0)
        return false;
    if (root)
        *root = isqrt(n);
    return true;
}

Int mod(const Int& a, const Int& m)
{
    Int r;
    Int am = abs(m);
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), am.get_mpz_t());
    return r;
}

Int floor_div(const Int& a, const Int& b)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

std::vector<std::pair<Int, int>> factor_integer(const Int& n)
{
    std::vector<std::pair<Int, int>> out;
    Int m = abs(n);
    if (m <= 1)
        return out;
    auto pull = [&](const Int& p) {
        int e = 0;
        while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t()) != 0) {
            m /= p;
            ++e;
        }
        if (e > 0)
            out.emplace_back(p, e);
    };
    pull(Int(2));
    pull(Int(3));
    for (Int p = 5; p * p <= m; p += 6) {
        pull(p);
        Int q = p + 2;
        pull(q);
    }
    if (m > 1)
        out.emplace_back(m, 1);
    return out;
}

bool is_squarefree(std::int64_t n)
{
    std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    if (m == 0)
        return false;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0)
                return false;
        }
    }
    return true;
}

bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0)
            return false;
    return true;
}

std::int64_t to_i64(const Int& n)
{
    if (!n.fits_slong_p())
        raise(ErrorKind::ResourceLimit, "integer exceeds 64 bits: " + n.get_str());
    return n.get_si();
}

std::string to_string(const Int& n) { return n.get_str(); }

std::int64_t gcd_i64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

}  // namespace orderscope
