#include "orderscope/localmonoid.hpp"

#include <algorithm>

namespace orderscope {

namespace {

int p_adic_valuation(Int n, const Int& p)
{
    int v = 0;
    while (n != 0 && mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0) {
        n /= p;
        ++v;
    }
    return v;
}

Ideal local_modulus(const Order& order, const Int& p)
{
    const Int f(static_cast<long>(order.f()));
    if (p < 2 || mpz_divisible_p(f.get_mpz_t(), p.get_mpz_t()) == 0)
        raise(ErrorKind::Domain, "p = " + p.get_str() + " does not divide the conductor index; O_p is a DVR");
    Int pe = 1;
    for (int i = p_adic_valuation(f, p); i > 0; --i)
        pe *= p;
    return Ideal{pe, 0, pe};
}

}  // namespace

LocalMonoid::LocalMonoid(OrderPtr order, const Int& p, const ResourceCaps& caps)
    : order_(std::move(order)),
      p_(p),
      state_cap_(caps.local_states),
      ring_(order_->field_ptr(), local_modulus(*order_, p), caps.residue_ring)
{
    const auto& F = order_->field();
    e_ = p_adic_valuation(Int(static_cast<long>(order_->f())), p_);
    primes_ = F.primes_over(p_);
    for (const auto& P : primes_)
        alpha_.push_back(F.valuation(order_->conductor(), P));
    cap_ = 2 * *std::max_element(alpha_.begin(), alpha_.end());

    // Uniformizers: the first small element in P_i, outside P_i^2 and the
    // other primes over p.
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        const Ideal P2 = F.mul(primes_[i], primes_[i]);
        auto ok = [&](const QuadInt& x) {
            if (!F.contains(primes_[i], x) || F.contains(P2, x))
                return false;
            for (std::size_t j = 0; j < primes_.size(); ++j)
                if (j != i && F.contains(primes_[j], x))
                    return false;
            return true;
        };
        std::optional<QuadInt> found;
        for (long r = 1; !found; ++r) {
            for (long a = -r; a <= r && !found; ++a)
                for (long b = -r; b <= r && !found; ++b)
                    if (std::max(std::labs(a), std::labs(b)) == r && ok(QuadInt(a, b)))
                        found = QuadInt(a, b);
            if (r > 100000)
                raise(ErrorKind::ResourceLimit, "no uniformizer found");
        }
        pi_.push_back(*found);
    }

    // Gamma = (R/p^e)^x / (Z/p^e)^x, each class named by its least code.
    std::vector<ResidueRing::Code> rational_units;
    const Int pe = ring_.modulus().A;
    for (long a = 1; a < pe.get_si(); ++a)
        if (gcd(Int(a), pe) == 1)
            rational_units.push_back(ring_.encode(QuadInt(a)));
    constexpr auto none = static_cast<std::size_t>(-1);
    code_class_.assign(ring_.size(), none);
    for (auto u : ring_.units()) {
        if (code_class_[u] != none)
            continue;
        const std::size_t idx = class_rep_.size();
        class_rep_.push_back(u);
        for (auto r : rational_units)
            code_class_[ring_.mul(u, r)] = idx;
    }
    const std::size_t g = class_rep_.size();
    if (static_cast<std::uint64_t>(g) * static_cast<std::uint64_t>(cap_ + 1) > state_cap_)
        raise(ErrorKind::ResourceLimit, "local state table exceeds cap " + std::to_string(state_cap_));
    gamma_one_ = code_class_[ring_.one()];
    mul_table_.resize(g * g);
    inv_table_.assign(g, none);
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = 0; b < g; ++b) {
            auto c = code_class_[ring_.mul(class_rep_[a], class_rep_[b])];
            mul_table_[a * g + b] = c;
            if (c == gamma_one_)
                inv_table_[a] = b;
        }
}

ResidueRing::Code LocalMonoid::pi_power_code(const std::vector<int>& k) const
{
    auto c = ring_.one();
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto base = ring_.encode(pi_[i]);
        for (int j = 0; j < k[i]; ++j)
            c = ring_.mul(c, base);
    }
    return c;
}

bool LocalMonoid::member(const LocalState& s) const
{
    const auto c = ring_.mul(class_rep_[s.gamma], pi_power_code(s.k));
    return c % static_cast<ResidueRing::Code>(ring_.modulus().C.get_ui()) == 0;
}

bool LocalMonoid::is_unit(const LocalState& s) const
{
    return std::all_of(s.k.begin(), s.k.end(), [](int v) { return v == 0; }) && s.gamma == gamma_one_;
}

LocalState LocalMonoid::multiply(const LocalState& x, const LocalState& y) const
{
    LocalState r{x.k, gamma_mul(x.gamma, y.gamma)};
    for (std::size_t i = 0; i < r.k.size(); ++i)
        r.k[i] += y.k[i];
    return r;
}

void LocalMonoid::enumerate_box(const std::vector<int>& upper,
                                const std::function<bool(const std::vector<int>&)>& fn) const
{
    std::vector<int> v(upper.size(), 0);
    for (;;) {
        if (!fn(v))
            return;
        std::size_t i = v.size();
        while (i > 0) {
            --i;
            if (v[i] < upper[i]) {
                ++v[i];
                break;
            }
            v[i] = 0;
            if (i == 0)
                return;
        }
        if (v.empty())
            return;
    }
}

bool LocalMonoid::is_atom(const LocalState& s) const
{
    if (!member(s) || std::all_of(s.k.begin(), s.k.end(), [](int v) { return v == 0; }))
        return false;
    bool splits = false;
    enumerate_box(s.k, [&](const std::vector<int>& k1) {
        if (k1 == s.k || std::all_of(k1.begin(), k1.end(), [](int v) { return v == 0; }))
            return true;
        std::vector<int> k2(s.k.size());
        for (std::size_t i = 0; i < k2.size(); ++i)
            k2[i] = s.k[i] - k1[i];
        for (std::size_t g = 0; g < gamma_size(); ++g) {
            if (member({k1, g}) && member({k2, gamma_mul(s.gamma, gamma_inv(g))})) {
                splits = true;
                return false;
            }
        }
        return true;
    });
    return !splits;
}

LocalState LocalMonoid::state_of(const QuadInt& x) const
{
    const auto& F = order_->field();
    if (x.is_zero())
        raise(ErrorKind::Domain, "state of zero");
    LocalState s;
    QuadInt y = x;
    Int N = 1;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        const int v = F.valuation(x, primes_[i]);
        s.k.push_back(v);
        y = F.mul(y, F.pow(F.conj(pi_[i]), static_cast<unsigned>(v)));
        Int n = F.norm(pi_[i]);
        for (int j = 0; j < v; ++j)
            N *= n;
    }
    // x * prod conj(pi)^k = u * N(pi^k); strip the p-part of N exactly.
    const int E = p_adic_valuation(N, p_);
    Int pE = 1;
    for (int j = 0; j < E; ++j)
        pE *= p_;
    const Int m = N / pE;
    if (mpz_divisible_p(y.a.get_mpz_t(), pE.get_mpz_t()) == 0 || mpz_divisible_p(y.b.get_mpz_t(), pE.get_mpz_t()) == 0)
        raise(ErrorKind::Domain, "unit part is not integral at p");
    const QuadInt u(y.a / pE, y.b / pE);
    Int m_inv;
    const Int& pe = ring_.modulus().A;
    if (mpz_invert(m_inv.get_mpz_t(), m.get_mpz_t(), pe.get_mpz_t()) == 0 && pe != 1)
        raise(ErrorKind::Domain, "norm cofactor not invertible mod p^e");
    const auto code = ring_.mul(ring_.encode(u), ring_.encode(QuadInt(m_inv, 0)));
    if (!ring_.is_unit(code))
        raise(ErrorKind::Domain, "unit part is not a unit mod p^e");
    s.gamma = class_of_code(code);
    return s;
}

bool LocalMonoid::membership(const QuadInt& x) const
{
    if (x.is_zero())
        raise(ErrorKind::Domain, "membership of zero");
    return mpz_divisible_p(x.b.get_mpz_t(), ring_.modulus().A.get_mpz_t()) != 0;
}

bool LocalMonoid::membership(const QuadInt& num, const QuadInt& den) const
{
    const auto& F = order_->field();
    if (num.is_zero() || den.is_zero())
        raise(ErrorKind::Domain, "membership of zero");
    for (const auto& P : primes_)
        if (F.contains(P, den))
            raise(ErrorKind::Domain, "denominator " + F.format(den) + " lies in a prime over " + p_.get_str());
    const Int& pe = ring_.modulus().A;
    Int n_inv;
    const Int n = mod(F.norm(den), pe);
    if (pe != 1 && mpz_invert(n_inv.get_mpz_t(), n.get_mpz_t(), pe.get_mpz_t()) == 0)
        raise(ErrorKind::Domain, "denominator not invertible mod p^e");
    const auto c = ring_.mul(ring_.encode(F.mul(num, F.conj(den))), ring_.encode(QuadInt(n_inv, 0)));
    return c % static_cast<ResidueRing::Code>(pe.get_ui()) == 0;
}

std::vector<LocalState> LocalMonoid::atoms() const
{
    std::vector<LocalState> out;
    if (rank() != 1)
        return out;
    for (int k = 1; k < cap_; ++k)
        for (std::size_t g = 0; g < gamma_size(); ++g)
            if (is_atom({{k}, g}))
                out.push_back({{k}, g});
    // Every state at valuation cap = 2*alpha splits off a factor of valuation
    // alpha (which lies in p^e R_p), so atoms stay below cap; check it.
    for (std::size_t g = 0; g < gamma_size(); ++g)
        if (is_atom({{cap_}, g}))
            raise(ErrorKind::Internal, "atom at valuation " + std::to_string(cap_) + " over p = " + p_.get_str());
    return out;
}

AtomProfile LocalMonoid::profile() const
{
    AtomProfile prof;
    if (rank() != 1) {
        prof.unbounded = true;
        return prof;
    }
    for (const auto& a : atoms())
        prof.valuations.push_back(a.k[0]);
    std::sort(prof.valuations.begin(), prof.valuations.end());
    prof.valuations.erase(std::unique(prof.valuations.begin(), prof.valuations.end()), prof.valuations.end());
    return prof;
}

std::optional<LocalState> LocalMonoid::large_atom(int k) const
{
    if (rank() < 2)
        return std::nullopt;
    for (std::size_t i = 0; i < rank(); ++i) {
        std::vector<int> upper = alpha_;
        upper[i] += alpha_[i] * k;
        std::optional<LocalState> found;
        enumerate_box(upper, [&](const std::vector<int>& v) {
            if (v[i] <= k)
                return true;
            for (std::size_t g = 0; g < gamma_size(); ++g)
                if (is_atom({v, g})) {
                    found = LocalState{v, g};
                    return false;
                }
            return true;
        });
        if (found)
            return found;
    }
    return std::nullopt;
}

std::optional<std::string> LocalMonoid::check_finitely_primary() const
{
    std::optional<std::string> violation;
    std::vector<int> upper(rank(), cap_);
    enumerate_box(upper, [&](const std::vector<int>& v) {
        const bool some_zero = std::any_of(v.begin(), v.end(), [](int x) { return x == 0; });
        bool saturated = true;
        for (std::size_t i = 0; i < v.size(); ++i)
            saturated = saturated && v[i] >= alpha_[i];
        for (std::size_t g = 0; g < gamma_size(); ++g) {
            const LocalState s{v, g};
            const bool in = member(s);
            if (in && !is_unit(s) && some_zero) {
                violation = "non-unit state with a zero valuation";
                return false;
            }
            if (saturated && !in) {
                violation = "state above alpha missing from the monoid";
                return false;
            }
        }
        return true;
    });
    return violation;
}

std::vector<LocalMonoid> local_monoids(const OrderPtr& order, const ResourceCaps& caps)
{
    std::vector<LocalMonoid> out;
    for (const auto& [p, e] : factor_integer(Int(static_cast<long>(order->f()))))
        out.emplace_back(order, p, caps);
    return out;
}

ConditionB condition_b(const Order& order, std::uint64_t class_number, const std::vector<LocalMonoid>& locals)
{
    ConditionB r;
    const auto& spec = order.spec_map();
    if (!spec.bijective) {
        for (const auto& entry : spec.entries)
            if (entry.r_primes.size() > 1) {
                r.prime = entry.p;
                r.reason = "several R-primes over one conductor prime";
                return r;
            }
    }
    for (const auto& L : locals) {
        if (L.rank() != 1) {
            r.prime = L.p();
            r.reason = "rank " + std::to_string(L.rank()) + " local monoid has unbounded atom valuations";
            return r;
        }
        const auto prof = L.profile();
        bool principal = order.field().is_principal(L.primes()[0]).has_value();
        bool allow_two = class_number == 2 && !principal;
        for (int v : prof.valuations) {
            if (v == 1 || (v == 2 && allow_two))
                continue;
            r.prime = L.p();
            r.valuation = v;
            if (class_number == 2)
                r.reason = principal ? "atom valuation other than 1 over a principal prime"
                                     : "atom valuation outside {1,2}";
            else
                r.reason = "atom valuation other than 1";
            return r;
        }
    }
    r.holds = true;
    return r;
}

}  // namespace orderscope
