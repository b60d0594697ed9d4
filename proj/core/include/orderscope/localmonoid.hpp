#pragma once

#include "orderscope/ordercore.hpp"
#include "orderscope/residue.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace orderscope {

/// A class of the reduced monoid of O_p: the valuation vector at the R-primes
/// over p, and the class of the unit part in (R/p^e)^x / (Z/p^e)^x.
struct LocalState {
    std::vector<int> k;
    std::size_t gamma = 0;

    bool operator==(const LocalState&) const = default;
};

struct AtomProfile {
    bool unbounded = false;
    std::vector<int> valuations;  // ascending; meaningful when !unbounded
};

/// Reduced monoid of the localization O_p at the prime of O over a rational
/// prime p dividing the conductor index f.
///
/// With e = v_p(f), O_p = Z_(p) + p^e R_p. Writing x = u * prod pi_i^{k_i}
/// for fixed uniformizers pi_i of the R-primes P_i over p, membership of x in
/// O_p depends only on k and on u mod p^e up to rational units, so the
/// reduced monoid is the finite-by-Z^s set of states (k, gamma) that pass the
/// residue test.
class LocalMonoid {
public:
    /// Domain error when p does not divide f.
    LocalMonoid(OrderPtr order, const Int& p, const ResourceCaps& caps = {});

    const Order& order() const noexcept { return *order_; }
    const Int& p() const noexcept { return p_; }
    int e() const noexcept { return e_; }
    std::size_t rank() const noexcept { return primes_.size(); }
    const std::vector<Ideal>& primes() const noexcept { return primes_; }
    const std::vector<int>& alpha() const noexcept { return alpha_; }
    const std::vector<QuadInt>& uniformizers() const noexcept { return pi_; }
    /// 2 * max alpha_i.
    int cap() const noexcept { return cap_; }
    std::size_t gamma_size() const noexcept { return class_rep_.size(); }
    /// The class of rational units (the identity of Gamma).
    std::size_t gamma_identity() const noexcept { return gamma_one_; }

    bool member(const LocalState& s) const;
    bool is_unit(const LocalState& s) const;
    bool is_atom(const LocalState& s) const;
    LocalState multiply(const LocalState& x, const LocalState& y) const;

    /// State of a nonzero x in R.
    LocalState state_of(const QuadInt& x) const;
    bool membership(const QuadInt& x) const;
    /// num/den in O_p; den must not lie in any P_i (else Domain error).
    bool membership(const QuadInt& num, const QuadInt& den) const;

    /// Rank 1: all atom states with valuation below cap, after asserting that
    /// every state at valuation cap decomposes. Rank >= 2: empty.
    std::vector<LocalState> atoms() const;
    AtomProfile profile() const;

    /// Rank >= 2: an atom with some valuation > k inside the box
    /// alpha*(1,...,1) + alpha*k*e_i, if one exists.
    std::optional<LocalState> large_atom(int k) const;

    /// Finitely primary axioms on states with valuations <= cap: non-units
    /// have every valuation >= 1, and every state with k >= alpha is present.
    /// Returns a description of the first violation.
    std::optional<std::string> check_finitely_primary() const;

private:
    std::size_t class_of_code(ResidueRing::Code c) const { return code_class_[c]; }
    ResidueRing::Code pi_power_code(const std::vector<int>& k) const;
    std::size_t gamma_mul(std::size_t a, std::size_t b) const { return mul_table_[a * gamma_size() + b]; }
    std::size_t gamma_inv(std::size_t a) const { return inv_table_[a]; }
    void enumerate_box(const std::vector<int>& upper, const std::function<bool(const std::vector<int>&)>& fn) const;

    OrderPtr order_;
    Int p_;
    int e_ = 0;
    std::vector<Ideal> primes_;
    std::vector<int> alpha_;
    std::vector<QuadInt> pi_;
    int cap_ = 0;
    std::uint64_t state_cap_;

    ResidueRing ring_;  // R / p^e R
    std::vector<std::size_t> code_class_;          // unit code -> class index
    std::vector<ResidueRing::Code> class_rep_;     // least code per class
    std::vector<std::size_t> mul_table_;
    std::vector<std::size_t> inv_table_;
    std::size_t gamma_one_ = 0;
};

struct ConditionB {
    bool holds = false;
    /// Rational prime of the offending conductor prime, if any.
    std::optional<Int> prime;
    std::optional<int> valuation;  // offending atom valuation (rank 1)
    std::string reason;
};

/// Evaluates the local condition for class number `class_number` over every
/// conductor prime of the order.
ConditionB condition_b(const Order& order, std::uint64_t class_number, const std::vector<LocalMonoid>& locals);

/// One LocalMonoid per rational prime dividing f, ascending.
std::vector<LocalMonoid> local_monoids(const OrderPtr& order, const ResourceCaps& caps = {});

}  // namespace orderscope
