#pragma once

#include "orderscope/abelian.hpp"
#include "orderscope/bigint.hpp"
#include "orderscope/errors.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orderscope {

/// a + b*w in the ring of integers Z[w].
struct QuadInt {
    Int a = 0;
    Int b = 0;

    QuadInt() = default;
    QuadInt(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {}
    QuadInt(long a_) : a(a_), b(0) {}  // NOLINT(google-explicit-constructor)

    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const QuadInt& o) const { return a == o.a && b == o.b; }
    /// Lexicographic on (a, b).
    bool operator<(const QuadInt& o) const { return a < o.a || (a == o.a && b < o.b); }
};

/// Element of K = Q(w) with rational coordinates, used for exact quotients.
struct QuadRat {
    Rat a = 0;
    Rat b = 0;
};

/// Nonzero ideal of Z[w] in Hermite normal form: the Z-span of A and B + C*w
/// with A, C > 0, 0 <= B < A, and C dividing both A and B.
struct Ideal {
    Int A = 1;
    Int B = 0;
    Int C = 1;

    Int norm() const { return A * C; }
    bool is_unit() const { return A == 1 && C == 1; }
    bool operator==(const Ideal& o) const { return A == o.A && B == o.B && C == o.C; }
    /// Orders by norm, then (A, B); this is the canonical sort for factorizations.
    bool operator<(const Ideal& o) const;
};

using IdealFactorization = std::vector<std::pair<Ideal, int>>;

enum class Splitting { Split, Inert, Ramified };

std::string_view to_string(Splitting s) noexcept;

/// Class group of Z[w] together with the class assignment for arbitrary ideals.
struct ClassGroupData {
    FiniteAbelianGroup group;
    /// Reduced ideal per class, indexed like group.enumerate().
    std::vector<Ideal> representatives;
    /// Reduction key of each class mapped to its position in group.enumerate().
    std::map<std::pair<Int, Int>, std::uint64_t> key_to_index;
    std::vector<Ideal> generators;  // primes below the Minkowski bound used in the search
};

class QuadField {
public:
    /// Q(sqrt d) for squarefree d not in {0, 1}. Builds the class group and,
    /// for real fields, the fundamental unit eagerly; afterwards every query
    /// is const and thread-safe.
    static std::shared_ptr<const QuadField> make(std::int64_t d, const ResourceCaps& caps = {});

    std::int64_t d() const noexcept { return d_; }
    std::int64_t disc() const noexcept { return disc_; }
    bool is_real() const noexcept { return d_ > 0; }
    /// w^2 = t*w - n.
    std::int64_t trace_w() const noexcept { return t_; }
    std::int64_t norm_w() const noexcept { return n_; }
    /// "sqrt(d)" or "(1+sqrt(d))/2".
    std::string omega_string() const;

    // Element arithmetic.
    QuadInt add(const QuadInt& x, const QuadInt& y) const;
    QuadInt sub(const QuadInt& x, const QuadInt& y) const;
    QuadInt mul(const QuadInt& x, const QuadInt& y) const;
    QuadInt neg(const QuadInt& x) const;
    QuadInt conj(const QuadInt& x) const;
    QuadInt pow(QuadInt x, unsigned k) const;
    Int norm(const QuadInt& x) const;
    Int trace(const QuadInt& x) const;
    /// y / x when x divides y in Z[w].
    std::optional<QuadInt> divide(const QuadInt& y, const QuadInt& x) const;
    bool is_unit(const QuadInt& x) const;
    /// Sign of the real embedding (real fields only): -1, 0, 1.
    int sign(const QuadInt& x) const;

    QuadRat to_rat(const QuadInt& x) const;
    QuadRat mul(const QuadRat& x, const QuadRat& y) const;
    QuadRat inverse(const QuadRat& x) const;
    std::optional<QuadInt> to_int(const QuadRat& x) const;

    /// "a+b*w" with zero terms dropped.
    std::string format(const QuadInt& x) const;
    QuadInt parse(std::string_view text) const;

    // Ideals.
    Ideal unit_ideal() const { return Ideal{}; }
    Ideal principal(const QuadInt& x) const;
    /// Ideal generated over Z[w] by the given elements (not all zero).
    Ideal ideal(std::span<const QuadInt> generators) const;
    Ideal ideal(std::initializer_list<QuadInt> generators) const;
    Ideal mul(const Ideal& I, const Ideal& J) const;
    Ideal pow(const Ideal& I, unsigned k) const;
    Ideal conj(const Ideal& I) const;
    bool contains(const Ideal& I, const QuadInt& x) const;
    /// J divides I, i.e. I is contained in J.
    bool divides(const Ideal& J, const Ideal& I) const;
    /// I / J; throws Domain when J does not divide I.
    Ideal divide(const Ideal& I, const Ideal& J) const;
    std::string format(const Ideal& I) const;

    Splitting splitting(const Int& p) const;
    /// Prime ideals over the rational prime p, sorted canonically.
    std::vector<Ideal> primes_over(const Int& p) const;
    bool is_prime_ideal(const Ideal& P) const;
    /// The rational prime under the prime ideal P.
    Int prime_below(const Ideal& P) const;

    IdealFactorization factor(const Ideal& I) const;
    /// Throws Domain for x = 0.
    IdealFactorization factor_element(const QuadInt& x) const;
    /// Throws Domain when P is not prime or x = 0.
    int valuation(const QuadInt& x, const Ideal& P) const;
    int valuation(const Ideal& I, const Ideal& P) const;

    // Class group.
    const ClassGroupData& class_group() const noexcept { return classes_; }
    GroupElement class_of(const Ideal& I) const;
    /// A generator of I if I is principal. The generator is normalized so
    /// that principal ideals always yield the same element (see docs of
    /// canonical_associate).
    std::optional<QuadInt> is_principal(const Ideal& I) const;
    /// Least-norm prime in the class `cls` whose norm is coprime to `avoid`.
    Ideal representative_prime(const GroupElement& cls, const Int& avoid, std::uint64_t norm_cap = 1'000'000) const;

    // Units.
    /// Roots of unity in Z[w]: {1,-1}, {1,-1,i,-i} or the sixth roots.
    const std::vector<QuadInt>& torsion_units() const noexcept { return torsion_; }
    /// Fundamental unit > 1 (real fields); Domain error for imaginary fields.
    const QuadInt& fundamental_unit() const;
    /// Generators of the unit group: the torsion units for imaginary fields,
    /// {-1, eps} for real fields.
    std::vector<QuadInt> unit_generators() const;
    /// Fixed representative of the associate class of x: for imaginary
    /// fields the lexicographically greatest associate, for real fields the
    /// positive associate g with 1 <= |g/conj(g)| < eps^2.
    QuadInt canonical_associate(const QuadInt& x) const;

    /// Class key of an ideal: the reduced form (imaginary) or the least state
    /// of the reduced continued-fraction cycle (real).
    std::pair<Int, Int> class_key(const Ideal& I) const;

private:
    QuadField() = default;

    void build_units();
    void build_class_group(const ResourceCaps& caps);
    Ideal reduced_ideal_of_key(const std::pair<Int, Int>& key) const;
    std::optional<QuadInt> real_generator(const Ideal& I) const;
    std::optional<QuadInt> imaginary_generator(const Ideal& I) const;
    Ideal hnf(std::span<const QuadInt> z_generators) const;

    std::int64_t d_ = 0;
    std::int64_t disc_ = 0;
    std::int64_t t_ = 0;
    std::int64_t n_ = 0;
    Int sqrt_disc_floor_ = 0;

    std::vector<QuadInt> torsion_;
    QuadInt eps_;
    QuadInt eps_inv_;

    // Continued-fraction cycle of the principal class (real fields): state
    // (P, Q) mapped to the cumulative multiplier from w to that state.
    std::map<std::pair<Int, Int>, QuadRat> principal_cycle_;

    ClassGroupData classes_;
};

using FieldPtr = std::shared_ptr<const QuadField>;

}  // namespace orderscope
