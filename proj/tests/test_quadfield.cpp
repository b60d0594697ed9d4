#include <orderscope/quadfield.hpp>

#include "convert.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace orderscope;
using testutil::from_q;
using testutil::to_q;

namespace {

const std::vector<std::int64_t> kFields{-1, -2, -3, -5, -6, -7, -14, -23, 2, 3, 5, 6, 7, 10, 13, 15};

QuadInt random_element(std::mt19937_64& rng, int bound)
{
    std::uniform_int_distribution<int> c(-bound, bound);
    return {Int(c(rng)), Int(c(rng))};
}

}  // namespace

TEST(QuadField, RejectsInvalidD)
{
    for (std::int64_t d : {0, 1, 4, 12, -4, -8, 18}) {
        try {
            QuadField::make(d);
            FAIL() << d;
        }
        catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::InvalidField) << d;
        }
    }
}

TEST(QuadField, IntegralBasis)
{
    auto F5 = QuadField::make(5);
    EXPECT_EQ(F5->disc(), 5);
    EXPECT_EQ(F5->trace_w(), 1);
    EXPECT_EQ(F5->norm_w(), -1);
    EXPECT_EQ(F5->omega_string(), "(1+sqrt(5))/2");
    auto Fm1 = QuadField::make(-1);
    EXPECT_EQ(Fm1->disc(), -4);
    EXPECT_EQ(Fm1->omega_string(), "sqrt(-1)");
    EXPECT_EQ(QuadField::make(2)->disc(), 8);
}

TEST(QuadField, PropertyArithmeticMatchesOracle)
{
    std::mt19937_64 rng(1001);
    for (auto d : kFields) {
        auto F = QuadField::make(d);
        auto OF = oracle::field(d);
        for (int trial = 0; trial < 100; ++trial) {
            auto x = random_element(rng, 50), y = random_element(rng, 50);
            ASSERT_EQ(to_q(F->mul(x, y)), oracle::mul(OF, to_q(x), to_q(y)));
            ASSERT_EQ(to_i64(F->norm(x)), oracle::norm(OF, to_q(x)));
            ASSERT_EQ(F->norm(F->mul(x, y)), F->norm(x) * F->norm(y));
            ASSERT_EQ(F->mul(x, F->conj(x)), QuadInt(F->norm(x), 0));
            ASSERT_EQ(F->trace(x), x.a * 2 + x.b * F->trace_w());
            if (!x.is_zero()) {
                auto q = F->divide(F->mul(x, y), x);
                ASSERT_TRUE(q.has_value());
                ASSERT_EQ(*q, y);
            }
            ASSERT_EQ(F->parse(F->format(x)), x) << F->format(x);
        }
    }
}

TEST(QuadField, ParseAndFormat)
{
    auto F = QuadField::make(-1);
    EXPECT_EQ(F->format(QuadInt(1, 1)), "1+w");
    EXPECT_EQ(F->format(QuadInt(0, -2)), "-2*w");
    EXPECT_EQ(F->format(QuadInt(0, 0)), "0");
    EXPECT_EQ(F->parse("3-w"), QuadInt(3, -1));
    EXPECT_EQ(F->parse("8"), QuadInt(8));
    EXPECT_EQ(F->parse("-4*w+2"), QuadInt(2, -4));
    EXPECT_THROW(F->parse("1+"), Error);
    EXPECT_THROW(F->parse("x"), Error);
}

TEST(QuadField, SplittingMatchesRootCount)
{
    for (auto d : kFields) {
        auto F = QuadField::make(d);
        auto OF = oracle::field(d);
        for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
            auto roots = oracle::roots_mod(OF, p);
            auto primes = F->primes_over(p);
            bool ramified = OF.D % p == 0;
            Splitting expected = roots.empty() ? Splitting::Inert : ramified ? Splitting::Ramified : Splitting::Split;
            ASSERT_EQ(F->splitting(p), expected) << "d=" << d << " p=" << p;
            ASSERT_EQ(primes.size(), expected == Splitting::Split ? 2u : 1u);
            // Kummer-Dedekind: pR = product of the primes over p with the right exponents.
            Ideal prod = F->unit_ideal();
            for (const auto& P : primes) {
                ASSERT_TRUE(F->is_prime_ideal(P));
                ASSERT_EQ(F->prime_below(P), p);
                prod = F->mul(prod, P);
            }
            if (expected == Splitting::Ramified)
                prod = F->mul(prod, primes[0]);
            ASSERT_EQ(prod, F->principal(QuadInt(p)));
            for (const auto& P : primes) {
                auto N = to_i64(P.norm());
                ASSERT_EQ(N, expected == Splitting::Inert ? p * p : p);
                // Every root r gives the prime (p, w - r).
                if (expected != Splitting::Inert) {
                    bool matches_root = false;
                    for (auto r : roots)
                        matches_root |= F->contains(P, QuadInt(Int(-r), Int(1)));
                    ASSERT_TRUE(matches_root);
                }
            }
        }
    }
}

TEST(QuadField, PropertyFactorizationReconstructsPrincipalIdeal)
{
    std::mt19937_64 rng(2002);
    for (auto d : kFields) {
        auto F = QuadField::make(d);
        auto OF = oracle::field(d);
        for (int trial = 0; trial < 40; ++trial) {
            auto x = random_element(rng, 40);
            if (x.is_zero())
                continue;
            auto fac = F->factor_element(x);
            Ideal prod = F->unit_ideal();
            int count = 0;
            for (const auto& [P, e] : fac) {
                ASSERT_TRUE(F->is_prime_ideal(P));
                ASSERT_EQ(F->valuation(x, P), e);
                prod = F->mul(prod, F->pow(P, static_cast<unsigned>(e)));
                count += e;
            }
            ASSERT_EQ(prod, F->principal(x));
            ASSERT_EQ(count, oracle::prime_factor_count(OF, to_q(x)));
            for (std::size_t i = 1; i < fac.size(); ++i)
                ASSERT_TRUE(fac[i - 1].first < fac[i].first);
        }
    }
}

TEST(QuadField, PropertyIdealArithmetic)
{
    std::mt19937_64 rng(3003);
    for (auto d : {-5, -23, 10, 15}) {
        auto F = QuadField::make(d);
        for (int trial = 0; trial < 60; ++trial) {
            auto I = F->ideal({random_element(rng, 12), random_element(rng, 12)});
            auto J = F->ideal({random_element(rng, 12), random_element(rng, 12)});
            ASSERT_EQ(F->mul(I, J), F->mul(J, I));
            ASSERT_EQ(F->mul(I, J).norm(), I.norm() * J.norm());
            ASSERT_TRUE(F->divides(I, F->mul(I, J)));
            ASSERT_EQ(F->divide(F->mul(I, J), J), I);
            ASSERT_EQ(F->mul(I, F->conj(I)), F->principal(QuadInt(I.norm(), Int(0))));
            ASSERT_EQ(F->class_of(F->mul(I, J)), F->class_group().group.add(F->class_of(I), F->class_of(J)));
        }
    }
}

TEST(ClassGroup, OrderMatchesReducedFormCount)
{
    for (std::int64_t d : {-1, -2, -3, -5, -6, -14, -23, -47, -71, -105, 2, 3, 5, 10, 15, 79, 82, 223}) {
        auto F = QuadField::make(d);
        auto expected = oracle::picard_order_forms(oracle::field(d), 1);
        EXPECT_EQ(static_cast<std::int64_t>(F->class_group().group.order()), expected) << "d=" << d;
    }
}

TEST(ClassGroup, KnownStructures)
{
    EXPECT_EQ(QuadField::make(-5)->class_group().group, FiniteAbelianGroup::make({2}));
    EXPECT_EQ(QuadField::make(-14)->class_group().group, FiniteAbelianGroup::make({4}));
    EXPECT_EQ(QuadField::make(-105)->class_group().group, FiniteAbelianGroup::make({2, 2, 2}));
    EXPECT_EQ(QuadField::make(82)->class_group().group, FiniteAbelianGroup::make({4}));
    EXPECT_TRUE(QuadField::make(-1)->class_group().group.is_trivial());
}

// Principality by exhaustive search over one element per associate class:
// I is principal iff it contains an element whose norm equals N(I).
TEST(ClassGroup, PrincipalityMatchesBoundedSearch)
{
    for (std::int64_t d : {-5, -14, -23, 10, 15, 79}) {
        auto F = QuadField::make(d);
        auto OF = oracle::field(d);
        std::vector<Ideal> ideals;
        for (std::int64_t p : {2, 3, 5, 7, 11, 13})
            for (const auto& P : F->primes_over(p))
                if (P.norm() <= 13)
                    ideals.push_back(P);
        std::vector<Ideal> products = ideals;
        for (const auto& I : ideals)
            for (const auto& J : ideals)
                if (I.norm() * J.norm() <= 60)
                    products.push_back(F->mul(I, J));
        for (const auto& I : products) {
            auto N = to_i64(I.norm());
            bool found = false;
            for (auto x : oracle::elements_up_to(OF, N))
                if (std::abs(oracle::norm(OF, x)) == N && testutil::ideal_contains(I, x)) {
                    found = true;
                    break;
                }
            auto g = F->is_principal(I);
            ASSERT_EQ(g.has_value(), found) << "d=" << d << " I=" << F->format(I);
            ASSERT_EQ(found, F->class_of(I) == F->class_group().group.zero());
            if (g) {
                ASSERT_EQ(F->principal(*g), I);
            }
        }
    }
}

TEST(ClassGroup, RepresentativePrimes)
{
    auto F = QuadField::make(-23);
    const auto& G = F->class_group().group;
    for (const auto& c : G.enumerate()) {
        auto P = F->representative_prime(c, Int(6));
        EXPECT_TRUE(F->is_prime_ideal(P));
        EXPECT_EQ(F->class_of(P), c);
        EXPECT_EQ(gcd(P.norm(), Int(6)), 1);
    }
}

TEST(Units, FundamentalUnitMatchesPell)
{
    for (std::int64_t d : {2, 3, 5, 6, 7, 10, 13, 15, 19, 46, 94}) {
        auto F = QuadField::make(d);
        auto OF = oracle::field(d);
        auto eps = F->fundamental_unit();
        EXPECT_EQ(to_q(eps), oracle::fundamental_unit_naive(OF)) << "d=" << d;
        EXPECT_TRUE(F->is_unit(eps));
        EXPECT_EQ(F->sign(eps), 1);
    }
    EXPECT_EQ(QuadField::make(94)->format(QuadField::make(94)->fundamental_unit()), "2143295+221064*w");
    EXPECT_THROW(QuadField::make(-1)->fundamental_unit(), Error);
}

TEST(Units, Torsion)
{
    EXPECT_EQ(QuadField::make(-1)->torsion_units().size(), 4u);
    EXPECT_EQ(QuadField::make(-3)->torsion_units().size(), 6u);
    EXPECT_EQ(QuadField::make(-5)->torsion_units().size(), 2u);
    EXPECT_EQ(QuadField::make(7)->torsion_units().size(), 2u);
    auto F = QuadField::make(-3);
    for (const auto& u : F->torsion_units())
        EXPECT_EQ(F->pow(u, 6), QuadInt(1));
}

TEST(Units, PropertyCanonicalAssociateIsClassInvariant)
{
    std::mt19937_64 rng(4004);
    for (std::int64_t d : {-1, -3, 2, 5, 10}) {
        auto F = QuadField::make(d);
        auto gens = F->unit_generators();
        for (int trial = 0; trial < 60; ++trial) {
            auto x = random_element(rng, 30);
            if (x.is_zero())
                continue;
            auto c = F->canonical_associate(x);
            ASSERT_EQ(F->principal(c), F->principal(x));
            auto y = x;
            for (int k = 0; k < 3; ++k) {
                std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
                y = F->mul(y, gens[pick(rng)]);
            }
            ASSERT_EQ(F->canonical_associate(y), c) << F->format(x);
        }
    }
}
