#include <orderscope/localmonoid.hpp>

#include "convert.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace orderscope;
using testutil::from_q;
using testutil::to_q;

namespace {

const std::vector<std::int64_t> kD{-6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 13};
const std::vector<std::int64_t> kF{2, 3, 4, 5};

LocalMonoid local(std::int64_t d, std::int64_t f, std::int64_t p)
{
    return LocalMonoid(Order::make(QuadField::make(d), f), Int(p));
}

std::vector<int> profile_of(std::int64_t d, std::int64_t f)
{
    auto O = Order::make(QuadField::make(d), f);
    auto locals = local_monoids(O);
    EXPECT_EQ(locals.size(), 1u);
    auto prof = locals.at(0).profile();
    EXPECT_FALSE(prof.unbounded);
    return prof.valuations;
}

}  // namespace

TEST(LocalMonoid, RequiresConductorPrime)
{
    auto O = Order::make(QuadField::make(5), 4);
    try {
        LocalMonoid(O, Int(3));
        FAIL();
    }
    catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
}

TEST(LocalMonoid, FixtureProfiles)
{
    EXPECT_EQ(profile_of(5, 2), (std::vector<int>{1}));
    EXPECT_EQ(profile_of(-1, 2), (std::vector<int>{2, 3}));
    EXPECT_EQ(profile_of(2, 2), (std::vector<int>{2, 3}));
    EXPECT_EQ(profile_of(5, 4), (std::vector<int>{1, 2}));
    EXPECT_EQ(profile_of(-1, 4), (std::vector<int>{2, 4, 5}));
    EXPECT_EQ(profile_of(-1, 3), (std::vector<int>{1}));
}

// Rank-1 profiles against the raw-residue oracle, which scans well past the
// 2*alpha bound to confirm that no atom sits beyond it.
TEST(LocalMonoid, RankOneProfilesMatchOracle)
{
    for (auto d : kD)
        for (auto f : kF) {
            auto O = Order::make(QuadField::make(d), f);
            for (const auto& L : local_monoids(O)) {
                if (L.rank() != 1)
                    continue;
                auto p = to_i64(L.p());
                oracle::LocalOracle oracle(d, f, p);
                ASSERT_EQ(oracle.rank(), 1u);
                auto expected = oracle.atom_valuations(2 * L.cap() + 2);
                auto prof = L.profile();
                ASSERT_FALSE(prof.unbounded);
                ASSERT_EQ(std::set<int>(prof.valuations.begin(), prof.valuations.end()), expected)
                    << "d=" << d << " f=" << f << " p=" << p;
                ASSERT_LE(prof.valuations.back(), L.cap());
                ASSERT_EQ(L.check_finitely_primary(), std::nullopt);
            }
        }
}

TEST(LocalMonoid, RankTwoIsUnbounded)
{
    for (auto [d, f, p] : std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{
             {-1, 5, 5}, {10, 3, 3}, {13, 3, 3}, {7, 3, 3}, {6, 5, 5}, {-2, 3, 3}}) {
        auto L = local(d, f, p);
        ASSERT_EQ(L.rank(), 2u) << d << " " << f;
        EXPECT_TRUE(L.profile().unbounded);
        EXPECT_TRUE(L.atoms().empty());
        auto big = L.large_atom(10);
        ASSERT_TRUE(big.has_value());
        EXPECT_GT(*std::max_element(big->k.begin(), big->k.end()), 10);
        EXPECT_TRUE(L.is_atom(*big));
        EXPECT_EQ(L.check_finitely_primary(), std::nullopt);

        oracle::LocalOracle oracle(d, f, p);
        ASSERT_EQ(oracle.rank(), 2u);
        EXPECT_TRUE(oracle.large_atom(10, 14, 2).has_value()) << d << " " << f;
    }
}

TEST(LocalMonoid, PropertyMembershipAndMultiplication)
{
    std::mt19937_64 rng(5005);
    std::uniform_int_distribution<int> c(-30, 30);
    for (auto [d, f, p] : std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{
             {5, 4, 2}, {-1, 4, 2}, {2, 2, 2}, {-1, 5, 5}, {10, 3, 3}, {-3, 9, 3}}) {
        auto L = local(d, f, p);
        auto pe = 1;
        for (int i = 0; i < L.e(); ++i)
            pe *= p;
        for (int trial = 0; trial < 200; ++trial) {
            QuadInt x(Int(c(rng)), Int(c(rng)));
            QuadInt y(Int(c(rng)), Int(c(rng)));
            if (x.is_zero() || y.is_zero())
                continue;
            // x in R lies in O_p exactly when p^e divides its w-coordinate.
            ASSERT_EQ(L.membership(x), oracle::md(to_i64(x.b), pe) == 0);
            ASSERT_EQ(L.member(L.state_of(x)), L.membership(x));
            auto sx = L.state_of(x), sy = L.state_of(y);
            ASSERT_EQ(L.state_of(L.order().field().mul(x, y)), L.multiply(sx, sy));
        }
    }
}

TEST(LocalMonoid, FractionMembership)
{
    auto L = local(-1, 2, 2);
    // (1+i)^2 / 1 = 2i is in O_2, while (1+i) is not.
    EXPECT_TRUE(L.membership(QuadInt(Int(0), Int(2)), QuadInt(1L)));
    EXPECT_FALSE(L.membership(QuadInt(Int(1), Int(1)), QuadInt(1L)));
    // 2i/3: the denominator is a unit at 2.
    EXPECT_TRUE(L.membership(QuadInt(Int(0), Int(2)), QuadInt(3L)));
    EXPECT_THROW(L.membership(QuadInt(1L), QuadInt(Int(1), Int(1))), Error);
}

TEST(ConditionB, Fixtures)
{
    auto check = [](std::int64_t d, std::int64_t f) {
        auto O = Order::make(QuadField::make(d), f);
        return condition_b(*O, O->field().class_group().group.order(), local_monoids(O));
    };
    EXPECT_TRUE(check(5, 2).holds);
    auto b = check(2, 2);
    EXPECT_FALSE(b.holds);
    ASSERT_TRUE(b.valuation.has_value());
    EXPECT_EQ(*b.valuation, 2);
    EXPECT_EQ(*b.prime, 2);
    EXPECT_FALSE(check(-1, 5).holds);  // rank two
    EXPECT_FALSE(check(5, 4).holds);   // atom of valuation 2 with trivial class group
}
