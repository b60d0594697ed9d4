#include <orderscope/ordercore.hpp>

#include "convert.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace orderscope;
using testutil::from_q;
using testutil::to_q;

namespace {

const std::vector<std::int64_t> kD{-6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 13};
const std::vector<std::int64_t> kF{2, 3, 4, 5, 6};

}  // namespace

TEST(Order, RejectsImproperConductor)
{
    auto F = QuadField::make(5);
    for (std::int64_t f : {-2, 0, 1}) {
        try {
            Order::make(F, f);
            FAIL() << f;
        }
        catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::NotProperOrder);
        }
    }
    ResourceCaps caps;
    caps.residue_ring = 20;
    try {
        Order::make(F, 5, caps);
        FAIL();
    }
    catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
    }
}

TEST(Order, Membership)
{
    auto O = Order::make(QuadField::make(-1), 3);
    EXPECT_TRUE(O->is_in_order(QuadInt(Int(5), Int(6))));
    EXPECT_FALSE(O->is_in_order(QuadInt(Int(5), Int(4))));
    EXPECT_TRUE(O->is_regular(QuadInt(Int(2), Int(3))));
    EXPECT_FALSE(O->is_regular(QuadInt(Int(3), Int(3))));
    EXPECT_TRUE(O->is_regular_in_R(QuadInt(Int(1), Int(1))));
    EXPECT_THROW(O->is_regular(QuadInt(Int(1), Int(1))), Error);
    EXPECT_EQ(O->order_units(), (std::vector<ResidueRing::Code>{1 * 3, 2 * 3}));
}

TEST(Residues, UnitsMatchNaiveEnumeration)
{
    for (auto d : kD)
        for (auto f : kF) {
            auto O = Order::make(QuadField::make(d), f);
            oracle::ResidueModF R{oracle::field(d), f};
            const auto& ring = O->residues();
            ASSERT_EQ(ring.size(), static_cast<std::uint64_t>(f * f));
            std::set<oracle::Q> lib;
            for (auto c : ring.units())
                lib.insert(R.reduce(to_q(ring.decode(c))));
            auto naive = R.units();
            ASSERT_EQ(lib, std::set<oracle::Q>(naive.begin(), naive.end())) << d << "," << f;

            std::set<oracle::Q> img;
            for (auto c : O->unit_image().residues) {
                img.insert(R.reduce(to_q(ring.decode(c))));
                const auto& u = O->unit_image().representative.at(c);
                ASSERT_TRUE(O->field().is_unit(u));
                ASSERT_EQ(ring.encode(u), c);
            }
            ASSERT_EQ(img, R.unit_image()) << d << "," << f;
        }
}

TEST(Picard, OrderMatchesFormClassNumber)
{
    for (auto d : kD)
        for (auto f : kF) {
            auto F = QuadField::make(d);
            auto O = Order::make(F, f);
            const auto& pic = O->picard();
            auto OF = oracle::field(d);
            EXPECT_EQ(to_i64(pic.pic_order), oracle::picard_order_forms(OF, f)) << "d=" << d << " f=" << f;
            EXPECT_EQ(pic.iso, pic.pic_order == Int(F->class_group().group.order()));
            EXPECT_EQ(pic.o_units, static_cast<std::uint64_t>(oracle::euler_phi(f)));
            EXPECT_EQ(pic.r_units, O->residues().units().size());
            // Exact sequence: |Pic| = h * |(R/f)^x| / (|(O/f)^x| * [U (O/f)^x : (O/f)^x]).
            EXPECT_EQ(pic.pic_order * Int(pic.o_units * pic.unit_index),
                      Int(F->class_group().group.order()) * Int(pic.r_units));
        }
}

TEST(Spec, BijectiveExactlyWhenNoConductorPrimeSplits)
{
    for (auto d : kD)
        for (auto f : kF) {
            auto O = Order::make(QuadField::make(d), f);
            auto OF = oracle::field(d);
            bool split = false;
            for (std::int64_t p = 2; p <= f; ++p)
                if (f % p == 0 && oracle::roots_mod(OF, p).size() == 2 && OF.D % p != 0)
                    split = true;
            const auto& spec = O->spec_map();
            EXPECT_EQ(spec.bijective, !split) << "d=" << d << " f=" << f;
            for (const auto& e : spec.entries) {
                EXPECT_EQ(f % to_i64(e.p), 0);
                for (const auto& P : e.r_primes)
                    EXPECT_EQ(O->field().prime_below(P), e.p);
            }
        }
}

TEST(ConditionA, MatchesNaiveResidueCheck)
{
    for (auto d : kD)
        for (auto f : kF) {
            auto O = Order::make(QuadField::make(d), f);
            oracle::ResidueModF R{oracle::field(d), f};
            const auto& a = O->condition_a();
            ASSERT_EQ(a.holds, oracle::condition_a_naive(R)) << "d=" << d << " f=" << f;
            ASSERT_EQ(a.holds, !a.witness.has_value());
            if (a.witness) {
                // No unit of R moves the witness into O/f.
                auto w = R.reduce(to_q(*a.witness));
                for (auto u : R.unit_image())
                    ASSERT_FALSE(R.in_order(R.mul(u, w)));
            }
            // condition (a) forces Pic = Cl, a bijective Spec map.
            if (a.holds) {
                EXPECT_TRUE(O->picard().iso) << d << "," << f;
                EXPECT_TRUE(O->spec_map().bijective) << d << "," << f;
            }
        }
}

TEST(ConditionA, FailsForImaginaryFieldsWithOnlyPlusMinusOne)
{
    for (std::int64_t d : {-2, -5, -6, -7, -10, -14})
        for (auto f : kF)
            EXPECT_FALSE(Order::make(QuadField::make(d), f)->condition_a().holds) << d << "," << f;
}

TEST(Order, ResidueClosureAndRegularDivisorClosure)
{
    for (auto [d, f] : std::vector<std::pair<std::int64_t, std::int64_t>>{{-1, 3}, {5, 4}, {2, 6}, {-3, 2}}) {
        auto O = Order::make(QuadField::make(d), f);
        const auto& ring = O->residues();
        const auto& F = O->field();
        for (ResidueRing::Code x = 0; x < ring.size(); ++x)
            for (ResidueRing::Code y = 0; y < ring.size(); ++y) {
                auto a = ring.decode(x), b = ring.decode(y);
                if (O->is_in_order(a) && O->is_in_order(b)) {
                    ASSERT_TRUE(O->is_in_order(F.mul(a, b)));
                    ASSERT_TRUE(O->is_in_order(F.add(a, b)));
                    if (O->is_regular(F.mul(a, b))) {
                        ASSERT_TRUE(O->is_regular(a));
                        ASSERT_TRUE(O->is_regular(b));
                    }
                }
            }
    }
}

TEST(ConditionA, Witnesses)
{
    auto Om1 = Order::make(QuadField::make(-1), 3);
    EXPECT_FALSE(Om1->condition_a().holds);
    EXPECT_EQ(Om1->field().format(*Om1->condition_a().witness), "1+w");
    EXPECT_EQ(to_i64(Om1->picard().pic_order), 2);

    auto O2 = Order::make(QuadField::make(2), 2);
    EXPECT_FALSE(O2->condition_a().holds);
    EXPECT_EQ(O2->field().format(*O2->condition_a().witness), "w");

    auto O5 = Order::make(QuadField::make(5), 2);
    EXPECT_TRUE(O5->condition_a().holds);
    EXPECT_TRUE(O5->picard().iso);
}
