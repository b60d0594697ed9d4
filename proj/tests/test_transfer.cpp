#include <orderscope/transfer.hpp>

#include "convert.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace orderscope;
using testutil::from_q;
using testutil::to_q;

namespace {

OrderPtr order(std::int64_t d, std::int64_t f) { return Order::make(QuadField::make(d), f); }

/// A T2 witness is genuine when u = b*c in R, u lies in O, and no unit
/// residue e puts both e*b and c/e into O modulo f.
::testing::AssertionResult genuine_t2_witness(std::int64_t d, std::int64_t f, const T2Witness& w)
{
    auto F = oracle::field(d);
    oracle::ResidueModF R{F, f};
    auto u = to_q(w.u), b = to_q(w.b), c = to_q(w.c);
    if (oracle::mul(F, b, c) != u)
        return ::testing::AssertionFailure() << "u != b*c";
    if (!R.in_order(u))
        return ::testing::AssertionFailure() << "u not in O";
    auto U = R.unit_image();
    for (auto e : U) {
        oracle::Q inv{};
        for (auto g : U)
            if (R.mul(e, g) == oracle::Q{1 % f, 0})
                inv = g;
        if (R.in_order(R.mul(e, b)) && R.in_order(R.mul(inv, c)))
            return ::testing::AssertionFailure() << "unit residue lifts the splitting";
    }
    return ::testing::AssertionSuccess();
}

}  // namespace

TEST(Decide, Fixtures)
{
    auto v = decide(order(5, 2));
    EXPECT_EQ(v.verdict, Verdict::TransferKrull);
    EXPECT_EQ(v.branch, 1);
    EXPECT_TRUE(v.inclusion_is_transfer_hom);
    EXPECT_TRUE(v.beta_available);

    auto w = decide(order(-1, 3));
    EXPECT_EQ(w.verdict, Verdict::NotTransferKrull);
    EXPECT_FALSE(w.condition_a.holds);
    EXPECT_EQ(QuadField::make(-1)->format(*w.condition_a.witness), "1+w");

    auto x = decide(order(2, 2));
    EXPECT_EQ(x.verdict, Verdict::NotTransferKrull);
    EXPECT_FALSE(x.condition_b.holds);
    EXPECT_EQ(x.condition_b.valuation, 2);

    auto y = decide(order(-1, 2));
    EXPECT_EQ(y.verdict, Verdict::NotTransferKrull);
    EXPECT_FALSE(y.inclusion_is_transfer_hom);

    EXPECT_EQ(to_string(Verdict::TransferKrull), "transfer_krull");
    EXPECT_EQ(to_string(Verdict::NotTransferKrull), "not_transfer_krull");
    EXPECT_EQ(to_string(Verdict::Indeterminate), "indeterminate");
}

TEST(Decide, VerdictIsConjunctionOfConditions)
{
    for (std::int64_t d : {-6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 13, 15, -15})
        for (std::int64_t f : {2, 3, 4, 5, 6}) {
            auto v = decide(order(d, f));
            ASSERT_NE(v.verdict, Verdict::Indeterminate);
            ASSERT_EQ(v.is_transfer_krull(), v.condition_a.holds && v.condition_b.holds) << d << "," << f;
            auto h = QuadField::make(d)->class_group().group.order();
            ASSERT_EQ(v.branch, h == 2 ? 2 : 1);
            if (v.branch == 2) {
                bool has_two = false;
                for (const auto& l : v.locals)
                    has_two |= !l.profile.unbounded && std::count(l.profile.valuations.begin(),
                                                                  l.profile.valuations.end(), 2) > 0;
                if (has_two) {
                    ASSERT_FALSE(v.inclusion_is_transfer_hom) << d << "," << f;
                }
            }
            if (v.condition_a.holds) {
                for (const auto& l : v.locals)
                    ASSERT_TRUE(!l.profile.unbounded && l.profile.valuations.front() == 1) << d << "," << f;
            }
        }
}

TEST(Decide, ResourceLimitsYieldIndeterminate)
{
    ResourceCaps caps;
    caps.local_states = 2;
    auto v = decide(order(-1, 4), caps);
    EXPECT_EQ(v.verdict, Verdict::Indeterminate);
    EXPECT_FALSE(v.indeterminate_reason.empty());
}

TEST(Beta, Examples)
{
    auto F = QuadField::make(-5);
    auto b = beta(*F, QuadInt(2L));
    EXPECT_EQ(b.length(), 2u);
    EXPECT_EQ(b.to_string(), "(1)x2");
    EXPECT_TRUE(beta(*F, QuadInt(-1L)).empty());

    auto G = QuadField::make(-1);
    auto s = beta(*G, QuadInt(12L));
    EXPECT_TRUE(s.group().is_trivial());
    EXPECT_EQ(s.length(), 5u);  // 12 = -(1+i)^4 * 3
}

// beta is multiplicative, its length counts prime factors, and irreducibility
// in R matches minimality of beta(x); checked on every element of norm <= 100.
TEST(Beta, PropertyMultiplicativeAndAtomsCorrespond)
{
    for (std::int64_t d : {-5, -1, 10}) {
        auto F = QuadField::make(d);
        auto OF = oracle::field(d);
        auto elems = oracle::elements_up_to(OF, 100);
        for (auto q : elems) {
            auto x = from_q(q);
            auto b = beta(*F, x);
            ASSERT_TRUE(is_zero_sum(b));
            ASSERT_EQ(static_cast<int>(b.length()), oracle::prime_factor_count(OF, q));
            bool naive_atom = oracle::is_atom_in_R_naive(OF, q);
            ASSERT_EQ(is_atom_in_R(*F, x), naive_atom) << F->format(x);
            if (!b.empty()) {
                ASSERT_EQ(is_atom(b), naive_atom) << F->format(x);
            }
        }
        for (std::size_t i = 0; i < elems.size(); i += 3)
            for (std::size_t j = i; j < elems.size(); j += 5) {
                auto x = from_q(elems[i]), y = from_q(elems[j]);
                ASSERT_EQ(beta(*F, F->mul(x, y)), beta(*F, x) * beta(*F, y));
            }
    }
}

TEST(Lengths, FixtureEight)
{
    auto O = order(-1, 2);
    EXPECT_EQ(lengths_in_order(O, QuadInt(8L)), (LengthSet{2, 3}));
    EXPECT_THROW(lengths_in_order(O, QuadInt(Int(1), Int(1))), Error);
    EXPECT_THROW(lengths_in_order(O, QuadInt(0L)), Error);
}

TEST(Lengths, MatchNaiveDivisorEnumeration)
{
    for (auto [d, f, bound] : std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{
             {-1, 2, 160}, {-1, 3, 150}, {-3, 2, 150}, {-2, 2, 120}, {-5, 2, 120}, {-1, 4, 100}}) {
        auto O = order(d, f);
        TransferEngine engine(O);
        oracle::ImaginaryOrderLengths naive(d, f);
        auto OF = oracle::field(d);
        int checked = 0;
        for (auto q : oracle::elements_up_to(OF, bound)) {
            if (!naive.in_order(q) || oracle::norm(OF, q) < 2)
                continue;
            auto x = from_q(q);
            auto L = engine.lengths(engine.element(x));
            ASSERT_EQ(std::set<int>(L.values().begin(), L.values().end()), naive.lengths(q))
                << "d=" << d << " f=" << f << " x=" << O->field().format(x);
            ASSERT_EQ(engine.is_atom(engine.element(x)), naive.is_atom(q));
            ++checked;
        }
        EXPECT_GT(checked, 10);
    }
}

TEST(Engine, ElementsAreCanonical)
{
    auto O = order(5, 2);
    TransferEngine engine(O);
    auto elems = engine.elements_up_to(60);
    ASSERT_FALSE(elems.empty());
    for (std::size_t i = 0; i < elems.size(); ++i) {
        const auto& e = elems[i];
        EXPECT_TRUE(O->is_in_order(e.value));
        auto again = engine.element(e.value);
        EXPECT_EQ(again.ideal, e.ideal);
        EXPECT_EQ(again.coset, e.coset);
        if (i > 0) {
            EXPECT_TRUE(elems[i - 1] < elems[i]);
        }
    }
    // Associates in O map to the same element.
    auto x = elems.back().value;
    EXPECT_EQ(engine.element(O->field().neg(x)).coset, engine.element(x).coset);
}

TEST(VerifyT1, FollowsConditionA)
{
    EXPECT_TRUE(verify_T1(*order(5, 2)).holds);
    auto r = verify_T1(*order(-1, 3));
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(QuadField::make(-1)->format(*r.witness), "1+w");
}

TEST(VerifyT2, WitnessesAreGenuine)
{
    for (auto [d, f] : std::vector<std::pair<std::int64_t, std::int64_t>>{
             {-1, 2}, {-1, 3}, {2, 2}, {5, 4}, {13, 4}, {10, 2}, {-5, 3}}) {
        auto r = verify_T2(order(d, f), 300, {}, 2);
        ASSERT_FALSE(r.ok) << d << "," << f;
        ASSERT_TRUE(r.witness.has_value());
        EXPECT_TRUE(genuine_t2_witness(d, f, *r.witness)) << d << "," << f;
        EXPECT_GT(r.elements_checked, 0u);
    }
    auto ok = verify_T2(order(5, 2), 300, {}, 2);
    EXPECT_TRUE(ok.ok);
    EXPECT_FALSE(ok.witness.has_value());
}

TEST(VerifyT2, IndependentOfWorkerCount)
{
    auto O = order(13, 4);
    auto a = verify_T2(O, 400, {}, 1);
    auto b = verify_T2(O, 400, {}, 4);
    ASSERT_EQ(a.ok, b.ok);
    ASSERT_TRUE(a.witness && b.witness);
    EXPECT_EQ(a.witness->u, b.witness->u);
    EXPECT_EQ(a.witness->b, b.witness->b);
    EXPECT_EQ(a.witness->c, b.witness->c);
    EXPECT_EQ(a.elements_checked, b.elements_checked);
}

TEST(CompareLengths, TransferKrullOrdersAreHalfFactorialHere)
{
    for (auto [d, f] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 2}, {-3, 2}, {2, 3}}) {
        auto r = compare_lengths(order(d, f), 200, {}, 2);
        EXPECT_TRUE(r.ok) << d << "," << f;
        EXPECT_TRUE(r.mismatches.empty());
        EXPECT_TRUE(r.all_singletons);
    }
    EXPECT_THROW(compare_lengths(order(-1, 2), 100), Error);
}

TEST(CrossCheck, AgreesOnFixtures)
{
    for (auto [d, f] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 2}, {-1, 3}, {-1, 2}, {2, 2}}) {
        auto O = order(d, f);
        auto c = cross_check(O, decide(O), 200, {}, 2);
        EXPECT_TRUE(c.agree) << d << "," << f << ": " << c.detail;
    }
}

TEST(ClassTwoProbe, RequiresClassNumberTwo)
{
    EXPECT_THROW(class_two_probe(order(5, 2), 100), Error);
    auto r = class_two_probe(order(10, 3), 200);
    EXPECT_FALSE(r.note.empty() && !r.candidate_found);
    if (r.witness) {
        EXPECT_TRUE(genuine_t2_witness(10, 3, *r.witness));
    }
}
