#include "bifree/bnc.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace bifree;
using oracle::all_chis;

namespace {

ChiMap example_chi() { return ChiMap::parse("LLRLR"); }  // left {1,2,4}, right {3,5}

}  // namespace

TEST(SChi, ExampleFromPartitionSection) {
    EXPECT_EQ(s_chi(example_chi()).images(), (std::vector<int>{1, 2, 4, 5, 3}));
    Blocks nc{{1, 5}, {2, 3, 4}};
    EXPECT_EQ(apply_permutation(s_chi(example_chi()), nc), (Blocks{{1, 3}, {2, 4, 5}}));
}

TEST(SChi, ConstantMaps) {
    EXPECT_EQ(s_chi(ChiMap::constant(4, Side::Left)).images(), (std::vector<int>{1, 2, 3, 4}));
    EXPECT_EQ(s_chi(ChiMap::constant(3, Side::Right)).images(), (std::vector<int>{3, 2, 1}));
}

TEST(SChi, PrecedesMatchesInverse) {
    auto chi = example_chi();
    auto inv = s_chi(chi).inverse();
    for (int a = 1; a <= 5; ++a)
        for (int b = 1; b <= 5; ++b) EXPECT_EQ(precedes_chi(chi, a, b), inv(a) < inv(b));
}

TEST(IsBnc, Examples) {
    EXPECT_TRUE(is_bnc(BiPartition(example_chi(), {{1, 3}, {2, 4, 5}})));
    EXPECT_TRUE(is_bnc(BiPartition::zero(example_chi())));
    EXPECT_FALSE(is_bnc(BiPartition(ChiMap::constant(4, Side::Left), {{1, 3}, {2, 4}})));
}

TEST(BiPartition, RejectsBadBlocks) {
    auto chi = ChiMap::parse("LLR");
    EXPECT_THROW(BiPartition(chi, {{1, 2}}), ArgumentError);
    EXPECT_THROW(BiPartition(chi, {{1, 2}, {2, 3}}), ArgumentError);
    EXPECT_THROW(BiPartition(chi, {{1, 4}, {2, 3}}), ArgumentError);
    EXPECT_THROW(ChiMap::parse("LXR"), ArgumentError);
}

TEST(BiPartition, CanonicalizationIsIdempotent) {
    BiPartition p(example_chi(), {{5, 2, 4}, {3, 1}});
    EXPECT_EQ(p.blocks(), (Blocks{{1, 3}, {2, 4, 5}}));
    EXPECT_EQ(canonical_blocks(p.blocks()), p.blocks());
}

TEST(Enumerate, SmallCounts) {
    EXPECT_EQ(enumerate_bnc(ChiMap::parse("LRL")).members.size(), 5u);
    EXPECT_EQ(enumerate_bnc(ChiMap::parse("LRRL")).members.size(), 14u);
    auto one = enumerate_bnc(ChiMap::parse("R")).members;
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].blocks(), (Blocks{{1}}));
    EXPECT_THROW(enumerate_bnc(ChiMap::constant(13, Side::Left)), SizeLimitError);
}

// Property: the enumeration equals brute-force filtering of all set partitions
// by the four-point crossing condition in the chi order.
TEST(Enumerate, MatchesBruteForceForAllChiUpTo6) {
    for (int n = 1; n <= 6; ++n) {
        auto all = oracle::set_partitions(n);
        for (const auto& chi : all_chis(n)) {
            std::set<Blocks> brute;
            for (const auto& b : all)
                if (oracle::bnc_by_quadruples(chi, b)) brute.insert(b);
            std::set<Blocks> got;
            for (const auto& p : *bnc_members(chi)) {
                EXPECT_TRUE(is_bnc(p));
                got.insert(p.blocks());
            }
            EXPECT_EQ(got, brute) << chi.str();
            EXPECT_EQ(got.size(), bnc_members(chi)->size()) << "duplicates for " << chi.str();
            EXPECT_EQ(static_cast<long>(got.size()), oracle::catalan(n));
        }
    }
}

TEST(Enumerate, IsBncAgreesWithQuadrupleOracle) {
    for (int n = 1; n <= 6; ++n)
        for (const auto& chi : all_chis(n))
            for (const auto& b : oracle::set_partitions(n))
                ASSERT_EQ(is_bnc(BiPartition(chi, b)), oracle::bnc_by_quadruples(chi, b)) << chi.str();
}

TEST(Enumerate, CatalanUpTo8) {
    for (int n = 7; n <= 8; ++n)
        for (const auto& chi : all_chis(n)) ASSERT_EQ(static_cast<long>(bnc_members(chi)->size()), oracle::catalan(n));
}

TEST(Refines, Examples) {
    auto chi = ChiMap::parse("LLL");
    BiPartition a(chi, {{1, 2}, {3}}), b(chi, {{1, 3}, {2}});
    EXPECT_FALSE(refines(a, b));
    EXPECT_TRUE(refines(BiPartition::zero(chi), b));
    EXPECT_TRUE(refines(a, BiPartition::one(chi)));
    EXPECT_THROW(refines(a, BiPartition::zero(ChiMap::parse("LLR"))), ArgumentError);
}

TEST(Lattice, JoinExample) {
    auto chi = ChiMap::constant(4, Side::Left);
    BiPartition a(chi, {{1, 2}, {3}, {4}}), b(chi, {{1}, {2, 3}, {4}});
    EXPECT_EQ(lattice_join(a, b).blocks(), (Blocks{{1, 2, 3}, {4}}));
    EXPECT_THROW(lattice_join(BiPartition(chi, {{1, 3}, {2, 4}}), a), ArgumentError);
}

// Join compared with an independent closure: merge the set-partition join until
// no two blocks cross.
TEST(Lattice, AxiomsAndJoinOracleUpTo5) {
    for (int n = 1; n <= 5; ++n)
        for (const auto& chi : all_chis(n)) {
            const auto& mem = *bnc_members(chi);
            for (const auto& p : mem) {
                EXPECT_EQ(lattice_meet(p, p), p);
                EXPECT_EQ(lattice_join(p, p), p);
                EXPECT_EQ(lattice_meet(BiPartition::zero(chi), p), BiPartition::zero(chi));
                EXPECT_EQ(lattice_join(BiPartition::one(chi), p), BiPartition::one(chi));
                for (const auto& q : mem) {
                    auto m = lattice_meet(p, q);
                    auto j = lattice_join(p, q);
                    EXPECT_TRUE(is_bnc(m));
                    EXPECT_TRUE(refines(m, p) && refines(m, q) && refines(p, j) && refines(q, j));
                    EXPECT_EQ(j.blocks(), oracle::crossing_closure_join(chi, p.blocks(), q.blocks()));
                    EXPECT_EQ(lattice_meet(p, lattice_join(p, q)), p);  // absorption
                    EXPECT_EQ(lattice_join(p, lattice_meet(p, q)), p);
                    EXPECT_EQ(refines(p, q), lattice_meet(p, q) == p);
                }
            }
        }
}

TEST(Classify, Examples) {
    auto alt = ChiMap::alternating(3);
    auto tags = classify(BiPartition(alt, {{1, 2}, {3, 4}, {5, 6}}));
    EXPECT_NE(std::find(tags.begin(), tags.end(), Tag::BNC_b), tags.end());

    auto mchi = ChiMap::parse("RLLLRL");
    auto t2 = classify(BiPartition::zero(mchi));
    EXPECT_NE(std::find(t2.begin(), t2.end(), Tag::BNC_vs), t2.end());
    EXPECT_NE(std::find(t2.begin(), t2.end(), Tag::BNC_m), t2.end());

    EXPECT_TRUE(classify(BiPartition(example_chi(), {{1, 3}, {2, 4, 5}})).empty());
}

TEST(Family, ExampleCounts) {
    EXPECT_EQ(enumerate_family(ChiMap::alternating(3), Tag::BNC_b).members.size(), 4u);
    EXPECT_EQ(enumerate_family(ChiMap::parse("RLLLRL"), Tag::BNC_m).members.size(), 10u);
    EXPECT_THROW(enumerate_family(ChiMap::parse("LLRR"), Tag::BNC_b), ArgumentError);
    for (int n = 1; n <= 6; ++n)
        EXPECT_EQ(enumerate_family(ChiMap::alternating(n), Tag::BNC_b).members.size(), std::size_t{1} << (n - 1));
}

TEST(Family, MonotoneMembersAreVerticallySplit) {
    for (int n = 1; n <= 6; ++n)
        for (const auto& chi : all_chis(n))
            for (const auto& p : enumerate_family(chi, Tag::BNC_m).members) EXPECT_TRUE(is_vertically_split(p));
}

// Vertically split partitions in BNC(chi) are exactly pairs of non-crossing
// partitions of the left and right index sets.
TEST(Family, VerticallySplitCountIsProductOfCatalans) {
    for (int n = 1; n <= 6; ++n)
        for (const auto& chi : all_chis(n)) {
            long want = oracle::catalan(static_cast<int>(chi.left_indices().size())) *
                        oracle::catalan(static_cast<int>(chi.right_indices().size()));
            EXPECT_EQ(static_cast<long>(enumerate_family(chi, Tag::BNC_vs).members.size()), want);
        }
}

TEST(IntervalBijection, Examples) {
    EXPECT_EQ(interval_bijection({{1}, {2}, {3}}).blocks(), (Blocks{{1, 2}, {3, 4}, {5, 6}}));
    EXPECT_EQ(interval_bijection({{1, 2, 3}}), BiPartition::one(ChiMap::alternating(3)));
    EXPECT_EQ(interval_bijection({{1}, {2, 3}}).blocks(), (Blocks{{1, 2}, {3, 4, 5, 6}}));
    EXPECT_THROW(interval_bijection({{1, 3}, {2}}), ArgumentError);
}

TEST(IntervalBijection, IsOrderIsomorphismOntoBoolean) {
    for (int n = 1; n <= 5; ++n) {
        auto intervals = oracle::interval_partitions(n);
        std::set<BiPartition> image;
        for (const auto& a : intervals) {
            auto pa = interval_bijection(a);
            image.insert(pa);
            for (const auto& b : intervals)
                EXPECT_EQ(oracle::blocks_refine(a, b), refines(pa, interval_bijection(b)));
        }
        EXPECT_EQ(image.size(), intervals.size());
        auto fam = enumerate_family(ChiMap::alternating(n), Tag::BNC_b).members;
        EXPECT_EQ(image, std::set<BiPartition>(fam.begin(), fam.end()));
    }
}
