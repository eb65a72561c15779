#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "proscribe/gradings.hpp"

using namespace proscribe;

namespace {

using Cells = std::vector<std::vector<std::uint64_t>>;

Cells cells_of(const Grading& g, std::size_t level) {
    Cells out;
    for (const auto& c : g.levels.at(level)) out.push_back(c.elements);
    return out;
}

void expect_structural(const Grading& g, const std::string& label) {
    auto rep = verify_grading(g, PatternFamily::gp_int(3), false);
    for (std::size_t c : {1u, 2u, 3u, 5u, 6u}) EXPECT_TRUE(rep[c].ok()) << label << " condition " << c << ": " << rep[c].detail;
    auto view = partition_from_grading(g);
    EXPECT_TRUE(partition_identities_hold(g, view)) << label;
    std::vector<std::uint64_t> seen;
    for (const auto& p : view.parts) seen.insert(seen.end(), p.elements.begin(), p.elements.end());
    std::sort(seen.begin(), seen.end());
    std::vector<std::uint64_t> all(g.n);
    std::iota(all.begin(), all.end(), 1);
    EXPECT_EQ(seen, all) << label;
}

}  // namespace

TEST(Builders, GpExamples) {
    auto g7 = build_gp_grading(7, 3);
    ASSERT_EQ(g7.levels.size(), 2u);
    EXPECT_EQ(g7.levels[0].size(), 7u);
    EXPECT_EQ(cells_of(g7, 1), (Cells{{1, 2, 4}}));
    auto g32 = build_gp_grading(32, 3);
    EXPECT_EQ(cells_of(g32, 1), (Cells{{1, 2, 4}, {3, 6, 12}, {5, 10, 20}, {7, 14, 28}, {8, 16, 32}}));
    EXPECT_EQ(g32.levels[1][4].meta.scale, 8u);
    EXPECT_EQ(level_sizes(g32), (std::vector<std::uint64_t>{32, 5}));
    EXPECT_EQ(build_gp_grading(1, 3).levels.size(), 1u);
    EXPECT_THROW(build_gp_grading(10, 2), std::invalid_argument);
}

TEST(Builders, PrimePowerExamples) {
    auto g = build_prime_power_grading(8, 2, 3);
    EXPECT_EQ(cells_of(g, 1), (Cells{{1, 2}, {3, 6}}));
    EXPECT_EQ(cells_of(g, 2), (Cells{{1, 2, 4}}));
    EXPECT_EQ(cells_of(g, 3), (Cells{{1, 2, 4, 8}}));
    EXPECT_EQ(level_sizes(g), (std::vector<std::uint64_t>{8, 2, 1, 1}));
    EXPECT_EQ(cells_of(build_prime_power_grading(5, 3, 3), 1), (Cells{{1, 3}}));
    EXPECT_EQ(build_prime_power_grading(2, 5, 3).levels.size(), 1u);
    EXPECT_THROW(build_prime_power_grading(8, 4, 3), std::invalid_argument);
}

TEST(Builders, SquareExamples) {
    auto g6 = build_square_grading(6);
    EXPECT_EQ(cells_of(g6, 1), (Cells{{1, 2}, {3, 6}}));
    EXPECT_EQ(cells_of(g6, 2), (Cells{{1, 2, 3, 6}}));
    EXPECT_EQ(cells_of(build_square_grading(3), 1), (Cells{{1, 2}}));
    EXPECT_EQ(build_square_grading(1).levels.size(), 1u);
}

TEST(Builders, FriableExamples) {
    auto f = build_friable_grading(8, 1);
    auto p = build_prime_power_grading(8, 2, 3);
    ASSERT_EQ(f.levels.size(), p.levels.size());
    for (std::size_t i = 0; i < f.levels.size(); ++i) EXPECT_EQ(cells_of(f, i), cells_of(p, i));
    EXPECT_EQ(cells_of(build_friable_grading(6, 2), 1), (Cells{{1, 2}}));
    EXPECT_EQ(build_friable_grading(1, 2).levels.size(), 1u);
}

TEST(Verify, BuiltGradingsPassWithRamseyChecks) {
    auto rep = verify_grading(build_gp_grading(32, 3), PatternFamily::gp_int(3), true);
    EXPECT_TRUE(rep.all_ok());
    for (std::size_t c = 1; c <= 5; ++c) EXPECT_EQ(rep[c].status, ConditionResult::PASS);
    EXPECT_EQ(rep[6].status, ConditionResult::NOT_APPLICABLE);

    auto pp = verify_grading(build_prime_power_grading(8, 2, 3), PatternFamily::gp_prime_power(2, 3), true);
    EXPECT_TRUE(pp.all_ok());
    EXPECT_EQ(pp[5].status, ConditionResult::NOT_APPLICABLE);
    EXPECT_EQ(pp[6].status, ConditionResult::PASS);
}

TEST(Verify, OverlapIsReported) {
    auto g = build_prime_power_grading(8, 2, 3);
    g.levels[1].push_back(Cell{{2, 4}, 1, {}});
    auto rep = verify_grading(g, PatternFamily::gp_prime_power(2, 3), false);
    EXPECT_EQ(rep[2].status, ConditionResult::FAIL);
    ASSERT_EQ(rep[2].cells.size(), 2u);
    EXPECT_EQ(rep[2].cells[0].first, 1u);
    EXPECT_THROW(partition_from_grading(g), std::invalid_argument);
}

TEST(Verify, BrokenConditions) {
    Grading bad{4, GradingKind::expansion(2), {}};
    for (std::uint64_t x = 1; x <= 4; ++x) bad.levels.resize(1), bad.levels[0].push_back(Cell{{x}, 0, {}});
    // {1,2,3} is a union of three singletons, not two.
    bad.levels.push_back({Cell{{1, 2, 3}, 1, {}}});
    auto rep = verify_grading(bad, PatternFamily::gp_int(3), false);
    EXPECT_EQ(rep[5].status, ConditionResult::FAIL);

    Grading nest{6, GradingKind::growth(1), {}};
    for (std::uint64_t x = 1; x <= 6; ++x) nest.levels.resize(1), nest.levels[0].push_back(Cell{{x}, 0, {}});
    nest.levels.push_back({Cell{{1, 2}, 1, {}}});
    nest.levels.push_back({Cell{{2, 3, 4}, 2, {}}});
    rep = verify_grading(nest, PatternFamily::gp_int(3), false);
    EXPECT_EQ(rep[3].status, ConditionResult::FAIL);

    Grading missing{3, GradingKind::growth(1), {{Cell{{1}, 0, {}}, Cell{{2}, 0, {}}}}};
    EXPECT_EQ(verify_grading(missing, PatternFamily::gp_int(3), false)[1].status, ConditionResult::FAIL);
}

TEST(Verify, RamseyMismatchIsReported) {
    // {1,2,4} holds a GP and {3,5,7} does not.
    Grading g{7, GradingKind::growth(2), {}};
    for (std::uint64_t x = 1; x <= 7; ++x) g.levels.resize(1), g.levels[0].push_back(Cell{{x}, 0, {}});
    g.levels.push_back({Cell{{1, 2, 4}, 1, {}}, Cell{{3, 5, 7}, 1, {}}});
    EXPECT_EQ(verify_grading(g, PatternFamily::gp_int(3), true)[4].status, ConditionResult::FAIL);
    EXPECT_EQ(verify_grading(g, PatternFamily::gp_int(3), false)[4].status, ConditionResult::FAIL);
}

TEST(Verify, AllBuildersStructurallySound) {
    for (std::uint64_t n : {1u, 2u, 7u, 36u, 64u, 100u, 257u, 500u}) {
        expect_structural(build_gp_grading(n, 3), "gp3 n=" + std::to_string(n));
        expect_structural(build_gp_grading(n, 4), "gp4 n=" + std::to_string(n));
        expect_structural(build_square_grading(n), "square n=" + std::to_string(n));
        expect_structural(build_prime_power_grading(n, 2, 3), "pp2 n=" + std::to_string(n));
        expect_structural(build_prime_power_grading(n, 3, 3), "pp3 n=" + std::to_string(n));
        expect_structural(build_friable_grading(n, 1), "friable1 n=" + std::to_string(n));
        expect_structural(build_friable_grading(n, 2), "friable2 n=" + std::to_string(n));
    }
}

TEST(Partition, Examples) {
    auto view = partition_from_grading(build_prime_power_grading(8, 2, 3));
    EXPECT_EQ(view.alpha, (std::vector<std::uint64_t>{2, 1, 0, 1}));
    Cells parts;
    for (auto& p : view.parts) parts.push_back(p.elements);
    EXPECT_EQ(parts, (Cells{{1, 2, 4, 8}, {3, 6}, {5}, {7}}));

    auto g7 = partition_from_grading(build_gp_grading(7, 3));
    EXPECT_EQ(g7.alpha, (std::vector<std::uint64_t>{4, 1}));

    Grading trivial{4, GradingKind::expansion(2), {}};
    for (std::uint64_t x = 1; x <= 4; ++x) trivial.levels.resize(1), trivial.levels[0].push_back(Cell{{x}, 0, {}});
    EXPECT_EQ(partition_from_grading(trivial).alpha, (std::vector<std::uint64_t>{4}));
}

TEST(Partition, LevelCountsConverge) {
    // |F_d| / n approaches (phi(P_d)/P_d^k) 2^k/(2^k-1).
    const std::uint64_t n = 1'000'000;
    auto g = build_gp_grading(n, 3, 2);
    ASSERT_GE(g.levels.size(), 3u);
    for (std::size_t d = 1; d <= 2; ++d) {
        const double phi = static_cast<double>(primorial_phi(d));
        const double pk = std::pow(static_cast<double>(primorial(d)), 3);
        const double want = phi / pk * 8.0 / 7.0;
        const double got = static_cast<double>(g.levels[d].size()) / static_cast<double>(n);
        EXPECT_NEAR(got / want, 1.0, 0.1) << d;
    }
}

TEST(Partition, DisjointByValuationBlocks) {
    // Within level d of the GP grading, v_2 of every element falls in the
    // half-open block [k(l-1), k l) fixed by the cell's scale.
    auto g = build_gp_grading(5000, 3);
    for (std::size_t d = 1; d < g.levels.size(); ++d)
        for (const auto& c : g.levels[d]) {
            const unsigned lo = valuation(2, c.meta.scale);
            for (auto x : c.elements) {
                const unsigned v = valuation(2, x);
                EXPECT_GE(v, lo);
                EXPECT_LT(v, lo + 3);
            }
        }
}

TEST(Algebra, Examples) {
    using V = std::vector<BigInt>;
    EXPECT_TRUE(algebra_identity_check(V{10, 0, 0}, V{1, 2, 5}, GradingKind::expansion(3)));
    EXPECT_TRUE(algebra_identity_check(V{2, 1, 0, 1}, V{1, 2, 2, 3}, GradingKind::growth(1)));
    EXPECT_THROW(algebra_identity_check(V{1}, V{1, 2}, GradingKind::growth(1)), std::invalid_argument);
}

TEST(Algebra, RandomInstances) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t D = 1 + rng() % 8;
        std::vector<BigInt> alpha, R;
        for (std::size_t i = 0; i < D; ++i) {
            alpha.push_back(BigInt(rng() % 1000));
            R.push_back(BigInt(rng() % 100000));
        }
        R[0] = 1;  // level-0 cells are singletons
        const unsigned c = 1 + static_cast<unsigned>(rng() % 6);
        EXPECT_TRUE(algebra_identity_check(alpha, R, GradingKind::expansion(c)));
        EXPECT_TRUE(algebra_identity_check(alpha, R, GradingKind::growth(c)));
    }
}

TEST(Algebra, BoundEqualsPartitionSum) {
    // The finite bound is sum alpha_i R_i for the partition it comes from.
    auto g = build_prime_power_grading(60, 2, 3);
    auto R = level_values(g, PatternFamily::gp_prime_power(2, 3));
    auto view = partition_from_grading(g);
    BigInt sum = 0;
    for (std::size_t i = 0; i < view.alpha.size(); ++i) sum += BigInt(view.alpha[i]) * R[i];
    EXPECT_EQ(*grading_bound(g, R).integer_form, sum);
}
