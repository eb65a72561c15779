#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "proscribe/solver.hpp"
#include "proscribe/values.hpp"

using namespace proscribe;

namespace {

ForbiddenHypergraph random_hypergraph(std::mt19937_64& rng, std::size_t n, std::size_t edges, unsigned max_size) {
    std::vector<std::vector<std::uint32_t>> es;
    for (std::size_t e = 0; e < edges; ++e) {
        const unsigned size = 2 + static_cast<unsigned>(rng() % (max_size - 1));
        std::vector<std::uint32_t> edge;
        while (edge.size() < size) {
            auto v = static_cast<std::uint32_t>(rng() % n);
            if (std::find(edge.begin(), edge.end(), v) == edge.end()) edge.push_back(v);
        }
        es.push_back(edge);
    }
    return ForbiddenHypergraph(n, es);
}

std::vector<std::uint64_t> masks(const ForbiddenHypergraph& h) {
    std::vector<std::uint64_t> out;
    for (const auto& e : h.edges()) {
        std::uint64_t m = 0;
        for (auto v : e) m |= std::uint64_t{1} << v;
        out.push_back(m);
    }
    return out;
}

}  // namespace

TEST(Hypergraph, Validation) {
    EXPECT_THROW(ForbiddenHypergraph(3, {{0}}), std::invalid_argument);
    EXPECT_THROW(ForbiddenHypergraph(3, {{0, 3}}), std::invalid_argument);
    EXPECT_THROW(ForbiddenHypergraph(3, {{1, 1}}), std::invalid_argument);
    ForbiddenHypergraph h(4, {{2, 1}, {1, 2}, {0, 1, 3}});
    EXPECT_EQ(h.edges().size(), 2u);
    EXPECT_TRUE(h.independent({0, 1}));
    EXPECT_FALSE(h.independent({1, 2}));
}

TEST(Hypergraph, CapValidation) {
    CapForest bad;
    bad.nodes = {{{0, 1}, 1, {1, 2}}, {{0}, 1, {}}, {{0}, 1, {}}};
    bad.roots = {0};
    EXPECT_THROW(ForbiddenHypergraph(2, {}, bad), std::invalid_argument);
    CapForest outside;
    outside.nodes = {{{0}, 1, {1}}, {{1}, 1, {}}};
    outside.roots = {0};
    EXPECT_THROW(ForbiddenHypergraph(2, {}, outside), std::invalid_argument);
}

TEST(MaxFree, TrivialCases) {
    auto r = max_free(ForbiddenHypergraph(0, {}));
    EXPECT_EQ(r.optimum, 0u);
    EXPECT_TRUE(r.exact());
    r = max_free(ForbiddenHypergraph(5, {}));
    EXPECT_EQ(r.optimum, 5u);
    EXPECT_EQ(r.witness, (std::vector<std::uint32_t>{0, 1, 2, 3, 4}));
    r = max_free(ForbiddenHypergraph(3, {{0, 1, 2}}));
    EXPECT_EQ(r.optimum, 2u);
    EXPECT_EQ(r.witness, (std::vector<std::uint32_t>{0, 1}));
}

TEST(MaxFree, AgreesWithBruteForce) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 4 + rng() % 17;
        auto h = random_hypergraph(rng, n, 1 + rng() % (3 * n), 4);
        auto r = max_free(h);
        ASSERT_TRUE(r.exact());
        EXPECT_EQ(r.optimum, oracle::brute_max_free(n, masks(h))) << trial;
        EXPECT_TRUE(h.independent(r.witness));
        EXPECT_EQ(r.witness.size(), r.optimum);
    }
}

TEST(MaxFree, CanonicalWitnessMatchesOracle) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + rng() % 15;
        auto h = random_hypergraph(rng, n, 1 + rng() % (2 * n), 3);
        auto a = max_free(h);
        auto b = exhaustive_max_free(h);
        EXPECT_EQ(a.optimum, b.optimum);
        EXPECT_EQ(a.witness, b.witness) << trial;
    }
}

TEST(MaxFree, LargeGraphsAgreeAcrossThreadCounts) {
    std::mt19937_64 rng(13);
    for (std::size_t n : {50u, 80u, 110u}) {
        auto h = random_hypergraph(rng, n, n, 3);
        SolveOptions one, many;
        many.threads = 4;
        auto a = max_free(h, one);
        auto b = max_free(h, many);
        EXPECT_EQ(a.optimum, b.optimum) << n;
        EXPECT_EQ(a.witness, b.witness) << n;
        EXPECT_TRUE(h.independent(a.witness));
    }
}

TEST(MaxFree, CapsDoNotChangeTheAnswer) {
    // r_3(20) with and without a valid split hierarchy.
    auto plain = family_hypergraph(PatternFamily::ap(3), NaturalSet::interval(20));
    CapForest caps;
    CapNode whole, left, right;
    for (std::uint32_t v = 0; v < 20; ++v) (v < 10 ? left : right).vertices.push_back(v);
    left.cap = right.cap = 5;  // r_3(10) = 5
    whole.vertices = left.vertices;
    whole.vertices.insert(whole.vertices.end(), right.vertices.begin(), right.vertices.end());
    whole.cap = 20;
    whole.children = {1, 2};
    caps.nodes = {whole, left, right};
    caps.roots = {0};
    auto capped = family_hypergraph(PatternFamily::ap(3), NaturalSet::interval(20), caps);
    EXPECT_EQ(max_free(plain).optimum, 9u);
    EXPECT_EQ(max_free(capped).optimum, 9u);
    EXPECT_EQ(max_free(plain).witness, max_free(capped).witness);
}

TEST(MaxFree, BudgetReportsLowerBound) {
    auto h = family_hypergraph(PatternFamily::ap(3), NaturalSet::interval(40));
    SolveOptions o;
    o.node_budget = 5;
    auto r = max_free(h, o);
    EXPECT_EQ(r.status, ProofStatus::BUDGET_EXCEEDED);
    EXPECT_TRUE(h.independent(r.witness));
    EXPECT_LE(r.optimum, max_free(h).optimum);
}

TEST(MaxFree, InitialSolutionIsChecked) {
    ForbiddenHypergraph h(3, {{0, 1}});
    SolveOptions o;
    o.initial = {0, 1};
    EXPECT_THROW(max_free(h, o), std::invalid_argument);
    o.initial = {1};
    EXPECT_EQ(max_free(h, o).optimum, 2u);
}

TEST(MaxFree, TooManyVertices) {
    EXPECT_THROW(max_free(ForbiddenHypergraph(1025, {})), std::invalid_argument);
    EXPECT_THROW(exhaustive_max_free(ForbiddenHypergraph(25, {})), std::invalid_argument);
}

TEST(Decision, FindFreeOfSize) {
    auto h = family_hypergraph(PatternFamily::ap(3), NaturalSet::interval(20));
    auto yes = find_free_of_size(h, 9);
    EXPECT_EQ(yes.status, ProofStatus::EXACT);
    EXPECT_GE(yes.witness.size(), 9u);
    EXPECT_TRUE(h.independent(yes.witness));
    auto no = find_free_of_size(h, 10);
    EXPECT_EQ(no.status, ProofStatus::EXACT);
    EXPECT_TRUE(no.witness.empty());
}

TEST(RValues, MatchBruteForce) {
    const auto r = r_values(3, 20);
    for (unsigned n = 1; n <= 20; ++n) EXPECT_EQ(r[n], oracle::brute_r(3, n)) << n;
    const auto r4 = r_values(4, 18);
    for (unsigned n = 1; n <= 18; ++n) EXPECT_EQ(r4[n], oracle::brute_r(4, n)) << n;
}

TEST(RValues, KnownTerms) {
    // r_3(n) for n = 1..30.
    const std::size_t want[] = {1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8,
                                8, 8, 8, 8, 9, 9, 9, 9, 10, 10, 11, 11, 11, 11, 12};
    const auto r = r_values(3, 30);
    for (unsigned n = 1; n <= 30; ++n) EXPECT_EQ(r[n], want[n - 1]) << n;
    EXPECT_THROW(RSequence(1), std::invalid_argument);
}

TEST(GValue, SmallFamilies) {
    EXPECT_EQ(g_value(PatternFamily::gp_int(3), 10), 8u);
    EXPECT_EQ(g_value(PatternFamily::gp_prime_power(2, 3), 8), 7u);
    EXPECT_THROW(g_value(PatternFamily::gp_int(3), 0), std::invalid_argument);
}

TEST(GValue, SolveFamilyWitness) {
    auto fs = solve_family(PatternFamily::gp_int(3), NaturalSet::interval(10));
    EXPECT_EQ(fs.result.optimum, 8u);
    EXPECT_EQ(fs.witness.size(), 8u);
    EXPECT_TRUE(is_free(fs.witness, PatternFamily::gp_int(3)));
}
