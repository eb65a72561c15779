#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "proscribe/grid.hpp"

using namespace proscribe;
using namespace proscribe::grid;

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Largest subset of [k]^d avoiding `objects`, by scanning all subsets.
std::size_t brute_cube(unsigned k, unsigned d, const std::vector<PointSet>& objects) {
    std::vector<std::uint64_t> masks;
    for (const auto& o : objects) {
        std::uint64_t m = 0;
        for (auto id : o) m |= std::uint64_t{1} << id;
        masks.push_back(m);
    }
    return oracle::brute_max_free(ipow(k, d), masks);
}

// True if some ordering of the points makes every coordinate constant,
// 0..k-1 or k-1..0, with at least one coordinate moving.
bool is_geometric_line(const PointSet& pts, unsigned k, unsigned d) {
    std::vector<Word> w;
    for (auto id : pts) w.push_back(unrank(id, k, d));
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    do {
        bool ok = true, moving = false;
        for (unsigned c = 0; c < d && ok; ++c) {
            bool same = true, up = true, down = true;
            for (unsigned j = 0; j < k; ++j) {
                unsigned v = w[idx[j]].coordinates[c];
                same &= v == w[idx[0]].coordinates[c];
                up &= v == j;
                down &= v == k - 1 - j;
            }
            ok = same || up || down;
            moving |= !same;
        }
        if (ok && moving) return true;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return false;
}

}  // namespace

TEST(Words, RankRoundTrip) {
    for (unsigned k : {2u, 3u, 5u})
        for (unsigned d : {1u, 3u})
            for (std::uint32_t id = 0; id < cube_size(k, d); ++id) EXPECT_EQ(rank(unrank(id, k, d), k), id);
    EXPECT_THROW(rank(Word{{3}}, 3), std::invalid_argument);
}

TEST(Lines, Counts) {
    for (unsigned k = 2; k <= 4; ++k)
        for (unsigned d = 1; d <= 4; ++d) {
            EXPECT_EQ(enumerate_lines(k, d).size(), ipow(k + 1, d) - ipow(k, d));
            EXPECT_EQ(enumerate_geometric_lines(k, d).size(), (ipow(k + 2, d) - ipow(k, d)) / 2);
        }
}

TEST(Lines, GeometricLinesAreExactlyTheGeometricTriples) {
    for (unsigned d = 1; d <= 3; ++d) {
        std::set<PointSet> lib;
        for (auto l : enumerate_geometric_lines(3, d)) lib.insert(l);
        std::set<PointSet> want;
        const auto n = cube_size(3, d);
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = a + 1; b < n; ++b)
                for (std::uint32_t c = b + 1; c < n; ++c)
                    if (is_geometric_line({a, b, c}, 3, d)) want.insert({a, b, c});
        EXPECT_EQ(lib, want) << d;
    }
}

TEST(Lines, CombinatorialLinesAreGeometric) {
    std::set<PointSet> geo;
    for (auto l : enumerate_geometric_lines(3, 3)) geo.insert(l);
    for (auto l : enumerate_lines(3, 3)) EXPECT_TRUE(geo.count(l));
}

TEST(Lines, TemplateOrder) {
    LineTemplate t{{LineTemplate::UP, 1, LineTemplate::DOWN}};
    auto pts = t.points(3);
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(unrank(pts[0], 3, 3).coordinates, (std::vector<unsigned>{0, 1, 2}));
    EXPECT_EQ(unrank(pts[2], 3, 3).coordinates, (std::vector<unsigned>{2, 1, 0}));
}

TEST(Spaces, CountsForBinaryAlphabet) {
    // Combinatorial 1-spaces of {0,1}^d: 3^d - 2^d. 2-spaces: (4^d - 2*3^d + 2^d)/2.
    for (unsigned d = 1; d <= 6; ++d) {
        EXPECT_EQ(enumerate_spaces(2, d, 1).size(), ipow(3, d) - ipow(2, d));
        if (d >= 2) {
            EXPECT_EQ(enumerate_spaces(2, d, 2).size(), (ipow(4, d) - 2 * ipow(3, d) + ipow(2, d)) / 2);
        }
    }
    EXPECT_THROW(enumerate_spaces(2, 2, 3), std::invalid_argument);
    EXPECT_THROW(enumerate_spaces(2, 2, 0), std::invalid_argument);
}

TEST(Spaces, EachSpaceHasFullSize) {
    for (auto& s : enumerate_spaces(3, 3, 2)) EXPECT_EQ(std::set<std::uint32_t>(s.begin(), s.end()).size(), 9u);
}

TEST(Numbers, SmallDhjAgainstBruteForce) {
    for (unsigned d = 1; d <= 2; ++d) EXPECT_EQ(dhj_number(d, 3), brute_cube(3, d, enumerate_lines(3, d)));
    EXPECT_EQ(dhj_number(2, 4), brute_cube(4, 2, enumerate_lines(4, 2)));
    EXPECT_EQ(moser_number(2, 4), brute_cube(4, 2, enumerate_geometric_lines(4, 2)));
}

TEST(Numbers, DhjSequence) {
    const std::size_t want[] = {1, 2, 6, 18};
    for (unsigned d = 0; d <= 3; ++d) EXPECT_EQ(dhj_number(d, 3), want[d]);
}

TEST(Numbers, MoserSequence) {
    const std::size_t want[] = {1, 2, 6, 16};
    for (unsigned d = 0; d <= 3; ++d) EXPECT_EQ(moser_number(d, 3), want[d]);
}

TEST(Numbers, SpaceSequence) {
    const std::size_t want[] = {1, 2, 3, 6, 11};
    for (unsigned d = 0; d <= 4; ++d) EXPECT_EQ(space_number(d, 2, 2), want[d]);
    EXPECT_EQ(space_number(4, 2, 2), brute_cube(2, 4, enumerate_spaces(2, 4, 2)));
}

TEST(Numbers, SpernerIdentity) {
    for (unsigned d = 0; d <= 6; ++d) EXPECT_EQ(space_number(d, 1, 2), oracle::binomial(d, d / 2)) << d;
}

TEST(Numbers, TwoLetterAlphabet) {
    // Over {0,1} a combinatorial line is a comparable pair, so c_{d,2} is Sperner's bound.
    for (unsigned d = 0; d <= 5; ++d) EXPECT_EQ(dhj_number(d, 2), oracle::binomial(d, d / 2));
}

TEST(Numbers, BudgetExceeded) {
    SolveOptions o;
    o.node_budget = 10;
    EXPECT_THROW(dhj_number(3, 3, o), budget_exceeded);
}

TEST(Caps, HierarchyIsConsistent) {
    auto forest = subcube_caps(3, 3, {1, 2, 6, 18});
    EXPECT_EQ(forest.roots.size(), 3u);
    EXPECT_NO_THROW(ForbiddenHypergraph(27, {}, forest));
    for (auto r : forest.roots) EXPECT_EQ(forest.nodes[r].vertices.size(), 27u);
}
