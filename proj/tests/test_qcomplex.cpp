#include <gtest/gtest.h>

#include "multidet/qcomplex.hpp"
#include "oracles.hpp"

using namespace multidet;

TEST(QComplex, EnumerationCounts) {
    auto l1 = enumerate_cubes(FGAbelianGroup({2}), 1);
    ASSERT_EQ(l1.size(), 4u);
    EXPECT_EQ(l1[0].corners, (std::vector<std::uint32_t>{0, 0}));
    EXPECT_EQ(l1[1].corners, (std::vector<std::uint32_t>{0, 1}));
    EXPECT_EQ(l1[2].corners, (std::vector<std::uint32_t>{1, 0}));
    EXPECT_EQ(l1[3].corners, (std::vector<std::uint32_t>{1, 1}));
    EXPECT_EQ(enumerate_cubes(FGAbelianGroup({2}), 3).size(), 256u);
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(enumerate_cubes(FGAbelianGroup(std::vector<Coord>{}), n).size(), 1u);
    try {
        enumerate_cubes(FGAbelianGroup({3}), 4, 1000);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "BudgetExceeded");
    }
}

TEST(QComplex, OneCubeBoundarySigns) {
    // [x|y|z] with x = 2, z = 3 in Z/7: -[2] + [5] - [3]
    DiscreteCubeSpace S(FGAbelianGroup({7}));
    std::vector<std::uint32_t> c = {3, 2};  // corner 0 is the +1 end
    auto b = S.boundary(c);
    std::vector<std::pair<std::uint64_t, std::int64_t>> expect = {{2, -1}, {3, -1}, {5, 1}};
    EXPECT_EQ(b, expect);
    EXPECT_EQ(S.to_cube(c).vertex(0)[0], 2);
}

TEST(QComplex, DegenerateDetection) {
    DiscreteCubeSpace S(FGAbelianGroup({2}));
    EXPECT_TRUE(S.is_degenerate(std::vector<std::uint32_t>{0}));
    EXPECT_FALSE(S.is_degenerate(std::vector<std::uint32_t>{1}));
    EXPECT_TRUE(S.is_degenerate(std::vector<std::uint32_t>{1, 0}));
    EXPECT_FALSE(S.is_degenerate(std::vector<std::uint32_t>{1, 1}));
    // 2-cube with the a1 = -1 side zero
    EXPECT_TRUE(S.is_degenerate(std::vector<std::uint32_t>{1, 0, 1, 0}));
    EXPECT_FALSE(S.is_degenerate(std::vector<std::uint32_t>{1, 0, 0, 1}));
    // degeneracies of every 1-cube are degenerate and face back correctly
    for (std::uint32_t a = 0; a < 2; ++a)
        for (std::uint32_t b = 0; b < 2; ++b)
            for (std::size_t j = 0; j < 2; ++j)
                for (int al : {-1, 1}) {
                    std::vector<std::uint32_t> c = {a, b};
                    auto d = S.degeneracy(c, j, al);
                    EXPECT_TRUE(S.is_degenerate(d));
                    EXPECT_EQ(S.face(d, j, -al), c);
                }
}

TEST(QComplex, UniversalCubeCancels) {
    for (std::size_t n = 2; n <= 4; ++n) EXPECT_TRUE(universal_boundary_square(n).empty()) << n;
}

TEST(QComplex, SoundnessSmallLevels) {
    QCheckOptions opt;
    opt.max_level = 3;
    for (auto A : {FGAbelianGroup({2}), FGAbelianGroup({3}), FGAbelianGroup({4}), FGAbelianGroup({2, 2})}) {
        auto r = check_qcomplex(A, opt);
        EXPECT_TRUE(r.ok()) << A.to_string() << r.failures();
        EXPECT_GT(r.evaluated("degenerate-span"), 0u);
        EXPECT_GT(r.evaluated("boundary-square"), 0u);
        auto Q = build_qcomplex(A, 3);
        for (std::size_t k = 1; k < 3; ++k) EXPECT_TRUE(Q.complex.squares_to_zero_at(k));
    }
}

TEST(QComplex, BeyondBudgetUsesCertificate) {
    QCheckOptions opt;
    opt.max_level = 3;
    opt.budget = 100;
    opt.samples = 50;
    auto r = check_qcomplex(FGAbelianGroup({2}), opt);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.evaluated("boundary-square"), 16u + 50u);  // level 2 exhaustive, level 3 sampled
}

TEST(QComplex, H0MatchesDirectPresentation) {
    for (auto A : {FGAbelianGroup({2}), FGAbelianGroup({3}), FGAbelianGroup({4}), FGAbelianGroup({2, 2})}) {
        auto h = q_homology(A, 0);
        EXPECT_EQ(h, oracle::h0_direct(A)) << A.to_string();
        EXPECT_EQ(h, A);
    }
    FGAbelianGroup trivial(std::vector<Coord>{});
    for (std::size_t k = 0; k <= 2; ++k) EXPECT_TRUE(q_homology(trivial, k).is_trivial());
}

TEST(QComplex, HomologyInvariantUnderGeneratorOrder) {
    auto Q = build_qcomplex(FGAbelianGroup({3}), 2);
    auto h1 = homology_at(Q.complex, 1);
    // reverse the level-1 generators
    const auto& d1 = Q.complex.boundary(1);
    const auto& d2 = Q.complex.boundary(2);
    std::size_t m = d1.cols();
    IntMatrix d1r(d1.rows(), m), d2r(m, d2.cols());
    for (std::size_t j = 0; j < m; ++j) d1r.set_column(m - 1 - j, d1.column(j));
    for (std::size_t j = 0; j < d2.cols(); ++j) {
        IntMatrix::Column c;
        for (const auto& [i, v] : d2.column(j)) c.emplace_back(m - 1 - i, v);
        d2r.set_column(j, c);
    }
    ChainComplexZ C({Q.complex.generators(0), m, Q.complex.generators(2)}, {d1r, d2r});
    EXPECT_EQ(homology_at(C, 1), h1);
}

TEST(QComplex, FunctorialityZ4ToZ2) {
    auto r = check_induced_chain_map(FGAbelianGroup({4}), FGAbelianGroup({2}), {{1}}, 3);
    EXPECT_TRUE(r.ok()) << r.failures();
    EXPECT_EQ(r.evaluated("chain-map"), 16u + 256u + 65536u);
}

TEST(QComplex, SampledBoundarySquare) {
    auto d = sampled_boundary_square_check(PicardPresentation::discrete(FGAbelianGroup({2})), 2, 100);
    EXPECT_TRUE(d.ok());
    EXPECT_EQ(d.evaluated("boundary-square"), 16u);
    PicardPresentation P{FGAbelianGroup({2}), FGAbelianGroup({2}), {{{1}}}};
    auto g = sampled_boundary_square_check(P, 3, 200);
    EXPECT_TRUE(g.ok());
    EXPECT_EQ(g.evaluated("boundary-square"), 200u);
    EXPECT_EQ(sampled_boundary_square_check(P, 1, 10).status(), Status::vacuous);
}
