#include <gtest/gtest.h>

#include <random>

#include "multidet/cube.hpp"

using namespace multidet;

namespace {

std::shared_ptr<const PicardPresentation> z_z2_xy() {
    return std::make_shared<const PicardPresentation>(FGAbelianGroup({0}), FGAbelianGroup({2}),
                                                      std::vector<std::vector<Coords>>{{{1}}});
}
std::shared_ptr<const PicardPresentation> z2_z2_xy() {
    return std::make_shared<const PicardPresentation>(FGAbelianGroup({2}), FGAbelianGroup({2}),
                                                      std::vector<std::vector<Coords>>{{{1}}});
}
std::shared_ptr<const PicardPresentation> discrete(std::vector<Coord> f) {
    return std::make_shared<const PicardPresentation>(PicardPresentation::discrete(FGAbelianGroup(std::move(f))));
}

// 1-cube listed in slot order (-1, 0, 1)
Cube one_cube(std::shared_ptr<const PicardPresentation> P, Coord lo, Coord mid, Coord hi, Coord f = 0) {
    Cube S(std::move(P), 1);
    S.set_vertex(0, Coords{lo});
    S.set_vertex(1, Coords{mid});
    S.set_vertex(2, Coords{hi});
    if (S.P().B().rank()) S.set_f(0, 0, Coords{f});
    return S;
}

std::size_t vtx(std::initializer_list<int> a) { return cubeidx::from_coords(std::vector<int>(a)); }

} // namespace

TEST(Cube, OneCubeExamples) {
    auto P = discrete({2});
    EXPECT_TRUE(validate_cube(one_cube(P, 1, 0, 1)).ok());
    auto r = validate_cube(one_cube(P, 1, 1, 1));
    EXPECT_EQ(r.failing_checks(), (std::vector<std::string>{"sum-constraint"}));
}

TEST(Cube, HalfOfTwoCubeAssignmentsValid) {
    // corners all 1 over (Z, Z/2, xy); six structure values in Z/2
    auto P = z_z2_xy();
    Cube base = cube_from_corners(P, 2, {{1}, {1}, {1}, {1}});
    std::size_t valid = 0;
    for (int mask = 0; mask < 64; ++mask) {
        Cube S = base;
        for (int b = 0; b < 6; ++b) S.set_f(b / 3, b % 3, Coords{(mask >> b) & 1});
        if (validate_cube(S).ok()) ++valid;
        if (mask == 0) {
            auto r = validate_cube(S);
            EXPECT_EQ(r.failing_checks(), (std::vector<std::string>{"pentagon"}));
        }
    }
    EXPECT_EQ(valid, 32u);
}

TEST(Cube, FaceOfGrid) {
    // grid rows a2 = 1, 0, -1; columns a1 = -1, 0, 1
    //   b p a
    //   s z r
    //   d q c
    auto P = discrete({0});
    const Coord b = 1, a = 2, d = 5, c = 7;
    Cube S = cube_from_corners(P, 2, {{a}, {b}, {c}, {d}});
    EXPECT_EQ(S.vertex(vtx({-1, 1}))[0], b);
    EXPECT_EQ(S.vertex(vtx({1, 1}))[0], a);
    EXPECT_EQ(S.vertex(vtx({-1, -1}))[0], d);
    Cube top = face(S, 2, 1);
    EXPECT_EQ(top, one_cube(P, b, a + b, a));
    EXPECT_EQ(face(one_cube(P, 3, 4, 1), 1, 0).vertex(0)[0], 4);
    EXPECT_THROW(face(S, 3, 1), Error);
}

TEST(Cube, DegeneracyExamples) {
    auto P = discrete({0});
    Cube x(P, 0);
    x.set_vertex(0, Coords{4});
    EXPECT_EQ(degeneracy(x, 1, 1), one_cube(P, 4, 4, 0));
    EXPECT_EQ(degeneracy(x, 1, -1), one_cube(P, 0, 4, 4));
    EXPECT_THROW(degeneracy(x, 2, 1), Error);
    EXPECT_THROW(degeneracy(x, 1, 0), Error);
}

TEST(Cube, FaceOfDegeneracyIsIdentityOnRandom2Cubes) {
    auto P = z_z2_xy();
    std::mt19937_64 rng(3);
    for (int it = 0; it < 100; ++it) {
        Cube S = random_valid_cube(P, 2, rng);
        for (std::size_t j = 1; j <= 3; ++j)
            for (int b : {-1, 1})
                for (int a = -1; a <= 1; ++a) {
                    Cube D = degeneracy(S, j, b);
                    ASSERT_TRUE(validate_cube(D).ok());
                    if (a != b) {
                        ASSERT_EQ(face(D, j, a), S);
                    } else {
                        ASSERT_EQ(face(D, j, a), zero_cube(P, 2));
                    }
                }
    }
}

TEST(Cube, OperationsPreserveValidity) {
    for (auto P : {z_z2_xy(), z2_z2_xy()}) {
        std::mt19937_64 rng(11);
        for (int it = 0; it < 200; ++it) {
            std::size_t n = 1 + it % 3;
            Cube S = random_valid_cube(P, n, rng);
            ASSERT_TRUE(validate_cube(S).ok()) << S.to_string();
            for (std::size_t j = 1; j <= n; ++j)
                for (int a = -1; a <= 1; ++a) ASSERT_TRUE(validate_cube(face(S, j, a)).ok());
            for (std::size_t j = 1; j <= n + 1; ++j)
                for (int a : {-1, 1}) ASSERT_TRUE(validate_cube(degeneracy(S, j, a)).ok());
        }
    }
}

TEST(Cube, SumOfValidPairs) {
    auto P = z_z2_xy();
    std::mt19937_64 rng(5);
    for (int it = 0; it < 500; ++it) {
        std::size_t n = 1 + it % 3;
        Cube S = random_valid_cube(P, n, rng), T = random_valid_cube(P, n, rng);
        ASSERT_TRUE(validate_cube(add_cubes(S, T)).ok());
        ASSERT_EQ(add_cubes(S, zero_cube(P, n)), S);
    }
    auto D = discrete({5});
    Cube a = cube_from_corners(D, 1, {{1}, {3}}), b = cube_from_corners(D, 1, {{4}, {4}});
    EXPECT_EQ(add_cubes(a, b), cube_from_corners(D, 1, {{0}, {2}}));
    EXPECT_THROW(add_cubes(a, Cube(D, 2)), Error);
}

TEST(Cube, FaceAdditivityBruteForce) {
    // every valid 2-cube over (Z, Z/2, xy) with corner entries in [-2, 2]
    auto P = z_z2_xy();
    std::size_t checked = 0;
    for (int code = 0; code < 625; ++code) {
        std::vector<Coords> corners;
        for (int k = 0, c = code; k < 4; ++k, c /= 5) corners.push_back({c % 5 - 2});
        Cube base = cube_from_corners(P, 2, corners);
        for (int twist_mask = 0; twist_mask < 512; twist_mask += 37) {
            std::vector<Coords> theta;
            for (int v = 0; v < 9; ++v) theta.push_back({(twist_mask >> v) & 1});
            Cube S = twist(base, theta);
            ASSERT_TRUE(validate_cube(S).ok());
            for (std::size_t j = 1; j <= 2; ++j) ASSERT_TRUE(face_additivity_check(S, j).ok()) << S.to_string();
            ++checked;
        }
    }
    EXPECT_GT(checked, 8000u);
    // a pentagon violation shows up as a discrepancy mismatch
    Cube bad = cube_from_corners(P, 2, {{1}, {1}, {1}, {1}});
    bad.set_f(0, 1, Coords{1 - bad.f(0, 1)[0]});
    EXPECT_FALSE(face_additivity_check(bad, 2).ok());
    // on a 1-cube this is the sum constraint
    EXPECT_FALSE(face_additivity_check(one_cube(discrete({2}), 1, 1, 1), 1).ok());
    EXPECT_TRUE(face_additivity_check(one_cube(discrete({2}), 1, 0, 1), 1).ok());
}

TEST(Cube, HigherCoherence) {
    auto P = z_z2_xy();
    // all-units 3-cube built from its corners
    Cube u = cube_from_corners(P, 3, std::vector<Coords>(8, Coords{1}));
    ASSERT_TRUE(validate_cube(u).ok());
    auto r = check_higher_coherence(u);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.extra().at("decompositions"), "12");
    std::mt19937_64 rng(2);
    for (int it = 0; it < 50; ++it) {
        Cube S = random_valid_cube(P, 3, rng);
        ASSERT_TRUE(check_higher_coherence(S).ok());
    }
    Cube S4 = random_valid_cube(P, 4, rng);
    ASSERT_TRUE(validate_cube(S4).ok());
    auto r4 = check_higher_coherence(S4);
    EXPECT_TRUE(r4.ok());
    EXPECT_EQ(r4.extra().at("decompositions"), "576");
    // degeneracy-built cube
    Cube x(P, 0);
    x.set_vertex(0, Coords{1});
    Cube d3 = degeneracy(degeneracy(degeneracy(x, 1, 1), 2, -1), 3, 1);
    EXPECT_TRUE(check_higher_coherence(d3).ok());
    // seeded defect: flip one structure value, the checker must notice
    Cube bad = u;
    bad.set_f(2, 4, Coords{1 - bad.f(2, 4)[0]});
    EXPECT_FALSE(check_higher_coherence(bad).ok());
    EXPECT_TRUE(check_higher_coherence(cube_from_corners(discrete({2}), 3, std::vector<Coords>(8, Coords{1}))).ok());
}

TEST(Cube, RelationsExhaustiveDiscrete) {
    for (Coord m : {2, 3}) {
        auto r = check_cubical_relations(*discrete({m}));
        EXPECT_TRUE(r.ok()) << r.failures();
        EXPECT_GT(r.evaluated("face-face"), 0u);
        EXPECT_GT(r.evaluated("face-degeneracy:zero"), 0u);
        EXPECT_GT(r.evaluated("degeneracy-degeneracy"), 0u);
    }
}

TEST(Cube, RelationsSampledGeneral) {
    RelationBudget b;
    b.samples = 400;
    auto r = check_cubical_relations(*z2_z2_xy(), b);
    EXPECT_TRUE(r.ok()) << r.failures();
    EXPECT_GT(r.evaluated("face-degeneracy:identity"), 0u);
}
