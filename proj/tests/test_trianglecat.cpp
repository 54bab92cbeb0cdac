#include <gtest/gtest.h>

#include "multidet/acceptance.hpp"

using namespace multidet;

namespace {

acceptance::Fixtures& fixtures() {
    static acceptance::Fixtures fx(MULTIDET_FIXTURE_DIR);
    return fx;
}

PresentationPtr small_lines(bool battery = true) {
    GradedLinesOptions o;
    o.window = {-1, 1, 1};
    o.battery = battery;
    return std::make_shared<const TriangPresentation>(graded_lines_presentation(o));
}

std::set<std::string> failing(const Report& r) { return acceptance::failing(r); }

Report run_defect(const std::string& name) {
    for (auto& c : acceptance::defect_catalogue(fixtures(), 42))
        if (c.name == name) return c.mutated();
    ADD_FAILURE() << "no defect " << name;
    return Report();
}

} // namespace

TEST(Presentation, BundledDiagramsAreValid) {
    for (const auto* W : {&fixtures().square_ws(), &fixtures().octahedron_ws()})
        for (const auto& [id, T] : W->presentations) {
            EXPECT_TRUE(W->structural.at(id).ok()) << id;
            ASSERT_FALSE(T->nine_diagrams.empty());
            for (Id k = 0; k < T->nine_diagrams.size(); ++k) EXPECT_TRUE(check_verdier(*T, k).ok()) << id;
        }
}

TEST(Presentation, PointAndGradedLines) {
    EXPECT_TRUE(validate_presentation(point_presentation()).ok());
    auto T = small_lines();
    auto r = validate_presentation(*T);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(T->objects.size(), 8u);
    EXPECT_GT(r.tallies().at("rotation-shape").total, 0u);
    EXPECT_TRUE(validate_presentation(*small_lines(false)).ok());
}

TEST(Presentation, TriangleAndOctahedronDedup) {
    TriangPresentation T;
    T.zero = T.add_object("0");
    Id x = T.add_object("x");
    Id a = T.add_triangle(x, x, T.zero, "id", "0", "0", "a");
    Id b = T.add_triangle(x, x, T.zero, "id", "0", "0");
    EXPECT_EQ(a, b);
    Id c = T.add_triangle(x, x, T.zero, "neg", "0", "0");
    EXPECT_NE(a, c);
    EXPECT_EQ(T.add_octahedron({a, a, c, c}), T.add_octahedron({a, a, c, c}, "again"));
    EXPECT_EQ(T.find_triangle_id("a"), std::optional<Id>(a));
}

TEST(Presentation, PartialShift) {
    auto base = fixtures().document("commutativity_square.json");
    EXPECT_TRUE(acceptance::structural_of(base).ok());
    // x is rotated by rot-incl-x and rot-right, so it needs its shift
    auto drop_x = acceptance::mutate_presentation(base, [](json& p) {
        for (auto it = p["shift"].begin(); it != p["shift"].end(); ++it)
            if (it.key() == "x") {
                p["shift"].erase(it);
                break;
            }
    });
    // the third certificate octahedron contains both rotations
    EXPECT_EQ(failing(acceptance::structural_of(drop_x)),
              (std::set<std::string>{"rotation-shape", "verdier:octahedron-3"}));
    auto unused_y = acceptance::mutate_presentation(base, [](json& p) {
        p["objects"].push_back("Sy");
        p["shift"]["y"] = "Sy";
    });
    EXPECT_TRUE(acceptance::structural_of(unused_y).ok());
    // a non-injective shift invalidates every rotation as well
    auto collide = acceptance::mutate_presentation(base, [](json& p) { p["shift"]["y"] = "Sx"; });
    EXPECT_EQ(failing(acceptance::structural_of(collide)), (std::set<std::string>{"shift-bijection", "rotation-shape"}));
}

TEST(Presentation, SeededStructuralDefects) {
    EXPECT_EQ(failing(run_defect("presentation: rotation with a wrong third map")),
              (std::set<std::string>{"rotation-shape"}));
    EXPECT_EQ(failing(run_defect("presentation: octahedron with mismatched faces")),
              (std::set<std::string>{"octahedron-shape"}));
    EXPECT_EQ(failing(run_defect("verdier: certificate edges disagree")), (std::set<std::string>{"verdier:shared-edge"}));
}

TEST(Octahedron, RegeneratesBundledCube) {
    const auto& T = *fixtures().octahedron_ws().presentations.at("octahedron");
    Report r;
    acceptance::compare_regenerated(r, T);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.tallies().at("construction-reproduces-fixture").total, 1u);
}

TEST(Octahedron, ConstructionOnGeneratedBattery) {
    TriangPresentation T = *small_lines();
    std::size_t built = 0;
    for (Id o = 0; o < T.octahedra.size() && built < 10; ++o) {
        const auto& q = T.octahedra[o].tri;
        if (std::any_of(q.begin(), q.end(), [&](Id t) { return T.is_degenerate(t); })) continue;
        Id k = octahedron_to_2cube(T, o);
        EXPECT_TRUE(check_verdier(T, k).ok()) << T.octahedra[o].id;
        EXPECT_EQ(T.nine_diagrams[k].from_octahedron, o);
        ++built;
    }
    EXPECT_GT(built, 0u);
    EXPECT_TRUE(validate_presentation(T).ok());
}

TEST(Functor, IdentityAndZero) {
    auto T = small_lines();
    EXPECT_TRUE(check_multiexact_tri_functor(identity_tri_functor(T)).ok());
    EXPECT_TRUE(check_multiexact_tri_functor(zero_tri_functor({T, T})).ok());
    EXPECT_EQ(failing(run_defect("functor: triangle sent to one on other objects")),
              (std::set<std::string>{"triangle-image"}));
}

TEST(Functor, GradedTensor) {
    const auto& F = *fixtures().tensor_ws().functors.at("tensor");
    EXPECT_TRUE(check_multiexact_tri_functor(F).ok());
    auto adm = check_functor_verdier_admission(F);
    EXPECT_TRUE(adm.ok());
    EXPECT_GT(adm.tallies().at("verdier-grid").total, 0u);
    EXPECT_EQ(failing(run_defect("functor: induced grid not listed")), (std::set<std::string>{"verdier-image"}));
}

TEST(Functor, TensorByFixedObject) {
    auto T = small_lines();
    const Id g = 1;
    for (bool right : {true, false}) {
        auto F = graded_tensor_by(T, g, right);
        EXPECT_EQ(F.sources.size(), 1u);
        EXPECT_TRUE(check_multiexact_tri_functor(F).ok());
    }
}
