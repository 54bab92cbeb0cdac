#include <gtest/gtest.h>

#include <numeric>

#include "multidet/acceptance.hpp"

using namespace multidet;

namespace {

std::set<std::string> failing(const Report& r) { return acceptance::failing(r); }

Report run_defect(const std::string& name) {
    static acceptance::Fixtures fx(MULTIDET_FIXTURE_DIR);
    for (auto& c : acceptance::defect_catalogue(fx, 42))
        if (c.name == name) return c.mutated();
    ADD_FAILURE() << "no defect " << name;
    return Report();
}

PresentationPtr small_lines() {
    GradedLinesOptions o;
    o.window = {-1, 1, 1};
    return std::make_shared<const TriangPresentation>(graded_lines_presentation(o));
}

/** Objects 0, a, b and their identities, no triangles at all. */
PresentationPtr bare_objects() {
    TriangPresentation T;
    T.name = "bare";
    T.zero = T.add_object("0");
    T.add_object("a");
    T.add_object("b");
    T.shift[0] = 0;
    for (Id o = 0; o < 3; ++o) {
        T.identity[o] = T.add_iso("id:" + T.objects[o], o, o);
        T.inverse.push_back(T.identity[o]);
    }
    return std::make_shared<const TriangPresentation>(std::move(T));
}

/** Two-variable functor with a fixed product table on a presentation without triangles. */
TriFunctorData table_product(PresentationPtr T, const std::vector<std::vector<Id>>& table) {
    TriFunctorData F;
    F.name = "table";
    F.sources = {T, T};
    F.target = T;
    const auto ix = F.objects();
    F.obj.resize(ix.tuple_count());
    for (Id g = 0; g < 3; ++g)
        for (Id h = 0; h < 3; ++h) F.obj[ix.tuple_index(std::array<Id, 2>{g, h})] = table[g][h];
    for (std::size_t slot = 0; slot < 2; ++slot) {
        std::vector<Id> img;
        for (Id f = 0; f < T->isos.size(); ++f)
            for (Id other = 0; other < 3; ++other) {
                Id o = T->isos[f].src;
                img.push_back(T->identity[slot == 0 ? table[o][other] : table[other][o]]);
            }
        F.iso.push_back(img);
        F.tri.emplace_back();
        F.battery.emplace_back();
    }
    return F;
}

} // namespace

TEST(CatRing, IntegerAndSignRings) {
    auto Z = integer_ring();
    EXPECT_TRUE(validate_categorical_ring(Z).ok());
    auto p1 = pi1_bimodule(Z);
    EXPECT_EQ(p1.module, FGAbelianGroup());
    auto S = sign_ring();
    EXPECT_TRUE(validate_categorical_ring(S).ok());
    auto p0 = pi0_ring(S);
    EXPECT_EQ(p0.additive, FGAbelianGroup({0}));
    EXPECT_EQ(p0.unit, (Coords{1}));
    auto b = pi1_bimodule(S);
    EXPECT_EQ(b.module, FGAbelianGroup({2}));
    EXPECT_TRUE(b.sigma_determined);
    EXPECT_GT(b.sigma_checks, 0u);
    EXPECT_EQ(b.left_act, (std::vector<std::vector<Coords>>{{{1}}}));
    EXPECT_EQ(b.right_act, (std::vector<std::vector<Coords>>{{{1}}}));
}

TEST(CatRing, StrictDistributorsAreNotMultiexact) {
    auto S = sign_ring();
    S.right_dist.terms.clear();
    auto r = validate_categorical_ring(S);
    EXPECT_EQ(r.status(), Status::invalid);
    EXPECT_TRUE(failing(r).contains("multiexact:two-variable-compatibility"));
}

TEST(CatRing, NonAssociativeTableNamesTriple) {
    auto r = run_defect("ring: non-associative product");
    EXPECT_EQ(failing(r), (std::set<std::string>{"associativity"}));
    bool named = false;
    for (const auto& it : r.items())
        if (it.check == "associativity" && it.verdict == Verdict::fail) named = !it.location.empty();
    EXPECT_TRUE(named);
}

TEST(CatRing, TamperedActionRaisesSigmaMismatch) {
    auto R = sign_ring();
    R.right_act[0][0] = {0};
    try {
        pi1_bimodule(R);
        FAIL() << "expected SigmaMismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "SigmaMismatch");
    }
}

TEST(K0, GradedLinesIsTheIntegers) {
    auto T = small_lines();
    auto F = graded_tensor_bifunctor(T);
    auto K = compute_k0_ring(*T, F);
    EXPECT_TRUE(K.report.ok());
    EXPECT_EQ(K.additive, FGAbelianGroup({0}));
    EXPECT_EQ(K.additive, oracle::k0_additive_direct(*T));
    ASSERT_TRUE(K.unit_object);
    ASSERT_EQ(K.basis_product.size(), 1u);
    ASSERT_TRUE(K.basis_product[0][0]);
    EXPECT_EQ(*K.basis_product[0][0], (Coords{1}));
    auto w = window_of(*T);
    std::vector<Coord> chi(T->objects.size());
    for (Id g = 0; g < chi.size(); ++g) {
        chi[g] = w.euler(g);
        EXPECT_EQ(K.classes[g], (Coords{chi[g]})) << T->objects[g];
    }
    EXPECT_TRUE(check_k0_ring_map(K, chi).ok());
}

TEST(K0, EulerMapDetectsWrongValues) {
    auto T = small_lines();
    auto K = compute_k0_ring(*T, graded_tensor_bifunctor(T));
    std::vector<Coord> twice(T->objects.size());
    auto w = window_of(*T);
    for (Id g = 0; g < twice.size(); ++g) twice[g] = 2 * w.euler(g);
    auto r = check_k0_ring_map(K, twice);
    EXPECT_TRUE(failing(r).contains("surjective"));
    EXPECT_TRUE(failing(r).contains("multiplicative"));
}

TEST(K0, PointIsZeroRing) {
    auto P = std::make_shared<const TriangPresentation>(point_presentation());
    auto K = compute_k0_ring(*P, zero_tri_functor({P, P}));
    EXPECT_EQ(K.additive, FGAbelianGroup());
    EXPECT_TRUE(K.report.ok());
}

TEST(K0, NoTrianglesGivesFreeRing) {
    auto T = bare_objects();
    std::vector<std::vector<Id>> table{{0, 0, 0}, {0, 1, 2}, {0, 2, 1}};
    auto F = table_product(T, table);
    ASSERT_TRUE(check_functor_verdier_admission(F).ok());
    auto K = compute_k0_ring(*T, F);
    EXPECT_EQ(K.additive, FGAbelianGroup({0, 0, 0}));
    EXPECT_EQ(K.product, table);
    EXPECT_EQ(K.unit_object, std::optional<Id>(1));
}

TEST(K0, QuotientIgnoresRelationOrder) {
    auto T = small_lines();
    const std::size_t n = T->objects.size(), m = T->triangles.size();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(3);
    std::shuffle(perm.begin(), perm.end(), rng);
    IntMatrix a(n, m), b(n, m);
    for (std::size_t t = 0; t < m; ++t) {
        const auto& D = T->triangles[t];
        std::vector<std::pair<std::size_t, Integer>> col{{D.y, Integer(1)}, {D.x, Integer(-1)}, {D.z, Integer(-1)}};
        a.set_column(t, col);
        b.set_column(perm[t], col);
    }
    auto qa = quotient_by_relations(a), qb = quotient_by_relations(b);
    EXPECT_EQ(qa.group, qb.group);
    // same identifications of generators, whichever basis was chosen
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h) EXPECT_EQ(qa.classes[g] == qa.classes[h], qb.classes[g] == qb.classes[h]);
}
