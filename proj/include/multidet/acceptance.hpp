#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <set>

#include "multidet/json_io.hpp"
#include "multidet/oracle.hpp"
#include "multidet/qcomplex.hpp"

#ifndef MULTIDET_FIXTURE_DIR
#define MULTIDET_FIXTURE_DIR "fixtures"
#endif

namespace multidet {

struct CriterionResult {
    int number = 0;
    std::string title;
    Report report;
    double seconds = 0;
    bool pass() const { return report.status() == Status::valid; }
};

struct AcceptanceOptions {
    std::uint64_t seed = 42;
    std::string fixture_dir = MULTIDET_FIXTURE_DIR;
    std::set<int> only;  // empty: all criteria
};

namespace acceptance {

inline std::shared_ptr<const PicardPresentation> picard_ptr(std::vector<Coord> a, std::vector<Coord> b,
                                                            std::vector<std::vector<Coords>> c) {
    return std::make_shared<const PicardPresentation>(FGAbelianGroup(std::move(a)), FGAbelianGroup(std::move(b)),
                                                      std::move(c));
}

inline const std::vector<FGAbelianGroup>& small_groups() {
    static const std::vector<FGAbelianGroup> g{FGAbelianGroup({2}), FGAbelianGroup({3}), FGAbelianGroup({4}),
                                               FGAbelianGroup({2, 2})};
    return g;
}

/** Fixture files, loaded once per run. */
struct Fixtures {
    std::string dir;
    Workspace graded, tensor, square, octahedron, rings;

    explicit Fixtures(std::string d) : dir(std::move(d)) {}
    const Workspace& get(Workspace& w, const char* file) {
        if (w.empty()) w = load_workspace({dir + "/" + file});
        return w;
    }
    const Workspace& graded_lines() { return get(graded, "graded_lines.json"); }
    const Workspace& tensor_ws() { return get(tensor, "tensor.json"); }
    const Workspace& square_ws() { return get(square, "commutativity_square.json"); }
    const Workspace& octahedron_ws() { return get(octahedron, "octahedron_cube.json"); }
    json document(const char* file) const {
        std::ifstream in(dir + "/" + file);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_json_text(ss.str(), file);
    }
};

inline Report qcomplex_soundness(std::uint64_t seed) {
    Report r;
    for (const auto& A : small_groups()) {
        QCheckOptions o;
        o.max_level = 4;
        o.seed = seed;
        r.merge(check_qcomplex(A, o), A.to_string() + ":");
    }
    return r;
}

inline Report h0_identification() {
    Report r;
    for (const auto& A : small_groups()) {
        auto h = q_homology(A, 0);
        auto direct = oracle::h0_direct(A);
        r.check("h0-equals-A", h == A, A.to_string(), "H0 = " + h.to_string());
        r.check("h0-matches-direct", h == direct, A.to_string(), "direct = " + direct.to_string());
    }
    return r;
}

inline Report cubical_relations(std::uint64_t seed) {
    Report r;
    for (Coord d : {2, 3}) {
        RelationBudget b;
        b.max_dim = 3;
        b.seed = seed;
        auto P = PicardPresentation::discrete(FGAbelianGroup({d}));
        auto sub = check_cubical_relations(P, b);
        // exhaustiveness is part of the criterion for the discrete bases
        for (const auto& it : sub.items())
            if (it.check == "coverage" && it.detail != "exhaustive") r.fail("exhaustive", "Z/" + std::to_string(d), it.detail);
        r.merge(sub, "Z/" + std::to_string(d) + ":");
    }
    RelationBudget b;
    b.max_dim = 3;
    b.samples = 1000;
    b.seed = seed;
    r.merge(check_cubical_relations(*picard_ptr({2}, {2}, {{{1}}}), b), "(Z/2,Z/2,xy):");
    return r;
}

inline Report cube_sum_closure(std::uint64_t seed) {
    Report r;
    auto P = picard_ptr({0}, {2}, {{{1}}});
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 500; ++k) {
        auto S = random_valid_cube(P, 2, rng), T = random_valid_cube(P, 2, rng);
        std::string loc = "pair " + std::to_string(k);
        r.check("inputs-valid", validate_cube(S).ok() && validate_cube(T).ok(), loc);
        auto v = first_cube_violation(add_cubes(S, T));
        r.check("sum-valid", !v, loc, v.value_or(""));
    }
    return r;
}

inline Report higher_coherence(std::uint64_t seed) {
    Report r;
    auto P = picard_ptr({2}, {2}, {{{1}}});
    std::mt19937_64 rng(seed);
    std::optional<Cube> first;
    for (int k = 0; k < 100; ++k) {
        auto S = random_valid_cube(P, 3, rng);
        r.check("input-valid", validate_cube(S).ok(), "cube " + std::to_string(k));
        auto h = check_higher_coherence(S);
        r.check("coherent", h.failures() == 0, "cube " + std::to_string(k),
                std::to_string(h.failures()) + " mismatches");
        if (!first) first = S;
    }
    // seeded harness: break the pentagon at the centre of directions (1,2)
    Cube bad = *first;
    Coords b(bad.f(0, 4).begin(), bad.f(0, 4).end());
    b[0] += 1;
    bad.set_f(0, 4, b);
    auto v = validate_cube(bad);
    r.check("harness-pentagon-broken", v.failures("pentagon") > 0, "cube 0");
    auto h = check_higher_coherence(bad);
    r.check("harness-mismatch-detected", h.failures() > 0, "cube 0", std::to_string(h.failures()) + " mismatches");
    return r;
}

inline void equivalence_trials(Report& r, const DeterminantData& base, int n, std::mt19937_64& rng,
                               const std::string& tag) {
    std::size_t valid = 0, invalid = 0;
    for (int k = 0; k < n; ++k) {
        auto D = random_determinant(base, rng);
        auto m = validate_multideterminant(D), c = validate_cubical_determinant(D);
        bool mv = m.status() == Status::valid, cv = c.status() == Status::valid;
        r.check("consistent-verdict", mv == cv, tag + " instance " + std::to_string(k),
                std::string("axiomatic ") + to_string(m.status()) + ", cubical " + to_string(c.status()));
        (mv ? valid : invalid) += 1;
    }
    r.extra()[tag + ":valid"] = std::to_string(valid);
    r.extra()[tag + ":invalid"] = std::to_string(invalid);
    r.check("both-verdicts-exercised", valid > 0 && invalid > 0, tag);
}

inline Report determinant_equivalence(Fixtures& fx, std::uint64_t seed) {
    Report r;
    std::mt19937_64 rng(seed);
    const auto& euler = fx.graded_lines().determinants.at("euler");
    equivalence_trials(r, euler, 200, rng, "graded-lines");
    equivalence_trials(r, fx.tensor_ws().determinants.at("composite"), 50, rng, "composite");
    return r;
}

inline Report determinant_closure(Fixtures& fx, std::uint64_t seed) {
    Report r;
    std::mt19937_64 rng(seed);
    RandomDetOptions valid_only;
    valid_only.max_defects = 0;
    const auto& euler = fx.graded_lines().determinants.at("euler");
    for (int k = 0; k < 200; ++k) {
        auto a = random_determinant(euler, rng, valid_only), b = random_determinant(euler, rng, valid_only);
        std::string loc = "sum " + std::to_string(k);
        r.check("summands-valid", validate_determinant(a).ok() && validate_determinant(b).ok(), loc);
        auto s = validate_multideterminant(sum_determinants(a, b));
        r.check("sum-valid", s.status() == Status::valid, loc, s.failing_checks().empty() ? "" : s.failing_checks()[0]);
    }
    const auto& F = *fx.tensor_ws().functors.at("tensor");
    r.check("functor-admits-verdier", check_functor_verdier_admission(F).ok(), F.name);
    r.check("functor-multiexact", check_multiexact_tri_functor(F).ok(), F.name);
    auto target_euler = euler_determinant(F.target);
    for (int k = 0; k < 200; ++k) {
        auto d = random_determinant(target_euler, rng, valid_only);
        std::string loc = "composition " + std::to_string(k);
        r.check("input-valid", validate_determinant(d).ok(), loc);
        auto c = validate_multideterminant(compose_with_multiexact(d, F));
        r.check("composite-valid", c.status() == Status::valid, loc,
                c.failing_checks().empty() ? "" : c.failing_checks()[0]);
    }
    return r;
}

/** Regenerates the bundled 2-cube of each octahedron and compares it item by item. */
inline void compare_regenerated(Report& r, const TriangPresentation& T) {
    TriangPresentation copy = T;
    copy.nine_diagrams.clear();
    copy.invalidate();
    for (const auto& N : T.nine_diagrams) {
        if (N.from_octahedron == kNone) continue;
        auto oid = T.octahedra[N.from_octahedron].id;
        Id k = octahedron_to_2cube(copy, *copy.find_octahedron_id(oid));
        const auto& G = copy.nine_diagrams[k];
        auto tri_ids = [](const TriangPresentation& P, std::span<const Id> ts) {
            std::vector<std::string> out;
            for (Id t : ts) out.push_back(P.triangles[t].id);
            return out;
        };
        auto oct_ids = [](const TriangPresentation& P, std::span<const Id> os) {
            std::vector<std::string> out;
            for (Id o : os) out.push_back(P.octahedra[o].id);
            return out;
        };
        bool same = G.grid == N.grid && tri_ids(copy, G.rows) == tri_ids(T, N.rows) &&
                    tri_ids(copy, G.cols) == tri_ids(T, N.cols) && G.certificate && N.certificate &&
                    G.certificate->A == N.certificate->A &&
                    oct_ids(copy, G.certificate->oct) == oct_ids(T, N.certificate->oct);
        r.check("construction-reproduces-fixture", same, N.id);
        r.check("added-nothing", copy.triangles.size() == T.triangles.size() && copy.octahedra.size() == T.octahedra.size(),
                N.id, "construction needed items missing from the fixture");
        r.merge(check_verdier(copy, k), "regenerated:");
    }
}

inline Report diagram_fixtures(Fixtures& fx) {
    Report r;
    for (const auto* W : {&fx.square_ws(), &fx.octahedron_ws()})
        for (const auto& [id, T] : W->presentations) {
            r.merge(W->structural.at(id), id + ":structure:");
            std::size_t certified = 0;
            for (Id k = 0; k < T->nine_diagrams.size(); ++k) {
                if (!T->nine_diagrams[k].certificate) continue;
                ++certified;
                r.merge(check_verdier(*T, k), id + ":");
            }
            r.check("has-certified-diagram", certified > 0, id);
            compare_regenerated(r, *T);
        }
    return r;
}

inline Report k0_ring(Fixtures& fx) {
    Report r;
    auto T = fx.graded_lines().presentations.at("GL");
    GradedTensorOptions o;
    o.max_battery_total = 0;
    auto F = graded_tensor_bifunctor(T, o);
    auto K = compute_k0_ring(*T, F);
    r.merge(K.report, "k0:");
    auto direct = oracle::k0_additive_direct(*T);
    r.check("additive-is-Z", K.additive == FGAbelianGroup({0}), "additive", K.additive.to_string());
    r.check("additive-matches-oracle", K.additive == direct, "additive", "oracle " + direct.to_string());
    bool mult = K.basis.size() == 1 && K.basis_product.size() == 1 && K.basis_product[0][0] &&
                *K.basis_product[0][0] == Coords{1};
    r.check("product-is-multiplication", mult, "e0*e0", K.basis.empty() ? "" : K.basis_name(0));
    // Euler class comparison: each generator's class is its Euler characteristic times the basis class
    auto w = window_of(*T);
    std::vector<Coord> chi(T->objects.size());
    for (Id g = 0; g < chi.size(); ++g) chi[g] = w.euler(g);
    Coord chi_basis = 0;
    if (!K.basis.empty())
        for (const auto& [g, c] : K.basis[0]) chi_basis += c * chi[g];
    r.check("basis-euler-unit", chi_basis == 1 || chi_basis == -1, "e0", std::to_string(chi_basis));
    for (Id g = 0; g < chi.size() && K.additive.rank() == 1; ++g)
        r.check_lazy("class-is-euler", K.classes[g][0] * chi_basis == chi[g], [&] { return T->objects[g]; });
    r.merge(check_k0_ring_map(K, chi), "euler-map:");
    return r;
}

// ---- seeded defects ------------------------------------------------------

struct DefectCase {
    std::string name;
    std::set<std::string> target;        // exactly these checks must fail
    std::function<Report()> mutated;
};

inline std::set<std::string> failing(const Report& r) {
    auto v = r.failing_checks();
    return {v.begin(), v.end()};
}

inline Report error_as_failure(const std::function<void()>& f, const std::string& kind) {
    Report r;
    try {
        f();
        r.check(kind, true, "call");
    } catch (const Error& e) {
        r.check(e.kind(), false, "call", e.what());
    }
    return r;
}

inline json mutate_presentation(json doc, const std::function<void(json&)>& edit) {
    edit(doc["presentations"][0]);
    return doc;
}

inline Report structural_of(const json& doc) {
    Workspace W;
    load_document(W, doc);
    return W.structural.begin()->second;
}

inline std::vector<DefectCase> defect_catalogue(Fixtures& fx, std::uint64_t seed) {
    std::vector<DefectCase> out;
    auto gl = fx.graded_lines().presentations.at("GL");
    const auto& euler = fx.graded_lines().determinants.at("euler");
    const auto& S = *gl;
    const auto& B = euler.P().B();
    // an object whose Euler class changes parity under neither defect below
    const Id x = 5;

    out.push_back({"picard: c not antisymmetric", {"antisymmetry"}, [] {
                       return validate_picard(*picard_ptr({0, 0}, {2}, {{{0}, {1}}, {{0}, {0}}}));
                   }});
    out.push_back({"picard: c not killed by generator order", {"order-compatibility"}, [] {
                       return validate_picard(*picard_ptr({3}, {2}, {{{1}}}));
                   }});
    out.push_back({"cube: broken pentagon", {"pentagon"}, [seed] {
                       std::mt19937_64 rng(seed);
                       auto C = random_valid_cube(picard_ptr({2}, {2}, {{{1}}}), 2, rng);
                       Coords b(C.f(0, 1).begin(), C.f(0, 1).end());
                       b[0] += 1;
                       C.set_f(0, 1, b);
                       return validate_cube(C);
                   }});
    out.push_back({"cube: middle vertex not the sum", {"sum-constraint"}, [seed] {
                       std::mt19937_64 rng(seed);
                       auto C = random_valid_cube(picard_ptr({2}, {2}, {{{1}}}), 2, rng);
                       Coords v(C.vertex(4).begin(), C.vertex(4).end());
                       v[0] += 1;
                       C.set_vertex(4, v);
                       return validate_cube(C);
                   }});
    out.push_back({"cube: 3-cube with a broken pentagon", {"path-agreement"}, [seed] {
                       std::mt19937_64 rng(seed);
                       auto C = random_valid_cube(picard_ptr({2}, {2}, {{{1}}}), 3, rng);
                       Coords b(C.f(0, 4).begin(), C.f(0, 4).end());
                       b[0] += 1;
                       C.set_f(0, 4, b);
                       return check_higher_coherence(C);
                   }});
    out.push_back({"presentation: rotation with a wrong third map", {"rotation-shape"}, [&fx] {
                       return structural_of(mutate_presentation(fx.document("commutativity_square.json"), [](json& p) {
                           for (auto& t : p["triangles"])
                               if (t["id"] == "rot-incl-x") t["h"] = "Si1";
                       }));
                   }});
    out.push_back({"presentation: octahedron with mismatched faces", {"octahedron-shape"}, [&fx] {
                       return structural_of(mutate_presentation(fx.document("commutativity_square.json"), [](json& p) {
                           p["octahedra"].push_back({{"id", "stray"}, {"triangles", {"incl-x", "incl-x", "incl-y", "top"}}});
                       }));
                   }});
    out.push_back({"verdier: certificate edges disagree", {"verdier:shared-edge"}, [&fx] {
                       return structural_of(mutate_presentation(fx.document("octahedron_cube.json"), [](json& p) {
                           for (auto& t : p["triangles"])
                               if (t["id"] == "rot-d4") {
                                   t["f"] = "b5";
                                   t.erase("rotated_from");
                               }
                       }));
                   }});
    out.push_back({"functor: triangle sent to one on other objects", {"triangle-image"}, [gl] {
                       auto F = identity_tri_functor(gl);
                       const auto& T = *gl;
                       std::vector<char> linked(T.triangles.size(), 0);
                       for (const auto& D : T.triangles)
                           if (D.rotated_from != kNone) linked[D.rotated_from] = 1;
                       for (Id t = 0; t < T.triangles.size(); ++t) {
                           const auto& D = T.triangles[t];
                           if (linked[t] || D.rotated_from != kNone) continue;
                           const auto& E = T.triangles[(t + 1) % T.triangles.size()];
                           if (E.x == D.x && E.y == D.y && E.z == D.z) continue;
                           F.tri[0][t] = (t + 1) % T.triangles.size();
                           break;
                       }
                       return check_multiexact_tri_functor(F);
                   }});
    out.push_back({"functor: induced grid not listed", {"verdier-image"}, [&fx] {
                       auto F = *fx.tensor_ws().functors.at("tensor");
                       for (auto& [k, v] : F.verdier)
                           if (v != kNone) {
                               F.verdier.erase(k);
                               break;
                           }
                       return check_functor_verdier_admission(F);
                   }});
    out.push_back({"determinant: object value off by 2", {"additivity-typing"}, [&euler, x] {
                       auto D = euler;
                       D.set_obj(x, D.P().A().add(D.obj(x), Coords{2}));
                       return validate_determinant(D);
                   }});
    out.push_back({"determinant: value on a sign automorphism", {"naturality"}, [&euler, &S, &B, x] {
                       auto D = euler;
                       auto e = D.entry(0, *S.find_iso("neg:" + S.objects[x]), 0);
                       D.set_iso(0, e, B.add(D.iso(0, e), Coords{1}));
                       return validate_determinant(D);
                   }});
    out.push_back({"determinant: value on one shuffle triangle", {"octahedron"}, [&euler, &S, &B] {
                       auto D = euler;
                       auto e = D.entry(0, S.triangles.size() / 2, 0);
                       D.set_tri(0, e, B.add(D.tri(0, e), Coords{1}));
                       return validate_determinant(D);
                   }});
    out.push_back({"determinant: commutativity sign dropped", {"commutativity"},
                   [gl] { return validate_determinant(euler_determinant(gl, true)); }});
    out.push_back({"determinant (cubical): commutativity sign dropped", {"nine-diagram"},
                   [gl] { return validate_cubical_determinant(euler_determinant(gl, true)); }});
    out.push_back({"morphism: twist changed at one object", {"triangle-compatibility"}, [&euler, x] {
                       std::vector<Coords> th(euler.objects().tuple_count(), Coords{0});
                       for (std::size_t k = 1; k < th.size(); k += 3) th[k] = {1};
                       auto d2 = twist_determinant(euler, th);
                       th[x] = {th[x][0] ? 0 : 1};
                       return check_det_morphism({euler, d2, th});
                   }});
    out.push_back({"factorization: wrong comparison at one object", {"triangle-factorization"}, [&euler, x] {
                       std::vector<Coords> alpha(euler.objects().tuple_count(), Coords{0});
                       alpha[x] = {1};
                       return check_universal_factorization(euler, euler, identity_functor(euler.P()), alpha);
                   }});
    out.push_back({"picard functor: constant monoidal cell", {"monoidal-unit"}, [] {
                       auto F = identity_functor(sign_ring().base);
                       F.m[0].terms.push_back({{1}, {}});
                       return check_multiexact_picard_functor(F);
                   }});
    out.push_back({"picard functor: asymmetric monoidal cell", {"monoidal-symmetry"}, [] {
                       auto F = identity_functor(sign_ring().base);
                       F.m[0].terms.push_back({{1}, {{1, 1}, {2, 1}}});
                       return check_multiexact_picard_functor(F);
                   }});
    out.push_back({"ring: non-associative product", {"associativity"}, [] {
                       CategoricalRingData R;
                       R.base = PicardPresentation(FGAbelianGroup({4, 4, 4}), FGAbelianGroup(), {});
                       const Coords z{0, 0, 0};
                       R.mult.assign(3, std::vector<Coords>(3, z));
                       for (std::size_t i = 0; i < 3; ++i) {
                           Coords e = z;
                           e[i] = 1;
                           R.mult[0][i] = R.mult[i][0] = e;
                       }
                       R.mult[1][2] = {0, 1, 0};
                       R.unit = {1, 0, 0};
                       R.left_act = R.right_act = std::vector<std::vector<Coords>>(3);
                       return validate_categorical_ring(R);
                   }});
    out.push_back({"ring: stored action disagrees with the sigma composite", {"SigmaMismatch"}, [] {
                       auto R = sign_ring();
                       R.right_act[0][0] = {0};
                       return error_as_failure([&] { pi1_bimodule(R); }, "SigmaMismatch");
                   }});
    (void)seed;
    return out;
}

/** Unmutated counterparts; each must come back clean. */
inline std::vector<std::pair<std::string, std::function<Report()>>> clean_fixtures(Fixtures& fx, std::uint64_t seed) {
    auto gl = fx.graded_lines().presentations.at("GL");
    const auto& euler = fx.graded_lines().determinants.at("euler");
    return {
        {"picard (Z,Z/2,xy)", [] { return validate_picard(*picard_ptr({0}, {2}, {{{1}}})); }},
        {"random 2-cube", [seed] {
             std::mt19937_64 rng(seed);
             return validate_cube(random_valid_cube(picard_ptr({2}, {2}, {{{1}}}), 2, rng));
         }},
        {"random 3-cube coherence", [seed] {
             std::mt19937_64 rng(seed);
             return check_higher_coherence(random_valid_cube(picard_ptr({2}, {2}, {{{1}}}), 3, rng));
         }},
        {"commutativity square", [&fx] { return fx.square_ws().structural.begin()->second; }},
        {"octahedron cube", [&fx] { return fx.octahedron_ws().structural.begin()->second; }},
        {"identity functor", [gl] { return check_multiexact_tri_functor(identity_tri_functor(gl)); }},
        {"tensor admission", [&fx] { return check_functor_verdier_admission(*fx.tensor_ws().functors.at("tensor")); }},
        {"euler determinant", [&euler] { return validate_determinant(euler); }},
        {"euler determinant (cubical)", [&euler] { return validate_cubical_determinant(euler); }},
        {"identity morphism", [&euler] {
             return check_det_morphism({euler, euler, std::vector<Coords>(euler.objects().tuple_count(), Coords{0})});
         }},
        {"trivial factorization", [&euler] {
             return check_universal_factorization(euler, euler, identity_functor(euler.P()),
                                                  std::vector<Coords>(euler.objects().tuple_count(), Coords{0}));
         }},
        {"identity picard functor", [] { return check_multiexact_picard_functor(identity_functor(sign_ring().base)); }},
        {"sign ring", [] { return validate_categorical_ring(sign_ring()); }},
        {"sign ring bimodule", [] {
             return error_as_failure([] { pi1_bimodule(sign_ring()); }, "SigmaMismatch");
         }},
    };
}

inline Report defect_completeness(Fixtures& fx, std::uint64_t seed) {
    Report r;
    auto cases = defect_catalogue(fx, seed);
    r.check("catalogue-size", cases.size() >= 12, "catalogue", std::to_string(cases.size()) + " defects");
    for (const auto& c : cases) {
        auto got = failing(c.mutated());
        std::string detail;
        for (const auto& s : got) detail += (detail.empty() ? "" : ",") + s;
        r.check("caught-by-target-only", got == c.target, c.name, "failing: " + detail);
    }
    for (const auto& [name, f] : clean_fixtures(fx, seed)) {
        auto rep = f();
        r.check("no-false-positive", rep.ok(), name, rep.failing_checks().empty() ? "" : rep.failing_checks()[0]);
    }
    return r;
}

} // namespace acceptance

inline const std::vector<std::pair<int, std::string>>& criterion_titles() {
    static const std::vector<std::pair<int, std::string>> t{
        {1, "Q-complex soundness up to level 4"},
        {2, "H0 identification against the direct presentation"},
        {3, "cubical relations"},
        {4, "cube-sum closure"},
        {5, "higher coherence of 3-cubes"},
        {6, "axiomatic and cubical determinant verdicts agree"},
        {7, "closure under sums and compositions"},
        {8, "bundled diagram fixtures pass the Verdier check"},
        {9, "K0 ring of graded lines"},
        {10, "seeded-defect completeness"},
        {11, "determinism of seeded runs"},
    };
    return t;
}

inline json acceptance_json(const std::vector<CriterionResult>& results, std::uint64_t seed, bool timing);

/** Runs the criteria; criterion 11 reruns the seeded ones and compares serialized reports. */
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    using namespace acceptance;
    Fixtures fx(opt.fixture_dir);
    auto wanted = [&](int n) { return opt.only.empty() || opt.only.contains(n); };
    auto compute = [&](int n) -> Report {
        switch (n) {
        case 1: return qcomplex_soundness(opt.seed);
        case 2: return h0_identification();
        case 3: return cubical_relations(opt.seed);
        case 4: return cube_sum_closure(opt.seed);
        case 5: return higher_coherence(opt.seed);
        case 6: return determinant_equivalence(fx, opt.seed);
        case 7: return determinant_closure(fx, opt.seed);
        case 8: return diagram_fixtures(fx);
        case 9: return k0_ring(fx);
        case 10: return defect_completeness(fx, opt.seed);
        }
        return Report{};
    };
    std::vector<CriterionResult> out;
    for (const auto& [n, title] : criterion_titles()) {
        if (!wanted(n) || n == 11) continue;
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult c{n, title, Report("criterion-" + std::to_string(n)), 0};
        try {
            c.report.merge(compute(n));
        } catch (const Error& e) {
            c.report.set_error(e.kind(), e.message());
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(c));
    }
    if (wanted(11)) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult c{11, criterion_titles().back().second, Report("criterion-11"), 0};
        const std::set<int> seeded{3, 4, 5, 6, 7, 10};
        std::vector<CriterionResult> first, second;
        for (const auto& r : out)
            if (seeded.contains(r.number)) first.push_back(r);
        for (int n : seeded) {
            if (!wanted(n)) continue;
            CriterionResult again{n, "", Report("criterion-" + std::to_string(n)), 0};
            try {
                again.report.merge(compute(n));
            } catch (const Error& e) {
                again.report.set_error(e.kind(), e.message());
            }
            second.push_back(std::move(again));
        }
        for (auto* v : {&first, &second})
            for (auto& r : *v) r.title.clear();
        auto a = acceptance_json(first, opt.seed, false).dump(), b = acceptance_json(second, opt.seed, false).dump();
        c.report.check("rerun-byte-identical", !first.empty() && a == b, "seeded criteria",
                       std::to_string(a.size()) + " bytes");
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(c));
    }
    return out;
}

inline json acceptance_json(const std::vector<CriterionResult>& results, std::uint64_t seed, bool timing) {
    json crit = json::array();
    bool all = true;
    for (const auto& c : results) {
        json j = {{"number", c.number}, {"title", c.title}, {"result", c.pass() ? "PASS" : "FAIL"},
                  {"report", report_json(c.report)}};
        if (timing) j["seconds"] = c.seconds;
        crit.push_back(std::move(j));
        all = all && c.pass();
    }
    return {{"command", "selftest"}, {"seed", seed}, {"status", all ? "valid" : "invalid"}, {"criteria", crit}};
}

} // namespace multidet
