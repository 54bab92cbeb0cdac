#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "multidet/report.hpp"

namespace multidet {

using Id = std::size_t;
inline constexpr Id kNone = static_cast<Id>(-1);

/** Morphism labels: "id", "0", "neg" are reserved; "" means unlabelled. */
namespace label {

inline bool absent(const std::string& s) { return s.empty(); }
inline std::string shift(const std::string& s) {
    if (s.empty() || s == "id" || s == "0" || s == "neg") return s;
    if (s[0] == '-') return "-" + shift(s.substr(1));
    return "S" + s;
}
inline std::string negate(const std::string& s) {
    if (s.empty() || s == "0") return s;
    if (s == "id") return "neg";
    if (s == "neg") return "id";
    return s[0] == '-' ? s.substr(1) : "-" + s;
}
/** Both present and different. */
inline bool conflict(const std::string& a, const std::string& b) { return !a.empty() && !b.empty() && a != b; }

} // namespace label

struct IsoMor {
    std::string id;
    Id src = kNone, dst = kNone;
};

/** Distinguished triangle x -f-> y -g-> z -h-> Σx. */
struct Triangle {
    std::string id;
    Id x = kNone, y = kNone, z = kNone;
    std::string f, g, h;
    Id rotated_from = kNone;  // this triangle is the Σ-rotation of that one
};

struct TriangleIso {
    std::string id;
    Id from = kNone, to = kNone;
    Id iso_x = kNone, iso_y = kNone, iso_z = kNone;
};

/** Δ1: x→y→z′, Δ2: x→z→y′, Δ3: y→z→x′, Δ4: z′→y′→x′. */
struct Octahedron {
    std::string id;
    std::array<Id, 4> tri{kNone, kNone, kNone, kNone};
};

/** x⊕y with Δ1: x→x⊕y→y and Δ2: y→x⊕y→x; `nine` is the commutativity diagram if listed. */
struct SumEntry {
    Id x = kNone, y = kNone, sum = kNone;
    Id tri1 = kNone, tri2 = kNone;
    Id nine = kNone;
};

struct VerdierCertificate {
    Id A = kNone;
    std::array<Id, 3> oct{kNone, kNone, kNone};
};

/**
 * 3×3 grid: rows (x′,y′,z′), (x,y,z), (x″,y″,z″); rows[r] and cols[c] are the
 * triangles along row r and column c.
 */
struct NineDiagram {
    std::string id;
    std::array<std::array<Id, 3>, 3> grid{};
    std::array<Id, 3> rows{kNone, kNone, kNone};
    std::array<Id, 3> cols{kNone, kNone, kNone};
    std::string anticommutative_corner = "bottom-right";
    std::optional<VerdierCertificate> certificate;
    Id from_octahedron = kNone;  // set by octahedron_to_2cube
};

/** @brief Finite battery presenting a triangulated category. Objects, isos and the rest are referenced by index. */
class TriangPresentation {
public:
    std::string name;
    std::vector<std::string> objects;
    Id zero = kNone;
    std::vector<Id> shift;
    std::vector<IsoMor> isos;
    std::vector<Id> identity;                  // per object
    std::vector<Id> inverse;                   // per iso, kNone if not listed
    std::map<std::pair<Id, Id>, Id> compose;   // (g, f) -> g∘f
    std::vector<Triangle> triangles;
    std::vector<TriangleIso> triangle_isos;
    std::vector<SumEntry> sums;
    std::vector<Octahedron> octahedra;
    std::vector<NineDiagram> nine_diagrams;
    std::map<std::string, std::string> builtin;  // generator name and parameters, when generated

    Id add_object(const std::string& n) {
        objects.push_back(n);
        shift.push_back(kNone);
        identity.push_back(kNone);
        return objects.size() - 1;
    }
    Id add_iso(std::string id, Id src, Id dst) {
        isos.push_back({std::move(id), src, dst});
        inverse.push_back(kNone);
        return isos.size() - 1;
    }

    /** Adds a triangle unless one with the same objects and labels exists. */
    Id add_triangle(Id x, Id y, Id z, std::string f = {}, std::string g = {}, std::string h = {}, std::string id = {}) {
        std::string key = triangle_key(x, y, z, f, g, h);
        auto& idx = triangle_index();
        if (auto it = idx.find(key); it != idx.end()) return it->second;
        if (id.empty()) id = "t" + std::to_string(triangles.size());
        triangles.push_back({std::move(id), x, y, z, std::move(f), std::move(g), std::move(h)});
        idx.emplace(std::move(key), triangles.size() - 1);
        return triangles.size() - 1;
    }
    std::optional<Id> find_triangle(Id x, Id y, Id z, const std::string& f, const std::string& g, const std::string& h) const {
        auto& idx = triangle_index();
        auto it = idx.find(triangle_key(x, y, z, f, g, h));
        if (it == idx.end()) return std::nullopt;
        return it->second;
    }
    Id add_octahedron(std::array<Id, 4> t, std::string id = {}) {
        auto& idx = octahedron_index();
        if (auto it = idx.find(t); it != idx.end()) return it->second;
        if (id.empty()) id = "o" + std::to_string(octahedra.size());
        octahedra.push_back({std::move(id), t});
        idx.emplace(t, octahedra.size() - 1);
        return octahedra.size() - 1;
    }

    /** Σ-rotation x→y→z→Σx ↦ y→z→Σx→Σy (labels g, h, -Σf). */
    Id rotate(Id t) {
        Triangle T = triangles.at(t);
        if (T.x >= objects.size() || shift.at(T.x) == kNone) throw Error("UnresolvedReference", "shift of " + T.id);
        Id r = add_triangle(T.y, T.z, shift[T.x], T.g, T.h, label::negate(label::shift(T.f)));
        if (triangles[r].rotated_from == kNone && r != t) triangles[r].rotated_from = t;
        return r;
    }

    /** x=x→0; maps between zero objects are labelled "0". */
    Id degenerate_sub(Id x) { return add_triangle(x, x, zero, x == zero ? "0" : "id", "0", "0"); }
    /** 0→y=y. */
    Id degenerate_quot(Id y) { return add_triangle(zero, y, y, "0", y == zero ? "0" : "id", "0"); }

    /** x=x→0, 0→x=x and 0→0→0 (by objects and identity labels). */
    bool is_degenerate(Id t) const {
        const auto& T = triangles.at(t);
        if (T.z == zero && T.x == T.y && (T.f == "id" || T.x == zero)) return true;
        if (T.x == zero && T.y == T.z && (T.g == "id" || T.y == zero)) return true;
        return false;
    }

    std::optional<Id> find_object(const std::string& n) const { return find_in(object_index_, objects, n); }
    std::optional<Id> find_iso(const std::string& n) const { return find_id(iso_index_, isos, n); }
    std::optional<Id> find_triangle_id(const std::string& n) const { return find_id(tri_id_index_, triangles, n); }
    std::optional<Id> find_octahedron_id(const std::string& n) const { return find_id(oct_id_index_, octahedra, n); }
    std::optional<Id> find_nine(const std::string& n) const { return find_id(nine_id_index_, nine_diagrams, n); }

    /** Nine-diagram produced from an octahedron by octahedron_to_2cube, if any. */
    std::optional<Id> cube_of_octahedron(Id oct) const {
        if (cube_scan_ < nine_diagrams.size() || cube_scan_ > nine_diagrams.size()) {
            if (cube_scan_ > nine_diagrams.size()) {
                cube_index_.clear();
                cube_scan_ = 0;
            }
            for (; cube_scan_ < nine_diagrams.size(); ++cube_scan_)
                if (nine_diagrams[cube_scan_].from_octahedron != kNone)
                    cube_index_.emplace(nine_diagrams[cube_scan_].from_octahedron, cube_scan_);
        }
        auto it = cube_index_.find(oct);
        if (it == cube_index_.end()) return std::nullopt;
        return it->second;
    }

    /** Drops lookup caches after direct edits of the vectors. */
    void invalidate() const {
        object_index_.clear();
        iso_index_.clear();
        tri_id_index_.clear();
        oct_id_index_.clear();
        nine_id_index_.clear();
        tri_key_index_.clear();
        oct_key_index_.clear();
        cube_index_.clear();
        cube_scan_ = 0;
    }

    /** Composite g∘f if listed; identities compose implicitly. */
    std::optional<Id> composite(Id g, Id f) const {
        if (auto it = compose.find({g, f}); it != compose.end()) return it->second;
        if (isos.at(g).src == isos.at(g).dst && identity.at(isos[g].src) == g) return f;
        if (isos.at(f).src == isos.at(f).dst && identity.at(isos[f].src) == f) return g;
        return std::nullopt;
    }

private:
    static std::string triangle_key(Id x, Id y, Id z, const std::string& f, const std::string& g, const std::string& h) {
        return std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + "|" + f + "|" + g + "|" + h;
    }
    std::unordered_map<std::string, Id>& triangle_index() const {
        if (tri_key_index_.size() != triangles.size()) {
            tri_key_index_.clear();
            for (Id i = 0; i < triangles.size(); ++i) {
                const auto& T = triangles[i];
                tri_key_index_.emplace(triangle_key(T.x, T.y, T.z, T.f, T.g, T.h), i);
            }
        }
        return tri_key_index_;
    }
    std::map<std::array<Id, 4>, Id>& octahedron_index() const {
        if (oct_key_index_.size() != octahedra.size()) {
            oct_key_index_.clear();
            for (Id i = 0; i < octahedra.size(); ++i) oct_key_index_.emplace(octahedra[i].tri, i);
        }
        return oct_key_index_;
    }
    static std::optional<Id> find_in(std::unordered_map<std::string, Id>& idx, const std::vector<std::string>& v,
                                     const std::string& n) {
        if (idx.size() != v.size()) {
            idx.clear();
            for (Id i = 0; i < v.size(); ++i) idx.emplace(v[i], i);
        }
        auto it = idx.find(n);
        if (it == idx.end()) return std::nullopt;
        return it->second;
    }
    template <class T>
    static std::optional<Id> find_id(std::unordered_map<std::string, Id>& idx, const std::vector<T>& v, const std::string& n) {
        if (idx.size() != v.size()) {
            idx.clear();
            for (Id i = 0; i < v.size(); ++i) idx.emplace(v[i].id, i);
        }
        auto it = idx.find(n);
        if (it == idx.end()) return std::nullopt;
        return it->second;
    }

    mutable std::unordered_map<std::string, Id> object_index_, iso_index_, tri_id_index_, oct_id_index_, nine_id_index_;
    mutable std::unordered_map<std::string, Id> tri_key_index_;
    mutable std::map<std::array<Id, 4>, Id> oct_key_index_;
    mutable std::unordered_map<Id, Id> cube_index_;
    mutable std::size_t cube_scan_ = 0;
};

/** Edge identifications of a Verdier certificate. Labels are compared only where both are present. */
inline Report check_verdier(const TriangPresentation& T, Id nine) {
    Report r("check-verdier");
    if (nine >= T.nine_diagrams.size()) throw Error("UnresolvedReference", "nine-diagram #" + std::to_string(nine));
    const auto& N = T.nine_diagrams[nine];
    if (!N.certificate) throw Error("MissingCertificate", "nine-diagram " + N.id + " has no Verdier certificate");
    const auto& C = *N.certificate;
    const std::string where = N.id;
    auto tri = [&](Id t) -> const Triangle* { return t < T.triangles.size() ? &T.triangles[t] : nullptr; };
    const auto& G = N.grid;
    const Id xp = G[0][0], yp = G[0][1], zp = G[0][2];
    const Id x = G[1][0], y = G[1][1], z = G[1][2];
    const Id xs = G[2][0], ys = G[2][1], zs = G[2][2];
    const Id A = C.A;
    const Id Szp = zp < T.shift.size() ? T.shift[zp] : kNone;
    bool labels_missing = false;

    auto shape = [&](const std::string& what, const Triangle* t, Id a, Id b, Id c) {
        r.check(what, t && t->x == a && t->y == b && t->z == c, where);
    };
    auto same_labels = [&](const std::string& what, const Triangle* a, const Triangle* b) {
        if (!a || !b) return;
        if (a->f.empty() || a->g.empty() || b->f.empty() || b->g.empty()) labels_missing = true;
        r.check(what, !label::conflict(a->f, b->f) && !label::conflict(a->g, b->g) && !label::conflict(a->h, b->h), where);
    };
    auto same = [&](const std::string& what, const std::string& a, const std::string& b) {
        if (a.empty() || b.empty()) {
            labels_missing = true;
            return;
        }
        r.check(what, a == b, where);
    };

    r.check("certificate-object", A < T.objects.size(), where);
    std::array<const Octahedron*, 3> o{};
    for (int k = 0; k < 3; ++k) {
        o[k] = C.oct[k] < T.octahedra.size() ? &T.octahedra[C.oct[k]] : nullptr;
        r.check("certificate-octahedron", o[k] != nullptr, where + " o" + std::to_string(k + 1));
    }
    if (!o[0] || !o[1] || !o[2]) return r;
    auto row = [&](int k) { return tri(N.rows[k]); };
    auto col = [&](int k) { return tri(N.cols[k]); };
    std::array<std::array<const Triangle*, 4>, 3> P{};
    for (int k = 0; k < 3; ++k)
        for (int t = 0; t < 4; ++t) P[k][t] = tri(o[k]->tri[t]);

    // first octahedron: x′→x→x″, x′→y→A, x→y→z, x″→A→z
    shape("octahedron-1", P[0][0], xp, x, xs);
    shape("octahedron-1", P[0][1], xp, y, A);
    shape("octahedron-1", P[0][2], x, y, z);
    shape("octahedron-1", P[0][3], xs, A, z);
    same_labels("octahedron-1-edges", P[0][0], col(0));
    same_labels("octahedron-1-edges", P[0][2], row(1));
    // second: x′→y′→z′, x′→y→A, y′→y→y″, z′→A→y″
    shape("octahedron-2", P[1][0], xp, yp, zp);
    shape("octahedron-2", P[1][1], xp, y, A);
    shape("octahedron-2", P[1][2], yp, y, ys);
    shape("octahedron-2", P[1][3], zp, A, ys);
    same_labels("octahedron-2-edges", P[1][0], row(0));
    same_labels("octahedron-2-edges", P[1][2], col(1));
    // third: x″→A→z, x″→y″→z″, A→y″→Σz′, z→z″→Σz′
    shape("octahedron-3", P[2][0], xs, A, z);
    shape("octahedron-3", P[2][1], xs, ys, zs);
    shape("octahedron-3", P[2][2], A, ys, Szp);
    shape("octahedron-3", P[2][3], z, zs, Szp);
    same_labels("octahedron-3-edges", P[2][1], row(2));
    // shared edges between the three octahedra
    if (P[0][1] && P[1][1]) {
        same("shared-edge", P[0][1]->f, P[1][1]->f);
        same("shared-edge", P[0][1]->g, P[1][1]->g);
    }
    if (P[0][3] && P[2][0]) same_labels("shared-edge", P[0][3], P[2][0]);
    if (P[1][3] && P[2][2]) {
        same("shared-edge", P[1][3]->g, P[2][2]->f);
        same("shared-edge", P[1][3]->h, P[2][2]->g);
    }
    if (col(2) && P[2][3]) {
        same("shared-edge", col(2)->g, P[2][3]->f);
        same("shared-edge", col(2)->h, P[2][3]->g);
    }
    if (labels_missing) r.note("labels", where, "some morphism labels absent; matched on objects there");
    return r;
}

/** Per-item structural checks of a presentation (not the triangulated-category axioms). */
inline Report validate_presentation(const TriangPresentation& T) {
    Report r("validate-presentation");
    const Id no = T.objects.size(), ni = T.isos.size(), nt = T.triangles.size(), nq = T.octahedra.size();
    auto obj_ok = [&](Id o) { return o < no; };
    r.check("zero-object", obj_ok(T.zero), "zero");
    if (!obj_ok(T.zero)) return r;
    // shift: a bijection between its domain and image (symbolic fixtures list only the shifts they use)
    std::vector<bool> hit(no, false);
    bool bij = T.shift.size() == no;
    for (Id o = 0; bij && o < no; ++o) {
        if (T.shift[o] == kNone) continue;
        if (!obj_ok(T.shift[o]) || hit[T.shift[o]]) bij = false;
        else hit[T.shift[o]] = true;
    }
    r.check("shift-bijection", bij, "shift");
    if (bij) r.check("shift-zero", T.shift[T.zero] == T.zero, "shift");
    // isos
    for (Id i = 0; i < ni; ++i)
        r.check("iso-endpoints", obj_ok(T.isos[i].src) && obj_ok(T.isos[i].dst), T.isos[i].id);
    r.check("identity-table", T.identity.size() == no && T.inverse.size() == ni, "isos");
    if (T.identity.size() != no || T.inverse.size() != ni) return r;
    for (Id o = 0; o < no; ++o) {
        Id e = T.identity[o];
        r.check_lazy("iso-identity", e < ni && T.isos[e].src == o && T.isos[e].dst == o, [&] { return T.objects[o]; });
    }
    for (const auto& [gf, h] : T.compose) {
        auto [g, f] = gf;
        bool ok = g < ni && f < ni && h < ni && T.isos[f].dst == T.isos[g].src && T.isos[h].src == T.isos[f].src &&
                  T.isos[h].dst == T.isos[g].dst;
        r.check_lazy("iso-composition", ok, [&] {
            auto nm = [&](Id i) { return i < ni ? T.isos[i].id : "#" + std::to_string(i); };
            return nm(g) + "∘" + nm(f) + "=" + nm(h);
        });
    }
    for (const auto& [gf, h] : T.compose) {
        auto [g, f] = gf;
        if (g >= ni || f >= ni || h >= ni) continue;
        // associativity where all composites are listed
        for (const auto& [kg, hg] : T.compose) {
            if (kg.second != g) continue;
            Id k = kg.first;
            auto left = T.composite(hg, f);
            auto kh = T.composite(k, h);
            if (left && kh)
                r.check_lazy("iso-associativity", *left == *kh,
                             [&] { return T.isos[k].id + "," + T.isos[g].id + "," + T.isos[f].id; });
        }
    }
    for (Id i = 0; i < ni; ++i) {
        Id v = T.inverse[i];
        if (v == kNone) continue;
        bool ok = v < ni && T.isos[v].src == T.isos[i].dst && T.isos[v].dst == T.isos[i].src;
        if (ok) {
            auto c = T.composite(v, i);
            if (c) ok = *c == T.identity[T.isos[i].src];
        }
        r.check_lazy("iso-inverse", ok, [&] { return T.isos[i].id; });
    }
    // triangles
    for (Id t = 0; t < nt; ++t) {
        const auto& D = T.triangles[t];
        r.check_lazy("triangle-objects", obj_ok(D.x) && obj_ok(D.y) && obj_ok(D.z), [&] { return D.id; });
    }
    for (Id t = 0; t < nt; ++t) {
        const auto& D = T.triangles[t];
        if (D.rotated_from == kNone) continue;
        bool ok = D.rotated_from < nt;
        if (ok) {
            const auto& O = T.triangles[D.rotated_from];
            ok = obj_ok(O.x) && bij && T.shift[O.x] != kNone && D.x == O.y && D.y == O.z && D.z == T.shift[O.x] && !label::conflict(D.f, O.g) &&
                 !label::conflict(D.g, O.h) && !label::conflict(D.h, label::negate(label::shift(O.f)));
        }
        r.check("rotation-shape", ok, D.id);
    }
    for (const auto& I : T.triangle_isos) {
        bool ok = I.from < nt && I.to < nt && I.iso_x < ni && I.iso_y < ni && I.iso_z < ni;
        if (ok) {
            const auto &a = T.triangles[I.from], &b = T.triangles[I.to];
            ok = T.isos[I.iso_x].src == a.x && T.isos[I.iso_x].dst == b.x && T.isos[I.iso_y].src == a.y &&
                 T.isos[I.iso_y].dst == b.y && T.isos[I.iso_z].src == a.z && T.isos[I.iso_z].dst == b.z;
        }
        r.check("triangle-iso-endpoints", ok, I.id);
    }
    for (const auto& O : T.octahedra) {
        bool ok = std::all_of(O.tri.begin(), O.tri.end(), [&](Id t) { return t < nt; });
        if (ok) {
            const auto &d1 = T.triangles[O.tri[0]], &d2 = T.triangles[O.tri[1]], &d3 = T.triangles[O.tri[2]],
                       &d4 = T.triangles[O.tri[3]];
            ok = d1.x == d2.x && d1.y == d3.x && d2.y == d3.y && d1.z == d4.x && d2.z == d4.y && d3.z == d4.z;
        }
        r.check("octahedron-shape", ok, O.id);
    }
    for (std::size_t s = 0; s < T.sums.size(); ++s) {
        const auto& S = T.sums[s];
        bool ok = obj_ok(S.x) && obj_ok(S.y) && obj_ok(S.sum) && S.tri1 < nt && S.tri2 < nt;
        if (ok) {
            const auto &a = T.triangles[S.tri1], &b = T.triangles[S.tri2];
            ok = a.x == S.x && a.y == S.sum && a.z == S.y && b.x == S.y && b.y == S.sum && b.z == S.x;
        }
        if (ok && S.nine != kNone) {
            ok = S.nine < T.nine_diagrams.size();
            if (ok) {
                const auto& N = T.nine_diagrams[S.nine];
                ok = N.rows[1] == S.tri2 && N.cols[1] == S.tri1;
            }
        }
        r.check_lazy("sum-entry", ok, [&] { return "sum #" + std::to_string(s); });
    }
    for (Id k = 0; k < T.nine_diagrams.size(); ++k) {
        const auto& N = T.nine_diagrams[k];
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
            ok = ok && N.rows[i] < nt && N.cols[i] < nt;
            if (!ok) break;
            const auto &R = T.triangles[N.rows[i]], &C = T.triangles[N.cols[i]];
            ok = R.x == N.grid[i][0] && R.y == N.grid[i][1] && R.z == N.grid[i][2] && C.x == N.grid[0][i] &&
                 C.y == N.grid[1][i] && C.z == N.grid[2][i];
        }
        r.check("nine-diagram-shape", ok, N.id);
        if (!ok) continue;
        if (!N.certificate) {
            r.note("verdier", N.id, "no certificate");
            continue;
        }
        r.merge(check_verdier(T, k), "verdier:");
    }
    (void)nq;
    return r;
}

/**
 * Writes an octahedron as a 2-cube: rows Δ1, Δ2 and 0→x′=x′, with A = y′ and
 * the octahedron itself as the middle certificate. Registers the grid, the
 * degenerate triangles it needs and the two trivial octahedra.
 */
inline Id octahedron_to_2cube(TriangPresentation& T, Id oct) {
    if (oct >= T.octahedra.size()) throw Error("UnresolvedReference", "octahedron #" + std::to_string(oct));
    if (auto k = T.cube_of_octahedron(oct)) return *k;
    const auto O = T.octahedra[oct];
    const Triangle d1 = T.triangles.at(O.tri[0]), d2 = T.triangles.at(O.tri[1]), d3 = T.triangles.at(O.tri[2]),
                   d4 = T.triangles.at(O.tri[3]);
    const Id x = d1.x, y = d1.y, zp = d1.z, z = d2.y, yp = d2.z, xp = d3.z;
    const Id Z = T.zero;
    Id xx0 = T.degenerate_sub(x);
    Id zero_yp = T.degenerate_quot(yp);
    Id zero_xp = T.degenerate_quot(xp);
    Id rot4 = T.rotate(O.tri[3]);
    NineDiagram N;
    N.id = "cube:" + O.id;
    N.grid = {{{x, y, zp}, {x, z, yp}, {Z, xp, xp}}};
    N.rows = {O.tri[0], O.tri[1], zero_xp};
    N.cols = {xx0, O.tri[2], O.tri[3]};
    VerdierCertificate C;
    C.A = yp;
    C.oct[0] = T.add_octahedron({xx0, O.tri[1], O.tri[1], zero_yp});
    C.oct[1] = oct;
    C.oct[2] = T.add_octahedron({zero_yp, zero_xp, rot4, rot4});
    N.certificate = C;
    N.from_octahedron = oct;
    (void)d4;
    T.nine_diagrams.push_back(std::move(N));
    return T.nine_diagrams.size() - 1;
}

/** The zero category: one object, its identity, 0→0→0 and the zero octahedron and grid. */
inline TriangPresentation point_presentation() {
    TriangPresentation T;
    T.name = "point";
    T.builtin = {{"generator", "point"}};
    T.zero = T.add_object("0");
    T.shift[0] = 0;
    T.identity[0] = T.add_iso("id0", 0, 0);
    T.inverse[0] = 0;
    Id z = T.add_triangle(0, 0, 0, "0", "0", "0", "zero");
    Id o = T.add_octahedron({z, z, z, z}, "zero");
    NineDiagram N;
    N.id = "zero";
    N.grid = {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
    N.rows = {z, z, z};
    N.cols = {z, z, z};
    N.certificate = VerdierCertificate{0, {o, o, o}};
    T.nine_diagrams.push_back(N);
    return T;
}

} // namespace multidet
