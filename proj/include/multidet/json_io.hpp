#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multidet/catring.hpp"
#include "multidet/cube.hpp"
#include "multidet/determinant.hpp"

namespace multidet {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct DetMorphismRecord {
    std::string from, to;
    std::vector<Coords> theta;
};

struct FactorizationRecord {
    std::string universal, det, functor;
    std::vector<Coords> alpha;
};

/**
 * @brief Named inputs of all kinds. Generated entries keep their builtin
 * spec so that emission writes the reference, not the expansion.
 */
struct Workspace {
    std::map<std::string, std::shared_ptr<const PicardPresentation>> picard;
    std::map<std::string, Cube> cubes;
    std::map<std::string, PresentationPtr> presentations;
    std::map<std::string, std::shared_ptr<const TriFunctorData>> functors;
    std::map<std::string, PicardFunctorData> picard_functors;
    std::map<std::string, DeterminantData> determinants;
    std::map<std::string, DetMorphismRecord> morphisms;
    std::map<std::string, FactorizationRecord> factorizations;
    std::map<std::string, CategoricalRingData> catrings;
    /** kind → id → canonical builtin spec */
    std::map<std::string, std::map<std::string, json>> builtin;
    /** structural validation of explicit presentations, run at load */
    std::map<std::string, Report> structural;

    bool empty() const {
        return picard.empty() && cubes.empty() && presentations.empty() && functors.empty() && picard_functors.empty() &&
               determinants.empty() && morphisms.empty() && factorizations.empty() && catrings.empty();
    }
};

namespace jsonio {

[[noreturn]] inline void parse_error(const std::string& path, const std::string& msg) {
    throw Error("ParseError", (path.empty() ? std::string("/") : path) + ": " + msg);
}

inline const json& at(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) parse_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) parse_error(path, "missing field \"" + key + "\"");
    return *it;
}

inline const json* opt(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

template <class T>
T as(const json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        parse_error(path, std::string("wrong type (") + j.type_name() + ")");
    }
}

inline std::string str(const json& j, const std::string& key, const std::string& path) {
    return as<std::string>(at(j, key, path), path + "/" + key);
}

inline Coords coords(const json& j, const std::string& path) { return as<Coords>(j, path); }

inline const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) parse_error(path, "expected an array");
    return j;
}

inline FGAbelianGroup group(const json& j, const std::string& path) {
    auto f = as<std::vector<Coord>>(at(j, "invariant_factors", path), path + "/invariant_factors");
    try {
        return FGAbelianGroup(f);
    } catch (const Error& e) {
        parse_error(path, e.what());
    }
}
inline json group_json(const FGAbelianGroup& G) { return {{"invariant_factors", G.invariant_factors()}}; }

template <class Map>
void insert_unique(Map& m, const std::string& id, typename Map::mapped_type v, const std::string& kind) {
    if (!m.emplace(id, std::move(v)).second) throw Error("DuplicateId", kind + " \"" + id + "\" defined twice");
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& id, const std::string& kind) {
    auto it = m.find(id);
    if (it == m.end()) throw Error("UnresolvedReference", "unknown " + kind + " \"" + id + "\"");
    return it->second;
}

inline json cellpoly_json(const CellPoly& p) {
    json out = json::array();
    for (const auto& t : p.terms) {
        json f = json::array();
        for (const auto& [v, e] : t.factors) f.push_back({v, e});
        out.push_back({{"coef", t.coef}, {"factors", f}});
    }
    return out;
}
inline CellPoly cellpoly(const json& j, const std::string& path) {
    CellPoly p;
    for (std::size_t k = 0; k < array(j, path).size(); ++k) {
        std::string q = path + "/" + std::to_string(k);
        CellPoly::Term t;
        t.coef = coords(at(j[k], "coef", q), q + "/coef");
        for (const auto& f : array(at(j[k], "factors", q), q + "/factors")) {
            auto pr = as<std::vector<long long>>(f, q + "/factors");
            if (pr.size() != 2 || pr[0] < 0) parse_error(q, "factor must be [variable, degree]");
            t.factors.push_back({static_cast<std::size_t>(pr[0]), static_cast<int>(pr[1])});
        }
        p.terms.push_back(std::move(t));
    }
    return p;
}

// ---- Picard -------------------------------------------------------------

inline PicardPresentation picard(const json& j, const std::string& path) {
    auto A = group(at(j, "A", path), path + "/A");
    auto B = group(at(j, "B", path), path + "/B");
    auto c = as<std::vector<std::vector<Coords>>>(at(j, "c", path), path + "/c");
    try {
        return PicardPresentation(A, B, c);
    } catch (const Error& e) {
        parse_error(path + "/c", e.what());
    }
}
inline json picard_json(const PicardPresentation& P) {
    return {{"A", group_json(P.A())}, {"B", group_json(P.B())}, {"c", P.c_table()}};
}

// ---- presentations -------------------------------------------------------

inline GradedWindow window(const json& p, const std::string& path) {
    GradedWindow w;
    if (auto* v = opt(p, "lo")) w.lo = as<int>(*v, path + "/lo");
    if (auto* v = opt(p, "hi")) w.hi = as<int>(*v, path + "/hi");
    if (auto* v = opt(p, "max_entry")) w.max_entry = as<int>(*v, path + "/max_entry");
    return w;
}
inline json window_json(const GradedWindow& w) { return {{"lo", w.lo}, {"hi", w.hi}, {"max_entry", w.max_entry}}; }

/** Canonical builtin spec and the generated presentation. */
inline std::pair<json, TriangPresentation> builtin_presentation(const json& j, const std::string& path) {
    std::string b = str(j, "builtin", path);
    const json params = j.contains("params") ? j["params"] : json::object();
    if (b == "point") return {{{"builtin", "point"}}, point_presentation()};
    if (b == "graded-lines") {
        GradedLinesOptions o;
        o.window = window(params, path + "/params");
        if (auto* v = opt(params, "battery")) {
            auto s = as<std::string>(*v, path + "/params/battery");
            if (s != "full" && s != "objects") parse_error(path + "/params/battery", "expected \"full\" or \"objects\"");
            o.battery = s == "full";
        }
        json p = window_json(o.window);
        p["battery"] = o.battery ? "full" : "objects";
        try {
            return {{{"builtin", "graded-lines"}, {"params", p}}, graded_lines_presentation(o)};
        } catch (const Error& e) {
            parse_error(path + "/params", e.what());
        }
    }
    parse_error(path + "/builtin", "unknown presentation generator \"" + b + "\"");
}

inline TriangPresentation presentation(const json& j, const std::string& path) {
    TriangPresentation T;
    T.name = str(j, "id", path);
    auto obj = [&](const json& v, const std::string& p) {
        auto n = as<std::string>(v, p);
        auto o = T.find_object(n);
        if (!o) throw Error("UnresolvedReference", p + ": unknown object \"" + n + "\"");
        return *o;
    };
    auto iso = [&](const json& v, const std::string& p) {
        auto n = as<std::string>(v, p);
        auto o = T.find_iso(n);
        if (!o) throw Error("UnresolvedReference", p + ": unknown iso \"" + n + "\"");
        return *o;
    };
    auto tri = [&](const json& v, const std::string& p) {
        auto n = as<std::string>(v, p);
        auto o = T.find_triangle_id(n);
        if (!o) throw Error("UnresolvedReference", p + ": unknown triangle \"" + n + "\"");
        return *o;
    };
    auto oct = [&](const json& v, const std::string& p) {
        auto n = as<std::string>(v, p);
        auto o = T.find_octahedron_id(n);
        if (!o) throw Error("UnresolvedReference", p + ": unknown octahedron \"" + n + "\"");
        return *o;
    };
    auto unique = [](std::set<std::string>& seen, const std::string& id, const std::string& kind) {
        if (!seen.insert(id).second) throw Error("DuplicateId", kind + " \"" + id + "\" defined twice");
    };
    std::set<std::string> seen;
    const auto& objs = array(at(j, "objects", path), path + "/objects");
    for (std::size_t k = 0; k < objs.size(); ++k) {
        auto n = as<std::string>(objs[k], path + "/objects/" + std::to_string(k));
        unique(seen, n, "object");
        T.add_object(n);
    }
    T.zero = obj(at(j, "zero", path), path + "/zero");
    if (auto* s = opt(j, "shift")) {
        if (!s->is_object()) parse_error(path + "/shift", "expected an object");
        for (const auto& [k, v] : s->items()) T.shift[obj(json(k), path + "/shift")] = obj(v, path + "/shift/" + k);
    }
    seen.clear();
    if (auto* is = opt(j, "isos"))
        for (std::size_t k = 0; k < array(*is, path + "/isos").size(); ++k) {
            std::string p = path + "/isos/" + std::to_string(k);
            auto id = str((*is)[k], "id", p);
            unique(seen, id, "iso");
            T.add_iso(id, obj(at((*is)[k], "src", p), p + "/src"), obj(at((*is)[k], "dst", p), p + "/dst"));
        }
    if (auto* ids = opt(j, "identities")) {
        if (!ids->is_object()) parse_error(path + "/identities", "expected an object");
        for (const auto& [k, v] : ids->items()) T.identity[obj(json(k), path + "/identities")] = iso(v, path + "/identities/" + k);
    }
    // identities not listed are added as "id:NAME"
    for (Id o = 0; o < T.objects.size(); ++o)
        if (T.identity[o] == kNone) {
            std::string id = "id:" + T.objects[o];
            if (!seen.insert(id).second) throw Error("DuplicateId", "iso \"" + id + "\" clashes with an implicit identity");
            T.identity[o] = T.add_iso(id, o, o);
            T.inverse[T.identity[o]] = T.identity[o];
        }
    if (auto* inv = opt(j, "inverses")) {
        if (!inv->is_object()) parse_error(path + "/inverses", "expected an object");
        for (const auto& [k, v] : inv->items()) T.inverse[iso(json(k), path + "/inverses")] = iso(v, path + "/inverses/" + k);
    }
    if (auto* cs = opt(j, "compositions"))
        for (std::size_t k = 0; k < array(*cs, path + "/compositions").size(); ++k) {
            std::string p = path + "/compositions/" + std::to_string(k);
            const auto& c = (*cs)[k];
            T.compose[{iso(at(c, "g", p), p + "/g"), iso(at(c, "f", p), p + "/f")}] = iso(at(c, "result", p), p + "/result");
        }
    seen.clear();
    std::vector<std::pair<Id, std::string>> rotations;
    if (auto* ts = opt(j, "triangles"))
        for (std::size_t k = 0; k < array(*ts, path + "/triangles").size(); ++k) {
            std::string p = path + "/triangles/" + std::to_string(k);
            const auto& t = (*ts)[k];
            auto id = str(t, "id", p);
            unique(seen, id, "triangle");
            auto lbl = [&](const char* key) { return opt(t, key) ? as<std::string>(t[key], p + "/" + key) : std::string(); };
            Triangle D{id, obj(at(t, "x", p), p + "/x"), obj(at(t, "y", p), p + "/y"), obj(at(t, "z", p), p + "/z"),
                       lbl("f"), lbl("g"), lbl("h")};
            T.triangles.push_back(std::move(D));
            if (auto* r = opt(t, "rotated_from")) rotations.push_back({T.triangles.size() - 1, as<std::string>(*r, p + "/rotated_from")});
        }
    T.invalidate();
    for (const auto& [t, from] : rotations) T.triangles[t].rotated_from = tri(json(from), path + "/triangles");
    seen.clear();
    if (auto* ti = opt(j, "triangle_isos"))
        for (std::size_t k = 0; k < array(*ti, path + "/triangle_isos").size(); ++k) {
            std::string p = path + "/triangle_isos/" + std::to_string(k);
            const auto& t = (*ti)[k];
            auto id = str(t, "id", p);
            unique(seen, id, "triangle iso");
            T.triangle_isos.push_back({id, tri(at(t, "from", p), p + "/from"), tri(at(t, "to", p), p + "/to"),
                                       iso(at(t, "x", p), p + "/x"), iso(at(t, "y", p), p + "/y"),
                                       iso(at(t, "z", p), p + "/z")});
        }
    seen.clear();
    if (auto* os = opt(j, "octahedra"))
        for (std::size_t k = 0; k < array(*os, path + "/octahedra").size(); ++k) {
            std::string p = path + "/octahedra/" + std::to_string(k);
            auto id = str((*os)[k], "id", p);
            unique(seen, id, "octahedron");
            const auto& ts = array(at((*os)[k], "triangles", p), p + "/triangles");
            if (ts.size() != 4) parse_error(p + "/triangles", "expected 4 triangles");
            T.octahedra.push_back({id, {tri(ts[0], p), tri(ts[1], p), tri(ts[2], p), tri(ts[3], p)}});
        }
    T.invalidate();
    seen.clear();
    if (auto* ns = opt(j, "nine_diagrams"))
        for (std::size_t k = 0; k < array(*ns, path + "/nine_diagrams").size(); ++k) {
            std::string p = path + "/nine_diagrams/" + std::to_string(k);
            const auto& n = (*ns)[k];
            NineDiagram N;
            N.id = str(n, "id", p);
            unique(seen, N.id, "nine-diagram");
            const auto& g = array(at(n, "grid", p), p + "/grid");
            if (g.size() != 3) parse_error(p + "/grid", "expected 3 rows");
            for (int r = 0; r < 3; ++r) {
                if (!g[r].is_array() || g[r].size() != 3) parse_error(p + "/grid", "expected 3 columns");
                for (int c = 0; c < 3; ++c) N.grid[r][c] = obj(g[r][c], p + "/grid");
            }
            const auto& rs = array(at(n, "rows", p), p + "/rows");
            const auto& cs = array(at(n, "cols", p), p + "/cols");
            if (rs.size() != 3 || cs.size() != 3) parse_error(p, "expected 3 rows and 3 cols");
            for (int k2 = 0; k2 < 3; ++k2) {
                N.rows[k2] = tri(rs[k2], p + "/rows");
                N.cols[k2] = tri(cs[k2], p + "/cols");
            }
            if (auto* a = opt(n, "anticommutative_corner")) N.anticommutative_corner = as<std::string>(*a, p);
            if (auto* c = opt(n, "certificate")) {
                VerdierCertificate C;
                C.A = obj(at(*c, "A", p + "/certificate"), p + "/certificate/A");
                const auto& o = array(at(*c, "octahedra", p + "/certificate"), p + "/certificate/octahedra");
                if (o.size() != 3) parse_error(p + "/certificate/octahedra", "expected 3 octahedra");
                for (int q = 0; q < 3; ++q) C.oct[q] = oct(o[q], p + "/certificate/octahedra");
                N.certificate = C;
            }
            if (auto* f = opt(n, "from_octahedron")) N.from_octahedron = oct(*f, p + "/from_octahedron");
            T.nine_diagrams.push_back(std::move(N));
        }
    T.invalidate();
    if (auto* ss = opt(j, "sums"))
        for (std::size_t k = 0; k < array(*ss, path + "/sums").size(); ++k) {
            std::string p = path + "/sums/" + std::to_string(k);
            const auto& s = (*ss)[k];
            SumEntry E{obj(at(s, "x", p), p + "/x"), obj(at(s, "y", p), p + "/y"), obj(at(s, "sum", p), p + "/sum"),
                       tri(at(s, "tri1", p), p + "/tri1"), tri(at(s, "tri2", p), p + "/tri2")};
            if (auto* nn = opt(s, "nine")) {
                auto id = as<std::string>(*nn, p + "/nine");
                auto f = T.find_nine(id);
                if (!f) throw Error("UnresolvedReference", p + "/nine: unknown nine-diagram \"" + id + "\"");
                E.nine = *f;
            }
            T.sums.push_back(E);
        }
    return T;
}

inline json presentation_json(const TriangPresentation& T) {
    json j;
    j["id"] = T.name;
    j["objects"] = T.objects;
    j["zero"] = T.objects[T.zero];
    json sh = json::object();
    for (Id o = 0; o < T.objects.size(); ++o)
        if (T.shift[o] != kNone) sh[T.objects[o]] = T.objects[T.shift[o]];
    j["shift"] = sh;
    json is = json::array(), ids = json::object(), inv = json::object(), comp = json::array();
    for (const auto& I : T.isos) is.push_back({{"id", I.id}, {"src", T.objects[I.src]}, {"dst", T.objects[I.dst]}});
    for (Id o = 0; o < T.objects.size(); ++o) ids[T.objects[o]] = T.isos[T.identity[o]].id;
    for (Id i = 0; i < T.isos.size(); ++i)
        if (T.inverse[i] != kNone) inv[T.isos[i].id] = T.isos[T.inverse[i]].id;
    for (const auto& [gf, h] : T.compose)
        comp.push_back({{"g", T.isos[gf.first].id}, {"f", T.isos[gf.second].id}, {"result", T.isos[h].id}});
    j["isos"] = is;
    j["identities"] = ids;
    j["inverses"] = inv;
    j["compositions"] = comp;
    json ts = json::array();
    for (const auto& D : T.triangles) {
        json t = {{"id", D.id}, {"x", T.objects[D.x]}, {"y", T.objects[D.y]}, {"z", T.objects[D.z]}};
        if (!D.f.empty()) t["f"] = D.f;
        if (!D.g.empty()) t["g"] = D.g;
        if (!D.h.empty()) t["h"] = D.h;
        if (D.rotated_from != kNone) t["rotated_from"] = T.triangles[D.rotated_from].id;
        ts.push_back(std::move(t));
    }
    j["triangles"] = ts;
    json ti = json::array();
    for (const auto& I : T.triangle_isos)
        ti.push_back({{"id", I.id}, {"from", T.triangles[I.from].id}, {"to", T.triangles[I.to].id},
                      {"x", T.isos[I.iso_x].id}, {"y", T.isos[I.iso_y].id}, {"z", T.isos[I.iso_z].id}});
    j["triangle_isos"] = ti;
    json os = json::array();
    for (const auto& O : T.octahedra) {
        json t = json::array();
        for (Id k : O.tri) t.push_back(T.triangles[k].id);
        os.push_back({{"id", O.id}, {"triangles", t}});
    }
    j["octahedra"] = os;
    json ns = json::array();
    for (const auto& N : T.nine_diagrams) {
        json g = json::array(), rs = json::array(), cs = json::array();
        for (const auto& row : N.grid) {
            json r = json::array();
            for (Id o : row) r.push_back(T.objects[o]);
            g.push_back(r);
        }
        for (int k = 0; k < 3; ++k) {
            rs.push_back(T.triangles[N.rows[k]].id);
            cs.push_back(T.triangles[N.cols[k]].id);
        }
        json n = {{"id", N.id}, {"grid", g}, {"rows", rs}, {"cols", cs}, {"anticommutative_corner", N.anticommutative_corner}};
        if (N.certificate) {
            json o = json::array();
            for (Id k : N.certificate->oct) o.push_back(T.octahedra[k].id);
            n["certificate"] = {{"A", T.objects[N.certificate->A]}, {"octahedra", o}};
        }
        if (N.from_octahedron != kNone) n["from_octahedron"] = T.octahedra[N.from_octahedron].id;
        ns.push_back(std::move(n));
    }
    j["nine_diagrams"] = ns;
    json ss = json::array();
    for (const auto& E : T.sums) {
        json s = {{"x", T.objects[E.x]}, {"y", T.objects[E.y]}, {"sum", T.objects[E.sum]},
                  {"tri1", T.triangles[E.tri1].id}, {"tri2", T.triangles[E.tri2].id}};
        if (E.nine != kNone) s["nine"] = T.nine_diagrams[E.nine].id;
        ss.push_back(std::move(s));
    }
    j["sums"] = ss;
    return j;
}

// ---- cubes ---------------------------------------------------------------

inline Cube cube(const json& j, const std::shared_ptr<const PicardPresentation>& P, const std::string& path) {
    auto n = as<std::size_t>(at(j, "dim", path), path + "/dim");
    if (n > 6) parse_error(path + "/dim", "dimension above 6 not supported");
    Cube S(P, n);
    const auto& v = array(at(j, "vertices", path), path + "/vertices");
    if (v.size() != S.vertex_count()) parse_error(path + "/vertices", "expected " + std::to_string(S.vertex_count()) + " vertices");
    for (std::size_t k = 0; k < v.size(); ++k) {
        auto x = coords(v[k], path + "/vertices");
        if (x.size() != P->A().rank()) parse_error(path + "/vertices/" + std::to_string(k), "wrong rank");
        S.set_vertex(k, x);
    }
    const auto& f = array(at(j, "f", path), path + "/f");
    if (f.size() != n) parse_error(path + "/f", "expected one list per direction");
    for (std::size_t i = 0; i < n; ++i) {
        const auto& fi = array(f[i], path + "/f");
        if (fi.size() != S.residual_count()) parse_error(path + "/f/" + std::to_string(i), "wrong residual count");
        for (std::size_t r = 0; r < fi.size(); ++r) {
            auto b = coords(fi[r], path + "/f");
            if (b.size() != P->B().rank()) parse_error(path + "/f", "wrong rank");
            S.set_f(i, r, b);
        }
    }
    return S;
}

inline json cube_json(const Cube& S, const std::string& picard_id) {
    json v = json::array(), f = json::array();
    for (std::size_t k = 0; k < S.vertex_count(); ++k) v.push_back(Coords(S.vertex(k).begin(), S.vertex(k).end()));
    for (std::size_t i = 0; i < S.dim(); ++i) {
        json fi = json::array();
        for (std::size_t r = 0; r < S.residual_count(); ++r) fi.push_back(Coords(S.f(i, r).begin(), S.f(i, r).end()));
        f.push_back(fi);
    }
    return {{"picard", picard_id}, {"dim", S.dim()}, {"vertices", v}, {"f", f}};
}

} // namespace jsonio

namespace jsonio {

inline std::string find_picard_id(const Workspace& W, const PicardPresentation& P) {
    for (const auto& [id, p] : W.picard)
        if (*p == P) return id;
    throw Error("UnresolvedReference", "Picard groupoid is not registered in the workspace");
}
inline std::string find_presentation_id(const Workspace& W, const TriangPresentation& T) {
    for (const auto& [id, p] : W.presentations)
        if (&*p == &T) return id;
    for (const auto& [id, p] : W.presentations)
        if (DeterminantData::same_presentation(*p, T)) return id;
    throw Error("UnresolvedReference", "presentation \"" + T.name + "\" is not registered in the workspace");
}

inline std::vector<Id> tuple_of(const json& at_, const std::vector<PresentationPtr>& src, std::optional<std::size_t> skip,
                                const std::string& path) {
    auto names = as<std::vector<std::string>>(at_, path);
    const std::size_t want = src.size() - (skip ? 1 : 0);
    if (names.size() != want) parse_error(path, "expected " + std::to_string(want) + " object names");
    std::vector<Id> out;
    for (std::size_t k = 0, m = 0; k < src.size(); ++k) {
        if (skip && k == *skip) {
            out.push_back(src[k]->zero);
            continue;
        }
        auto o = src[k]->find_object(names[m]);
        if (!o) throw Error("UnresolvedReference", path + ": unknown object \"" + names[m] + "\"");
        out.push_back(*o);
        ++m;
    }
    return out;
}

inline json names_of(const DeterminantData& D, std::span<const Id> t, std::optional<std::size_t> skip) {
    json out = json::array();
    for (std::size_t k = 0; k < t.size(); ++k)
        if (!skip || k != *skip) out.push_back(D.source(k).objects[t[k]]);
    return out;
}

inline DeterminantData explicit_determinant(const json& j, const Workspace& W, const std::string& path) {
    std::vector<PresentationPtr> src;
    for (const auto& s : as<std::vector<std::string>>(at(j, "sources", path), path + "/sources"))
        src.push_back(lookup(W.presentations, s, "presentation"));
    auto P = lookup(W.picard, str(j, "target", path), "Picard groupoid");
    if (src.empty()) parse_error(path + "/sources", "at least one source");
    DeterminantData D(src, P);
    D.name = str(j, "id", path);
    const auto& ix = D.objects();
    auto value = [&](const json& c, const std::string& p, std::size_t rank) {
        auto v = coords(at(c, "value", p), p + "/value");
        if (v.size() != rank) parse_error(p + "/value", "wrong rank");
        return v;
    };
    auto undefined = [&](const json& c, const std::string& p) {
        auto* u = opt(c, "undefined");
        return u && as<bool>(*u, p + "/undefined");
    };
    if (auto* os = opt(j, "obj"))
        for (std::size_t k = 0; k < array(*os, path + "/obj").size(); ++k) {
            std::string p = path + "/obj/" + std::to_string(k);
            auto t = ix.tuple_index(tuple_of(at((*os)[k], "at", p), src, std::nullopt, p + "/at"));
            if (undefined((*os)[k], p)) D.set_obj_undefined(t);
            else D.set_obj(t, value((*os)[k], p, P->A().rank()));
        }
    for (const char* kind : {"iso", "tri"}) {
        auto* cs = opt(j, kind);
        if (!cs) continue;
        for (std::size_t k = 0; k < array(*cs, path + "/" + kind).size(); ++k) {
            std::string p = path + "/" + kind + "/" + std::to_string(k);
            const auto& c = (*cs)[k];
            auto slot = opt(c, "slot") ? as<std::size_t>(c["slot"], p + "/slot") : 0;
            if (slot >= src.size()) parse_error(p + "/slot", "slot out of range");
            const auto& S = *src[slot];
            auto item = str(c, "item", p);
            auto id = std::string(kind) == "iso" ? S.find_iso(item) : S.find_triangle_id(item);
            if (!id) throw Error("UnresolvedReference", p + "/item: unknown " + std::string(kind) + " \"" + item + "\"");
            std::vector<Id> t = opt(c, "at") ? tuple_of(c["at"], src, slot, p + "/at")
                                             : tuple_of(json::array(), src, slot, p + "/at");
            std::size_t e = D.entry(slot, *id, ix.others_index(slot, t));
            bool u = undefined(c, p);
            if (std::string(kind) == "iso") {
                if (u) D.set_iso_undefined(slot, e);
                else D.set_iso(slot, e, value(c, p, P->B().rank()));
            } else {
                if (u) D.set_tri_undefined(slot, e);
                else D.set_tri(slot, e, value(c, p, P->B().rank()));
            }
        }
    }
    if (auto* sc = opt(j, "out_of_scope"))
        for (std::size_t k = 0; k < array(*sc, path + "/out_of_scope").size(); ++k) {
            std::string p = path + "/out_of_scope/" + std::to_string(k);
            const auto& e = (*sc)[k];
            auto i = as<std::size_t>(at(e, "i", p), p), jj = as<std::size_t>(at(e, "j", p), p);
            if (i >= jj || jj >= src.size()) parse_error(p, "need i < j < slots");
            auto a = src[i]->find_triangle_id(str(e, "tri_i", p));
            auto b = src[jj]->find_triangle_id(str(e, "tri_j", p));
            if (!a || !b) throw Error("UnresolvedReference", p + ": unknown triangle");
            D.out_of_scope.insert({i, jj, *a, *b});
        }
    return D;
}

inline json determinant_json(const DeterminantData& D, const Workspace& W) {
    json j;
    json src = json::array();
    for (const auto& s : D.sources()) src.push_back(find_presentation_id(W, *s));
    j["sources"] = src;
    j["target"] = find_picard_id(W, D.P());
    const auto& ix = D.objects();
    json os = json::array();
    for (std::size_t t = 0; t < ix.tuple_count(); ++t) {
        auto tup = ix.tuple(t);
        if (D.obj_state(t) == Cell::present)
            os.push_back({{"at", names_of(D, tup, std::nullopt)}, {"value", Coords(D.obj(t).begin(), D.obj(t).end())}});
        else if (D.obj_state(t) == Cell::undefined)
            os.push_back({{"at", names_of(D, tup, std::nullopt)}, {"undefined", true}});
    }
    j["obj"] = os;
    json is = json::array(), ts = json::array();
    for (std::size_t i = 0; i < D.slots(); ++i) {
        const auto& S = D.source(i);
        const std::size_t oc = D.others(i);
        auto cell = [&](const std::string& item, std::size_t e, Cell st, std::span<const Coord> v) {
            auto tup = ix.with_slot(i, e % oc, 0);
            json c = {{"slot", i}, {"item", item}, {"at", names_of(D, tup, i)}};
            if (st == Cell::undefined) c["undefined"] = true;
            else c["value"] = Coords(v.begin(), v.end());
            return c;
        };
        for (std::size_t e = 0; e < D.iso_entries(i); ++e)
            if (D.iso_state(i, e) != Cell::missing)
                is.push_back(cell(S.isos[e / oc].id, e, D.iso_state(i, e), D.iso(i, e)));
        for (std::size_t e = 0; e < D.tri_entries(i); ++e)
            if (D.tri_state(i, e) != Cell::missing)
                ts.push_back(cell(S.triangles[e / oc].id, e, D.tri_state(i, e), D.tri(i, e)));
    }
    j["iso"] = is;
    j["tri"] = ts;
    if (!D.out_of_scope.empty()) {
        json sc = json::array();
        for (const auto& [i, jj, a, b] : D.out_of_scope)
            sc.push_back({{"i", i}, {"j", jj}, {"tri_i", D.source(i).triangles[a].id}, {"tri_j", D.source(jj).triangles[b].id}});
        j["out_of_scope"] = sc;
    }
    return j;
}

inline std::vector<Coords> tuple_values(const json* list, const DeterminantData& D, const std::string& path) {
    const auto& ix = D.objects();
    std::vector<Coords> out(ix.tuple_count(), D.P().B().zero());
    if (!list) return out;
    for (std::size_t k = 0; k < array(*list, path).size(); ++k) {
        std::string p = path + "/" + std::to_string(k);
        auto t = ix.tuple_index(tuple_of(at((*list)[k], "at", p), D.sources(), std::nullopt, p + "/at"));
        auto v = coords(at((*list)[k], "value", p), p + "/value");
        if (v.size() != D.P().B().rank()) parse_error(p + "/value", "wrong rank");
        out[t] = D.P().B().reduced(v);
    }
    return out;
}
inline json tuple_values_json(const std::vector<Coords>& v, const DeterminantData& D) {
    json out = json::array();
    const auto& ix = D.objects();
    for (std::size_t t = 0; t < v.size(); ++t)
        if (!D.P().B().is_zero(v[t])) out.push_back({{"at", names_of(D, ix.tuple(t), std::nullopt)}, {"value", v[t]}});
    return out;
}

// ---- Picard functors and categorical rings -------------------------------

inline PicardFunctorData picard_functor(const json& j, const Workspace& W, const std::string& path) {
    if (auto* b = opt(j, "builtin")) {
        auto name = as<std::string>(*b, path + "/builtin");
        if (name != "identity") parse_error(path + "/builtin", "unknown Picard functor generator \"" + name + "\"");
        return identity_functor(*lookup(W.picard, str(j, "picard", path), "Picard groupoid"));
    }
    PicardFunctorData F;
    for (const auto& s : as<std::vector<std::string>>(at(j, "sources", path), path + "/sources"))
        F.sources.push_back(*lookup(W.picard, s, "Picard groupoid"));
    F.target = *lookup(W.picard, str(j, "target", path), "Picard groupoid");
    F.f0 = as<std::vector<Coords>>(at(j, "f0", path), path + "/f0");
    F.f1 = as<std::vector<std::vector<Coords>>>(at(j, "f1", path), path + "/f1");
    if (auto* m = opt(j, "m"))
        for (std::size_t k = 0; k < array(*m, path + "/m").size(); ++k) F.m.push_back(cellpoly((*m)[k], path + "/m/" + std::to_string(k)));
    F.m.resize(F.sources.size());
    if (auto* o = opt(j, "overrides"))
        for (std::size_t k = 0; k < array(*o, path + "/overrides").size(); ++k) {
            std::string p = path + "/overrides/" + std::to_string(k);
            const auto& c = (*o)[k];
            F.overrides.push_back({as<std::size_t>(at(c, "slot", p), p + "/slot"),
                                   as<std::vector<Coords>>(at(c, "others", p), p + "/others"), coords(at(c, "y", p), p + "/y"),
                                   coords(at(c, "y2", p), p + "/y2"), coords(at(c, "value", p), p + "/value")});
        }
    try {
        F.check_shape();
    } catch (const Error& e) {
        parse_error(path, e.what());
    }
    return F;
}

inline json picard_functor_json(const PicardFunctorData& F, const Workspace& W) {
    json src = json::array();
    for (const auto& s : F.sources) src.push_back(find_picard_id(W, s));
    json m = json::array();
    for (const auto& p : F.m) m.push_back(cellpoly_json(p));
    json o = json::array();
    for (const auto& c : F.overrides)
        o.push_back({{"slot", c.slot}, {"others", c.others}, {"y", c.y}, {"y2", c.y2}, {"value", c.value}});
    return {{"sources", src}, {"target", find_picard_id(W, F.target)}, {"f0", F.f0}, {"f1", F.f1}, {"m", m}, {"overrides", o}};
}

inline CategoricalRingData catring(const json& j, const Workspace& W, const std::string& path) {
    CategoricalRingData R;
    R.base = *lookup(W.picard, str(j, "picard", path), "Picard groupoid");
    R.mult = as<std::vector<std::vector<Coords>>>(at(j, "mult", path), path + "/mult");
    R.unit = coords(at(j, "unit", path), path + "/unit");
    R.left_act = as<std::vector<std::vector<Coords>>>(at(j, "left_act", path), path + "/left_act");
    R.right_act = as<std::vector<std::vector<Coords>>>(at(j, "right_act", path), path + "/right_act");
    if (auto* d = opt(j, "left_dist")) R.left_dist = cellpoly(*d, path + "/left_dist");
    if (auto* d = opt(j, "right_dist")) R.right_dist = cellpoly(*d, path + "/right_dist");
    try {
        R.check_shape();
    } catch (const Error& e) {
        parse_error(path, e.what());
    }
    return R;
}

inline json catring_json(const CategoricalRingData& R, const Workspace& W) {
    return {{"picard", find_picard_id(W, R.base)}, {"mult", R.mult},         {"unit", R.unit},
            {"left_act", R.left_act},              {"right_act", R.right_act}, {"left_dist", cellpoly_json(R.left_dist)},
            {"right_dist", cellpoly_json(R.right_dist)}};
}

// ---- triangulated functors (generated only) ------------------------------

inline std::pair<json, TriFunctorData> builtin_functor(const json& j, const Workspace& W, const std::string& path) {
    std::string b = str(j, "builtin", path);
    const json params = j.contains("params") ? j["params"] : json::object();
    if (b == "identity") {
        auto s = str(j, "source", path);
        return {{{"builtin", b}, {"source", s}}, identity_tri_functor(lookup(W.presentations, s, "presentation"))};
    }
    if (b == "zero") {
        auto ss = as<std::vector<std::string>>(at(j, "sources", path), path + "/sources");
        std::vector<PresentationPtr> src;
        for (const auto& s : ss) src.push_back(lookup(W.presentations, s, "presentation"));
        return {{{"builtin", b}, {"sources", ss}}, zero_tri_functor(src)};
    }
    if (b == "graded-tensor") {
        auto s = str(j, "source", path);
        GradedTensorOptions o;
        json p = json::object();
        if (auto* v = opt(params, "max_battery_total")) o.max_battery_total = as<long>(*v, path + "/params/max_battery_total");
        p["max_battery_total"] = o.max_battery_total;
        if (auto* t = opt(params, "target")) {
            o.target = window(*t, path + "/params/target");
            p["target"] = window_json(*o.target);
        }
        return {{{"builtin", b}, {"source", s}, {"params", p}},
                graded_tensor_bifunctor(lookup(W.presentations, s, "presentation"), o)};
    }
    if (b == "tensor-by") {
        auto s = str(j, "source", path);
        auto src = lookup(W.presentations, s, "presentation");
        auto on = str(params, "object", path + "/params");
        auto g = src->find_object(on);
        if (!g) throw Error("UnresolvedReference", path + "/params/object: unknown object \"" + on + "\"");
        std::string side = opt(params, "side") ? as<std::string>(params["side"], path + "/params/side") : "right";
        if (side != "left" && side != "right") parse_error(path + "/params/side", "expected \"left\" or \"right\"");
        return {{{"builtin", b}, {"source", s}, {"params", {{"object", on}, {"side", side}}}},
                graded_tensor_by(src, *g, side == "right")};
    }
    parse_error(path + "/builtin", "unknown functor generator \"" + b + "\"");
}

inline std::pair<json, DeterminantData> builtin_determinant(const json& j, const Workspace& W, const std::string& path) {
    std::string b = str(j, "builtin", path);
    if (b == "euler" || b == "euler-naive") {
        auto s = str(j, "source", path);
        auto T = lookup(W.presentations, s, "presentation");
        return {{{"builtin", b}, {"source", s}}, euler_determinant(T, b == "euler-naive")};
    }
    if (b == "zero") {
        auto ss = as<std::vector<std::string>>(at(j, "sources", path), path + "/sources");
        std::vector<PresentationPtr> src;
        for (const auto& s : ss) src.push_back(lookup(W.presentations, s, "presentation"));
        auto t = str(j, "target", path);
        return {{{"builtin", b}, {"sources", ss}, {"target", t}}, zero_determinant(src, lookup(W.picard, t, "Picard groupoid"))};
    }
    if (b == "compose") {
        // the inner determinant is generated on the functor's target
        auto f = str(j, "functor", path);
        const auto& F = *lookup(W.functors, f, "functor");
        auto inner = str(at(j, "det", path), "builtin", path + "/det");
        if (inner != "euler" && inner != "euler-naive")
            parse_error(path + "/det/builtin", "inner determinant must be euler or euler-naive");
        auto D = compose_with_multiexact(euler_determinant(F.target, inner == "euler-naive"), F);
        return {{{"builtin", b}, {"functor", f}, {"det", {{"builtin", inner}}}}, std::move(D)};
    }
    parse_error(path + "/builtin", "unknown determinant generator \"" + b + "\"");
}

inline std::pair<json, CategoricalRingData> builtin_catring(const json& j, const std::string& path) {
    std::string b = str(j, "builtin", path);
    if (b == "integer") return {{{"builtin", b}}, integer_ring()};
    if (b == "sign") return {{{"builtin", b}}, sign_ring()};
    parse_error(path + "/builtin", "unknown categorical ring generator \"" + b + "\"");
}

} // namespace jsonio

/** Adds the entries of one parsed document to W. */
inline void load_document(Workspace& W, const json& doc, const std::string& file = {}) {
    using namespace jsonio;
    const std::string root = file.empty() ? "" : file + ":";
    if (!doc.is_object()) parse_error(root + "/", "top level must be an object");
    auto v = opt(doc, "multidet_schema");
    if (!v) parse_error(root + "/", "missing \"multidet_schema\"");
    if (as<int>(*v, root + "/multidet_schema") != kSchemaVersion)
        parse_error(root + "/multidet_schema", "unsupported schema version");
    static const std::set<std::string> known{"multidet_schema", "picard",       "cubes",     "presentations",
                                             "functors",        "picard_functors", "determinants", "morphisms",
                                             "factorizations",  "catrings",     "comment"};
    for (const auto& [k, _] : doc.items())
        if (!known.contains(k)) parse_error(root + "/" + k, "unknown top-level field");
    auto each = [&](const char* key, auto&& fn) {
        auto* list = opt(doc, key);
        if (!list) return;
        std::string p = root + "/" + key;
        for (std::size_t k = 0; k < array(*list, p).size(); ++k) {
            std::string q = p + "/" + std::to_string(k);
            fn((*list)[k], str((*list)[k], "id", q), q);
        }
    };
    each("picard", [&](const json& j, const std::string& id, const std::string& p) {
        insert_unique(W.picard, id, std::make_shared<const PicardPresentation>(picard(j, p)), "Picard groupoid");
    });
    each("presentations", [&](const json& j, const std::string& id, const std::string& p) {
        if (j.contains("builtin")) {
            auto [spec, T] = builtin_presentation(j, p);
            T.name = id;
            insert_unique(W.presentations, id, std::make_shared<const TriangPresentation>(std::move(T)), "presentation");
            W.builtin["presentations"][id] = spec;
        } else {
            auto T = std::make_shared<const TriangPresentation>(presentation(j, p));
            insert_unique(W.presentations, id, T, "presentation");
            W.structural[id] = validate_presentation(*T);
        }
    });
    each("cubes", [&](const json& j, const std::string& id, const std::string& p) {
        insert_unique(W.cubes, id, cube(j, lookup(W.picard, str(j, "picard", p), "Picard groupoid"), p), "cube");
    });
    each("functors", [&](const json& j, const std::string& id, const std::string& p) {
        auto [spec, F] = builtin_functor(j, W, p);
        F.name = id;
        insert_unique(W.functors, id, std::make_shared<const TriFunctorData>(std::move(F)), "functor");
        W.builtin["functors"][id] = spec;
    });
    each("picard_functors", [&](const json& j, const std::string& id, const std::string& p) {
        insert_unique(W.picard_functors, id, picard_functor(j, W, p), "Picard functor");
        if (j.contains("builtin")) W.builtin["picard_functors"][id] = {{"builtin", j["builtin"]}, {"picard", j["picard"]}};
    });
    each("determinants", [&](const json& j, const std::string& id, const std::string& p) {
        if (j.contains("builtin")) {
            auto [spec, D] = builtin_determinant(j, W, p);
            D.name = id;
            insert_unique(W.determinants, id, std::move(D), "determinant");
            W.builtin["determinants"][id] = spec;
        } else {
            insert_unique(W.determinants, id, explicit_determinant(j, W, p), "determinant");
        }
    });
    each("morphisms", [&](const json& j, const std::string& id, const std::string& p) {
        DetMorphismRecord m{str(j, "from", p), str(j, "to", p), {}};
        const auto& d1 = lookup(W.determinants, m.from, "determinant");
        lookup(W.determinants, m.to, "determinant");
        m.theta = tuple_values(opt(j, "theta"), d1, p + "/theta");
        insert_unique(W.morphisms, id, std::move(m), "morphism");
    });
    each("factorizations", [&](const json& j, const std::string& id, const std::string& p) {
        FactorizationRecord f{str(j, "universal", p), str(j, "det", p), str(j, "functor", p), {}};
        lookup(W.determinants, f.universal, "determinant");
        const auto& D = lookup(W.determinants, f.det, "determinant");
        lookup(W.picard_functors, f.functor, "Picard functor");
        f.alpha = tuple_values(opt(j, "alpha"), D, p + "/alpha");
        insert_unique(W.factorizations, id, std::move(f), "factorization");
    });
    each("catrings", [&](const json& j, const std::string& id, const std::string& p) {
        if (j.contains("builtin")) {
            auto [spec, R] = builtin_catring(j, p);
            R.name = id;
            insert_unique(W.catrings, id, std::move(R), "categorical ring");
            W.builtin["catrings"][id] = spec;
        } else {
            auto R = catring(j, W, p);
            R.name = id;
            insert_unique(W.catrings, id, std::move(R), "categorical ring");
        }
    });
}

inline json parse_json_text(const std::string& text, const std::string& file) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("ParseError", file + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

inline Workspace load_workspace(const std::vector<std::string>& paths) {
    Workspace W;
    for (const auto& p : paths) {
        std::ifstream in(p);
        if (!in) throw Error("ParseError", p + ": cannot open file");
        std::stringstream ss;
        ss << in.rdbuf();
        load_document(W, parse_json_text(ss.str(), p), p);
    }
    return W;
}

/** Canonical serialization: entries sorted by id, generated entries as builtin references. */
inline json emit_workspace(const Workspace& W) {
    using namespace jsonio;
    json doc;
    doc["multidet_schema"] = kSchemaVersion;
    auto spec = [&](const char* kind, const std::string& id) -> const json* {
        auto k = W.builtin.find(kind);
        if (k == W.builtin.end()) return nullptr;
        auto it = k->second.find(id);
        return it == k->second.end() ? nullptr : &it->second;
    };
    auto with_id = [](json j, const std::string& id) {
        j["id"] = id;
        return j;
    };
    json a = json::array();
    for (const auto& [id, P] : W.picard) a.push_back(with_id(picard_json(*P), id));
    doc["picard"] = a;
    a = json::array();
    for (const auto& [id, S] : W.cubes) a.push_back(with_id(cube_json(S, find_picard_id(W, S.P())), id));
    doc["cubes"] = a;
    a = json::array();
    for (const auto& [id, T] : W.presentations) {
        if (auto* s = spec("presentations", id)) a.push_back(with_id(*s, id));
        else a.push_back(with_id(presentation_json(*T), id));
    }
    doc["presentations"] = a;
    a = json::array();
    for (const auto& [id, F] : W.functors) {
        auto* s = spec("functors", id);
        if (!s) throw Error("UnsupportedOperation", "functor \"" + id + "\" has no builtin spec");
        a.push_back(with_id(*s, id));
    }
    doc["functors"] = a;
    a = json::array();
    for (const auto& [id, F] : W.picard_functors) {
        if (auto* s = spec("picard_functors", id)) a.push_back(with_id(*s, id));
        else a.push_back(with_id(picard_functor_json(F, W), id));
    }
    doc["picard_functors"] = a;
    a = json::array();
    for (const auto& [id, D] : W.determinants) {
        if (auto* s = spec("determinants", id)) a.push_back(with_id(*s, id));
        else a.push_back(with_id(determinant_json(D, W), id));
    }
    doc["determinants"] = a;
    a = json::array();
    for (const auto& [id, m] : W.morphisms)
        a.push_back({{"id", id}, {"from", m.from}, {"to", m.to},
                     {"theta", tuple_values_json(m.theta, W.determinants.at(m.from))}});
    doc["morphisms"] = a;
    a = json::array();
    for (const auto& [id, f] : W.factorizations)
        a.push_back({{"id", id}, {"universal", f.universal}, {"det", f.det}, {"functor", f.functor},
                     {"alpha", tuple_values_json(f.alpha, W.determinants.at(f.det))}});
    doc["factorizations"] = a;
    a = json::array();
    for (const auto& [id, R] : W.catrings) {
        if (auto* s = spec("catrings", id)) a.push_back(with_id(*s, id));
        else a.push_back(with_id(catring_json(R, W), id));
    }
    doc["catrings"] = a;
    return doc;
}

/** Report as JSON; timing only when requested so that output is byte-stable. */
inline json report_json(const Report& r) {
    json items = json::array();
    for (const auto& it : r.sorted_items()) {
        json j = {{"check", it.check}, {"location", it.location}, {"verdict", to_string(it.verdict)}};
        if (!it.detail.empty()) j["detail"] = it.detail;
        items.push_back(std::move(j));
    }
    json tallies = json::object();
    for (const auto& [k, t] : r.tallies())
        tallies[k] = {{"evaluated", t.total}, {"failed", t.failed}, {"untestable", t.skipped}};
    json out = {{"command", r.command()}, {"status", to_string(r.status())}, {"checks", tallies}, {"items", items}};
    if (!r.extra().empty()) out["data"] = r.extra();
    return out;
}

} // namespace multidet
