#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multidet/triangulated.hpp"

namespace multidet {

/**
 * @brief Window of graded vector spaces: degrees [lo, hi], dimension ≤ max_entry per degree.
 *
 * Object index is the mixed-radix code of the dimension table, lowest degree
 * least significant. Σ is the cyclic degree shift (Σx)_d = x_{d-1}; it is a
 * genuine suspension only on objects whose top degree is empty.
 */
struct GradedWindow {
    int lo = -2, hi = 2, max_entry = 2;

    std::size_t length() const { return static_cast<std::size_t>(hi - lo + 1); }
    std::size_t count() const {
        std::size_t n = 1;
        for (std::size_t k = 0; k < length(); ++k) n *= static_cast<std::size_t>(max_entry + 1);
        return n;
    }
    std::vector<int> dims(Id o) const {
        std::vector<int> d(length());
        for (auto& v : d) {
            v = static_cast<int>(o % static_cast<std::size_t>(max_entry + 1));
            o /= static_cast<std::size_t>(max_entry + 1);
        }
        return d;
    }
    /** Index of a dimension table, kNone if outside the window. */
    Id encode(const std::vector<int>& d) const {
        if (d.size() != length()) return kNone;
        Id o = 0;
        for (std::size_t k = d.size(); k-- > 0;) {
            if (d[k] < 0 || d[k] > max_entry) return kNone;
            o = o * static_cast<std::size_t>(max_entry + 1) + static_cast<std::size_t>(d[k]);
        }
        return o;
    }
    static std::string name(const std::vector<int>& d) {
        std::string s = "gl(";
        for (std::size_t k = 0; k < d.size(); ++k) s += (k ? "," : "") + std::to_string(d[k]);
        return s + ")";
    }
    bool wraps(Id o) const { return dims(o).back() != 0; }
    Id shift(Id o) const {
        auto d = dims(o);
        std::rotate(d.rbegin(), d.rbegin() + 1, d.rend());
        return encode(d);
    }
    long euler(Id o) const {
        auto d = dims(o);
        long e = 0;
        for (std::size_t k = 0; k < d.size(); ++k) e += ((lo + static_cast<int>(k)) % 2 == 0 ? 1 : -1) * d[k];
        return e;
    }
    long total(Id o) const {
        long t = 0;
        for (int v : dims(o)) t += v;
        return t;
    }

    std::map<std::string, std::string> params() const {
        return {{"lo", std::to_string(lo)}, {"hi", std::to_string(hi)}, {"max_entry", std::to_string(max_entry)}};
    }
};

/** Window recorded on a graded-lines presentation (or a presentation derived from one). */
inline GradedWindow window_of(const TriangPresentation& T) {
    auto get = [&](const char* k) {
        auto it = T.builtin.find(k);
        if (it == T.builtin.end()) throw Error("NotGradedLines", T.name + " has no graded window");
        return std::stoi(it->second);
    };
    GradedWindow w{get("lo"), get("hi"), get("max_entry")};
    if (w.count() != T.objects.size()) throw Error("NotGradedLines", T.name + " object count disagrees with window");
    return w;
}

/**
 * Shuffle masks: per degree, one char per basis vector of the middle object,
 * '1' for the sub-object and '0' for the quotient; degrees joined by '.'.
 */
namespace shuffle {

inline std::string block_mask(const std::vector<int>& sub, const std::vector<int>& quot, bool sub_first) {
    std::string m;
    for (std::size_t k = 0; k < sub.size(); ++k) {
        if (k) m += '.';
        if (sub_first) m += std::string(sub[k], '1') + std::string(quot[k], '0');
        else m += std::string(quot[k], '0') + std::string(sub[k], '1');
    }
    return m;
}

/** (sub dims, middle dims, quotient dims) of a mask. */
inline void mask_dims(const std::string& m, std::vector<int>& sub, std::vector<int>& mid, std::vector<int>& quot) {
    sub.assign(1, 0);
    mid.assign(1, 0);
    quot.assign(1, 0);
    for (char ch : m) {
        if (ch == '.') {
            sub.push_back(0);
            mid.push_back(0);
            quot.push_back(0);
            continue;
        }
        ++mid.back();
        (ch == '1' ? sub : quot).back() += 1;
    }
}

/** Parity of the shuffle: pairs with a quotient vector before a sub vector. */
inline int parity(const std::string& m) {
    long zeros = 0, inv = 0;
    for (char ch : m) {
        if (ch == '0') ++zeros;
        else if (ch == '1') inv += zeros;
    }
    return static_cast<int>(inv & 1);
}

inline bool all_of(const std::string& m, char c) {
    for (char ch : m)
        if (ch != '.' && ch != c) return false;
    return true;
}

} // namespace shuffle

/**
 * Adds the shuffle triangle sub→mid→quot of a mask. Full and empty masks get
 * the identity labels so that they are recognised as degenerate.
 */
inline Id add_shuffle(TriangPresentation& T, const GradedWindow& w, const std::string& mask) {
    std::vector<int> s, m, q;
    shuffle::mask_dims(mask, s, m, q);
    Id x = w.encode(s), y = w.encode(m), z = w.encode(q);
    if (x == kNone || y == kNone || z == kNone) throw Error("OutOfWindow", "shuffle " + mask);
    std::string id = "sh[" + mask + "]";
    if (y == T.zero) return T.add_triangle(x, y, z, "0", "0", "0", id);
    if (shuffle::all_of(mask, '1')) return T.add_triangle(x, y, z, "id", "0", "0", id);
    if (shuffle::all_of(mask, '0')) return T.add_triangle(x, y, z, "0", "id", "0", id);
    return T.add_triangle(x, y, z, "i:" + mask, "p:" + mask, "0", id);
}

/** Recovers the mask of a shuffle triangle from its labels; empty if it is not one. */
inline std::optional<std::string> shuffle_mask(const TriangPresentation& T, const GradedWindow& w, Id t) {
    const auto& D = T.triangles.at(t);
    if (D.f.rfind("i:", 0) == 0) return D.f.substr(2);
    if (D.h != "0") return std::nullopt;
    auto blocks = [&](Id o, char c) {
        std::string m;
        auto d = w.dims(o);
        for (std::size_t k = 0; k < d.size(); ++k) m += (k ? "." : "") + std::string(d[k], c);
        return m;
    };
    if (D.f == "id" && D.g == "0" && D.x == D.y && D.z == T.zero) return blocks(D.y, '1');
    if (D.f == "0" && D.g == "id" && D.y == D.z && D.x == T.zero) return blocks(D.y, '0');
    if (D.y == T.zero && D.f == "0" && D.g == "0") return blocks(D.y, '1');
    return std::nullopt;
}

struct GradedLinesOptions {
    GradedWindow window;
    bool battery = true;  // false: objects, isos and zero triangles only (functor targets)
};

inline Id neg_iso(const TriangPresentation& T, Id o) {
    auto it = T.find_iso("neg:" + T.objects[o]);
    return it ? *it : T.identity[o];
}

namespace detail {

inline void add_commutativity_diagram(TriangPresentation& T, const GradedWindow& w, Id x, Id y, Id sum,
                                      Id tri1, Id tri2) {
    const Id Z = T.zero;
    auto dx = w.dims(x), dy = w.dims(y), zero(std::vector<int>(w.length(), 0));
    Id r1 = add_shuffle(T, w, shuffle::block_mask(zero, dx, true));   // 0→x=x
    Id r3 = add_shuffle(T, w, shuffle::block_mask(dy, zero, true));   // y=y→0
    Id c1 = add_shuffle(T, w, shuffle::block_mask(zero, dy, true));   // 0→y=y
    Id c3 = add_shuffle(T, w, shuffle::block_mask(dx, zero, true));   // x=x→0
    Id p2 = add_shuffle(T, w, shuffle::block_mask(zero, w.dims(sum), true));
    NineDiagram N;
    N.id = "comm[" + T.objects[x] + "," + T.objects[y] + "]";
    N.grid = {{{Z, x, x}, {y, sum, x}, {y, y, Z}}};
    N.rows = {r1, tri2, r3};
    N.cols = {c1, tri1, c3};
    VerdierCertificate C;
    C.A = sum;
    C.oct[0] = T.add_octahedron({c1, p2, tri2, tri2});
    C.oct[1] = T.add_octahedron({r1, p2, tri1, tri1});
    Id w3 = T.rotate(tri1), w4 = T.rotate(c3);
    C.oct[2] = T.add_octahedron({tri2, r3, w3, w4});
    N.certificate = C;
    T.nine_diagrams.push_back(std::move(N));
    T.sums.push_back({x, y, sum, tri1, tri2, T.nine_diagrams.size() - 1});
    octahedron_to_2cube(T, C.oct[2]);
}

} // namespace detail

/**
 * Graded-lines presentation: split triangles as shuffles, the two canonical
 * sum triangles, split octahedra with their 2-cubes, commutativity diagrams
 * with Verdier certificates, and sign isos.
 */
inline TriangPresentation graded_lines_presentation(GradedLinesOptions opt = {}) {
    const GradedWindow w = opt.window;
    if (w.hi < w.lo || w.max_entry < 1) throw Error("InvalidParameter", "empty graded window");
    TriangPresentation T;
    T.name = "graded-lines";
    T.builtin = w.params();
    T.builtin["generator"] = "graded-lines";
    T.builtin["battery"] = opt.battery ? "full" : "objects";
    const std::size_t n = w.count();
    for (Id o = 0; o < n; ++o) T.add_object(GradedWindow::name(w.dims(o)));
    T.zero = 0;
    for (Id o = 0; o < n; ++o) T.shift[o] = w.shift(o);
    for (Id o = 0; o < n; ++o) {
        T.identity[o] = T.add_iso("id:" + T.objects[o], o, o);
        T.inverse[T.identity[o]] = T.identity[o];
    }
    for (Id o = 1; o < n; ++o) {
        Id g = T.add_iso("neg:" + T.objects[o], o, o);
        T.inverse[g] = g;
        T.compose[{g, g}] = T.identity[o];
    }
    add_shuffle(T, w, std::string(w.length() - 1, '.'));
    if (!opt.battery) return T;

    auto fits = [&](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> s(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) s[k] = a[k] + b[k];
        return w.encode(s);
    };
    auto t1 = [&](Id a, Id b) { return add_shuffle(T, w, shuffle::block_mask(w.dims(a), w.dims(b), true)); };
    auto t2 = [&](Id a, Id b) { return add_shuffle(T, w, shuffle::block_mask(w.dims(b), w.dims(a), false)); };

    // split triangles and sign data
    for (Id a = 0; a < n; ++a)
        for (Id b = 0; b < n; ++b)
            if (fits(w.dims(a), w.dims(b)) != kNone) {
                t1(a, b);
                t2(a, b);
            }
    const std::size_t n_split = T.triangles.size();
    for (Id t = 0; t < n_split; ++t) {
        const auto D = T.triangles[t];
        Id ix = neg_iso(T, D.x), iy = neg_iso(T, D.y), iz = neg_iso(T, D.z);
        if (D.y == T.zero) continue;
        T.triangle_isos.push_back({"neg(" + D.id + ")", t, t, ix, iy, iz});
    }
    for (Id u = 1; u < n; ++u) {
        Id g = neg_iso(T, u);
        Id a = T.add_triangle(u, u, 0, "neg", "0", "0", "neg-sub[" + T.objects[u] + "]");
        Id b = T.add_triangle(0, u, u, "0", "neg", "0", "neg-quot[" + T.objects[u] + "]");
        Id ea = add_shuffle(T, w, shuffle::block_mask(w.dims(u), std::vector<int>(w.length(), 0), true));
        Id eb = add_shuffle(T, w, shuffle::block_mask(std::vector<int>(w.length(), 0), w.dims(u), true));
        T.triangle_isos.push_back({"negsub(" + T.objects[u] + ")", ea, a, T.identity[u], g, T.identity[0]});
        T.triangle_isos.push_back({"negquot(" + T.objects[u] + ")", eb, b, T.identity[0], T.identity[u], g});
    }

    // sums with commutativity diagrams, where Σx stays in the window
    for (Id x = 0; x < n; ++x) {
        if (w.wraps(x)) continue;
        for (Id y = 0; y < n; ++y) {
            Id s = fits(w.dims(x), w.dims(y));
            if (s == kNone) continue;
            detail::add_commutativity_diagram(T, w, x, y, s, t1(x, y), t2(x, y));
        }
    }

    // split octahedra for 3-step filtrations, in both orders
    for (Id x = 0; x < n; ++x)
        for (Id p = 0; p < n; ++p) {
            if (w.wraps(p)) continue;
            Id xp = fits(w.dims(x), w.dims(p));
            if (xp == kNone) continue;
            for (Id q = 0; q < n; ++q) {
                Id xpq = fits(w.dims(xp), w.dims(q));
                if (xpq == kNone) continue;
                Id pq = fits(w.dims(p), w.dims(q));
                Id o1 = T.add_octahedron({t1(x, p), t1(x, pq), t1(xp, q), t1(p, q)});
                octahedron_to_2cube(T, o1);
                Id o2 = T.add_octahedron({t2(p, x), t2(pq, x), t2(q, xp), t2(q, p)});
                octahedron_to_2cube(T, o2);
            }
        }
    return T;
}

/** Euler class of a graded-lines object. */
inline long euler_class(const TriangPresentation& T, Id o) { return window_of(T).euler(o); }

/**
 * Z/2 sign of the Euler determinant on every triangle of a graded-lines
 * presentation: shuffle parity, sign isos, and the rotation rule
 * tri(rot Δ) = tri(Δ) + χ(x)χ(y).
 */
inline std::vector<int> euler_signs(const TriangPresentation& T) {
    const GradedWindow w = window_of(T);
    std::vector<int> out(T.triangles.size(), -1);
    auto eval = [&](auto&& self, Id t) -> int {
        if (out[t] >= 0) return out[t];
        const auto& D = T.triangles[t];
        int v;
        if (D.rotated_from != kNone) {
            const auto& O = T.triangles[D.rotated_from];
            v = (self(self, D.rotated_from) + static_cast<int>((w.euler(O.x) * w.euler(O.y)) & 1)) & 1;
        } else if (auto m = shuffle_mask(T, w, t)) {
            v = shuffle::parity(*m);
        } else if (D.f == "neg" && D.x == D.y && D.z == T.zero) {
            v = static_cast<int>(w.total(D.x) & 1);
        } else if (D.g == "neg" && D.y == D.z && D.x == T.zero) {
            v = static_cast<int>(w.total(D.y) & 1);
        } else {
            throw Error("MissingDatum", "no Euler sign for triangle " + D.id);
        }
        return out[t] = v;
    };
    for (Id t = 0; t < T.triangles.size(); ++t) eval(eval, t);
    return out;
}

} // namespace multidet
