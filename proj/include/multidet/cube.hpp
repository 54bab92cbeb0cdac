#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "multidet/picard.hpp"

namespace multidet {

namespace cubeidx {

inline std::size_t pow3(std::size_t n) {
    std::size_t p = 1;
    while (n--) p *= 3;
    return p;
}
/** Inserts coordinate value a (in {-1,0,1}) at position pos of a base-3 index. */
inline std::size_t insert(std::size_t idx, std::size_t pos, int a) {
    std::size_t p = pow3(pos);
    return idx % p + static_cast<std::size_t>(a + 1) * p + (idx / p) * p * 3;
}
inline std::size_t remove(std::size_t idx, std::size_t pos) {
    std::size_t p = pow3(pos);
    return idx % p + (idx / (p * 3)) * p;
}
inline int coord(std::size_t idx, std::size_t pos) { return static_cast<int>((idx / pow3(pos)) % 3) - 1; }

inline std::size_t from_coords(std::span<const int> a) {
    std::size_t idx = 0;
    for (std::size_t k = a.size(); k-- > 0;) idx = idx * 3 + static_cast<std::size_t>(a[k] + 1);
    return idx;
}
inline std::vector<int> to_coords(std::size_t idx, std::size_t n) {
    std::vector<int> a(n);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = static_cast<int>(idx % 3) - 1;
        idx /= 3;
    }
    return a;
}
inline std::string format(std::size_t idx, std::size_t n) {
    std::string s = "(";
    for (std::size_t k = 0; k < n; ++k) {
        if (k) s += ",";
        s += std::to_string(coord(idx, k));
    }
    return s + ")";
}

} // namespace cubeidx

/** @brief Position in I^n, each coordinate in {-1,0,1}. */
struct CubeIndex {
    std::vector<int> coords;
    std::size_t flat() const { return cubeidx::from_coords(coords); }
};

/**
 * @brief n-cube over a skeletal Picard groupoid.
 *
 * Vertices are stored at base-3 indices (digit = coordinate + 1, first
 * coordinate least significant). f_i is stored per residual index: the vertex
 * index with coordinate i removed. f_i(r) is the B-value of
 * S(..,1,..) + S(..,-1,..) -> S(..,0,..).
 */
class Cube {
public:
    Cube() = default;
    Cube(std::shared_ptr<const PicardPresentation> P, std::size_t n)
        : P_(std::move(P)), n_(n), ra_(P_->A().rank()), rb_(P_->B().rank()),
          vert_(cubeidx::pow3(n) * ra_, 0), f_(n ? n * cubeidx::pow3(n - 1) * rb_ : 0, 0) {}

    std::size_t dim() const { return n_; }
    const PicardPresentation& P() const { return *P_; }
    const std::shared_ptr<const PicardPresentation>& P_ptr() const { return P_; }
    std::size_t vertex_count() const { return cubeidx::pow3(n_); }
    std::size_t residual_count() const { return n_ ? cubeidx::pow3(n_ - 1) : 0; }

    std::span<Coord> vertex(std::size_t v) { return {vert_.data() + v * ra_, ra_}; }
    std::span<const Coord> vertex(std::size_t v) const { return {vert_.data() + v * ra_, ra_}; }
    std::span<Coord> f(std::size_t i, std::size_t r) { return {f_.data() + (i * residual_count() + r) * rb_, rb_}; }
    std::span<const Coord> f(std::size_t i, std::size_t r) const {
        return {f_.data() + (i * residual_count() + r) * rb_, rb_};
    }

    void set_vertex(std::size_t v, std::span<const Coord> x) {
        auto dst = vertex(v);
        std::copy(x.begin(), x.end(), dst.begin());
        P_->A().reduce(dst);
    }
    void set_f(std::size_t i, std::size_t r, std::span<const Coord> b) {
        auto dst = f(i, r);
        std::copy(b.begin(), b.end(), dst.begin());
        P_->B().reduce(dst);
    }

    /** Corner index: every coordinate ±1. */
    static bool is_corner(std::size_t v, std::size_t n) {
        for (std::size_t k = 0; k < n; ++k)
            if (cubeidx::coord(v, k) == 0) return false;
        return true;
    }

    friend bool operator==(const Cube& a, const Cube& b) {
        return a.n_ == b.n_ && a.vert_ == b.vert_ && a.f_ == b.f_;
    }

    const std::vector<Coord>& raw_vertices() const { return vert_; }
    const std::vector<Coord>& raw_f() const { return f_; }

    std::string to_string() const {
        std::string s = std::to_string(n_) + "-cube{";
        for (std::size_t v = 0; v < vertex_count(); ++v) {
            if (v) s += " ";
            s += cubeidx::format(v, n_) + "=" + format_coords(vertex(v));
        }
        s += " |";
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t r = 0; r < residual_count(); ++r) s += " f" + std::to_string(i + 1) + format_coords(f(i, r));
        return s + "}";
    }

private:
    std::shared_ptr<const PicardPresentation> P_;
    std::size_t n_ = 0, ra_ = 0, rb_ = 0;
    std::vector<Coord> vert_;
    std::vector<Coord> f_;
};

/** Evaluates the pentagon defect for pair i<j at residual rho (n-2 digits). Zero when it holds. */
inline Coords pentagon_defect(const Cube& S, std::size_t i, std::size_t j, std::size_t rho) {
    using namespace cubeidx;
    const auto& B = S.P().B();
    auto vtx = [&](int ai, int aj) { return S.vertex(insert(insert(rho, i, ai), j, aj)); };
    auto fi = [&](int aj) { return S.f(i, insert(rho, j - 1, aj)); };
    auto fj = [&](int ai) { return S.f(j, insert(rho, i, ai)); };
    Coords d = B.zero();
    for (std::size_t t = 0; t < d.size(); ++t)
        d[t] = fi(1)[t] + fi(-1)[t] + fj(0)[t] - fj(1)[t] - fj(-1)[t] - fi(0)[t];
    S.P().add_c(d, vtx(-1, 1), vtx(1, -1), -1);
    return d;
}

inline Report validate_cube(const Cube& S) {
    using namespace cubeidx;
    Report r("check-cube");
    const auto& A = S.P().A();
    const auto& B = S.P().B();
    const std::size_t n = S.dim();
    for (std::size_t v = 0; v < S.vertex_count(); ++v)
        r.check("vertex-reduced", A.is_reduced(S.vertex(v)), format(v, n));
    Coords sum = A.zero();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t rr = 0; rr < S.residual_count(); ++rr) {
            auto p = S.vertex(insert(rr, i, 1));
            auto m = S.vertex(insert(rr, i, -1));
            auto z = S.vertex(insert(rr, i, 0));
            for (std::size_t t = 0; t < sum.size(); ++t) sum[t] = p[t] + m[t];
            r.check_lazy("sum-constraint", A.equal(sum, z),
                         [&] { return "direction " + std::to_string(i + 1) + " at " + format(insert(rr, i, 0), n); });
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t rho = 0; rho < pow3(n - 2); ++rho)
                r.check_lazy("pentagon", B.is_zero(pentagon_defect(S, i, j, rho)), [&] {
                    return "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") at " +
                           format(insert(insert(rho, i, 0), j, 0), n);
                });
    return r;
}

/**
 * Name of the first failing check of validate_cube, or nullopt. Allocation-free
 * apart from one scratch buffer; meant for hot loops over many cubes.
 */
inline std::optional<std::string> first_cube_violation(const Cube& S) {
    using namespace cubeidx;
    const auto& A = S.P().A();
    const auto& B = S.P().B();
    const std::size_t n = S.dim();
    thread_local std::vector<Coord> buf;
    buf.assign(std::max(A.rank(), B.rank()), 0);
    std::span<Coord> acc(buf.data(), A.rank());
    for (std::size_t v = 0; v < S.vertex_count(); ++v)
        if (!A.is_reduced(S.vertex(v))) return "vertex-reduced";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t rr = 0; rr < S.residual_count(); ++rr) {
            auto p = S.vertex(insert(rr, i, 1));
            auto m = S.vertex(insert(rr, i, -1));
            for (std::size_t t = 0; t < acc.size(); ++t) acc[t] = p[t] + m[t];
            if (!A.equal(acc, S.vertex(insert(rr, i, 0)))) return "sum-constraint";
        }
    std::span<Coord> d(buf.data(), B.rank());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t rho = 0; rho < pow3(n - 2); ++rho) {
                auto fi = [&](int aj) { return S.f(i, insert(rho, j - 1, aj)); };
                auto fj = [&](int ai) { return S.f(j, insert(rho, i, ai)); };
                for (std::size_t t = 0; t < d.size(); ++t)
                    d[t] = fi(1)[t] + fi(-1)[t] + fj(0)[t] - fj(1)[t] - fj(-1)[t] - fi(0)[t];
                S.P().add_c(d, S.vertex(insert(insert(rho, i, -1), j, 1)), S.vertex(insert(insert(rho, i, 1), j, -1)), -1);
                if (!B.is_zero(d)) return "pentagon";
            }
    return std::nullopt;
}

/**
 * Whether per-vertex B-values phi form a morphism S → T: equal vertices and
 * phi(v0) + f_S = f_T + phi(v+) + phi(v-) in every direction.
 */
inline bool is_cube_morphism(const Cube& S, const Cube& T, const std::vector<Coords>& phi) {
    using namespace cubeidx;
    const auto& A = S.P().A();
    const auto& B = S.P().B();
    if (S.dim() != T.dim() || phi.size() != S.vertex_count()) return false;
    for (std::size_t v = 0; v < S.vertex_count(); ++v)
        if (!A.equal(S.vertex(v), T.vertex(v))) return false;
    Coords d = B.zero();
    for (std::size_t i = 0; i < S.dim(); ++i)
        for (std::size_t r = 0; r < S.residual_count(); ++r) {
            const auto &p0 = phi[insert(r, i, 0)], &pp = phi[insert(r, i, 1)], &pm = phi[insert(r, i, -1)];
            for (std::size_t t = 0; t < d.size(); ++t) d[t] = p0[t] + S.f(i, r)[t] - T.f(i, r)[t] - pp[t] - pm[t];
            if (!B.is_zero(d)) return false;
        }
    return true;
}

/** ∂_j^α, j 1-based. */
inline Cube face(const Cube& S, std::size_t j, int alpha) {
    using namespace cubeidx;
    const std::size_t n = S.dim();
    if (n == 0 || j < 1 || j > n) throw Error("DimensionOutOfRange", "face index " + std::to_string(j));
    if (alpha < -1 || alpha > 1) throw Error("DimensionOutOfRange", "face value");
    const std::size_t jj = j - 1;
    Cube out(S.P_ptr(), n - 1);
    for (std::size_t v = 0; v < out.vertex_count(); ++v) out.set_vertex(v, S.vertex(insert(v, jj, alpha)));
    for (std::size_t k = 0; k < n; ++k) {
        if (k == jj) continue;
        std::size_t kk = k < jj ? k : k - 1;  // direction in the face
        // residual of the face (n-2 digits) -> residual of S for direction k: insert alpha where j sits
        std::size_t pos = jj < k ? jj : jj - 1;
        for (std::size_t r = 0; r < out.residual_count(); ++r) out.set_f(kk, r, S.f(k, insert(r, pos, alpha)));
    }
    return out;
}

/** s^j_α, j 1-based in 1..n+1, α = ±1. */
inline Cube degeneracy(const Cube& S, std::size_t j, int alpha) {
    using namespace cubeidx;
    const std::size_t n = S.dim();
    if (j < 1 || j > n + 1) throw Error("DimensionOutOfRange", "degeneracy index " + std::to_string(j));
    if (alpha != -1 && alpha != 1) throw Error("DimensionOutOfRange", "degeneracy value must be +-1");
    const std::size_t jj = j - 1;
    Cube out(S.P_ptr(), n + 1);
    for (std::size_t v = 0; v < out.vertex_count(); ++v)
        if (coord(v, jj) != alpha) out.set_vertex(v, S.vertex(remove(v, jj)));
    for (std::size_t k = 0; k <= n; ++k) {
        if (k == jj) continue;
        std::size_t ks = k < jj ? k : k - 1;  // direction in S
        std::size_t pos = jj < k ? jj : jj - 1;  // where coordinate j sits in a k-residual
        for (std::size_t r = 0; r < out.residual_count(); ++r) {
            if (coord(r, pos) == alpha) continue;
            out.set_f(k, r, S.f(ks, remove(r, pos)));
        }
    }
    return out;
}

/** Constant-zero n-cube. */
inline Cube zero_cube(std::shared_ptr<const PicardPresentation> P, std::size_t n) { return Cube(std::move(P), n); }

/** Vertexwise sum; structure isos (f+g) after λ(S1, T1, S-1, T-1) = c(T1, S-1). */
inline Cube add_cubes(const Cube& S, const Cube& T) {
    using namespace cubeidx;
    if (S.dim() != T.dim() || !(S.P() == T.P())) throw Error("MismatchedShape", "cubes differ in dimension or base");
    const auto& A = S.P().A();
    const auto& B = S.P().B();
    Cube out(S.P_ptr(), S.dim());
    for (std::size_t v = 0; v < out.vertex_count(); ++v) out.set_vertex(v, A.add(S.vertex(v), T.vertex(v)));
    for (std::size_t i = 0; i < S.dim(); ++i)
        for (std::size_t r = 0; r < out.residual_count(); ++r) {
            Coords h = B.add(S.f(i, r), T.f(i, r));
            S.P().add_c(h, T.vertex(insert(r, i, 1)), S.vertex(insert(r, i, -1)));
            out.set_f(i, r, h);
        }
    return out;
}

/** Replaces f by f + θ(v0) − θ(v+) − θ(v−): the cube isomorphic to S via θ. */
inline Cube twist(const Cube& S, const std::vector<Coords>& theta) {
    using namespace cubeidx;
    const auto& B = S.P().B();
    Cube out = S;
    for (std::size_t i = 0; i < S.dim(); ++i)
        for (std::size_t r = 0; r < S.residual_count(); ++r) {
            Coords h(S.f(i, r).begin(), S.f(i, r).end());
            for (std::size_t t = 0; t < h.size(); ++t)
                h[t] += theta[insert(r, i, 0)][t] - theta[insert(r, i, 1)][t] - theta[insert(r, i, -1)][t];
            B.reduce(h);
            out.set_f(i, r, h);
        }
    return out;
}

inline Report face_additivity_check(const Cube& S, std::size_t j) {
    using namespace cubeidx;
    Report r("face-additivity");
    const std::size_t n = S.dim();
    if (n == 0 || j < 1 || j > n) throw Error("DimensionOutOfRange", "face index " + std::to_string(j));
    const auto& A = S.P().A();
    const auto& B = S.P().B();
    Cube sum = add_cubes(face(S, j, 1), face(S, j, -1));
    Cube mid = face(S, j, 0);
    for (std::size_t v = 0; v < mid.vertex_count(); ++v)
        r.check("vertex-table", A.equal(sum.vertex(v), mid.vertex(v)), format(v, n - 1));
    // θ(w) = f_j of S at residual w: the comparison iso sum -> mid
    auto theta = [&](std::size_t w) { return S.f(j - 1, w); };
    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t rr = 0; rr < mid.residual_count(); ++rr) {
            Coords disc = B.sub(mid.f(k, rr), sum.f(k, rr));
            Coords expect = B.zero();
            for (std::size_t t = 0; t < expect.size(); ++t)
                expect[t] = theta(insert(rr, k, 0))[t] - theta(insert(rr, k, 1))[t] - theta(insert(rr, k, -1))[t];
            B.reduce(expect);
            r.check_lazy("structure-discrepancy", B.equal(disc, expect), [&] {
                return "direction " + std::to_string(k + 1) + " at " + format(insert(rr, k, 0), n - 1) + ": got " +
                       format_coords(disc) + " expected " + format_coords(expect);
            });
        }
    return r;
}

/** One way of splitting the central vertex down to corners. */
struct Decomposition {
    Coords value;                        // B-sum of the f's used
    std::vector<std::size_t> leaves;     // corner vertex indices in bracket order
    std::string label;
};

inline std::vector<Decomposition> decompositions(const Cube& S, std::size_t v) {
    using namespace cubeidx;
    const std::size_t n = S.dim();
    const auto& B = S.P().B();
    std::vector<std::size_t> free;
    for (std::size_t k = 0; k < n; ++k)
        if (coord(v, k) == 0) free.push_back(k);
    if (free.empty()) return {{B.zero(), {v}, ""}};
    std::vector<Decomposition> out;
    for (std::size_t d : free) {
        auto plus = decompositions(S, v + pow3(d));   // coordinate 0 -> 1
        auto minus = decompositions(S, v - pow3(d));  // coordinate 0 -> -1
        auto fd = S.f(d, remove(v, d));
        for (const auto& a : plus)
            for (const auto& b : minus) {
                Decomposition x;
                x.value = B.add(B.add(a.value, b.value), fd);
                x.leaves = a.leaves;
                x.leaves.insert(x.leaves.end(), b.leaves.begin(), b.leaves.end());
                x.label = std::to_string(d + 1) + "[" + a.label + "|" + b.label + "]";
                out.push_back(std::move(x));
            }
    }
    return out;
}

/** All decomposition trees of the center agree once reordering isos are accounted for. */
inline Report check_higher_coherence(const Cube& S) {
    Report r("check-higher-coherence");
    if (S.dim() < 3 || S.dim() > 4) throw Error("DimensionOutOfRange", "higher coherence needs n = 3 or 4");
    const auto& B = S.P().B();
    const std::size_t center = (cubeidx::pow3(S.dim()) - 1) / 2;
    auto trees = decompositions(S, center);
    std::vector<std::size_t> pos(S.vertex_count());
    for (std::size_t a = 0; a < trees.size(); ++a) {
        std::vector<const Coord*> vals;
        for (std::size_t v : trees[a].leaves) vals.push_back(S.vertex(v).data());
        for (std::size_t b = a + 1; b < trees.size(); ++b) {
            for (std::size_t p = 0; p < trees[b].leaves.size(); ++p) pos[trees[b].leaves[p]] = p;
            std::vector<std::size_t> target;
            for (std::size_t v : trees[a].leaves) target.push_back(pos[v]);
            // value(a) = braid(a -> b) + value(b)
            Coords d = B.sub(trees[a].value, trees[b].value);
            add_braid_value(S.P(), d, vals, target, -1);
            r.check_lazy("path-agreement", B.is_zero(d), [&] { return trees[a].label + " vs " + trees[b].label; });
        }
    }
    r.extra()["decompositions"] = std::to_string(trees.size());
    return r;
}

/**
 * Valid cube with the given corners: each f is the reordering iso between
 * the canonical bracketings (first free direction outermost) of its vertices.
 */
inline Cube cube_from_corners(std::shared_ptr<const PicardPresentation> P, std::size_t n,
                              const std::vector<Coords>& corner_values /* by corner index, see corner_vertex */);

/** Vertex index of corner number m (bit k set = coordinate k is -1). */
inline std::size_t corner_vertex(std::size_t m, std::size_t n) {
    std::size_t v = 0;
    for (std::size_t k = n; k-- > 0;) v = v * 3 + (((m >> k) & 1) ? 0 : 2);
    return v;
}

namespace detail {

inline void canonical_leaves(std::size_t v, std::size_t n, std::vector<std::size_t>& out) {
    for (std::size_t k = 0; k < n; ++k)
        if (cubeidx::coord(v, k) == 0) {
            canonical_leaves(v + cubeidx::pow3(k), n, out);
            canonical_leaves(v - cubeidx::pow3(k), n, out);
            return;
        }
    out.push_back(v);
}

} // namespace detail

inline Cube cube_from_corners(std::shared_ptr<const PicardPresentation> P, std::size_t n,
                              const std::vector<Coords>& corner_values) {
    using namespace cubeidx;
    Cube S(P, n);
    const auto& A = S.P().A();
    if (corner_values.size() != (std::size_t{1} << n)) throw Error("DimensionMismatch", "need 2^n corners");
    for (std::size_t m = 0; m < corner_values.size(); ++m) S.set_vertex(corner_vertex(m, n), corner_values[m]);
    // fill mids: each vertex is the sum of the corners below it
    for (std::size_t v = 0; v < S.vertex_count(); ++v) {
        if (Cube::is_corner(v, n)) continue;
        std::vector<std::size_t> leaves;
        detail::canonical_leaves(v, n, leaves);
        Coords s = A.zero();
        for (std::size_t w : leaves) s = A.add(s, S.vertex(w));
        S.set_vertex(v, s);
    }
    std::vector<std::size_t> pos(S.vertex_count());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < S.residual_count(); ++r) {
            std::vector<std::size_t> src, dst;
            detail::canonical_leaves(insert(r, i, 1), n, src);
            detail::canonical_leaves(insert(r, i, -1), n, src);
            detail::canonical_leaves(insert(r, i, 0), n, dst);
            for (std::size_t p = 0; p < dst.size(); ++p) pos[dst[p]] = p;
            std::vector<const Coord*> vals;
            std::vector<std::size_t> target;
            for (std::size_t w : src) {
                vals.push_back(S.vertex(w).data());
                target.push_back(pos[w]);
            }
            Coords f = S.P().B().zero();
            add_braid_value(S.P(), f, vals, target);
            S.set_f(i, r, f);
        }
    return S;
}

/** Random element with small coordinates on infinite factors. */
inline Coords random_element(const FGAbelianGroup& G, std::mt19937_64& rng, Coord span = 3) {
    Coords x(G.rank());
    for (std::size_t i = 0; i < G.rank(); ++i)
        x[i] = G.factor(i) ? std::uniform_int_distribution<Coord>(0, G.factor(i) - 1)(rng)
                           : std::uniform_int_distribution<Coord>(-span, span)(rng);
    return x;
}

/** Random valid cube: random corners, canonical structure, random vertex twist. */
inline Cube random_valid_cube(std::shared_ptr<const PicardPresentation> P, std::size_t n, std::mt19937_64& rng) {
    std::vector<Coords> corners;
    for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) corners.push_back(random_element(P->A(), rng));
    Cube S = cube_from_corners(P, n, corners);
    std::vector<Coords> theta;
    for (std::size_t v = 0; v < S.vertex_count(); ++v) theta.push_back(random_element(P->B(), rng));
    return twist(S, theta);
}

struct RelationBudget {
    std::size_t max_dim = 3;
    std::size_t exhaustive_cap = 20000;  // cubes per dimension enumerated exhaustively (discrete bases)
    std::size_t samples = 1000;          // sampled cubes in total otherwise
    std::uint64_t seed = 1;
};

namespace detail {

inline void check_relations_on(const Cube& S, std::size_t max_dim, Report& r) {
    const std::size_t n = S.dim();
    auto loc = [&] { return S.to_string(); };
    // ∂_i^α ∂_j^β = ∂_{j-1}^β ∂_i^α, i < j
    if (n >= 2)
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                for (int a = -1; a <= 1; ++a)
                    for (int b = -1; b <= 1; ++b)
                        r.check_lazy("face-face", face(face(S, j, b), i, a) == face(face(S, i, a), j - 1, b), loc);
    // s^j_β s^i_α = s^i_α s^{j-1}_β, i < j
    if (n + 2 <= max_dim)
        for (std::size_t i = 1; i <= n + 1; ++i)
            for (std::size_t j = i + 1; j <= n + 2; ++j)
                for (int a : {-1, 1})
                    for (int b : {-1, 1})
                        r.check_lazy("degeneracy-degeneracy",
                                     degeneracy(degeneracy(S, i, a), j, b) == degeneracy(degeneracy(S, j - 1, b), i, a),
                                     loc);
    // ∂_i^α s^j_β, four cases
    if (n + 1 <= max_dim)
        for (std::size_t j = 1; j <= n + 1; ++j)
            for (int b : {-1, 1}) {
                Cube sj = degeneracy(S, j, b);
                for (std::size_t i = 1; i <= n + 1; ++i)
                    for (int a = -1; a <= 1; ++a) {
                        Cube lhs = face(sj, i, a);
                        if (i < j)
                            r.check_lazy("face-degeneracy:i<j", lhs == degeneracy(face(S, i, a), j - 1, b), loc);
                        else if (i > j)
                            r.check_lazy("face-degeneracy:i>j", lhs == degeneracy(face(S, i - 1, a), j, b), loc);
                        else if (a != b)
                            r.check_lazy("face-degeneracy:identity", lhs == S, loc);
                        else
                            r.check_lazy("face-degeneracy:zero", lhs == zero_cube(S.P_ptr(), n), loc);
                    }
            }
}

} // namespace detail

/** Face/degeneracy relations on cubes of dimension <= max_dim (relations whose cubes stay in range). */
inline Report check_cubical_relations(const PicardPresentation& Pin, RelationBudget budget = {}) {
    Report r("check-cubical-relations");
    auto P = std::make_shared<const PicardPresentation>(Pin);
    std::mt19937_64 rng(budget.seed);
    bool exhaustive = true;
    std::size_t sampled = 0;
    const auto order = P->A().order();
    for (std::size_t n = 0; n <= budget.max_dim; ++n) {
        std::uint64_t count = 0;
        bool enumerate = P->is_discrete() && order;
        if (enumerate) {
            count = 1;
            for (std::size_t m = 0; m < (std::size_t{1} << n) && enumerate; ++m) {
                count *= *order;
                if (count > budget.exhaustive_cap) enumerate = false;
            }
        }
        if (enumerate) {
            auto els = P->A().elements();
            const std::size_t corners = std::size_t{1} << n;
            std::vector<Coords> cv(corners);
            for (std::uint64_t code = 0; code < count; ++code) {
                std::uint64_t c = code;
                for (auto& x : cv) {
                    x = els[c % *order];
                    c /= *order;
                }
                detail::check_relations_on(cube_from_corners(P, n, cv), budget.max_dim, r);
            }
        } else {
            exhaustive = false;
            std::size_t per_dim = budget.samples / (budget.max_dim + 1) + 1;
            for (std::size_t s = 0; s < per_dim; ++s, ++sampled)
                detail::check_relations_on(random_valid_cube(P, n, rng), budget.max_dim, r);
        }
    }
    r.note("coverage", "cubes", exhaustive ? "exhaustive" : "sampled " + std::to_string(sampled));
    return r;
}

} // namespace multidet
