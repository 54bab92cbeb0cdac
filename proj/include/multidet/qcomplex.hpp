#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "multidet/chain.hpp"
#include "multidet/cube.hpp"

namespace multidet {

/** Cap on the number of cubes materialised per level; MULTIDET_BUDGET overrides. */
inline std::uint64_t cube_budget() {
    if (const char* s = std::getenv("MULTIDET_BUDGET")) {
        char* end = nullptr;
        auto v = std::strtoull(s, &end, 10);
        if (end != s && *end == '\0' && v > 0) return v;
    }
    return std::uint64_t{1} << 20;
}

/** Discrete cube given by its 2^n corner values, as element indices of A. */
struct DiscreteCube {
    std::vector<std::uint32_t> corners;  // corner m: bit k set means coordinate k is -1
    friend bool operator==(const DiscreteCube&, const DiscreteCube&) = default;
};

/**
 * @brief Arithmetic on discrete cubes over a finite group, encoded as integers.
 *
 * A cube's code reads its corner tuple as base-|A| digits, first corner most
 * significant, so increasing codes are lexicographic order on corner tuples.
 */
class DiscreteCubeSpace {
public:
    explicit DiscreteCubeSpace(FGAbelianGroup A) : A_(std::move(A)) {
        auto q = A_.order();
        if (!q || *q > (1u << 16)) throw Error("InfiniteDomainWithoutSampleBudget", "Q-complex needs a small finite group");
        q_ = *q;
        auto els = A_.elements();
        add_.resize(q_ * q_);
        for (std::uint64_t x = 0; x < q_; ++x)
            for (std::uint64_t y = 0; y < q_; ++y) add_[x * q_ + y] = static_cast<std::uint32_t>(A_.index_of(A_.add(els[x], els[y])));
    }

    const FGAbelianGroup& group() const { return A_; }
    std::uint64_t order() const { return q_; }

    /** |A|^(2^n), or nullopt past 2^62. */
    std::optional<std::uint64_t> count(std::size_t n) const {
        std::uint64_t c = 1;
        for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
            if (c > (std::uint64_t{1} << 62) / q_) return std::nullopt;
            c *= q_;
        }
        return c;
    }

    std::vector<std::uint32_t> decode(std::uint64_t code, std::size_t n) const {
        std::vector<std::uint32_t> c(std::size_t{1} << n);
        for (std::size_t m = c.size(); m-- > 0;) {
            c[m] = static_cast<std::uint32_t>(code % q_);
            code /= q_;
        }
        return c;
    }
    std::uint64_t encode(std::span<const std::uint32_t> c) const {
        std::uint64_t code = 0;
        for (auto e : c) code = code * q_ + e;
        return code;
    }

    std::vector<std::uint32_t> face(std::span<const std::uint32_t> c, std::size_t i, int alpha) const {
        std::vector<std::uint32_t> out(c.size() / 2);
        for (std::size_t m = 0; m < out.size(); ++m) {
            std::size_t low = m & ((std::size_t{1} << i) - 1), high = m >> i;
            std::size_t plus = low | (high << (i + 1)), minus = plus | (std::size_t{1} << i);
            out[m] = alpha == 1 ? c[plus] : alpha == -1 ? c[minus] : add_[c[plus] * q_ + c[minus]];
        }
        return out;
    }

    /** s^{j+1}_α: corners with coordinate j = α become 0. */
    std::vector<std::uint32_t> degeneracy(std::span<const std::uint32_t> c, std::size_t j, int alpha) const {
        std::vector<std::uint32_t> out(c.size() * 2);
        const std::size_t zero_bit = alpha == 1 ? 0 : 1;
        for (std::size_t m = 0; m < out.size(); ++m) {
            if (((m >> j) & 1) == zero_bit) continue;
            std::size_t low = m & ((std::size_t{1} << j) - 1), high = m >> (j + 1);
            out[m] = c[low | (high << j)];
        }
        return out;
    }

    bool is_degenerate(std::span<const std::uint32_t> c) const {
        if (c.size() == 1) return c[0] == 0;
        std::size_t n = 0;
        while ((std::size_t{1} << n) < c.size()) ++n;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t bit = 0; bit < 2; ++bit) {
                bool zero = true;
                for (std::size_t m = 0; m < c.size() && zero; ++m)
                    if (((m >> j) & 1) == bit && c[m] != 0) zero = false;
                if (zero) return true;
            }
        return false;
    }

    /** ∂ as a formal sum over codes, (-1)^(i+α+1) with i 1-based; zero terms dropped. */
    std::vector<std::pair<std::uint64_t, std::int64_t>> boundary(std::span<const std::uint32_t> c) const {
        std::map<std::uint64_t, std::int64_t> acc;
        std::size_t n = 0;
        while ((std::size_t{1} << n) < c.size()) ++n;
        for (std::size_t i = 0; i < n; ++i)
            for (int a = -1; a <= 1; ++a) acc[encode(face(c, i, a))] += sign(i + 1, a);
        std::vector<std::pair<std::uint64_t, std::int64_t>> out;
        for (auto [k, v] : acc)
            if (v) out.emplace_back(k, v);
        return out;
    }

    static std::int64_t sign(std::size_t i1, int alpha) { return (static_cast<long long>(i1) + alpha + 1) % 2 == 0 ? 1 : -1; }

    /** Formal ∂∂ of a cube; empty when it cancels. */
    std::map<std::uint64_t, std::int64_t> boundary_square(std::span<const std::uint32_t> c) const {
        std::map<std::uint64_t, std::int64_t> acc;
        std::size_t n = 0;
        while ((std::size_t{1} << n) < c.size()) ++n;
        for (std::size_t i = 0; i < n; ++i)
            for (int a = -1; a <= 1; ++a) {
                auto f = face(c, i, a);
                for (std::size_t i2 = 0; i2 + 1 < n; ++i2)
                    for (int b = -1; b <= 1; ++b) acc[encode(face(f, i2, b))] += sign(i + 1, a) * sign(i2 + 1, b);
            }
        std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
        return acc;
    }

    Cube to_cube(std::span<const std::uint32_t> c) const {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < c.size()) ++n;
        std::vector<Coords> corners;
        for (auto e : c) corners.push_back(A_.element_at(e));
        return cube_from_corners(std::make_shared<const PicardPresentation>(PicardPresentation::discrete(A_)), n, corners);
    }

private:
    FGAbelianGroup A_;
    std::uint64_t q_ = 1;
    std::vector<std::uint32_t> add_;
};

inline std::uint64_t require_budget(const DiscreteCubeSpace& S, std::size_t n, std::uint64_t budget) {
    auto c = S.count(n);
    if (!c || *c > budget)
        throw Error("BudgetExceeded", "level " + std::to_string(n) + " has " + (c ? std::to_string(*c) : "> 2^62") +
                                          " cubes, budget " + std::to_string(budget));
    return *c;
}

/** All n-cubes over finite A in lexicographic corner order. */
inline std::vector<DiscreteCube> enumerate_cubes(const FGAbelianGroup& A, std::size_t n, std::uint64_t budget = cube_budget()) {
    DiscreteCubeSpace S(A);
    auto count = require_budget(S, n, budget);
    std::vector<DiscreteCube> out;
    out.reserve(count);
    for (std::uint64_t code = 0; code < count; ++code) out.push_back({S.decode(code, n)});
    return out;
}

/** Quotient of the cube complex by degenerates: non-degenerate generators per level and boundaries. */
struct QComplex {
    FGAbelianGroup base;
    std::vector<std::vector<std::uint64_t>> generators;  // codes per level
    ChainComplexZ complex;
};

inline QComplex build_qcomplex(const FGAbelianGroup& A, std::size_t max_level, std::uint64_t budget = cube_budget()) {
    DiscreteCubeSpace S(A);
    QComplex Q{A, {}, {}};
    std::vector<std::vector<std::int64_t>> index;  // code -> generator column, -1 when degenerate
    for (std::size_t n = 0; n <= max_level; ++n) {
        auto count = require_budget(S, n, budget);
        std::vector<std::uint64_t> gens;
        std::vector<std::int64_t> idx(count, -1);
        for (std::uint64_t code = 0; code < count; ++code)
            if (!S.is_degenerate(S.decode(code, n))) {
                idx[code] = static_cast<std::int64_t>(gens.size());
                gens.push_back(code);
            }
        Q.generators.push_back(std::move(gens));
        index.push_back(std::move(idx));
    }
    std::vector<std::size_t> levels;
    std::vector<IntMatrix> boundaries;
    for (std::size_t n = 0; n <= max_level; ++n) levels.push_back(Q.generators[n].size());
    for (std::size_t n = 1; n <= max_level; ++n) {
        IntMatrix M(levels[n - 1], levels[n]);
        for (std::size_t col = 0; col < levels[n]; ++col) {
            IntMatrix::Column entries;
            for (auto [code, coef] : S.boundary(S.decode(Q.generators[n][col], n))) {
                auto row = index[n - 1][code];
                if (row >= 0) entries.emplace_back(static_cast<std::size_t>(row), Integer(coef));
            }
            M.set_column(col, std::move(entries));
        }
        boundaries.push_back(std::move(M));
    }
    Q.complex = ChainComplexZ(std::move(levels), std::move(boundaries));
    return Q;
}

inline const IntMatrix& boundary_matrix(const QComplex& Q, std::size_t n) { return Q.complex.boundary(n); }

inline FGAbelianGroup q_homology(const FGAbelianGroup& A, std::size_t k, std::uint64_t budget = cube_budget()) {
    return homology_at(build_qcomplex(A, k + 1, budget).complex, k);
}

/** Formal ∂∂ of the n-cube whose corners are the free generators of Z^(2^n). Empty when it cancels. */
inline std::map<std::vector<std::vector<std::int64_t>>, std::int64_t> universal_boundary_square(std::size_t n) {
    using Linear = std::vector<std::vector<std::int64_t>>;  // corner -> coefficient vector
    const std::size_t N = std::size_t{1} << n;
    Linear cube(N, std::vector<std::int64_t>(N, 0));
    for (std::size_t m = 0; m < N; ++m) cube[m][m] = 1;
    auto face = [](const Linear& c, std::size_t i, int alpha) {
        Linear out(c.size() / 2);
        for (std::size_t m = 0; m < out.size(); ++m) {
            std::size_t low = m & ((std::size_t{1} << i) - 1), high = m >> i;
            std::size_t plus = low | (high << (i + 1)), minus = plus | (std::size_t{1} << i);
            if (alpha == 1) out[m] = c[plus];
            else if (alpha == -1) out[m] = c[minus];
            else {
                out[m] = c[plus];
                for (std::size_t t = 0; t < out[m].size(); ++t) out[m][t] += c[minus][t];
            }
        }
        return out;
    };
    std::map<Linear, std::int64_t> acc;
    for (std::size_t i = 0; i < n; ++i)
        for (int a = -1; a <= 1; ++a) {
            auto f = face(cube, i, a);
            for (std::size_t i2 = 0; i2 + 1 < n; ++i2)
                for (int b = -1; b <= 1; ++b)
                    acc[face(f, i2, b)] += DiscreteCubeSpace::sign(i + 1, a) * DiscreteCubeSpace::sign(i2 + 1, b);
        }
    std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
    return acc;
}

struct QCheckOptions {
    std::size_t max_level = 4;
    std::uint64_t budget = cube_budget();
    std::size_t samples = 4096;  // explicit columns checked at levels beyond the budget
    std::uint64_t seed = 1;
};

/**
 * ∂∂ = 0 on the unquotiented complex and ∂(degenerate) ⊂ degenerate span, per level.
 * Levels within budget are exhaustive; larger levels use the universal cube, sampled
 * columns, and all degeneracies of the level below.
 */
inline Report check_qcomplex(const FGAbelianGroup& A, QCheckOptions opt = {}) {
    Report r("q-complex");
    DiscreteCubeSpace S(A);
    std::mt19937_64 rng(opt.seed);
    auto residue_string = [](const std::map<std::uint64_t, std::int64_t>& m) {
        std::string s;
        for (auto [k, v] : m) s += (s.empty() ? "" : " ") + std::to_string(v) + "*#" + std::to_string(k);
        return s;
    };
    auto check_degenerate = [&](std::span<const std::uint32_t> c, std::size_t n) {
        bool ok = true;
        for (auto [code, coef] : S.boundary(c))
            if (!S.is_degenerate(S.decode(code, n - 1))) ok = false;
        r.check_lazy("degenerate-span", ok, [&] { return "level " + std::to_string(n) + " cube #" + std::to_string(S.encode(c)); });
    };
    for (std::size_t n = 2; n <= opt.max_level; ++n)
        r.check_lazy("boundary-square-universal", universal_boundary_square(n).empty(),
                     [&] { return "level " + std::to_string(n); });
    for (std::size_t n = 1; n <= opt.max_level; ++n) {
        auto count = S.count(n);
        if (count && *count <= opt.budget) {
            for (std::uint64_t code = 0; code < *count; ++code) {
                auto c = S.decode(code, n);
                if (n >= 2) {
                    auto res = S.boundary_square(c);
                    r.check_lazy("boundary-square", res.empty(), [&] {
                        return "level " + std::to_string(n) + " cube #" + std::to_string(code) + ": " + residue_string(res);
                    });
                }
                if (S.is_degenerate(c)) check_degenerate(c, n);
            }
            r.note("coverage", "level " + std::to_string(n), "exhaustive " + std::to_string(*count));
            continue;
        }
        std::uniform_int_distribution<std::uint32_t> el(0, static_cast<std::uint32_t>(S.order() - 1));
        if (n >= 2)
            for (std::size_t s = 0; s < opt.samples; ++s) {
                std::vector<std::uint32_t> c(std::size_t{1} << n);
                for (auto& e : c) e = el(rng);
                auto res = S.boundary_square(c);
                r.check_lazy("boundary-square", res.empty(), [&] { return "level " + std::to_string(n) + ": " + residue_string(res); });
            }
        auto below = S.count(n - 1);
        if (below && *below * 2 * n <= opt.budget) {
            for (std::uint64_t code = 0; code < *below; ++code) {
                auto c = S.decode(code, n - 1);
                for (std::size_t j = 0; j < n; ++j)
                    for (int a : {-1, 1}) check_degenerate(S.degeneracy(c, j, a), n);
            }
            r.note("coverage", "level " + std::to_string(n),
                   "universal cube + " + std::to_string(opt.samples) + " sampled columns; degenerate span exhaustive");
        } else {
            r.note("coverage", "level " + std::to_string(n), "universal cube + sampled columns only");
        }
    }
    return r;
}

/** Chain map induced by a homomorphism A -> A2 (hom: rows = A2 coords, cols = A generators), on levels <= max_level. */
inline Report check_induced_chain_map(const FGAbelianGroup& A, const FGAbelianGroup& A2,
                                      const std::vector<std::vector<Coord>>& hom, std::size_t max_level,
                                      std::uint64_t budget = cube_budget()) {
    Report r = group_hom_check(hom, A, A2);
    DiscreteCubeSpace S(A), T(A2);
    auto els = A.elements();
    std::vector<std::uint32_t> phi(els.size());
    for (std::size_t x = 0; x < els.size(); ++x) {
        Coords y = A2.zero();
        for (std::size_t row = 0; row < A2.rank(); ++row)
            for (std::size_t g = 0; g < A.rank(); ++g) y[row] += hom[row][g] * els[x][g];
        A2.reduce(y);
        phi[x] = static_cast<std::uint32_t>(A2.index_of(y));
    }
    auto map_cube = [&](std::span<const std::uint32_t> c) {
        std::vector<std::uint32_t> out(c.size());
        for (std::size_t m = 0; m < c.size(); ++m) out[m] = phi[c[m]];
        return out;
    };
    for (std::size_t n = 1; n <= max_level; ++n) {
        auto count = require_budget(S, n, budget);
        for (std::uint64_t code = 0; code < count; ++code) {
            auto c = S.decode(code, n);
            std::map<std::uint64_t, std::int64_t> lhs, rhs;
            for (auto [k, v] : S.boundary(c)) lhs[T.encode(map_cube(S.decode(k, n - 1)))] += v;
            for (auto [k, v] : T.boundary(map_cube(c))) rhs[k] += v;
            std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
            r.check_lazy("chain-map", lhs == rhs, [&] { return "level " + std::to_string(n) + " cube #" + std::to_string(code); });
            if (S.is_degenerate(c))
                r.check_lazy("preserves-degenerate", T.is_degenerate(map_cube(c)),
                             [&] { return "level " + std::to_string(n) + " cube #" + std::to_string(code); });
        }
    }
    return r;
}

/** ∂∂ on cubes over a general base, cancelling in the free group on cubes. Needs n >= 2. */
inline Report sampled_boundary_square_check(const PicardPresentation& Pin, std::size_t n, std::size_t samples,
                                            std::uint64_t seed = 1) {
    Report r("sampled-boundary-square");
    if (n < 2) {
        r.note("coverage", "level " + std::to_string(n), "no ∂∂ below level 2");
        return r;
    }
    auto P = std::make_shared<const PicardPresentation>(Pin);
    auto body = [&](const Cube& S) {
        std::map<std::pair<std::vector<Coord>, std::vector<Coord>>, std::int64_t> acc;
        for (std::size_t i = 1; i <= n; ++i)
            for (int a = -1; a <= 1; ++a) {
                Cube F = face(S, i, a);
                for (std::size_t i2 = 1; i2 < n; ++i2)
                    for (int b = -1; b <= 1; ++b) {
                        Cube G = face(F, i2, b);
                        acc[{G.raw_vertices(), G.raw_f()}] += DiscreteCubeSpace::sign(i, a) * DiscreteCubeSpace::sign(i2, b);
                    }
            }
        std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
        r.check_lazy("boundary-square", acc.empty(), [&] { return S.to_string(); });
    };
    auto order = P->A().order();
    if (P->is_discrete() && order) {
        DiscreteCubeSpace D(P->A());
        auto count = D.count(n);
        if (count && *count <= samples) {
            for (std::uint64_t code = 0; code < *count; ++code) body(D.to_cube(D.decode(code, n)));
            r.note("coverage", "level " + std::to_string(n), "exhaustive " + std::to_string(*count));
            return r;
        }
    }
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) body(random_valid_cube(P, n, rng));
    r.note("coverage", "level " + std::to_string(n), "sampled " + std::to_string(samples));
    return r;
}

} // namespace multidet
