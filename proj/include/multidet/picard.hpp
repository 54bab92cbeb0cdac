#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "multidet/group.hpp"
#include "multidet/report.hpp"

namespace multidet {

/**
 * @brief Skeletal Picard groupoid: objects A, automorphisms B, symmetry c.
 *
 * Strictly associative and unital; c is stored on generator pairs and
 * extended biadditively.
 */
class PicardPresentation {
public:
    PicardPresentation() = default;
    PicardPresentation(FGAbelianGroup a, FGAbelianGroup b, std::vector<std::vector<Coords>> c)
        : A_(std::move(a)), B_(std::move(b)), c_(std::move(c)) {
        if (c_.empty() && A_.rank()) c_.assign(A_.rank(), std::vector<Coords>(A_.rank(), B_.zero()));
        if (c_.size() != A_.rank()) throw Error("DimensionMismatch", "c table must be rank(A) x rank(A)");
        for (auto& row : c_) {
            if (row.size() != A_.rank()) throw Error("DimensionMismatch", "c table must be rank(A) x rank(A)");
            for (auto& v : row) {
                if (v.size() != B_.rank()) throw Error("DimensionMismatch", "c entry must lie in B");
                B_.reduce(v);
            }
        }
    }
    /** Discrete groupoid on A. */
    static PicardPresentation discrete(FGAbelianGroup a) { return {std::move(a), FGAbelianGroup{}, {}}; }

    const FGAbelianGroup& A() const { return A_; }
    const FGAbelianGroup& B() const { return B_; }
    const std::vector<std::vector<Coords>>& c_table() const { return c_; }
    bool is_discrete() const { return B_.is_trivial(); }

    /** acc += k * c(x, y). */
    void add_c(std::span<Coord> acc, std::span<const Coord> x, std::span<const Coord> y, Coord k = 1) const {
        const std::size_t nb = B_.rank();
        if (nb == 0) return;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!x[i]) continue;
            for (std::size_t j = 0; j < y.size(); ++j) {
                if (!y[j]) continue;
                Coord w = k * x[i] * y[j];
                const auto& e = c_[i][j];
                for (std::size_t t = 0; t < nb; ++t) acc[t] += w * e[t];
            }
        }
        B_.reduce(acc);
    }
    Coords c(std::span<const Coord> x, std::span<const Coord> y) const {
        Coords r = B_.zero();
        add_c(r, x, y);
        return r;
    }

    friend bool operator==(const PicardPresentation& a, const PicardPresentation& b) {
        return a.A_ == b.A_ && a.B_ == b.B_ && a.c_ == b.c_;
    }

private:
    FGAbelianGroup A_, B_;
    std::vector<std::vector<Coords>> c_;
};

inline Report validate_picard(const PicardPresentation& P) {
    Report r("validate-picard");
    const auto& A = P.A();
    const auto& B = P.B();
    for (std::size_t i = 0; i < A.rank(); ++i)
        for (std::size_t j = 0; j < A.rank(); ++j) {
            const auto& cij = P.c_table()[i][j];
            const auto& cji = P.c_table()[j][i];
            std::string loc = "c(e" + std::to_string(i) + ",e" + std::to_string(j) + ")";
            r.check("antisymmetry", B.is_zero(B.add(cij, cji)), loc,
                    "c(ei,ej)+c(ej,ei) = " + format_coords(B.add(cij, cji)));
            bool ord = (A.factor(i) == 0 || B.is_zero(B.scale(A.factor(i), cij))) &&
                       (A.factor(j) == 0 || B.is_zero(B.scale(A.factor(j), cij)));
            r.check("order-compatibility", ord, loc, "order of generator does not kill c");
        }
    return r;
}

/** λ for (a+b)+(cc+d) → (a+cc)+(b+d) in the skeletal model. */
inline Coords commutassoc(const PicardPresentation& P, std::span<const Coord> /*a*/, std::span<const Coord> b,
                          std::span<const Coord> cc, std::span<const Coord> /*d*/) {
    return P.c(b, cc);
}

inline Coords k_invariant(const PicardPresentation& P, std::span<const Coord> a) { return P.c(a, a); }

/**
 * @brief B-value of the canonical symmetry iso reordering a sum.
 *
 * values[p] is the object in position p of the source arrangement; target[p]
 * is where it lands. Sums c(v_p, v_q) over inverted pairs.
 */
inline void add_braid_value(const PicardPresentation& P, std::span<Coord> acc, const std::vector<const Coord*>& values,
                            std::span<const std::size_t> target, Coord sign = 1) {
    const std::size_t ra = P.A().rank();
    for (std::size_t p = 0; p < values.size(); ++p)
        for (std::size_t q = p + 1; q < values.size(); ++q)
            if (target[p] > target[q])
                P.add_c(acc, std::span<const Coord>(values[p], ra), std::span<const Coord>(values[q], ra), sign);
}

inline PicardPresentation product(const PicardPresentation& P, const PicardPresentation& Q) {
    std::vector<Coord> af = P.A().invariant_factors(), bf = P.B().invariant_factors();
    af.insert(af.end(), Q.A().invariant_factors().begin(), Q.A().invariant_factors().end());
    bf.insert(bf.end(), Q.B().invariant_factors().begin(), Q.B().invariant_factors().end());
    FGAbelianGroup A(af), B(bf);
    std::size_t pa = P.A().rank(), pb = P.B().rank();
    std::vector<std::vector<Coords>> c(A.rank(), std::vector<Coords>(A.rank(), B.zero()));
    for (std::size_t i = 0; i < A.rank(); ++i)
        for (std::size_t j = 0; j < A.rank(); ++j) {
            if (i < pa && j < pa)
                for (std::size_t t = 0; t < pb; ++t) c[i][j][t] = P.c_table()[i][j][t];
            else if (i >= pa && j >= pa)
                for (std::size_t t = 0; t < Q.B().rank(); ++t) c[i][j][pb + t] = Q.c_table()[i - pa][j - pa][t];
        }
    return {A, B, c};
}

/**
 * @brief B-valued numerical polynomial in integer variables.
 *
 * Each term is coef * prod binom(v_k, e_k). Variables are reduced group
 * coordinates, so the function is well defined on group elements.
 */
struct CellPoly {
    struct Term {
        Coords coef;
        std::vector<std::pair<std::size_t, int>> factors;  // (variable, binomial degree)
    };
    std::vector<Term> terms;

    static Coord binom(Coord v, int e) {
        Coord r = 1;
        for (int k = 0; k < e; ++k) r = r * (v - k) / (k + 1);
        return r;
    }
    void add_eval(std::span<Coord> acc, std::span<const Coord> vars) const {
        for (const auto& t : terms) {
            Coord w = 1;
            for (const auto& [v, e] : t.factors) {
                w *= binom(vars[v], e);
                if (!w) break;
            }
            if (!w) continue;
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * t.coef[i];
        }
    }
    bool empty() const { return terms.empty(); }
};

/** Explicit value for one monoidal cell, replacing the polynomial there. */
struct CellOverride {
    std::size_t slot = 0;
    std::vector<Coords> others;  // objects in the other slots, in slot order
    Coords y, y2;
    Coords value;
};

/**
 * @brief Functor A_1 x ... x A_k -> A' that is monoidal in each variable.
 *
 * f0 and f1 are multilinear tables on generators; monoidal cells m_s are
 * numerical polynomials over (other objects, y, y') plus explicit overrides.
 */
struct PicardFunctorData {
    std::vector<PicardPresentation> sources;
    PicardPresentation target;
    std::vector<Coords> f0;                 // generator tuple (slot 0 fastest) -> A'
    std::vector<std::vector<Coords>> f1;    // per slot: (other generators..., B_s generator) -> B'
    std::vector<CellPoly> m;                // per slot
    std::vector<CellOverride> overrides;

    std::size_t arity() const { return sources.size(); }

    void check_shape() const {
        std::size_t expect = 1;
        for (const auto& s : sources) expect *= s.A().rank();
        if (f0.size() != expect) throw Error("DimensionMismatch", "f0 table size");
        for (const auto& v : f0)
            if (v.size() != target.A().rank()) throw Error("DimensionMismatch", "f0 entry rank");
        if (f1.size() != arity() || m.size() != arity()) throw Error("DimensionMismatch", "per-slot tables");
        for (std::size_t s = 0; s < arity(); ++s) {
            std::size_t n = sources[s].B().rank();
            for (std::size_t t = 0; t < arity(); ++t)
                if (t != s) n *= sources[t].A().rank();
            if (f1[s].size() != n) throw Error("DimensionMismatch", "f1 table size for slot " + std::to_string(s));
            for (const auto& term : m[s].terms)
                if (term.coef.size() != target.B().rank()) throw Error("DimensionMismatch", "m coefficient rank");
        }
    }

    Coords eval_f0(const std::vector<Coords>& x) const {
        Coords out = target.A().zero();
        const std::size_t k = arity();
        std::vector<std::size_t> idx(k, 0);
        for (std::size_t flat = 0; flat < f0.size(); ++flat) {
            Coord w = 1;
            for (std::size_t s = 0; s < k && w; ++s) w *= x[s][idx[s]];
            if (w)
                for (std::size_t t = 0; t < out.size(); ++t) out[t] += w * f0[flat][t];
            for (std::size_t s = 0; s < k; ++s) {
                if (++idx[s] < sources[s].A().rank()) break;
                idx[s] = 0;
            }
        }
        target.A().reduce(out);
        return out;
    }

    /** Morphism b in slot s, objects elsewhere (others includes a placeholder at s). */
    Coords eval_f1(std::size_t s, const std::vector<Coords>& objs, std::span<const Coord> b) const {
        Coords out = target.B().zero();
        std::vector<std::size_t> dims;
        for (std::size_t t = 0; t < arity(); ++t)
            if (t != s) dims.push_back(sources[t].A().rank());
        dims.push_back(sources[s].B().rank());
        std::vector<std::size_t> idx(dims.size(), 0);
        for (std::size_t flat = 0; flat < f1[s].size(); ++flat) {
            Coord w = 1;
            std::size_t d = 0;
            for (std::size_t t = 0; t < arity() && w; ++t)
                if (t != s) w *= objs[t][idx[d++]];
            if (w) w *= b[idx.back()];
            if (w)
                for (std::size_t u = 0; u < out.size(); ++u) out[u] += w * f1[s][flat][u];
            for (std::size_t q = 0; q < idx.size(); ++q) {
                if (++idx[q] < dims[q]) break;
                idx[q] = 0;
            }
        }
        target.B().reduce(out);
        return out;
    }

    Coords eval_m(std::size_t s, const std::vector<Coords>& objs, std::span<const Coord> y,
                  std::span<const Coord> y2) const {
        for (const auto& o : overrides) {
            if (o.slot != s) continue;
            bool same = sources[s].A().equal(o.y, y) && sources[s].A().equal(o.y2, y2);
            std::size_t d = 0;
            for (std::size_t t = 0; t < arity() && same; ++t)
                if (t != s) same = sources[t].A().equal(o.others[d++], objs[t]);
            if (same) return target.B().reduced(o.value);
        }
        Coords vars;
        for (std::size_t t = 0; t < arity(); ++t)
            if (t != s) vars.insert(vars.end(), objs[t].begin(), objs[t].end());
        vars.insert(vars.end(), y.begin(), y.end());
        vars.insert(vars.end(), y2.begin(), y2.end());
        Coords out = target.B().zero();
        m[s].add_eval(out, vars);
        target.B().reduce(out);
        return out;
    }
};

/** Identity functor on P. */
inline PicardFunctorData identity_functor(const PicardPresentation& P) {
    PicardFunctorData F;
    F.sources = {P};
    F.target = P;
    for (std::size_t i = 0; i < P.A().rank(); ++i) F.f0.push_back(P.A().generator(i));
    F.f1.resize(1);
    for (std::size_t j = 0; j < P.B().rank(); ++j) F.f1[0].push_back(P.B().generator(j));
    F.m.resize(1);
    return F;
}

/**
 * Addition P x P -> P as a one-variable functor on the product groupoid.
 * F((a,b)+(a',b')) = (a+a')+(b+b') -> (a+b)+(a'+b') is λ, i.e. c(a', b).
 */
inline PicardFunctorData addition_functor(const PicardPresentation& P) {
    PicardFunctorData F;
    auto PP = product(P, P);
    F.sources = {PP};
    F.target = P;
    const std::size_t ra = P.A().rank(), rb = P.B().rank();
    for (std::size_t i = 0; i < 2 * ra; ++i) F.f0.push_back(P.A().generator(i % ra));
    F.f1.resize(1);
    for (std::size_t j = 0; j < 2 * rb; ++j) F.f1[0].push_back(P.B().generator(j % rb));
    F.m.resize(1);
    // variables: y = (a, b) at [0, 2ra), y' = (a', b') at [2ra, 4ra); m = c(a', b)
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ra; ++j) {
            const auto& coef = P.c_table()[i][j];
            if (P.B().is_zero(coef)) continue;
            F.m[0].terms.push_back({coef, {{2 * ra + i, 1}, {ra + j, 1}}});
        }
    return F;
}

namespace detail {

/** Elements to probe in a group: all of them when small, else a seeded sample. */
inline std::vector<Coords> probe_pool(const FGAbelianGroup& G, std::size_t cap, std::mt19937_64& rng,
                                      bool& exhaustive) {
    auto n = G.order();
    if (n && *n <= cap) {
        return G.elements();
    }
    exhaustive = false;
    std::vector<Coords> pool{G.zero()};
    for (std::size_t i = 0; i < G.rank(); ++i) pool.push_back(G.generator(i));
    std::uniform_int_distribution<Coord> small(-3, 3);
    while (pool.size() < cap) {
        Coords x(G.rank());
        for (std::size_t i = 0; i < G.rank(); ++i) {
            if (G.factor(i) == 0)
                x[i] = small(rng);
            else
                x[i] = std::uniform_int_distribution<Coord>(0, G.factor(i) - 1)(rng);
        }
        pool.push_back(x);
    }
    return pool;
}

/** Calls fn(index tuple) over the product of pool sizes, sampling when above the budget. */
template <class Fn>
void for_tuples(const std::vector<std::size_t>& sizes, std::size_t budget, std::mt19937_64& rng, bool& exhaustive,
                Fn&& fn) {
    long double total = 1;
    for (auto s : sizes) total *= static_cast<long double>(s);
    std::vector<std::size_t> idx(sizes.size(), 0);
    if (total == 0) return;
    if (total <= static_cast<long double>(budget)) {
        for (;;) {
            fn(idx);
            std::size_t q = 0;
            for (; q < idx.size(); ++q) {
                if (++idx[q] < sizes[q]) break;
                idx[q] = 0;
            }
            if (q == idx.size()) break;
        }
        return;
    }
    exhaustive = false;
    for (std::size_t it = 0; it < budget; ++it) {
        for (std::size_t q = 0; q < idx.size(); ++q) idx[q] = std::uniform_int_distribution<std::size_t>(0, sizes[q] - 1)(rng);
        fn(idx);
    }
}

} // namespace detail

struct EnumerationBudget {
    std::size_t pool_cap = 16;       // elements probed per group
    std::size_t tuple_budget = 200000;  // equation instances per family
    std::size_t sample_budget = 4096;   // 0 forbids sampling of infinite groups
    std::uint64_t seed = 1;
};

/** Monoidal coherence per variable and the two-variable compatibility, as B-equations. */
inline Report check_multiexact_picard_functor(const PicardFunctorData& F, EnumerationBudget budget = {}) {
    Report r("check-multiexact");
    F.check_shape();
    const auto& Pt = F.target;
    const auto& Bt = Pt.B();
    const std::size_t k = F.arity();
    for (const auto& s : F.sources)
        if ((!s.A().is_finite() || !s.B().is_finite()) && budget.sample_budget == 0)
            throw Error("InfiniteDomainWithoutSampleBudget", "source group " + s.A().to_string() + " is infinite");

    std::mt19937_64 rng(budget.seed);
    bool exhaustive = true;

    // well-definedness of the generator tables
    {
        std::vector<std::size_t> idx(k, 0);
        for (std::size_t flat = 0; flat < F.f0.size(); ++flat) {
            for (std::size_t s = 0; s < k; ++s) {
                Coord d = F.sources[s].A().factor(idx[s]);
                if (d)
                    r.check("f0-order", Pt.A().is_zero(Pt.A().scale(d, F.f0[flat])), "f0 entry " + std::to_string(flat));
            }
            for (std::size_t s = 0; s < k; ++s) {
                if (++idx[s] < F.sources[s].A().rank()) break;
                idx[s] = 0;
            }
        }
        for (std::size_t s = 0; s < k; ++s) {
            std::vector<std::size_t> dims;
            std::vector<std::size_t> slots;
            for (std::size_t t = 0; t < k; ++t)
                if (t != s) {
                    dims.push_back(F.sources[t].A().rank());
                    slots.push_back(t);
                }
            dims.push_back(F.sources[s].B().rank());
            std::vector<std::size_t> id(dims.size(), 0);
            for (std::size_t flat = 0; flat < F.f1[s].size(); ++flat) {
                for (std::size_t q = 0; q < dims.size(); ++q) {
                    Coord d = q + 1 == dims.size() ? F.sources[s].B().factor(id[q])
                                                   : F.sources[slots[q]].A().factor(id[q]);
                    if (d)
                        r.check("f1-order", Bt.is_zero(Bt.scale(d, F.f1[s][flat])),
                                "slot " + std::to_string(s) + " entry " + std::to_string(flat));
                }
                for (std::size_t q = 0; q < id.size(); ++q) {
                    if (++id[q] < dims[q]) break;
                    id[q] = 0;
                }
            }
        }
    }

    std::vector<std::vector<Coords>> pools(k);
    for (std::size_t s = 0; s < k; ++s) pools[s] = detail::probe_pool(F.sources[s].A(), budget.pool_cap, rng, exhaustive);

    auto where = [&](std::size_t s, const std::vector<Coords>& objs, std::initializer_list<const Coords*> ys) {
        std::string loc = "slot " + std::to_string(s) + " at (";
        for (std::size_t t = 0; t < k; ++t) {
            if (t) loc += ",";
            loc += t == s ? std::string("_") : format_coords(objs[t]);
        }
        loc += ")";
        for (auto* y : ys) loc += " " + format_coords(*y);
        return loc;
    };

    for (std::size_t s = 0; s < k; ++s) {
        const auto& As = F.sources[s].A();
        std::vector<std::size_t> sizes;
        for (std::size_t t = 0; t < k; ++t)
            if (t != s) sizes.push_back(pools[t].size());
        const std::size_t ns = pools[s].size();
        auto objs_of = [&](const std::vector<std::size_t>& idx) {
            std::vector<Coords> objs(k);
            std::size_t d = 0;
            for (std::size_t t = 0; t < k; ++t) objs[t] = t == s ? As.zero() : pools[t][idx[d++]];
            return objs;
        };
        auto F0 = [&](std::vector<Coords> objs, const Coords& y) {
            objs[s] = y;
            return F.eval_f0(objs);
        };

        // unit and symmetry: others x y x y'
        auto sizes2 = sizes;
        sizes2.push_back(ns);
        sizes2.push_back(ns);
        detail::for_tuples(sizes2, budget.tuple_budget, rng, exhaustive, [&](const std::vector<std::size_t>& idx) {
            auto objs = objs_of(idx);
            const auto& y = pools[s][idx[idx.size() - 2]];
            const auto& y2 = pools[s][idx.back()];
            auto zero = As.zero();
            if (idx.back() == 0)
                r.check_lazy("monoidal-unit",
                             Bt.is_zero(F.eval_m(s, objs, zero, y)) && Bt.is_zero(F.eval_m(s, objs, y, zero)),
                             [&] { return where(s, objs, {&y}); });
            // m(y,y') + c'(Fy, Fy') = f1(c(y,y')) + m(y',y)
            Coords lhs = F.eval_m(s, objs, y, y2);
            Pt.add_c(lhs, F0(objs, y), F0(objs, y2));
            Coords rhs = F.eval_f1(s, objs, F.sources[s].c(y, y2));
            rhs = Bt.add(rhs, F.eval_m(s, objs, y2, y));
            r.check_lazy("monoidal-symmetry", Bt.equal(lhs, rhs), [&] { return where(s, objs, {&y, &y2}); });
        });

        // associativity: others x y x y' x y''
        auto sizes3 = sizes2;
        sizes3.push_back(ns);
        detail::for_tuples(sizes3, budget.tuple_budget, rng, exhaustive, [&](const std::vector<std::size_t>& idx) {
            auto objs = objs_of(idx);
            const auto& y = pools[s][idx[idx.size() - 3]];
            const auto& y2 = pools[s][idx[idx.size() - 2]];
            const auto& y3 = pools[s][idx.back()];
            Coords lhs = Bt.add(F.eval_m(s, objs, As.add(y, y2), y3), F.eval_m(s, objs, y, y2));
            Coords rhs = Bt.add(F.eval_m(s, objs, y, As.add(y2, y3)), F.eval_m(s, objs, y2, y3));
            r.check_lazy("monoidal-associativity", Bt.equal(lhs, rhs),
                         [&] { return where(s, objs, {&y, &y2, &y3}); });
        });
    }

    // two-variable compatibility for each pair of slots
    for (std::size_t s = 0; s < k; ++s)
        for (std::size_t t = s + 1; t < k; ++t) {
            const auto& As = F.sources[s].A();
            const auto& At = F.sources[t].A();
            std::vector<std::size_t> sizes, slots;
            for (std::size_t u = 0; u < k; ++u)
                if (u != s && u != t) {
                    sizes.push_back(pools[u].size());
                    slots.push_back(u);
                }
            sizes.push_back(pools[s].size());
            sizes.push_back(pools[s].size());
            sizes.push_back(pools[t].size());
            sizes.push_back(pools[t].size());
            detail::for_tuples(sizes, budget.tuple_budget, rng, exhaustive, [&](const std::vector<std::size_t>& idx) {
                std::vector<Coords> objs(k);
                for (std::size_t q = 0; q < slots.size(); ++q) objs[slots[q]] = pools[slots[q]][idx[q]];
                std::size_t base = slots.size();
                const auto& a = pools[s][idx[base]];
                const auto& b = pools[s][idx[base + 1]];
                const auto& cc = pools[t][idx[base + 2]];
                const auto& d = pools[t][idx[base + 3]];
                auto at = [&](const Coords& xs, const Coords& xt) {
                    auto o = objs;
                    o[s] = xs;
                    o[t] = xt;
                    return o;
                };
                auto cd = At.add(cc, d);
                auto ab = As.add(a, b);
                // split s then t  ==  split t then s, then λ
                Coords lhs = F.eval_m(s, at(a, cd), a, b);
                lhs = Bt.add(lhs, F.eval_m(t, at(a, cc), cc, d));
                lhs = Bt.add(lhs, F.eval_m(t, at(b, cc), cc, d));
                Coords rhs = F.eval_m(t, at(ab, cc), cc, d);
                rhs = Bt.add(rhs, F.eval_m(s, at(a, cc), a, b));
                rhs = Bt.add(rhs, F.eval_m(s, at(a, d), a, b));
                Pt.add_c(rhs, F.eval_f0(at(b, cc)), F.eval_f0(at(a, d)));
                r.check_lazy("two-variable-compatibility", Bt.equal(lhs, rhs), [&] {
                    return "slots " + std::to_string(s) + "," + std::to_string(t) + " a=" + format_coords(a) +
                           " b=" + format_coords(b) + " c=" + format_coords(cc) + " d=" + format_coords(d);
                });
            });
        }
    r.note("coverage", "domain", exhaustive ? "exhaustive" : "sampled");
    return r;
}

} // namespace multidet
