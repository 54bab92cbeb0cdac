#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "multidet/matrix.hpp"
#include "multidet/picard.hpp"
#include "multidet/trifunctor.hpp"

namespace multidet {

/**
 * @brief Skeletal categorical ring: a Picard groupoid (A, B, c) with a
 * biadditive product on A, its actions on B and the distributor cells.
 *
 * Tables are on generators. left_act[i][b] = a_i·b_b, right_act[i][b] = b_b·a_i.
 * left_dist is a(y+y') → ay + ay' over variables (a, y, y'); right_dist is
 * (y+y')a → ya + y'a over (a, y, y').
 */
struct CategoricalRingData {
    std::string name;
    PicardPresentation base;
    std::vector<std::vector<Coords>> mult;
    Coords unit;
    std::vector<std::vector<Coords>> left_act, right_act;
    CellPoly left_dist, right_dist;

    Coords multiply(std::span<const Coord> x, std::span<const Coord> y) const {
        const auto& A = base.A();
        Coords out = A.zero();
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j)
                if (x[i] && y[j]) A.axpy(out, x[i] * y[j], mult[i][j]);
        A.reduce(out);
        return out;
    }
    Coords act_left(std::span<const Coord> a, std::span<const Coord> b) const { return act(left_act, a, b); }
    Coords act_right(std::span<const Coord> b, std::span<const Coord> a) const { return act(right_act, a, b); }

    void check_shape() const {
        const std::size_t ra = base.A().rank(), rb = base.B().rank();
        auto table = [&](const std::vector<std::vector<Coords>>& t, std::size_t cols, std::size_t r, const char* what) {
            if (t.size() != ra) throw Error("DimensionMismatch", std::string(what) + " needs one row per A generator");
            for (const auto& row : t) {
                if (row.size() != cols) throw Error("DimensionMismatch", std::string(what) + " row length");
                for (const auto& v : row)
                    if (v.size() != r) throw Error("DimensionMismatch", std::string(what) + " entry rank");
            }
        };
        table(mult, ra, ra, "mult");
        table(left_act, rb, rb, "left_act");
        table(right_act, rb, rb, "right_act");
        if (unit.size() != ra) throw Error("DimensionMismatch", "unit rank");
        for (const auto* d : {&left_dist, &right_dist})
            for (const auto& t : d->terms) {
                if (t.coef.size() != rb) throw Error("DimensionMismatch", "distributor coefficient rank");
                for (const auto& [v, e] : t.factors)
                    if (v >= 3 * ra) throw Error("DimensionMismatch", "distributor variable out of range");
            }
    }

    /** The product as a two-variable functor P × P → P. */
    PicardFunctorData as_functor() const {
        check_shape();
        PicardFunctorData F;
        F.sources = {base, base};
        F.target = base;
        const std::size_t ra = base.A().rank(), rb = base.B().rank();
        F.f0.resize(ra * ra);
        for (std::size_t i = 0; i < ra; ++i)
            for (std::size_t j = 0; j < ra; ++j) F.f0[i + ra * j] = mult[i][j];
        F.f1.assign(2, std::vector<Coords>(ra * rb));
        // slot 0 moves: b ⊗ a_j; slot 1 moves: a_i ⊗ b
        for (std::size_t b = 0; b < rb; ++b)
            for (std::size_t i = 0; i < ra; ++i) {
                F.f1[0][i + ra * b] = right_act[i][b];
                F.f1[1][i + ra * b] = left_act[i][b];
            }
        F.m = {right_dist, left_dist};
        return F;
    }

private:
    Coords act(const std::vector<std::vector<Coords>>& t, std::span<const Coord> a, std::span<const Coord> b) const {
        const auto& B = base.B();
        Coords out = B.zero();
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                if (a[i] && b[j]) B.axpy(out, a[i] * b[j], t[i][j]);
        B.reduce(out);
        return out;
    }
};

/** Z with trivial B and integer multiplication. */
inline CategoricalRingData integer_ring() {
    CategoricalRingData R;
    R.name = "Z";
    R.base = PicardPresentation(FGAbelianGroup({0}), FGAbelianGroup(), {{{}}});
    R.mult = {{{1}}};
    R.unit = {1};
    R.left_act = R.right_act = std::vector<std::vector<Coords>>(1);
    return R;
}

/** (Z, Z/2, xy) with integer multiplication; both actions are a·b = ab mod 2. */
inline CategoricalRingData sign_ring() {
    CategoricalRingData R;
    R.name = "Z-sign";
    R.base = PicardPresentation(FGAbelianGroup({0}), FGAbelianGroup({2}), {{{1}}});
    R.mult = {{{1}}};
    R.unit = {1};
    R.left_act = R.right_act = {{{1}}};
    // (y+y')a → ya + y'a costs C(a,2)·yy', which absorbs the interchange term; the left one is strict
    R.right_dist.terms.push_back({{1}, {{0, 2}, {1, 1}, {2, 1}}});
    return R;
}

/**
 * Base Picard axioms, multiexactness of the product (per-variable monoidal
 * coherence and the interchange with λ), ring axioms on generator triples and
 * the bimodule axioms of the actions.
 */
inline Report validate_categorical_ring(const CategoricalRingData& R, EnumerationBudget budget = {}) {
    Report r("validate-catring");
    R.check_shape();
    r.merge(validate_picard(R.base), "base:");
    r.merge(check_multiexact_picard_functor(R.as_functor(), budget), "multiexact:");
    const auto& A = R.base.A();
    const auto& B = R.base.B();
    const std::size_t ra = A.rank(), rb = B.rank();
    auto ga = [&](std::size_t i) { return A.generator(i); };
    auto gb = [&](std::size_t j) { return B.generator(j); };
    auto name_a = [](std::size_t i) { return "a" + std::to_string(i); };
    auto name_b = [](std::size_t j) { return "b" + std::to_string(j); };
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ra; ++j)
            for (std::size_t k = 0; k < ra; ++k)
                r.check_lazy("associativity",
                             A.equal(R.multiply(R.multiply(ga(i), ga(j)), ga(k)),
                                     R.multiply(ga(i), R.multiply(ga(j), ga(k)))),
                             [&] { return "(" + name_a(i) + "," + name_a(j) + "," + name_a(k) + ")"; });
    for (std::size_t i = 0; i < ra; ++i) {
        r.check_lazy("unit", A.equal(R.multiply(R.unit, ga(i)), ga(i)) && A.equal(R.multiply(ga(i), R.unit), ga(i)),
                     [&] { return name_a(i); });
    }
    for (std::size_t j = 0; j < rb; ++j) {
        r.check_lazy("action-unit",
                     B.equal(R.act_left(R.unit, gb(j)), gb(j)) && B.equal(R.act_right(gb(j), R.unit), gb(j)),
                     [&] { return name_b(j); });
        for (std::size_t i = 0; i < ra; ++i)
            for (std::size_t k = 0; k < ra; ++k) {
                auto loc = [&] { return "(" + name_a(i) + "," + name_a(k) + "," + name_b(j) + ")"; };
                r.check_lazy("left-action-associativity",
                             B.equal(R.act_left(ga(i), R.act_left(ga(k), gb(j))),
                                     R.act_left(R.multiply(ga(i), ga(k)), gb(j))),
                             loc);
                r.check_lazy("right-action-associativity",
                             B.equal(R.act_right(R.act_right(gb(j), ga(i)), ga(k)),
                                     R.act_right(gb(j), R.multiply(ga(i), ga(k)))),
                             loc);
                r.check_lazy("bimodule",
                             B.equal(R.act_right(R.act_left(ga(i), gb(j)), ga(k)),
                                     R.act_left(ga(i), R.act_right(gb(j), ga(k)))),
                             loc);
            }
    }
    return r;
}

struct RingDescription {
    FGAbelianGroup additive;
    std::vector<std::vector<Coords>> mult;
    Coords unit;
};

struct BimoduleDescription {
    FGAbelianGroup module;
    std::vector<std::vector<Coords>> left_act, right_act;
    /** True when the symmetry values c(y, y') generate B, so the σ square determines the actions. */
    bool sigma_determined = false;
    std::size_t sigma_checks = 0;
};

inline RingDescription pi0_ring(const CategoricalRingData& R) {
    R.check_shape();
    return {R.base.A(), R.mult, R.unit};
}

/**
 * Re-derives the actions on symmetry values from the σ square,
 * a·c(y,y') = c(ay, ay') + d(a;y,y') − d(a;y',y) (and on the right), and
 * compares them with the stored tables.
 */
inline BimoduleDescription pi1_bimodule(const CategoricalRingData& R, EnumerationBudget budget = {}) {
    R.check_shape();
    const auto& P = R.base;
    const auto& A = P.A();
    const auto& B = P.B();
    BimoduleDescription out{B, R.left_act, R.right_act};
    if (B.is_trivial()) {
        out.sigma_determined = true;
        return out;
    }
    std::mt19937_64 rng(budget.seed);
    bool exhaustive = true;
    auto pool = detail::probe_pool(A, budget.pool_cap, rng, exhaustive);
    auto dist = [&](const CellPoly& d, const Coords& a, const Coords& y, const Coords& y2) {
        Coords vars = a;
        vars.insert(vars.end(), y.begin(), y.end());
        vars.insert(vars.end(), y2.begin(), y2.end());
        Coords v = B.zero();
        d.add_eval(v, vars);
        return v;
    };
    // span of symmetry values
    IntMatrix span(B.rank(), 0);
    std::vector<IntMatrix::Column> cols;
    for (const auto& a : pool)
        for (const auto& y : pool)
            for (const auto& y2 : pool) {
                Coords cy = P.c(y, y2);
                if (a == pool.front()) {
                    IntMatrix::Column col;
                    for (std::size_t k = 0; k < cy.size(); ++k)
                        if (cy[k]) col.push_back({k, Integer(cy[k])});
                    if (!col.empty()) cols.push_back(std::move(col));
                }
                Coords ay = R.multiply(a, y), ay2 = R.multiply(a, y2);
                Coords left = P.c(ay, ay2);
                B.axpy(left, 1, dist(R.left_dist, a, y, y2));
                B.axpy(left, -1, dist(R.left_dist, a, y2, y));
                B.reduce(left);
                Coords ya = R.multiply(y, a), y2a = R.multiply(y2, a);
                Coords right = P.c(ya, y2a);
                B.axpy(right, 1, dist(R.right_dist, a, y, y2));
                B.axpy(right, -1, dist(R.right_dist, a, y2, y));
                B.reduce(right);
                ++out.sigma_checks;
                auto where = format_coords(a) + " on c(" + format_coords(y) + "," + format_coords(y2) + ")";
                if (!B.equal(left, R.act_left(a, cy)))
                    throw Error("SigmaMismatch", "left action disagrees with the σ composite at " + where);
                if (!B.equal(right, R.act_right(cy, a)))
                    throw Error("SigmaMismatch", "right action disagrees with the σ composite at " + where);
            }
    // c values together with the relations of B
    for (std::size_t k = 0; k < B.rank(); ++k)
        if (B.factor(k)) cols.push_back({{k, Integer(B.factor(k))}});
    IntMatrix M(B.rank(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) M.set_column(j, cols[j]);
    auto inv = lattice_invariants(M);
    out.sigma_determined = inv.rank == B.rank() &&
                           std::all_of(inv.factors.begin(), inv.factors.end(), [](const Integer& f) { return f == 1; });
    return out;
}

/** Z[generators] / relations: classes of generators in a normal form of the quotient. */
struct QuotientMap {
    FGAbelianGroup group;
    std::vector<Coords> classes;                            // per generator
    std::vector<std::vector<std::pair<std::size_t, Coord>>> reps;  // preimage of each quotient generator
};

namespace detail {

inline Coord to_coord(const Integer& x) {
    if (x > std::numeric_limits<Coord>::max() || x < std::numeric_limits<Coord>::min())
        throw Error("ResourceLimit", "coordinate overflow in quotient");
    return static_cast<Coord>(x);
}

/** Inverse of a unimodular integer matrix by exact rational elimination. */
inline std::vector<std::vector<Integer>> unimodular_inverse(const std::vector<std::vector<Integer>>& U) {
    using Q = boost::multiprecision::cpp_rational;
    const std::size_t n = U.size();
    std::vector<std::vector<Q>> a(n, std::vector<Q>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Q(U[i][j]);
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw Error("InternalError", "singular transform");
        std::swap(a[p], a[c]);
        Q piv = a[c][c];
        for (auto& x : a[c]) x /= piv;
        for (std::size_t i = 0; i < n; ++i)
            if (i != c && a[i][c] != 0) {
                Q f = a[i][c];
                for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
            }
    }
    std::vector<std::vector<Integer>> out(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = boost::multiprecision::numerator(a[i][n + j]);
    return out;
}

} // namespace detail

/** Quotient of Z^n by the column lattice of M (rows = generators). */
inline QuotientMap quotient_by_relations(const IntMatrix& M) {
    const std::size_t n = M.rows();
    auto basis = detail::lattice_basis<Integer>(M);
    QuotientMap q;
    bool unit = std::all_of(basis.begin(), basis.end(), [](const auto& v) { return abs(v.front().second) == 1; });
    if (unit) {
        // quotient is free on the non-pivot generators
        std::vector<char> pivot(n, 0);
        for (const auto& v : basis) pivot[v.front().first] = 1;
        std::vector<std::size_t> coord(n, n);
        std::size_t free = 0;
        for (std::size_t g = 0; g < n; ++g)
            if (!pivot[g]) {
                coord[g] = free++;
                q.reps.push_back({{g, 1}});
            }
        q.group = FGAbelianGroup(std::vector<Coord>(free, 0));
        // class(g): reduce e_g against the basis in pivot order
        std::vector<const detail::SparseVec<Integer>*> by_lead(n, nullptr);
        for (const auto& v : basis) by_lead[v.front().first] = &v;
        q.classes.assign(n, Coords(free, 0));
        // process generators from the last row up; a pivot row's class is minus the rest of its basis vector
        for (std::size_t g = n; g-- > 0;) {
            if (!pivot[g]) {
                q.classes[g][coord[g]] = 1;
                continue;
            }
            const auto& v = *by_lead[g];
            Coord lead = detail::to_coord(v.front().second);
            Coords c(free, 0);
            for (std::size_t k = 1; k < v.size(); ++k) {
                Coord w = detail::to_coord(v[k].second);
                for (std::size_t t = 0; t < free; ++t) c[t] -= w * q.classes[v[k].first][t];
            }
            for (auto& x : c) x *= lead;
            q.classes[g] = std::move(c);
        }
        return q;
    }
    IntMatrix Bm(n, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) Bm.set_column(j, basis[j]);
    auto snf = smith_normal_form(Bm);
    const auto U = snf.U.to_dense();
    const auto Ui = detail::unimodular_inverse(U);
    std::vector<std::size_t> keep;
    std::vector<Coord> factors;
    for (std::size_t i = 0; i < n; ++i) {
        Integer d = i < basis.size() ? snf.D.at(i, i) : Integer(0);
        if (d == 1) continue;
        keep.push_back(i);
        factors.push_back(detail::to_coord(d));
    }
    q.group = FGAbelianGroup(factors);
    q.classes.assign(n, Coords(keep.size(), 0));
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t k = 0; k < keep.size(); ++k) q.classes[g][k] = detail::to_coord(U[keep[k]][g]);
        q.group.reduce(q.classes[g]);
    }
    for (std::size_t k = 0; k < keep.size(); ++k) {
        std::vector<std::pair<std::size_t, Coord>> rep;
        for (std::size_t g = 0; g < n; ++g)
            if (Ui[g][keep[k]] != 0) rep.push_back({g, detail::to_coord(Ui[g][keep[k]])});
        q.reps.push_back(std::move(rep));
    }
    return q;
}

/**
 * @brief K₀ of a presentation with the product induced by a biexact functor.
 *
 * product[g][h] is the object g ⊗ h (kNone where undefined); basis_product[k][l]
 * is the class of e_k·e_l on the computed basis, unset when some product of
 * representatives is undefined.
 */
struct K0RingPresentation {
    std::vector<std::string> generators;
    std::vector<std::array<Id, 3>> relations;  // (x, y, z): [y] − [x] − [z]
    std::vector<std::vector<Id>> product;
    FGAbelianGroup additive;
    std::vector<Coords> classes;
    std::vector<std::vector<std::pair<std::size_t, Coord>>> basis;
    std::vector<std::vector<std::optional<Coords>>> basis_product;
    std::optional<Id> unit_object;
    Report report{"k0-ring"};

    Coords class_of(const std::vector<std::pair<std::size_t, Coord>>& combo) const {
        Coords out = additive.zero();
        for (const auto& [g, k] : combo) additive.axpy(out, k, classes[g]);
        additive.reduce(out);
        return out;
    }
    std::string basis_name(std::size_t k) const {
        std::string s;
        for (const auto& [g, c] : basis[k]) {
            if (!s.empty()) s += c < 0 ? " - " : " + ";
            else if (c < 0) s += "-";
            Coord a = c < 0 ? -c : c;
            if (a != 1) s += std::to_string(a) + "·";
            s += "[" + generators[g] + "]";
        }
        return s;
    }
};

/**
 * K₀(T) = Z[objects]/⟨[y]−[x]−[z]⟩ over the listed triangles, with product
 * [g]·[h] = [g ⊗ h]. Every relation times every generator (on either side)
 * must vanish in the quotient wherever the product is defined.
 */
inline K0RingPresentation compute_k0_ring(const TriangPresentation& T, const TriFunctorData& F) {
    if (F.sources.size() != 2) throw Error("MismatchedSignature", "k0 product needs a two-variable functor");
    for (const auto& s : F.sources)
        if (&*s != &T && s->objects != T.objects)
            throw Error("MismatchedSignature", "functor source differs from the presentation");
    if (F.target->objects != T.objects) throw Error("MismatchedSignature", "functor must land in the presentation");
    if (!check_functor_verdier_admission(F).ok())
        throw Error("VerdierAdmissionMissing", F.name + " does not admit Verdier structures on its battery");
    K0RingPresentation K;
    const std::size_t n = T.objects.size();
    K.generators = T.objects;
    IntMatrix M(n, T.triangles.size());
    for (std::size_t t = 0; t < T.triangles.size(); ++t) {
        const auto& D = T.triangles[t];
        K.relations.push_back({D.x, D.y, D.z});
        M.set_column(t, {{D.y, Integer(1)}, {D.x, Integer(-1)}, {D.z, Integer(-1)}});
    }
    auto q = quotient_by_relations(M);
    K.additive = q.group;
    K.classes = std::move(q.classes);
    K.basis = std::move(q.reps);
    const auto ix = F.objects();
    K.product.assign(n, std::vector<Id>(n, kNone));
    for (Id g = 0; g < n; ++g)
        for (Id h = 0; h < n; ++h) K.product[g][h] = F.obj[ix.tuple_index(std::array<Id, 2>{g, h})];

    // tensor unit, and orientation of a rank-one free basis towards it
    for (Id u = 0; u < n && !K.unit_object; ++u) {
        bool ok = true;
        for (Id x = 0; x < n && ok; ++x) ok = K.product[u][x] == x && K.product[x][u] == x;
        if (ok) K.unit_object = u;
    }
    const auto& G = K.additive;
    if (K.unit_object && G.rank() == 1 && G.factor(0) == 0) {
        Coord cu = K.classes[*K.unit_object][0];
        if (cu == 1 || cu == -1) {
            for (auto& c : K.classes) c[0] *= cu;
            K.basis = {{{*K.unit_object, 1}}};
        }
    }

    Report& r = K.report;
    r.extra()["additive"] = G.to_string();
    std::size_t undefined = 0;
    Coords acc = G.zero();
    auto cls = [&](Id o) -> const Coords& { return K.classes[o]; };
    std::size_t passed = 0;
    for (std::size_t t = 0; t < K.relations.size(); ++t) {
        const auto& [x, y, z] = K.relations[t];
        for (Id g = 0; g < n; ++g)
            for (int side = 0; side < 2; ++side) {
                auto mul = [&](Id a) { return side == 0 ? K.product[a][g] : K.product[g][a]; };
                Id px = mul(x), py = mul(y), pz = mul(z);
                if (px == kNone || py == kNone || pz == kNone) {
                    ++undefined;
                    continue;
                }
                std::fill(acc.begin(), acc.end(), 0);
                G.axpy(acc, 1, cls(py));
                G.axpy(acc, -1, cls(px));
                G.axpy(acc, -1, cls(pz));
                G.reduce(acc);
                if (!G.is_zero(acc)) {
                    std::string where = T.triangles[t].id + (side == 0 ? " times " : " multiplied into ") + T.objects[g];
                    r.fail("relation-product", where, "class " + format_coords(acc));
                    throw Error("ProductNotWellDefined", "relation " + where + " does not reduce to zero");
                }
                ++passed;
            }
    }
    r.pass_many("relation-product", passed);
    if (undefined) r.untestable("relation-product", undefined);

    // product on the basis
    const std::size_t b = K.basis.size();
    K.basis_product.assign(b, std::vector<std::optional<Coords>>(b));
    for (std::size_t k = 0; k < b; ++k)
        for (std::size_t l = 0; l < b; ++l) {
            Coords v = G.zero();
            bool ok = true;
            for (const auto& [g, cg] : K.basis[k])
                for (const auto& [h, ch] : K.basis[l]) {
                    Id p = K.product[g][h];
                    if (p == kNone) ok = false;
                    else G.axpy(v, cg * ch, K.classes[p]);
                }
            G.reduce(v);
            if (ok) K.basis_product[k][l] = v;
        }
    auto mul = [&](const Coords& x, const Coords& y) -> std::optional<Coords> {
        Coords v = G.zero();
        for (std::size_t k = 0; k < b; ++k)
            for (std::size_t l = 0; l < b; ++l) {
                if (!x[k] || !y[l]) continue;
                if (!K.basis_product[k][l]) return std::nullopt;
                G.axpy(v, x[k] * y[l], *K.basis_product[k][l]);
            }
        G.reduce(v);
        return v;
    };
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            for (std::size_t k = 0; k < b; ++k) {
                auto ij = mul(G.generator(i), G.generator(j));
                auto jk = mul(G.generator(j), G.generator(k));
                std::optional<Coords> l, rr;
                if (ij) l = mul(*ij, G.generator(k));
                if (jk) rr = mul(G.generator(i), *jk);
                if (!l || !rr) {
                    r.untestable("associativity");
                    continue;
                }
                r.check_lazy("associativity", G.equal(*l, *rr), [&] {
                    return "(" + K.basis_name(i) + "," + K.basis_name(j) + "," + K.basis_name(k) + ")";
                });
            }
    if (K.unit_object) {
        const Coords& u = K.classes[*K.unit_object];
        for (std::size_t k = 0; k < b; ++k) {
            auto a = mul(u, G.generator(k)), c = mul(G.generator(k), u);
            if (!a || !c) {
                r.untestable("unit");
                continue;
            }
            r.check_lazy("unit", G.equal(*a, G.generator(k)) && G.equal(*c, G.generator(k)),
                         [&] { return K.basis_name(k); });
        }
        r.extra()["unit"] = T.objects[*K.unit_object];
    }
    std::string basis, table;
    for (std::size_t k = 0; k < b; ++k) basis += (k ? ", " : "") + K.basis_name(k);
    for (std::size_t k = 0; k < b; ++k)
        for (std::size_t l = 0; l < b; ++l) {
            table += (table.empty() ? "" : "; ") + std::string("e") + std::to_string(k) + "*e" + std::to_string(l) + "=";
            table += K.basis_product[k][l] ? format_coords(*K.basis_product[k][l]) : "undefined";
        }
    r.extra()["basis"] = basis;
    r.extra()["product"] = table;
    return K;
}

/**
 * Checks that per-generator values (e.g. an Euler class) define a ring map
 * K₀ → Z: relations vanish, products and the unit are preserved on the basis,
 * and the image of the basis generates Z.
 */
inline Report check_k0_ring_map(const K0RingPresentation& K, const std::vector<Coord>& value) {
    Report r("k0-ring-map");
    if (value.size() != K.generators.size()) throw Error("DimensionMismatch", "one value per generator");
    for (const auto& [x, y, z] : K.relations)
        r.check_lazy("relation-kernel", value[y] - value[x] - value[z] == 0,
                     [&] { return K.generators[x] + " → " + K.generators[y] + " → " + K.generators[z]; });
    const auto& G = K.additive;
    std::vector<Coord> on_basis;
    for (const auto& rep : K.basis) {
        Coord v = 0;
        for (const auto& [g, c] : rep) v += c * value[g];
        on_basis.push_back(v);
    }
    for (std::size_t k = 0; k < on_basis.size(); ++k)
        if (G.factor(k)) r.check_lazy("torsion-kernel", on_basis[k] == 0, [&] { return K.basis_name(k); });
    auto eval = [&](const Coords& x) {
        Coord v = 0;
        for (std::size_t k = 0; k < x.size(); ++k) v += x[k] * on_basis[k];
        return v;
    };
    for (std::size_t k = 0; k < on_basis.size(); ++k)
        for (std::size_t l = 0; l < on_basis.size(); ++l) {
            if (!K.basis_product[k][l]) {
                r.untestable("multiplicative");
                continue;
            }
            r.check_lazy("multiplicative", eval(*K.basis_product[k][l]) == on_basis[k] * on_basis[l],
                         [&] { return K.basis_name(k) + " * " + K.basis_name(l); });
        }
    if (K.unit_object) r.check("unit-preserved", value[*K.unit_object] == 1, K.generators[*K.unit_object]);
    Coord g = 0;
    for (Coord v : on_basis) g = std::gcd(g, v);
    r.check("surjective", g == 1, "basis", "gcd of basis values " + std::to_string(g));
    return r;
}

} // namespace multidet
