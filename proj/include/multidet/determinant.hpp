#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <memory>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "multidet/cube.hpp"
#include "multidet/trifunctor.hpp"

namespace multidet {

/** State of one table cell. Missing cells raise MissingDatum when an axiom needs them. */
enum class Cell : std::uint8_t { missing, present, undefined };

/**
 * @brief (Multi-)determinant functor given by value tables into a skeletal Picard groupoid.
 *
 * obj is indexed by object tuples; iso and tri of slot i by
 * item * others_count(i) + index of the objects in the other slots.
 */
class DeterminantData {
public:
    DeterminantData() = default;
    DeterminantData(std::vector<PresentationPtr> sources, std::shared_ptr<const PicardPresentation> target)
        : src_(std::move(sources)), P_(std::move(target)) {
        if (src_.empty() || !P_) throw Error("MismatchedSignature", "determinant needs sources and a target");
        std::vector<std::size_t> counts;
        for (const auto& s : src_) counts.push_back(s->objects.size());
        ix_ = SlotIndexer(counts);
        ra_ = P_->A().rank();
        rb_ = P_->B().rank();
        obj_.assign(ix_.tuple_count() * ra_, 0);
        obj_st_.assign(ix_.tuple_count(), Cell::missing);
        for (std::size_t i = 0; i < src_.size(); ++i) {
            std::size_t ni = src_[i]->isos.size() * ix_.others_count(i);
            std::size_t nt = src_[i]->triangles.size() * ix_.others_count(i);
            iso_.emplace_back(ni * rb_, 0);
            iso_st_.emplace_back(ni, Cell::missing);
            tri_.emplace_back(nt * rb_, 0);
            tri_st_.emplace_back(nt, Cell::missing);
        }
    }

    std::string name;
    std::map<std::string, std::string> builtin;
    /** Triangle pairs (i, j, Δi, Δj), i<j, with no Verdier structure; pairwise axioms are untestable there. */
    std::set<std::array<Id, 4>> out_of_scope;
    bool in_scope(std::size_t i, std::size_t j, Id a, Id b) const {
        return out_of_scope.empty() || !out_of_scope.contains({i, j, a, b});
    }

    const std::vector<PresentationPtr>& sources() const { return src_; }
    const TriangPresentation& source(std::size_t i) const { return *src_.at(i); }
    const PicardPresentation& P() const { return *P_; }
    const std::shared_ptr<const PicardPresentation>& target() const { return P_; }
    std::size_t slots() const { return src_.size(); }
    const SlotIndexer& objects() const { return ix_; }
    std::size_t others(std::size_t slot) const { return ix_.others_count(slot); }
    std::size_t entry(std::size_t slot, Id item, std::size_t rest) const { return item * others(slot) + rest; }

    std::span<const Coord> obj(std::size_t t) const { return {obj_.data() + t * ra_, ra_}; }
    Cell obj_state(std::size_t t) const { return obj_st_[t]; }
    void set_obj(std::size_t t, std::span<const Coord> v) { put(obj_, obj_st_, t, ra_, v, P_->A()); }
    void set_obj_undefined(std::size_t t) { obj_st_.at(t) = Cell::undefined; }

    std::size_t iso_entries(std::size_t slot) const { return iso_st_[slot].size(); }
    std::span<const Coord> iso(std::size_t slot, std::size_t e) const { return {iso_[slot].data() + e * rb_, rb_}; }
    Cell iso_state(std::size_t slot, std::size_t e) const { return iso_st_[slot][e]; }
    void set_iso(std::size_t slot, std::size_t e, std::span<const Coord> v) {
        put(iso_[slot], iso_st_[slot], e, rb_, v, P_->B());
    }
    void set_iso_undefined(std::size_t slot, std::size_t e) { iso_st_[slot].at(e) = Cell::undefined; }

    std::size_t tri_entries(std::size_t slot) const { return tri_st_[slot].size(); }
    std::span<const Coord> tri(std::size_t slot, std::size_t e) const { return {tri_[slot].data() + e * rb_, rb_}; }
    Cell tri_state(std::size_t slot, std::size_t e) const { return tri_st_[slot][e]; }
    void set_tri(std::size_t slot, std::size_t e, std::span<const Coord> v) {
        put(tri_[slot], tri_st_[slot], e, rb_, v, P_->B());
    }
    void set_tri_undefined(std::size_t slot, std::size_t e) { tri_st_[slot].at(e) = Cell::undefined; }

    /** Same sources (by identity or value) and same target. */
    bool same_signature(const DeterminantData& o) const {
        if (slots() != o.slots() || !(P() == o.P())) return false;
        for (std::size_t i = 0; i < slots(); ++i)
            if (src_[i] != o.src_[i] && !same_presentation(*src_[i], *o.src_[i])) return false;
        return true;
    }

    friend bool operator==(const DeterminantData& a, const DeterminantData& b) {
        return a.same_signature(b) && a.out_of_scope == b.out_of_scope && a.obj_ == b.obj_ && a.obj_st_ == b.obj_st_ && a.iso_ == b.iso_ &&
               a.iso_st_ == b.iso_st_ && a.tri_ == b.tri_ && a.tri_st_ == b.tri_st_;
    }

    static bool same_presentation(const TriangPresentation& a, const TriangPresentation& b) {
        if (a.objects != b.objects || a.triangles.size() != b.triangles.size() || a.isos.size() != b.isos.size())
            return false;
        for (std::size_t t = 0; t < a.triangles.size(); ++t) {
            const auto &x = a.triangles[t], &y = b.triangles[t];
            if (x.id != y.id || x.x != y.x || x.y != y.y || x.z != y.z) return false;
        }
        for (std::size_t f = 0; f < a.isos.size(); ++f)
            if (a.isos[f].id != b.isos[f].id) return false;
        return true;
    }

private:
    static void put(std::vector<Coord>& vals, std::vector<Cell>& st, std::size_t e, std::size_t r,
                    std::span<const Coord> v, const FGAbelianGroup& G) {
        if (v.size() != r) throw Error("DimensionMismatch", "table value has rank " + std::to_string(v.size()));
        std::copy(v.begin(), v.end(), vals.begin() + static_cast<std::ptrdiff_t>(e * r));
        G.reduce(std::span<Coord>(vals.data() + e * r, r));
        st.at(e) = Cell::present;
    }

    std::vector<PresentationPtr> src_;
    std::shared_ptr<const PicardPresentation> P_;
    SlotIndexer ix_;
    std::size_t ra_ = 0, rb_ = 0;
    std::vector<Coord> obj_;
    std::vector<Cell> obj_st_;
    std::vector<std::vector<Coord>> iso_, tri_;
    std::vector<std::vector<Cell>> iso_st_, tri_st_;
};

/** Morphism θ: d1 ⇒ d2, one B-value per object tuple. */
struct DetMorphismData {
    DeterminantData d1, d2;
    std::vector<Coords> theta;
};

namespace detail {

inline std::string tuple_label(const DeterminantData& D, std::span<const Id> t) {
    std::string s = "(";
    for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + D.source(k).objects[t[k]];
    return s + ")";
}

/** "item in slot i at (..)" with the slot-i position shown as "-". */
inline std::string entry_label(const DeterminantData& D, std::size_t slot, const std::string& item, std::size_t rest) {
    std::string s = item;
    if (D.slots() == 1) return s;
    auto t = D.objects().with_slot(slot, rest, 0);
    s += " in slot " + std::to_string(slot + 1) + " at (";
    for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + (k == slot ? "-" : D.source(k).objects[t[k]]);
    return s + ")";
}

/** Counts passes locally and flushes them into the report on destruction. */
class Tally {
public:
    Tally(Report& r, std::string name) : r_(r), name_(std::move(name)) {}
    Tally(const Tally&) = delete;
    Tally& operator=(const Tally&) = delete;
    ~Tally() {
        r_.pass_many(name_, pass_);
        if (untestable_) r_.untestable(name_, untestable_);
    }
    template <class Loc>
    void operator()(bool ok, Loc&& loc) {
        if (ok) ++pass_;
        else r_.check_lazy(name_, false, loc);
    }
    void untestable() { ++untestable_; }

private:
    Report& r_;
    std::string name_;
    std::size_t pass_ = 0, untestable_ = 0;
};

/**
 * B-valued path sum. Every axiom is written once as "left path − right path";
 * undefined cells make the equation untestable, missing ones throw.
 */
class PathSum {
public:
    explicit PathSum(const DeterminantData& D) : D_(D), acc_(D.P().B().rank(), 0) {}
    PathSum& reset() {
        std::fill(acc_.begin(), acc_.end(), 0);
        defined_ = true;
        return *this;
    }
    PathSum& tri(std::size_t slot, Id t, std::size_t rest, Coord sign = 1) {
        std::size_t e = D_.entry(slot, t, rest);
        switch (D_.tri_state(slot, e)) {
        case Cell::missing:
            throw Error("MissingDatum", "no tri value for " + entry_label(D_, slot, D_.source(slot).triangles[t].id, rest));
        case Cell::undefined: defined_ = false; return *this;
        case Cell::present: add(D_.tri(slot, e), sign);
        }
        return *this;
    }
    PathSum& iso(std::size_t slot, Id f, std::size_t rest, Coord sign = 1) {
        std::size_t e = D_.entry(slot, f, rest);
        switch (D_.iso_state(slot, e)) {
        case Cell::missing:
            throw Error("MissingDatum", "no iso value for " + entry_label(D_, slot, D_.source(slot).isos[f].id, rest));
        case Cell::undefined: defined_ = false; return *this;
        case Cell::present: add(D_.iso(slot, e), sign);
        }
        return *this;
    }
    /** += sign · c(obj t1, obj t2). */
    PathSum& c(std::size_t t1, std::size_t t2, Coord sign = 1) {
        if (!obj_ok(t1) || !obj_ok(t2)) return *this;
        D_.P().add_c(acc_, D_.obj(t1), D_.obj(t2), sign);
        return *this;
    }
    bool defined() const { return defined_; }
    bool zero() const { return D_.P().B().is_zero(acc_); }

private:
    bool obj_ok(std::size_t t) {
        switch (D_.obj_state(t)) {
        case Cell::missing: throw Error("MissingDatum", "no obj value for " + tuple_label(D_, D_.objects().tuple(t)));
        case Cell::undefined: defined_ = false; return false;
        case Cell::present: return true;
        }
        return false;
    }
    void add(std::span<const Coord> v, Coord sign) {
        for (std::size_t k = 0; k < acc_.size(); ++k) acc_[k] += sign * v[k];
    }

    const DeterminantData& D_;
    std::vector<Coord> acc_;
    bool defined_ = true;
};

/** A-valued sum of obj entries. */
class ObjSum {
public:
    explicit ObjSum(const DeterminantData& D) : D_(D), acc_(D.P().A().rank(), 0) {}
    ObjSum& reset() {
        std::fill(acc_.begin(), acc_.end(), 0);
        defined_ = true;
        return *this;
    }
    ObjSum& add(std::size_t t, Coord sign = 1) {
        switch (D_.obj_state(t)) {
        case Cell::missing: throw Error("MissingDatum", "no obj value for " + tuple_label(D_, D_.objects().tuple(t)));
        case Cell::undefined: defined_ = false; return *this;
        case Cell::present:
            for (std::size_t k = 0; k < acc_.size(); ++k) acc_[k] += sign * D_.obj(t)[k];
        }
        return *this;
    }
    bool defined() const { return defined_; }
    bool zero() const { return D_.P().A().is_zero(acc_); }

private:
    const DeterminantData& D_;
    std::vector<Coord> acc_;
    bool defined_ = true;
};

template <class Sum, class Loc>
void record(Tally& t, const Sum& s, Loc&& loc) {
    if (!s.defined()) t.untestable();
    else t(s.zero(), loc);
}

/** Octahedron whose equation cancels formally once degenerate triangles are zero. */
inline bool trivial_octahedron(const TriangPresentation& T, const Octahedron& O) {
    std::vector<Id> l, r;
    for (int k : {1, 3})
        if (!T.is_degenerate(O.tri[k])) l.push_back(O.tri[k]);
    for (int k : {2, 0})
        if (!T.is_degenerate(O.tri[k])) r.push_back(O.tri[k]);
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    return l == r;
}

inline bool has_zero(const DeterminantData& D, std::span<const Id> t) {
    for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] == D.source(k).zero) return true;
    return false;
}

/** Tuple indices of slot-i objects at a fixed rest. */
struct SlotLine {
    std::size_t base, stride;
    std::size_t at(Id x) const { return base + x * stride; }
};
inline SlotLine slot_line(const DeterminantData& D, std::size_t slot, std::size_t rest) {
    const auto& ix = D.objects();
    return {ix.tuple_index(ix.with_slot(slot, rest, 0)), ix.stride(slot)};
}

/** Checks obj(…0…) = 0 and zero iso/tri values at a zero object in another slot. */
inline void check_zero_inputs(const DeterminantData& D, Report& r, const std::string& name) {
    Tally t(r, name);
    const auto& ix = D.objects();
    const auto& A = D.P().A();
    for (std::size_t k = 0; k < ix.tuple_count(); ++k) {
        auto tup = ix.tuple(k);
        if (!has_zero(D, tup)) continue;
        if (D.obj_state(k) == Cell::undefined) {
            t.untestable();
            continue;
        }
        if (D.obj_state(k) == Cell::missing) throw Error("MissingDatum", "no obj value for " + tuple_label(D, tup));
        t(A.is_zero(D.obj(k)), [&] { return "obj at " + tuple_label(D, tup); });
    }
    for (std::size_t i = 0; i < D.slots(); ++i) {
        const auto& S = D.source(i);
        for (std::size_t rest = 0; rest < D.others(i); ++rest) {
            auto tup = ix.with_slot(i, rest, S.zero);
            bool zero_elsewhere = false;
            for (std::size_t k = 0; k < tup.size(); ++k)
                if (k != i && tup[k] == D.source(k).zero) zero_elsewhere = true;
            if (!zero_elsewhere) continue;
            for (Id f = 0; f < S.isos.size(); ++f) {
                PathSum p(D);
                p.iso(i, f, rest);
                record(t, p, [&] { return "iso " + entry_label(D, i, S.isos[f].id, rest); });
            }
            for (Id tr = 0; tr < S.triangles.size(); ++tr) {
                PathSum p(D);
                p.tri(i, tr, rest);
                record(t, p, [&] { return "tri " + entry_label(D, i, S.triangles[tr].id, rest); });
            }
        }
    }
}

/** obj constant on iso classes, iso(id) = 0, iso(g∘f) = iso(g) + iso(f). */
inline void check_functoriality(const DeterminantData& D, Report& r, const std::string& obj_name,
                                const std::string& id_name, const std::string& comp_name) {
    Tally to(r, obj_name), ti(r, id_name), tc(r, comp_name);
    for (std::size_t i = 0; i < D.slots(); ++i) {
        const auto& S = D.source(i);
        for (std::size_t rest = 0; rest < D.others(i); ++rest) {
            auto line = slot_line(D, i, rest);
            ObjSum o(D);
            for (Id f = 0; f < S.isos.size(); ++f) {
                o.reset().add(line.at(S.isos[f].dst)).add(line.at(S.isos[f].src), -1);
                record(to, o, [&] { return entry_label(D, i, S.isos[f].id, rest); });
            }
            PathSum p(D);
            for (Id x = 0; x < S.objects.size(); ++x) {
                Id e = S.identity[x];
                if (e == kNone) continue;
                p.reset().iso(i, e, rest);
                record(ti, p, [&] { return entry_label(D, i, S.isos[e].id, rest); });
            }
            for (const auto& [gf, h] : S.compose) {
                p.reset().iso(i, h, rest).iso(i, gf.first, rest, -1).iso(i, gf.second, rest, -1);
                record(tc, p, [&] {
                    return entry_label(D, i, S.isos[gf.first].id + "∘" + S.isos[gf.second].id, rest);
                });
            }
        }
    }
}

} // namespace detail

/**
 * Per-slot axioms of a determinant: functoriality, additivity typing,
 * normalisation, naturality, commutativity and octahedron, at every fixed
 * tuple of the other slots.
 */
inline Report validate_determinant(const DeterminantData& D) {
    using namespace detail;
    Report r("check-det");
    check_functoriality(D, r, "obj-functoriality", "iso-identity", "iso-composition");
    check_zero_inputs(D, r, "normalization");
    for (std::size_t i = 0; i < D.slots(); ++i) {
        const auto& S = D.source(i);
        Tally typing(r, "additivity-typing"), norm(r, "normalization"), nat(r, "naturality"),
            comm(r, "commutativity"), oct(r, "octahedron");
        for (std::size_t rest = 0; rest < D.others(i); ++rest) {
            auto line = slot_line(D, i, rest);
            ObjSum o(D);
            PathSum p(D);
            for (Id t = 0; t < S.triangles.size(); ++t) {
                const auto& T = S.triangles[t];
                o.reset().add(line.at(T.y)).add(line.at(T.x), -1).add(line.at(T.z), -1);
                record(typing, o, [&] { return entry_label(D, i, T.id, rest); });
                if (S.is_degenerate(t)) {
                    p.reset().tri(i, t, rest);
                    record(norm, p, [&] { return "degenerate " + entry_label(D, i, T.id, rest); });
                }
            }
            // iso(y) + tri(Δ) = tri(Δ′) + iso(z) + iso(x)
            for (const auto& I : S.triangle_isos) {
                p.reset().iso(i, I.iso_y, rest).tri(i, I.from, rest);
                p.tri(i, I.to, rest, -1).iso(i, I.iso_z, rest, -1).iso(i, I.iso_x, rest, -1);
                record(nat, p, [&] { return entry_label(D, i, I.id, rest); });
            }
            // tri(Δ2) = tri(Δ1) + c(x, y)
            for (const auto& E : S.sums) {
                p.reset().tri(i, E.tri2, rest).tri(i, E.tri1, rest, -1).c(line.at(E.x), line.at(E.y), -1);
                record(comm, p, [&] {
                    return entry_label(D, i, "sum(" + S.objects[E.x] + "," + S.objects[E.y] + ")", rest);
                });
            }
            // tri(Δ2) + tri(Δ4) = tri(Δ3) + tri(Δ1)
            for (const auto& O : S.octahedra) {
                p.reset().tri(i, O.tri[1], rest).tri(i, O.tri[3], rest);
                p.tri(i, O.tri[2], rest, -1).tri(i, O.tri[0], rest, -1);
                record(oct, p, [&] { return entry_label(D, i, O.id, rest); });
            }
        }
    }
    return r;
}

/**
 * validate_determinant plus, for each pair of slots, the two-triangles
 * hexagon and the triangle-function square.
 */
inline Report validate_multideterminant(const DeterminantData& D) {
    using namespace detail;
    Report r = validate_determinant(D);
    r.set_command("check-multidet");
    const auto& ix = D.objects();
    const std::size_t n = D.slots();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto &Si = D.source(i), &Sj = D.source(j);
            // objects outside {i, j}
            std::vector<std::size_t> rc;
            for (std::size_t k = 0; k < n; ++k)
                if (k != i && k != j) rc.push_back(ix.count(k));
            SlotIndexer rest_ix(rc);
            for (std::size_t q = 0; q < rest_ix.tuple_count(); ++q) {
                auto rest = rest_ix.tuple(q);
                auto full = [&](Id a, Id b) {
                    std::vector<Id> t(n);
                    for (std::size_t k = 0, m = 0; k < n; ++k) t[k] = k == i ? a : k == j ? b : rest[m++];
                    return t;
                };
                // others-index of slot i with slot j = w, and of slot j with slot i = w
                std::vector<std::size_t> oi(Sj.objects.size()), oj(Si.objects.size());
                for (Id w = 0; w < Sj.objects.size(); ++w) oi[w] = ix.others_index(i, full(Si.zero, w));
                for (Id w = 0; w < Si.objects.size(); ++w) oj[w] = ix.others_index(j, full(w, Sj.zero));
                auto obj_t = [&](Id a, Id b) { return ix.tuple_index(full(a, b)); };
                auto where = [&](const std::string& a, const std::string& b) {
                    std::string s = "(" + a + " in slot " + std::to_string(i + 1) + ", " + b + " in slot " +
                                    std::to_string(j + 1) + ")";
                    if (n > 2) s += " at " + tuple_label(D, full(Si.zero, Sj.zero));
                    return s;
                };
                PathSum p(D);
                if (i < j) {
                    Tally two(r, "two-triangles");
                    for (Id a = 0; a < Si.triangles.size(); ++a) {
                        const auto& Ti = Si.triangles[a];
                        for (Id b = 0; b < Sj.triangles.size(); ++b) {
                            const auto& Tj = Sj.triangles[b];
                            if (!D.in_scope(i, j, a, b)) {
                                two.untestable();
                                continue;
                            }
                            p.reset().tri(i, a, oi[Tj.z]).tri(i, a, oi[Tj.x]).tri(j, b, oj[Ti.y]);
                            p.c(obj_t(Ti.x, Tj.z), obj_t(Ti.z, Tj.x), -1);
                            p.tri(j, b, oj[Ti.z], -1).tri(j, b, oj[Ti.x], -1).tri(i, a, oi[Tj.y], -1);
                            record(two, p, [&] { return where(Ti.id, Tj.id); });
                        }
                    }
                }
                // iso f: u→v in slot i against Δ in slot j
                Tally tf(r, "triangle-function");
                for (Id f = 0; f < Si.isos.size(); ++f) {
                    const auto& F = Si.isos[f];
                    for (Id b = 0; b < Sj.triangles.size(); ++b) {
                        const auto& Tj = Sj.triangles[b];
                        p.reset().iso(i, f, oi[Tj.y]).tri(j, b, oj[F.src]);
                        p.tri(j, b, oj[F.dst], -1).iso(i, f, oi[Tj.z], -1).iso(i, f, oi[Tj.x], -1);
                        record(tf, p, [&] {
                            return i < j ? where(F.id, Tj.id)
                                         : "(" + Tj.id + " in slot " + std::to_string(j + 1) + ", " + F.id +
                                               " in slot " + std::to_string(i + 1) + ")";
                        });
                    }
                }
            }
        }
    return r;
}

namespace detail {

/** Loads a value into a cube slot; false when the cell is undefined. */
class CubeFiller {
public:
    explicit CubeFiller(const DeterminantData& D) : D_(D) {}
    bool vertex(Cube& C, std::size_t v, std::size_t tuple) {
        switch (D_.obj_state(tuple)) {
        case Cell::missing:
            throw Error("MissingDatum", "no obj value for " + tuple_label(D_, D_.objects().tuple(tuple)));
        case Cell::undefined: return false;
        case Cell::present: C.set_vertex(v, D_.obj(tuple));
        }
        return true;
    }
    bool f(Cube& C, std::size_t dir, std::size_t res, std::size_t slot, Id t, std::size_t rest) {
        std::size_t e = D_.entry(slot, t, rest);
        switch (D_.tri_state(slot, e)) {
        case Cell::missing:
            throw Error("MissingDatum",
                        "no tri value for " + entry_label(D_, slot, D_.source(slot).triangles[t].id, rest));
        case Cell::undefined: return false;
        case Cell::present: C.set_f(dir, res, D_.tri(slot, e));
        }
        return true;
    }
    bool iso(Coords& out, std::size_t slot, Id f, std::size_t rest) {
        std::size_t e = D_.entry(slot, f, rest);
        switch (D_.iso_state(slot, e)) {
        case Cell::missing:
            throw Error("MissingDatum", "no iso value for " + entry_label(D_, slot, D_.source(slot).isos[f].id, rest));
        case Cell::undefined: return false;
        case Cell::present: out.assign(D_.iso(slot, e).begin(), D_.iso(slot, e).end());
        }
        return true;
    }

private:
    const DeterminantData& D_;
};

/** Image 1-cube of a slot triangle: S(-1)=x, S(0)=y, S(1)=z, f = tri. */
inline bool image_1cube(CubeFiller& fill, Cube& C, const TriangPresentation& S, std::size_t slot, Id t,
                        std::size_t rest, const SlotLine& line) {
    const auto& T = S.triangles[t];
    return fill.vertex(C, 0, line.at(T.x)) && fill.vertex(C, 1, line.at(T.y)) && fill.vertex(C, 2, line.at(T.z)) &&
           fill.f(C, 0, 0, slot, t, rest);
}

inline std::string violation_detail(const std::optional<std::string>& v) { return v ? *v : std::string(); }

} // namespace detail

/**
 * Cubical formulation: image cubes of objects, triangles, certified
 * nine-diagrams and mixed pairs must be cubes; morphisms of triangles must map
 * to cube morphisms; degenerate triangles to degenerate cubes; zero inputs to 0.
 */
inline Report validate_cubical_determinant(const DeterminantData& D) {
    using namespace detail;
    Report r("check-cubical-det");
    check_zero_inputs(D, r, "zero-inputs");
    check_functoriality(D, r, "functoriality", "functoriality", "functoriality");
    const auto& P = D.target();
    const auto& ix = D.objects();
    const std::size_t n = D.slots();
    CubeFiller fill(D);
    Cube c0(P, 0), c1(P, 1), c1b(P, 1), c2(P, 2);
    std::vector<Coords> phi(3);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& S = D.source(i);
        Tally one(r, "1-cube"), deg(r, "degeneracy"), mor(r, "cube-morphism"), nine(r, "nine-diagram"),
            face(r, "face-compatibility");
        for (std::size_t rest = 0; rest < D.others(i); ++rest) {
            auto line = slot_line(D, i, rest);
            for (Id t = 0; t < S.triangles.size(); ++t) {
                const auto& T = S.triangles[t];
                if (!image_1cube(fill, c1, S, i, t, rest, line)) {
                    one.untestable();
                    continue;
                }
                auto v = first_cube_violation(c1);
                one(!v, [&] { return entry_label(D, i, T.id, rest); });
                if (!S.is_degenerate(t)) continue;
                int alpha = (T.z == S.zero && T.x == T.y) ? 1 : -1;
                Id base = alpha == 1 ? T.x : T.z;
                if (!fill.vertex(c0, 0, line.at(base))) {
                    deg.untestable();
                    continue;
                }
                deg(degeneracy(c0, 1, alpha) == c1, [&] { return entry_label(D, i, T.id, rest); });
            }
            for (const auto& I : S.triangle_isos) {
                bool ok = image_1cube(fill, c1, S, i, I.from, rest, line) &&
                          image_1cube(fill, c1b, S, i, I.to, rest, line) && fill.iso(phi[0], i, I.iso_x, rest) &&
                          fill.iso(phi[1], i, I.iso_y, rest) && fill.iso(phi[2], i, I.iso_z, rest);
                if (!ok) {
                    mor.untestable();
                    continue;
                }
                mor(is_cube_morphism(c1, c1b, phi), [&] { return entry_label(D, i, I.id, rest); });
            }
            for (const auto& N : S.nine_diagrams) {
                if (!N.certificate) {
                    r.skip("nine-diagram", entry_label(D, i, N.id, rest), "MissingVerdierCertificate");
                    continue;
                }
                bool ok = true;
                for (int a2 = 0; a2 < 3 && ok; ++a2)
                    for (int a1 = 0; a1 < 3 && ok; ++a1) ok = fill.vertex(c2, a1 + 3 * a2, line.at(N.grid[a2][a1]));
                for (int k = 0; k < 3 && ok; ++k)
                    ok = fill.f(c2, 0, k, i, N.rows[k], rest) && fill.f(c2, 1, k, i, N.cols[k], rest);
                if (!ok) {
                    nine.untestable();
                    continue;
                }
                // faces of the grid cube are the images of its rows and columns
                bool faces = true;
                for (int k = 0; k < 3; ++k) {
                    const auto &R = S.triangles[N.rows[k]], &C = S.triangles[N.cols[k]];
                    faces = faces && R.x == N.grid[k][0] && R.y == N.grid[k][1] && R.z == N.grid[k][2] &&
                            C.x == N.grid[0][k] && C.y == N.grid[1][k] && C.z == N.grid[2][k];
                }
                face(faces, [&] { return entry_label(D, i, N.id, rest); });
                auto v = first_cube_violation(c2);
                nine(!v, [&] { return entry_label(D, i, N.id, rest) + " " + violation_detail(v); });
            }
        }
    }
    // mixed grids and morphisms induced by isos in another slot
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto &Si = D.source(i), &Sj = D.source(j);
            std::vector<std::size_t> rc;
            for (std::size_t k = 0; k < n; ++k)
                if (k != i && k != j) rc.push_back(ix.count(k));
            SlotIndexer rest_ix(rc);
            Tally mixed(r, "mixed-grid"), induced(r, "induced-morphism");
            for (std::size_t q = 0; q < rest_ix.tuple_count(); ++q) {
                auto rest = rest_ix.tuple(q);
                auto full = [&](Id a, Id b) {
                    std::vector<Id> t(n);
                    for (std::size_t k = 0, m = 0; k < n; ++k) t[k] = k == i ? a : k == j ? b : rest[m++];
                    return t;
                };
                auto oj = [&](Id w) { return ix.others_index(j, full(w, Sj.zero)); };
                auto oi = [&](Id w) { return ix.others_index(i, full(Si.zero, w)); };
                auto line_j = [&](Id w) { return slot_line(D, j, oj(w)); };
                if (i < j) {
                    for (Id a = 0; a < Si.triangles.size(); ++a) {
                        const auto& Ti = Si.triangles[a];
                        const std::array<Id, 3> obi{Ti.x, Ti.y, Ti.z};
                        for (Id b = 0; b < Sj.triangles.size(); ++b) {
                            const auto& Tj = Sj.triangles[b];
                            const std::array<Id, 3> obj{Tj.x, Tj.y, Tj.z};
                            bool ok = D.in_scope(i, j, a, b);
                            for (int a2 = 0; a2 < 3 && ok; ++a2)
                                for (int a1 = 0; a1 < 3 && ok; ++a1)
                                    ok = fill.vertex(c2, a1 + 3 * a2, ix.tuple_index(full(obi[a1], obj[a2])));
                            for (int k = 0; k < 3 && ok; ++k)
                                ok = fill.f(c2, 0, k, i, a, oi(obj[k])) && fill.f(c2, 1, k, j, b, oj(obi[k]));
                            if (!ok) {
                                mixed.untestable();
                                continue;
                            }
                            mixed(!first_cube_violation(c2), [&] {
                                return "(" + Ti.id + " in slot " + std::to_string(i + 1) + ", " + Tj.id + " in slot " +
                                       std::to_string(j + 1) + ")";
                            });
                        }
                    }
                }
                for (Id f = 0; f < Si.isos.size(); ++f) {
                    const auto& F = Si.isos[f];
                    auto la = line_j(F.src), lb = line_j(F.dst);
                    for (Id b = 0; b < Sj.triangles.size(); ++b) {
                        const auto& Tj = Sj.triangles[b];
                        bool ok = image_1cube(fill, c1, Sj, j, b, oj(F.src), la) &&
                                  image_1cube(fill, c1b, Sj, j, b, oj(F.dst), lb) &&
                                  fill.iso(phi[0], i, f, oi(Tj.x)) && fill.iso(phi[1], i, f, oi(Tj.y)) &&
                                  fill.iso(phi[2], i, f, oi(Tj.z));
                        if (!ok) {
                            induced.untestable();
                            continue;
                        }
                        induced(is_cube_morphism(c1, c1b, phi), [&] {
                            return "(" + F.id + " in slot " + std::to_string(i + 1) + ", " + Tj.id + " in slot " +
                                   std::to_string(j + 1) + ")";
                        });
                    }
                }
            }
        }
    return r;
}

/**
 * Runs both formulations. Valid iff their verdicts agree; a split verdict is
 * diagnosed as a battery gap (an axiom instance with no cube, or vice versa)
 * or as a bug, naming the discriminating item.
 */
inline Report cross_check_definitions(const DeterminantData& D) {
    Report r("cross-check");
    Report a = validate_multideterminant(D), c = validate_cubical_determinant(D);
    const bool pa = a.ok(), pc = c.ok();
    r.extra()["axiomatic"] = pa ? "pass" : "fail";
    r.extra()["cubical"] = pc ? "pass" : "fail";
    r.extra()["verdict"] = pa == pc ? (pa ? "consistent-pass" : "consistent-fail") : "split";
    for (const auto& k : a.failing_checks()) r.note("axiomatic", k, std::to_string(a.failures(k)) + " failures");
    for (const auto& k : c.failing_checks()) r.note("cubical", k, std::to_string(c.failures(k)) + " failures");
    r.check("consistency", pa == pc, "verdicts", pa == pc ? "" : "axiomatic and cubical verdicts differ");
    if (pa == pc) return r;
    // battery gaps
    bool gap = false;
    for (std::size_t i = 0; i < D.slots(); ++i) {
        const auto& S = D.source(i);
        for (const auto& E : S.sums)
            if (E.nine == kNone || !S.nine_diagrams.at(E.nine).certificate) {
                gap = true;
                r.note("diagnosis", "battery-gap", "sum(" + S.objects[E.x] + "," + S.objects[E.y] +
                                                       ") has no certified commutativity nine-diagram");
            }
        for (Id o = 0; o < S.octahedra.size(); ++o)
            if (!detail::trivial_octahedron(S, S.octahedra[o]) && !S.cube_of_octahedron(o)) {
                bool cited = false;
                for (const auto& N : S.nine_diagrams)
                    if (N.certificate && N.certificate->oct[2] == o && N.from_octahedron == kNone) cited = true;
                if (cited) continue;
                gap = true;
                r.note("diagnosis", "battery-gap", "octahedron " + S.octahedra[o].id + " has no 2-cube");
            }
    }
    const Report& failing = pa ? c : a;
    for (const auto& it : failing.sorted_items())
        if (it.verdict == Verdict::fail) {
            r.note("diagnosis", gap ? "discriminating-item" : "bug", it.check + " at " + it.location);
            break;
        }
    return r;
}

/** Pointwise sum with the cube-sum correction c(obj₂ z, obj₁ x) on triangles. */
inline DeterminantData sum_determinants(const DeterminantData& d1, const DeterminantData& d2) {
    if (!d1.same_signature(d2)) throw Error("MismatchedSignature", "determinants have different sources or targets");
    DeterminantData out(d1.sources(), d1.target());
    out.name = d1.name + "+" + d2.name;
    out.out_of_scope = d1.out_of_scope;
    out.out_of_scope.insert(d2.out_of_scope.begin(), d2.out_of_scope.end());
    const auto& A = d1.P().A();
    const auto& B = d1.P().B();
    auto both = [](Cell a, Cell b) {
        if (a == Cell::undefined || b == Cell::undefined) return Cell::undefined;
        if (a == Cell::missing || b == Cell::missing) return Cell::missing;
        return Cell::present;
    };
    const auto& ix = d1.objects();
    for (std::size_t t = 0; t < ix.tuple_count(); ++t) {
        Cell s = both(d1.obj_state(t), d2.obj_state(t));
        if (s == Cell::present) out.set_obj(t, A.add(d1.obj(t), d2.obj(t)));
        else if (s == Cell::undefined) out.set_obj_undefined(t);
    }
    for (std::size_t i = 0; i < d1.slots(); ++i) {
        const auto& S = d1.source(i);
        for (std::size_t e = 0; e < d1.iso_entries(i); ++e) {
            Cell s = both(d1.iso_state(i, e), d2.iso_state(i, e));
            if (s == Cell::present) out.set_iso(i, e, B.add(d1.iso(i, e), d2.iso(i, e)));
            else if (s == Cell::undefined) out.set_iso_undefined(i, e);
        }
        for (std::size_t rest = 0; rest < d1.others(i); ++rest) {
            auto line = detail::slot_line(d1, i, rest);
            for (Id t = 0; t < S.triangles.size(); ++t) {
                std::size_t e = d1.entry(i, t, rest);
                const auto& T = S.triangles[t];
                std::size_t tz = line.at(T.z), tx = line.at(T.x);
                Cell s = both(both(d1.tri_state(i, e), d2.tri_state(i, e)), both(d2.obj_state(tz), d1.obj_state(tx)));
                if (s == Cell::undefined) {
                    out.set_tri_undefined(i, e);
                } else if (s == Cell::present) {
                    Coords v = B.add(d1.tri(i, e), d2.tri(i, e));
                    d1.P().add_c(v, d2.obj(tz), d1.obj(tx));
                    out.set_tri(i, e, v);
                }
            }
        }
    }
    return out;
}

/** tri += θ(y) − θ(x) − θ(z), iso += θ(dst) − θ(src); θ per object tuple. */
inline DeterminantData twist_determinant(const DeterminantData& D, const std::vector<Coords>& theta) {
    if (theta.size() != D.objects().tuple_count()) throw Error("DimensionMismatch", "twist needs one value per tuple");
    DeterminantData out = D;
    const auto& B = D.P().B();
    for (std::size_t i = 0; i < D.slots(); ++i) {
        const auto& S = D.source(i);
        for (std::size_t rest = 0; rest < D.others(i); ++rest) {
            auto line = detail::slot_line(D, i, rest);
            for (Id t = 0; t < S.triangles.size(); ++t) {
                std::size_t e = D.entry(i, t, rest);
                if (D.tri_state(i, e) != Cell::present) continue;
                const auto& T = S.triangles[t];
                Coords v(D.tri(i, e).begin(), D.tri(i, e).end());
                B.axpy(v, 1, theta[line.at(T.y)]);
                B.axpy(v, -1, theta[line.at(T.x)]);
                B.axpy(v, -1, theta[line.at(T.z)]);
                out.set_tri(i, e, v);
            }
            for (Id f = 0; f < S.isos.size(); ++f) {
                std::size_t e = D.entry(i, f, rest);
                if (D.iso_state(i, e) != Cell::present) continue;
                Coords v(D.iso(i, e).begin(), D.iso(i, e).end());
                B.axpy(v, 1, theta[line.at(S.isos[f].dst)]);
                B.axpy(v, -1, theta[line.at(S.isos[f].src)]);
                out.set_iso(i, e, v);
            }
        }
    }
    return out;
}

/** All tables zero. */
inline DeterminantData zero_determinant(std::vector<PresentationPtr> sources, std::shared_ptr<const PicardPresentation> P) {
    DeterminantData D(std::move(sources), std::move(P));
    D.name = "zero";
    D.builtin = {{"generator", "zero"}};
    const Coords za = D.P().A().zero(), zb = D.P().B().zero();
    for (std::size_t t = 0; t < D.objects().tuple_count(); ++t) D.set_obj(t, za);
    for (std::size_t i = 0; i < D.slots(); ++i) {
        for (std::size_t e = 0; e < D.iso_entries(i); ++e) D.set_iso(i, e, zb);
        for (std::size_t e = 0; e < D.tri_entries(i); ++e) D.set_tri(i, e, zb);
    }
    return D;
}

/** (Z, Z/2, c(x,y) = xy): the target of the Euler determinant. */
inline std::shared_ptr<const PicardPresentation> euler_target() {
    static const auto P = std::make_shared<const PicardPresentation>(FGAbelianGroup({0}), FGAbelianGroup({2}),
                                                                     std::vector<std::vector<Coords>>{{{1}}});
    return P;
}

/**
 * Euler determinant of a graded-lines presentation: obj = Euler class,
 * iso(neg_x) = dim x mod 2, tri = shuffle sign (see euler_signs). With
 * `naive`, iso and tri are all zero instead.
 */
inline DeterminantData euler_determinant(PresentationPtr T, bool naive = false) {
    DeterminantData D({T}, euler_target());
    D.name = naive ? "euler-naive" : "euler";
    D.builtin = {{"generator", D.name}};
    const GradedWindow w = window_of(*T);
    for (Id o = 0; o < T->objects.size(); ++o) D.set_obj(o, Coords{w.euler(o)});
    for (Id f = 0; f < T->isos.size(); ++f) {
        const auto& I = T->isos[f];
        Coord v = 0;
        if (!naive && I.id.rfind("neg:", 0) == 0) v = w.total(I.src) & 1;
        else if (!naive && T->identity[I.src] != f) continue;  // unknown iso: left missing
        D.set_iso(0, f, Coords{v});
    }
    if (naive) {
        for (Id t = 0; t < T->triangles.size(); ++t) D.set_tri(0, t, Coords{0});
    } else {
        auto s = euler_signs(*T);
        for (Id t = 0; t < T->triangles.size(); ++t) D.set_tri(0, t, Coords{s[t]});
    }
    return D;
}

/** Pullback of a one-variable determinant on F's target along F. */
inline DeterminantData compose_with_multiexact(const DeterminantData& det, const TriFunctorData& F) {
    if (det.slots() != 1) throw Error("MismatchedSignature", "compose needs a one-variable determinant");
    if (det.sources()[0] != F.target && !DeterminantData::same_presentation(det.source(0), *F.target))
        throw Error("MismatchedSignature", "determinant is not defined on the functor's target");
    if (!check_functor_verdier_admission(F).ok())
        throw Error("VerdierAdmissionMissing", F.name + " does not admit Verdier structures on its battery");
    DeterminantData out(F.sources, det.target());
    out.name = det.name + "∘" + F.name;
    for (const auto& [key, nd] : F.verdier)
        if (nd == kNone) out.out_of_scope.insert({key[0], key[1], key[2], key[3]});
    const auto& ix = out.objects();
    for (std::size_t t = 0; t < ix.tuple_count(); ++t) {
        Id o = F.obj[t];
        if (o == kNone || det.obj_state(o) == Cell::undefined) out.set_obj_undefined(t);
        else if (det.obj_state(o) == Cell::present) out.set_obj(t, det.obj(o));
    }
    for (std::size_t i = 0; i < F.sources.size(); ++i) {
        for (std::size_t e = 0; e < out.iso_entries(i); ++e) {
            Id g = F.iso[i][e];
            if (g == kNone || det.iso_state(0, g) == Cell::undefined) out.set_iso_undefined(i, e);
            else if (det.iso_state(0, g) == Cell::present) out.set_iso(i, e, det.iso(0, g));
        }
        std::vector<char> in_battery(F.sources[i]->triangles.size(), 0);
        for (Id t : F.battery[i]) in_battery[t] = 1;
        const std::size_t oc = out.others(i);
        for (std::size_t e = 0; e < out.tri_entries(i); ++e) {
            Id g = in_battery[e / oc] ? F.tri[i][e] : kNone;
            if (g == kNone || det.tri_state(0, g) == Cell::undefined) out.set_tri_undefined(i, e);
            else if (det.tri_state(0, g) == Cell::present) out.set_tri(i, e, det.tri(0, g));
        }
    }
    return out;
}

/** θ(y) + tri₁(Δ) = tri₂(Δ) + θ(z) + θ(x) per battery triangle, and naturality on isos. */
inline Report check_det_morphism(const DetMorphismData& m) {
    Report r("check-det-morphism");
    const auto &d1 = m.d1, &d2 = m.d2;
    if (!d1.same_signature(d2)) throw Error("MismatchedSignature", "morphism between different signatures");
    const auto& ix = d1.objects();
    if (m.theta.size() != ix.tuple_count()) throw Error("DimensionMismatch", "theta needs one value per tuple");
    for (std::size_t t = 0; t < ix.tuple_count(); ++t) {
        if (d1.obj_state(t) != Cell::present || d2.obj_state(t) != Cell::present) continue;
        if (!d1.P().A().equal(d1.obj(t), d2.obj(t)))
            throw Error("ObjMismatch", "obj differs at " + detail::tuple_label(d1, ix.tuple(t)));
    }
    const auto& B = d1.P().B();
    Coords acc = B.zero();
    for (std::size_t i = 0; i < d1.slots(); ++i) {
        const auto& S = d1.source(i);
        detail::Tally tt(r, "triangle-compatibility"), ti(r, "iso-naturality");
        for (std::size_t rest = 0; rest < d1.others(i); ++rest) {
            auto line = detail::slot_line(d1, i, rest);
            for (Id t = 0; t < S.triangles.size(); ++t) {
                std::size_t e = d1.entry(i, t, rest);
                if (d1.tri_state(i, e) != Cell::present || d2.tri_state(i, e) != Cell::present) {
                    tt.untestable();
                    continue;
                }
                const auto& T = S.triangles[t];
                std::fill(acc.begin(), acc.end(), 0);
                B.axpy(acc, 1, m.theta[line.at(T.y)]);
                B.axpy(acc, 1, d1.tri(i, e));
                B.axpy(acc, -1, d2.tri(i, e));
                B.axpy(acc, -1, m.theta[line.at(T.z)]);
                B.axpy(acc, -1, m.theta[line.at(T.x)]);
                tt(B.is_zero(acc), [&] { return detail::entry_label(d1, i, T.id, rest); });
            }
            for (Id f = 0; f < S.isos.size(); ++f) {
                std::size_t e = d1.entry(i, f, rest);
                if (d1.iso_state(i, e) != Cell::present || d2.iso_state(i, e) != Cell::present) {
                    ti.untestable();
                    continue;
                }
                std::fill(acc.begin(), acc.end(), 0);
                B.axpy(acc, 1, m.theta[line.at(S.isos[f].dst)]);
                B.axpy(acc, 1, d1.iso(i, e));
                B.axpy(acc, -1, d2.iso(i, e));
                B.axpy(acc, -1, m.theta[line.at(S.isos[f].src)]);
                ti(B.is_zero(acc), [&] { return detail::entry_label(d1, i, S.isos[f].id, rest); });
            }
        }
    }
    return r;
}

/**
 * Checks a candidate (f, α) for the universal property: f∘det_u ⇒ D via α on
 * every battery triangle and iso. Uniqueness is not decided.
 */
inline Report check_universal_factorization(const DeterminantData& det_u, const DeterminantData& D,
                                            const PicardFunctorData& f, const std::vector<Coords>& alpha) {
    Report r("check-factorization");
    if (f.arity() != 1 || !(f.sources[0] == det_u.P()) || !(f.target == D.P()) || det_u.slots() != D.slots())
        throw Error("SignatureMismatch", "functor does not go from the universal target to D's target");
    for (std::size_t i = 0; i < D.slots(); ++i)
        if (det_u.sources()[i] != D.sources()[i] &&
            !DeterminantData::same_presentation(det_u.source(i), D.source(i)))
            throw Error("SignatureMismatch", "determinants have different sources");
    const auto& ix = D.objects();
    if (alpha.size() != ix.tuple_count()) throw Error("DimensionMismatch", "alpha needs one value per tuple");
    f.check_shape();
    const auto& B = D.P().B();
    const auto& A = D.P().A();
    r.note("uniqueness", "candidate", "only the given pair is checked; uniqueness is not decided");
    auto fobj = [&](std::size_t t) { return f.eval_f0({Coords(det_u.obj(t).begin(), det_u.obj(t).end())}); };
    {
        detail::Tally to(r, "obj-agreement");
        for (std::size_t t = 0; t < ix.tuple_count(); ++t) {
            if (det_u.obj_state(t) != Cell::present || D.obj_state(t) != Cell::present) {
                to.untestable();
                continue;
            }
            to(A.equal(fobj(t), D.obj(t)), [&] { return detail::tuple_label(D, ix.tuple(t)); });
        }
    }
    for (std::size_t i = 0; i < D.slots(); ++i) {
        const auto& S = D.source(i);
        detail::Tally tt(r, "triangle-factorization"), ti(r, "iso-factorization");
        for (std::size_t rest = 0; rest < D.others(i); ++rest) {
            auto line = detail::slot_line(D, i, rest);
            for (Id t = 0; t < S.triangles.size(); ++t) {
                std::size_t e = D.entry(i, t, rest);
                const auto& T = S.triangles[t];
                std::size_t tx = line.at(T.x), ty = line.at(T.y), tz = line.at(T.z);
                bool ok = det_u.tri_state(i, e) == Cell::present && D.tri_state(i, e) == Cell::present;
                for (auto o : {tx, tz}) ok = ok && det_u.obj_state(o) == Cell::present;
                if (!ok) {
                    tt.untestable();
                    continue;
                }
                // α(y) + f(tri_u) + m(obj_u z, obj_u x) = tri_D + α(z) + α(x)
                Coords acc = f.eval_f1(0, {A.zero()}, det_u.tri(i, e));
                B.axpy(acc, 1, f.eval_m(0, {A.zero()}, det_u.obj(tz), det_u.obj(tx)));
                B.axpy(acc, 1, alpha[ty]);
                B.axpy(acc, -1, D.tri(i, e));
                B.axpy(acc, -1, alpha[tz]);
                B.axpy(acc, -1, alpha[tx]);
                tt(B.is_zero(acc), [&] { return detail::entry_label(D, i, T.id, rest); });
            }
            for (Id g = 0; g < S.isos.size(); ++g) {
                std::size_t e = D.entry(i, g, rest);
                if (det_u.iso_state(i, e) != Cell::present || D.iso_state(i, e) != Cell::present) {
                    ti.untestable();
                    continue;
                }
                Coords acc = f.eval_f1(0, {A.zero()}, det_u.iso(i, e));
                B.axpy(acc, 1, alpha[line.at(S.isos[g].dst)]);
                B.axpy(acc, -1, D.iso(i, e));
                B.axpy(acc, -1, alpha[line.at(S.isos[g].src)]);
                ti(B.is_zero(acc), [&] { return detail::entry_label(D, i, S.isos[g].id, rest); });
            }
        }
    }
    return r;
}

struct RandomDetOptions {
    int max_multiple = 3;  // base added 0..max_multiple times
    int max_defects = 3;
    bool twist = true;
};

/** Record of one seeded defect. */
struct Defect {
    std::string table;  // "obj", "iso", "tri"
    std::size_t slot = 0, entry = 0;
};

/**
 * Random instance around a valid base: k·base (via sums), a random natural
 * twist vanishing on zero tuples, then up to max_defects perturbed cells.
 */
inline DeterminantData random_determinant(const DeterminantData& base, std::mt19937_64& rng,
                                          RandomDetOptions opt = {}, std::vector<Defect>* defects = nullptr) {
    DeterminantData D = zero_determinant(base.sources(), base.target());
    D.out_of_scope = base.out_of_scope;
    int k = std::uniform_int_distribution<int>(0, opt.max_multiple)(rng);
    for (int s = 0; s < k; ++s) D = sum_determinants(D, base);
    const auto& ix = D.objects();
    const auto& B = D.P().B();
    if (opt.twist && B.rank()) {
        std::vector<Coords> theta(ix.tuple_count(), B.zero());
        for (std::size_t t = 0; t < ix.tuple_count(); ++t)
            if (!detail::has_zero(D, ix.tuple(t))) theta[t] = random_element(B, rng, 2);
        D = twist_determinant(D, theta);
    }
    int nd = std::uniform_int_distribution<int>(0, opt.max_defects)(rng);
    for (int d = 0; d < nd && B.rank(); ++d) {
        int kind = std::uniform_int_distribution<int>(0, 9)(rng);
        std::size_t slot = std::uniform_int_distribution<std::size_t>(0, D.slots() - 1)(rng);
        Coords delta;
        do delta = random_element(B, rng, 2);
        while (B.is_zero(delta));
        if (kind == 0) {
            Coords da;
            do da = random_element(D.P().A(), rng, 2);
            while (D.P().A().is_zero(da));
            std::size_t t = std::uniform_int_distribution<std::size_t>(0, ix.tuple_count() - 1)(rng);
            if (D.obj_state(t) != Cell::present) continue;
            D.set_obj(t, D.P().A().add(D.obj(t), da));
            if (defects) defects->push_back({"obj", 0, t});
        } else if (kind <= 2 && D.iso_entries(slot)) {
            std::size_t e = std::uniform_int_distribution<std::size_t>(0, D.iso_entries(slot) - 1)(rng);
            if (D.iso_state(slot, e) != Cell::present) continue;
            D.set_iso(slot, e, B.add(D.iso(slot, e), delta));
            if (defects) defects->push_back({"iso", slot, e});
        } else if (D.tri_entries(slot)) {
            std::size_t e = std::uniform_int_distribution<std::size_t>(0, D.tri_entries(slot) - 1)(rng);
            if (D.tri_state(slot, e) != Cell::present) continue;
            D.set_tri(slot, e, B.add(D.tri(slot, e), delta));
            if (defects) defects->push_back({"tri", slot, e});
        }
    }
    D.name = "random";
    return D;
}

} // namespace multidet
