#pragma once

#include <string>
#include <vector>

#include "multidet/group.hpp"
#include "multidet/matrix.hpp"
#include "multidet/report.hpp"

namespace multidet {

/**
 * @brief Chain complex of free abelian groups of finite rank.
 *
 * boundaries[k] maps level k+1 to level k (so boundaries[0] is ∂₁).
 */
class ChainComplexZ {
public:
    ChainComplexZ() = default;
    ChainComplexZ(std::vector<std::size_t> levels, std::vector<IntMatrix> boundaries)
        : levels_(std::move(levels)), boundaries_(std::move(boundaries)) {
        if (!levels_.empty() && boundaries_.size() + 1 != levels_.size())
            throw Error("DimensionMismatch", "need one boundary per adjacent pair of levels");
        for (std::size_t k = 0; k < boundaries_.size(); ++k)
            if (boundaries_[k].rows() != levels_[k] || boundaries_[k].cols() != levels_[k + 1])
                throw Error("DimensionMismatch", "boundary " + std::to_string(k + 1) + " has wrong shape");
    }

    std::size_t top() const { return levels_.empty() ? 0 : levels_.size() - 1; }
    std::size_t generators(std::size_t k) const { return levels_.at(k); }
    /** ∂_k : C_k -> C_{k-1}, k >= 1. */
    const IntMatrix& boundary(std::size_t k) const { return boundaries_.at(k - 1); }
    bool has_boundary(std::size_t k) const { return k >= 1 && k <= boundaries_.size(); }

    /** Whether ∂_{k} ∘ ∂_{k+1} = 0. */
    bool squares_to_zero_at(std::size_t k) const {
        if (!has_boundary(k) || !has_boundary(k + 1)) return true;
        return (boundary(k) * boundary(k + 1)).is_zero();
    }

private:
    std::vector<std::size_t> levels_;
    std::vector<IntMatrix> boundaries_;
};

inline FGAbelianGroup group_from_factors(std::size_t free_rank, const std::vector<Integer>& torsion) {
    std::vector<Coord> orders;
    for (const auto& d : torsion)
        if (d != 1) orders.push_back(static_cast<Coord>(d));
    for (std::size_t i = 0; i < free_rank; ++i) orders.push_back(0);
    return FGAbelianGroup::from_cyclic_orders(orders);
}

/** ker ∂_k / im ∂_{k+1}. */
inline FGAbelianGroup homology_at(const ChainComplexZ& C, std::size_t k) {
    if (!C.squares_to_zero_at(k))
        throw Error("NotAComplex", "boundary composite at level " + std::to_string(k) + " is nonzero");
    std::size_t n = C.generators(k);
    std::size_t rank_out = C.has_boundary(k) ? lattice_invariants(C.boundary(k)).rank : 0;
    LatticeInvariants in;
    if (C.has_boundary(k + 1)) in = lattice_invariants(C.boundary(k + 1));
    std::size_t free_rank = n - rank_out - in.rank;
    return group_from_factors(free_rank, in.factors);
}

/** Checks that a coordinate matrix (rows = dst coords, cols = src generators) is a homomorphism. */
inline Report group_hom_check(const std::vector<std::vector<Coord>>& f, const FGAbelianGroup& src,
                              const FGAbelianGroup& dst) {
    Report r("group-hom-check");
    if (f.size() != dst.rank()) throw Error("DimensionMismatch", "matrix rows must equal target rank");
    for (const auto& row : f)
        if (row.size() != src.rank()) throw Error("DimensionMismatch", "matrix columns must equal source rank");
    for (std::size_t j = 0; j < src.rank(); ++j) {
        Coords image(dst.rank());
        for (std::size_t i = 0; i < dst.rank(); ++i) image[i] = f[i][j];
        Coord d = src.factor(j);
        bool ok = d == 0 || dst.is_zero(dst.scale(d, image));
        r.check("generator-order", ok, "e" + std::to_string(j),
                ok ? "" : std::to_string(d) + "*" + format_coords(image) + " != 0 in " + dst.to_string());
    }
    return r;
}

} // namespace multidet
