#pragma once

// Reference computations that avoid the production code paths; shared by the
// selftest, the acceptance binary and the unit tests.

#include <map>
#include <set>

#include "multidet/chain.hpp"
#include "multidet/triangulated.hpp"

namespace multidet::oracle {

/** Z[A] modulo [x]+[z]-[x+z] and [0], by dense SNF of the relation set. */
inline FGAbelianGroup h0_direct(const FGAbelianGroup& A) {
    auto els = A.elements();
    const std::size_t q = els.size();
    std::vector<std::vector<Integer>> cols;
    for (std::size_t x = 0; x < q; ++x)
        for (std::size_t z = 0; z < q; ++z) {
            std::vector<Integer> rel(q, 0);
            rel[x] += 1;
            rel[z] += 1;
            rel[A.index_of(A.add(els[x], els[z]))] -= 1;
            cols.push_back(rel);
        }
    std::vector<Integer> zero(q, 0);
    zero[A.index_of(A.zero())] = 1;
    cols.push_back(zero);
    std::vector<std::vector<Integer>> dense(q, std::vector<Integer>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < q; ++i) dense[i][j] = cols[j][i];
    auto f = smith_normal_form(IntMatrix::from_dense(dense)).invariant_factors();
    return group_from_factors(q - f.size(), f);
}

/**
 * Z[objects]/⟨[y]−[x]−[z]⟩ by substituting away generators that occur with
 * coefficient ±1 in some relation, then dense SNF of what is left.
 */
inline FGAbelianGroup k0_additive_direct(const TriangPresentation& T) {
    using Rel = std::map<Id, Integer>;
    // relations up to sign, so duplicates collapse as substitution proceeds
    auto normalized = [](Rel r) {
        std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
        if (!r.empty() && r.begin()->second < 0)
            for (auto& [h, v] : r) v = -v;
        return r;
    };
    std::set<Rel> rels;
    for (const auto& D : T.triangles) {
        Rel r;
        r[D.y] += 1;
        r[D.x] -= 1;
        r[D.z] -= 1;
        if (auto n = normalized(std::move(r)); !n.empty()) rels.insert(std::move(n));
    }
    std::set<Id> gens;
    for (Id o = 0; o < T.objects.size(); ++o) gens.insert(o);
    for (;;) {
        const Rel* pick = nullptr;
        Id g = kNone;
        for (const auto& r : rels) {
            if (pick && r.size() >= pick->size()) continue;
            for (const auto& [h, c] : r)
                if (c == 1 || c == -1) {
                    pick = &r;
                    g = h;
                    break;
                }
        }
        if (!pick) break;
        // g = -c·(rest of the relation)
        Rel sub = *pick;
        Integer c = sub[g];
        sub.erase(g);
        for (auto& [h, v] : sub) v = -c * v;
        rels.erase(*pick);
        gens.erase(g);
        std::set<Rel> next;
        for (auto r : rels) {
            if (auto it = r.find(g); it != r.end()) {
                Integer w = it->second;
                r.erase(it);
                for (const auto& [h, v] : sub) r[h] += w * v;
            }
            if (auto n = normalized(std::move(r)); !n.empty()) next.insert(std::move(n));
        }
        rels = std::move(next);
    }
    const std::vector<Id> left(gens.begin(), gens.end());
    if (rels.empty()) return group_from_factors(left.size(), {});
    std::map<Id, std::size_t> row;
    for (std::size_t i = 0; i < left.size(); ++i) row[left[i]] = i;
    std::vector<std::vector<Integer>> dense(left.size(), std::vector<Integer>(rels.size(), 0));
    std::size_t j = 0;
    for (const auto& r : rels) {
        for (const auto& [h, v] : r) dense[row.at(h)][j] = v;
        ++j;
    }
    auto f = smith_normal_form(IntMatrix::from_dense(dense)).invariant_factors();
    return group_from_factors(left.size() - f.size(), f);
}

} // namespace multidet::oracle
