#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "multidet/report.hpp"

namespace multidet {

using Coord = std::int64_t;
using Coords = std::vector<Coord>;

inline Coord floor_mod(Coord a, Coord d) {
    Coord r = a % d;
    return r < 0 ? r + d : r;
}

/**
 * @brief Finitely generated abelian group Z/d_1 + ... + Z/d_r.
 *
 * A factor 0 is an infinite cyclic summand. Elements are coordinate vectors,
 * kept reduced into [0, d) on finite factors.
 */
class FGAbelianGroup {
public:
    FGAbelianGroup() = default;
    explicit FGAbelianGroup(std::vector<Coord> factors) : factors_(std::move(factors)) {
        for (Coord d : factors_)
            if (d < 0 || d == 1)
                throw Error("InvalidGroup", "invariant factor " + std::to_string(d) + " not allowed");
    }

    const std::vector<Coord>& invariant_factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }
    Coord factor(std::size_t i) const { return factors_[i]; }
    bool is_trivial() const { return factors_.empty(); }
    bool is_finite() const {
        for (Coord d : factors_)
            if (d == 0) return false;
        return true;
    }
    /** Number of elements, or nullopt when infinite or beyond 2^62. */
    std::optional<std::uint64_t> order() const {
        std::uint64_t n = 1;
        for (Coord d : factors_) {
            if (d == 0) return std::nullopt;
            if (n > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(d)) return std::nullopt;
            n *= static_cast<std::uint64_t>(d);
        }
        return n;
    }

    Coords zero() const { return Coords(rank(), 0); }
    Coords generator(std::size_t i) const {
        Coords e = zero();
        e[i] = 1;
        reduce(e);
        return e;
    }

    void reduce(std::span<Coord> x) const {
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i]) x[i] = floor_mod(x[i], factors_[i]);
    }
    Coords reduced(Coords x) const {
        reduce(x);
        return x;
    }
    bool is_reduced(std::span<const Coord> x) const {
        if (x.size() != rank()) return false;
        for (std::size_t i = 0; i < rank(); ++i)
            if (factors_[i] && (x[i] < 0 || x[i] >= factors_[i])) return false;
        return true;
    }
    bool is_zero(std::span<const Coord> x) const {
        for (std::size_t i = 0; i < rank(); ++i)
            if (factors_[i] ? floor_mod(x[i], factors_[i]) != 0 : x[i] != 0) return false;
        return true;
    }
    bool equal(std::span<const Coord> x, std::span<const Coord> y) const {
        for (std::size_t i = 0; i < rank(); ++i) {
            Coord d = x[i] - y[i];
            if (factors_[i] ? floor_mod(d, factors_[i]) != 0 : d != 0) return false;
        }
        return true;
    }
    Coords add(std::span<const Coord> x, std::span<const Coord> y) const {
        Coords r(rank());
        for (std::size_t i = 0; i < rank(); ++i) r[i] = x[i] + y[i];
        reduce(r);
        return r;
    }
    Coords sub(std::span<const Coord> x, std::span<const Coord> y) const {
        Coords r(rank());
        for (std::size_t i = 0; i < rank(); ++i) r[i] = x[i] - y[i];
        reduce(r);
        return r;
    }
    Coords neg(std::span<const Coord> x) const {
        Coords r(rank());
        for (std::size_t i = 0; i < rank(); ++i) r[i] = -x[i];
        reduce(r);
        return r;
    }
    Coords scale(Coord k, std::span<const Coord> x) const {
        Coords r(rank());
        for (std::size_t i = 0; i < rank(); ++i) r[i] = k * x[i];
        reduce(r);
        return r;
    }
    /** acc += k * x, reduced. */
    void axpy(std::span<Coord> acc, Coord k, std::span<const Coord> x) const {
        for (std::size_t i = 0; i < rank(); ++i) acc[i] += k * x[i];
        reduce(acc);
    }

    /** Mixed-radix index of an element of a finite group. */
    std::uint64_t index_of(std::span<const Coord> x) const {
        std::uint64_t idx = 0;
        for (std::size_t i = rank(); i-- > 0;)
            idx = idx * static_cast<std::uint64_t>(factors_[i]) + static_cast<std::uint64_t>(floor_mod(x[i], factors_[i]));
        return idx;
    }
    Coords element_at(std::uint64_t idx) const {
        Coords x(rank());
        for (std::size_t i = 0; i < rank(); ++i) {
            x[i] = static_cast<Coord>(idx % static_cast<std::uint64_t>(factors_[i]));
            idx /= static_cast<std::uint64_t>(factors_[i]);
        }
        return x;
    }
    /** All elements of a finite group in index order. */
    std::vector<Coords> elements() const {
        auto n = order();
        if (!n) throw Error("InfiniteGroup", "cannot enumerate " + to_string());
        std::vector<Coords> out;
        out.reserve(*n);
        for (std::uint64_t i = 0; i < *n; ++i) out.push_back(element_at(i));
        return out;
    }

    /** Order of an element (0 if infinite). */
    Coord element_order(std::span<const Coord> x) const {
        Coord l = 1;
        for (std::size_t i = 0; i < rank(); ++i) {
            if (factors_[i] == 0) {
                if (x[i] != 0) return 0;
                continue;
            }
            Coord v = floor_mod(x[i], factors_[i]);
            Coord o = factors_[i] / std::gcd(v, factors_[i]);
            l = std::lcm(l, o);
        }
        return l;
    }

    std::string to_string() const {
        if (factors_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) s += "+";
            s += factors_[i] == 0 ? "Z" : "Z/" + std::to_string(factors_[i]);
        }
        return s;
    }

    /**
     * Parses "0", "Z", "Z/4", "Z/2+Z/2" (also accepts "⊕" or "x" as separator).
     * Factors are normalised to invariant-factor form.
     */
    static FGAbelianGroup parse(const std::string& text);

    /** Normalises arbitrary cyclic orders (0 = infinite, 1 dropped) to invariant factors. */
    static FGAbelianGroup from_cyclic_orders(std::vector<Coord> orders);

    friend bool operator==(const FGAbelianGroup& a, const FGAbelianGroup& b) { return a.factors_ == b.factors_; }

private:
    std::vector<Coord> factors_;
};

/** @brief Element bundled with its group, for API boundaries. */
struct GroupElement {
    Coords coords;
    const FGAbelianGroup* parent = nullptr;

    GroupElement() = default;
    GroupElement(Coords c, const FGAbelianGroup& g) : coords(std::move(c)), parent(&g) {
        if (coords.size() != g.rank()) throw Error("DimensionMismatch", "element length");
        g.reduce(coords);
    }
    bool is_zero() const { return parent->is_zero(coords); }
    GroupElement operator+(const GroupElement& o) const { return {parent->add(coords, o.coords), *parent}; }
    GroupElement operator-(const GroupElement& o) const { return {parent->sub(coords, o.coords), *parent}; }
    GroupElement operator-() const { return {parent->neg(coords), *parent}; }
    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.parent->equal(a.coords, b.coords);
    }
};

inline std::string format_coords(std::span<const Coord> x) {
    std::string s = "[";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(x[i]);
    }
    return s + "]";
}

inline FGAbelianGroup FGAbelianGroup::from_cyclic_orders(std::vector<Coord> orders) {
    // primary powers per prime, then recombine largest-first into invariant factors
    Coord free_rank = 0;
    std::vector<std::pair<Coord, std::vector<Coord>>> primes;
    auto add_pp = [&](Coord p, Coord pk) {
        for (auto& [q, list] : primes)
            if (q == p) {
                list.push_back(pk);
                return;
            }
        primes.push_back({p, {pk}});
    };
    for (Coord d : orders) {
        if (d < 0) throw Error("InvalidGroup", "negative order");
        if (d == 0) {
            ++free_rank;
            continue;
        }
        Coord n = d;
        for (Coord p = 2; p * p <= n; ++p) {
            if (n % p) continue;
            Coord pk = 1;
            while (n % p == 0) {
                n /= p;
                pk *= p;
            }
            add_pp(p, pk);
        }
        if (n > 1) add_pp(n, n);
    }
    std::size_t len = 0;
    for (auto& [p, list] : primes) {
        std::sort(list.begin(), list.end());
        len = std::max(len, list.size());
    }
    std::vector<Coord> factors(len, 1);
    for (auto& [p, list] : primes)
        for (std::size_t i = 0; i < list.size(); ++i) factors[len - list.size() + i] *= list[i];
    std::vector<Coord> out;
    for (Coord f : factors)
        if (f != 1) out.push_back(f);
    for (Coord i = 0; i < free_rank; ++i) out.push_back(0);
    return FGAbelianGroup(out);
}

inline FGAbelianGroup FGAbelianGroup::parse(const std::string& text) {
    std::string s;
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char ch = static_cast<unsigned char>(text[i]);
        if (ch == ' ') continue;
        if (ch == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x8A &&
            static_cast<unsigned char>(text[i + 2]) == 0x95) {
            s += '+';
            i += 2;
            continue;
        }
        s += static_cast<char>(ch == 'x' ? '+' : ch);
    }
    if (s.empty() || s == "0") return FGAbelianGroup{};
    std::vector<Coord> orders;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '+')) {
        if (part == "Z") {
            orders.push_back(0);
        } else if (part.rfind("Z/", 0) == 0) {
            Coord d = 0;
            try {
                d = std::stoll(part.substr(2));
            } catch (...) {
                throw Error("ParseError", "bad group factor '" + part + "'");
            }
            if (d < 1) throw Error("ParseError", "bad group factor '" + part + "'");
            orders.push_back(d);
        } else {
            throw Error("ParseError", "bad group factor '" + part + "' in '" + text + "'");
        }
    }
    return from_cyclic_orders(orders);
}

} // namespace multidet
