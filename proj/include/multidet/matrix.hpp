#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multidet/group.hpp"
#include "multidet/report.hpp"

namespace multidet {

using Integer = boost::multiprecision::cpp_int;

/**
 * @brief Sparse integer matrix, column-major, rows sorted within a column.
 */
class IntMatrix {
public:
    using Entry = std::pair<std::size_t, Integer>;
    using Column = std::vector<Entry>;

    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(cols) {}

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({i, Integer(1)});
        return m;
    }
    static IntMatrix from_dense(const std::vector<std::vector<Integer>>& d) {
        std::size_t r = d.size(), c = r ? d[0].size() : 0;
        IntMatrix m(r, c);
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t i = 0; i < r; ++i)
                if (d[i][j] != 0) m.data_[j].push_back({i, d[i][j]});
        return m;
    }
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
        std::vector<std::vector<Integer>> d;
        for (auto& r : rows) {
            d.emplace_back();
            for (long long v : r) d.back().push_back(Integer(v));
        }
        return from_dense(d);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Column& column(std::size_t j) const { return data_[j]; }

    /** Replaces column j; entries may be unsorted and contain duplicates or zeros. */
    void set_column(std::size_t j, Column col) {
        std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        Column merged;
        for (auto& e : col) {
            if (e.first >= rows_) throw Error("DimensionMismatch", "row index out of range");
            if (!merged.empty() && merged.back().first == e.first)
                merged.back().second += e.second;
            else
                merged.push_back(std::move(e));
        }
        std::erase_if(merged, [](const Entry& e) { return e.second == 0; });
        data_[j] = std::move(merged);
    }

    Integer at(std::size_t i, std::size_t j) const {
        for (const auto& [r, v] : data_[j])
            if (r == i) return v;
        return 0;
    }
    void set(std::size_t i, std::size_t j, const Integer& v) {
        auto& col = data_[j];
        for (auto it = col.begin(); it != col.end(); ++it) {
            if (it->first == i) {
                if (v == 0)
                    col.erase(it);
                else
                    it->second = v;
                return;
            }
            if (it->first > i) {
                if (v != 0) col.insert(it, {i, v});
                return;
            }
        }
        if (v != 0) col.push_back({i, v});
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& c : data_) n += c.size();
        return n;
    }
    bool is_zero() const { return nonzeros() == 0; }

    std::vector<std::vector<Integer>> to_dense() const {
        std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols_));
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : data_[j]) d[i][j] = v;
        return d;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : data_[j]) t.data_[i].push_back({j, v});
        return t;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw Error("DimensionMismatch", "matrix product");
        IntMatrix p(a.rows_, b.cols_);
        std::map<std::size_t, Integer> acc;
        for (std::size_t j = 0; j < b.cols_; ++j) {
            acc.clear();
            for (const auto& [k, bv] : b.data_[j])
                for (const auto& [i, av] : a.data_[k]) acc[i] += av * bv;
            for (auto& [i, v] : acc)
                if (v != 0) p.data_[j].push_back({i, v});
        }
        return p;
    }
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Column> data_;
};

inline Integer determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw Error("DimensionMismatch", "determinant of non-square matrix");
    // fraction-free Bareiss elimination
    auto a = m.to_dense();
    std::size_t n = a.size();
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return n ? sign * a[n - 1][n - 1] : Integer(1);
}

struct SmithResult {
    IntMatrix D, U, V;
    /** Nonzero diagonal entries, in order. */
    std::vector<Integer> invariant_factors() const {
        std::vector<Integer> out;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
            if (D.at(i, i) != 0) out.push_back(D.at(i, i));
        return out;
    }
};

/** Entry size guard for SNF, in bits; 0 disables it. */
inline std::size_t& snf_bit_limit() {
    static std::size_t limit = 4096;
    return limit;
}

/**
 * @brief Smith normal form with transforms: U * M * V = D.
 *
 * Dense elimination over arbitrary precision; intended for matrices of a few
 * hundred rows. Large boundary matrices go through lattice_invariants instead.
 */
inline SmithResult smith_normal_form(const IntMatrix& M) {
    const std::size_t m = M.rows(), n = M.cols();
    auto a = M.to_dense();
    auto u = IntMatrix::identity(m).to_dense();
    auto v = IntMatrix::identity(n).to_dense();

    auto row_swap = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        std::swap(u[i], u[j]);
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        for (auto& r : a) std::swap(r[i], r[j]);
        for (auto& r : v) std::swap(r[i], r[j]);
    };
    // row_i <- row_i - q row_j
    auto row_axpy = [&](std::size_t i, std::size_t j, const Integer& q) {
        for (std::size_t c = 0; c < n; ++c) a[i][c] -= q * a[j][c];
        for (std::size_t c = 0; c < m; ++c) u[i][c] -= q * u[j][c];
    };
    auto col_axpy = [&](std::size_t i, std::size_t j, const Integer& q) {
        for (std::size_t r = 0; r < m; ++r) a[r][i] -= q * a[r][j];
        for (std::size_t r = 0; r < n; ++r) v[r][i] -= q * v[r][j];
    };
    auto check_growth = [&](const Integer& x) {
        if (snf_bit_limit() && x != 0 && boost::multiprecision::msb(abs(x)) > snf_bit_limit())
            throw Error("ResourceLimit", "SNF entry growth exceeded bound");
    };

    const std::size_t k = std::min(m, n);
    for (std::size_t t = 0; t < k; ++t) {
        for (;;) {
            // smallest nonzero in the trailing block
            std::size_t pi = m, pj = n;
            Integer best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < best)) {
                        best = abs(a[i][j]);
                        pi = i;
                        pj = j;
                    }
            if (pi == m) break;
            if (pi != t) row_swap(pi, t);
            if (pj != t) col_swap(pj, t);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a[i][t] == 0) continue;
                Integer q = a[i][t] / a[t][t];
                row_axpy(i, t, q);
                check_growth(a[i][t]);
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                Integer q = a[t][j] / a[t][t];
                col_axpy(j, t, q);
                check_growth(a[t][j]);
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the remaining block
            std::size_t bad_row = m;
            for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad_row = i;
                        break;
                    }
            if (bad_row == m) break;
            row_axpy(t, bad_row, Integer(-1));
        }
        if (a[t][t] < 0) {
            for (auto& x : a[t]) x = -x;
            for (auto& x : u[t]) x = -x;
        }
    }
    return {IntMatrix::from_dense(a), IntMatrix::from_dense(u), IntMatrix::from_dense(v)};
}

namespace detail {

struct Overflow {};

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline Integer checked_mul(const Integer& a, const Integer& b) { return a * b; }
inline Integer checked_sub(const Integer& a, const Integer& b) { return a - b; }
inline Integer checked_add(const Integer& a, const Integer& b) { return a + b; }

template <class T>
T abs_of(const T& x) {
    return x < 0 ? T(-x) : x;
}

// extended gcd: s*a + t*b = g, g > 0
template <class T>
void ext_gcd(const T& a, const T& b, T& g, T& s, T& t) {
    T old_r = a, r = b, old_s = 1, ss = 0, old_t = 0, tt = 1;
    while (r != 0) {
        T q = old_r / r;
        T tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * ss;
        old_s = ss;
        ss = tmp;
        tmp = old_t - q * tt;
        old_t = tt;
        tt = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    g = old_r;
    s = old_s;
    t = old_t;
}

template <class T>
using SparseVec = std::vector<std::pair<std::size_t, T>>;

// out = x*a + y*b, sparse merge
template <class T>
SparseVec<T> combine(const T& x, const SparseVec<T>& a, const T& y, const SparseVec<T>& b) {
    SparseVec<T> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            T v = checked_mul(x, a[i].second);
            if (v != 0) out.push_back({a[i].first, v});
            ++i;
        } else if (i == a.size() || b[j].first < a[i].first) {
            T v = checked_mul(y, b[j].second);
            if (v != 0) out.push_back({b[j].first, v});
            ++j;
        } else {
            T v = checked_add(checked_mul(x, a[i].second), checked_mul(y, b[j].second));
            if (v != 0) out.push_back({a[i].first, v});
            ++i;
            ++j;
        }
    }
    return out;
}

// Echelon basis of the column lattice; returns the basis vectors.
template <class T>
std::vector<SparseVec<T>> lattice_basis(const IntMatrix& M) {
    std::map<std::size_t, SparseVec<T>> basis;  // leading row -> vector
    for (std::size_t j = 0; j < M.cols(); ++j) {
        SparseVec<T> v;
        for (const auto& [r, x] : M.column(j)) v.push_back({r, static_cast<T>(x)});
        while (!v.empty()) {
            std::size_t lead = v.front().first;
            auto it = basis.find(lead);
            if (it == basis.end()) {
                if (v.front().second < 0)
                    for (auto& e : v) e.second = -e.second;
                basis.emplace(lead, std::move(v));
                break;
            }
            auto& b = it->second;
            T bl = b.front().second, vl = v.front().second;
            if (vl % bl == 0) {
                v = combine<T>(T(1), v, T(-(vl / bl)), b);
                continue;
            }
            T g, s, t;
            ext_gcd(bl, vl, g, s, t);
            auto nb = combine<T>(s, b, t, v);
            auto nv = combine<T>(T(bl / g), v, T(-(vl / g)), b);
            b = std::move(nb);
            v = std::move(nv);
        }
    }
    std::vector<SparseVec<T>> out;
    for (auto& [k, vec] : basis) out.push_back(std::move(vec));
    return out;
}

} // namespace detail

/** @brief Rank and nonzero invariant factors of the column lattice of M. */
struct LatticeInvariants {
    std::size_t rank = 0;
    std::vector<Integer> factors;
};

inline LatticeInvariants lattice_invariants(const IntMatrix& M) {
    std::vector<detail::SparseVec<Integer>> basis;
    try {
        for (auto& v : detail::lattice_basis<long long>(M)) {
            detail::SparseVec<Integer> w;
            for (auto& [r, x] : v) w.push_back({r, Integer(x)});
            basis.push_back(std::move(w));
        }
    } catch (const detail::Overflow&) {
        basis = detail::lattice_basis<Integer>(M);
    }
    IntMatrix B(M.rows(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) B.set_column(j, basis[j]);
    LatticeInvariants out;
    out.rank = basis.size();
    // all-unit leading entries give a unimodular triangular basis: factors all 1
    bool unit = true;
    for (auto& v : basis)
        if (abs(v.front().second) != 1) unit = false;
    if (unit) {
        out.factors.assign(basis.size(), Integer(1));
        return out;
    }
    out.factors = smith_normal_form(B).invariant_factors();
    return out;
}

} // namespace multidet
