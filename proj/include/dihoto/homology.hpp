#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sset.hpp"

namespace dihoto {

/// Integral homology: Betti numbers and torsion coefficients per dimension.
struct HomologyResult {
    std::vector<long> betti;
    std::vector<std::vector<long>> torsion;

    long betti_at(std::size_t n) const { return n < betti.size() ? betti[n] : 0; }

    /// Reduced Betti number (H̃_0 = H_0 minus one copy of ℤ when nonempty).
    long reduced_betti(std::size_t n) const
    {
        long b = betti_at(n);
        return n == 0 && b > 0 ? b - 1 : b;
    }

    bool torsion_free() const
    {
        for (auto const& t : torsion)
            if (!t.empty())
                return false;
        return true;
    }

    /// Drops trailing degrees with no homology.
    HomologyResult trimmed() const
    {
        HomologyResult out = *this;
        while (!out.betti.empty() && out.betti.back() == 0 && out.torsion.back().empty()) {
            out.betti.pop_back();
            out.torsion.pop_back();
        }
        return out;
    }

    friend bool operator==(const HomologyResult&, const HomologyResult&) = default;

    std::string to_string() const
    {
        std::ostringstream os;
        for (std::size_t n = 0; n < betti.size(); ++n) {
            if (n)
                os << " ";
            os << "H" << n << "=Z^" << betti[n];
            for (auto t : torsion[n])
                os << "+Z/" << t;
        }
        return os.str();
    }
};

namespace detail {

inline long checked_mul(long a, long b)
{
    long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("integer overflow in Smith normal form");
    return r;
}

inline long checked_sub(long a, long b)
{
    long r;
    if (__builtin_sub_overflow(a, b, &r))
        throw std::overflow_error("integer overflow in Smith normal form");
    return r;
}

using SparseRow = std::vector<std::pair<std::uint32_t, long>>;

inline long entry(const SparseRow& r, std::uint32_t c)
{
    auto it = std::lower_bound(r.begin(), r.end(), c, [](auto const& e, std::uint32_t k) { return e.first < k; });
    return it != r.end() && it->first == c ? it->second : 0;
}

// r -= f * p
inline void axpy(SparseRow& r, long f, const SparseRow& p)
{
    SparseRow out;
    out.reserve(r.size() + p.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < p.size()) {
        if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
            out.push_back(r[i++]);
        } else if (i == r.size() || p[j].first < r[i].first) {
            out.emplace_back(p[j].first, checked_sub(0, checked_mul(f, p[j].second)));
            ++j;
        } else {
            long v = checked_sub(r[i].second, checked_mul(f, p[j].second));
            if (v != 0)
                out.emplace_back(r[i].first, v);
            ++i;
            ++j;
        }
    }
    r = std::move(out);
}

// Diagonal of the Smith normal form of a dense matrix (nonzero entries only).
inline std::vector<long> dense_smith(std::vector<std::vector<long>> a)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<long> diag;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        std::size_t pr = rows, pc = cols;
        long best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (best == 0 || std::labs(a[i][j]) < best)) {
                    best = std::labs(a[i][j]);
                    pr = i;
                    pc = j;
                }
        if (best == 0)
            break;
        std::swap(a[t], a[pr]);
        for (auto& row : a)
            std::swap(row[t], row[pc]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0)
                    continue;
                long q = a[i][t] / a[t][t];
                for (std::size_t j = t; j < cols; ++j)
                    a[i][j] = checked_sub(a[i][j], checked_mul(q, a[t][j]));
                if (a[i][t] != 0) {
                    std::swap(a[i], a[t]);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0)
                    continue;
                long q = a[t][j] / a[t][t];
                for (std::size_t i = t; i < rows; ++i)
                    a[i][j] = checked_sub(a[i][j], checked_mul(q, a[i][t]));
                if (a[t][j] != 0) {
                    for (auto& row : a)
                        std::swap(row[t], row[j]);
                    clean = false;
                }
            }
        }
        diag.push_back(std::labs(a[t][t]));
        ++t;
    }
    // normalize to a divisibility chain
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
            long g = std::gcd(diag[i], diag[j]);
            long l = checked_mul(diag[i] / g, diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    return diag;
}

}  // namespace detail

/**
 * Smith invariants of an integer matrix given as sparse rows over `cols`
 * columns: returns the nonzero diagonal entries. Unit pivots are eliminated
 * sparsely; the remainder goes through a dense reduction.
 */
inline std::vector<long> smith_diagonal(std::vector<detail::SparseRow> rows, std::size_t cols)
{
    std::vector<long> diag;
    std::vector<bool> alive(rows.size(), true);
    for (;;) {
        std::size_t best = rows.size();
        std::uint32_t col = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!alive[i] || rows[i].empty())
                continue;
            if (best != rows.size() && rows[i].size() >= rows[best].size())
                continue;
            for (auto const& [c, v] : rows[i])
                if (v == 1 || v == -1) {
                    best = i;
                    col = c;
                    break;
                }
        }
        if (best == rows.size())
            break;
        const long pv = detail::entry(rows[best], col);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == best || !alive[i])
                continue;
            long v = detail::entry(rows[i], col);
            if (v != 0)
                detail::axpy(rows[i], v * pv, rows[best]);
        }
        alive[best] = false;
        diag.push_back(1);
    }
    std::vector<std::uint32_t> used_cols;
    std::vector<std::size_t> live_rows;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (alive[i] && !rows[i].empty()) {
            live_rows.push_back(i);
            for (auto const& e : rows[i])
                used_cols.push_back(e.first);
        }
    std::sort(used_cols.begin(), used_cols.end());
    used_cols.erase(std::unique(used_cols.begin(), used_cols.end()), used_cols.end());
    if (!live_rows.empty()) {
        std::vector<std::vector<long>> dense(live_rows.size(), std::vector<long>(used_cols.size(), 0));
        for (std::size_t r = 0; r < live_rows.size(); ++r)
            for (auto const& [c, v] : rows[live_rows[r]]) {
                auto k = std::lower_bound(used_cols.begin(), used_cols.end(), c) - used_cols.begin();
                dense[r][static_cast<std::size_t>(k)] = v;
            }
        for (auto d : detail::dense_smith(std::move(dense)))
            diag.push_back(d);
    }
    (void)cols;
    return diag;
}

/// Boundary matrix of the normalized chain complex in degree n, as sparse
/// rows indexed by n-simplices over the (n-1)-simplices.
inline std::vector<detail::SparseRow> boundary_rows(const SSet& x, int n)
{
    std::vector<std::uint32_t> pos(x.size(), 0);
    if (n >= 1) {
        auto lower = x.of_dim(n - 1);
        for (std::uint32_t k = 0; k < lower.size(); ++k)
            pos[lower[k]] = k;
    }
    std::vector<detail::SparseRow> rows;
    for (auto id : x.of_dim(n)) {
        std::map<std::uint32_t, long> acc;
        if (n >= 1) {
            auto fs = x.faces(id);
            for (int i = 0; i <= n; ++i) {
                auto const& f = fs[static_cast<std::size_t>(i)];
                if (!f.nondegenerate())
                    continue;
                acc[pos[f.base]] += (i % 2 == 0) ? 1 : -1;
            }
        }
        detail::SparseRow r;
        for (auto [c, v] : acc)
            if (v != 0)
                r.emplace_back(c, v);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline HomologyResult homology(const SSet& x)
{
    HomologyResult h;
    const int top = x.dimension();
    if (top < 0)
        return h;
    std::vector<std::vector<long>> diag(static_cast<std::size_t>(top + 2));
    for (int n = 1; n <= top; ++n)
        diag[static_cast<std::size_t>(n)] = smith_diagonal(boundary_rows(x, n), x.count(n - 1));
    h.betti.resize(static_cast<std::size_t>(top + 1));
    h.torsion.resize(static_cast<std::size_t>(top + 1));
    for (int n = 0; n <= top; ++n) {
        const auto un = static_cast<std::size_t>(n);
        long rank_out = static_cast<long>(diag[un].size());
        long rank_in = static_cast<long>(diag[un + 1].size());
        h.betti[un] = static_cast<long>(x.count(n)) - rank_out - rank_in;
        for (auto d : diag[un + 1])
            if (d > 1)
                h.torsion[un].push_back(d);
    }
    return h;
}

/// Nonempty, connected and with vanishing reduced homology.
inline bool is_homology_contractible(const SSet& x)
{
    if (x.empty())
        return false;
    auto h = homology(x);
    for (std::size_t n = 0; n < h.betti.size(); ++n)
        if (h.reduced_betti(n) != 0 || !h.torsion[n].empty())
            return false;
    return true;
}

}  // namespace dihoto
