#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace dihoto {

/**
 * Finite poset with a unique bottom and a unique top, 0 != 1.
 *
 * Elements are interned as dense indices 0..n-1 in declaration order; names
 * are kept for I/O. The order and the longest-chain function are computed
 * once at construction.
 */
class BoundedPoset {
  public:
    using Cover = std::pair<std::size_t, std::size_t>;

    /// Reflexive-transitive closure of `covers`; throws CycleDetected or NotBounded.
    static BoundedPoset closure(std::vector<std::string> names, const std::vector<Cover>& covers)
    {
        const std::size_t n = names.size();
        std::set<std::string> seen;
        for (auto const& nm : names) {
            if (!seen.insert(nm).second)
                throw Error(ErrorKind::ParseError, "duplicate element '" + nm + "'");
        }
        std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            leq[i][i] = true;
        for (auto [a, b] : covers) {
            if (a >= n || b >= n)
                throw Error(ErrorKind::ParseError, "cover refers to unknown element");
            if (a == b)
                throw Error(ErrorKind::CycleDetected, "self cover on '" + names[a] + "'");
            leq[a][b] = true;
        }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (leq[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (leq[k][j])
                            leq[i][j] = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (leq[i][j] && leq[j][i])
                    throw Error(ErrorKind::CycleDetected,
                                "'" + names[i] + "' and '" + names[j] + "' are mutually related");
        return BoundedPoset(std::move(names), std::move(leq));
    }

    /// Same as closure() with covers given by element name.
    static BoundedPoset closure(std::vector<std::string> names,
                                const std::vector<std::pair<std::string, std::string>>& covers)
    {
        std::map<std::string, std::size_t> idx;
        for (std::size_t i = 0; i < names.size(); ++i)
            idx[names[i]] = i;
        std::vector<Cover> cv;
        for (auto const& [a, b] : covers) {
            auto ia = idx.find(a), ib = idx.find(b);
            if (ia == idx.end() || ib == idx.end())
                throw Error(ErrorKind::ParseError, "unknown element in cover " + a + " " + b);
            cv.emplace_back(ia->second, ib->second);
        }
        return closure(std::move(names), cv);
    }

    /// Parses `elem NAME` / `cover NAME NAME` lines; `#` starts a comment.
    static BoundedPoset parse(std::string_view text)
    {
        std::vector<std::string> names;
        std::set<std::string> known;
        std::vector<std::pair<std::string, std::string>> covers;
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos)
                line.erase(h);
            std::istringstream ls(line);
            std::vector<std::string> tok;
            for (std::string t; ls >> t;)
                tok.push_back(t);
            if (tok.empty())
                continue;
            auto fail = [&](const std::string& why) {
                throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + why);
            };
            if (tok[0] == "elem") {
                if (tok.size() != 2)
                    fail("expected 'elem NAME'");
                if (!known.insert(tok[1]).second)
                    fail("duplicate element '" + tok[1] + "'");
                names.push_back(tok[1]);
            } else if (tok[0] == "cover") {
                if (tok.size() != 3)
                    fail("expected 'cover NAME NAME'");
                if (!known.count(tok[1]) || !known.count(tok[2]))
                    fail("unknown element in cover");
                covers.emplace_back(tok[1], tok[2]);
            } else {
                fail("unknown declaration '" + tok[0] + "'");
            }
        }
        return closure(std::move(names), covers);
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<std::size_t> index(std::string_view nm) const
    {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == nm)
                return i;
        return std::nullopt;
    }

    bool leq(std::size_t a, std::size_t b) const { return leq_[a][b]; }
    bool less(std::size_t a, std::size_t b) const { return a != b && leq_[a][b]; }
    bool comparable(std::size_t a, std::size_t b) const { return leq_[a][b] || leq_[b][a]; }

    std::size_t bottom() const { return bottom_; }
    std::size_t top() const { return top_; }

    /// Length of the longest chain a = x0 < ... < xp = b.
    int chain_length(std::size_t a, std::size_t b) const
    {
        if (!less(a, b))
            throw Error(ErrorKind::NotComparable, names_[a] + " is not below " + names_[b]);
        return ell_[a][b];
    }

    /// Covering relation of the order, ascending.
    std::vector<Cover> hasse() const
    {
        std::vector<Cover> out;
        for (std::size_t a = 0; a < size(); ++a)
            for (std::size_t b = 0; b < size(); ++b)
                if (less(a, b) && ell_[a][b] == 1)
                    out.emplace_back(a, b);
        return out;
    }

    /// Elements z with a <= z <= b, ascending.
    std::vector<std::size_t> interval_elements(std::size_t a, std::size_t b) const
    {
        std::vector<std::size_t> out;
        for (std::size_t z = 0; z < size(); ++z)
            if (leq(a, z) && leq(z, b))
                out.push_back(z);
        return out;
    }

    /// The subposet [a, b] with induced order; bottom a, top b.
    BoundedPoset interval(std::size_t a, std::size_t b) const
    {
        if (!less(a, b))
            throw Error(ErrorKind::NotComparable, names_[a] + " is not below " + names_[b]);
        return induced(interval_elements(a, b));
    }

    /// Induced subposet on `elems` (must be bounded).
    BoundedPoset induced(const std::vector<std::size_t>& elems) const
    {
        std::vector<std::string> nm;
        std::vector<std::vector<bool>> l(elems.size(), std::vector<bool>(elems.size()));
        for (std::size_t i = 0; i < elems.size(); ++i) {
            nm.push_back(names_[elems[i]]);
            for (std::size_t j = 0; j < elems.size(); ++j)
                l[i][j] = leq_[elems[i]][elems[j]];
        }
        return BoundedPoset(std::move(nm), std::move(l));
    }

    std::string to_text() const
    {
        std::ostringstream os;
        for (auto const& nm : names_)
            os << "elem " << nm << "\n";
        for (auto [a, b] : hasse())
            os << "cover " << names_[a] << " " << names_[b] << "\n";
        return os.str();
    }

    std::string to_dot() const
    {
        std::ostringstream os;
        os << "digraph hasse {\n  rankdir=LR;\n";
        for (auto const& nm : names_)
            os << "  \"" << nm << "\";\n";
        for (auto [a, b] : hasse())
            os << "  \"" << names_[a] << "\" -> \"" << names_[b] << "\";\n";
        os << "}\n";
        return os.str();
    }

    /// Isomorphism-invariant code; equal codes iff isomorphic.
    std::vector<std::uint8_t> canonical_code() const;

  private:
    BoundedPoset(std::vector<std::string> names, std::vector<std::vector<bool>> leq)
        : names_(std::move(names)), leq_(std::move(leq))
    {
        const std::size_t n = names_.size();
        std::vector<std::size_t> mins, maxs;
        for (std::size_t i = 0; i < n; ++i) {
            bool is_min = true, is_max = true;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && leq_[j][i])
                    is_min = false;
                if (j != i && leq_[i][j])
                    is_max = false;
            }
            if (is_min)
                mins.push_back(i);
            if (is_max)
                maxs.push_back(i);
        }
        if (mins.size() != 1 || maxs.size() != 1 || mins[0] == maxs[0])
            throw Error(ErrorKind::NotBounded, "poset needs exactly one minimum and one maximum, distinct");
        bottom_ = mins[0];
        top_ = maxs[0];

        // longest path DP over the strict order, processed by down-set size
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        auto below = [&](std::size_t x) {
            std::size_t c = 0;
            for (std::size_t y = 0; y < n; ++y)
                c += leq_[y][x];
            return c;
        };
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return below(x) < below(y); });
        ell_.assign(n, std::vector<int>(n, 0));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b : order) {
                if (!less(a, b))
                    continue;
                int best = 1;
                for (std::size_t c = 0; c < n; ++c)
                    if (less(a, c) && less(c, b))
                        best = std::max(best, ell_[a][c] + 1);
                ell_[a][b] = best;
            }
        }
    }

    std::vector<std::string> names_;
    std::vector<std::vector<bool>> leq_;
    std::vector<std::vector<int>> ell_;
    std::size_t bottom_ = 0;
    std::size_t top_ = 0;
};

namespace detail {

// Encodes the strict order under `perm` (perm[new] = old) as a bit string.
inline std::vector<std::uint8_t> encode_order(const BoundedPoset& p, const std::vector<std::size_t>& perm)
{
    std::vector<std::uint8_t> code;
    code.reserve(perm.size() * perm.size());
    for (std::size_t i : perm)
        for (std::size_t j : perm)
            code.push_back(p.less(i, j) ? 1 : 0);
    return code;
}

}  // namespace detail

// Refine by (down-set size, up-set size), then try every ordering consistent
// with the refinement. Posets here have at most a handful of elements.
inline std::vector<std::uint8_t> BoundedPoset::canonical_code() const
{
    const std::size_t n = size();
    std::vector<std::pair<std::size_t, std::size_t>> inv(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            inv[i].first += leq(j, i);
            inv[i].second += leq(i, j);
        }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(inv[a], a) < std::tie(inv[b], b);
    });
    // cells of equal invariant
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t s = 0; s < n;) {
        std::size_t e = s;
        while (e < n && inv[perm[e]] == inv[perm[s]])
            ++e;
        cells.emplace_back(s, e);
        s = e;
    }
    std::vector<std::uint8_t> best;
    // odometer over permutations of each cell
    auto cur = perm;
    while (true) {
        auto code = detail::encode_order(*this, cur);
        code.insert(code.begin(), static_cast<std::uint8_t>(n));
        if (best.empty() || code < best)
            best = std::move(code);
        std::size_t c = cells.size();
        bool advanced = false;
        while (c-- > 0) {
            auto [s, e] = cells[c];
            if (std::next_permutation(cur.begin() + s, cur.begin() + e)) {
                advanced = true;
                break;
            }
        }
        if (!advanced)
            break;
    }
    return best;
}

/// Monotone map between bounded posets.
struct PosetMorphism {
    BoundedPoset source;
    BoundedPoset target;
    std::vector<std::size_t> mapping;
};

struct TReport {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Membership test for the class of refinement morphisms: injective,
/// endpoint preserving, strictly monotone.
inline TReport validate_T(const PosetMorphism& f)
{
    TReport r;
    auto fail = [&](std::string s) {
        r.ok = false;
        r.failures.push_back(std::move(s));
    };
    auto const& P = f.source;
    auto const& Q = f.target;
    if (f.mapping.size() != P.size()) {
        fail("mapping size does not match source");
        return r;
    }
    for (auto x : f.mapping)
        if (x >= Q.size()) {
            fail("mapping leaves the target");
            return r;
        }
    std::set<std::size_t> img(f.mapping.begin(), f.mapping.end());
    if (img.size() != f.mapping.size())
        fail("not injective");
    if (f.mapping[P.bottom()] != Q.bottom())
        fail("bottom not preserved");
    if (f.mapping[P.top()] != Q.top())
        fail("top not preserved");
    for (std::size_t x = 0; x < P.size(); ++x)
        for (std::size_t y = 0; y < P.size(); ++y)
            if (P.less(x, y) && !Q.less(f.mapping[x], f.mapping[y])) {
                fail("not strictly monotone on " + P.name(x) + " < " + P.name(y));
                return r;
            }
    return r;
}

struct SuperadditivityReport {
    bool ok = true;
    std::size_t chains_checked = 0;
    std::vector<std::string> violations;
};

/// Checks chain_length(a,b) + chain_length(b,c) <= chain_length(a,c) on
/// every a < b < c.
inline SuperadditivityReport check_superadditivity(const BoundedPoset& P)
{
    SuperadditivityReport r;
    for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t b = 0; b < P.size(); ++b) {
            if (!P.less(a, b))
                continue;
            for (std::size_t c = 0; c < P.size(); ++c) {
                if (!P.less(b, c))
                    continue;
                ++r.chains_checked;
                if (P.chain_length(a, b) + P.chain_length(b, c) > P.chain_length(a, c)) {
                    r.ok = false;
                    r.violations.push_back(P.name(a) + "<" + P.name(b) + "<" + P.name(c));
                }
            }
        }
    return r;
}

/// One representative per isomorphism class of bounded posets with at most
/// `max_size` elements, ordered by size then canonical code. Elements are
/// named "0" (bottom), "a", "b", ... and "1" (top).
inline std::vector<BoundedPoset> enumerate_bounded_posets(std::size_t max_size)
{
    std::vector<BoundedPoset> out;
    for (std::size_t m = 2; m <= max_size; ++m) {
        const std::size_t k = m - 2;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                pairs.emplace_back(i, j);
        std::size_t total = 1;
        for (std::size_t t = 0; t < pairs.size(); ++t)
            total *= 3;
        std::map<std::vector<std::uint8_t>, BoundedPoset> classes;
        std::vector<std::string> names{"0"};
        for (std::size_t i = 0; i < k; ++i)
            names.push_back(std::string(1, static_cast<char>('a' + i)));
        names.push_back("1");
        for (std::size_t code = 0; code < total; ++code) {
            // rel[i][j] : strict order among inner elements
            std::vector<std::vector<bool>> rel(k, std::vector<bool>(k, false));
            std::size_t c = code;
            for (auto [i, j] : pairs) {
                switch (c % 3) {
                case 1: rel[i][j] = true; break;
                case 2: rel[j][i] = true; break;
                default: break;
                }
                c /= 3;
            }
            bool transitive = true;
            for (std::size_t a = 0; a < k && transitive; ++a)
                for (std::size_t b = 0; b < k && transitive; ++b)
                    if (rel[a][b])
                        for (std::size_t d = 0; d < k; ++d)
                            if (rel[b][d] && !rel[a][d]) {
                                transitive = false;
                                break;
                            }
            if (!transitive)
                continue;
            std::vector<BoundedPoset::Cover> covers;
            for (std::size_t i = 0; i < k; ++i) {
                covers.emplace_back(0, i + 1);
                covers.emplace_back(i + 1, k + 1);
                for (std::size_t j = 0; j < k; ++j)
                    if (rel[i][j])
                        covers.emplace_back(i + 1, j + 1);
            }
            if (k == 0)
                covers.emplace_back(0, 1);
            auto p = BoundedPoset::closure(names, covers);
            auto key = p.canonical_code();
            if (!classes.count(key))
                classes.emplace(std::move(key), std::move(p));
        }
        for (auto& [key, p] : classes)
            out.push_back(std::move(p));
    }
    return out;
}

/// Convenience: totally ordered poset 0 < a < b < ... < 1 with `n` elements.
inline BoundedPoset chain_poset(std::size_t n)
{
    std::vector<std::string> names{"0"};
    for (std::size_t i = 0; i + 2 < n; ++i)
        names.push_back(std::string(1, static_cast<char>('a' + i)));
    names.push_back("1");
    std::vector<BoundedPoset::Cover> cv;
    for (std::size_t i = 0; i + 1 < n; ++i)
        cv.emplace_back(i, i + 1);
    return BoundedPoset::closure(names, cv);
}

}  // namespace dihoto
