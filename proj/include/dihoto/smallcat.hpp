#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "poset.hpp"

namespace dihoto {

/// Finite category with an explicit composition table.
class FinCat {
  public:
    struct Arrow {
        std::size_t source;
        std::size_t target;
    };

    FinCat() = default;

    /// `comp[g * arrows + f]` is g ∘ f or -1 when not composable.
    FinCat(std::vector<std::string> objects, std::vector<Arrow> arrows, std::vector<std::size_t> identities,
           std::vector<std::int32_t> comp, bool check = true)
        : objects_(std::move(objects)), arrows_(std::move(arrows)), ids_(std::move(identities)),
          comp_(std::move(comp))
    {
        if (ids_.size() != objects_.size() || comp_.size() != arrows_.size() * arrows_.size())
            throw std::invalid_argument("malformed category tables");
        if (check)
            verify();
    }

    /// Thin category from a reflexive transitive relation `hom[a][b]` (arrow a -> b).
    static FinCat thin(std::vector<std::string> objects, const std::vector<std::vector<bool>>& hom, bool check = true)
    {
        const std::size_t n = objects.size();
        std::vector<Arrow> arrows;
        std::vector<std::vector<std::int32_t>> idx(n, std::vector<std::int32_t>(n, -1));
        std::vector<std::size_t> ids(n);
        for (std::size_t a = 0; a < n; ++a) {
            ids[a] = arrows.size();
            idx[a][a] = static_cast<std::int32_t>(arrows.size());
            arrows.push_back({a, a});
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b && hom[a][b]) {
                    idx[a][b] = static_cast<std::int32_t>(arrows.size());
                    arrows.push_back({a, b});
                }
        const std::size_t m = arrows.size();
        std::vector<std::int32_t> comp(m * m, -1);
        for (std::size_t g = 0; g < m; ++g)
            for (std::size_t f = 0; f < m; ++f)
                if (arrows[f].target == arrows[g].source) {
                    auto c = idx[arrows[f].source][arrows[g].target];
                    if (c < 0)
                        throw std::invalid_argument("thin relation is not transitive");
                    comp[g * m + f] = c;
                }
        return FinCat(std::move(objects), std::move(arrows), std::move(ids), std::move(comp), check);
    }

    std::size_t num_objects() const { return objects_.size(); }
    std::size_t num_arrows() const { return arrows_.size(); }
    const std::string& label(std::size_t o) const { return objects_[o]; }
    const Arrow& arrow(std::size_t a) const { return arrows_[a]; }
    std::size_t identity(std::size_t o) const { return ids_[o]; }
    bool is_identity(std::size_t a) const { return ids_[arrows_[a].source] == a; }
    bool empty() const { return objects_.empty(); }

    std::optional<std::size_t> compose(std::size_t g, std::size_t f) const
    {
        auto c = comp_[g * arrows_.size() + f];
        if (c < 0)
            return std::nullopt;
        return static_cast<std::size_t>(c);
    }

    std::vector<std::size_t> hom(std::size_t a, std::size_t b) const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < arrows_.size(); ++k)
            if (arrows_[k].source == a && arrows_[k].target == b)
                out.push_back(k);
        return out;
    }

    bool is_thin() const
    {
        std::map<std::pair<std::size_t, std::size_t>, int> seen;
        for (auto const& a : arrows_)
            if (++seen[{a.source, a.target}] > 1)
                return false;
        return true;
    }

    /// Exhaustive check of typing, unit laws and associativity.
    void verify() const
    {
        const std::size_t m = arrows_.size();
        for (std::size_t o = 0; o < objects_.size(); ++o) {
            auto const& id = arrows_.at(ids_[o]);
            if (id.source != o || id.target != o)
                throw std::logic_error("identity arrow has wrong endpoints");
        }
        for (std::size_t g = 0; g < m; ++g)
            for (std::size_t f = 0; f < m; ++f) {
                auto c = compose(g, f);
                bool composable = arrows_[f].target == arrows_[g].source;
                if (composable != c.has_value())
                    throw std::logic_error("composition defined on wrong pairs");
                if (c && (arrows_[*c].source != arrows_[f].source || arrows_[*c].target != arrows_[g].target))
                    throw std::logic_error("composite has wrong endpoints");
            }
        for (std::size_t f = 0; f < m; ++f) {
            if (*compose(f, ids_[arrows_[f].source]) != f || *compose(ids_[arrows_[f].target], f) != f)
                throw std::logic_error("unit law fails");
        }
        for (std::size_t h = 0; h < m; ++h)
            for (std::size_t g = 0; g < m; ++g) {
                if (arrows_[g].target != arrows_[h].source)
                    continue;
                auto hg = *compose(h, g);
                for (std::size_t f = 0; f < m; ++f) {
                    if (arrows_[f].target != arrows_[g].source)
                        continue;
                    if (*compose(hg, f) != *compose(h, *compose(g, f)))
                        throw std::logic_error("associativity fails");
                }
            }
    }

    /// Full subcategory on the given objects (in the given order).
    /// Returns the subcategory and, per sub-arrow, the ambient arrow.
    std::pair<FinCat, std::vector<std::size_t>> full_subcategory(const std::vector<std::size_t>& objs) const
    {
        std::vector<std::int64_t> pos(objects_.size(), -1);
        for (std::size_t i = 0; i < objs.size(); ++i)
            pos[objs[i]] = static_cast<std::int64_t>(i);
        std::vector<std::string> labels;
        for (auto o : objs)
            labels.push_back(objects_[o]);
        std::vector<Arrow> arrows;
        std::vector<std::size_t> amb;
        std::vector<std::int64_t> back(arrows_.size(), -1);
        for (std::size_t k = 0; k < arrows_.size(); ++k) {
            auto s = pos[arrows_[k].source], t = pos[arrows_[k].target];
            if (s < 0 || t < 0)
                continue;
            back[k] = static_cast<std::int64_t>(arrows.size());
            arrows.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(t)});
            amb.push_back(k);
        }
        std::vector<std::size_t> ids;
        for (auto o : objs)
            ids.push_back(static_cast<std::size_t>(back[ids_[o]]));
        const std::size_t m = arrows.size();
        std::vector<std::int32_t> comp(m * m, -1);
        for (std::size_t g = 0; g < m; ++g)
            for (std::size_t f = 0; f < m; ++f)
                if (auto c = compose(amb[g], amb[f]))
                    comp[g * m + f] = static_cast<std::int32_t>(back[*c]);
        return {FinCat(std::move(labels), std::move(arrows), std::move(ids), std::move(comp), false), amb};
    }

    std::string to_dot(const std::string& name = "C") const
    {
        std::ostringstream os;
        os << "digraph " << name << " {\n";
        for (std::size_t o = 0; o < objects_.size(); ++o)
            os << "  n" << o << " [label=\"" << objects_[o] << "\"];\n";
        for (auto const& a : arrows_)
            if (a.source != a.target)
                os << "  n" << a.source << " -> n" << a.target << ";\n";
        os << "}\n";
        return os.str();
    }

  private:
    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::vector<std::size_t> ids_;
    std::vector<std::int32_t> comp_;
};

/// Functor between finite categories given on objects and arrows.
struct Functor {
    const FinCat* source = nullptr;
    const FinCat* target = nullptr;
    std::vector<std::size_t> on_objects;
    std::vector<std::size_t> on_arrows;

    /// Checks endpoints, identities and composites.
    bool is_functorial() const
    {
        for (std::size_t o = 0; o < source->num_objects(); ++o)
            if (on_arrows[source->identity(o)] != target->identity(on_objects[o]))
                return false;
        for (std::size_t a = 0; a < source->num_arrows(); ++a) {
            auto const& ar = source->arrow(a);
            auto const& im = target->arrow(on_arrows[a]);
            if (im.source != on_objects[ar.source] || im.target != on_objects[ar.target])
                return false;
        }
        for (std::size_t g = 0; g < source->num_arrows(); ++g)
            for (std::size_t f = 0; f < source->num_arrows(); ++f)
                if (auto c = source->compose(g, f))
                    if (on_arrows[*c] != *target->compose(on_arrows[g], on_arrows[f]))
                        return false;
        return true;
    }
};

/// Inclusion functor of a full subcategory produced by FinCat::full_subcategory.
inline Functor inclusion_functor(const FinCat& sub, const FinCat& ambient, const std::vector<std::size_t>& objects,
                                 const std::vector<std::size_t>& arrows)
{
    return Functor{&sub, &ambient, objects, arrows};
}

/**
 * Comma category (k ↓ L): objects are pairs (c, f : k -> L c); arrows
 * (c, f) -> (c', f') are u : c -> c' with L(u) ∘ f = f'.
 */
struct CommaCategory {
    std::vector<std::pair<std::size_t, std::size_t>> objects;
    std::vector<std::pair<std::size_t, std::size_t>> arrows;  // endpoints as object indices
};

inline CommaCategory comma_category(const Functor& L, std::size_t k)
{
    CommaCategory out;
    const FinCat& D = *L.target;
    for (std::size_t c = 0; c < L.source->num_objects(); ++c)
        for (auto f : D.hom(k, L.on_objects[c]))
            out.objects.emplace_back(c, f);
    for (std::size_t i = 0; i < out.objects.size(); ++i)
        for (std::size_t j = 0; j < out.objects.size(); ++j) {
            auto [c, f] = out.objects[i];
            auto [c2, f2] = out.objects[j];
            for (auto u : L.source->hom(c, c2))
                if (*D.compose(L.on_arrows[u], f) == f2)
                    out.arrows.emplace_back(i, j);
        }
    return out;
}

/// True iff every comma category (k ↓ L) is nonempty and connected.
inline bool is_final_functor(const Functor& L)
{
    for (std::size_t k = 0; k < L.target->num_objects(); ++k) {
        auto cc = comma_category(L, k);
        if (cc.objects.empty())
            return false;
        std::vector<std::size_t> parent(cc.objects.size());
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t a) {
            while (parent[a] != a)
                a = parent[a] = parent[parent[a]];
            return a;
        };
        std::size_t comps = cc.objects.size();
        for (auto [a, b] : cc.arrows) {
            auto ra = find(a), rb = find(b);
            if (ra != rb) {
                parent[ra] = rb;
                --comps;
            }
        }
        if (comps != 1)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Order complexes and extended simplices
// ---------------------------------------------------------------------------

using Chain = std::vector<std::size_t>;

/// All nonempty chains x0 < ... < xn of P, by length then lexicographically.
inline std::vector<Chain> order_complex(const BoundedPoset& P)
{
    std::vector<Chain> out;
    Chain cur;
    auto rec = [&](auto&& self) -> void {
        out.push_back(cur);
        for (std::size_t y = 0; y < P.size(); ++y)
            if (P.less(cur.back(), y)) {
                cur.push_back(y);
                self(self);
                cur.pop_back();
            }
    };
    for (std::size_t x = 0; x < P.size(); ++x) {
        cur = {x};
        rec(rec);
    }
    std::sort(out.begin(), out.end(), [](const Chain& a, const Chain& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

/// Strict chain from the bottom to the top of a poset.
using ExtSimplex = Chain;

inline std::string label(const BoundedPoset& P, const ExtSimplex& s)
{
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i)
            out += ",";
        out += P.name(s[i]);
    }
    return out + ")";
}

inline bool is_ext_simplex(const BoundedPoset& P, const ExtSimplex& s)
{
    if (s.size() < 2 || s.front() != P.bottom() || s.back() != P.top())
        return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!P.less(s[i - 1], s[i]))
            return false;
    return true;
}

/// Sum of squared chain lengths of consecutive elements. Bounded by ℓ(0,1)².
inline std::uint64_t degree(const BoundedPoset& P, const ExtSimplex& s)
{
    std::uint64_t d = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        auto l = static_cast<std::uint64_t>(P.chain_length(s[i - 1], s[i]));
        d += l * l;
    }
    return d;
}

/// Set containment of chains (both sorted along the order).
inline bool refines(const BoundedPoset& P, const ExtSimplex& finer, const ExtSimplex& coarser)
{
    (void)P;
    std::size_t i = 0;
    for (auto x : coarser) {
        while (i < finer.size() && finer[i] != x)
            ++i;
        if (i == finer.size())
            return false;
    }
    return true;
}

/**
 * The category whose objects are chains from bottom to top and with an
 * arrow β -> α whenever α is obtained from β by deleting interior elements.
 * Objects are sorted by degree, then lexicographically; the two-element
 * chain comes last and is terminal.
 */
class DeltaExt {
  public:
    explicit DeltaExt(const BoundedPoset& P, bool check = false) : P_(P)
    {
        if (P.size() < 2)
            throw Error(ErrorKind::NotBounded, "needs distinct bottom and top");
        ExtSimplex cur{P.bottom()};
        auto rec = [&](auto&& self) -> void {
            if (cur.back() == P.top()) {
                objects_.push_back(cur);
                return;
            }
            for (std::size_t y = 0; y < P.size(); ++y)
                if (P.less(cur.back(), y)) {
                    cur.push_back(y);
                    self(self);
                    cur.pop_back();
                }
        };
        rec(rec);
        std::sort(objects_.begin(), objects_.end(), [&](const ExtSimplex& a, const ExtSimplex& b) {
            auto da = degree(P, a), db = degree(P, b);
            return da != db ? da < db : a < b;
        });
        for (std::size_t i = 0; i < objects_.size(); ++i)
            index_[objects_[i]] = i;
        const std::size_t n = objects_.size();
        std::vector<std::vector<bool>> hom(n, std::vector<bool>(n, false));
        std::vector<std::string> labels;
        for (std::size_t a = 0; a < n; ++a) {
            labels.push_back(dihoto::label(P, objects_[a]));
            for (std::size_t b = 0; b < n; ++b)
                hom[a][b] = refines(P, objects_[a], objects_[b]);
        }
        cat_ = FinCat::thin(std::move(labels), hom, check);
    }

    const BoundedPoset& poset() const { return P_; }
    const FinCat& category() const { return cat_; }
    const std::vector<ExtSimplex>& objects() const { return objects_; }
    std::size_t size() const { return objects_.size(); }
    const ExtSimplex& object(std::size_t i) const { return objects_[i]; }
    std::size_t index(const ExtSimplex& s) const
    {
        auto it = index_.find(s);
        if (it == index_.end())
            throw std::out_of_range("not a chain from bottom to top: " + dihoto::label(P_, s));
        return it->second;
    }
    std::size_t terminal() const { return index({P_.bottom(), P_.top()}); }
    std::uint64_t degree_of(std::size_t i) const { return degree(P_, objects_[i]); }

    /// Objects strictly finer than `s`, with the full subcategory on them.
    std::vector<std::size_t> latching_objects(std::size_t s) const
    {
        std::vector<std::size_t> out;
        for (std::size_t b = 0; b < size(); ++b)
            if (b != s && cat_.hom(b, s).size() == 1)
                out.push_back(b);
        return out;
    }

    /// Targets of non-identity arrows out of `s` that lower the degree.
    std::vector<std::size_t> matching_objects(std::size_t s) const
    {
        std::vector<std::size_t> out;
        for (std::size_t b = 0; b < size(); ++b)
            if (b != s && cat_.hom(s, b).size() == 1 && degree_of(b) < degree_of(s))
                out.push_back(b);
        return out;
    }

    std::string to_dot() const { return cat_.to_dot("DeltaExtOp"); }

  private:
    BoundedPoset P_;
    std::vector<ExtSimplex> objects_;
    std::map<ExtSimplex, std::size_t> index_;
    FinCat cat_;
};

inline DeltaExt delta_ext_op(const BoundedPoset& P) { return DeltaExt(P); }

struct SubCategory {
    FinCat category;
    std::vector<std::size_t> objects;  // ambient object per sub-object
    std::vector<std::size_t> arrows;   // ambient arrow per sub-arrow
};

inline SubCategory latching_category(const DeltaExt& D, std::size_t s)
{
    auto objs = D.latching_objects(s);
    auto [cat, arrows] = D.category().full_subcategory(objs);
    return {std::move(cat), std::move(objs), std::move(arrows)};
}

inline SubCategory matching_category(const DeltaExt& D, std::size_t s)
{
    auto objs = D.matching_objects(s);
    auto [cat, arrows] = D.category().full_subcategory(objs);
    return {std::move(cat), std::move(objs), std::move(arrows)};
}

struct DirectReport {
    bool ok = true;
    std::size_t arrows_checked = 0;
    std::size_t triples_checked = 0;
    std::vector<std::string> violations;
};

/**
 * Checks that every non-identity arrow strictly raises the degree, and that
 * every interior element of every chain strictly splits the squared length.
 */
inline DirectReport verify_direct(const DeltaExt& D)
{
    DirectReport r;
    const auto& P = D.poset();
    const auto& C = D.category();
    for (std::size_t a = 0; a < C.num_arrows(); ++a) {
        if (C.is_identity(a))
            continue;
        ++r.arrows_checked;
        auto const& ar = C.arrow(a);
        if (D.degree_of(ar.source) >= D.degree_of(ar.target)) {
            r.ok = false;
            r.violations.push_back(label(P, D.object(ar.source)) + " -> " + label(P, D.object(ar.target)));
        }
    }
    for (auto const& s : D.objects())
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            ++r.triples_checked;
            auto a = P.chain_length(s[i - 1], s[i]);
            auto b = P.chain_length(s[i], s[i + 1]);
            auto c = P.chain_length(s[i - 1], s[i + 1]);
            if (a * a + b * b >= c * c) {
                r.ok = false;
                r.violations.push_back("triple " + P.name(s[i - 1]) + "<" + P.name(s[i]) + "<" + P.name(s[i + 1]));
            }
        }
    return r;
}

inline DirectReport verify_direct(const BoundedPoset& P) { return verify_direct(DeltaExt(P)); }

}  // namespace dihoto
