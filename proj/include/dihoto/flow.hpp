#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "colim.hpp"
#include "homology.hpp"
#include "poset.hpp"
#include "sset.hpp"

namespace dihoto {

/// Composition P_ab × P_bc -> P_ac together with its domain product.
struct Composition {
    Product domain;
    SMap map;
};

/**
 * Finite flow: states, path spaces for the pairs with nonempty paths, and
 * composition maps for every composable pair of nonempty path spaces.
 */
class Flow {
  public:
    using Pair = std::pair<std::size_t, std::size_t>;
    using Triple = std::array<std::size_t, 3>;

    Flow() = default;
    explicit Flow(std::vector<std::string> states) : states_(std::move(states)) {}

    std::size_t num_states() const { return states_.size(); }
    const std::string& name(std::size_t s) const { return states_.at(s); }
    const std::vector<std::string>& names() const { return states_; }
    std::optional<std::size_t> index(std::string_view nm) const
    {
        for (std::size_t i = 0; i < states_.size(); ++i)
            if (states_[i] == nm)
                return i;
        return std::nullopt;
    }

    bool nonempty(std::size_t a, std::size_t b) const { return paths_.count({a, b}) > 0; }

    const SSet& path(std::size_t a, std::size_t b) const
    {
        auto it = paths_.find({a, b});
        if (it == paths_.end())
            return empty_;
        return it->second;
    }

    const std::map<Pair, SSet>& paths() const { return paths_; }
    const std::map<Triple, Composition>& compositions() const { return comps_; }

    /// Stores a path space; an empty one removes the pair.
    void set_path(std::size_t a, std::size_t b, SSet x)
    {
        if (x.empty())
            paths_.erase({a, b});
        else
            paths_[{a, b}] = std::move(x);
    }

    void set_composition(std::size_t a, std::size_t b, std::size_t c, Composition comp)
    {
        comps_.insert_or_assign(Triple{a, b, c}, std::move(comp));
    }

    const Composition* composition(std::size_t a, std::size_t b, std::size_t c) const
    {
        auto it = comps_.find({a, b, c});
        return it == comps_.end() ? nullptr : &it->second;
    }

    /// x * y for simplices of equal dimension in P_ab and P_bc.
    Simplex compose(std::size_t a, std::size_t b, std::size_t c, const Simplex& x, const Simplex& y) const
    {
        auto const* comp = composition(a, b, c);
        if (!comp)
            throw std::logic_error("no composition for " + name(a) + "," + name(b) + "," + name(c));
        return comp->map(comp->domain.pair(x, y));
    }

    /// Iterated composite along consecutive states.
    Simplex compose_along(const std::vector<std::size_t>& points, const std::vector<Simplex>& parts) const
    {
        Simplex acc = parts.at(0);
        for (std::size_t k = 1; k < parts.size(); ++k)
            acc = compose(points[0], points[k], points[k + 1], acc, parts[k]);
        return acc;
    }

    /// Triples (a, b, c) with P_ab and P_bc nonempty.
    std::vector<Triple> composable_triples() const
    {
        std::vector<Triple> out;
        for (auto const& [ab, x] : paths_)
            for (std::size_t c = 0; c < states_.size(); ++c)
                if (nonempty(ab.second, c))
                    out.push_back({ab.first, ab.second, c});
        return out;
    }

  private:
    std::vector<std::string> states_;
    std::map<Pair, SSet> paths_;
    std::map<Triple, Composition> comps_;
    SSet empty_;
};

/// Builds the composition map from a formula on pairs of simplices.
inline Composition make_composition(const SSet& pab, const SSet& pbc, const SSet& pac,
                                    const std::function<Simplex(const Simplex&, const Simplex&)>& fn,
                                    bool validate = true)
{
    Product dom(pab, pbc);
    std::vector<Simplex> im;
    im.reserve(dom.space().size());
    for (std::uint32_t id = 0; id < dom.space().size(); ++id) {
        auto s = dom.space().simplex(id);
        im.push_back(fn(dom.first(s), dom.second(s)));
    }
    SMap m(dom.space(), pac, std::move(im), validate);
    return {std::move(dom), std::move(m)};
}

/// The flow with one execution path between any two comparable elements.
inline Flow F(const BoundedPoset& P)
{
    Flow f(P.names());
    const SSet pt = point();
    for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t b = 0; b < P.size(); ++b)
            if (P.less(a, b))
                f.set_path(a, b, pt);
    for (auto [a, b, c] : f.composable_triples())
        f.set_composition(a, b, c,
                          make_composition(pt, pt, pt, [](const Simplex& x, const Simplex&) { return x; }, false));
    return f;
}

/// Partial order on states generated by nonempty path spaces.
inline BoundedPoset state_order(const Flow& X)
{
    std::vector<BoundedPoset::Cover> rel;
    for (auto const& [ab, p] : X.paths()) {
        if (ab.first == ab.second)
            throw Error(ErrorKind::NotLoopless, "state '" + X.name(ab.first) + "' has a loop");
        rel.push_back(ab);
    }
    try {
        return BoundedPoset::closure(X.names(), rel);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CycleDetected)
            throw Error(ErrorKind::NotLoopless, e.what());
        throw;
    }
}

struct Clause {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct BallCertificate {
    std::vector<Clause> clauses;

    bool ok() const
    {
        for (auto const& c : clauses)
            if (!c.ok)
                return false;
        return true;
    }

    const Clause& clause(std::string_view nm) const
    {
        for (auto const& c : clauses)
            if (c.name == nm)
                return c;
        throw std::out_of_range("no clause named " + std::string(nm));
    }

    std::string to_string() const
    {
        std::ostringstream os;
        for (auto const& c : clauses)
            os << c.name << ": " << (c.ok ? "ok" : "FAIL") << (c.detail.empty() ? "" : " (" + c.detail + ")")
               << "\n";
        return os.str();
    }
};

/// Checks the five defining conditions of a full directed ball; path
/// spaces are tested for contractibility through homology.
inline BallCertificate is_full_directed_ball(const Flow& X)
{
    BallCertificate cert;
    const std::size_t n = X.num_states();
    cert.clauses.push_back({"finite", n > 0, n > 0 ? "" : "no states"});

    std::vector<std::size_t> initial, final_;
    for (std::size_t s = 0; s < n; ++s) {
        bool in = false, out = false;
        for (std::size_t t = 0; t < n; ++t) {
            in = in || X.nonempty(t, s);
            out = out || X.nonempty(s, t);
        }
        if (!in)
            initial.push_back(s);
        if (!out)
            final_.push_back(s);
    }
    Clause ends{"initial_final", true, ""};
    if (initial.size() != 1 || final_.size() != 1 || initial[0] == final_[0]) {
        ends.ok = false;
        ends.detail = std::to_string(initial.size()) + " initial, " + std::to_string(final_.size()) + " final";
    }
    cert.clauses.push_back(ends);

    Clause loop{"loopless", true, ""};
    for (std::size_t a = 0; a < n && loop.ok; ++a)
        for (std::size_t b = a; b < n; ++b)
            if (X.nonempty(a, b) && X.nonempty(b, a)) {
                loop.ok = false;
                loop.detail = "loop through " + X.name(a) + (a == b ? "" : " and " + X.name(b));
                break;
            }
    // longer cycles are caught through the order closure
    std::optional<BoundedPoset> order;
    if (loop.ok) {
        try {
            order = state_order(X);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NotLoopless) {
                loop.ok = false;
                loop.detail = e.what();
            }
        }
    }
    Clause between{"between", true, ""};
    if (ends.ok) {
        auto z = initial[0], o = final_[0];
        for (std::size_t s = 0; s < n; ++s)
            if ((s != z && !X.nonempty(z, s)) || (s != o && !X.nonempty(s, o))) {
                between.ok = false;
                between.detail = "state " + X.name(s);
                break;
            }
    } else {
        between.ok = false;
        between.detail = "no unique initial and final state";
    }
    cert.clauses.push_back(between);
    cert.clauses.push_back(loop);

    Clause paths{"contractible_paths", true, ""};
    for (std::size_t a = 0; a < n && paths.ok; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            bool less = order ? order->less(a, b) : X.nonempty(a, b);
            if (!less && X.nonempty(a, b)) {
                paths.ok = false;
                paths.detail = "P(" + X.name(a) + "," + X.name(b) + ") should be empty";
                break;
            }
            if (less && !is_homology_contractible(X.path(a, b))) {
                paths.ok = false;
                paths.detail = "P(" + X.name(a) + "," + X.name(b) + ") is not contractible";
                break;
            }
        }
    cert.clauses.push_back(paths);
    return cert;
}

/// The flow on a subset of states with inherited paths and compositions.
/// States keep the order of `subset`.
inline Flow restriction(const Flow& X, const std::vector<std::size_t>& subset)
{
    std::vector<std::string> names;
    for (auto s : subset)
        names.push_back(X.name(s));
    Flow out(std::move(names));
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = 0; j < subset.size(); ++j)
            if (X.nonempty(subset[i], subset[j]))
                out.set_path(i, j, X.path(subset[i], subset[j]));
    for (auto [i, j, k] : out.composable_triples()) {
        auto const* c = X.composition(subset[i], subset[j], subset[k]);
        if (!c)
            throw std::logic_error("missing composition in restricted flow");
        out.set_composition(i, j, k, *c);
    }
    return out;
}

/// Restriction to the interval [a, b] of the state order, in index order.
inline Flow restriction(const Flow& X, std::size_t a, std::size_t b)
{
    return restriction(X, state_order(X).interval_elements(a, b));
}

namespace detail {

inline std::pair<std::size_t, std::size_t> ball_ends(const Flow& X)
{
    auto cert = is_full_directed_ball(X);
    if (!cert.ok())
        throw Error(ErrorKind::NotABall, cert.to_string());
    auto P = state_order(X);
    return {P.bottom(), P.top()};
}

}  // namespace detail

/**
 * D * D': identifies the final state of D with the initial state of D'.
 * States of D come first (in order), then the other states of D'. A name
 * of D' already used in D gets a prime appended.
 */
inline Flow concat(const Flow& D, const Flow& E)
{
    auto [d0, d1] = detail::ball_ends(D);
    auto [e0, e1] = detail::ball_ends(E);
    (void)d0;
    (void)e1;
    const std::size_t nd = D.num_states();
    std::vector<std::string> names = D.names();
    std::vector<std::size_t> pos(E.num_states());
    for (std::size_t s = 0; s < E.num_states(); ++s) {
        if (s == e0) {
            pos[s] = d1;
            continue;
        }
        std::string nm = E.name(s);
        while (std::find(names.begin(), names.end(), nm) != names.end())
            nm += "'";
        pos[s] = names.size();
        names.push_back(nm);
    }
    const std::size_t m = d1;
    Flow out(names);
    const std::size_t total = names.size();
    // side[s]: 0 = D only, 1 = E only, 2 = the glued state
    std::vector<int> side(total, 0);
    std::vector<std::size_t> in_d(total, 0), in_e(total, 0);
    for (std::size_t s = 0; s < nd; ++s)
        in_d[s] = s;
    for (std::size_t s = 0; s < E.num_states(); ++s) {
        in_e[pos[s]] = s;
        if (s != e0)
            side[pos[s]] = 1;
    }
    side[m] = 2;
    in_e[m] = e0;
    auto d_side = [&](std::size_t s) { return side[s] != 1; };
    auto e_side = [&](std::size_t s) { return side[s] != 0; };

    std::map<Flow::Pair, Product> cross;
    for (std::size_t a = 0; a < total; ++a)
        for (std::size_t b = 0; b < total; ++b) {
            if (d_side(a) && d_side(b)) {
                if (D.nonempty(in_d[a], in_d[b]))
                    out.set_path(a, b, D.path(in_d[a], in_d[b]));
            } else if (e_side(a) && e_side(b)) {
                if (E.nonempty(in_e[a], in_e[b]))
                    out.set_path(a, b, E.path(in_e[a], in_e[b]));
            } else if (side[a] == 0 && side[b] == 1) {
                auto it = cross.emplace(Flow::Pair{a, b}, Product(D.path(in_d[a], m), E.path(e0, in_e[b]))).first;
                out.set_path(a, b, it->second.space());
            }
        }
    for (auto [a, b, c] : out.composable_triples()) {
        const SSet& pab = out.path(a, b);
        const SSet& pbc = out.path(b, c);
        const SSet& pac = out.path(a, c);
        std::function<Simplex(const Simplex&, const Simplex&)> fn;
        if (d_side(a) && d_side(b) && d_side(c)) {
            out.set_composition(a, b, c, *D.composition(in_d[a], in_d[b], in_d[c]));
            continue;
        }
        if (e_side(a) && e_side(b) && e_side(c)) {
            out.set_composition(a, b, c, *E.composition(in_e[a], in_e[b], in_e[c]));
            continue;
        }
        const Product& ac = cross.at({a, c});
        if (side[b] == 2) {
            fn = [&ac](const Simplex& x, const Simplex& y) { return ac.pair(x, y); };
        } else if (side[b] == 0) {
            const Product& bc = cross.at({b, c});
            fn = [&, bc](const Simplex& x, const Simplex& y) {
                return ac.pair(D.compose(in_d[a], in_d[b], m, x, bc.first(y)), bc.second(y));
            };
        } else {
            const Product& ab = cross.at({a, b});
            fn = [&, ab](const Simplex& x, const Simplex& y) {
                return ac.pair(ab.first(x), E.compose(e0, in_e[b], in_e[c], ab.second(x), y));
            };
        }
        out.set_composition(a, b, c, make_composition(pab, pbc, pac, fn));
    }
    return out;
}

struct AssociativityReport {
    bool ok = true;
    std::size_t quadruples = 0;
    std::size_t simplices = 0;
    std::vector<std::string> failures;
};

/// (x*y)*z == x*(y*z) on every nondegenerate simplex of every triple product.
inline AssociativityReport check_associativity(const Flow& X)
{
    AssociativityReport r;
    const std::size_t n = X.num_states();
    for (auto [a, b, c] : X.composable_triples())
        for (std::size_t d = 0; d < n; ++d) {
            if (!X.nonempty(c, d))
                continue;
            ++r.quadruples;
            ProductN triple({X.path(a, b), X.path(b, c), X.path(c, d)});
            for (std::uint32_t id = 0; id < triple.space().size(); ++id) {
                auto comps = triple.components(triple.space().simplex(id));
                ++r.simplices;
                auto lhs = X.compose(a, c, d, X.compose(a, b, c, comps[0], comps[1]), comps[2]);
                auto rhs = X.compose(a, b, d, comps[0], X.compose(b, c, d, comps[1], comps[2]));
                if (lhs != rhs) {
                    r.ok = false;
                    r.failures.push_back(X.name(a) + "," + X.name(b) + "," + X.name(c) + "," + X.name(d));
                    break;
                }
            }
        }
    return r;
}

// ---------------------------------------------------------------------------
// Cell attachment
// ---------------------------------------------------------------------------

/**
 * Data of one pair (a, b) whose path space grows when a cell is attached
 * between s and t: the new space is the colimit of
 * [old P_ab, L × T × R, L × old P_st × R], where L = P_as (absent when
 * a = s) and R = P_tb (absent when b = t).
 */
struct AttachedPair {
    bool has_left = false;
    bool has_right = false;
    ProductN cell_side;
    ProductN old_side;
    Colimit colim;
};

struct Attachment {
    Flow flow;
    std::size_t source = 0;
    std::size_t target = 0;
    SSet disk;
    SSet sphere;
    SMap attach;
    Colimit cell;  // pushout of old P_st <- sphere -> disk, objects [old, disk, sphere]
    std::map<Flow::Pair, AttachedPair> grown;

    /// A simplex of a grown path space either comes from the old space or
    /// passes through the new cell once.
    struct Decoded {
        bool old = true;
        Simplex old_simplex;
        std::optional<Simplex> left, right;
        Simplex cell_simplex;  // simplex of the attached space T
    };

    Decoded decode(std::size_t a, std::size_t b, const Simplex& s) const
    {
        auto it = grown.find({a, b});
        Decoded d;
        if (it == grown.end()) {
            d.old_simplex = s;
            return d;
        }
        auto const& g = it->second;
        auto [obj, id] = g.colim.reps[s.base];
        Simplex local{id, s.degen};
        if (obj == 0) {
            d.old_simplex = local;
            return d;
        }
        if (obj != 1)
            throw std::logic_error("unexpected representative in attached path space");
        d.old = false;
        auto comps = g.cell_side.components(local);
        std::size_t k = 0;
        if (g.has_left)
            d.left = comps[k++];
        d.cell_simplex = comps[k++];
        if (g.has_right)
            d.right = comps[k];
        return d;
    }

    /// Image of an old simplex of P_ab in the new flow.
    Simplex from_old(std::size_t a, std::size_t b, const Simplex& s) const
    {
        auto it = grown.find({a, b});
        if (it == grown.end())
            return s;
        return it->second.colim.legs[0](s);
    }

    /// Simplex of the new P_ab passing through the cell.
    Simplex through_cell(std::size_t a, std::size_t b, const std::optional<Simplex>& left, const Simplex& t,
                         const std::optional<Simplex>& right) const
    {
        auto const& g = grown.at({a, b});
        std::vector<Simplex> comps;
        if (g.has_left)
            comps.push_back(*left);
        comps.push_back(t);
        if (g.has_right)
            comps.push_back(*right);
        return g.colim.legs[1](g.cell_side.tuple(comps));
    }
};

/**
 * Attaches a globular cell along `attach : sphere -> P_st` where `sphere`
 * sits inside `disk` through `boundary` (ids preserved). Under
 * looplessness the cell is traversed at most once by any path, so a
 * single pushout per grown pair suffices.
 */
inline Attachment attach_cell(const Flow& X, std::size_t s, std::size_t t, const SMap& boundary, const SMap& attach,
                              bool validate = true)
{
    const std::size_t n = X.num_states();
    if (s >= n || t >= n)
        throw std::out_of_range("attach_cell: unknown state");
    if (s == t || X.nonempty(t, s))
        throw Error(ErrorKind::WouldCreateLoop, "cell from " + X.name(s) + " to " + X.name(t));
    if (attach.target().size() != X.path(s, t).size() || attach.source().size() != boundary.source().size())
        throw std::invalid_argument("attach_cell: attaching map has the wrong shape");

    Attachment out;
    out.source = s;
    out.target = t;
    out.disk = boundary.target();
    out.sphere = boundary.source();
    out.attach = attach;
    const SSet old_st = X.path(s, t);
    // attaching map and path spaces are recomputed against the stored old space
    SMap att(attach.source(), old_st, attach.images(), false);
    out.cell = pushout(att, boundary);
    const SSet T = out.cell.apex;

    auto before = [&](std::size_t a) { return a == s || X.nonempty(a, s); };
    auto after = [&](std::size_t b) { return b == t || X.nonempty(t, b); };

    Flow Y(X.names());
    for (auto const& [ab, p] : X.paths())
        Y.set_path(ab.first, ab.second, p);

    for (std::size_t a = 0; a < n; ++a) {
        if (!before(a))
            continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (!after(b))
                continue;
            AttachedPair g;
            g.has_left = a != s;
            g.has_right = b != t;
            std::vector<SSet> cf, of;
            if (g.has_left) {
                cf.push_back(X.path(a, s));
                of.push_back(X.path(a, s));
            }
            cf.push_back(T);
            of.push_back(old_st);
            if (g.has_right) {
                cf.push_back(X.path(t, b));
                of.push_back(X.path(t, b));
            }
            g.cell_side = ProductN(cf);
            g.old_side = ProductN(of);
            Diagram d;
            d.add_object(X.path(a, b));
            d.add_object(g.cell_side.space());
            d.add_object(g.old_side.space());
            std::vector<Simplex> to_old, to_cell;
            for (std::uint32_t id = 0; id < g.old_side.space().size(); ++id) {
                auto comps = g.old_side.components(g.old_side.space().simplex(id));
                std::size_t k = 0;
                std::optional<Simplex> l, r;
                if (g.has_left)
                    l = comps[k++];
                Simplex mid = comps[k++];
                if (g.has_right)
                    r = comps[k];
                Simplex v = mid;
                if (l)
                    v = X.compose(a, s, t, *l, v);
                if (r)
                    v = X.compose(a, t, b, v, *r);
                to_old.push_back(v);
                comps[g.has_left ? 1 : 0] = out.cell.legs[0](mid);
                to_cell.push_back(g.cell_side.tuple(comps));
            }
            d.add_edge(2, 0, SMap(g.old_side.space(), X.path(a, b), std::move(to_old), validate));
            d.add_edge(2, 1, SMap(g.old_side.space(), g.cell_side.space(), std::move(to_cell), validate));
            g.colim = colimit(d);
            Y.set_path(a, b, g.colim.apex);
            out.grown.emplace(Flow::Pair{a, b}, std::move(g));
        }
    }
    out.flow = std::move(Y);

    const Attachment& A = out;
    for (auto [a, b, c] : out.flow.composable_triples()) {
        bool touched = A.grown.count({a, b}) || A.grown.count({b, c}) || A.grown.count({a, c});
        if (!touched) {
            out.flow.set_composition(a, b, c, *X.composition(a, b, c));
            continue;
        }
        auto fn = [&, a, b, c](const Simplex& x, const Simplex& y) -> Simplex {
            auto dx = A.decode(a, b, x);
            auto dy = A.decode(b, c, y);
            if (dx.old && dy.old)
                return A.from_old(a, c, X.compose(a, b, c, dx.old_simplex, dy.old_simplex));
            if (!dx.old && !dy.old)
                throw std::logic_error("a path crosses the attached cell twice");
            if (!dx.old) {
                // x = l * cell * r with r in P_tb
                std::optional<Simplex> r = dx.right ? X.compose(t, b, c, *dx.right, dy.old_simplex) : dy.old_simplex;
                return A.through_cell(a, c, dx.left, dx.cell_simplex, r);
            }
            std::optional<Simplex> l = dy.left ? X.compose(a, b, s, dx.old_simplex, *dy.left) : dx.old_simplex;
            return A.through_cell(a, c, l, dy.cell_simplex, dy.right);
        };
        out.flow.set_composition(a, b, c,
                                 make_composition(out.flow.path(a, b), out.flow.path(b, c), out.flow.path(a, c), fn,
                                                  validate));
    }
    return out;
}

/// Attaches a standard globular cell of dimension n (0, 1 or 2).
inline Attachment attach_cell(const Flow& X, int n, std::size_t s, std::size_t t, const SMap& attach)
{
    if (n < 0 || n > 2)
        throw Error(ErrorKind::UnsupportedDimension, "cell of dimension " + std::to_string(n));
    return attach_cell(X, s, t, boundary_inclusion(sphere(n - 1), disk(n)), attach);
}

// ---------------------------------------------------------------------------
// Morphisms, isomorphisms and dumps
// ---------------------------------------------------------------------------

/// Morphism of flows: a state map and one SMap per nonempty source pair.
struct FlowMap {
    const Flow* source = nullptr;
    const Flow* target = nullptr;
    std::vector<std::size_t> states;
    std::map<Flow::Pair, SMap> paths;

    /// Path maps land in the right spaces and commute with composition.
    bool is_morphism() const
    {
        for (auto const& [ab, p] : source->paths()) {
            auto it = paths.find(ab);
            if (it == paths.end())
                return false;
            if (!target->nonempty(states[ab.first], states[ab.second]))
                return false;
        }
        for (auto [a, b, c] : source->composable_triples()) {
            auto const* comp = source->composition(a, b, c);
            auto const& fab = paths.at({a, b});
            auto const& fbc = paths.at({b, c});
            auto const& fac = paths.at({a, c});
            for (std::uint32_t id = 0; id < comp->domain.space().size(); ++id) {
                auto sx = comp->domain.space().simplex(id);
                auto x = comp->domain.first(sx), y = comp->domain.second(sx);
                auto lhs = fac(comp->map(sx));
                auto rhs = target->compose(states[a], states[b], states[c], fab(x), fbc(y));
                if (lhs != rhs)
                    return false;
            }
        }
        return true;
    }

    bool is_isomorphism() const
    {
        if (source->num_states() != target->num_states() || source->paths().size() != target->paths().size())
            return false;
        std::vector<bool> hit(target->num_states(), false);
        for (auto s : states) {
            if (hit[s])
                return false;
            hit[s] = true;
        }
        for (auto const& [ab, m] : paths)
            if (!m.is_isomorphism())
                return false;
        return is_morphism();
    }
};

/// States in poset text format, then each path space and composition table.
inline std::string dump(const Flow& X)
{
    std::ostringstream os;
    for (std::size_t s = 0; s < X.num_states(); ++s)
        os << "elem " << X.name(s) << "\n";
    for (auto const& [ab, p] : X.paths())
        os << "cover " << X.name(ab.first) << " " << X.name(ab.second) << "\n";
    for (auto const& [ab, p] : X.paths()) {
        os << "path " << X.name(ab.first) << " " << X.name(ab.second) << "\n" << p.dump();
    }
    for (auto const& [abc, c] : X.compositions()) {
        os << "compose " << X.name(abc[0]) << " " << X.name(abc[1]) << " " << X.name(abc[2]) << "\n";
        for (std::uint32_t id = 0; id < c.map.source().size(); ++id)
            os << id << " -> " << to_string(c.map.at(id)) << "\n";
    }
    return os.str();
}

}  // namespace dihoto
