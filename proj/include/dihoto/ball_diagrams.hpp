#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "colim.hpp"
#include "flow.hpp"
#include "smallcat.hpp"

namespace dihoto {

/**
 * Products of consecutive path spaces P_{q0,q1} × ... × P_{q(k-1),qk} of a
 * flow along a chain of states, cached by chain, and the maps between them
 * that compose the factors of a finer chain into those of a coarser one.
 */
class PathProducts {
  public:
    explicit PathProducts(const Flow& D) : D_(&D) {}

    const Flow& flow() const { return *D_; }

    const ProductN& product(const std::vector<std::size_t>& points)
    {
        auto it = cache_.find(points);
        if (it != cache_.end())
            return it->second;
        std::vector<SSet> fs;
        for (std::size_t k = 1; k < points.size(); ++k)
            fs.push_back(D_->path(points[k - 1], points[k]));
        return cache_.emplace(points, ProductN(fs)).first->second;
    }

    /// Composes the parts of a simplex along `fine` into the parts along `coarse`.
    std::vector<Simplex> merge_parts(const std::vector<std::size_t>& fine, const std::vector<Simplex>& parts,
                                     const std::vector<std::size_t>& coarse) const
    {
        std::vector<Simplex> out;
        std::size_t i = 0;
        for (std::size_t k = 1; k < coarse.size(); ++k) {
            std::vector<std::size_t> pts{fine[i]};
            std::vector<Simplex> seg;
            while (fine[i] != coarse[k]) {
                seg.push_back(parts[i]);
                ++i;
                pts.push_back(fine[i]);
            }
            out.push_back(D_->compose_along(pts, seg));
        }
        return out;
    }

    SMap merge(const std::vector<std::size_t>& fine, const std::vector<std::size_t>& coarse)
    {
        const ProductN& src = product(fine);
        const ProductN& tgt = product(coarse);
        std::vector<Simplex> im;
        im.reserve(src.space().size());
        for (std::uint32_t id = 0; id < src.space().size(); ++id) {
            auto parts = src.components(src.space().simplex(id));
            im.push_back(tgt.tuple(merge_parts(fine, parts, coarse)));
        }
        return SMap(src.space(), tgt.space(), std::move(im), false);
    }

  private:
    const Flow* D_;
    std::map<std::vector<std::size_t>, ProductN> cache_;
};

/// Diagram over the chains of a full directed ball sending a chain to the
/// product of its consecutive path spaces and a coarsening to composition.
inline ExtDiagram Fdiag(const Flow& D, PathProducts& pp)
{
    auto shape = std::make_shared<const DeltaExt>(state_order(D));
    ExtDiagram out{shape, {}, {}};
    for (auto const& s : shape->objects())
        out.objects.push_back(pp.product(s).space());
    const auto& C = shape->category();
    for (std::size_t a = 0; a < C.num_arrows(); ++a) {
        auto const& ar = C.arrow(a);
        if (C.is_identity(a))
            out.maps.push_back(SMap::identity(out.objects[ar.source]));
        else
            out.maps.push_back(pp.merge(shape->object(ar.source), shape->object(ar.target)));
    }
    return out;
}

inline ExtDiagram Fdiag(const Flow& D)
{
    PathProducts pp(D);
    return Fdiag(D, pp);
}

// ---------------------------------------------------------------------------
// The diagram of flows
// ---------------------------------------------------------------------------

/// States of the concatenation of the restrictions of D to consecutive
/// intervals of `chain`, as state indices of D in ascending order.
inline std::vector<std::size_t> g_states(const BoundedPoset& P, const ExtSimplex& chain)
{
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < P.size(); ++x)
        for (std::size_t k = 1; k < chain.size(); ++k)
            if (P.leq(chain[k - 1], x) && P.leq(x, chain[k])) {
                out.push_back(x);
                break;
            }
    return out;
}

/// x, then the elements of `chain` strictly between x and y, then y.
inline std::vector<std::size_t> cut_points(const BoundedPoset& P, const ExtSimplex& chain, std::size_t x,
                                           std::size_t y)
{
    std::vector<std::size_t> out{x};
    for (auto c : chain)
        if (P.less(x, c) && P.less(c, y))
            out.push_back(c);
    out.push_back(y);
    return out;
}

/**
 * The flow D|[a0,a1] * ... * D|[a(p-1),ap] for a chain (a0, ..., ap), built
 * directly: its states are a subset of D's states (listed by g_states, kept
 * in that order) and a path from x to y is a tuple of paths between the
 * consecutive cut points.
 */
inline Flow g_flow(const Flow& D, const BoundedPoset& P, const ExtSimplex& chain, PathProducts& pp)
{
    auto st = g_states(P, chain);
    std::vector<std::string> names;
    for (auto s : st)
        names.push_back(D.name(s));
    Flow G(names);
    for (std::size_t i = 0; i < st.size(); ++i)
        for (std::size_t j = 0; j < st.size(); ++j)
            if (P.less(st[i], st[j]))
                G.set_path(i, j, pp.product(cut_points(P, chain, st[i], st[j])).space());
    for (auto [i, j, k] : G.composable_triples()) {
        auto xy = cut_points(P, chain, st[i], st[j]);
        auto yz = cut_points(P, chain, st[j], st[k]);
        auto xz = cut_points(P, chain, st[i], st[k]);
        std::vector<std::size_t> joined = xy;
        joined.insert(joined.end(), yz.begin() + 1, yz.end());
        const ProductN& pxy = pp.product(xy);
        const ProductN& pyz = pp.product(yz);
        const ProductN& pxz = pp.product(xz);
        auto fn = [&](const Simplex& u, const Simplex& v) {
            auto parts = pxy.components(u);
            auto rest = pyz.components(v);
            parts.insert(parts.end(), rest.begin(), rest.end());
            return pxz.tuple(pp.merge_parts(joined, parts, xz));
        };
        G.set_composition(i, j, k, make_composition(G.path(i, j), G.path(j, k), G.path(i, k), fn, false));
    }
    return G;
}

/// Morphism G(fine) -> G(coarse) induced by composition at the dropped cut points.
inline FlowMap g_arrow(const Flow& Gf, const Flow& Gc, const BoundedPoset& P, const ExtSimplex& fine,
                       const ExtSimplex& coarse, PathProducts& pp)
{
    auto sf = g_states(P, fine);
    auto sc = g_states(P, coarse);
    FlowMap m{&Gf, &Gc, {}, {}};
    for (auto s : sf)
        m.states.push_back(static_cast<std::size_t>(std::find(sc.begin(), sc.end(), s) - sc.begin()));
    for (auto const& [ij, x] : Gf.paths()) {
        auto a = sf[ij.first], b = sf[ij.second];
        m.paths.emplace(ij, pp.merge(cut_points(P, fine, a, b), cut_points(P, coarse, a, b)));
    }
    return m;
}

/// The flow with two states and Z as its only path space.
inline Flow glob_flow(const SSet& z)
{
    Flow g({"0", "1"});
    g.set_path(0, 1, z);
    return g;
}

/// Morphism Glob(P_{a0,a1} × ... × P_{a(p-1),ap}) -> G(chain): identity on paths.
inline FlowMap glob_to_g(const Flow& glob, const Flow& G, const BoundedPoset& P, const ExtSimplex& chain)
{
    auto st = g_states(P, chain);
    auto pos = [&](std::size_t s) { return static_cast<std::size_t>(std::find(st.begin(), st.end(), s) - st.begin()); };
    FlowMap m{&glob, &G, {pos(chain.front()), pos(chain.back())}, {}};
    m.paths.emplace(Flow::Pair{0, 1}, SMap(glob.path(0, 1), G.path(m.states[0], m.states[1]),
                                           SMap::identity(glob.path(0, 1)).images()));
    return m;
}

// ---------------------------------------------------------------------------
// Pushout against the maximal simplex
// ---------------------------------------------------------------------------

struct PushmaxReport {
    bool ok = true;
    std::size_t pairs_checked = 0;
    std::size_t triples_checked = 0;
    std::vector<std::string> failures;

    void fail(std::string s)
    {
        ok = false;
        failures.push_back(std::move(s));
    }
};

/**
 * Rebuilds D as the pushout of Glob(latching object of F) -> latching object
 * of G over Glob(P_01 D) and checks the canonical comparison to D.
 *
 * The latching flow of G is computed pairwise: its path space at (x, y) is
 * the colimit of the G(b)_{xy} over chains b strictly finer than (0,1), and
 * x*y*z is evaluated inside G(0,x,y,z,1), whose legs must be onto. Only the
 * pair (0,1) changes in the pushout, by gluing P_01 D along the latching
 * object of F.
 */
inline PushmaxReport pushmax_check(const Flow& D)
{
    PushmaxReport r;
    auto cert = is_full_directed_ball(D);
    if (!cert.ok()) {
        r.fail("not a full directed ball: " + cert.to_string());
        return r;
    }
    const BoundedPoset P = state_order(D);
    DeltaExt E(P);
    PathProducts pp(D);
    const std::size_t bot = P.bottom(), top = P.top();
    const auto lat = E.latching_objects(E.terminal());
    const auto& C = E.category();

    struct PairColim {
        std::vector<std::size_t> chains;  // latching chains contributing to this pair
        Colimit colim;
        SMap to_d;  // comparison to P^D_{xy}, or to the pushout at (0,1)
    };
    std::map<Flow::Pair, PairColim> lg;

    for (auto const& [xy, pd] : D.paths()) {
        auto [x, y] = xy;
        PairColim pc;
        Diagram d;
        std::vector<std::int64_t> pos(E.size(), -1);
        for (auto b : lat) {
            auto st = g_states(P, E.object(b));
            if (!std::binary_search(st.begin(), st.end(), x) || !std::binary_search(st.begin(), st.end(), y))
                continue;
            pos[b] = static_cast<std::int64_t>(d.add_object(pp.product(cut_points(P, E.object(b), x, y)).space()));
            pc.chains.push_back(b);
        }
        for (std::size_t a = 0; a < C.num_arrows(); ++a) {
            auto const& ar = C.arrow(a);
            if (C.is_identity(a) || pos[ar.source] < 0 || pos[ar.target] < 0)
                continue;
            d.add_edge(static_cast<std::size_t>(pos[ar.source]), static_cast<std::size_t>(pos[ar.target]),
                       pp.merge(cut_points(P, E.object(ar.source), x, y), cut_points(P, E.object(ar.target), x, y)));
        }
        pc.colim = colimit(d);
        std::vector<SMap> cocone;
        for (auto b : pc.chains)
            cocone.push_back(pp.merge(cut_points(P, E.object(b), x, y), {x, y}));
        auto m = pc.colim.mediate(cocone, pd);
        if (!m) {
            r.fail("no comparison at " + D.name(x) + "," + D.name(y));
            return r;
        }
        pc.to_d = *m;
        lg.emplace(xy, std::move(pc));
    }

    // the pushout at (0,1): P_01 D glued to the latching path space along the
    // latching object of F, which is the same colimit
    const SSet& p01 = D.path(bot, top);
    auto& top_pair = lg.at({bot, top});
    Diagram po;
    po.add_object(p01);
    po.add_object(top_pair.colim.apex);
    po.add_object(top_pair.colim.apex);
    po.add_edge(2, 0, top_pair.to_d);
    po.add_edge(2, 1, SMap::identity(top_pair.colim.apex));
    Colimit T = colimit(po);
    auto t_to_d = T.mediate({SMap::identity(p01), top_pair.to_d, top_pair.to_d}, p01);
    if (!t_to_d) {
        r.fail("pushout at (0,1) does not map to P_01");
        return r;
    }

    // comparison per pair: every path space of the pushout maps isomorphically
    for (auto const& [xy, pc] : lg) {
        ++r.pairs_checked;
        const SMap& cmp = (xy == Flow::Pair{bot, top}) ? *t_to_d : pc.to_d;
        if (!cmp.is_isomorphism())
            r.fail("comparison at " + D.name(xy.first) + "," + D.name(xy.second) + " is not an isomorphism");
    }
    auto into_pushout = [&](std::size_t x, std::size_t z, const Simplex& s) {
        // from the latching space at (x,z) to the pushout flow
        return (x == bot && z == top) ? T.legs[1](s) : s;
    };
    auto cmp_at = [&](std::size_t x, std::size_t z) -> const SMap& {
        return (x == bot && z == top) ? *t_to_d : lg.at({x, z}).to_d;
    };

    // composition: evaluate x*y*z in G(0,x,y,z,1), compare with D
    for (auto [x, y, z] : D.composable_triples()) {
        ++r.triples_checked;
        ExtSimplex chain{bot};
        for (auto s : {x, y, z})
            if (s != chain.back())
                chain.push_back(s);
        if (chain.back() != top)
            chain.push_back(top);
        const std::size_t b = E.index(chain);
        auto const& cxy = lg.at({x, y});
        auto const& cyz = lg.at({y, z});
        auto const& cxz = lg.at({x, z});
        auto leg_of = [&](const PairColim& pc, std::size_t chain_idx) -> const SMap& {
            auto it = std::find(pc.chains.begin(), pc.chains.end(), chain_idx);
            return pc.colim.legs[static_cast<std::size_t>(it - pc.chains.begin())];
        };
        const SMap& lxy = leg_of(cxy, b);
        const SMap& lyz = leg_of(cyz, b);
        if (!lxy.is_isomorphism() || !lyz.is_isomorphism()) {
            r.fail("leg of G" + label(P, chain) + " is not onto");
            continue;
        }
        // invert the legs
        std::vector<std::uint32_t> inv_xy(cxy.colim.apex.size()), inv_yz(cyz.colim.apex.size());
        for (std::uint32_t id = 0; id < lxy.images().size(); ++id)
            inv_xy[lxy.at(id).base] = id;
        for (std::uint32_t id = 0; id < lyz.images().size(); ++id)
            inv_yz[lyz.at(id).base] = id;
        const SMap& lxz = leg_of(cxz, b);
        const ProductN& gxz = pp.product(cut_points(P, chain, x, z));
        Product dom(cxy.colim.apex, cyz.colim.apex);
        const SMap& cmp_xz = cmp_at(x, z);
        for (std::uint32_t id = 0; id < dom.space().size(); ++id) {
            auto s = dom.space().simplex(id);
            auto u = dom.first(s), v = dom.second(s);
            Simplex gu{inv_xy[u.base], u.degen}, gv{inv_yz[v.base], v.degen};
            // in G(chain), y is a cut point: the composite is the pair
            auto composite = into_pushout(x, z, lxz(gxz.tuple({gu, gv})));
            auto lhs = cmp_xz(composite);
            auto rhs = D.compose(x, y, z, cxy.to_d(u), cyz.to_d(v));
            if (lhs != rhs) {
                r.fail("composition differs at " + D.name(x) + "," + D.name(y) + "," + D.name(z));
                break;
            }
        }
    }

    // legs of every G(b) must respect composition in the latching flow
    for (auto b : lat) {
        const auto& chain = E.object(b);
        auto st = g_states(P, chain);
        for (auto x : st)
            for (auto y : st)
                for (auto z : st) {
                    if (!P.less(x, y) || !P.less(y, z))
                        continue;
                    auto xy = cut_points(P, chain, x, y);
                    auto yz = cut_points(P, chain, y, z);
                    auto xz = cut_points(P, chain, x, z);
                    std::vector<std::size_t> joined = xy;
                    joined.insert(joined.end(), yz.begin() + 1, yz.end());
                    auto const& cxy = lg.at({x, y});
                    auto const& cyz = lg.at({y, z});
                    auto const& cxz = lg.at({x, z});
                    auto leg_of = [&](const PairColim& pc) -> const SMap& {
                        auto it = std::find(pc.chains.begin(), pc.chains.end(), b);
                        return pc.colim.legs[static_cast<std::size_t>(it - pc.chains.begin())];
                    };
                    const ProductN& pxy = pp.product(xy);
                    const ProductN& pyz = pp.product(yz);
                    const ProductN& pxz = pp.product(xz);
                    Product dom(pxy.space(), pyz.space());
                    for (std::uint32_t id = 0; id < dom.space().size(); ++id) {
                        auto s = dom.space().simplex(id);
                        auto u = dom.first(s), v = dom.second(s);
                        auto parts = pxy.components(u);
                        auto rest = pyz.components(v);
                        parts.insert(parts.end(), rest.begin(), rest.end());
                        auto in_g = pxz.tuple(pp.merge_parts(joined, parts, xz));
                        auto lhs = cmp_at(x, z)(into_pushout(x, z, leg_of(cxz)(in_g)));
                        auto rhs = D.compose(x, y, z, cxy.to_d(leg_of(cxy)(u)), cyz.to_d(leg_of(cyz)(v)));
                        if (lhs != rhs) {
                            r.fail("leg of G" + label(P, chain) + " does not respect composition");
                            break;
                        }
                    }
                }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Latching maps as pushout products
// ---------------------------------------------------------------------------

struct SimplificationEntry {
    std::string chain;
    bool comparison_exists = false;
    bool isomorphism = false;
    bool commutes = false;
    bool finality = true;
    bool ok() const { return comparison_exists && isomorphism && commutes && finality; }
};

struct SimplificationReport {
    std::vector<SimplificationEntry> entries;
    bool ok() const
    {
        for (auto const& e : entries)
            if (!e.ok())
                return false;
        return true;
    }
    std::size_t mismatches() const
    {
        std::size_t n = 0;
        for (auto const& e : entries)
            n += e.ok() ? 0 : 1;
        return n;
    }
};

namespace detail {

// Edge latching map of D restricted to [a, b], at that ball's terminal chain.
struct EdgeLatching {
    std::vector<std::size_t> states;  // D indices of the restricted ball
    std::shared_ptr<Flow> ball;
    std::shared_ptr<PathProducts> pp;
    ExtDiagram diagram;
    LatchingObject latching;

    std::size_t local(std::size_t s) const
    {
        return static_cast<std::size_t>(std::find(states.begin(), states.end(), s) - states.begin());
    }
};

inline EdgeLatching edge_latching(const Flow& D, const BoundedPoset& P, std::size_t a, std::size_t b)
{
    EdgeLatching e;
    e.states = P.interval_elements(a, b);
    e.ball = std::make_shared<Flow>(restriction(D, e.states));
    e.pp = std::make_shared<PathProducts>(*e.ball);
    e.diagram = Fdiag(*e.ball, *e.pp);
    e.latching = latching_object(e.diagram, e.diagram.shape->terminal());
    return e;
}

}  // namespace detail

/**
 * For every chain s = (a0, ..., ap), compares the latching map of F at s
 * with the iterated pushout product of the edge latching maps of the
 * restricted balls D|[ai, ai+1]: the canonical map between the sources must
 * be an isomorphism over the common target. Also checks that, for each set
 * S of unrefined segments, the chains refining exactly the other segments
 * form a final subcategory.
 */
inline SimplificationReport simplification_check(const Flow& D)
{
    SimplificationReport rep;
    const BoundedPoset P = state_order(D);
    PathProducts pp(D);
    auto Fd = Fdiag(D, pp);
    const DeltaExt& E = *Fd.shape;
    std::map<std::pair<std::size_t, std::size_t>, detail::EdgeLatching> edges;
    auto edge = [&](std::size_t a, std::size_t b) -> const detail::EdgeLatching& {
        auto it = edges.find({a, b});
        if (it == edges.end())
            it = edges.emplace(std::make_pair(a, b), detail::edge_latching(D, P, a, b)).first;
        return it->second;
    };

    for (std::size_t si = 0; si < E.size(); ++si) {
        const ExtSimplex& s = E.object(si);
        SimplificationEntry entry;
        entry.chain = label(P, s);
        const std::size_t p = s.size() - 1;
        auto lat = latching_object(Fd, si);
        std::vector<SMap> fs;
        for (std::size_t k = 0; k < p; ++k)
            fs.push_back(edge(s[k], s[k + 1]).latching.comparison);
        auto it = iterated_pushout_product(fs);
        auto cube = cube_formula_source(fs);
        auto cube_cmp = cube_to_iterated(cube, it, fs);
        if (!cube_cmp) {
            rep.entries.push_back(entry);
            continue;
        }

        // segment of each element of a finer chain
        std::vector<SMap> cocone;
        for (auto b : lat.objects) {
            const ExtSimplex& beta = E.object(b);
            std::vector<ExtSimplex> segs(p);
            std::uint32_t S = 0;
            for (std::size_t k = 0; k < p; ++k) {
                for (auto x : beta)
                    if (P.leq(s[k], x) && P.leq(x, s[k + 1]))
                        segs[k].push_back(x);
                if (segs[k].size() == 2)
                    S |= 1u << k;
            }
            const ProductN& fb = pp.product(beta);
            const ProductN& cs = cube.cubes[p - 1][S];
            std::vector<Simplex> im;
            for (std::uint32_t id = 0; id < fb.space().size(); ++id) {
                auto parts = fb.components(fb.space().simplex(id));
                std::vector<Simplex> comps;
                std::size_t off = 0;
                for (std::size_t k = 0; k < p; ++k) {
                    std::size_t len = segs[k].size() - 1;
                    std::vector<Simplex> sub(parts.begin() + static_cast<std::ptrdiff_t>(off),
                                             parts.begin() + static_cast<std::ptrdiff_t>(off + len));
                    off += len;
                    if (S >> k & 1u) {
                        comps.push_back(sub[0]);
                        continue;
                    }
                    auto const& el = edge(s[k], s[k + 1]);
                    ExtSimplex local;
                    for (auto x : segs[k])
                        local.push_back(el.local(x));
                    const ProductN& lp = el.pp->product(local);
                    auto obj = el.diagram.shape->index(local);
                    auto pos = static_cast<std::size_t>(
                        std::find(el.latching.objects.begin(), el.latching.objects.end(), obj) -
                        el.latching.objects.begin());
                    comps.push_back(el.latching.colim.legs[pos](lp.tuple(sub)));
                }
                im.push_back(cs.tuple(comps));
            }
            SMap to_cube(fb.space(), cs.space(), std::move(im), false);
            cocone.push_back(compose(*cube_cmp, compose(cube.source.legs[S], to_cube)));
        }
        auto cmp = lat.colim.mediate(cocone, it.sources.back());
        if (cmp) {
            entry.comparison_exists = true;
            entry.isomorphism = cmp->is_isomorphism();
            entry.commutes = compose(it.map(), *cmp).images() == lat.comparison.images();
        }

        // finality of the chains with exactly the segments outside S refined
        const std::uint32_t full = (1u << p) - 1;
        for (std::uint32_t S = 0; S < full && entry.finality; ++S) {
            std::vector<std::size_t> in_I, in_bar;
            for (auto b : lat.objects) {
                const ExtSimplex& beta = E.object(b);
                bool in = true, bar = true;
                for (std::size_t k = 0; k < p; ++k) {
                    std::size_t cnt = 0;
                    for (auto x : beta)
                        if (P.leq(s[k], x) && P.leq(x, s[k + 1]))
                            ++cnt;
                    bool refined = cnt > 2;
                    if (!(S >> k & 1u) && !refined)
                        in = bar = false;
                    if ((S >> k & 1u) && refined)
                        bar = false;
                }
                if (in)
                    in_I.push_back(b);
                if (bar)
                    in_bar.push_back(b);
            }
            auto [I, I_arrows] = E.category().full_subcategory(in_I);
            std::vector<std::size_t> bar_pos;
            for (auto b : in_bar)
                bar_pos.push_back(static_cast<std::size_t>(std::find(in_I.begin(), in_I.end(), b) - in_I.begin()));
            auto [Ibar, Ibar_arrows] = I.full_subcategory(bar_pos);
            if (in_I.empty())
                continue;
            entry.finality = is_final_functor(inclusion_functor(Ibar, I, bar_pos, Ibar_arrows));
        }
        rep.entries.push_back(entry);
    }
    return rep;
}

}  // namespace dihoto
