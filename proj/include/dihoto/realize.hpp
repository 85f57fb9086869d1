#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "homology.hpp"
#include "poset.hpp"
#include "resolve.hpp"
#include "sset.hpp"

namespace dihoto {

/**
 * Underlying space of a globular decomposition. A 0-cell is an edge
 * between its state vertices; a 1-cell is a disk coned off the loop made
 * by the two execution paths it joins; a 2-cell is a cone on the 2-sphere
 * swept by its boundary, which must cover each 1-cell disk at most once.
 */
struct Realization {
    SSet space;
    std::vector<std::uint32_t> state_vertex;
    std::vector<std::vector<std::uint32_t>> traces;  // per cell, closed under faces
    std::size_t interior_vertices = 0;
};

namespace detail {

// Growing simplicial set that keeps its face lists readable.
struct Complex {
    std::vector<int> dims;
    std::vector<std::vector<Simplex>> faces;

    std::uint32_t add(int dim, std::vector<Simplex> fs)
    {
        dims.push_back(dim);
        faces.push_back(std::move(fs));
        return static_cast<std::uint32_t>(dims.size() - 1);
    }
    std::uint32_t vertex() { return add(0, {}); }
    std::uint32_t edge(std::uint32_t from, std::uint32_t to) { return add(1, {nondeg(to, 0), nondeg(from, 0)}); }

    // Faces of every simplex of `ids`, recursively.
    std::vector<std::uint32_t> closure(const std::set<std::uint32_t>& ids) const
    {
        std::set<std::uint32_t> out;
        std::vector<std::uint32_t> stack(ids.begin(), ids.end());
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (!out.insert(id).second)
                continue;
            for (auto const& f : faces[id])
                stack.push_back(f.base);
        }
        return {out.begin(), out.end()};
    }

    // Sub-complex on ascending ids; the full complex keeps its ids.
    SSet build(const std::vector<std::uint32_t>& ids, bool validate = false) const
    {
        std::vector<std::uint32_t> local(dims.size(), ~0u);
        SSetBuilder b(validate);
        for (auto id : ids) {
            std::vector<Simplex> fs;
            for (auto const& f : faces[id])
                fs.push_back({local[f.base], f.degen});
            local[id] = b.add(dims[id], std::move(fs));
        }
        return b.build();
    }

    SSet build() const
    {
        std::vector<std::uint32_t> all(dims.size());
        for (std::uint32_t i = 0; i < all.size(); ++i)
            all[i] = i;
        return build(all, true);
    }
};

inline HomologyResult sphere2_homology() { return {{1, 0, 1}, {{}, {}, {}}}; }

}  // namespace detail

inline Realization realize(const GlobularDecomposition& dec)
{
    Realization r;
    detail::Complex cx;
    for (std::size_t s = 0; s < dec.states().size(); ++s)
        r.state_vertex.push_back(cx.vertex());
    std::vector<std::uint32_t> cell_edge(dec.size(), ~0u);
    std::vector<std::vector<std::uint32_t>> disk_triangles(dec.size());
    // edges and the states they pass through along a vertex of a path space
    auto walk = [&](const Word& w, std::vector<std::uint32_t>& verts, std::vector<std::uint32_t>& edges) {
        for (auto const& f : w) {
            auto const& c = dec.cells()[f.cell];
            if (c.n != 0)
                throw Error(ErrorKind::UnsupportedCellDimension, "execution path through a 2-cell");
            edges.push_back(cell_edge[f.cell]);
            verts.push_back(r.state_vertex[c.target]);
        }
    };

    for (std::size_t k = 0; k < dec.size(); ++k) {
        auto const& c = dec.cells()[k];
        const auto from = r.state_vertex[c.source], to = r.state_vertex[c.target];
        if (c.n == 0) {
            cell_edge[k] = cx.edge(from, to);
            r.traces.push_back({from, to, cell_edge[k]});
            continue;
        }
        if (c.n == 1) {
            // loop: along the first path, back along the second
            std::vector<std::uint32_t> v0{from}, e0, v1{from}, e1;
            walk(dec.word(k, c.source, c.target, c.attach[0]), v0, e0);
            walk(dec.word(k, c.source, c.target, c.attach[1]), v1, e1);
            std::vector<std::uint32_t> verts = v0, edges = e0;
            std::vector<bool> fwd(e0.size(), true);
            for (std::size_t i = e1.size(); i-- > 0;) {
                edges.push_back(e1[i]);
                fwd.push_back(false);
                if (i > 0)
                    verts.push_back(v1[i]);
            }
            const std::size_t K = edges.size();
            std::set<std::uint32_t> tr(verts.begin(), verts.end());
            tr.insert(edges.begin(), edges.end());
            const auto apex = cx.vertex();
            ++r.interior_vertices;
            tr.insert(apex);
            std::vector<std::uint32_t> spokes;
            for (std::size_t j = 0; j < K; ++j)
                tr.insert(spokes.emplace_back(cx.edge(verts[j], apex)));
            for (std::size_t j = 0; j < K; ++j) {
                std::size_t a = j, b = (j + 1) % K;
                if (!fwd[j])
                    std::swap(a, b);
                auto t = cx.add(2, {nondeg(spokes[b], 1), nondeg(spokes[a], 1), nondeg(edges[j], 1)});
                disk_triangles[k].push_back(t);
                tr.insert(t);
            }
            r.traces.emplace_back(tr.begin(), tr.end());
            continue;
        }
        // Boundary of the 2-cell as a 2-chain: each polygon edge sweeps the
        // disks of the 1-cells moving along it, signed by orientation.
        const std::size_t K = c.shape.size();
        auto unsupported = [&](const std::string& why) {
            throw Error(ErrorKind::UnsupportedCellDimension, "2-cell " + std::to_string(k) + ": " + why);
        };
        for (std::size_t j = 0; j < K; ++j)
            for (auto const& f : dec.word(k, c.source, c.target, c.attach[j]))
                if (dec.cells()[f.cell].n != 0)
                    unsupported("boundary path through a higher cell");
        std::map<std::size_t, long> sweep;
        for (std::size_t j = 0; j < K; ++j)
            for (auto const& f : dec.word(k, c.source, c.target, c.attach[K + j])) {
                int m = dec.cells()[f.cell].n;
                if (m == 2)
                    unsupported("boundary sweeps another 2-cell");
                if (m == 1 && f.simplex.nondegenerate())
                    sweep[f.cell] += c.shape[j] ? 1 : -1;
            }
        std::set<std::uint32_t> support;
        for (auto const& [cell, mult] : sweep) {
            if (mult == 0)
                continue;
            if (mult != 1 && mult != -1)
                unsupported("boundary covers a disk " + std::to_string(mult) + " times");
            support.insert(disk_triangles[cell].begin(), disk_triangles[cell].end());
        }
        if (support.empty())
            unsupported("boundary sweeps no disk");
        auto z = cx.closure(support);
        auto h = homology(cx.build(z)).trimmed();
        if (!(h == detail::sphere2_homology()))
            unsupported("boundary " + h.to_string() + " is not a 2-sphere");
        const auto apex = cx.vertex();
        ++r.interior_vertices;
        std::vector<std::uint32_t> cone(cx.dims.size(), ~0u);
        std::set<std::uint32_t> tr(z.begin(), z.end());
        tr.insert(apex);
        std::vector<std::uint32_t> order = z;
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cx.dims[a] < cx.dims[b]; });
        for (auto id : order) {
            std::vector<Simplex> fs;
            if (cx.dims[id] == 0) {
                fs = {nondeg(apex, 0), nondeg(id, 0)};
            } else {
                for (auto const& f : cx.faces[id]) {
                    Surjection d = f.degen;
                    d.push_back(static_cast<std::uint8_t>(cx.dims[f.base] + 1));
                    fs.push_back({cone[f.base], d});
                }
                fs.push_back(nondeg(id, cx.dims[id]));
            }
            cone.resize(cx.dims.size() + 1, ~0u);
            cone[id] = cx.add(cx.dims[id] + 1, std::move(fs));
            tr.insert(cone[id]);
        }
        r.traces.emplace_back(tr.begin(), tr.end());
    }
    r.space = cx.build();
    return r;
}

/// Vertices and edges of the realization; state vertices are boxed.
inline std::string to_dot(const Realization& r, const std::vector<std::string>& states)
{
    std::ostringstream os;
    os << "digraph realization {\n";
    std::vector<int> state_of(r.space.size(), -1);
    for (std::size_t s = 0; s < r.state_vertex.size(); ++s)
        state_of[r.state_vertex[s]] = static_cast<int>(s);
    for (auto v : r.space.of_dim(0)) {
        os << "  v" << v;
        if (state_of[v] >= 0)
            os << " [shape=box, label=\"" << states[static_cast<std::size_t>(state_of[v])] << "\"]";
        else
            os << " [shape=point]";
        os << ";\n";
    }
    for (auto e : r.space.of_dim(1)) {
        auto f = r.space.faces(e);
        os << "  v" << f[1].base << " -> v" << f[0].base << ";\n";
    }
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Contractibility of resolved balls
// ---------------------------------------------------------------------------

struct FinReport {
    std::string poset;
    std::array<std::size_t, 3> cells{};
    HomologyResult homology;
    bool contractible = false;
};

inline FinReport check_fin(const BoundedPoset& P)
{
    FinReport rep;
    rep.poset = P.to_text();
    auto res = resolve(P);
    for (int n = 0; n < 3; ++n)
        rep.cells[static_cast<std::size_t>(n)] = res.count(n);
    auto real = realize(res.dec);
    rep.homology = homology(real.space).trimmed();
    rep.contractible = is_homology_contractible(real.space);
    return rep;
}

// ---------------------------------------------------------------------------
// Refinement
// ---------------------------------------------------------------------------

/// Cells of a decomposition forming a resolved ball of shape `shape`, and
/// the state of the decomposition at each element of `shape`.
struct BallSpec {
    BoundedPoset shape;
    std::vector<std::size_t> cells;
    std::vector<std::size_t> states;
};

/// `elem`/`cover` lines for the ball shape, `cells ID...`, `place ELEM STATE`
/// and `map ELEM ELEM` lines for the refinement morphism into `target`.
inline std::pair<BallSpec, PosetMorphism> parse_ball_spec(std::string_view text, const GlobularDecomposition& dec,
                                                          const BoundedPoset& target)
{
    std::istringstream in{std::string(text)};
    std::string line, poset_text;
    std::vector<std::string> cells;
    std::vector<std::pair<std::string, std::string>> places, maps;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::ParseError, "ball spec line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = line.substr(0, line.find('#'));
        std::istringstream ls(body);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty()) {
            poset_text += "\n";
            continue;
        }
        if (tok[0] == "elem" || tok[0] == "cover") {
            poset_text += body + "\n";
            continue;
        }
        poset_text += "\n";
        if (tok[0] == "cells") {
            cells.insert(cells.end(), tok.begin() + 1, tok.end());
        } else if (tok[0] == "place" || tok[0] == "map") {
            if (tok.size() != 3)
                fail("expected '" + tok[0] + " NAME NAME'");
            (tok[0] == "place" ? places : maps).emplace_back(tok[1], tok[2]);
        } else {
            fail("unknown declaration '" + tok[0] + "'");
        }
    }
    BallSpec spec{BoundedPoset::parse(poset_text), {}, {}};
    for (auto const& c : cells) {
        if (c.empty() || c.find_first_not_of("0123456789") != std::string::npos || c.size() > 9)
            throw Error(ErrorKind::ParseError, "bad cell id '" + c + "'");
        spec.cells.push_back(std::stoul(c));
    }
    spec.states.assign(spec.shape.size(), ~std::size_t{0});
    for (auto const& [e, s] : places) {
        auto i = spec.shape.index(e);
        auto st = dec.state(s);
        if (!i || !st)
            throw Error(ErrorKind::ParseError, "unknown name in 'place " + e + " " + s + "'");
        spec.states[*i] = *st;
    }
    PosetMorphism u{spec.shape, target, std::vector<std::size_t>(spec.shape.size(), ~std::size_t{0})};
    for (auto const& [e, t] : maps) {
        auto i = spec.shape.index(e);
        auto j = target.index(t);
        if (!i || !j)
            throw Error(ErrorKind::ParseError, "unknown name in 'map " + e + " " + t + "'");
        u.mapping[*i] = *j;
    }
    for (std::size_t i = 0; i < spec.shape.size(); ++i) {
        if (spec.states[i] == ~std::size_t{0})
            throw Error(ErrorKind::ParseError, "element " + spec.shape.name(i) + " has no place");
        if (u.mapping[i] == ~std::size_t{0})
            throw Error(ErrorKind::ParseError, "element " + spec.shape.name(i) + " is not mapped");
    }
    return {spec, u};
}

struct Refinement {
    GlobularDecomposition dec;
    std::vector<std::size_t> target_states;  // new state of each element of the target poset
};

/**
 * Replaces the cells of a resolved ball by the resolution of the target
 * poset, glued along the morphism. Paths of other cells that cross the old
 * ball are sent through one fixed path of the new one.
 */
inline Refinement refine(const GlobularDecomposition& dec, const BallSpec& ball, const PosetMorphism& u)
{
    const BoundedPoset& P1 = ball.shape;
    if (u.source.canonical_code() != P1.canonical_code() || u.source.names() != P1.names())
        throw Error(ErrorKind::TInvalid, "morphism source is not the ball shape");
    auto tr = validate_T(u);
    if (!tr.ok) {
        std::string why;
        for (auto const& f : tr.failures)
            why += (why.empty() ? "" : "; ") + f;
        throw Error(ErrorKind::TInvalid, why);
    }
    const std::size_t nstates = dec.states().size();
    if (ball.states.size() != P1.size())
        throw Error(ErrorKind::BallMismatch, "ball places " + std::to_string(ball.states.size()) + " of " +
                                                 std::to_string(P1.size()) + " elements");
    std::vector<std::int64_t> local(nstates, -1);
    for (std::size_t i = 0; i < P1.size(); ++i) {
        if (ball.states[i] >= nstates || local[ball.states[i]] >= 0)
            throw Error(ErrorKind::BallMismatch, "ball states are not distinct states");
        local[ball.states[i]] = static_cast<std::int64_t>(i);
    }
    const std::size_t lo = ball.states[P1.bottom()], hi = ball.states[P1.top()];
    auto interior = [&](std::size_t s) { return local[s] >= 0 && s != lo && s != hi; };

    std::vector<std::int64_t> in_ball(dec.size(), -1);
    for (std::size_t i = 0; i < ball.cells.size(); ++i) {
        if (ball.cells[i] >= dec.size() || in_ball[ball.cells[i]] >= 0)
            throw Error(ErrorKind::BallMismatch, "bad ball cell list");
        in_ball[ball.cells[i]] = 0;
    }
    // ball cells in decomposition order, numbered locally
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < dec.size(); ++k)
        if (in_ball[k] >= 0) {
            in_ball[k] = static_cast<std::int64_t>(order.size());
            order.push_back(k);
        }
    if (order.empty())
        throw Error(ErrorKind::BallMismatch, "empty ball");

    // the ball on its own must be a resolved ball of shape P1
    GlobularDecomposition alone(P1.names());
    for (auto k : order) {
        auto const& c = dec.cells()[k];
        if (local[c.source] < 0 || local[c.target] < 0)
            throw Error(ErrorKind::BallMismatch, "ball cell " + std::to_string(k) + " leaves the ball");
        Cell lc{c.n, static_cast<std::size_t>(local[c.source]), static_cast<std::size_t>(local[c.target]), c.shape, {}};
        for (auto const& img : c.attach) {
            Word w = dec.word(k, c.source, c.target, img);
            for (auto& f : w) {
                if (in_ball[f.cell] < 0)
                    throw Error(ErrorKind::BallMismatch, "ball cell " + std::to_string(k) + " uses outside cells");
                f.cell = static_cast<std::size_t>(in_ball[f.cell]);
            }
            auto s = alone.find(alone.size(), lc.source, lc.target, w);
            if (!s)
                throw Error(ErrorKind::BallMismatch, "ball cell " + std::to_string(k) + " does not attach in the ball");
            lc.attach.push_back(*s);
        }
        alone.push(std::move(lc));
    }
    {
        auto const& X = alone.final_flow();
        if (!is_full_directed_ball(X).ok())
            throw Error(ErrorKind::BallMismatch, "ball cells do not form a full directed ball");
        auto Q = state_order(X);
        for (std::size_t i = 0; i < P1.size(); ++i)
            for (std::size_t j = 0; j < P1.size(); ++j)
                if (Q.leq(i, j) != P1.leq(i, j))
                    throw Error(ErrorKind::BallMismatch, "ball state order differs from its shape");
    }
    for (std::size_t k = 0; k < dec.size(); ++k) {
        auto const& c = dec.cells()[k];
        if (in_ball[k] < 0 && (interior(c.source) || interior(c.target)))
            throw Error(ErrorKind::DanglingAttachment,
                        "cell " + std::to_string(k) + " attaches to an interior state of the ball");
    }

    // states: the old ones, then fresh ones for the new elements
    const BoundedPoset& P2 = u.target;
    Refinement out;
    std::vector<std::string> names = dec.states();
    out.target_states.assign(P2.size(), 0);
    std::vector<bool> hit(P2.size(), false);
    for (std::size_t i = 0; i < P1.size(); ++i) {
        out.target_states[u.mapping[i]] = ball.states[i];
        hit[u.mapping[i]] = true;
    }
    for (std::size_t j = 0; j < P2.size(); ++j) {
        if (hit[j])
            continue;
        std::string nm = P2.name(j);
        while (std::find(names.begin(), names.end(), nm) != names.end())
            nm += "'";
        out.target_states[j] = names.size();
        names.push_back(nm);
    }

    auto res = resolve(P2);
    GlobularDecomposition nd(names);
    std::vector<std::int64_t> new_id(dec.size(), -1);
    std::vector<std::size_t> res_id(res.dec.size(), 0);
    Word through;  // a fixed vertex of the new ball's long path space
    auto translate = [&](std::size_t k, const Cell& c, std::size_t s, std::size_t t) {
        Cell nc{c.n, s, t, c.shape, {}};
        for (auto const& img : c.attach) {
            Word w = dec.word(k, c.source, c.target, img);
            const std::size_t len = img.degen.size();
            Word nw;
            bool in_run = false;
            for (auto const& f : w) {
                if (in_ball[f.cell] >= 0) {
                    if (!in_run)
                        for (auto g : through)
                            nw.push_back({g.cell, {g.simplex.base, constant_surjection(static_cast<int>(len) - 1)}});
                    in_run = true;
                    continue;
                }
                in_run = false;
                nw.push_back({static_cast<std::size_t>(new_id[f.cell]), f.simplex});
            }
            auto si = nd.find(nd.size(), s, t, nw);
            if (!si)
                throw Error(ErrorKind::DanglingAttachment, "cell " + std::to_string(k) + " has no image after refinement");
            nc.attach.push_back(*si);
        }
        return nc;
    };
    for (std::size_t k = 0; k < dec.size(); ++k) {
        if (k == order.front()) {
            for (std::size_t i = 0; i < res.dec.size(); ++i) {
                auto const& c = res.dec.cells()[i];
                Cell nc{c.n, out.target_states[c.source], out.target_states[c.target], c.shape, {}};
                for (auto const& img : c.attach) {
                    Word w = res.dec.word(i, c.source, c.target, img);
                    for (auto& f : w)
                        f.cell = res_id[f.cell];
                    auto si = nd.find(nd.size(), nc.source, nc.target, w);
                    if (!si)
                        throw std::logic_error("resolution cell does not transfer");
                    nc.attach.push_back(*si);
                }
                res_id[i] = nd.size();
                nd.push(std::move(nc));
            }
            const SSet& p = res.flow().path(P2.bottom(), P2.top());
            through = res.dec.word(res.dec.size(), P2.bottom(), P2.top(), nondeg(p.of_dim(0)[0], 0));
            for (auto& f : through)
                f.cell = res_id[f.cell];
        }
        if (in_ball[k] >= 0)
            continue;
        auto const& c = dec.cells()[k];
        new_id[k] = static_cast<std::int64_t>(nd.size());
        nd.push(translate(k, c, c.source, c.target));
    }
    out.dec = std::move(nd);
    return out;
}

struct ThthReport {
    HomologyResult before;
    HomologyResult after;
    std::size_t cells_before = 0;
    std::size_t cells_after = 0;
    bool ok() const { return before == after; }
};

inline ThthReport check_thth(const GlobularDecomposition& dec, const BallSpec& ball, const PosetMorphism& u)
{
    ThthReport r;
    auto ref = refine(dec, ball, u);
    r.before = homology(realize(dec).space).trimmed();
    r.after = homology(realize(ref.dec).space).trimmed();
    r.cells_before = dec.size();
    r.cells_after = ref.dec.size();
    return r;
}

}  // namespace dihoto
