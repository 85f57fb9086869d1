#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smallcat.hpp"
#include "sset.hpp"

namespace dihoto {

/// Finite diagram of simplicial sets presented by generating arrows.
struct Diagram {
    struct Edge {
        std::size_t from;
        std::size_t to;
        SMap map;
    };

    std::vector<SSet> objects;
    std::vector<Edge> edges;

    std::size_t add_object(SSet x)
    {
        objects.push_back(std::move(x));
        return objects.size() - 1;
    }

    void add_edge(std::size_t from, std::size_t to, SMap m) { edges.push_back({from, to, std::move(m)}); }

    /// Diagram over a finite category: one map per arrow (identities included).
    static Diagram over(const FinCat& shape, std::vector<SSet> objects, const std::vector<SMap>& maps)
    {
        if (objects.size() != shape.num_objects() || maps.size() != shape.num_arrows())
            throw std::invalid_argument("diagram does not match its shape");
        Diagram d;
        d.objects = std::move(objects);
        for (std::size_t a = 0; a < shape.num_arrows(); ++a)
            if (!shape.is_identity(a))
                d.add_edge(shape.arrow(a).source, shape.arrow(a).target, maps[a]);
        return d;
    }
};

/// Checks that arrow maps respect identities and composition of the shape.
inline bool is_functorial(const FinCat& shape, const std::vector<SSet>& objects, const std::vector<SMap>& maps)
{
    for (std::size_t o = 0; o < shape.num_objects(); ++o)
        if (!(maps[shape.identity(o)] == SMap::identity(objects[o])))
            return false;
    for (std::size_t g = 0; g < shape.num_arrows(); ++g)
        for (std::size_t f = 0; f < shape.num_arrows(); ++f)
            if (auto c = shape.compose(g, f))
                if (!(maps[*c] == compose(maps[g], maps[f])))
                    return false;
    return true;
}

/// Colimit with its cocone; `reps[id]` is the (object, simplex) that
/// introduced apex simplex `id`.
struct Colimit {
    SSet apex;
    std::vector<SMap> legs;
    std::vector<std::pair<std::size_t, std::uint32_t>> reps;

    /// The unique map to `target` through which `cocone` factors, or nullopt
    /// if `cocone` is not a cocone on the same diagram.
    std::optional<SMap> mediate(const std::vector<SMap>& cocone, const SSet& target) const
    {
        if (cocone.size() != legs.size())
            return std::nullopt;
        std::vector<Simplex> im;
        im.reserve(apex.size());
        for (auto [o, x] : reps)
            im.push_back(cocone[o].at(x));
        std::optional<SMap> m;
        try {
            m.emplace(apex, target, std::move(im));
        } catch (const std::logic_error&) {
            return std::nullopt;
        }
        for (std::size_t o = 0; o < legs.size(); ++o)
            for (std::uint32_t x = 0; x < legs[o].source().size(); ++x)
                if ((*m)(legs[o].at(x)) != cocone[o].at(x))
                    return std::nullopt;
        return m;
    }
};

/// True iff `legs` commute with every edge of the diagram.
inline bool is_cocone(const Diagram& d, const std::vector<SMap>& legs)
{
    for (auto const& e : d.edges)
        for (std::uint32_t x = 0; x < d.objects[e.from].size(); ++x)
            if (legs[e.to](e.map.at(x)) != legs[e.from].at(x))
                return false;
    return true;
}

/**
 * Colimit computed dimension by dimension. Nondegenerate simplices related by
 * an arrow are merged with union-find; a simplex sent to a degenerate one is
 * merged with that degenerate simplex of the apex, already known from lower
 * dimensions. Remaining classes become new apex simplices, ordered by their
 * smallest (object, simplex) member.
 */
inline Colimit colimit(const Diagram& d)
{
    const std::size_t k = d.objects.size();
    std::vector<std::vector<Simplex>> leg(k);
    int top = -1;
    for (std::size_t o = 0; o < k; ++o) {
        leg[o].resize(d.objects[o].size());
        top = std::max(top, d.objects[o].dimension());
    }
    SSetBuilder b(false);
    Colimit out;

    for (int dim = 0; dim <= top; ++dim) {
        std::vector<std::pair<std::size_t, std::uint32_t>> nodes;
        std::vector<std::vector<std::size_t>> node_of(k);
        for (std::size_t o = 0; o < k; ++o) {
            node_of[o].assign(d.objects[o].size(), 0);
            for (auto x : d.objects[o].of_dim(dim)) {
                node_of[o][x] = nodes.size();
                nodes.emplace_back(o, x);
            }
        }
        const std::size_t plain = nodes.size();
        std::map<Simplex, std::size_t> key_node;
        std::vector<Simplex> keys;
        std::vector<std::size_t> parent(plain);
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t a) {
            while (parent[a] != a)
                a = parent[a] = parent[parent[a]];
            return a;
        };
        auto unite = [&](std::size_t a, std::size_t c) {
            a = find(a);
            c = find(c);
            if (a != c)
                parent[std::max(a, c)] = std::min(a, c);
        };
        for (auto const& e : d.edges) {
            for (auto x : d.objects[e.from].of_dim(dim)) {
                const Simplex& y = e.map.at(x);
                if (y.nondegenerate()) {
                    unite(node_of[e.from][x], node_of[e.to][y.base]);
                    continue;
                }
                Simplex z = leg[e.to][y.base].degenerate(y.degen);
                auto it = key_node.find(z);
                if (it == key_node.end()) {
                    it = key_node.emplace(z, parent.size()).first;
                    parent.push_back(parent.size());
                    keys.push_back(z);
                }
                unite(node_of[e.from][x], it->second);
            }
        }
        std::vector<std::optional<Simplex>> class_key(parent.size());
        for (std::size_t kk = 0; kk < keys.size(); ++kk) {
            auto r = find(plain + kk);
            if (class_key[r] && *class_key[r] != keys[kk])
                throw std::logic_error("colimit identifies two distinct degenerate simplices");
            class_key[r] = keys[kk];
        }
        std::vector<std::optional<std::uint32_t>> class_id(parent.size());
        for (std::size_t n = 0; n < plain; ++n) {
            auto [o, x] = nodes[n];
            auto r = find(n);
            if (class_key[r]) {
                leg[o][x] = *class_key[r];
                continue;
            }
            if (!class_id[r]) {
                std::vector<Simplex> faces;
                if (dim > 0)
                    for (auto const& f : d.objects[o].faces(x))
                        faces.push_back(leg[o][f.base].degenerate(f.degen));
                class_id[r] = b.add(dim, std::move(faces));
                out.reps.emplace_back(o, x);
            }
            leg[o][x] = nondeg(*class_id[r], dim);
        }
    }
    out.apex = b.build();
    for (std::size_t o = 0; o < k; ++o)
        out.legs.emplace_back(d.objects[o], out.apex, std::move(leg[o]), false);
    return out;
}

/// Pushout of f : C -> A and g : C -> B; objects are ordered [A, B, C].
inline Colimit pushout(const SMap& f, const SMap& g)
{
    Diagram d;
    d.add_object(f.target());
    d.add_object(g.target());
    d.add_object(f.source());
    d.add_edge(2, 0, f);
    d.add_edge(2, 1, g);
    return colimit(d);
}

/// Coproduct of a list of simplicial sets.
inline Colimit coproduct(const std::vector<SSet>& xs)
{
    Diagram d;
    for (auto const& x : xs)
        d.add_object(x);
    return colimit(d);
}

inline SSet disjoint_union(const SSet& x, const SSet& y) { return coproduct({x, y}).apex; }

/// Suspension-like quotient of Z × Δ¹ with two marked vertices.
struct Globe {
    SSet space;
    std::uint32_t bottom = 0;
    std::uint32_t top = 0;
};

/**
 * Collapses Z × {0} and Z × {1} of Z × Δ¹ to one vertex each. For empty Z
 * the result is two points.
 */
inline Globe globe(const SSet& z)
{
    const SSet I = interval();
    Product zi(z, I);
    auto end_inclusion = [&](std::uint32_t v) {
        std::vector<Simplex> im;
        for (std::uint32_t id = 0; id < z.size(); ++id)
            im.push_back(zi.pair(z.simplex(id), {v, constant_surjection(z.dim(id))}));
        return SMap(z, zi.space(), std::move(im));
    };
    const SSet pt = point();
    Diagram d;
    d.add_object(pt);
    d.add_object(pt);
    d.add_object(zi.space());
    d.add_object(z);
    d.add_object(z);
    d.add_edge(3, 0, constant_map(z, pt, 0));
    d.add_edge(3, 2, end_inclusion(0));
    d.add_edge(4, 1, constant_map(z, pt, 0));
    d.add_edge(4, 2, end_inclusion(1));
    auto c = colimit(d);
    return {c.apex, c.legs[0].at(0).base, c.legs[1].at(0).base};
}

// ---------------------------------------------------------------------------
// Pushout products
// ---------------------------------------------------------------------------

/**
 * f □ g for f : U -> V and g : W -> X. The source is the pushout of
 * U × X <- U × W -> V × W (objects ordered as listed, apex U × W last).
 */
struct PushoutProduct {
    Product ux, vw, uw, vx;
    Colimit source;
    SMap map;
};

inline PushoutProduct pushout_product(const SMap& f, const SMap& g, const Product& vx)
{
    Product ux(f.source(), g.target());
    Product vw(f.target(), g.source());
    Product uw(f.source(), g.source());
    auto idU = SMap::identity(f.source());
    auto idW = SMap::identity(g.source());
    auto idV = SMap::identity(f.target());
    auto idX = SMap::identity(g.target());
    Diagram d;
    d.add_object(ux.space());
    d.add_object(vw.space());
    d.add_object(uw.space());
    d.add_edge(2, 0, product_map(idU, g, uw, ux));
    d.add_edge(2, 1, product_map(f, idW, uw, vw));
    auto src = colimit(d);
    std::vector<SMap> cocone{product_map(f, idX, ux, vx), product_map(idV, g, vw, vx),
                             product_map(f, g, uw, vx)};
    auto m = src.mediate(cocone, vx.space());
    if (!m)
        throw std::logic_error("pushout product cocone does not factor");
    return {ux, vw, uw, vx, std::move(src), std::move(*m)};
}

inline SMap pushout_product(const SMap& f, const SMap& g)
{
    return pushout_product(f, g, Product(f.target(), g.target())).map;
}

/// Left-nested f0 □ f1 □ ... □ fp; `targets[q]` is B0 × ... × Bq.
struct IteratedPushoutProduct {
    std::vector<ProductN> targets;
    std::vector<SSet> sources;
    std::vector<SMap> maps;
    std::vector<PushoutProduct> steps;  // steps[q-1] builds level q

    const SMap& map() const { return maps.back(); }
};

inline IteratedPushoutProduct iterated_pushout_product(const std::vector<SMap>& fs)
{
    if (fs.empty())
        throw std::invalid_argument("iterated pushout product needs at least one map");
    IteratedPushoutProduct out;
    out.targets.push_back(ProductN({fs[0].target()}));
    out.sources.push_back(fs[0].source());
    out.maps.push_back(fs[0]);
    for (std::size_t q = 1; q < fs.size(); ++q) {
        out.targets.emplace_back(out.targets.back(), fs[q].target());
        auto step = pushout_product(out.maps.back(), fs[q], out.targets.back().last_step());
        out.sources.push_back(step.source.apex);
        out.maps.push_back(step.map);
        out.steps.push_back(std::move(step));
    }
    return out;
}

/**
 * Colimit over the proper subsets S of {0..p} of the products with factor
 * B_i for i in S and A_i otherwise, with its canonical map to ∏ B_i.
 * `cubes[q][S]` holds the product for the first q+1 factors and any subset
 * S of {0..q}; the full subset is ∏ B_i.
 */
struct CubeFormula {
    std::size_t p = 0;
    std::vector<std::vector<ProductN>> cubes;
    std::vector<std::uint32_t> subsets;  // proper subsets in diagram order
    Colimit source;
    SMap map;

    const ProductN& target() const { return cubes[p].back(); }
};

inline CubeFormula cube_formula_source(const std::vector<SMap>& fs)
{
    if (fs.empty())
        throw std::invalid_argument("cube formula needs at least one map");
    CubeFormula out;
    out.p = fs.size() - 1;
    out.cubes.resize(fs.size());
    out.cubes[0].push_back(ProductN({fs[0].source()}));
    out.cubes[0].push_back(ProductN({fs[0].target()}));
    for (std::size_t q = 1; q < fs.size(); ++q) {
        const std::uint32_t half = 1u << q;
        for (std::uint32_t S = 0; S < 2 * half; ++S) {
            auto const& prefix = out.cubes[q - 1][S & (half - 1)];
            out.cubes[q].emplace_back(prefix, (S & half) ? fs[q].target() : fs[q].source());
        }
    }
    const std::size_t p = out.p;
    const std::uint32_t full = (1u << (p + 1)) - 1;
    auto comps_map = [&](std::uint32_t S, std::uint32_t T) {
        std::vector<SMap> ms;
        for (std::size_t i = 0; i <= p; ++i) {
            bool inS = S >> i & 1u, inT = T >> i & 1u;
            if (inS == inT)
                ms.push_back(SMap::identity(inS ? fs[i].target() : fs[i].source()));
            else
                ms.push_back(fs[i]);
        }
        return product_map(ms, out.cubes[p][S], out.cubes[p][T]);
    };
    Diagram d;
    std::vector<std::size_t> pos(full + 1, 0);
    for (std::uint32_t S = 0; S < full; ++S) {
        pos[S] = d.add_object(out.cubes[p][S].space());
        out.subsets.push_back(S);
    }
    for (std::uint32_t S = 0; S < full; ++S)
        for (std::size_t i = 0; i <= p; ++i) {
            std::uint32_t T = S | (1u << i);
            if (T != S && T != full)
                d.add_edge(pos[S], pos[T], comps_map(S, T));
        }
    out.source = colimit(d);
    std::vector<SMap> cocone;
    for (std::uint32_t S = 0; S < full; ++S)
        cocone.push_back(comps_map(S, full));
    auto m = out.source.mediate(cocone, out.target().space());
    if (!m)
        throw std::logic_error("cube formula cocone does not factor");
    out.map = std::move(*m);
    return out;
}

namespace detail {

// Canonical map cubes[q][S] -> iterated source at level q, for S proper.
inline SMap cube_leg(const CubeFormula& c, const IteratedPushoutProduct& it, const std::vector<SMap>& fs,
                     std::size_t q, std::uint32_t S)
{
    if (q == 0)
        return SMap::identity(fs[0].source());
    const std::uint32_t half = 1u << q;
    const std::uint32_t low = S & (half - 1);
    const ProductN& here = c.cubes[q][S];
    const PushoutProduct& step = it.steps[q - 1];
    if (S & half) {
        auto inner = cube_leg(c, it, fs, q - 1, low);
        auto m = product_map(inner, SMap::identity(fs[q].target()), here.last_step(), step.ux);
        return compose(step.source.legs[0], m);
    }
    if (low == half - 1) {
        auto id_prefix = SMap::identity(it.targets[q - 1].space());
        auto m = product_map(id_prefix, SMap::identity(fs[q].source()), here.last_step(), step.vw);
        return compose(step.source.legs[1], m);
    }
    auto inner = cube_leg(c, it, fs, q - 1, low);
    auto m = product_map(inner, SMap::identity(fs[q].source()), here.last_step(), step.uw);
    return compose(step.source.legs[2], m);
}

}  // namespace detail

/// Canonical comparison from the cube colimit to the iterated pushout product source.
inline std::optional<SMap> cube_to_iterated(const CubeFormula& c, const IteratedPushoutProduct& it,
                                            const std::vector<SMap>& fs)
{
    std::vector<SMap> cocone;
    for (auto S : c.subsets)
        cocone.push_back(detail::cube_leg(c, it, fs, c.p, S));
    return c.source.mediate(cocone, it.sources.back());
}

struct CubeCheck {
    bool comparison_exists = false;
    bool isomorphism = false;
    bool commutes = false;
    bool ok() const { return comparison_exists && isomorphism && commutes; }
};

/// Compares the cube formula with the iterated pushout product.
inline CubeCheck check_cube_formula(const std::vector<SMap>& fs)
{
    CubeCheck r;
    auto cube = cube_formula_source(fs);
    auto it = iterated_pushout_product(fs);
    auto cmp = cube_to_iterated(cube, it, fs);
    if (!cmp)
        return r;
    r.comparison_exists = true;
    r.isomorphism = cmp->is_isomorphism();
    // both targets are built by the same left-nested product construction
    auto via = compose(it.map(), *cmp);
    r.commutes = via.images() == cube.map.images() &&
                 it.targets.back().space().size() == cube.target().space().size();
    return r;
}

// ---------------------------------------------------------------------------
// Colimit-product interchange
// ---------------------------------------------------------------------------

/// Pointwise product of two diagrams over the product of their shapes.
struct ProductDiagram {
    Diagram diagram;
    std::vector<Product> products;  // index i * |E| + j
};

inline ProductDiagram product_diagram(const Diagram& D, const Diagram& E)
{
    ProductDiagram out;
    const std::size_t m = E.objects.size();
    for (auto const& x : D.objects)
        for (auto const& y : E.objects) {
            out.products.emplace_back(x, y);
            out.diagram.add_object(out.products.back().space());
        }
    for (auto const& e : D.edges)
        for (std::size_t j = 0; j < m; ++j)
            out.diagram.add_edge(e.from * m + j, e.to * m + j,
                                 product_map(e.map, SMap::identity(E.objects[j]), out.products[e.from * m + j],
                                             out.products[e.to * m + j]));
    for (std::size_t i = 0; i < D.objects.size(); ++i)
        for (auto const& e : E.edges)
            out.diagram.add_edge(i * m + e.from, i * m + e.to,
                                 product_map(SMap::identity(D.objects[i]), e.map, out.products[i * m + e.from],
                                             out.products[i * m + e.to]));
    return out;
}

struct InterchangeCheck {
    bool comparison_exists = false;
    bool isomorphism = false;
    bool ok() const { return comparison_exists && isomorphism; }
};

/// Canonical map colim(D × E) -> colim D × colim E is an isomorphism.
inline InterchangeCheck check_colimit_product_interchange(const Diagram& D, const Diagram& E)
{
    InterchangeCheck r;
    auto cd = colimit(D);
    auto ce = colimit(E);
    Product target(cd.apex, ce.apex);
    auto pd = product_diagram(D, E);
    auto c = colimit(pd.diagram);
    std::vector<SMap> cocone;
    const std::size_t m = E.objects.size();
    for (std::size_t i = 0; i < D.objects.size(); ++i)
        for (std::size_t j = 0; j < m; ++j)
            cocone.push_back(product_map(cd.legs[i], ce.legs[j], pd.products[i * m + j], target));
    auto med = c.mediate(cocone, target.space());
    if (!med)
        return r;
    r.comparison_exists = true;
    r.isomorphism = med->is_isomorphism();
    return r;
}

// ---------------------------------------------------------------------------
// Latching objects
// ---------------------------------------------------------------------------

/// Diagram over Δ^ext(P)^op: one simplicial set per chain and one map per arrow.
struct ExtDiagram {
    std::shared_ptr<const DeltaExt> shape;
    std::vector<SSet> objects;
    std::vector<SMap> maps;

    bool is_functorial() const { return dihoto::is_functorial(shape->category(), objects, maps); }
};

struct LatchingObject {
    std::vector<std::size_t> objects;  // chains of the latching category
    Colimit colim;
    SMap comparison;  // into the value at the chain itself
};

inline LatchingObject latching_object(const ExtDiagram& D, std::size_t s)
{
    LatchingObject out;
    const auto& C = D.shape->category();
    out.objects = D.shape->latching_objects(s);
    std::vector<std::int64_t> pos(C.num_objects(), -1);
    Diagram d;
    for (auto o : out.objects)
        pos[o] = static_cast<std::int64_t>(d.add_object(D.objects[o]));
    for (std::size_t a = 0; a < C.num_arrows(); ++a) {
        auto const& ar = C.arrow(a);
        if (C.is_identity(a) || pos[ar.source] < 0 || pos[ar.target] < 0)
            continue;
        d.add_edge(static_cast<std::size_t>(pos[ar.source]), static_cast<std::size_t>(pos[ar.target]), D.maps[a]);
    }
    out.colim = colimit(d);
    std::vector<SMap> cocone;
    for (auto o : out.objects)
        cocone.push_back(D.maps[C.hom(o, s).at(0)]);
    auto m = out.colim.mediate(cocone, D.objects[s]);
    if (!m)
        throw std::logic_error("latching cocone does not factor");
    out.comparison = std::move(*m);
    return out;
}

}  // namespace dihoto
