#include <catch_amalgamated.hpp>

#include <dihoto/ball_diagrams.hpp>
#include <dihoto/flow.hpp>
#include <dihoto/homology.hpp>

#include <map>

using namespace dihoto;

namespace {

using Pairs = std::vector<std::pair<std::string, std::string>>;

BoundedPoset diamond() { return BoundedPoset::closure({"0", "a", "b", "1"}, Pairs{{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}}); }

BoundedPoset fig_poset()
{
    return BoundedPoset::closure({"0", "A", "B", "C", "1"}, Pairs{{"0", "A"}, {"A", "B"}, {"B", "1"}, {"0", "C"}, {"C", "1"}});
}

template <class Fn>
ErrorKind kind(Fn fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::ParseError;
}

SMap empty_into(const Flow& X, std::size_t s, std::size_t t) { return SMap::from_empty(X.path(s, t)); }

// Diamond with both composite paths from 0 to 1 joined by an edge.
Flow diamond_ball()
{
    Flow X({"0", "a", "b", "1"});
    X = attach_cell(X, 0, 1, 3, empty_into(X, 1, 3)).flow;
    X = attach_cell(X, 0, 2, 3, empty_into(X, 2, 3)).flow;
    X = attach_cell(X, 0, 0, 1, empty_into(X, 0, 1)).flow;
    X = attach_cell(X, 0, 0, 2, empty_into(X, 0, 2)).flow;
    REQUIRE(X.path(0, 3).size() == 2);
    SMap ends(sphere(0), X.path(0, 3), {nondeg(0, 0), nondeg(1, 0)});
    return attach_cell(X, 1, 0, 3, ends).flow;
}

// Same states and paths up to state names, with identical simplex ids.
bool same_flow(const Flow& X, const Flow& Y)
{
    if (X.num_states() != Y.num_states() || X.paths().size() != Y.paths().size())
        return false;
    std::vector<std::size_t> to(X.num_states());
    for (std::size_t s = 0; s < X.num_states(); ++s) {
        auto i = Y.index(X.name(s));
        if (!i)
            return false;
        to[s] = *i;
    }
    for (auto const& [ab, p] : X.paths())
        if (!Y.nonempty(to[ab.first], to[ab.second]) || p.dump() != Y.path(to[ab.first], to[ab.second]).dump())
            return false;
    for (auto const& [abc, c] : X.compositions()) {
        auto const* d = Y.composition(to[abc[0]], to[abc[1]], to[abc[2]]);
        if (!d || d->map.images() != c.map.images())
            return false;
    }
    return true;
}

// Reassociation (X*Y)*Z -> X*(Y*Z) on states by name, paths by regrouping tuples.
bool reassociation_is_iso(const Flow& X, const Flow& Y, const Flow& Z)
{
    Flow L = concat(concat(X, Y), Z);
    Flow R = concat(X, concat(Y, Z));
    if (L.num_states() != R.num_states())
        return false;
    FlowMap m{&L, &R, {}, {}};
    for (std::size_t s = 0; s < L.num_states(); ++s) {
        auto i = R.index(L.name(s));
        if (!i)
            return false;
        m.states.push_back(*i);
    }
    // cut points in the concatenation are the two junctions
    auto PL = state_order(L);
    // X's states come first, then Y's states other than its initial one
    auto j1 = state_order(X).top();
    auto PY = state_order(Y);
    auto j2 = X.num_states() + PY.top() - (PY.bottom() < PY.top() ? 1 : 0);
    for (auto const& [ab, p] : L.paths()) {
        auto [a, b] = ab;
        std::vector<SSet> fs;
        std::vector<std::size_t> pts{a};
        for (auto j : {j1, j2})
            if (PL.less(a, j) && PL.less(j, b))
                pts.push_back(j);
        pts.push_back(b);
        for (std::size_t k = 1; k < pts.size(); ++k)
            fs.push_back(L.path(pts[k - 1], pts[k]));
        // both sides hold the same factors; regroup through the factor tuple
        ProductN left(fs);
        const SSet& tgt = R.path(m.states[a], m.states[b]);
        if (tgt.size() != p.size())
            return false;
        std::vector<Simplex> im;
        std::vector<SSet> rfs;
        std::vector<std::size_t> rpts;
        for (auto q : pts)
            rpts.push_back(m.states[q]);
        for (std::size_t k = 1; k < rpts.size(); ++k)
            rfs.push_back(R.path(rpts[k - 1], rpts[k]));
        if (fs.size() == 3) {
            Product inner(rfs[1], rfs[2]);
            Product outer(rfs[0], inner.space());
            if (outer.space().size() != tgt.size())
                return false;
            for (std::uint32_t id = 0; id < p.size(); ++id) {
                auto c = left.components(p.simplex(id));
                im.push_back(outer.pair(c[0], inner.pair(c[1], c[2])));
            }
        } else {
            for (std::uint32_t id = 0; id < p.size(); ++id)
                im.push_back(nondeg(id, p.dim(id)));
        }
        m.paths.emplace(ab, SMap(p, tgt, std::move(im)));
    }
    return m.is_isomorphism();
}

}  // namespace

TEST_CASE("poset flows")
{
    auto P = fig_poset();
    auto X = F(P);
    CHECK(X.paths().size() == 8);
    CHECK(state_order(X).canonical_code() == P.canonical_code());
    CHECK(is_full_directed_ball(X).ok());
    CHECK(check_associativity(X).ok);
    CHECK(X.compose(0, 1, 4, nondeg(0, 0), nondeg(0, 0)) == nondeg(0, 0));
}

TEST_CASE("state order rejects loops")
{
    Flow X({"p", "q"});
    X.set_path(0, 1, point());
    X.set_path(1, 0, point());
    CHECK(kind([&] { state_order(X); }) == ErrorKind::NotLoopless);
    Flow Y({"p"});
    Y.set_path(0, 0, point());
    CHECK(kind([&] { state_order(Y); }) == ErrorKind::NotLoopless);
}

TEST_CASE("ball certificate clauses")
{
    CHECK_FALSE(is_full_directed_ball(Flow{}).clause("finite").ok);

    // two initial states
    Flow two({"p", "q", "r"});
    two.set_path(0, 2, point());
    two.set_path(1, 2, point());
    auto c = is_full_directed_ball(two);
    CHECK_FALSE(c.clause("initial_final").ok);
    CHECK_FALSE(c.ok());

    // disconnected path space
    Flow gap({"0", "1"});
    gap.set_path(0, 1, points(2));
    auto g = is_full_directed_ball(gap);
    CHECK(g.clause("initial_final").ok);
    CHECK(g.clause("between").ok);
    CHECK_FALSE(g.clause("contractible_paths").ok);

    // a circle of paths
    Flow circ({"0", "1"});
    circ.set_path(0, 1, sphere(1));
    CHECK_FALSE(is_full_directed_ball(circ).clause("contractible_paths").ok);

    // a cycle through three states
    Flow cyc({"p", "q", "r"});
    cyc.set_path(0, 1, point());
    cyc.set_path(1, 2, point());
    cyc.set_path(2, 0, point());
    CHECK_FALSE(is_full_directed_ball(cyc).clause("loopless").ok);

    CHECK(is_full_directed_ball(diamond_ball()).ok());
}

TEST_CASE("restriction keeps paths and compositions")
{
    auto X = F(fig_poset());
    auto R = restriction(X, 0, 2);
    CHECK(R.names() == std::vector<std::string>{"0", "A", "B"});
    CHECK(R.paths().size() == 3);
    CHECK(is_full_directed_ball(R).ok());
    auto S = restriction(X, std::vector<std::size_t>{4, 0});
    CHECK(S.names() == std::vector<std::string>{"1", "0"});
    CHECK(S.nonempty(1, 0));
}

TEST_CASE("concatenation")
{
    auto two = F(chain_poset(2));
    auto three = F(chain_poset(3));
    auto c = concat(two, two);
    CHECK(c.names() == std::vector<std::string>{"0", "1", "1'"});
    CHECK(state_order(c).canonical_code() == chain_poset(3).canonical_code());
    CHECK(c.path(0, 2).size() == 1);
    CHECK(is_full_directed_ball(c).ok());
    CHECK(check_associativity(c).ok);
    (void)three;

    // paths across the junction are products
    auto d = diamond_ball();
    auto dd = concat(d, d);
    CHECK(dd.num_states() == 7);
    auto P = state_order(dd);
    auto top = P.top();
    CHECK(is_homology_contractible(dd.path(0, top)));
    CHECK(dd.path(0, top).count(2) == 2);
    CHECK(is_full_directed_ball(dd).ok());
    CHECK(check_associativity(dd).ok);

    CHECK(kind([&] { concat(Flow{}, d); }) == ErrorKind::NotABall);
}

TEST_CASE("concatenation is associative up to isomorphism")
{
    auto two = F(chain_poset(2));
    auto d = diamond_ball();
    auto fig = F(fig_poset());
    std::vector<Flow> balls{two, d, fig};
    for (auto const& x : balls)
        for (auto const& y : balls)
            for (auto const& z : balls)
                CHECK(reassociation_is_iso(x, y, z));
}

TEST_CASE("attaching cells")
{
    Flow X({"0", "1"});
    auto a0 = attach_cell(X, 0, 0, 1, empty_into(X, 0, 1));
    CHECK(a0.flow.path(0, 1).size() == 1);
    CHECK(a0.grown.size() == 1);
    CHECK(is_full_directed_ball(a0.flow).ok());

    // a second point, then an edge joining them
    auto a1 = attach_cell(a0.flow, 0, 0, 1, empty_into(a0.flow, 0, 1));
    CHECK(a1.flow.path(0, 1).size() == 2);
    SMap ends(sphere(0), a1.flow.path(0, 1), {nondeg(0, 0), nondeg(1, 0)});
    auto a2 = attach_cell(a1.flow, 1, 0, 1, ends);
    CHECK(homology(a2.flow.path(0, 1)) == homology(interval()));

    // the diamond: composites through a and b are joined
    auto D = diamond_ball();
    CHECK(is_homology_contractible(D.path(0, 3)));
    CHECK(D.path(0, 3).count(1) == 1);
    CHECK(check_associativity(D).ok);

    CHECK(kind([&] { attach_cell(a0.flow, 0, 1, 0, empty_into(a0.flow, 1, 0)); }) == ErrorKind::WouldCreateLoop);
    CHECK(kind([&] { attach_cell(a0.flow, 0, 0, 0, empty_into(a0.flow, 0, 0)); }) == ErrorKind::WouldCreateLoop);
    CHECK(kind([&] { attach_cell(a0.flow, 3, 0, 1, empty_into(a0.flow, 0, 1)); }) == ErrorKind::UnsupportedDimension);
}

TEST_CASE("attached cells compose through both sides")
{
    Flow X({"0", "m", "1"});
    X = attach_cell(X, 0, 0, 1, empty_into(X, 0, 1)).flow;
    X = attach_cell(X, 0, 1, 2, empty_into(X, 1, 2)).flow;
    CHECK(X.path(0, 2).size() == 1);
    auto a = attach_cell(X, 0, 0, 1, empty_into(X, 0, 1));
    CHECK(a.grown.size() == 2);
    CHECK(a.flow.path(0, 2).size() == 2);
    auto d = a.decode(0, 2, nondeg(1, 0));
    auto e = a.decode(0, 2, nondeg(0, 0));
    CHECK(d.old != e.old);
    CHECK(check_associativity(a.flow).ok);
}

TEST_CASE("path-product diagram")
{
    auto D = diamond_ball();
    PathProducts pp(D);
    auto Fd = Fdiag(D, pp);
    CHECK(Fd.objects.size() == Fd.shape->size());
    CHECK(Fd.is_functorial());
    auto const& top = Fd.objects[Fd.shape->terminal()];
    CHECK(is_homology_contractible(top));
    auto lat = latching_object(Fd, Fd.shape->terminal());
    CHECK(lat.colim.apex.size() == 2);
    CHECK(lat.comparison.is_injective());

    auto fig = F(fig_poset());
    CHECK(Fdiag(fig).is_functorial());
}

TEST_CASE("chain flows agree with iterated concatenation")
{
    for (auto const& D : {F(fig_poset()), diamond_ball(), concat(diamond_ball(), F(chain_poset(3)))}) {
        auto P = state_order(D);
        DeltaExt E(P);
        PathProducts pp(D);
        for (auto const& chain : E.objects()) {
            auto G = g_flow(D, P, chain, pp);
            CHECK(check_associativity(G).ok);
            CHECK(is_full_directed_ball(G).ok());
            Flow it = restriction(D, chain[0], chain[1]);
            for (std::size_t k = 2; k < chain.size(); ++k)
                it = concat(it, restriction(D, chain[k - 1], chain[k]));
            CHECK(same_flow(G, it));

            auto glob = glob_flow(G.path(0, G.num_states() - 1));
            auto gm = glob_to_g(glob, G, P, chain);
            CHECK(gm.is_morphism());
        }
        for (std::size_t a = 0; a < E.category().num_arrows(); ++a) {
            auto const& ar = E.category().arrow(a);
            auto Gf = g_flow(D, P, E.object(ar.source), pp);
            auto Gc = g_flow(D, P, E.object(ar.target), pp);
            CHECK(g_arrow(Gf, Gc, P, E.object(ar.source), E.object(ar.target), pp).is_morphism());
        }
    }
}

TEST_CASE("pushout against the maximal chain")
{
    for (auto const& D : {F(fig_poset()), F(diamond()), diamond_ball(), F(chain_poset(2))}) {
        auto r = pushmax_check(D);
        INFO(r.failures.size());
        CHECK(r.ok);
        CHECK(r.pairs_checked == D.paths().size());
    }
    Flow gap({"0", "1"});
    gap.set_path(0, 1, points(2));
    CHECK_FALSE(pushmax_check(gap).ok);
}

TEST_CASE("latching maps split as pushout products")
{
    for (auto const& D : {F(fig_poset()), F(diamond()), diamond_ball(), concat(diamond_ball(), F(chain_poset(2)))}) {
        auto r = simplification_check(D);
        CHECK(r.entries.size() == DeltaExt(state_order(D)).size());
        CHECK(r.ok());
    }
}

TEST_CASE("flow dump")
{
    auto s = dump(F(chain_poset(2)));
    CHECK(s.find("0 1") != std::string::npos);
}
