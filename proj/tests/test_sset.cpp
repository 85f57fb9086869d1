#include <catch_amalgamated.hpp>

#include <dihoto/colim.hpp>
#include <dihoto/homology.hpp>
#include <dihoto/sset.hpp>

#include <random>

using namespace dihoto;

namespace {

std::vector<long> betti(const SSet& x) { return homology(x).betti; }

SSet random_sset(std::mt19937& rng)
{
    std::uniform_int_distribution<int> pick(0, 5);
    std::vector<SSet> pool{point(), points(2), interval(), sphere(1), disk(2), polygon({true, false})};
    return pool[static_cast<std::size_t>(pick(rng))];
}

}  // namespace

TEST_CASE("surjection helpers")
{
    CHECK(is_identity(identity_surjection(3)));
    Surjection s{0, 0, 1};
    Surjection t{0, 1, 1, 2};
    CHECK(compose(s, t) == Surjection{0, 0, 0, 1});
    CHECK(compose(identity_surjection(2), s) == s);
}

TEST_CASE("faces of degenerate simplices")
{
    auto I = interval();
    Simplex deg{2, Surjection{0, 1, 1}};  // s1 of the edge
    // d0 s1 = s0 d0
    CHECK(I.face(deg, 0) == Simplex{1, Surjection{0, 0}});
    CHECK(I.face(deg, 1).nondegenerate());
    CHECK(I.face(deg, 2).nondegenerate());
    Simplex vdeg{0, Surjection{0, 0}};
    CHECK(I.face(vdeg, 0) == nondeg(0, 0));
}

TEST_CASE("basic constructors and homology")
{
    CHECK(betti(point()) == std::vector<long>{1});
    CHECK(betti(sphere(0)) == std::vector<long>{2});
    CHECK(betti(sphere(1)) == std::vector<long>{1, 1});
    CHECK(empty_sset().empty());
    CHECK(sphere(-1).empty());
    CHECK(is_homology_contractible(disk(0)));
    CHECK(is_homology_contractible(disk(1)));
    CHECK(is_homology_contractible(disk(2)));
    CHECK_FALSE(is_homology_contractible(sphere(1)));
    CHECK_FALSE(is_homology_contractible(empty_sset()));
    CHECK_THROWS_AS(sphere(2), Error);
    CHECK_THROWS_AS(disk(3), Error);
    auto inc = boundary_inclusion(sphere(1), disk(2));
    CHECK(inc.is_injective());
}

TEST_CASE("polygons and cones")
{
    for (std::size_t k = 1; k <= 5; ++k) {
        std::vector<bool> orient(k);
        for (std::size_t j = 0; j < k; ++j)
            orient[j] = (j % 2 == 0);
        CHECK(betti(polygon(orient)) == std::vector<long>{1, 1});
        CHECK(is_homology_contractible(polygon_cone(orient)));
    }
}

TEST_CASE("torsion is detected")
{
    // a disk whose boundary wraps twice around a loop
    SSetBuilder b;
    auto v = b.add_vertex();
    auto a = b.add_nd(1, {v, v});
    b.add(2, {nondeg(a, 1), {v, Surjection{0, 0}}, nondeg(a, 1)});
    auto h = homology(b.build());
    CHECK(h.betti == std::vector<long>{1, 0, 0});
    CHECK(h.torsion[1] == std::vector<long>{2});
    CHECK_FALSE(is_homology_contractible(b.build()));
}

TEST_CASE("products")
{
    Product sq(interval(), interval());
    CHECK(sq.space().count(0) == 4);
    CHECK(sq.space().count(1) == 5);
    CHECK(sq.space().count(2) == 2);
    CHECK(is_homology_contractible(sq.space()));
    Product four(sphere(0), sphere(0));
    CHECK(four.space().size() == 4);
    CHECK(four.space().dimension() == 0);
    Product unit(sphere(1), point());
    CHECK(isomorphic(unit.space(), sphere(1)));
    Product torus(sphere(1), sphere(1));
    CHECK(betti(torus.space()) == std::vector<long>{1, 2, 1});
    auto p1 = sq.proj1();
    auto p2 = sq.proj2();
    for (std::uint32_t id = 0; id < sq.space().size(); ++id) {
        auto s = sq.space().simplex(id);
        CHECK(sq.pair(p1(s), p2(s)) == s);
    }
    Product cube(sq.space(), interval());
    CHECK(cube.space().count(3) == 6);
}

TEST_CASE("euler characteristic is multiplicative")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto x = random_sset(rng);
        auto y = random_sset(rng);
        Product p(x, y);
        CHECK(p.space().euler_characteristic() == x.euler_characteristic() * y.euler_characteristic());
    }
}

TEST_CASE("homology of disjoint unions is additive")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        auto x = random_sset(rng);
        auto y = random_sset(rng);
        auto hx = homology(x), hy = homology(y), hu = homology(disjoint_union(x, y));
        for (std::size_t n = 0; n < 3; ++n)
            CHECK(hu.betti_at(n) == hx.betti_at(n) + hy.betti_at(n));
    }
}

TEST_CASE("globes")
{
    auto g0 = globe(empty_sset());
    CHECK(g0.space.size() == 2);
    CHECK(g0.space.dimension() == 0);
    CHECK(g0.bottom != g0.top);
    auto g1 = globe(point());
    CHECK(isomorphic(g1.space, interval()));
    auto g2 = globe(sphere(0));
    CHECK(betti(g2.space) == std::vector<long>{1, 1});
    CHECK(g2.space.count(0) == 2);
}

TEST_CASE("suspension shifts reduced homology")
{
    std::vector<SSet> zs{point(), sphere(0), sphere(1), disk(1), disk(2), polygon({true, true}),
                         Product(sphere(1), sphere(1)).space()};
    for (auto const& z : zs) {
        auto hz = homology(z);
        auto hg = homology(globe(z).space);
        long components = hz.betti_at(0);
        // unreduced suspension of a space with c components has H1 of rank c-1
        CHECK(hg.reduced_betti(0) == 0);
        CHECK(hg.betti_at(1) == components - 1);
        for (std::size_t n = 2; n <= 4; ++n)
            CHECK(hg.betti_at(n) == hz.reduced_betti(n - 1));
    }
}

TEST_CASE("isomorphism search")
{
    CHECK(isomorphic(polygon({true, true, false}), polygon({false, true, true})));
    CHECK_FALSE(isomorphic(polygon({true, true, true}), polygon({true, true, false})));
    auto m = find_isomorphism(disk(2), polygon_cone(triangle_orientation()));
    REQUIRE(m);
    CHECK(m->is_isomorphism());
}

TEST_CASE("dump format is stable")
{
    auto d = interval().dump();
    CHECK(d == "0 0 :\n0 1 :\n1 2 : 1 0\n");
    auto s = Simplex{2, Surjection{0, 0}};
    CHECK(to_string(s) == "2[0,0]");
}

TEST_CASE("builder rejects bad faces")
{
    SSetBuilder b;
    auto v = b.add_vertex();
    CHECK_THROWS(b.add_nd(1, {v}));
    CHECK_THROWS(b.add_nd(1, {v, 7}));
    auto w = b.add_vertex();
    auto e = b.add_nd(1, {w, v});
    auto f = b.add_nd(1, {w, v});
    // d0 d2 = d1 d0 forces the triangle's vertices to match
    CHECK_THROWS(b.add_nd(2, {e, f, e}));
}
