#include <catch_amalgamated.hpp>

#include <dihoto/smallcat.hpp>

#include <functional>

using namespace dihoto;

namespace {

BoundedPoset fig_poset()
{
    return BoundedPoset::closure({"0", "A", "B", "C", "1"},
                                 std::vector<std::pair<std::string, std::string>>{
                                     {"0", "A"}, {"A", "B"}, {"B", "1"}, {"0", "C"}, {"C", "1"}});
}

ExtSimplex chain(const BoundedPoset& P, std::vector<const char*> names)
{
    ExtSimplex s;
    for (auto n : names)
        s.push_back(*P.index(n));
    return s;
}

}  // namespace

TEST_CASE("order complex")
{
    auto two = chain_poset(2);
    CHECK(order_complex(two).size() == 3);
    for (std::size_t n = 2; n <= 6; ++n)
        CHECK(order_complex(chain_poset(n)).size() == (std::size_t{1} << n) - 1);
    auto P = fig_poset();
    auto oc = order_complex(P);
    CHECK(std::find(oc.begin(), oc.end(), chain(P, {"0", "A", "B", "1"})) != oc.end());
}

TEST_CASE("extended simplices of the five element example")
{
    auto P = fig_poset();
    DeltaExt D(P, true);
    REQUIRE(D.size() == 5);
    CHECK(D.object(D.terminal()) == chain(P, {"0", "1"}));
    for (std::size_t o = 0; o < D.size(); ++o)
        CHECK(D.category().hom(o, D.terminal()).size() == 1);
    CHECK(degree(P, chain(P, {"0", "A", "B", "1"})) == 3);
    CHECK(degree(P, chain(P, {"0", "1"})) == 9);
    CHECK(degree(P, chain(P, {"0", "C", "1"})) == 2);
    CHECK(degree(P, chain(P, {"0", "B", "1"})) == 5);
    CHECK(D.category().is_thin());
    auto rep = verify_direct(D);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
}

TEST_CASE("two-element chain")
{
    DeltaExt D(chain_poset(2), true);
    CHECK(D.size() == 1);
    CHECK(D.category().num_arrows() == 1);
    CHECK(verify_direct(D).ok);
    CHECK(latching_category(D, 0).category.empty());
    CHECK(matching_category(D, 0).category.empty());
}

TEST_CASE("latching and matching categories")
{
    auto P = fig_poset();
    DeltaExt D(P);
    CHECK(latching_category(D, D.terminal()).objects.size() == 4);
    auto maximal = D.index(chain(P, {"0", "A", "B", "1"}));
    CHECK(latching_category(D, maximal).category.empty());
    auto three = chain_poset(3);
    DeltaExt D3(three);
    auto lat = latching_category(D3, D3.terminal());
    REQUIRE(lat.objects.size() == 1);
    CHECK(D3.object(lat.objects[0]).size() == 3);
    for (std::size_t s = 0; s < D.size(); ++s)
        CHECK(matching_category(D, s).category.empty());
}

TEST_CASE("latching category is empty exactly at maximal chains")
{
    for (auto const& P : enumerate_bounded_posets(6)) {
        DeltaExt D(P);
        for (std::size_t s = 0; s < D.size(); ++s) {
            auto const& c = D.object(s);
            bool maximal = true;
            for (std::size_t i = 1; i < c.size(); ++i)
                if (P.chain_length(c[i - 1], c[i]) != 1)
                    maximal = false;
            CHECK(latching_category(D, s).category.empty() == maximal);
        }
    }
}

TEST_CASE("composition tables are associative")
{
    for (auto const& P : enumerate_bounded_posets(6))
        CHECK_NOTHROW(DeltaExt(P, true));
}

TEST_CASE("finality")
{
    auto P = fig_poset();
    DeltaExt D(P);
    const auto& C = D.category();
    std::vector<std::size_t> all(C.num_objects());
    std::iota(all.begin(), all.end(), std::size_t{0});
    auto [sub, arrows] = C.full_subcategory(all);
    auto id = inclusion_functor(sub, C, all, arrows);
    CHECK(id.is_functorial());
    CHECK(is_final_functor(id));

    // a terminal object alone is final
    std::vector<std::size_t> term{D.terminal()};
    auto [tsub, tarrows] = C.full_subcategory(term);
    CHECK(is_final_functor(inclusion_functor(tsub, C, term, tarrows)));

    // two objects a -> b; the inclusion of {a} is not final since b has no arrow to a
    auto two = FinCat::thin({"a", "b"}, {{true, true}, {false, true}});
    std::vector<std::size_t> only_a{0};
    auto [asub, aarrows] = two.full_subcategory(only_a);
    CHECK_FALSE(is_final_functor(inclusion_functor(asub, two, only_a, aarrows)));
}

TEST_CASE("dot export")
{
    DeltaExt D(fig_poset());
    auto dot = D.to_dot();
    CHECK(dot.find("digraph") == 0);
    CHECK(dot.find("(0,A,B,1)") != std::string::npos);
}
