#include <catch_amalgamated.hpp>

#include <dihoto/resolve.hpp>

using namespace dihoto;

namespace {

using Pairs = std::vector<std::pair<std::string, std::string>>;

BoundedPoset diamond() { return BoundedPoset::closure({"0", "a", "b", "1"}, Pairs{{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}}); }

BoundedPoset fig_poset()
{
    return BoundedPoset::closure({"0", "A", "B", "C", "1"}, Pairs{{"0", "A"}, {"A", "B"}, {"B", "1"}, {"0", "C"}, {"C", "1"}});
}

BoundedPoset crown()
{
    return BoundedPoset::closure({"0", "a", "b", "c", "d", "1"},
                                 Pairs{{"0", "a"}, {"0", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "1"}, {"d", "1"}});
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

std::string flow_dump(const Flow& X) { return dump(X); }

}  // namespace

TEST_CASE("words")
{
    Word w{{3, {0, {0, 0}}}, {5, {2, {0, 1}}}};
    CHECK(to_string(w) == "c3/0[0,0]*c5/2[0,1]");
    CHECK(parse_word(to_string(w)) == w);
    auto [nd, rho] = normalize(w);
    CHECK(nd == w);
    CHECK(rho == Surjection{0, 1});

    Word deg{{1, {0, {0, 0, 0}}}, {2, {2, {0, 0, 1}}}};
    auto [nd2, rho2] = normalize(deg);
    CHECK(to_string(nd2) == "c1/0[0,0]*c2/2[0,1]");
    CHECK(rho2 == Surjection{0, 0, 1});

    for (auto bad : {"", "c", "c1", "c1/0", "c1/0[0", "c1/0[0]*", "x1/0[0]", "c1/0[0]c2/0[0]"})
        CHECK(kind([&] { parse_word(bad); }) == ErrorKind::ParseError);
}

TEST_CASE("resolving small posets")
{
    auto two = resolve(chain_poset(2));
    CHECK(two.dec.size() == 1);
    CHECK(two.count(0) == 1);
    CHECK(two.flow().path(0, 1).size() == 1);

    // composites already fill the long pair of a chain
    auto three = resolve(chain_poset(3));
    CHECK(three.count(0) == 2);
    CHECK(three.count(1) == 0);
    CHECK(three.flow().path(0, 2).size() == 1);

    auto d = resolve(diamond());
    CHECK(d.count(0) == 4);
    CHECK(d.count(1) == 1);
    CHECK(homology(d.flow().path(0, 3)).betti_at(0) == 1);

    auto f = resolve(fig_poset());
    CHECK(f.count(0) == 5);
    CHECK(f.count(1) == 1);
    CHECK(is_full_directed_ball(f.flow()).ok());

    // the crown has a square of paths that needs a disk
    auto c = resolve(crown());
    CHECK(c.count(0) == 8);
    CHECK(c.count(1) == 4);
    CHECK(c.count(2) == 1);
    CHECK(c.dec.cells().back().shape.size() == 4);
    CHECK(is_full_directed_ball(c.flow()).ok());
}

TEST_CASE("processing order")
{
    auto r = resolve(fig_poset());
    auto P = fig_poset();
    for (std::size_t i = 1; i < r.order.size(); ++i)
        CHECK(P.chain_length(r.order[i - 1].first, r.order[i - 1].second) <=
              P.chain_length(r.order[i].first, r.order[i].second));
    CHECK(r.audit.empty());
}

TEST_CASE("every small poset resolves to a ball")
{
    for (auto const& P : enumerate_bounded_posets(5)) {
        auto r = resolve(P);
        INFO(P.to_text());
        CHECK(is_full_directed_ball(r.flow()).ok());
        CHECK(state_order(r.flow()).canonical_code() == P.canonical_code());
        CHECK(r.audit.empty());
        for (std::size_t k = 1; k <= r.dec.size(); ++k)
            CHECK(check_associativity(r.dec.flow(k)).ok);
        for (auto const& c : r.dec.cells())
            CHECK(P.less(c.source, c.target));
    }
}

TEST_CASE("resolution is deterministic")
{
    CHECK(dump(resolve(crown()).dec) == dump(resolve(crown()).dec));
}

TEST_CASE("replay")
{
    GlobularDecomposition empty({"p", "q"});
    CHECK(replay(empty).paths().empty());
    CHECK(replay(empty).num_states() == 2);

    auto r = resolve(diamond());
    CHECK(flow_dump(replay(r.dec)) == flow_dump(r.flow()));
    for (std::size_t k = 0; k <= r.dec.size(); ++k) {
        auto pre = r.dec.prefix(k);
        CHECK(flow_dump(replay(pre)) == flow_dump(r.dec.flow(k)));
    }

    Cell bad{1, 0, 3, {}, {nondeg(0, 0)}};
    auto copy = r.dec.prefix(4);
    CHECK(kind([&] { copy.push(bad); }) == ErrorKind::MalformedCell);
    CHECK(kind([&] { copy.push({3, 0, 3, {}, {}}); }) == ErrorKind::MalformedCell);
    CHECK(kind([&] { copy.push({0, 0, 9, {}, {}}); }) == ErrorKind::MalformedCell);
    CHECK(kind([&] { copy.push({0, 3, 0, {}, {}}); }) == ErrorKind::WouldCreateLoop);
}

TEST_CASE("words of paths")
{
    auto r = resolve(diamond());
    auto const& dec = r.dec;
    const auto& p = dec.final_flow().path(0, 3);
    for (std::uint32_t id = 0; id < p.size(); ++id) {
        auto w = dec.word(dec.size(), 0, 3, p.simplex(id));
        // vertices pass two covers; the joining edge is the 1-cell itself
        CHECK(w.size() == (p.dim(id) == 0 ? 2u : 1u));
        CHECK(dec.find(dec.size(), 0, 3, w) == p.simplex(id));
    }
    // a vertex of P_01 goes through a lower and an upper cover
    auto v = dec.word(dec.size(), 0, 3, nondeg(p.of_dim(0)[0], 0));
    CHECK(dec.cells()[v[0].cell].source == 0);
    CHECK(dec.cells()[v[1].cell].target == 3);

    // degenerate simplices keep the factor cells
    auto s0 = dec.word(dec.size(), 0, 3, Simplex{p.of_dim(0)[0], {0, 0}});
    CHECK(s0.size() == 2);
    CHECK(dec.find(dec.size(), 0, 3, s0) == Simplex{p.of_dim(0)[0], {0, 0}});
}

TEST_CASE("decomposition text round trip")
{
    for (auto const& P : {chain_poset(2), diamond(), fig_poset(), crown()}) {
        auto r = resolve(P);
        auto text = dump(r.dec);
        auto back = parse_decomposition(text);
        CHECK(dump(back) == text);
        CHECK(flow_dump(back.final_flow()) == flow_dump(r.flow()));
    }
    auto text = dump(resolve(diamond()).dec);
    CHECK(text.find("cell 1 0 1 : ") != std::string::npos);

    CHECK(kind([] { parse_decomposition("state p\nstate p\n"); }) == ErrorKind::ParseError);
    CHECK(kind([] { parse_decomposition("state p\ncell 0 p q :\n"); }) == ErrorKind::ParseError);
    CHECK(kind([] { parse_decomposition("state p\nstate q\ncell 0 p q :\ncell 1 p q : c0/0[0]\n"); }) == ErrorKind::ParseError);
    CHECK(kind([] { parse_decomposition("state p\nstate q\ncell 1 p q : c7/0[0] ; c0/0[0]\n"); }) == ErrorKind::ParseError);
    CHECK(kind([] { parse_decomposition("blob\n"); }) == ErrorKind::ParseError);
    auto two = parse_decomposition("# two paths joined\nstate p\nstate q\ncell 0 p q :\ncell 0 p q :\ncell 1 p q : c0/0[0] ; c1/0[0]\n");
    CHECK(two.size() == 3);
    CHECK(is_full_directed_ball(two.final_flow()).ok());
}
