#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "colim.hpp"
#include "error.hpp"
#include "flow.hpp"
#include "homology.hpp"
#include "poset.hpp"
#include "sset.hpp"

namespace dihoto {

// ---------------------------------------------------------------------------
// Cells and words
// ---------------------------------------------------------------------------

/// One globular cell: dimension, endpoints, and the images of the
/// nondegenerate simplices of its boundary sphere in the current P_st.
/// Two-dimensional cells use a polygon with orientation `shape`.
struct Cell {
    int n = 0;
    std::size_t source = 0;
    std::size_t target = 0;
    std::vector<bool> shape;
    std::vector<Simplex> attach;
};

inline SSet cell_sphere(const Cell& c)
{
    if (c.n == 2)
        return polygon(c.shape.empty() ? triangle_orientation() : c.shape);
    return sphere(c.n - 1);
}

inline SSet cell_disk(const Cell& c)
{
    if (c.n == 2)
        return polygon_cone(c.shape.empty() ? triangle_orientation() : c.shape);
    return disk(c.n);
}

/// A simplex of a disk of one cell; a path space simplex reads as the
/// sequence of cells it traverses.
struct Factor {
    std::size_t cell = 0;
    Simplex simplex;
    friend bool operator==(const Factor&, const Factor&) = default;
};

using Word = std::vector<Factor>;

inline std::string to_string(const Factor& f)
{
    std::string out = "c" + std::to_string(f.cell) + "/" + std::to_string(f.simplex.base) + "[";
    for (std::size_t i = 0; i < f.simplex.degen.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(f.simplex.degen[i]);
    }
    return out + "]";
}

inline std::string to_string(const Word& w)
{
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            out += "*";
        out += to_string(w[i]);
    }
    return out;
}

inline Word parse_word(std::string_view text)
{
    auto fail = [&] { throw Error(ErrorKind::ParseError, "bad word '" + std::string(text) + "'"); };
    Word w;
    std::size_t i = 0;
    auto number = [&]() -> unsigned long {
        std::size_t j = i;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9')
            ++j;
        if (j == i || j - i > 9)
            fail();
        auto v = std::stoul(std::string(text.substr(i, j - i)));
        i = j;
        return v;
    };
    auto expect = [&](char c) {
        if (i >= text.size() || text[i] != c)
            fail();
        ++i;
    };
    while (true) {
        Factor f;
        expect('c');
        f.cell = number();
        expect('/');
        f.simplex.base = static_cast<std::uint32_t>(number());
        expect('[');
        while (true) {
            auto v = number();
            if (v > 255)
                fail();
            f.simplex.degen.push_back(static_cast<std::uint8_t>(v));
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            break;
        }
        expect(']');
        w.push_back(std::move(f));
        if (i == text.size())
            break;
        expect('*');
    }
    return w;
}

/// Splits a word into its nondegenerate part and the common degeneracy.
inline std::pair<Word, Surjection> normalize(const Word& w)
{
    if (w.empty())
        throw std::invalid_argument("empty word");
    const std::size_t len = w[0].simplex.degen.size();
    for (auto const& f : w)
        if (f.simplex.degen.size() != len)
            throw Error(ErrorKind::MalformedCell, "factors of different dimensions in " + to_string(w));
    Surjection rho(len, 0);
    std::vector<std::size_t> first{0};
    for (std::size_t k = 1; k < len; ++k) {
        bool same = std::all_of(w.begin(), w.end(),
                                [&](const Factor& f) { return f.simplex.degen[k] == f.simplex.degen[k - 1]; });
        rho[k] = static_cast<std::uint8_t>(same ? rho[k - 1] : rho[k - 1] + 1);
        if (!same)
            first.push_back(k);
    }
    Word nd;
    for (auto const& f : w) {
        Factor g{f.cell, {f.simplex.base, {}}};
        for (auto k : first)
            g.simplex.degen.push_back(f.simplex.degen[k]);
        nd.push_back(std::move(g));
    }
    return {nd, rho};
}

// ---------------------------------------------------------------------------
// Globular decompositions
// ---------------------------------------------------------------------------

/**
 * A finite sequence of cell attachments starting from the discrete flow on
 * `states`, with the attachment data of every step.
 */
class GlobularDecomposition {
  public:
    GlobularDecomposition() = default;
    explicit GlobularDecomposition(std::vector<std::string> states)
        : states_(std::move(states)), discrete_(states_)
    {
    }

    const std::vector<std::string>& states() const { return states_; }
    std::optional<std::size_t> state(std::string_view name) const { return discrete_.index(name); }
    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }

    /// Flow after the first k cells.
    const Flow& flow(std::size_t k) const { return k == 0 ? discrete_ : steps_.at(k - 1).flow; }
    const Flow& final_flow() const { return flow(cells_.size()); }
    const Attachment& step(std::size_t k) const { return steps_.at(k); }

    /// Attaches a cell to the current flow.
    void push(Cell c, bool validate = true)
    {
        const Flow& X = final_flow();
        const std::size_t n = X.num_states();
        if (c.n < 0 || c.n > 2)
            throw Error(ErrorKind::MalformedCell, "cell of dimension " + std::to_string(c.n));
        if (c.source >= n || c.target >= n)
            throw Error(ErrorKind::MalformedCell, "cell endpoint out of range");
        if (c.n == 2 && c.shape.empty())
            c.shape = triangle_orientation();
        if (c.n != 2)
            c.shape.clear();
        SSet sph = cell_sphere(c);
        SSet dsk = cell_disk(c);
        if (c.attach.size() != sph.size())
            throw Error(ErrorKind::MalformedCell, "attaching map has " + std::to_string(c.attach.size()) +
                                                      " images for " + std::to_string(sph.size()) + " simplices");
        std::optional<SMap> att;
        try {
            att.emplace(sph, X.path(c.source, c.target), c.attach);
        } catch (const std::exception& e) {
            throw Error(ErrorKind::MalformedCell, std::string("attaching map: ") + e.what());
        }
        steps_.push_back(attach_cell(X, c.source, c.target, boundary_inclusion(sph, dsk), *att, validate));
        cells_.push_back(std::move(c));
    }

    /// The decomposition made of the first k cells.
    GlobularDecomposition prefix(std::size_t k) const
    {
        GlobularDecomposition out(states_);
        out.cells_.assign(cells_.begin(), cells_.begin() + static_cast<std::ptrdiff_t>(k));
        out.steps_.assign(steps_.begin(), steps_.begin() + static_cast<std::ptrdiff_t>(k));
        return out;
    }

    /// Word of a simplex of P_ab in the flow after k cells.
    Word word(std::size_t k, std::size_t a, std::size_t b, const Simplex& s) const
    {
        Word w = word_nd(k, a, b, s.base);
        for (auto& f : w)
            f.simplex = f.simplex.degenerate(s.degen);
        return w;
    }

    /// Simplex of P_ab in the flow after k cells with the given word.
    std::optional<Simplex> find(std::size_t k, std::size_t a, std::size_t b, const Word& w) const
    {
        auto [nd, rho] = normalize(w);
        auto const& table = lookup(k, a, b);
        auto it = table.find(to_string(nd));
        if (it == table.end())
            return std::nullopt;
        return Simplex{it->second, rho};
    }

  private:
    struct Cache {
        std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::uint32_t>, Word> words;
        std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::map<std::string, std::uint32_t>> tables;
    };

    void append(Word& w, const Word& more) const { w.insert(w.end(), more.begin(), more.end()); }

    const Word& word_nd(std::size_t k, std::size_t a, std::size_t b, std::uint32_t id) const
    {
        // only steps that grew P_ab change it
        std::size_t j = k;
        while (j > 0 && !steps_[j - 1].grown.count({a, b}))
            --j;
        auto key = std::make_tuple(j, a, b, id);
        if (auto it = cache_.words.find(key); it != cache_.words.end())
            return it->second;
        if (j == 0)
            throw std::logic_error("word of a path in the discrete flow");
        const Attachment& A = steps_[j - 1];
        const SSet& here = A.flow.path(a, b);
        auto d = A.decode(a, b, nondeg(id, here.dim(id)));
        Word w;
        if (d.old) {
            w = word(j - 1, a, b, d.old_simplex);
        } else {
            if (d.left)
                append(w, word(j - 1, a, A.source, *d.left));
            auto [obj, cid] = A.cell.reps[d.cell_simplex.base];
            Simplex cs{cid, d.cell_simplex.degen};
            if (obj == 0)
                append(w, word(j - 1, A.source, A.target, cs));
            else
                w.push_back({j - 1, cs});
            if (d.right)
                append(w, word(j - 1, A.target, b, *d.right));
        }
        return cache_.words.emplace(key, std::move(w)).first->second;
    }

    const std::map<std::string, std::uint32_t>& lookup(std::size_t k, std::size_t a, std::size_t b) const
    {
        auto key = std::make_tuple(k, a, b);
        if (auto it = cache_.tables.find(key); it != cache_.tables.end())
            return it->second;
        std::map<std::string, std::uint32_t> table;
        const SSet& p = flow(k).path(a, b);
        for (std::uint32_t id = 0; id < p.size(); ++id)
            if (!table.emplace(to_string(word_nd(k, a, b, id)), id).second)
                throw std::logic_error("two simplices with the same word");
        return cache_.tables.emplace(key, std::move(table)).first->second;
    }

    std::vector<std::string> states_;
    Flow discrete_;
    std::vector<Cell> cells_;
    std::vector<Attachment> steps_;
    mutable Cache cache_;
};

/// Builds a decomposition by attaching `cells` in order.
inline GlobularDecomposition replay(const std::vector<std::string>& states, const std::vector<Cell>& cells)
{
    GlobularDecomposition dec(states);
    for (auto const& c : cells)
        dec.push(c);
    return dec;
}

/// Final flow of a fresh replay of the cells.
inline Flow replay(const GlobularDecomposition& dec) { return replay(dec.states(), dec.cells()).final_flow(); }

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// `state NAME` lines, then `cell n source target [shape] : image ; image ...`
/// with images written as words and shapes as strings of + and -.
inline std::string dump(const GlobularDecomposition& dec)
{
    std::ostringstream os;
    for (auto const& s : dec.states())
        os << "state " << s << "\n";
    for (std::size_t k = 0; k < dec.size(); ++k) {
        auto const& c = dec.cells()[k];
        os << "cell " << c.n << " " << dec.states()[c.source] << " " << dec.states()[c.target];
        if (c.n == 2) {
            os << " ";
            for (bool f : c.shape)
                os << (f ? '+' : '-');
        }
        os << " :";
        for (std::size_t i = 0; i < c.attach.size(); ++i)
            os << (i ? " ; " : " ") << to_string(dec.word(k, c.source, c.target, c.attach[i]));
        os << "\n";
    }
    return os.str();
}

inline GlobularDecomposition parse_decomposition(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    std::vector<std::string> states;
    std::optional<GlobularDecomposition> dec;
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        std::string head, images;
        if (auto colon = line.find(':'); colon != std::string::npos) {
            head = line.substr(0, colon);
            images = line.substr(colon + 1);
        } else {
            head = line;
        }
        std::istringstream ls(head);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        if (tok[0] == "state") {
            if (dec)
                fail("state after cells");
            if (tok.size() != 2)
                fail("expected 'state NAME'");
            if (std::find(states.begin(), states.end(), tok[1]) != states.end())
                fail("duplicate state '" + tok[1] + "'");
            states.push_back(tok[1]);
            continue;
        }
        if (tok[0] != "cell")
            fail("unknown declaration '" + tok[0] + "'");
        if (!dec)
            dec.emplace(states);
        if (tok.size() < 4 || tok.size() > 5 || line.find(':') == std::string::npos)
            fail("expected 'cell n source target [shape] : images'");
        Cell c;
        if (tok[1] != "0" && tok[1] != "1" && tok[1] != "2")
            fail("cell dimension must be 0, 1 or 2");
        c.n = tok[1][0] - '0';
        auto s = dec->state(tok[2]), t = dec->state(tok[3]);
        if (!s || !t)
            fail("unknown state");
        c.source = *s;
        c.target = *t;
        if (tok.size() == 5) {
            if (c.n != 2)
                fail("only 2-cells take a shape");
            for (char ch : tok[4]) {
                if (ch != '+' && ch != '-')
                    fail("shape must use + and -");
                c.shape.push_back(ch == '+');
            }
        } else if (c.n == 2) {
            c.shape = triangle_orientation();
        }
        std::vector<std::string> ws;
        {
            std::istringstream is(images);
            for (std::string part; std::getline(is, part, ';');) {
                std::istringstream ps(part);
                std::string w, extra;
                ps >> w;
                if (ps >> extra)
                    fail("images are separated by ';'");
                if (!w.empty())
                    ws.push_back(w);
            }
        }
        const std::size_t k = dec->size();
        for (auto const& w : ws) {
            auto img = dec->find(k, c.source, c.target, parse_word(w));
            if (!img)
                fail("no path '" + w + "' from " + tok[2] + " to " + tok[3]);
            c.attach.push_back(*img);
        }
        try {
            dec->push(std::move(c));
        } catch (const Error& e) {
            fail(e.what());
        }
    }
    if (!dec)
        dec.emplace(states);
    return std::move(*dec);
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

namespace detail {

// Loop in the 1-skeleton: vertices x_0..x_(k-1) and edge j from x_j to x_(j+1).
struct EdgeLoop {
    std::vector<std::uint32_t> vertices;
    std::vector<std::uint32_t> edges;
    std::vector<bool> forward;
};

// Fundamental cycles of a breadth-first spanning forest, by non-tree edge id.
inline std::vector<EdgeLoop> fundamental_cycles(const SSet& x)
{
    const std::uint32_t none = ~0u;
    std::vector<std::uint32_t> parent(x.size(), none), parent_edge(x.size(), none), depth(x.size(), 0);
    std::vector<std::vector<std::uint32_t>> incident(x.size());
    for (auto e : x.of_dim(1)) {
        auto f = x.faces(e);
        incident[f[0].base].push_back(e);
        incident[f[1].base].push_back(e);
    }
    std::vector<bool> seen(x.size(), false), tree(x.size(), false);
    for (auto root : x.of_dim(0)) {
        if (seen[root])
            continue;
        seen[root] = true;
        std::vector<std::uint32_t> queue{root};
        for (std::size_t q = 0; q < queue.size(); ++q) {
            auto v = queue[q];
            for (auto e : incident[v]) {
                auto f = x.faces(e);
                auto w = f[0].base == v ? f[1].base : f[0].base;
                if (seen[w])
                    continue;
                seen[w] = true;
                tree[e] = true;
                parent[w] = v;
                parent_edge[w] = e;
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    auto is_forward = [&](std::uint32_t e, std::uint32_t from) { return x.faces(e)[1].base == from; };
    std::vector<EdgeLoop> out;
    for (auto e : x.of_dim(1)) {
        if (tree[e])
            continue;
        auto f = x.faces(e);
        const std::uint32_t u = f[1].base, v = f[0].base;
        EdgeLoop loop;
        loop.vertices.push_back(u);
        loop.edges.push_back(e);
        loop.forward.push_back(true);
        // tree path v -> u through their lowest common ancestor
        std::vector<std::uint32_t> up_v, up_u;
        auto a = v, b = u;
        while (a != b) {
            if (depth[a] >= depth[b]) {
                up_v.push_back(a);
                a = parent[a];
            } else {
                up_u.push_back(b);
                b = parent[b];
            }
        }
        for (auto c : up_v) {
            loop.vertices.push_back(c);
            loop.edges.push_back(parent_edge[c]);
            loop.forward.push_back(is_forward(parent_edge[c], c));
        }
        for (auto it = up_u.rbegin(); it != up_u.rend(); ++it) {
            loop.vertices.push_back(parent[*it]);
            loop.edges.push_back(parent_edge[*it]);
            loop.forward.push_back(is_forward(parent_edge[*it], parent[*it]));
        }
        out.push_back(std::move(loop));
    }
    return out;
}

inline std::pair<long, long> h1_size(const HomologyResult& h)
{
    long t = 1;
    if (h.torsion.size() > 1)
        for (auto v : h.torsion[1])
            t *= v;
    return {h.betti_at(1), h.torsion.size() > 1 && !h.torsion[1].empty() ? t : 0};
}

inline Cell loop_cell(std::size_t s, std::size_t t, const EdgeLoop& loop)
{
    Cell c;
    c.n = 2;
    c.source = s;
    c.target = t;
    c.shape = loop.forward;
    for (auto v : loop.vertices)
        c.attach.push_back(nondeg(v, 0));
    for (auto e : loop.edges)
        c.attach.push_back(nondeg(e, 1));
    return c;
}

}  // namespace detail

/// Cells attached in order, with the pairs in processing order and any
/// processed path space that changed afterwards.
struct Resolution {
    GlobularDecomposition dec;
    std::vector<Flow::Pair> order;
    std::vector<std::string> audit;

    const Flow& flow() const { return dec.final_flow(); }
    std::size_t count(int n) const
    {
        return static_cast<std::size_t>(
            std::count_if(dec.cells().begin(), dec.cells().end(), [&](const Cell& c) { return c.n == n; }));
    }
};

/**
 * Full directed ball on P: pairs in increasing (longest chain, index)
 * order get a path when empty, edges between components while
 * disconnected, and polygon disks along cycles while H1 is nonzero.
 */
inline Resolution resolve(const BoundedPoset& P)
{
    Resolution r{GlobularDecomposition(P.names()), {}, {}};
    const std::size_t n = P.size();
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (P.less(a, b))
                pairs.emplace_back(P.chain_length(a, b), a, b);
    std::sort(pairs.begin(), pairs.end());
    std::map<Flow::Pair, std::string> snapshot;
    for (auto [len, a, b] : pairs) {
        r.order.emplace_back(a, b);
        auto path = [&]() -> const SSet& { return r.dec.final_flow().path(a, b); };
        if (path().size() == 0)
            r.dec.push({0, a, b, {}, {}});
        while (true) {
            auto [comp, count] = vertex_components(path());
            if (count < 2)
                break;
            std::uint32_t v0 = ~0u, v1 = ~0u;
            for (auto v : path().of_dim(0)) {
                if (comp[v] == 0 && v0 == ~0u)
                    v0 = v;
                if (comp[v] == 1 && v1 == ~0u)
                    v1 = v;
            }
            r.dec.push({1, a, b, {}, {nondeg(v0, 0), nondeg(v1, 0)}});
        }
        while (true) {
            auto h = homology(path());
            auto size = detail::h1_size(h);
            if (size == std::pair<long, long>{0, 0})
                break;
            std::optional<Cell> pick;
            for (auto const& loop : detail::fundamental_cycles(path())) {
                Cell c = detail::loop_cell(a, b, loop);
                SMap att(cell_sphere(c), path(), c.attach);
                auto T = pushout(att, boundary_inclusion(cell_sphere(c), cell_disk(c))).apex;
                if (detail::h1_size(homology(T)) < size) {
                    pick = std::move(c);
                    break;
                }
            }
            if (!pick)
                throw Error(ErrorKind::ResolutionStuck,
                            "no cycle reduces H1 of P(" + P.name(a) + "," + P.name(b) + ")");
            r.dec.push(std::move(*pick));
        }
        if (!is_homology_contractible(path()))
            throw Error(ErrorKind::ResolutionStuck, "P(" + P.name(a) + "," + P.name(b) +
                                                        ") needs a cell of dimension above 2: " +
                                                        homology(path()).to_string());
        snapshot[{a, b}] = path().dump();
    }
    for (auto const& [ab, d] : snapshot)
        if (r.flow().path(ab.first, ab.second).dump() != d)
            r.audit.push_back(P.name(ab.first) + "," + P.name(ab.second));
    return r;
}

}  // namespace dihoto
