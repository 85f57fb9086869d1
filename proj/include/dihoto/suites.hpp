#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ball_diagrams.hpp"
#include "colim.hpp"
#include "flow.hpp"
#include "homology.hpp"
#include "poset.hpp"
#include "realize.hpp"
#include "resolve.hpp"
#include "smallcat.hpp"
#include "sset.hpp"

namespace dihoto {

// ---------------------------------------------------------------------------
// Randomness and workers
// ---------------------------------------------------------------------------

/// SplitMix64 generator; satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Stream for one suite: the seed mixed with an FNV-1a hash of the name.
    SplitMix64(std::uint64_t seed, std::string_view suite)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : suite) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        state_ = seed ^ h;
        (*this)();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, n).
    std::size_t below(std::size_t n) { return static_cast<std::size_t>((*this)() % n); }

    /// Independent child stream.
    SplitMix64 split() { return SplitMix64((*this)()); }

private:
    std::uint64_t state_ = 0;
};

/// Worker count from DIHOTO_WORKERS, else the hardware concurrency.
inline std::size_t worker_count()
{
    if (const char* env = std::getenv("DIHOTO_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..n-1) on the worker pool; results keep index order.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))>
{
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t k = std::min(worker_count(), n);
    if (k <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < k; ++t)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// Suite results
// ---------------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    std::size_t checked = 0;
    std::vector<std::string> failures;
    double seconds = 0;

    bool ok() const { return checked > 0 && failures.empty(); }
    void fail(std::string s) { failures.push_back(std::move(s)); }
};

namespace detail {

template <class Fn>
SuiteResult timed(std::string name, Fn fn)
{
    SuiteResult r;
    r.name = std::move(name);
    auto t0 = std::chrono::steady_clock::now();
    fn(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::string one_line(std::string s)
{
    for (auto& ch : s)
        if (ch == '\n')
            ch = ';';
    return s;
}

/// Associativity of every prefix flow of a decomposition.
inline std::size_t associativity_failures(const GlobularDecomposition& dec)
{
    std::size_t bad = 0;
    for (std::size_t k = 1; k <= dec.size(); ++k)
        if (!check_associativity(dec.flow(k)).ok)
            ++bad;
    return bad;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Poset suites
// ---------------------------------------------------------------------------

inline SuiteResult direct_suite(const std::vector<BoundedPoset>& posets)
{
    return detail::timed("direct", [&](SuiteResult& r) {
        auto reps = parallel_map(posets.size(), [&](std::size_t i) { return verify_direct(posets[i]); });
        for (std::size_t i = 0; i < reps.size(); ++i) {
            r.checked += reps[i].arrows_checked + reps[i].triples_checked;
            for (auto const& v : reps[i].violations)
                r.fail(detail::one_line(posets[i].to_text()) + ": " + v);
        }
    });
}

inline SuiteResult superadditivity_suite(const std::vector<BoundedPoset>& posets)
{
    return detail::timed("superadditivity", [&](SuiteResult& r) {
        for (auto const& P : posets) {
            auto rep = check_superadditivity(P);
            r.checked += rep.chains_checked;
            for (auto const& v : rep.violations)
                r.fail(detail::one_line(P.to_text()) + ": " + v);
        }
    });
}

inline SuiteResult matching_suite(const std::vector<BoundedPoset>& posets)
{
    return detail::timed("matching-empty", [&](SuiteResult& r) {
        for (auto const& P : posets) {
            DeltaExt D(P);
            for (std::size_t s = 0; s < D.objects().size(); ++s) {
                ++r.checked;
                if (!matching_category(D, s).objects.empty())
                    r.fail(detail::one_line(P.to_text()) + ": " + label(P, D.object(s)));
            }
        }
    });
}

// ---------------------------------------------------------------------------
// Pushout products
// ---------------------------------------------------------------------------

/// Generator maps: empty -> point, S0 -> D1, point -> interval, identity.
inline SMap generator_map(std::size_t which, std::size_t identity_on = 0)
{
    switch (which) {
    case 0:
        return SMap::from_empty(point());
    case 1:
        return boundary_inclusion(sphere(0), disk(1));
    case 2:
        return SMap(point(), interval(), {nondeg(0, 0)});
    default: {
        const std::vector<SSet> spaces{point(), sphere(0), interval()};
        return SMap::identity(spaces[identity_on % spaces.size()]);
    }
    }
}

inline std::string generator_name(std::size_t which, std::size_t identity_on = 0)
{
    static const char* names[] = {"empty->pt", "S0->D1", "pt->I"};
    static const char* ids[] = {"id(pt)", "id(S0)", "id(I)"};
    return which < 3 ? names[which] : ids[identity_on % 3];
}

struct FactorList {
    std::vector<std::pair<std::size_t, std::size_t>> gens;

    std::vector<SMap> maps() const
    {
        std::vector<SMap> fs;
        for (auto [w, on] : gens)
            fs.push_back(generator_map(w, on));
        return fs;
    }
    std::string to_string() const
    {
        std::string s;
        for (auto [w, on] : gens)
            s += (s.empty() ? "" : " [] ") + generator_name(w, on);
        return s;
    }
};

/// p + 1 random generator maps.
inline FactorList random_factor_list(SplitMix64& rng, std::size_t p)
{
    FactorList f;
    for (std::size_t i = 0; i <= p; ++i)
        f.gens.emplace_back(rng.below(4), rng.below(3));
    return f;
}

/// Drops factors while the cube check keeps failing.
inline FactorList minimize_counterexample(FactorList f)
{
    for (bool shrunk = true; shrunk && f.gens.size() > 1;) {
        shrunk = false;
        for (std::size_t i = 0; i < f.gens.size(); ++i) {
            auto g = f;
            g.gens.erase(g.gens.begin() + static_cast<long>(i));
            if (!check_cube_formula(g.maps()).ok()) {
                f = std::move(g);
                shrunk = true;
                break;
            }
        }
    }
    return f;
}

inline SuiteResult pushprod_suite(std::size_t p, std::size_t trials, std::uint64_t seed)
{
    return detail::timed("pushprod-p" + std::to_string(p), [&](SuiteResult& r) {
        SplitMix64 rng(seed, "pushprod-p" + std::to_string(p));
        std::vector<FactorList> lists;
        for (std::size_t t = 0; t < trials; ++t)
            lists.push_back(random_factor_list(rng, p));
        auto reps = parallel_map(lists.size(), [&](std::size_t i) { return check_cube_formula(lists[i].maps()); });
        for (std::size_t i = 0; i < reps.size(); ++i) {
            ++r.checked;
            if (!reps[i].ok())
                r.fail("counterexample: " + minimize_counterexample(lists[i]).to_string());
        }
    });
}

// ---------------------------------------------------------------------------
// Colimit-product interchange
// ---------------------------------------------------------------------------

/// A few small pieces glued along vertex maps out of a point object.
inline Diagram random_diagram(SplitMix64& rng)
{
    const std::vector<SSet> pool{point(), points(2), interval(), sphere(1), disk(2)};
    Diagram d;
    const std::size_t n = 1 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i)
        d.add_object(pool[rng.below(pool.size())]);
    auto src = d.add_object(point());
    for (std::size_t o = 0; o < src; ++o) {
        if (rng.below(2) == 0)
            continue;
        auto verts = d.objects[o].of_dim(0);
        auto v = verts[rng.below(verts.size())];
        d.add_edge(src, o, SMap(point(), d.objects[o], {nondeg(v, 0)}));
    }
    return d;
}

inline SuiteResult interchange_suite(std::size_t trials, std::uint64_t seed)
{
    return detail::timed("interchange", [&](SuiteResult& r) {
        SplitMix64 rng(seed, "interchange");
        std::vector<std::pair<Diagram, Diagram>> pairs;
        for (std::size_t t = 0; t < trials; ++t) {
            auto D = random_diagram(rng);
            auto E = random_diagram(rng);
            pairs.emplace_back(std::move(D), std::move(E));
        }
        auto reps = parallel_map(pairs.size(), [&](std::size_t i) {
            return check_colimit_product_interchange(pairs[i].first, pairs[i].second);
        });
        for (std::size_t i = 0; i < reps.size(); ++i) {
            ++r.checked;
            if (!reps[i].ok())
                r.fail("pair " + std::to_string(i));
        }
    });
}

// ---------------------------------------------------------------------------
// Resolved balls
// ---------------------------------------------------------------------------

inline SuiteResult simplification_suite(const std::vector<BoundedPoset>& posets)
{
    return detail::timed("simplification", [&](SuiteResult& r) {
        auto reps = parallel_map(posets.size(), [&](std::size_t i) {
            return simplification_check(resolve(posets[i]).flow());
        });
        for (std::size_t i = 0; i < reps.size(); ++i) {
            r.checked += reps[i].entries.size();
            for (auto const& e : reps[i].entries)
                if (!e.ok())
                    r.fail(detail::one_line(posets[i].to_text()) + ": " + e.chain);
        }
    });
}

inline SuiteResult pushmax_suite(const std::vector<BoundedPoset>& posets)
{
    return detail::timed("pushmax", [&](SuiteResult& r) {
        auto reps = parallel_map(posets.size(), [&](std::size_t i) { return pushmax_check(resolve(posets[i]).flow()); });
        for (std::size_t i = 0; i < reps.size(); ++i) {
            r.checked += reps[i].pairs_checked + reps[i].triples_checked;
            for (auto const& f : reps[i].failures)
                r.fail(detail::one_line(posets[i].to_text()) + ": " + f);
        }
    });
}

inline SuiteResult fin_suite(const std::vector<BoundedPoset>& posets)
{
    return detail::timed("fin", [&](SuiteResult& r) {
        auto reps = parallel_map(posets.size(), [&](std::size_t i) { return check_fin(posets[i]); });
        for (auto const& rep : reps) {
            ++r.checked;
            if (!rep.contractible)
                r.fail(detail::one_line(rep.poset) + ": " + rep.homology.to_string());
        }
    });
}

// ---------------------------------------------------------------------------
// Refinement scenarios
// ---------------------------------------------------------------------------

struct ThthScenario {
    std::string name;
    GlobularDecomposition dec;
    BallSpec ball;
    PosetMorphism u;
};

inline std::string morphism_key(const PosetMorphism& u)
{
    auto code = [](const BoundedPoset& P) {
        std::string s;
        for (auto b : P.canonical_code())
            s += std::to_string(b) + ",";
        return s;
    };
    std::string s = code(u.source) + "|" + code(u.target) + "|";
    for (auto x : u.mapping)
        s += u.target.name(x) + ",";
    return s;
}

/**
 * Ambient decompositions around a ball: `parallel` extra edges next to a
 * single-edge ball, or next to a two-edge ball through a middle state,
 * optionally with a disk joining the ball path to one extra edge.
 */
inline std::vector<ThthScenario> thth_scenarios(std::size_t count, std::uint64_t seed)
{
    SplitMix64 rng(seed, "thth");
    std::vector<BoundedPoset> targets;
    for (auto const& P : enumerate_bounded_posets(5))
        if (P.size() >= 3)
            targets.push_back(P);
    std::vector<ThthScenario> out;
    for (std::size_t i = 0; out.size() < count; ++i) {
        const bool chain_ball = i % 2 == 1;
        const std::size_t parallel = 1 + rng.below(3);
        const bool disk = rng.below(3) == 0;
        auto const& P = targets[rng.below(targets.size())];
        auto name = std::string(chain_ball ? "chain" : "edge") + " ball, " + std::to_string(parallel) + " parallel" +
                    (disk ? " + disk" : "") + " -> " + detail::one_line(P.to_text());
        if (!chain_ball) {
            GlobularDecomposition dec({"p", "q"});
            dec.push({0, 0, 1, {}, {}});
            for (std::size_t j = 0; j < parallel; ++j)
                dec.push({0, 0, 1, {}, {}});
            if (disk)
                dec.push({1, 0, 1, {}, {nondeg(0, 0), nondeg(1, 0)}});
            out.push_back({name, std::move(dec), {chain_poset(2), {0}, {0, 1}},
                           {chain_poset(2), P, {P.bottom(), P.top()}}});
            continue;
        }
        std::vector<std::size_t> interior;
        for (std::size_t x = 0; x < P.size(); ++x)
            if (x != P.bottom() && x != P.top())
                interior.push_back(x);
        GlobularDecomposition dec({"p", "m", "q"});
        dec.push({0, 0, 1, {}, {}});
        dec.push({0, 1, 2, {}, {}});
        for (std::size_t j = 0; j < parallel; ++j)
            dec.push({0, 0, 2, {}, {}});
        if (disk) {
            auto through = dec.find(dec.size(), 0, 2, {{0, nondeg(0, 0)}, {1, nondeg(0, 0)}});
            auto edge = dec.find(dec.size(), 0, 2, {{2, nondeg(0, 0)}});
            if (!through || !edge)
                throw std::logic_error("scenario words not found");
            dec.push({1, 0, 2, {}, {*through, *edge}});
        }
        auto c3 = BoundedPoset::closure({"0", "m", "1"}, std::vector<std::pair<std::string, std::string>>{{"0", "m"}, {"m", "1"}});
        out.push_back({name, std::move(dec), {c3, {0, 1}, {0, 1, 2}},
                       {c3, P, {P.bottom(), interior[rng.below(interior.size())], P.top()}}});
    }
    return out;
}

struct ThthOutcome {
    std::string name;
    HomologyResult before;
    HomologyResult after;
    std::size_t associativity_failures = 0;
    std::string error;
};

inline ThthOutcome run_thth(const ThthScenario& sc)
{
    ThthOutcome o;
    o.name = sc.name;
    try {
        auto ref = refine(sc.dec, sc.ball, sc.u);
        o.before = homology(realize(sc.dec).space).trimmed();
        o.after = homology(realize(ref.dec).space).trimmed();
        o.associativity_failures = detail::associativity_failures(ref.dec);
    } catch (const std::exception& e) {
        o.error = e.what();
    }
    return o;
}

struct ThthSummary {
    SuiteResult result;
    std::set<std::vector<long>> betti_seen;
    std::size_t distinct_morphisms = 0;
};

inline ThthSummary thth_suite(const std::vector<ThthScenario>& scenarios)
{
    ThthSummary s;
    std::set<std::string> keys;
    s.result = detail::timed("thth", [&](SuiteResult& r) {
        auto outs = parallel_map(scenarios.size(), [&](std::size_t i) { return run_thth(scenarios[i]); });
        for (std::size_t i = 0; i < outs.size(); ++i) {
            auto const& o = outs[i];
            ++r.checked;
            keys.insert(morphism_key(scenarios[i].u));
            if (!o.error.empty()) {
                r.fail(o.name + ": " + o.error);
                continue;
            }
            s.betti_seen.insert(o.before.betti);
            if (o.before != o.after)
                r.fail(o.name + ": " + o.before.to_string() + " became " + o.after.to_string());
            if (o.associativity_failures)
                r.fail(o.name + ": refined flow not associative");
        }
    });
    s.distinct_morphisms = keys.size();
    return s;
}

// ---------------------------------------------------------------------------
// Globes
// ---------------------------------------------------------------------------

/// Named constructors whose globes are compared with the suspension shift.
inline std::vector<std::pair<std::string, SSet>> library_spaces()
{
    return {{"empty", empty_sset()},
            {"point", point()},
            {"3 points", points(3)},
            {"interval", interval()},
            {"S0", sphere(0)},
            {"S1", sphere(1)},
            {"S2", globe(sphere(1)).space},
            {"D1", disk(1)},
            {"D2", disk(2)},
            {"square", polygon({true, true, false, false})},
            {"square cone", polygon_cone({true, true, false, false})},
            {"I x I", Product(interval(), interval()).space()},
            {"S1 x I", Product(sphere(1), interval()).space()},
            {"S1 + point", disjoint_union(sphere(1), point())},
            {"S1 v S1", pushout(SMap(point(), sphere(1), {nondeg(0, 0)}), SMap(point(), sphere(1), {nondeg(0, 0)})).apex},
            {"S0 x S1", Product(sphere(0), sphere(1)).space()}};
}

inline SuiteResult globe_suite()
{
    return detail::timed("globe", [&](SuiteResult& r) {
        auto check = [&](bool ok, std::string what) {
            ++r.checked;
            if (!ok)
                r.fail(std::move(what));
        };
        auto g0 = globe(empty_sset()).space;
        check(g0.count(0) == 2 && g0.size() == 2, "globe(empty) is not two points");
        check(is_homology_contractible(globe(point()).space), "globe(point) not contractible");
        auto h = homology(globe(sphere(0)).space);
        check(h.betti_at(1) == 1 && h.torsion_free(), "globe(S0) has H1 = " + std::to_string(h.betti_at(1)));
        for (auto const& [name, z] : library_spaces()) {
            auto hz = homology(z);
            auto hg = homology(globe(z).space);
            const std::size_t top = std::max(hz.betti.size(), hg.betti.size()) + 1;
            // reduced homology of the empty set is Z in degree -1
            bool ok = hg.reduced_betti(0) == (z.empty() ? 1 : 0);
            for (std::size_t n = 1; n < top; ++n) {
                ok = ok && hg.reduced_betti(n) == hz.reduced_betti(n - 1);
                auto tg = n < hg.torsion.size() ? hg.torsion[n] : std::vector<long>{};
                auto tz = n - 1 < hz.torsion.size() ? hz.torsion[n - 1] : std::vector<long>{};
                ok = ok && tg == tz;
            }
            check(ok, "suspension shift fails on " + name);
        }
    });
}

// ---------------------------------------------------------------------------
// Flow algebra
// ---------------------------------------------------------------------------

/// Associativity after every cell of every resolution.
inline SuiteResult associativity_suite(const std::vector<BoundedPoset>& posets)
{
    return detail::timed("associativity", [&](SuiteResult& r) {
        auto reps = parallel_map(posets.size(), [&](std::size_t i) {
            auto res = resolve(posets[i]);
            return std::pair{res.dec.size(), detail::associativity_failures(res.dec)};
        });
        for (std::size_t i = 0; i < reps.size(); ++i) {
            r.checked += reps[i].first;
            if (reps[i].second)
                r.fail(detail::one_line(posets[i].to_text()) + ": " + std::to_string(reps[i].second) +
                       " non-associative prefixes");
        }
    });
}

/// Concatenations of random resolved balls are balls.
inline SuiteResult concat_suite(std::size_t trials, std::uint64_t seed)
{
    return detail::timed("concat", [&](SuiteResult& r) {
        SplitMix64 rng(seed, "concat");
        auto posets = enumerate_bounded_posets(5);
        auto balls = parallel_map(posets.size(), [&](std::size_t i) { return resolve(posets[i]).flow(); });
        std::vector<std::pair<std::size_t, std::size_t>> picks;
        for (std::size_t t = 0; t < trials; ++t)
            picks.emplace_back(rng.below(balls.size()), rng.below(balls.size()));
        auto reps = parallel_map(picks.size(), [&](std::size_t i) {
            auto X = concat(balls[picks[i].first], balls[picks[i].second]);
            return is_full_directed_ball(X).ok() && check_associativity(X).ok;
        });
        for (std::size_t i = 0; i < reps.size(); ++i) {
            ++r.checked;
            if (!reps[i])
                r.fail(detail::one_line(posets[picks[i].first].to_text()) + " then " +
                       detail::one_line(posets[picks[i].second].to_text()));
        }
    });
}

}  // namespace dihoto
