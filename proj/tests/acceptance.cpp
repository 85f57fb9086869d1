#include <dihoto/dihoto.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace dihoto;

namespace {

constexpr std::uint64_t kSeed = 20261016;
constexpr double kDirectSeconds = 60;
constexpr double kPushprodSeconds = 120;
constexpr double kFinSeconds = 300;
constexpr std::size_t kPushprodTrials = 100;
constexpr std::size_t kInterchangePairs = 50;
constexpr std::size_t kThthScenarios = 24;
constexpr std::size_t kThthMinScenarios = 20;
constexpr std::size_t kThthMinMorphisms = 5;
constexpr std::size_t kConcatPairs = 50;

int failed = 0;

void line(int id, const std::string& title, bool ok, const std::string& detail)
{
    std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failed;
}

std::string summary(const SuiteResult& r)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu checks, %zu failures, %.2f s", r.checked, r.failures.size(), r.seconds);
    std::string s = buf;
    if (!r.failures.empty())
        s += " (first: " + r.failures.front() + ")";
    return s;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void suite_line(int id, const std::string& title, const SuiteResult& r, double limit = 0)
{
    bool ok = r.ok() && (limit == 0 || r.seconds < limit);
    std::string detail = summary(r);
    if (limit > 0)
        detail += ", limit " + std::to_string(static_cast<int>(limit)) + " s";
    line(id, title, ok, detail);
}

}  // namespace

int main()
{
    const auto upto5 = enumerate_bounded_posets(5);
    const auto upto6 = enumerate_bounded_posets(6);
    const auto upto7 = enumerate_bounded_posets(7);

    suite_line(1, "direct structure on posets up to 6 elements", direct_suite(upto6), kDirectSeconds);
    suite_line(2, "longest-chain superadditivity on posets up to 7 elements", superadditivity_suite(upto7));
    suite_line(3, "empty matching categories on posets up to 6 elements", matching_suite(upto6));

    {
        std::vector<SuiteResult> rs;
        double seconds = 0;
        bool ok = true;
        std::string detail;
        for (std::size_t p = 1; p <= 3; ++p) {
            rs.push_back(pushprod_suite(p, kPushprodTrials, kSeed));
            seconds += rs.back().seconds;
            ok = ok && rs.back().ok() && rs.back().checked >= kPushprodTrials;
            detail += "p=" + std::to_string(p) + ": " + summary(rs.back()) + "; ";
        }
        ok = ok && seconds < kPushprodSeconds;
        line(4, "cube formula against iterated pushout products", ok,
             detail + "limit " + std::to_string(static_cast<int>(kPushprodSeconds)) + " s");
    }

    {
        auto r = interchange_suite(kInterchangePairs, kSeed);
        line(5, "colimit-product interchange", r.ok() && r.checked >= kInterchangePairs, summary(r));
    }

    suite_line(6, "latching maps as pushout products on resolved balls up to 5 elements", simplification_suite(upto5));
    suite_line(7, "ball as pushout over its latching flow, posets up to 5 elements", pushmax_suite(upto5));
    suite_line(8, "resolved balls up to 6 elements realize to contractible spaces", fin_suite(upto6), kFinSeconds);

    {
        std::vector<ThthScenario> scenarios;
        std::string ex1_error;
        try {
            auto dec = parse_decomposition(slurp(std::string(DIHOTO_DATA_DIR) + "/ex1.dec"));
            auto P2 = BoundedPoset::parse(slurp(std::string(DIHOTO_DATA_DIR) + "/chain3.poset"));
            auto [ball, u] = parse_ball_spec(slurp(std::string(DIHOTO_DATA_DIR) + "/ex1.ball"), dec, P2);
            scenarios.push_back({"single edge through a new state", dec, ball, u});
        } catch (const std::exception& e) {
            ex1_error = e.what();
        }
        const std::size_t generated = kThthScenarios;
        for (auto& sc : thth_scenarios(generated, kSeed))
            scenarios.push_back(std::move(sc));
        auto s = thth_suite(scenarios);
        bool betti11 = s.betti_seen.count({1, 1}) > 0;
        bool betti12 = s.betti_seen.count({1, 2}) > 0;
        bool ok = ex1_error.empty() && s.result.ok() && generated >= kThthMinScenarios && betti11 && betti12 &&
                  s.distinct_morphisms >= kThthMinMorphisms;
        std::string detail = summary(s.result) + ", " + std::to_string(generated) + " generated, " +
                             std::to_string(s.distinct_morphisms) + " distinct morphisms, ambient (1,1) " +
                             (betti11 ? "yes" : "no") + ", (1,2) " + (betti12 ? "yes" : "no");
        if (!ex1_error.empty())
            detail += ", sample scenario: " + ex1_error;
        line(9, "refinement preserves homology", ok, detail);
    }

    suite_line(10, "globes and the suspension shift", globe_suite());

    {
        auto assoc = associativity_suite(upto6);
        auto cat = concat_suite(kConcatPairs, kSeed);
        bool ok = assoc.ok() && cat.ok() && cat.checked >= kConcatPairs;
        line(11, "associativity after every cell and concatenation of balls", ok,
             "associativity " + summary(assoc) + "; concat " + summary(cat));
    }

    std::printf("%s: %d of 11 criteria failed\n", failed ? "FAIL" : "PASS", failed);
    return failed ? 1 : 0;
}
