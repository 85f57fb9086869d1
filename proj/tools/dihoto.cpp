#include <dihoto/dihoto.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace dihoto;
using json = nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, Violation = 1, BadInput = 2, Stuck = 3, Refused = 4 };

struct Output {
    std::string format = "json";
    std::string path;
};

struct Failure {
    int code;
    std::string message;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Failure{BadInput, "cannot read " + path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::CycleDetected:
    case ErrorKind::NotBounded:
    case ErrorKind::MalformedCell:
    case ErrorKind::WouldCreateLoop:
        return BadInput;
    case ErrorKind::ResolutionStuck:
        return Stuck;
    case ErrorKind::TInvalid:
    case ErrorKind::BallMismatch:
    case ErrorKind::DanglingAttachment:
        return Refused;
    default:
        return Violation;
    }
}

BoundedPoset read_poset(const std::string& path)
{
    try {
        return BoundedPoset::parse(slurp(path));
    } catch (const Error& e) {
        throw Failure{BadInput, path + ": " + e.what()};
    }
}

json homology_json(const HomologyResult& h)
{
    return json{{"betti", h.betti}, {"torsion", h.torsion}};
}

json suite_json(const SuiteResult& r)
{
    return json{{"name", r.name},
                {"checked", r.checked},
                {"failures", r.failures},
                {"verdict", r.ok() ? "pass" : "fail"}};
}

std::string suite_text(const SuiteResult& r)
{
    std::string s = r.name + ": " + (r.ok() ? "pass" : "FAIL") + " (" + std::to_string(r.checked) + " checks)\n";
    for (auto const& f : r.failures)
        s += "  " + f + "\n";
    return s;
}

void emit(const Output& out, const std::string& body)
{
    if (out.path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(out.path);
    if (!f)
        throw Failure{BadInput, "cannot write " + out.path};
    f << body;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

int report_suites(const Output& out, json head, const std::vector<SuiteResult>& suites, std::string dot = {})
{
    bool ok = std::all_of(suites.begin(), suites.end(), [](auto const& r) { return r.ok(); });
    if (out.format == "dot") {
        emit(out, dot);
    } else if (out.format == "text") {
        std::string s;
        for (auto const& r : suites)
            s += suite_text(r);
        emit(out, s + (ok ? "pass\n" : "FAIL\n"));
    } else {
        head["suites"] = json::array();
        for (auto const& r : suites)
            head["suites"].push_back(suite_json(r));
        head["verdict"] = ok ? "pass" : "fail";
        emit(out, dump_json(head));
    }
    return ok ? Ok : Violation;
}

int cmd_reedy(const Output& out, const std::vector<std::string>& paths, int all_up_to)
{
    std::vector<BoundedPoset> posets;
    if (all_up_to >= 0) {
        if (all_up_to > 7)
            throw Failure{BadInput, "--all-up-to is limited to 7"};
        posets = enumerate_bounded_posets(static_cast<std::size_t>(all_up_to));
    }
    for (auto const& p : paths)
        posets.push_back(read_poset(p));
    if (posets.empty())
        throw Failure{BadInput, "no posets given"};
    std::string dot;
    for (auto const& P : posets)
        dot += P.to_dot();
    json head{{"command", "reedy"}, {"posets", posets.size()}};
    return report_suites(out, head, {direct_suite(posets), superadditivity_suite(posets), matching_suite(posets)}, dot);
}

int cmd_ball(const Output& out, const std::string& path)
{
    auto P = read_poset(path);
    auto res = resolve(P);
    auto real = realize(res.dec);
    auto h = homology(real.space).trimmed();
    bool ok = is_homology_contractible(real.space);
    if (out.format == "dot") {
        emit(out, to_dot(real, P.names()));
    } else if (out.format == "text") {
        std::ostringstream s;
        s << dump(res.dec) << "cells " << res.count(0) << " " << res.count(1) << " " << res.count(2) << "\n"
          << "homology " << h.to_string() << "\n"
          << (ok ? "contractible" : "not contractible") << "\n";
        emit(out, s.str());
    } else {
        json j{{"command", "ball"},
               {"poset", P.to_text()},
               {"cells", {res.count(0), res.count(1), res.count(2)}},
               {"betti", h.betti},
               {"torsion", h.torsion},
               {"verdict", ok ? "contractible" : "not contractible"}};
        emit(out, dump_json(j));
    }
    return ok ? Ok : Violation;
}

int cmd_refine(const Output& out, const std::string& dec_path, const std::string& ball_path, const std::string& poset_path)
{
    GlobularDecomposition dec = [&] {
        try {
            return parse_decomposition(slurp(dec_path));
        } catch (const Error& e) {
            throw Failure{exit_code(e.kind()), dec_path + ": " + e.what()};
        }
    }();
    auto P = read_poset(poset_path);
    auto spec = [&] {
        try {
            return parse_ball_spec(slurp(ball_path), dec, P);
        } catch (const Error& e) {
            throw Failure{exit_code(e.kind()), ball_path + ": " + e.what()};
        }
    }();
    auto ref = refine(dec, spec.first, spec.second);
    auto before = homology(realize(dec).space).trimmed();
    auto real = realize(ref.dec);
    auto after = homology(real.space).trimmed();
    bool ok = before == after;
    if (out.format == "dot") {
        emit(out, to_dot(real, ref.dec.states()));
    } else if (out.format == "text") {
        emit(out, dump(ref.dec) + "before " + before.to_string() + "\nafter " + after.to_string() + "\n" +
                      (ok ? "preserved\n" : "CHANGED\n"));
    } else {
        json j{{"command", "refine"},
               {"decomposition", dump(ref.dec)},
               {"cells_before", dec.size()},
               {"cells_after", ref.dec.size()},
               {"before", homology_json(before)},
               {"after", homology_json(after)},
               {"verdict", ok ? "preserved" : "changed"}};
        emit(out, dump_json(j));
    }
    return ok ? Ok : Violation;
}

int cmd_pushprod(const Output& out, int p, int trials, std::uint64_t seed)
{
    if (p < 0 || p > 3)
        throw Failure{BadInput, "--p must be between 0 and 3"};
    if (trials < 1)
        throw Failure{BadInput, "--trials must be positive"};
    if (out.format == "dot")
        throw Failure{BadInput, "pushprod has no dot output"};
    json head{{"command", "pushprod"}, {"p", p}, {"trials", trials}, {"seed", seed}};
    return report_suites(out, head,
                         {pushprod_suite(static_cast<std::size_t>(p), static_cast<std::size_t>(trials), seed)});
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Verification driver for flows on bounded posets"};
    app.require_subcommand(1);
    Output out;
    auto output_flags = [&](CLI::App* sub) {
        sub->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "text", "dot"}));
        sub->add_option("--out", out.path, "Write the report to this file");
    };

    std::vector<std::string> reedy_paths;
    int all_up_to = -1;
    auto* reedy = app.add_subcommand("reedy", "Direct structure, superadditivity and empty matching categories");
    reedy->add_option("paths", reedy_paths, "Poset files");
    reedy->add_option("--all-up-to", all_up_to, "Every bounded poset with at most N elements");
    output_flags(reedy);

    std::string ball_path;
    auto* ball = app.add_subcommand("ball", "Resolve a poset into a ball and check its realization");
    ball->add_option("poset", ball_path, "Poset file")->required();
    output_flags(ball);

    std::string dec_path, spec_path, target_path;
    auto* ref = app.add_subcommand("refine", "Refine a ball of a decomposition and compare homology");
    ref->add_option("decomposition", dec_path, "Decomposition file")->required();
    ref->add_option("ball", spec_path, "Ball spec file")->required();
    ref->add_option("poset", target_path, "Target poset file")->required();
    output_flags(ref);

    int p = 1, trials = 100;
    std::uint64_t seed = 0;
    auto* push = app.add_subcommand("pushprod", "Cube formula against iterated pushout products");
    push->add_option("--p", p, "Index of the last factor");
    push->add_option("--trials", trials, "Random factor lists");
    push->add_option("--seed", seed, "Seed");
    output_flags(push);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : BadInput;
    }

    try {
        if (reedy->parsed())
            return cmd_reedy(out, reedy_paths, all_up_to);
        if (ball->parsed())
            return cmd_ball(out, ball_path);
        if (ref->parsed())
            return cmd_refine(out, dec_path, spec_path, target_path);
        return cmd_pushprod(out, p, trials, seed);
    } catch (const Failure& f) {
        std::cerr << "dihoto: " << f.message << "\n";
        return f.code;
    } catch (const Error& e) {
        std::cerr << "dihoto: " << e.what() << "\n";
        return exit_code(e.kind());
    }
}
