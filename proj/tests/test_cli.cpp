#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using chowrobbins::cli::dispatch;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "chowrobbins");
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    const Run r = run(args);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("schema") == chowrobbins::cli::kSchema);
    return j;
}

}  // namespace

TEST_CASE("value, decision, cutoff, beta") {
    CHECK(run({"value", "--h", "0", "--t", "0", "--N", "200"}).out == "0.7916879464\n");
    CHECK(run({"--digits", "4", "value", "--h", "0", "--t", "0", "--N", "200"}).out == "0.7917\n");
    CHECK(run({"value", "--h", "0", "--t", "0", "--N", "2", "--exact", "--fraction"}).out == "3/4\n");
    CHECK(run({"decision", "--h", "2", "--t", "1", "--N", "50"}).out == "stop\n");
    CHECK(run({"decision", "--h", "2", "--t", "1", "--N", "51"}).out == "go\n");
    CHECK(run({"cutoff", "--h", "2", "--t", "1"}).out == "51\n");
    CHECK(run({"cutoff", "--h", "2", "--t", "1", "--N-cap", "40"}).out == "still stop at N_cap=40\n");
    CHECK(run({"beta", "--N", "2000", "--n-max", "10"}).out == "1,2,3,2,3,2,3,2,3,4\n");
    CHECK(run({"beta", "--N", "2000", "--n-max", "3", "--format", "csv"}).out == "n,beta\n1,1\n2,2\n3,3\n");
}

TEST_CASE("json output round-trips") {
    const auto v = run_json({"value", "--h", "0", "--t", "0", "--N", "200"});
    CHECK(v.at("value").get<double>() == doctest::Approx(0.7916879464).epsilon(1e-10));

    const auto c = run_json({"compare", "--g", "0.6", "--N", "200"});
    CHECK(c.at("g") == "3/5");
    CHECK(c.at("goal_strategy_prob").get<double>() == doctest::Approx(0.7753928313).epsilon(1e-9));

    const auto d = run_json({"dist", "--h", "0", "--t", "0", "--N", "20"});
    double mass = 0;
    for (const auto& atom : d.at("atoms")) mass += atom.at("probability").get<double>();
    CHECK(mass == doctest::Approx(1.0));
    CHECK(d.at("moments").at("kurtosis").is_number());

    const auto p = run_json({"piecewise", "--m", "2"});
    CHECK(p.at("valid_from") == 3);
    CHECK(p.at("pieces").size() == 4);
    CHECK(p.at("pieces")[1].at("numerator") == nlohmann::json::array({"5", "8"}));

    const auto e = run_json({"escape", "--a", "2", "--b", "1"});
    CHECK(e.at("strict_value").get<double>() == doctest::Approx(0.6180339887).epsilon(1e-9));

    const auto w = run_json({"walks", "--a", "2", "--b", "1", "--n-max", "3"});
    CHECK(w.at("counts") == nlohmann::json::array({"1", "1", "3", "9"}));

    const auto f = run_json({"frontier", "--total-max", "3", "--N-ref", "200", "--N-cap", "200"});
    CHECK(f.at("entries")[2].at("cutoff") == 51);
}

TEST_CASE("csv headers") {
    const Run e = run({"escape", "--a", "2", "--b", "1", "--format", "csv"});
    CHECK(e.out.rfind("a,b,strict_value,weak_value,bracket_width\n2,1,0.6180339883,", 0) == 0);
    const Run f = run({"frontier", "--total-max", "2", "--N-ref", "100", "--N-cap", "100", "--format", "csv"});
    CHECK(f.out == "h,t,cutoff\n0,1,2\n1,1,3\n");
}

TEST_CASE("goal and compare") {
    CHECK(run({"goal", "--g", "3/5", "--h", "0", "--t", "0", "--N", "200"}).out == "0.7753928313\n");
    const Run c = run({"compare", "--g", "0.7", "--N", "200"});
    CHECK(c.out.find("optimal_goal_prob 0.5625000000\n") != std::string::npos);
    CHECK(c.out.find("goal_strategy_expectation 0.5787939263\n") != std::string::npos);
    const Run floor = run({"compare", "--g", "0.5", "--N", "50", "--missed-goal", "floor"});
    CHECK(floor.out.find("goal_strategy_prob 1.000000000\n") != std::string::npos);
}

TEST_CASE("closed forms") {
    CHECK(run({"guess", "--m", "1", "--alpha", "0", "--from", "5"}).out == "(4*n+3)/(8*n+4)\n");
    CHECK(run({"startindex", "--check", "1,3,12,37,102,263"}).out == "true\n");
    CHECK(run({"startindex", "--check", "1,3,12,38"}).out == "false (first violation at m=4)\n");
    CHECK(run({"startindex", "--m-max", "3"}).out == "1, 3, 12\n");
    const Run pw = run({"piecewise", "--m", "1", "--find-start"});
    CHECK(pw.out.find("for n >= 1") != std::string::npos);
    CHECK(pw.out.find("(4*n+3)/(8*n+4)") != std::string::npos);

    const std::string path = "cli_guess_points.txt";
    {
        std::ofstream f(path);
        f << "# n value\n";
        for (int n = 3; n <= 12; ++n) f << n << " " << 8 * n + 5 << "/" << 16 * n + 8 << "\n";
    }
    CHECK(run({"guess", "--input", path, "--max-degree", "2"}).out == "(8*n+5)/(16*n+8)\n");
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == chowrobbins::cli::kUsage);
    CHECK(run({"nonsense"}).code == chowrobbins::cli::kUsage);
    CHECK(run({"value", "--h", "1"}).code == chowrobbins::cli::kUsage);
    CHECK(run({"value", "--h", "0", "--t", "0", "--N", "2", "--bogus"}).code == chowrobbins::cli::kUsage);
    CHECK(run({"--format", "xml", "value", "--h", "0", "--t", "0", "--N", "2"}).code == chowrobbins::cli::kUsage);
    CHECK(run({"value", "--h", "5", "--t", "0", "--N", "2"}).code == chowrobbins::cli::kDomain);
    CHECK(run({"goal", "--g", "1.5", "--h", "0", "--t", "0", "--N", "10"}).code == chowrobbins::cli::kDomain);
    CHECK(run({"escape", "--a", "2", "--b", "2"}).code == chowrobbins::cli::kDomain);
    CHECK(run({"frontier", "--total-max", "3", "--N-ref", "200", "--N-cap", "100"}).code == chowrobbins::cli::kDomain);
    CHECK(run({"escape", "--a", "5", "--b", "4", "--max-steps", "3"}).code == chowrobbins::cli::kConvergence);
    CHECK(run({"--help"}).code == chowrobbins::cli::kOk);
}

TEST_CASE("exact mode is deterministic") {
    const std::vector<std::string> args{"--exact", "dist", "--h", "1", "--t", "2", "--N", "30", "--format", "json"};
    CHECK(run(args).out == run(args).out);
    const std::vector<std::string> walks{"--exact", "walks", "--a", "3", "--b", "2", "--n-max", "12"};
    CHECK(run(walks).out == run(walks).out);
}
