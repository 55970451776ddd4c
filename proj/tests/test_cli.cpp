#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

// Runs the CLI binary with the given arguments, capturing stdout + stderr.
RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(DILATED_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) result.output.append(buf, n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/dilated_cli_test_") + name;
}

}  // namespace

TEST_CASE("clt converges from the Rademacher start") {
    auto r = run_cli("clt --measure rademacher --l 2.5 --iters 12 --out-json " +
                     tmp_path("clt.json") + " --out-csv " + tmp_path("clt.csv"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("verdict=converged") != std::string::npos);
    std::string csv = slurp(tmp_path("clt.csv"));
    CHECK(csv.rfind("#schema=1\n", 0) == 0);
    CHECK(csv.find("iteration,d_to_target,d_successive,ratio,grading_drift") != std::string::npos);
    std::string json_text = slurp(tmp_path("clt.json"));
    CHECK(json_text.find("\"verdict\": \"converged\"") != std::string::npos);
}

TEST_CASE("clt from the Gaussian fixed point exits immediately") {
    auto r = run_cli("clt --measure gaussian:0,1 --l 2.5 --iters 5 --out-json " +
                     tmp_path("g.json") + " --out-csv " + tmp_path("g.csv"));
    CHECK(r.exit_code == 0);
}

TEST_CASE("exponent outside the kind interval is a config error") {
    CHECK(run_cli("clt --l 1.5").exit_code == 2);
    CHECK(run_cli("lln --l 2.5").exit_code == 2);
}

TEST_CASE("lln converges from Bernoulli and fixes Diracs") {
    auto r = run_cli("lln --measure bernoulli:0.3 --l 1.5 --iters 12 --out-json " +
                     tmp_path("lln.json") + " --out-csv " + tmp_path("lln.csv"));
    CHECK(r.exit_code == 0);
    CHECK(run_cli("lln --measure dirac:0.7 --l 1.5 --iters 5 --out-json " + tmp_path("d.json") +
                  " --out-csv " + tmp_path("d.csv"))
              .exit_code == 0);
}

TEST_CASE("too few iterations yields the inconclusive exit code") {
    auto r = run_cli("clt --measure rademacher --l 2.5 --iters 2 --out-json " + tmp_path("i.json") +
                     " --out-csv " + tmp_path("i.csv"));
    CHECK(r.exit_code == 4);
}

TEST_CASE("a wrong rescale diverges") {
    auto r = run_cli("clt --measure rademacher --l 2.5 --iters 10 --rescale 0.5 --out-json " +
                     tmp_path("w.json") + " --out-csv " + tmp_path("w.csv"));
    CHECK(r.exit_code == 3);
}

TEST_CASE("distance subcommand") {
    auto same = run_cli("distance --a rademacher --b rademacher --l 2.5");
    CHECK(same.exit_code == 0);
    CHECK(same.output.find("= 0 ") != std::string::npos);
    auto gated = run_cli("distance --a dirac:0 --b dirac:1 --l 1.5");
    CHECK(gated.exit_code == 0);
    CHECK(gated.output.find("inf") != std::string::npos);
    auto finite = run_cli("distance --a rademacher --b gaussian:0,1 --l 2.5");
    CHECK(finite.exit_code == 0);
    CHECK(finite.output.find("= 0.39") != std::string::npos);
    CHECK(run_cli("distance --a bogus:1 --b rademacher").exit_code == 2);
}

TEST_CASE("distance is stable under a denser grid") {
    auto coarse = run_cli("distance --a rademacher --b gaussian:0,1 --l 2.5");
    auto dense = run_cli("distance --a rademacher --b gaussian:0,1 --l 2.5 --grid-dense");
    auto parse = [](const std::string& out) {
        auto eq = out.find("= ");
        return std::stod(out.substr(eq + 2));
    };
    double a = parse(coarse.output);
    double b = parse(dense.output);
    CHECK(std::abs(a - b) / b <= 0.01);
}

TEST_CASE("lattice measures load from json files") {
    std::string path = tmp_path("measure.json");
    {
        std::ofstream out(path);
        out << R"({"dim":1,"spacing":[1.0],"offset":[0.0],"weights":[0.5,0.5]})";
    }
    auto r = run_cli("distance --a lattice:@" + path + " --b lattice:@" + path + " --l 2.5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("= 0 ") != std::string::npos);
    CHECK(run_cli("distance --a lattice:@/nonexistent.json --b rademacher").exit_code == 2);
}

TEST_CASE("observable subcommand rejects degenerate and unbounded observables") {
    CHECK(run_cli("observable --sampler circle --H const:1 --samples 1000 --bins 64").exit_code ==
          2);
    CHECK(run_cli("observable --sampler uniform01 --H poly:0,1e9 --samples 100 --bins 16")
              .exit_code == 5);
    CHECK(run_cli("observable --sampler nosuch --H cos").exit_code == 2);
}

TEST_CASE("a small observable run completes with a documented verdict") {
    auto r = run_cli("observable --sampler twoatom --H identity --samples 4000 --bins 64 "
                     "--iters 10 --out-json " +
                     tmp_path("o.json") + " --out-csv " + tmp_path("o.csv"));
    // Small-sample behavior is recorded, not asserted: either verdict is
    // acceptable but the run must terminate cleanly.
    CHECK((r.exit_code == 0 || r.exit_code == 4));
}

TEST_CASE("selfcheck") {
    CHECK(run_cli("selfcheck").exit_code == 0);
    auto broken = run_cli("selfcheck --break-unit");
    CHECK(broken.exit_code == 1);
    CHECK(broken.output.find("unit") != std::string::npos);
    auto only = run_cli("selfcheck --suite quantale");
    CHECK(only.exit_code == 0);
    CHECK(only.output.find("quantale: pass") != std::string::npos);
    CHECK(only.output.find("metric") == std::string::npos);
    CHECK(run_cli("selfcheck --suite nosuch").exit_code == 2);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    std::string base = "clt --measure rademacher --l 2.5 --iters 12";
    auto run_to = [&](const std::string& tag, const std::string& extra) {
        auto r = run_cli(base + " " + extra + " --out-json " + tmp_path(tag + ".json") +
                         " --out-csv " + tmp_path(tag + ".csv"));
        CHECK(r.exit_code == 0);
    };
    run_to("det1", "--threads 1");
    run_to("det2", "--threads 1");
    run_to("det4", "--threads 4");
    CHECK(slurp(tmp_path("det1.json")) == slurp(tmp_path("det2.json")));
    CHECK(slurp(tmp_path("det1.csv")) == slurp(tmp_path("det2.csv")));
    CHECK(slurp(tmp_path("det1.json")) == slurp(tmp_path("det4.json")));
    CHECK(slurp(tmp_path("det1.csv")) == slurp(tmp_path("det4.csv")));
}

TEST_CASE("DILATED_SEED overrides the default seed") {
    auto r = run_cli("clt --measure rademacher --l 2.5 --iters 12 --out-json " +
                     tmp_path("seed_default.json") + " --out-csv " + tmp_path("seed_default.csv"));
    CHECK(r.exit_code == 0);
    std::string cmd = std::string("DILATED_SEED=42 ") + DILATED_CLI_PATH +
                      " clt --measure rademacher --l 2.5 --iters 12 --out-json " +
                      tmp_path("seed_env.json") + " --out-csv " + tmp_path("seed_env.csv") +
                      " 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    // Seed 42 via the environment matches the built-in default exactly.
    CHECK(slurp(tmp_path("seed_default.json")) == slurp(tmp_path("seed_env.json")));
    std::string bad = std::string("DILATED_SEED=notanumber ") + DILATED_CLI_PATH +
                      " selfcheck >/dev/null 2>&1";
    int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 2);
}
