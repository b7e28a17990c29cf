#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    static int counter = 0;
    std::string path = "cli_out_" + std::to_string(counter++) + ".txt";
    std::string cmd = std::string(DYNRISK_BIN) + " " + args + " > " + path + " 2>&1";
    int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    std::remove(path.c_str());
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(DYNRISK_FIXTURES) + "/" + name;
}

} // namespace

TEST_CASE("evaluate prints per-atom values and exits cleanly") {
    RunResult r = run("evaluate --input " + fixture("reject.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("3.25") != std::string::npos);
    CHECK(r.output.find("\"command\": \"evaluate\"") != std::string::npos);
}

TEST_CASE("accept exits 1 when an atom rejects") {
    RunResult r = run("accept --input " + fixture("reject.json"));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("rejected") != std::string::npos);
}

TEST_CASE("usage and parse errors exit 2") {
    CHECK(run("").exit_code == 2);
    CHECK(run("evaluate").exit_code == 2);
    CHECK(run("evaluate --input /nonexistent.json").exit_code == 2);
    CHECK(run("oracle-compare --input " + fixture("oracle_kl.json")).exit_code == 2);
    CHECK(run("frobnicate --input x").exit_code == 2);
}

TEST_CASE("set checks pass for the scaled rule and fail for the constant rule") {
    RunResult pass = run("check --input " + fixture("set_checks_var_scaled.json"));
    CHECK(pass.exit_code == 0);
    RunResult fail = run("check --input " + fixture("set_checks_constant.json"));
    CHECK(fail.exit_code == 1);
    CHECK(fail.output.find("counterexample") != std::string::npos);
}

TEST_CASE("construct confirms the recursive build") {
    RunResult r = run("construct --input " + fixture("construct_supnorm.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("nested evaluation agreement gap") != std::string::npos);
}

TEST_CASE("audit is clean on the fixture and trips on the mutant") {
    RunResult clean = run("audit --input " + fixture("audit_supnorm.json"));
    CHECK(clean.exit_code == 0);
    CHECK(clean.output.find("no violations") != std::string::npos);
    RunResult mutant = run("audit --input " + fixture("audit_mutant.json"));
    CHECK(mutant.exit_code == 1);
    CHECK(mutant.output.find("violation") != std::string::npos);
}

TEST_CASE("adversarial wrappers flip their targeted check") {
    CHECK(run("check --input " + fixture("wrap_break_normalisation.json")).exit_code == 1);
    CHECK(run("check --input " + fixture("wrap_break_order.json")).exit_code == 1);
    CHECK(run("check --input " + fixture("wrap_break_translation.json")).exit_code == 1);
    // The unwrapped baseline passes the same checks.
    CHECK(run("check --input " + fixture("set_checks_var_scaled.json")).exit_code == 0);
}

TEST_CASE("oracle comparison stays within the grid spacing") {
    RunResult r = run("oracle-compare --oracle --input " + fixture("oracle_kl.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"within_bounds\": true") != std::string::npos);
}

TEST_CASE("table1 reproduces the expected pattern") {
    RunResult r = run("table1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("pattern: match") != std::string::npos);
}

TEST_CASE("seeded reports are byte-identical across runs") {
    std::string cmd = "check-tc --seed 31 --input " + fixture("basic.json");
    RunResult a = run(cmd);
    RunResult b = run(cmd);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.output == b.output);
    CHECK_FALSE(a.output.empty());
}

TEST_CASE("mean-band document evaluates") {
    RunResult r = run("evaluate --input " + fixture("mean_band.json"));
    CHECK(r.exit_code == 0);
}
