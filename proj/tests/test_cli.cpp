#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string cli() {
    const char* p = std::getenv("FGS_CLI");
    REQUIRE_MESSAGE(p != nullptr, "FGS_CLI must point at the executable");
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = cli() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path sandbox() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "fgs_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_config(const std::string& name, const json& doc) {
    fs::path p = sandbox() / name;
    std::ofstream out(p);
    out << doc.dump(2);
    return p.string();
}

json base_config(const std::string& out_name) {
    return {{"schema_version", 1},
            {"problem",
             {{"N", 1},
              {"s", 0.5},
              {"lambda", 1.0},
              {"nonlinearity", {{"kind", "pure_power"}, {"r", 3.0}}}}},
            {"discretization", {{"L", 60.0}, {"n", 1024}}},
            {"output",
             {{"directory", (sandbox() / out_name).string()},
              {"formats", {"json", "csv", "svg"}}}}};
}

} // namespace

TEST_CASE("solve: artifacts and reported invariants") {
    json cfg = base_config("solve_out");
    auto res = run("solve " + write_config("solve.json", cfg));
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("converged") != std::string::npos);

    fs::path rec_path = sandbox() / "solve_out" / "record.json";
    REQUIRE(fs::exists(rec_path));
    std::ifstream in(rec_path);
    json rec = json::parse(in);
    CHECK(rec.at("residual_rel").get<double>() < 1e-10);
    CHECK(rec.at("max_value").get<double>() == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(std::abs(rec.at("nehari_t").get<double>() - 1.0) < 1e-8);
    CHECK(rec.at("decay_target").get<double>() == doctest::Approx(2.0));
    CHECK(fs::exists(sandbox() / "solve_out" / "solve_profile.csv"));
    CHECK(fs::exists(sandbox() / "solve_out" / "solve_profile.svg"));
    CHECK(fs::exists(sandbox() / "solve_out" / "solve_tail.svg"));

    SUBCASE("repeat runs are bit-identical") {
        json cfg2 = base_config("solve_out2");
        auto res2 = run("solve " + write_config("solve2.json", cfg2));
        CHECK(res2.exit_code == 0);
        std::ifstream in2(sandbox() / "solve_out2" / "record.json");
        json rec2 = json::parse(in2);
        CHECK(rec2.at("values").dump() == rec.at("values").dump());
        CHECK(rec2.at("residual_norm").dump() == rec.at("residual_norm").dump());
    }
}

TEST_CASE("validate-f: accepted family") {
    json cfg = base_config("valf_out");
    cfg["problem"]["nonlinearity"] = {{"kind", "power_sum"}, {"powers", {4.0, 6.0}}};
    auto res = run("validate-f " + write_config("valf.json", cfg));
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("admissible: yes") != std::string::npos);
    REQUIRE(fs::exists(sandbox() / "valf_out" / "hypotheses.json"));
    std::ifstream in(sandbox() / "valf_out" / "hypotheses.json");
    json rep = json::parse(in);
    CHECK(rep.at("all_pass").get<bool>());
}

TEST_CASE("validate-f: linear source is rejected with exit 2") {
    // r = 2 means f(t) = t, which violates the strict superlinearity
    json cfg = base_config("valf_bad_out");
    cfg["problem"]["nonlinearity"] = {{"kind", "pure_power"}, {"r", 2.0}};
    auto res = run("validate-f " + write_config("valf_bad.json", cfg));
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("NO") != std::string::npos);
}

TEST_CASE("validate-f: supercritical power is rejected with exit 2") {
    json cfg = base_config("valf_crit_out");
    cfg["problem"]["N"] = 2;
    cfg["problem"]["nonlinearity"] = {{"kind", "pure_power"}, {"r", 5.0}};
    auto res = run("validate-f " + write_config("valf_crit.json", cfg));
    CHECK(res.exit_code == 2);
}

TEST_CASE("operational errors exit with 1") {
    SUBCASE("malformed JSON") {
        fs::path p = sandbox() / "broken.json";
        std::ofstream(p) << "{ not json";
        auto res = run("solve " + p.string());
        CHECK(res.exit_code == 1);
        CHECK(res.output.find("error") != std::string::npos);
    }
    SUBCASE("missing config file") {
        auto res = run("solve " + (sandbox() / "no_such.json").string());
        CHECK(res.exit_code == 1);
    }
    SUBCASE("unsupported schema version") {
        json cfg = base_config("schema_out");
        cfg["schema_version"] = 99;
        auto res = run("solve " + write_config("schema.json", cfg));
        CHECK(res.exit_code == 1);
        CHECK(res.output.find("schema_version") != std::string::npos);
    }
    SUBCASE("unknown nonlinearity kind") {
        json cfg = base_config("kind_out");
        cfg["problem"]["nonlinearity"] = {{"kind", "mystery"}};
        auto res = run("solve " + write_config("kind.json", cfg));
        CHECK(res.exit_code == 1);
    }
    SUBCASE("no subcommand") {
        auto res = run("");
        CHECK(res.exit_code != 0);
    }
}

TEST_CASE("verify: full certification of a well-resolved point") {
    json cfg = base_config("verify_out");
    cfg["problem"]["s"] = 0.7;
    cfg["discretization"] = {{"L", 500.0}, {"n", 16384}, {"m", 1200},
                             {"R", 40.0}, {"l_max", 2}};
    auto res = run("verify " + write_config("verify.json", cfg));
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("FAIL") == std::string::npos);
    REQUIRE(fs::exists(sandbox() / "verify_out" / "verify.json"));
    std::ifstream in(sandbox() / "verify_out" / "verify.json");
    json rep = json::parse(in);
    CHECK(rep.at("all_pass").get<bool>());
    CHECK(rep.at("checks").size() >= 20);
}

TEST_CASE("spectrum: direct run and reuse of a saved record") {
    json cfg = base_config("spec_out");
    std::string cfg_path = write_config("spec.json", cfg);
    auto solve_res = run("solve " + cfg_path);
    REQUIRE(solve_res.exit_code == 0);
    std::string rec_path = (sandbox() / "spec_out" / "record.json").string();
    REQUIRE(fs::exists(rec_path));

    auto reused = run("spectrum " + cfg_path + " --record " + rec_path);
    CHECK(reused.exit_code == 0);
    REQUIRE(fs::exists(sandbox() / "spec_out" / "spectrum.json"));
    std::ifstream in(sandbox() / "spec_out" / "spectrum.json");
    json rep = json::parse(in);
    CHECK(rep.at("morse_index").get<int>() == 1);
    CHECK(rep.at("kernel_dim").get<int>() == 1);
    CHECK(rep.at("kernel_is_translations").get<bool>());
    CHECK(rep.at("sector_morse_sum").get<int>() == 1);
    CHECK(rep.at("second_mode").at("sign_changes").get<int>() == 1);
    CHECK(std::abs(rep.at("lminus").at("lowest").get<double>()) < 1e-6);

    SUBCASE("missing record path is an operational error") {
        auto res = run("spectrum " + cfg_path + " --record " +
                       (sandbox() / "nope.json").string());
        CHECK(res.exit_code == 1);
    }
}

TEST_CASE("branch: short continuation with artifacts") {
    json cfg = base_config("branch_out");
    cfg["problem"]["lambda_max"] = 4.0;
    cfg["discretization"]["L"] = 60.0;
    cfg["discretization"]["n"] = 1024;
    auto res = run("branch " + write_config("branch.json", cfg));
    CHECK(res.exit_code == 0);
    REQUIRE(fs::exists(sandbox() / "branch_out" / "branch_manifest.json"));
    std::ifstream in(sandbox() / "branch_out" / "branch_manifest.json");
    json rep = json::parse(in);
    CHECK(rep.at("completed").get<bool>());
    CHECK(rep.at("points").get<int>() >= 3);
    CHECK(fs::exists(sandbox() / "branch_out" / "branch.csv"));
}

