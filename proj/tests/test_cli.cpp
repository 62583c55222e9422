#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Fresh scratch directory per call under the system temp dir.
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hypx_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(HYPX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("validate-phase on the saddle") {
    const fs::path out = scratch("validate");
    CHECK(run("validate-phase --set phase=saddle --out " + out.string()) == 0);
    const json j = json::parse(slurp(out / "validate_phase.json"));
    CHECK(j["schema"] == "hypx/1");
    CHECK(j["subcommand"] == "validate-phase");
    CHECK(j["pass"] == true);
    CHECK(j["max_normal_residual"] == 0.0);
    for (const auto& v : j["normal_residuals"]) CHECK(v == 0.0);
}

TEST_CASE("validate-phase fails on a phase outside the class") {
    const fs::path out = scratch("validate_bad");
    // cubic-x with a coefficient outside its admissible range is a module error.
    CHECK(run("validate-phase --set phase=cubic-x --set phase_params=0.5 --out " + out.string()) == 2);
}

TEST_CASE("cover with a single cap") {
    const fs::path out = scratch("cover");
    CHECK(run("cover --set K=128 --set cover_F=5000 --out " + out.string()) == 0);
    const json j = json::parse(slurp(out / "cover.json"));
    CHECK(j["report"]["L0_size"] == 1);
    CHECK(j["L0"].size() == 1);
    CHECK(j["F"].size() == 1);
}

TEST_CASE("extension-run writes one norm row per radius") {
    const fs::path out = scratch("extension");
    CHECK(run("extension-run --set R_list=16,32,64 --set grid_points=9 --out " + out.string()) == 0);
    std::ifstream csv(out / "extension_norms.csv");
    std::string line;
    int rows = 0;
    std::getline(csv, line);
    CHECK(line.rfind("R,", 0) == 0);
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
    const json j = json::parse(slurp(out / "extension.json"));
    CHECK(j.contains("slope"));
}

TEST_CASE("identical config and seed give byte-identical JSON") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::string args = "geometry-report --set phase=mixed-quartic --set phase_params=1e-6 --seed 7";
    CHECK(run(args + " --out " + a.string()) == 0);
    CHECK(run(args + " --out " + b.string()) == 0);
    CHECK(slurp(a / "geometry.json") == slurp(b / "geometry.json"));
    CHECK(slurp(a / "geometry.csv") == slurp(b / "geometry.csv"));
    CHECK(!slurp(a / "geometry.json").empty());

    const fs::path c = scratch("det_c"), d = scratch("det_d");
    CHECK(run("sublevel --seed 3 --out " + c.string()) == 0);
    CHECK(run("sublevel --seed 3 --out " + d.string()) == 0);
    CHECK(slurp(c / "sublevel.json") == slurp(d / "sublevel.json"));
}

TEST_CASE("config files, overrides and errors") {
    const fs::path dir = scratch("config");
    write(dir / "good.cfg", "# saddle at K = 128\nphase = saddle\nK = 128\nseed = 4\n");
    write(dir / "bad.cfg", "phase saddle\n");
    write(dir / "unknown.cfg", "phase = saddle\nwidth = 3\n");
    write(dir / "dup.cfg", "K = 128\nK = 256\n");
    write(dir / "range.cfg", "K = 100\n");

    CHECK(run("validate-phase --config " + (dir / "good.cfg").string() + " --out " + (dir / "o1").string()) == 0);
    const json j = json::parse(slurp(dir / "o1" / "validate_phase.json"));
    CHECK(j["config"]["K"] == "128");
    CHECK(j["config"]["seed"] == "4");

    for (const char* f : {"bad.cfg", "unknown.cfg", "dup.cfg", "range.cfg"})
        CHECK_MESSAGE(run("validate-phase --config " + (dir / f).string() + " --out " + (dir / "o2").string()) == 2, f);
    CHECK(run("validate-phase --config " + (dir / "missing.cfg").string()) == 2);
    CHECK(run("no-such-command") != 0);
    CHECK(run("validate-phase --set nokey") == 2);
}

TEST_CASE("output directory precedence") {
    const fs::path dir = scratch("precedence");
    const fs::path env_out = dir / "from_env", flag_out = dir / "from_flag";
    CHECK(run("validate-phase", "HYPX_OUT_DIR=" + env_out.string()) == 0);
    CHECK(fs::exists(env_out / "validate_phase.json"));
    CHECK(run("validate-phase --out " + flag_out.string(), "HYPX_OUT_DIR=" + (dir / "ignored").string()) == 0);
    CHECK(fs::exists(flag_out / "validate_phase.json"));
    CHECK_FALSE(fs::exists(dir / "ignored"));
}
