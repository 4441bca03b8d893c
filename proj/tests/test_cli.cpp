#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

namespace {

int cli(const std::string& args) {
    const std::string cmd = std::string(CLUBSIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("clubsim_cli_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("successful commands exit 0") {
    const auto dir = scratch("ok");
    CHECK(cli("validate") == 0);
    CHECK(cli("run --scenario hc --seeds 2 --steps 3 --out " + dir.string()) == 0);
    CHECK(std::filesystem::exists(dir / "hc_seed2_metrics.csv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(cli("experiment --seeds 0-1 --steps 2 --out " + (dir / "exp").string()) == 0);
    CHECK(std::filesystem::exists(dir / "exp" / "hc_lc_seed1_groups.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("input errors exit 1") {
    const auto dir = scratch("bad");
    std::filesystem::create_directories(dir);
    CHECK(cli("") == 1);
    CHECK(cli("run --scenario world") == 1);
    CHECK(cli("run --seeds 0,1") == 1);
    CHECK(cli("run --seeds x") == 1);
    CHECK(cli("validate --calibration /nonexistent.csv") == 1);

    std::ofstream(dir / "typo.json") << R"({"stepz": 2})";
    CHECK(cli("validate --config " + (dir / "typo.json").string()) == 1);
    std::ofstream(dir / "broken.json") << "{";
    CHECK(cli("validate --config " + (dir / "broken.json").string()) == 1);

    std::ofstream(dir / "short.csv") << "region,tfp_initial\nx,1\n";
    CHECK(cli("validate --calibration " + (dir / "short.csv").string()) == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("output failures exit 2") {
    CHECK(cli("run --seeds 0 --steps 1 --out /proc/clubsim_forbidden") == 2);
}

TEST_CASE("repeated experiments write identical bytes") {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    REQUIRE(cli("experiment --seeds 0-2 --steps 4 --out " + a.string()) == 0);
    REQUIRE(cli("experiment --seeds 0-2 --steps 4 --out " + b.string()) == 0);
    int compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
        const auto twin = b / entry.path().filename();
        REQUIRE(std::filesystem::exists(twin));
        std::string left = slurp(entry.path());
        std::string right = slurp(twin);
        if (entry.path().filename() == "summary.json") {
            // output_dir is recorded in the summary
            const auto strip = [](std::string s, const std::string& dir) {
                for (auto pos = s.find(dir); pos != std::string::npos; pos = s.find(dir)) s.erase(pos, dir.size());
                return s;
            };
            left = strip(left, a.string());
            right = strip(right, b.string());
        }
        CHECK(left == right);
        ++compared;
    }
    CHECK(compared == 2 * 3 * 3 + 1);
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

}
