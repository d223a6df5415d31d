#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <doctest.h>

#include "spsaik/artifacts.hpp"

using namespace spsaik;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "spsaik_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(const std::string& args) {
    static int counter = 0;
    const auto out = work_dir() / ("stdout_" + std::to_string(counter) + ".txt");
    const auto err = work_dir() / ("stderr_" + std::to_string(counter++) + ".txt");
    const std::string cmd =
        std::string(SPSA_IK_BINARY) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text(out), read_text(err)};
}

std::string dir(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("run prints the tabulated initial loss") {
    const auto r = cli("run --scenario 1.1 --seed 7 --out " + dir("run11"));
    CHECK(r.code == 0);
    CHECK(r.out.find("initial loss 0.1401") != std::string::npos);
    CHECK(fs::exists(dir("run11") + "/trace.csv"));
    CHECK(fs::exists(dir("run11") + "/result.json"));
}

TEST_CASE("unknown scenario exits with the scenario code") {
    const auto r = cli("run --scenario 9.9 --out " + dir("bad"));
    CHECK(r.code == 3);
    CHECK(r.err.find("1.1") != std::string::npos);
    CHECK(r.err.find("2.3") != std::string::npos);
}

TEST_CASE("usage and io errors have their own codes") {
    CHECK(cli("run --no-such-flag").code == 2);
    CHECK(cli("").code == 2);
    CHECK(cli("run --scenario 1.1 --n-max 10 --out /proc/spsaik_forbidden").code == 4);
    CHECK(cli("run --scenario 1.1 --n-max 10 --d -1 --out " + dir("neg")).code == 2);
}

TEST_CASE("singular start completes with finite values") {
    const auto r = cli("run --scenario 1.7 --seed 3 --out " + dir("run17"));
    REQUIRE(r.code == 0);
    const auto art = parse_result_json(read_text(dir("run17") + "/result.json"));
    CHECK(std::isfinite(art.record.final_loss));
    CHECK(art.record.final_iterate.allFinite());
    std::istringstream trace(read_text(dir("run17") + "/trace.csv"));
    for (const auto& p : read_trace_csv(trace)) REQUIRE(std::isfinite(p.loss));
}

TEST_CASE("one-seed sweep matches a run with seed 0") {
    REQUIRE(cli("run --scenario 1.2 --seed 0 --n-max 2000 --out " + dir("single")).code == 0);
    REQUIRE(cli("sweep --scenario 1.2 --seeds 1 --n-max 2000 --jobs 1 --out " + dir("sweep1")).code == 0);
    const auto art = parse_result_json(read_text(dir("single") + "/result.json"));
    std::istringstream csv(read_text(dir("sweep1") + "/sweep.csv"));
    const auto rep = read_sweep_csv(csv, "1.2");
    REQUIRE(rep.runs.size() == 1);
    CHECK(rep.runs[0].final_loss == art.record.final_loss);
}

TEST_CASE("sweep csv is byte-identical across repeats") {
    const std::string args = "sweep --scenario 1.8 --seeds 4 --n-max 1500 --omit-timing --jobs ";
    REQUIRE(cli(args + "1 --out " + dir("det_a")).code == 0);
    REQUIRE(cli(args + "3 --out " + dir("det_b")).code == 0);
    CHECK(read_text(dir("det_a") + "/sweep.csv") == read_text(dir("det_b") + "/sweep.csv"));
}

TEST_CASE("weighting the base joint reduces its motion") {
    REQUIRE(cli("sweep --scenario 1.5 --seeds 20 --out " + dir("s15")).code == 0);
    REQUIRE(cli("sweep --scenario 1.6 --seeds 20 --out " + dir("s16")).code == 0);
    std::istringstream a(read_text(dir("s15") + "/sweep.csv"));
    std::istringstream b(read_text(dir("s16") + "/sweep.csv"));
    const auto r15 = read_sweep_csv(a, "1.5");
    const auto r16 = read_sweep_csv(b, "1.6");
    CHECK(r16.median_dq[0] < r15.median_dq[0]);
}

TEST_CASE("compare with a population-sized budget still emits a valid csv") {
    const auto r = cli("compare --scenario 2.3 --seeds 2 --budget 100 --population 100 --out " + dir("cmp"));
    REQUIRE(r.code == 0);
    std::istringstream csv(read_text(dir("cmp") + "/compare.csv"));
    const auto rows = read_compare_csv(csv);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(std::isfinite(row.nlspsa_loss));
        CHECK(std::isfinite(row.pso_loss));
    }
    CHECK(read_text(dir("cmp") + "/compare.json").find("\"winner\"") != std::string::npos);
}

TEST_CASE("plot renders both figures from a run directory") {
    REQUIRE(cli("run --scenario 2.3 --n-max 500 --trace-every 10 --out " + dir("plot")).code == 0);
    REQUIRE(cli("plot --run " + dir("plot")).code == 0);
    const auto posture = read_text(dir("plot") + "/posture.svg");
    const auto conv = read_text(dir("plot") + "/convergence.svg");
    CHECK(posture.rfind("<svg", 0) == 0);
    CHECK(conv.find("data-first-loss=\"29.56") != std::string::npos);
    CHECK(cli("plot --run " + dir("nothing_here")).code == 4);
}

TEST_CASE("export writes a loadable scenario") {
    const auto path = dir("exported.json");
    REQUIRE(cli("export --scenario 1.6 --out " + path).code == 0);
    CHECK(load_scenario(path) == builtin("1.6"));
    const auto r = cli("run --scenario " + path + " --n-max 100 --out " + dir("from_file"));
    CHECK(r.code == 0);
    CHECK(r.out.find("scenario 1.6") != std::string::npos);
}
