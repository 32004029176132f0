#include "doctest.h"

#include "som3d/error.hpp"
#include "som3d/harness.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace som3d;

namespace {

Scenario small_scenario() {
    Scenario sc = load_scenario(std::string(SOM3D_DATA_DIR) + "/determinism.json");
    sc.grids = {9};
    sc.seeds = {1, 2};
    sc.aco.iterations = 20;
    return sc;
}

std::map<std::string, double> index_rows(const std::vector<ResultRow>& rows) {
    std::map<std::string, double> out;
    for (const auto& r : rows)
        out[r.experiment + "|" + std::to_string(r.n) + "|" + std::to_string(r.d0) + "|" + std::to_string(r.seed) +
            "|" + r.metric] = r.value;
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SOM3D_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("parallel_for covers every index and rethrows") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }),
                    std::runtime_error);
}

TEST_CASE("default jobs from the environment") {
    setenv("SOM3D_JOBS", "3", 1);
    CHECK(default_jobs() == 3);
    setenv("SOM3D_JOBS", "zero", 1);
    CHECK(default_jobs() == 1);
    unsetenv("SOM3D_JOBS");
    CHECK(default_jobs() == 1);
}

TEST_CASE("rpe sweep on an empty scene is all zeros") {
    Scenario sc;
    sc.id = "empty";
    sc.scene.region_edge = 10;
    sc.grids = {3, 5};
    sc.seeds = {1};
    const auto rows = run_rpe_sweep(sc);
    CHECK(rows.size() == 4);
    for (const auto& r : rows) CHECK(r.value == 0.0);
}

TEST_CASE("som sweep rows") {
    const Scenario sc = small_scenario();
    const auto rows = run_som_sweep(sc);
    // 3 intervals x 2 seeds x 2 modes x 3 metrics, plus 2 bounds per interval.
    CHECK(rows.size() == 3 * 2 * 2 * 3 + 3 * 2);
    std::set<std::string> keys;
    for (const auto& r : rows) {
        CHECK(keys.insert(r.experiment + std::to_string(r.n) + std::to_string(r.d0) + std::to_string(r.seed) + r.metric)
                  .second);
    }
    const auto idx = index_rows(rows);
    CHECK(idx.at("som-sweep:center|9|1|1|measurements") == 729);
    CHECK(idx.at("som-sweep:center|9|1|1|recon_error") == doctest::Approx(idx.at("som-sweep:center|9|1|2|recon_error")));
    for (int d0 : {2, 4}) {
        for (int seed : {1, 2}) {
            for (const char* mode : {"center", "random"}) {
                const std::string key =
                    std::string("som-sweep:") + mode + "|9|" + std::to_string(d0) + "|" + std::to_string(seed);
                CHECK(idx.at(key + "|measurements") <= idx.at("bound:lattice|9|" + std::to_string(d0) + "|1|bound"));
                CHECK(idx.at(key + "|measurements") < 729);
            }
        }
    }
    CHECK(idx.at("som-sweep:center|9|4|1|flight_distance") < idx.at("som-sweep:center|9|1|1|flight_distance"));
}

TEST_CASE("center ground truth gives zero error for the exhaustive run") {
    Scenario sc = small_scenario();
    sc.ground_truth = GroundTruth::center;
    sc.intervals = {1};
    sc.position_modes = {PositionMode::center};
    sc.plan_tours = false;
    for (const auto& r : run_som_sweep(sc)) {
        if (r.metric == "recon_error") CHECK(r.value == 0.0);
        CHECK(r.metric != "flight_distance");
    }
}

TEST_CASE("som sweep output does not depend on the worker count") {
    const Scenario sc = small_scenario();
    CHECK(run_som_sweep(sc, {1, std::nullopt}) == run_som_sweep(sc, {3, std::nullopt}));
    const auto one_seed = run_som_sweep(sc, {1, 7});
    for (const auto& r : one_seed)
        if (r.experiment.rfind("som-sweep", 0) == 0) CHECK(r.seed == 7);
}

TEST_CASE("som sweep requires intervals") {
    Scenario sc = small_scenario();
    sc.intervals.clear();
    CHECK_THROWS_AS(run_som_sweep(sc), ValidationError);
}

TEST_CASE("rpe constant rows") {
    const auto rows = run_theorem2(100000, 4);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].metric == "theorem2_Q");
    CHECK(rows[0].value == doctest::Approx(rows[1].value).epsilon(5e-3));
    CHECK_THROWS_AS(run_theorem2(10, 1), ValidationError);
}

TEST_CASE("tour visits follow the planned order") {
    const Scenario sc = small_scenario();
    const GridSpec grid = GridSpec::for_region(sc.scene.region_edge, 9);
    const SomConfig cfg = som_config(sc, 4, 1, PositionMode::center);
    const auto rec = run_som(sc.scene, grid, cfg);
    const auto visits = tour_visits(sc.scene, grid, cfg, rec);
    CHECK(visits.size() == rec.total_measurements);
    double length = distance(sc.scene.region_origin, visits.front().position);
    for (std::size_t i = 1; i < visits.size(); ++i) length += distance(visits[i - 1].position, visits[i].position);
    CHECK(length == doctest::Approx(rec.flight_distance));
}

TEST_CASE("command line exit codes and outputs") {
    const std::string scen = std::string(SOM3D_DATA_DIR) + "/determinism.json";
    const auto dir = std::filesystem::temp_directory_path() / "som3d_cli_test";
    std::filesystem::create_directories(dir);

    CHECK(run_cli("validate --scenario " + scen) == 0);
    CHECK(run_cli("validate --scenario /nonexistent.json") == 2);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("som-sweep") == 1);
    CHECK(run_cli("som-sweep --scenario " + scen + " --format xml") == 1);

    const auto bad = dir / "bad.json";
    std::ofstream(bad) << R"({"id": "b", "region": {"origin": [0,0,0], "edge": 1}, "networks": [],
        "grids": [9], "intervals": [3], "seeds": [1]})";
    CHECK(run_cli("validate --scenario " + bad.string()) == 1);

    const auto out = dir / "q.json";
    CHECK(run_cli("theorem2 --samples 100000 --seed 3 --format json --out " + out.string()) == 0);
    const auto rows = parse_rows(slurp(out), OutputFormat::json);
    CHECK(rows.size() == 2);

    const auto tours = dir / "tour.csv";
    CHECK(run_cli("tour-dump --scenario " + scen + " --n 9 --d0 4 --out " + tours.string()) == 0);
    const std::string text = slurp(tours);
    CHECK(text.rfind("round,order,x,y,z\n", 0) == 0);

    const auto rpe = dir / "rpe.csv";
    CHECK(run_cli("rpe-sweep --scenario " + scen + " --jobs 2 --out " + rpe.string()) == 0);
    CHECK(parse_rows(slurp(rpe), OutputFormat::csv).size() == 4);
    std::filesystem::remove_all(dir);
}
