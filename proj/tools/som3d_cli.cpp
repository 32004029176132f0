// som3d: run spectrum-occupancy experiments from a scenario file.
//
//   som3d rpe-sweep  --scenario s.json [--out f] [--format csv|json] [--seed u] [--jobs k]
//   som3d som-sweep  --scenario s.json ...
//   som3d theorem2   [--samples m] [--seed u] ...
//   som3d validate   --scenario s.json
//   som3d tour-dump  --scenario s.json [--n n] [--d0 d] [--mode center|random] [--seed u]
//
// Exit status: 0 success, 1 invalid input, 2 runtime failure.

#include "som3d/error.hpp"
#include "som3d/harness.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

struct Common {
    std::string scenario;
    std::string out;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    unsigned jobs = som3d::default_jobs();
};

void add_common(CLI::App* cmd, Common& c, bool scenario_required) {
    auto* opt = cmd->add_option("--scenario", c.scenario, "Scenario JSON file");
    if (scenario_required) opt->required();
    cmd->add_option("--out", c.out, "Output path (stdout when omitted)");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", c.seed, "Seed replacing the scenario's seed list");
    cmd->add_option("--jobs", c.jobs, "Worker threads (default: SOM3D_JOBS or 1)")->check(CLI::PositiveNumber);
}

som3d::OutputFormat format_of(const Common& c) {
    return c.format == "json" ? som3d::OutputFormat::json : som3d::OutputFormat::csv;
}

som3d::RunOptions options_of(const Common& c) { return {c.jobs, c.seed}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D spectrum occupancy measurement experiments"};
    app.require_subcommand(1);

    Common rpe;
    Common som;
    Common q;
    Common val;
    Common dump;
    std::uint64_t samples = 0;
    int dump_n = 0;
    int dump_d0 = 0;
    std::string dump_mode;

    auto* rpe_cmd = app.add_subcommand("rpe-sweep", "Discretization error against the predicted error per grid");
    add_common(rpe_cmd, rpe, true);
    auto* som_cmd = app.add_subcommand("som-sweep", "Adaptive measurement counts, flight distance, error, bounds");
    add_common(som_cmd, som, true);
    auto* q_cmd = app.add_subcommand("theorem2", "RPE constant by quadrature and by sampling");
    add_common(q_cmd, q, false);
    q_cmd->add_option("--samples", samples, "Sample count (default: scenario cut_samples or 1000000)");
    auto* val_cmd = app.add_subcommand("validate", "Check a scenario file and report every problem");
    add_common(val_cmd, val, true);
    auto* dump_cmd = app.add_subcommand("tour-dump", "Waypoint CSV of one adaptive run");
    add_common(dump_cmd, dump, true);
    dump_cmd->add_option("--n", dump_n, "Grid size (default: first in scenario)");
    dump_cmd->add_option("--d0", dump_d0, "Initial interval (default: first in scenario)");
    dump_cmd->add_option("--mode", dump_mode, "center or random")->check(CLI::IsMember({"center", "random"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (*rpe_cmd) {
            const auto sc = som3d::load_scenario(rpe.scenario);
            som3d::emit(som3d::run_rpe_sweep(sc, options_of(rpe)), rpe.out, format_of(rpe));
        } else if (*som_cmd) {
            const auto sc = som3d::load_scenario(som.scenario);
            som3d::emit(som3d::run_som_sweep(sc, options_of(som)), som.out, format_of(som));
        } else if (*q_cmd) {
            std::string id;
            std::uint64_t n = 1'000'000;
            std::uint64_t seed = 1;
            if (!q.scenario.empty()) {
                const auto sc = som3d::load_scenario(q.scenario);
                id = sc.id;
                n = sc.cut_samples;
                seed = sc.seeds.front();
            }
            if (samples > 0) n = samples;
            if (q.seed) seed = *q.seed;
            som3d::emit(som3d::run_theorem2(n, seed, id), q.out, format_of(q));
        } else if (*val_cmd) {
            const auto sc = som3d::load_scenario(val.scenario);
            std::cout << sc.id << ": ok (" << sc.scene.network_count() << " networks, " << sc.grids.size()
                      << " grids, " << sc.intervals.size() << " intervals, " << sc.seeds.size() << " seeds)\n";
        } else if (*dump_cmd) {
            const auto sc = som3d::load_scenario(dump.scenario);
            const int n = dump_n > 0 ? dump_n : sc.grids.front();
            int d0 = dump_d0;
            if (d0 <= 0) {
                if (sc.intervals.empty()) throw som3d::ValidationError("tour-dump needs --d0 or scenario intervals");
                d0 = sc.intervals.front();
            }
            const som3d::PositionMode mode =
                dump_mode.empty() ? sc.position_modes.front()
                                  : (dump_mode == "random" ? som3d::PositionMode::random : som3d::PositionMode::center);
            auto config = som3d::som_config(sc, d0, dump.seed.value_or(sc.seeds.front()), mode);
            config.plan_tours = true;
            const auto grid = som3d::GridSpec::for_region(sc.scene.region_edge, n);
            config.validate(grid);
            const auto rec = som3d::run_som(sc.scene, grid, config);
            std::ostringstream buf;
            som3d::write_waypoints(buf, som3d::tour_visits(sc.scene, grid, config, rec));
            if (dump.out.empty() || dump.out == "-") {
                std::cout << buf.str();
            } else {
                std::ofstream out(dump.out, std::ios::binary | std::ios::trunc);
                out << buf.str();
                if (!out) throw std::runtime_error("failed writing " + dump.out);
            }
        }
    } catch (const som3d::ValidationError& e) {
        for (const auto& p : e.problems()) std::cerr << "error: " << p << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
