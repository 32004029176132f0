#include "som3d/harness.hpp"

#include "som3d/error.hpp"
#include "som3d/plane_cut.hpp"
#include "som3d/voxel_grid.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace som3d {

unsigned default_jobs() {
    const char* env = std::getenv("SOM3D_JOBS");
    if (env == nullptr) return 1;
    unsigned v = 0;
    const char* end = env + std::strlen(env);
    const auto [p, ec] = std::from_chars(env, end, v);
    if (ec != std::errc{} || p != end || v == 0) return 1;
    return v;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

std::vector<std::uint64_t> seeds_of(const Scenario& sc, const RunOptions& options) {
    if (options.seed) return {*options.seed};
    return sc.seeds;
}

std::uint64_t cubes(int n) { return static_cast<std::uint64_t>(n) * n * n; }

OccupancyMap truth_map(const Scenario& sc, const GridSpec& grid) {
    return sc.ground_truth == GroundTruth::center ? center_label_map(sc.scene, grid)
                                                  : ground_truth_map(sc.scene, grid, sc.subsamples);
}

}  // namespace

SomConfig som_config(const Scenario& scenario, int d0, std::uint64_t seed, PositionMode mode) {
    SomConfig config;
    config.d0 = d0;
    config.position_mode = mode;
    config.seed = seed;
    config.rule = scenario.refinement;
    config.plan_tours = scenario.plan_tours;
    config.aco = scenario.aco;
    return config;
}

std::vector<ResultRow> run_rpe_sweep(const Scenario& sc, const RunOptions& options) {
    sc.validate();
    const std::uint64_t seed = seeds_of(sc, options).front();
    const double surface = boundary_surface_area(sc.scene, sc.surface_samples, seed).value;
    std::vector<std::vector<ResultRow>> parts(sc.grids.size());
    parallel_for(sc.grids.size(), options.jobs, [&](std::size_t g) {
        const int n = sc.grids[g];
        const GridSpec grid = GridSpec::for_region(sc.scene.region_edge, n);
        const double rpe = discretization_rpe(sc.scene, grid, sc.subsamples);
        const double predicted =
            surface > 0.0 ? predicted_rpe(surface, sc.scene.region_edge, static_cast<double>(cubes(n)), sc.rpe_constant)
                          : 0.0;
        parts[g].push_back({"rpe-sweep", sc.id, n, cubes(n), 0, 0, "rpe", rpe});
        parts[g].push_back({"rpe-sweep", sc.id, n, cubes(n), 0, seed, "predicted_rpe", predicted});
    });
    std::vector<ResultRow> rows;
    for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
    sort_rows(rows);
    return rows;
}

std::vector<ResultRow> run_som_sweep(const Scenario& sc, const RunOptions& options) {
    sc.validate();
    if (sc.intervals.empty()) throw ValidationError("som-sweep needs at least one entry in intervals");
    const auto seeds = seeds_of(sc, options);

    // Ground truth once per grid; it does not depend on the seed.
    std::map<int, OccupancyMap> truths;
    for (int n : sc.grids) {
        if (!truths.count(n)) truths.emplace(n, truth_map(sc, GridSpec::for_region(sc.scene.region_edge, n)));
    }

    struct Cell {
        int n;
        int d0;
        std::uint64_t seed;
        PositionMode mode;
    };
    std::vector<Cell> cells;
    for (int n : sc.grids)
        for (int d0 : sc.intervals)
            for (std::uint64_t seed : seeds)
                for (PositionMode mode : sc.position_modes) cells.push_back({n, d0, seed, mode});

    std::vector<std::vector<ResultRow>> parts(cells.size());
    parallel_for(cells.size(), options.jobs, [&](std::size_t c) {
        const Cell& cell = cells[c];
        const GridSpec grid = GridSpec::for_region(sc.scene.region_edge, cell.n);
        const Reconstruction rec = run_som(sc.scene, grid, som_config(sc, cell.d0, cell.seed, cell.mode));
        const std::string experiment = "som-sweep:" + to_string(cell.mode);
        auto row = [&](const char* metric, double value) {
            parts[c].push_back({experiment, sc.id, cell.n, cubes(cell.n), cell.d0, cell.seed, metric, value});
        };
        row("measurements", static_cast<double>(rec.total_measurements));
        if (sc.plan_tours) row("flight_distance", rec.flight_distance);
        row("recon_error", reconstruction_error(rec.map, truths.at(cell.n)));
    });

    std::vector<ResultRow> rows;
    for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());

    const std::uint64_t surface_seed = seeds.front();
    const double surface = boundary_surface_area(sc.scene, sc.surface_samples, surface_seed).value;
    for (int n : sc.grids) {
        for (int d0 : sc.intervals) {
            const MeasurementBound b = measurement_bound(n, d0, surface, sc.scene.region_edge);
            rows.push_back({"bound:asymptotic", sc.id, n, cubes(n), d0, surface_seed, "bound", b.asymptotic});
            rows.push_back({"bound:lattice", sc.id, n, cubes(n), d0, surface_seed, "bound", b.exact_lattice});
        }
    }
    sort_rows(rows);
    return rows;
}

std::vector<ResultRow> run_theorem2(std::uint64_t samples, std::uint64_t seed, const std::string& scenario_id) {
    if (samples < 100000) throw ValidationError("theorem2 needs at least 100000 samples");
    const double quad = theorem2_constant();
    const ConstantEstimate sampled = theorem2_constant_sampled(samples, seed);
    std::vector<ResultRow> rows{
        {"theorem2:quadrature", scenario_id, 0, 0, 0, 0, "theorem2_Q", quad},
        {"theorem2:sampled", scenario_id, 0, 0, 0, seed, "theorem2_Q", sampled.value},
    };
    sort_rows(rows);
    return rows;
}

std::vector<WaypointVisit> tour_visits(const Scene& scene, const GridSpec& grid, const SomConfig& config,
                                       const Reconstruction& rec) {
    std::vector<WaypointVisit> visits;
    for (const auto& round : rec.rounds) {
        if (!round.tour) continue;
        for (std::size_t i = 0; i < round.tour->order.size(); ++i) {
            const CubeIndex c = round.waypoints[round.tour->order[i]];
            visits.push_back({round.r, i, measurement_position(scene, grid, c, config.position_mode, config.seed)});
        }
    }
    return visits;
}

}  // namespace som3d
