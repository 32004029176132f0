#pragma once

#include "som3d/results_io.hpp"
#include "som3d/scenario.hpp"
#include "som3d/som_planner.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace som3d {

struct RunOptions {
    unsigned jobs = 1;
    /// Replaces the scenario's seed list when set.
    std::optional<std::uint64_t> seed;
};

/// SOM3D_JOBS when it holds a positive integer, otherwise 1.
unsigned default_jobs();

/// Runs body(0..count-1) on up to `jobs` threads. The first exception thrown
/// by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

/// Per grid: discretization RPE and the predicted RPE from the boundary area.
std::vector<ResultRow> run_rpe_sweep(const Scenario& scenario, const RunOptions& options = {});

/// Per (n, d0, seed, mode): measurement count, flight distance (when tours
/// are planned) and reconstruction error, plus both measurement bounds per
/// (n, d0). Experiment ids carry the mode, e.g. "som-sweep:center".
std::vector<ResultRow> run_som_sweep(const Scenario& scenario, const RunOptions& options = {});

/// Quadrature value and a sampled estimate of the RPE constant.
std::vector<ResultRow> run_theorem2(std::uint64_t samples, std::uint64_t seed, const std::string& scenario_id = "");

SomConfig som_config(const Scenario& scenario, int d0, std::uint64_t seed, PositionMode mode);

/// Tour visits of every round, in flight order.
std::vector<WaypointVisit> tour_visits(const Scene& scene, const GridSpec& grid, const SomConfig& config,
                                       const Reconstruction& rec);

}  // namespace som3d
