#pragma once

#include "som3d/aco_router.hpp"
#include "som3d/geometry.hpp"
#include "som3d/som_planner.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace som3d {

/// Which labels reconstruction error is scored against.
enum class GroundTruth { volume_majority, center };

struct Scenario {
    std::string id;
    Scene scene;
    std::vector<int> grids;
    std::vector<int> intervals;
    std::vector<std::uint64_t> seeds;
    std::vector<PositionMode> position_modes{PositionMode::center};
    int subsamples = 9;
    std::uint64_t surface_samples = 1'000'000;
    std::uint64_t cut_samples = 1'000'000;
    RefinementRule refinement = RefinementRule::pairwise;
    GroundTruth ground_truth = GroundTruth::volume_majority;
    bool plan_tours = true;
    AcoParams aco;
    /// Constant in the predicted-RPE formula.
    double rpe_constant = 0.1649;

    /// Throws ValidationError listing every violated constraint, including
    /// any (grid, interval) pair the planner would refuse.
    void validate() const;
};

/// Parses and validates a scenario document. Errors carry "line L" prefixes
/// and field paths such as networks[1].radius.
Scenario parse_scenario(std::string_view text);

/// Reads `path` and parses it. Unreadable files raise std::runtime_error.
Scenario load_scenario(const std::filesystem::path& path);

std::string to_string(PositionMode mode);
std::string to_string(RefinementRule rule);
std::string to_string(GroundTruth truth);

}  // namespace som3d
