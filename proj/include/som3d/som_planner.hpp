#pragma once

#include "som3d/aco_router.hpp"
#include "som3d/geometry.hpp"
#include "som3d/voxel_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace som3d {

enum class PositionMode { center, random };

/// How a lattice cell whose corners disagree is refined.
///  - pairwise: each half-interval point is the midpoint of one or more pairs
///    of opposite corners (edge, face diagonal, body diagonal). It is
///    inferred when every agreeing pair reports the same label and at least
///    one pair agrees; otherwise it is measured.
///  - cell: all 19 half-interval points of the cell are measured.
enum class RefinementRule { pairwise, cell };

struct SomConfig {
    int d0 = 4;
    PositionMode position_mode = PositionMode::center;
    std::uint64_t seed = 1;
    RefinementRule rule = RefinementRule::pairwise;
    /// Skip ACO planning when only measurement counts are wanted.
    bool plan_tours = true;
    AcoParams aco;

    /// Throws ValidationError unless d0 is a power of two and (n-1) % d0 == 0.
    void validate(const GridSpec& grid) const;
};

struct MeasurementRound {
    int r = 1;
    int d = 1;
    std::vector<CubeIndex> waypoints;
    std::vector<RadioParameter> results;  // parallel to waypoints
    std::optional<Tour> tour;             // order indexes into waypoints
};

struct Reconstruction {
    OccupancyMap map;
    std::vector<MeasurementRound> rounds;
    std::size_t total_measurements = 0;
    double flight_distance = 0.0;
};

/// Lattice points {0, d, 2d, ..., n-1}^3, i fastest.
std::vector<CubeIndex> initial_lattice(const GridSpec& grid, int d);

/// Where the cube is sampled: its center, or a uniform point inside it drawn
/// from a stream keyed on (seed, cube).
Point3 measurement_position(const Scene& scene, const GridSpec& grid, CubeIndex idx, PositionMode mode,
                            std::uint64_t seed);

RadioParameter measure(const Scene& scene, const GridSpec& grid, CubeIndex idx, PositionMode mode,
                       std::uint64_t seed);

/// Marks cubes of homogeneous cells as inferred in `known` and returns the
/// points to measure at interval round.d / 2. Empty when round.d == 1.
std::vector<CubeIndex> refine(const MeasurementRound& round, OccupancyMap& known,
                              RefinementRule rule = RefinementRule::pairwise);

/// Adaptive measurement: lattice at d0, then halve until every cube is known.
/// Round 1 flies from the region origin, later rounds from the previous end.
Reconstruction run_som(const Scene& scene, const GridSpec& grid, const SomConfig& config);

/// Boustrophedon order: i fastest, rows alternate direction, then layers.
std::vector<CubeIndex> snake_traversal(const GridSpec& grid);

/// Tour through every cube center in snake order, starting from `start`.
Tour snake_tour(const Scene& scene, const GridSpec& grid, Point3 start);

struct MeasurementBound {
    double asymptotic = 0.0;     // M / d^3 + boundary term
    double exact_lattice = 0.0;  // ((n-1)/d + 1)^3 + boundary term
};

/// Upper bound on measurements for an n^3 grid over a region of edge L whose
/// boundary surfaces have total area S:
///   first term + 2 sqrt(3) S / (3 L^2) (1 - 1/d^2) M^(2/3).
MeasurementBound measurement_bound(int n, int d, double surface_area, double region_edge);

/// Fraction of cubes whose label differs. Throws std::invalid_argument when
/// the grids differ.
double reconstruction_error(const OccupancyMap& reconstructed, const OccupancyMap& truth);

}  // namespace som3d
