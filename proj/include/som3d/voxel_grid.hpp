#pragma once

#include "som3d/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace som3d {

/// Uniform subdivision of the region into n^3 cubes of edge L/n.
struct GridSpec {
    int n = 1;
    double edge = 1.0;

    static GridSpec for_region(double region_edge, int n);

    std::size_t cube_count() const {
        const auto m = static_cast<std::size_t>(n);
        return m * m * m;
    }

    void validate() const;
};

struct CubeIndex {
    int i = 0;
    int j = 0;
    int k = 0;

    friend constexpr auto operator<=>(const CubeIndex&, const CubeIndex&) = default;
};

inline bool in_range(const GridSpec& grid, CubeIndex idx) {
    return idx.i >= 0 && idx.j >= 0 && idx.k >= 0 && idx.i < grid.n && idx.j < grid.n && idx.k < grid.n;
}

/// Row-major linearization with i fastest.
inline std::size_t linear_index(const GridSpec& grid, CubeIndex idx) {
    const auto n = static_cast<std::size_t>(grid.n);
    return static_cast<std::size_t>(idx.i) + n * (static_cast<std::size_t>(idx.j) + n * static_cast<std::size_t>(idx.k));
}

inline CubeIndex cube_from_linear(const GridSpec& grid, std::size_t lin) {
    const auto n = static_cast<std::size_t>(grid.n);
    return {static_cast<int>(lin % n), static_cast<int>((lin / n) % n), static_cast<int>(lin / (n * n))};
}

enum class Provenance : std::uint8_t { unknown, measured, inferred };

struct OccupancyMap {
    GridSpec grid;
    std::vector<RadioParameter> labels;
    std::vector<Provenance> provenance;

    explicit OccupancyMap(GridSpec g = {})
        : grid(g), labels(g.cube_count()), provenance(g.cube_count(), Provenance::unknown) {}

    RadioParameter label(CubeIndex idx) const { return labels[linear_index(grid, idx)]; }
    Provenance origin(CubeIndex idx) const { return provenance[linear_index(grid, idx)]; }

    void set(CubeIndex idx, RadioParameter value, Provenance how) {
        const auto lin = linear_index(grid, idx);
        labels[lin] = value;
        provenance[lin] = how;
    }
};

using VolumeFractions = std::map<RadioParameter, double>;

/// Throws std::out_of_range for an index outside the grid.
Point3 cube_center(const GridSpec& grid, CubeIndex idx, Point3 origin);

/// Fractions p_ij of the cube's volume carrying each radio parameter,
/// estimated on an s x s x s lattice of stratum midpoints.
VolumeFractions cube_volume_fractions(const Scene& scene, const GridSpec& grid, CubeIndex idx, int subsamples);

/// Majority parameter; ties go to the smallest value.
RadioParameter ground_truth_label(const VolumeFractions& fractions);

/// 1 - max_j p_ij.
double cube_rpe(const VolumeFractions& fractions);

/// Mean cube RPE over the whole grid (alpha_i = 1/M).
double discretization_rpe(const Scene& scene, const GridSpec& grid, int subsamples);

/// Volume-majority labels for every cube.
OccupancyMap ground_truth_map(const Scene& scene, const GridSpec& grid, int subsamples);

/// Labels evaluated at each cube center.
OccupancyMap center_label_map(const Scene& scene, const GridSpec& grid);

}  // namespace som3d
