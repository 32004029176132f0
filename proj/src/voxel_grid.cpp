#include "som3d/voxel_grid.hpp"

#include "som3d/error.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

namespace som3d {

GridSpec GridSpec::for_region(double region_edge, int n) {
    GridSpec grid{n, n > 0 ? region_edge / n : 0.0};
    grid.validate();
    return grid;
}

void GridSpec::validate() const {
    std::vector<std::string> problems;
    if (n < 1) problems.emplace_back("grid: n must be >= 1");
    if (n > 2048) problems.emplace_back("grid: n must be <= 2048");
    if (!(std::isfinite(edge) && edge > 0.0)) problems.emplace_back("grid: cube edge must be positive");
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

Point3 cube_center(const GridSpec& grid, CubeIndex idx, Point3 origin) {
    if (!in_range(grid, idx)) throw std::out_of_range("cube index out of range");
    return origin + grid.edge * Point3{idx.i + 0.5, idx.j + 0.5, idx.k + 0.5};
}

namespace {

// Label of a cube whose box lies entirely inside or outside every sphere.
std::optional<RadioParameter> pure_label(const Scene& scene, Point3 lo, double edge) {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < scene.networks.size(); ++k) {
        const auto& net = scene.networks[k];
        double near2 = 0.0;
        double far2 = 0.0;
        const double lo_c[3] = {lo.x, lo.y, lo.z};
        const double c[3] = {net.center.x, net.center.y, net.center.z};
        for (int a = 0; a < 3; ++a) {
            const double l = lo_c[a] - c[a];
            const double h = l + edge;
            const double nearest = (l > 0.0) ? l : (h < 0.0 ? h : 0.0);
            const double farthest = std::max(std::abs(l), std::abs(h));
            near2 += nearest * nearest;
            far2 += farthest * farthest;
        }
        const double r2 = net.radius * net.radius;
        if (far2 <= r2) {
            bits |= std::uint64_t{1} << k;
        } else if (near2 <= r2) {
            return std::nullopt;
        }
    }
    return RadioParameter{bits};
}

}  // namespace

VolumeFractions cube_volume_fractions(const Scene& scene, const GridSpec& grid, CubeIndex idx, int subsamples) {
    if (subsamples < 1) throw std::invalid_argument("cube_volume_fractions: subsamples must be >= 1");
    if (!in_range(grid, idx)) throw std::out_of_range("cube index out of range");

    const Point3 lo = scene.region_origin + grid.edge * Point3{double(idx.i), double(idx.j), double(idx.k)};
    if (auto label = pure_label(scene, lo, grid.edge)) return {{*label, 1.0}};

    std::map<RadioParameter, std::uint64_t> counts;
    const double step = grid.edge / subsamples;
    for (int c = 0; c < subsamples; ++c) {
        for (int b = 0; b < subsamples; ++b) {
            for (int a = 0; a < subsamples; ++a) {
                const Point3 p = lo + step * Point3{a + 0.5, b + 0.5, c + 0.5};
                ++counts[radio_parameter_at(scene, p)];
            }
        }
    }
    const double total = static_cast<double>(subsamples) * subsamples * subsamples;
    VolumeFractions fractions;
    for (const auto& [label, count] : counts) fractions.emplace(label, static_cast<double>(count) / total);
    return fractions;
}

RadioParameter ground_truth_label(const VolumeFractions& fractions) {
    if (fractions.empty()) throw std::invalid_argument("ground_truth_label: empty fractions");
    // std::map iterates in ascending parameter order, so strict '>' keeps the
    // smallest parameter on ties.
    auto best = fractions.begin();
    for (auto it = fractions.begin(); it != fractions.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return best->first;
}

double cube_rpe(const VolumeFractions& fractions) {
    if (fractions.empty()) throw std::invalid_argument("cube_rpe: empty fractions");
    double best = 0.0;
    for (const auto& entry : fractions) best = std::max(best, entry.second);
    return 1.0 - best;
}

double discretization_rpe(const Scene& scene, const GridSpec& grid, int subsamples) {
    grid.validate();
    double sum = 0.0;
    for (int k = 0; k < grid.n; ++k)
        for (int j = 0; j < grid.n; ++j)
            for (int i = 0; i < grid.n; ++i) sum += cube_rpe(cube_volume_fractions(scene, grid, {i, j, k}, subsamples));
    return sum / static_cast<double>(grid.cube_count());
}

OccupancyMap ground_truth_map(const Scene& scene, const GridSpec& grid, int subsamples) {
    grid.validate();
    OccupancyMap map(grid);
    for (std::size_t lin = 0; lin < grid.cube_count(); ++lin) {
        const CubeIndex idx = cube_from_linear(grid, lin);
        map.set(idx, ground_truth_label(cube_volume_fractions(scene, grid, idx, subsamples)), Provenance::measured);
    }
    return map;
}

OccupancyMap center_label_map(const Scene& scene, const GridSpec& grid) {
    grid.validate();
    OccupancyMap map(grid);
    for (std::size_t lin = 0; lin < grid.cube_count(); ++lin) {
        const CubeIndex idx = cube_from_linear(grid, lin);
        map.set(idx, radio_parameter_at(scene, cube_center(grid, idx, scene.region_origin)), Provenance::measured);
    }
    return map;
}

}  // namespace som3d
