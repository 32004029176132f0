#include "som3d/som_planner.hpp"

#include "som3d/error.hpp"
#include "som3d/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace som3d {

namespace {

constexpr std::uint64_t kTourStream = 0x746f7572;  // keeps tour seeds apart from cube seeds

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

template <class F>
void for_each_point(int lo_i, int lo_j, int lo_k, int count, int step, F&& f) {
    for (int c = 0; c < count; ++c)
        for (int b = 0; b < count; ++b)
            for (int a = 0; a < count; ++a) f(CubeIndex{lo_i + a * step, lo_j + b * step, lo_k + c * step});
}

std::size_t unknown_count(const OccupancyMap& map) {
    return static_cast<std::size_t>(std::count(map.provenance.begin(), map.provenance.end(), Provenance::unknown));
}

// Label shared by the agreeing corner pairs whose midpoint is `offset`
// (each component 0, 1 or 2 in half-interval units), if unique.
std::optional<RadioParameter> pairwise_label(const OccupancyMap& known, CubeIndex cell, int h,
                                             std::array<int, 3> offset) {
    std::array<int, 3> mid_axes{};
    int mids = 0;
    for (int a = 0; a < 3; ++a) {
        if (offset[a] == 1) mid_axes[mids++] = a;
    }
    std::set<RadioParameter> agreeing;
    // Opposite-corner pairs: fix the first mid axis at the low end to count
    // each pair once.
    const int pairs = 1 << (mids - 1);
    for (int mask = 0; mask < pairs; ++mask) {
        std::array<int, 3> p1 = offset;
        std::array<int, 3> p2 = offset;
        for (int m = 0; m < mids; ++m) {
            const bool high = m > 0 && ((mask >> (m - 1)) & 1);
            p1[mid_axes[m]] = high ? 2 : 0;
            p2[mid_axes[m]] = high ? 0 : 2;
        }
        const CubeIndex c1{cell.i + h * p1[0], cell.j + h * p1[1], cell.k + h * p1[2]};
        const CubeIndex c2{cell.i + h * p2[0], cell.j + h * p2[1], cell.k + h * p2[2]};
        if (known.label(c1) == known.label(c2)) agreeing.insert(known.label(c1));
    }
    if (agreeing.size() == 1) return *agreeing.begin();
    return std::nullopt;
}

}  // namespace

void SomConfig::validate(const GridSpec& grid) const {
    std::vector<std::string> problems;
    if (!power_of_two(d0)) problems.emplace_back("d0 must be a power of two, got " + std::to_string(d0));
    if (d0 > 0 && (grid.n - 1) % d0 != 0)
        problems.emplace_back("n - 1 must be divisible by d0 (n = " + std::to_string(grid.n) +
                              ", d0 = " + std::to_string(d0) + ")");
    try {
        aco.validate();
    } catch (const ValidationError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

std::vector<CubeIndex> initial_lattice(const GridSpec& grid, int d) {
    grid.validate();
    if (d < 1 || (grid.n - 1) % d != 0)
        throw ValidationError("lattice interval " + std::to_string(d) + " does not divide n - 1 = " +
                              std::to_string(grid.n - 1));
    std::vector<CubeIndex> out;
    const int count = (grid.n - 1) / d + 1;
    out.reserve(static_cast<std::size_t>(count) * count * count);
    for_each_point(0, 0, 0, count, d, [&](CubeIndex c) { out.push_back(c); });
    return out;
}

Point3 measurement_position(const Scene& scene, const GridSpec& grid, CubeIndex idx, PositionMode mode,
                            std::uint64_t seed) {
    if (mode == PositionMode::center) return cube_center(grid, idx, scene.region_origin);
    if (!in_range(grid, idx)) throw std::out_of_range("cube index out of range");
    Rng rng(derive_seed(seed, {linear_index(grid, idx)}));
    const double u = uniform01(rng);
    const double v = uniform01(rng);
    const double w = uniform01(rng);
    return scene.region_origin + grid.edge * Point3{idx.i + u, idx.j + v, idx.k + w};
}

RadioParameter measure(const Scene& scene, const GridSpec& grid, CubeIndex idx, PositionMode mode,
                       std::uint64_t seed) {
    return radio_parameter_at(scene, measurement_position(scene, grid, idx, mode, seed));
}

std::vector<CubeIndex> refine(const MeasurementRound& round, OccupancyMap& known, RefinementRule rule) {
    const int d = round.d;
    if (d <= 1) return {};
    const GridSpec& grid = known.grid;
    if ((grid.n - 1) % d != 0) throw std::invalid_argument("refine: interval does not divide n - 1");
    const int h = d / 2;
    const int cells = (grid.n - 1) / d;

    std::vector<CubeIndex> mixed;
    std::vector<std::pair<CubeIndex, RadioParameter>> homogeneous;
    for_each_point(0, 0, 0, cells, d, [&](CubeIndex cell) {
        std::set<RadioParameter> corner_labels;
        for_each_point(cell.i, cell.j, cell.k, 2, d, [&](CubeIndex c) {
            if (known.origin(c) == Provenance::unknown) throw std::logic_error("refine: lattice corner is unknown");
            corner_labels.insert(known.label(c));
        });
        if (corner_labels.size() == 1) homogeneous.emplace_back(cell, *corner_labels.begin());
        else mixed.push_back(cell);
    });

    std::vector<char> scheduled(grid.cube_count(), 0);
    std::vector<CubeIndex> next;
    auto fill = [&] {
        for (const auto& [cell, label] : homogeneous) {
            for_each_point(cell.i, cell.j, cell.k, d + 1, 1, [&](CubeIndex c) {
                const std::size_t lin = linear_index(grid, c);
                if (known.provenance[lin] == Provenance::unknown && !scheduled[lin])
                    known.set(c, label, Provenance::inferred);
            });
        }
    };
    auto schedule = [&] {
        for (const CubeIndex& cell : mixed) {
            for (int c = 0; c <= 2; ++c)
                for (int b = 0; b <= 2; ++b)
                    for (int a = 0; a <= 2; ++a) {
                        if (a != 1 && b != 1 && c != 1) continue;  // coarse corner
                        const CubeIndex q{cell.i + a * h, cell.j + b * h, cell.k + c * h};
                        const std::size_t lin = linear_index(grid, q);
                        if (known.provenance[lin] != Provenance::unknown || scheduled[lin]) continue;
                        if (rule == RefinementRule::pairwise) {
                            if (auto label = pairwise_label(known, cell, h, {a, b, c})) {
                                known.set(q, *label, Provenance::inferred);
                                continue;
                            }
                        }
                        scheduled[lin] = 1;
                        next.push_back(q);
                    }
        }
    };
    // The cell rule measures every half-interval point of a mixed cell, even
    // on faces shared with homogeneous cells. The pairwise rule lets the
    // homogeneous fill settle shared faces first.
    if (rule == RefinementRule::cell) {
        schedule();
        fill();
    } else {
        fill();
        schedule();
    }
    std::sort(next.begin(), next.end(),
              [&](CubeIndex x, CubeIndex y) { return linear_index(grid, x) < linear_index(grid, y); });
    return next;
}

std::vector<CubeIndex> snake_traversal(const GridSpec& grid) {
    grid.validate();
    const int n = grid.n;
    std::vector<CubeIndex> out;
    out.reserve(grid.cube_count());
    long row = 0;
    for (int k = 0; k < n; ++k) {
        for (int jj = 0; jj < n; ++jj, ++row) {
            const int j = k % 2 == 0 ? jj : n - 1 - jj;
            for (int ii = 0; ii < n; ++ii) {
                const int i = row % 2 == 0 ? ii : n - 1 - ii;
                out.push_back({i, j, k});
            }
        }
    }
    return out;
}

Tour snake_tour(const Scene& scene, const GridSpec& grid, Point3 start) {
    WaypointSet ws;
    ws.start = start;
    for (const CubeIndex& c : snake_traversal(grid)) ws.points.push_back(cube_center(grid, c, scene.region_origin));
    std::vector<std::size_t> order(ws.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Tour t;
    t.length = tour_length(order, ws);
    t.start = start;
    t.end = ws.points.back();
    t.order = std::move(order);
    return t;
}

Reconstruction run_som(const Scene& scene, const GridSpec& grid, const SomConfig& config) {
    scene.validate();
    grid.validate();
    config.validate(grid);

    Reconstruction rec{OccupancyMap(grid), {}, 0, 0.0};
    Point3 at = scene.region_origin;
    const bool exhaustive = config.d0 == 1;

    auto fly = [&](MeasurementRound& round) {
        if (round.waypoints.empty()) return;
        WaypointSet ws;
        ws.start = at;
        ws.points.reserve(round.waypoints.size());
        for (const CubeIndex& c : round.waypoints)
            ws.points.push_back(measurement_position(scene, grid, c, config.position_mode, config.seed));
        if (!config.plan_tours) return;
        Tour tour;
        if (exhaustive) {
            std::vector<std::size_t> order(ws.points.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            tour.length = tour_length(order, ws);
            tour.order = std::move(order);
            tour.start = at;
            tour.end = ws.points.back();
        } else {
            AcoParams aco = config.aco;
            aco.seed = derive_seed(config.aco.seed, {config.seed, kTourStream, static_cast<std::uint64_t>(round.r)});
            tour = plan_tour(ws, aco);
        }
        rec.flight_distance += tour.length;
        at = tour.end;
        round.tour = std::move(tour);
    };

    auto run_round = [&](int r, int d, std::vector<CubeIndex> points) -> MeasurementRound& {
        MeasurementRound round{r, d, std::move(points), {}, std::nullopt};
        round.results.reserve(round.waypoints.size());
        for (const CubeIndex& c : round.waypoints) {
            if (rec.map.origin(c) != Provenance::unknown) throw std::logic_error("run_som: cube measured twice");
            const RadioParameter v = measure(scene, grid, c, config.position_mode, config.seed);
            rec.map.set(c, v, Provenance::measured);
            round.results.push_back(v);
        }
        fly(round);
        rec.total_measurements += round.waypoints.size();
        rec.rounds.push_back(std::move(round));
        return rec.rounds.back();
    };

    int d = config.d0;
    int r = 1;
    std::vector<CubeIndex> next = exhaustive ? snake_traversal(grid) : initial_lattice(grid, d);
    while (true) {
        const MeasurementRound& done = run_round(r, d, std::move(next));
        if (d == 1) break;
        next = refine(done, rec.map, config.rule);
        d /= 2;
        ++r;
        if (next.empty() && unknown_count(rec.map) == 0) break;
    }

    // Nothing should be left, but never return a partially labeled map.
    std::vector<CubeIndex> leftover;
    for (std::size_t lin = 0; lin < rec.map.provenance.size(); ++lin) {
        if (rec.map.provenance[lin] == Provenance::unknown) leftover.push_back(cube_from_linear(grid, lin));
    }
    if (!leftover.empty()) run_round(r + 1, 1, std::move(leftover));
    return rec;
}

MeasurementBound measurement_bound(int n, int d, double surface_area, double region_edge) {
    if (n < 1 || d < 1) throw std::invalid_argument("measurement_bound: n and d must be >= 1");
    if (!(surface_area >= 0.0) || !(region_edge > 0.0))
        throw std::invalid_argument("measurement_bound: need S >= 0 and L > 0");
    const double m = std::pow(static_cast<double>(n), 3);
    const double dd = d;
    const double boundary =
        2.0 * std::sqrt(3.0) * surface_area / (3.0 * region_edge * region_edge) * (1.0 - 1.0 / (dd * dd)) *
        std::pow(m, 2.0 / 3.0);
    const double per_axis = static_cast<double>(n - 1) / dd + 1.0;
    return {m / (dd * dd * dd) + boundary, per_axis * per_axis * per_axis + boundary};
}

double reconstruction_error(const OccupancyMap& reconstructed, const OccupancyMap& truth) {
    if (reconstructed.grid.n != truth.grid.n || reconstructed.grid.edge != truth.grid.edge ||
        reconstructed.labels.size() != truth.labels.size())
        throw std::invalid_argument("reconstruction_error: grids differ");
    if (truth.labels.empty()) return 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.labels.size(); ++i) wrong += reconstructed.labels[i] != truth.labels[i];
    return static_cast<double>(wrong) / static_cast<double>(truth.labels.size());
}

}  // namespace som3d
