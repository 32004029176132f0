#include "doctest.h"
#include "oracles.hpp"

#include "som3d/error.hpp"
#include "som3d/voxel_grid.hpp"

#include <cmath>
#include <numbers>

using namespace som3d;

TEST_CASE("grid spec and indexing") {
    const GridSpec g = GridSpec::for_region(100, 5);
    CHECK(g.edge == doctest::Approx(20));
    CHECK(g.cube_count() == 125);
    CHECK_THROWS_AS(GridSpec::for_region(100, 0), ValidationError);
    for (std::size_t lin = 0; lin < g.cube_count(); ++lin) CHECK(linear_index(g, cube_from_linear(g, lin)) == lin);
    CHECK(linear_index(g, {1, 0, 0}) == 1);
    CHECK(linear_index(g, {0, 1, 0}) == 5);
    const Point3 c = cube_center(g, {0, 1, 4}, {10, 0, 0});
    CHECK(c == Point3{20, 30, 90});
    CHECK_THROWS_AS(cube_center(g, {5, 0, 0}, {}), std::out_of_range);
}

TEST_CASE("pure cubes have a single fraction") {
    Scene s;
    s.region_edge = 100;
    s.add_network({0, 0, 0}, 30);
    const GridSpec g = GridSpec::for_region(100, 10);
    const auto inside = cube_volume_fractions(s, g, {0, 0, 0}, 9);
    REQUIRE(inside.size() == 1);
    CHECK(inside.begin()->first.value == 1);
    CHECK(cube_rpe(inside) == 0.0);
    const auto outside = cube_volume_fractions(s, g, {9, 9, 9}, 9);
    CHECK(outside.begin()->first.value == 0);
}

TEST_CASE("half-filled cube splits evenly") {
    // A huge sphere whose surface is nearly the plane x = 5 through the cube.
    Scene s;
    s.region_edge = 10;
    s.add_network({5 - 1e7, 5, 5}, 1e7);
    const GridSpec g = GridSpec::for_region(10, 1);
    const auto f = cube_volume_fractions(s, g, {0, 0, 0}, 10);
    REQUIRE(f.size() == 2);
    CHECK(f.at(RadioParameter{0}) == doctest::Approx(0.5));
    CHECK(cube_rpe(f) == doctest::Approx(0.5));
    CHECK(ground_truth_label(f).value == 0);  // tie goes to the smaller parameter
}

TEST_CASE("fractions match an independent point-sampling estimate") {
    Rng rng(21);
    const Scene s = oracle::random_sphere_scene(3, 100, rng);
    const GridSpec g = GridSpec::for_region(100, 4);
    for (std::size_t lin = 0; lin < g.cube_count(); ++lin) {
        const CubeIndex idx = cube_from_linear(g, lin);
        const auto f = cube_volume_fractions(s, g, idx, 24);
        std::map<std::uint64_t, double> mc;
        const int draws = 20000;
        for (int i = 0; i < draws; ++i) {
            const Point3 p = g.edge * Point3{idx.i + uniform01(rng), idx.j + uniform01(rng), idx.k + uniform01(rng)};
            mc[radio_parameter_at(s, p).value] += 1.0 / draws;
        }
        for (const auto& [param, frac] : mc) {
            const RadioParameter key{param};
            const double got = f.count(key) ? f.at(key) : 0.0;
            CHECK(std::abs(got - frac) < 0.02);
        }
    }
}

TEST_CASE("region RPE") {
    Scene empty;
    empty.region_edge = 10;
    CHECK(discretization_rpe(empty, GridSpec::for_region(10, 7), 9) == 0.0);

    Scene s;
    s.region_edge = 10;
    s.add_network({5 - 1e7, 5, 5}, 1e7);
    // One slab of cubes is half covered; the rest are pure.
    const GridSpec g = GridSpec::for_region(10, 2);
    CHECK(discretization_rpe(s, g, 10) == doctest::Approx(0.0).epsilon(1e-9));
    const GridSpec odd = GridSpec::for_region(10, 3);
    CHECK(discretization_rpe(s, odd, 12) == doctest::Approx(0.5 / 3).epsilon(1e-6));
}

TEST_CASE("ground truth and center maps") {
    Scene s;
    s.region_edge = 100;
    s.add_network({0, 0, 0}, 55);
    const GridSpec g = GridSpec::for_region(100, 5);
    const auto truth = ground_truth_map(s, g, 9);
    const auto centers = center_label_map(s, g);
    CHECK(truth.label({0, 0, 0}).value == 1);
    CHECK(truth.label({4, 4, 4}).value == 0);
    CHECK(centers.label({0, 0, 0}).value == 1);
    for (auto p : truth.provenance) CHECK(p == Provenance::measured);
}
