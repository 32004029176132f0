#include "doctest.h"
#include "oracles.hpp"

#include "som3d/halfspace.hpp"

#include <cmath>

using namespace som3d;

TEST_CASE("axis-aligned cut") {
    CHECK(box_halfspace_volume({1, 0, 0}, 0.3, 1) == doctest::Approx(0.3));
    CHECK(box_plane_section_area({1, 0, 0}, 0.3, 1) == doctest::Approx(1.0));
    CHECK(box_halfspace_volume({0, 0, 2}, 1.0, 2) == doctest::Approx(2.0));
    CHECK(box_plane_section_area({0, 0, 2}, 1.0, 2) == doctest::Approx(4.0));
}

TEST_CASE("diagonal cuts of the unit cube") {
    CHECK(box_halfspace_volume({1, 1, 1}, 1, 1) == doctest::Approx(1.0 / 6));
    CHECK(box_plane_section_area({1, 1, 1}, 1, 1) == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK(box_halfspace_volume({1, 1, 1}, 1.5, 1) == doctest::Approx(0.5));
    CHECK(box_plane_section_area({1, 1, 1}, 1.5, 1) == doctest::Approx(3 * std::sqrt(3.0) / 4));
    CHECK(box_halfspace_volume({1, 1, 1}, 3, 1) == doctest::Approx(1.0));
    CHECK(box_plane_section_area({1, 1, 1}, 3, 1) == doctest::Approx(0.0));
    CHECK(box_halfspace_volume({1, 1, 1}, -0.1, 1) == 0.0);
}

TEST_CASE("bad normals are rejected") {
    CHECK_THROWS(box_halfspace_volume({-1, 0, 0}, 0.5, 1));
    CHECK_THROWS(box_halfspace_volume({0, 0, 0}, 0.5, 1));
    CHECK_THROWS(box_plane_section_area({NAN, 1, 0}, 0.5, 1));
}

TEST_CASE("closed forms agree with sampling oracles") {
    Rng rng(99);
    for (int i = 0; i < 300; ++i) {
        const std::array<double, 3> w{uniform01(rng), uniform01(rng), uniform01(rng)};
        const double edge = uniform(rng, 0.5, 3);
        const double c = uniform01(rng) * (w[0] + w[1] + w[2]) * edge;
        const double vol = box_halfspace_volume(w, c, edge);
        const double frac = oracle::stratified_halfspace_fraction(w, c, edge, 6, rng);
        CHECK(std::abs(vol / (edge * edge * edge) - frac) < 2e-3);
        const double area = box_plane_section_area(w, c, edge);
        const double slab = oracle::thin_slab_area(w, c, edge, 300, 1e-4, rng);
        CHECK(std::abs(area - slab) < 1e-2 * edge * edge);
    }
}
