#include "doctest.h"
#include "oracles.hpp"

#include "som3d/aco_router.hpp"
#include "som3d/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace som3d;

namespace {

WaypointSet random_instance(std::size_t n, Rng& rng) {
    WaypointSet ws;
    ws.points = oracle::random_points(n, 100, rng);
    ws.start = oracle::random_points(1, 100, rng).front();
    return ws;
}

bool is_permutation(const std::vector<std::size_t>& order, std::size_t n) {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> ref(n);
    std::iota(ref.begin(), ref.end(), std::size_t{0});
    return sorted == ref;
}

}  // namespace

TEST_CASE("tour length") {
    WaypointSet ws{{{1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, {0, 0, 0}};
    CHECK(tour_length({0, 1, 2}, ws) == doctest::Approx(3.0));
    CHECK(tour_length({2, 1, 0}, ws) == doctest::Approx(5.0));
    CHECK_THROWS_AS(tour_length({0, 0, 1}, ws), std::invalid_argument);
    CHECK_THROWS_AS(tour_length({0, 1}, ws), std::invalid_argument);
    CHECK_THROWS_AS(tour_length({0, 1, 3}, ws), std::invalid_argument);
    WaypointSet one{{{4, 4, 4}}, {4, 4, 4}};
    CHECK(tour_length({0}, one) == 0.0);
}

TEST_CASE("reversal keeps the length when the start leg is symmetric") {
    // Start equidistant from both ends of the path.
    WaypointSet ws{{{0, 0, 0}, {1, 2, 0}, {2, 0, 0}}, {1, -1, 0}};
    CHECK(tour_length({0, 1, 2}, ws) == doctest::Approx(tour_length({2, 1, 0}, ws)));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(plan_tour(WaypointSet{}), ValidationError);
    CHECK_THROWS_AS(nearest_neighbor_tour(WaypointSet{}), ValidationError);
    WaypointSet dup{{{1, 1, 1}, {1, 1, 1}}, {}};
    CHECK_THROWS_AS(plan_tour(dup), ValidationError);
    AcoParams bad;
    bad.rho = 1.0;
    bad.n_ants = 0;
    try {
        bad.validate();
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.problems().size() == 2);
    }
    Rng rng(1);
    CHECK_THROWS(brute_force_tour(random_instance(11, rng)));
}

TEST_CASE("single waypoint") {
    WaypointSet ws{{{3, 4, 0}}, {0, 0, 0}};
    const Tour t = plan_tour(ws);
    CHECK(t.order == std::vector<std::size_t>{0});
    CHECK(t.length == doctest::Approx(5.0));
    CHECK(nearest_neighbor_tour(ws).length == t.length);
}

TEST_CASE("collinear points are visited in line order") {
    WaypointSet ws{{{3, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {0, 0, 0}};
    const Tour t = plan_tour(ws);
    CHECK(t.order == std::vector<std::size_t>{1, 2, 0});
    CHECK(t.length == doctest::Approx(3.0));
    CHECK(nearest_neighbor_tour(ws).length == doctest::Approx(3.0));
    CHECK(t.end == Point3{3, 0, 0});
}

TEST_CASE("brute force baselines") {
    WaypointSet two{{{5, 0, 0}, {1, 0, 0}}, {0, 0, 0}};
    CHECK(brute_force_tour(two).order == std::vector<std::size_t>{1, 0});
    // Square corners starting at one corner: follow the perimeter.
    WaypointSet square{{{1, 1, 0}, {0, 1, 0}, {1, 0, 0}}, {0, 0, 0}};
    CHECK(brute_force_tour(square).length == doctest::Approx(3.0));
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        const auto ws = random_instance(8, rng);
        CHECK(brute_force_tour(ws).length == doctest::Approx(oracle::exhaustive_path_length(ws.points, ws.start)));
    }
}

TEST_CASE("ACO is deterministic and returns permutations") {
    Rng rng(4);
    const auto ws = random_instance(40, rng);
    AcoParams params;
    params.iterations = 50;
    params.seed = 77;
    const Tour a = plan_tour(ws, params);
    const Tour b = plan_tour(ws, params);
    CHECK(a.order == b.order);
    CHECK(a.length == b.length);
    CHECK(is_permutation(a.order, ws.points.size()));
    CHECK(a.length == doctest::Approx(tour_length(a.order, ws)));
}

TEST_CASE("candidate lists smaller than the instance still give full tours") {
    Rng rng(14);
    const auto ws = random_instance(300, rng);
    AcoParams params;
    params.iterations = 20;
    params.candidates = 5;
    const Tour t = plan_tour(ws, params);
    CHECK(is_permutation(t.order, ws.points.size()));
    CHECK(t.length <= 1.25 * nearest_neighbor_tour(ws).length);
}

TEST_CASE("ACO reaches the optimum on most small instances") {
    Rng rng(2024);
    int optimal = 0;
    const int trials = 50;
    for (int i = 0; i < trials; ++i) {
        const auto ws = random_instance(8, rng);
        AcoParams params;
        params.seed = static_cast<std::uint64_t>(i + 1);
        if (plan_tour(ws, params).length <= brute_force_tour(ws).length * (1 + 1e-9)) ++optimal;
    }
    CHECK(optimal >= 40);
}

TEST_CASE("ACO beats nearest neighbour on 15-point instances") {
    Rng rng(15);
    int wins = 0;
    double aco_total = 0.0;
    double nn_total = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto ws = random_instance(15, rng);
        AcoParams params;
        params.seed = static_cast<std::uint64_t>(i + 1);
        const double aco = plan_tour(ws, params).length;
        const double nn = nearest_neighbor_tour(ws).length;
        wins += aco <= nn;
        aco_total += aco;
        nn_total += nn;
    }
    CHECK(wins >= 90);
    CHECK(aco_total <= nn_total);
}
