#pragma once

#include "som3d/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace som3d {

/// Measurement positions for one round plus the point the UAV departs from.
struct WaypointSet {
    std::vector<Point3> points;
    Point3 start;

    /// Throws ValidationError if empty or if two points coincide.
    void validate() const;
};

struct AcoParams {
    int n_ants = 20;
    double alpha_pher = 1.0;  // pheromone exponent
    double beta_heur = 3.0;   // inverse-distance exponent
    double rho = 0.1;         // evaporation rate
    double deposit = 1.0;
    int iterations = 200;
    std::uint64_t seed = 1;
    /// Nearest-neighbour candidates considered per city. Pheromone is kept
    /// only on candidate edges, so memory stays O(n * candidates).
    int candidates = 24;

    void validate() const;
};

/// Open path from `start` through every waypoint once.
struct Tour {
    std::vector<std::size_t> order;
    double length = 0.0;
    Point3 start;
    Point3 end;
};

/// Euclidean length of the path start -> points[order[0]] -> ...
/// Throws std::invalid_argument unless `order` is a permutation.
double tour_length(const std::vector<std::size_t>& order, const WaypointSet& ws);

/// Ant System: ants choose the next city with probability proportional to
/// tau^alpha_pher * (1/d)^beta_heur; after each iteration the best ant's path
/// is polished with 2-opt, all trails evaporate by rho and that path receives
/// deposit / length. Deterministic for a given seed.
Tour plan_tour(const WaypointSet& ws, const AcoParams& params = {});

/// Greedy closest-unvisited construction from the start point.
Tour nearest_neighbor_tour(const WaypointSet& ws);

inline constexpr std::size_t kBruteForceLimit = 10;

/// Exact shortest open path by enumerating permutations (at most 10 points).
Tour brute_force_tour(const WaypointSet& ws);

}  // namespace som3d
