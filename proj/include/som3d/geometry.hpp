#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <vector>

namespace som3d {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Point3 operator*(double s, Point3 p) { return {s * p.x, s * p.y, s * p.z}; }
    friend constexpr bool operator==(const Point3&, const Point3&) = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double squared_distance(Point3 a, Point3 b) {
    const Point3 d = a - b;
    return d.x * d.x + d.y * d.y + d.z * d.z;
}

inline double distance(Point3 a, Point3 b) { return std::sqrt(squared_distance(a, b)); }

/// Bitmask over the licensed networks: bit k-1 is set when network k is
/// detected. Up to 63 networks are representable.
struct RadioParameter {
    std::uint64_t value = 0;

    friend constexpr auto operator<=>(const RadioParameter&, const RadioParameter&) = default;
};

inline constexpr int kMaxNetworks = 63;

/// Spherical coverage volume of one licensed network.
struct LicensedNetwork {
    int id = 1;  // 1-based
    Point3 center;
    double radius = 1.0;

    bool contains(Point3 p) const { return squared_distance(p, center) <= radius * radius; }
};

/// Axis-aligned cubic region of edge `region_edge` starting at `region_origin`,
/// holding T licensed networks with ids 1..T in order.
struct Scene {
    Point3 region_origin;
    double region_edge = 1.0;
    std::vector<LicensedNetwork> networks;

    int network_count() const { return static_cast<int>(networks.size()); }

    /// Number of representable radio parameters, 2^T.
    std::uint64_t parameter_count() const { return std::uint64_t{1} << networks.size(); }

    bool in_region(Point3 p) const;

    /// Appends a sphere with the next free id.
    Scene& add_network(Point3 center, double radius);

    /// Throws ValidationError listing every broken invariant.
    void validate() const;
};

/// 1 when `p` is inside (or on the surface of) network `k`'s coverage.
/// Throws std::out_of_range for an unknown id.
int detect(const Scene& scene, int k, Point3 p);

RadioParameter radio_parameter_at(const Scene& scene, Point3 p);

struct AreaEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of the total boundary-surface area inside the region.
/// Each sphere contributes 4*pi*r^2 times the fraction of its surface that
/// falls inside the region; overlapping spheres all count. `samples` is per
/// sphere.
AreaEstimate boundary_surface_area(const Scene& scene, std::uint64_t samples, std::uint64_t seed);

}  // namespace som3d
