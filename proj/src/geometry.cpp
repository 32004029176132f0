#include "som3d/geometry.hpp"

#include "som3d/error.hpp"
#include "som3d/random.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace som3d {

bool Scene::in_region(Point3 p) const {
    const Point3 hi = region_origin + Point3{region_edge, region_edge, region_edge};
    return p.x >= region_origin.x && p.x <= hi.x && p.y >= region_origin.y && p.y <= hi.y &&
           p.z >= region_origin.z && p.z <= hi.z;
}

Scene& Scene::add_network(Point3 center, double radius) {
    networks.push_back({network_count() + 1, center, radius});
    return *this;
}

void Scene::validate() const {
    std::vector<std::string> problems;
    if (!region_origin.finite()) problems.emplace_back("region origin must be finite");
    if (!(std::isfinite(region_edge) && region_edge > 0.0)) problems.emplace_back("region edge must be positive and finite");
    if (network_count() > kMaxNetworks) problems.emplace_back("at most 63 licensed networks are supported");
    for (std::size_t i = 0; i < networks.size(); ++i) {
        const auto& net = networks[i];
        const std::string tag = "network " + std::to_string(i + 1);
        if (net.id != static_cast<int>(i) + 1) problems.push_back(tag + ": ids must be contiguous from 1");
        if (!net.center.finite()) problems.push_back(tag + ": center must be finite");
        if (!(std::isfinite(net.radius) && net.radius > 0.0)) problems.push_back(tag + ": radius must be positive");
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

int detect(const Scene& scene, int k, Point3 p) {
    if (k < 1 || k > scene.network_count()) {
        throw std::out_of_range("unknown network id " + std::to_string(k));
    }
    return scene.networks[static_cast<std::size_t>(k - 1)].contains(p) ? 1 : 0;
}

RadioParameter radio_parameter_at(const Scene& scene, Point3 p) {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < scene.networks.size(); ++k) {
        if (scene.networks[k].contains(p)) bits |= std::uint64_t{1} << k;
    }
    return RadioParameter{bits};
}

AreaEstimate boundary_surface_area(const Scene& scene, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("boundary_surface_area: samples must be >= 1");

    AreaEstimate total;
    double variance = 0.0;
    for (const auto& net : scene.networks) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(net.id)}));
        std::uint64_t inside = 0;
        for (std::uint64_t s = 0; s < samples; ++s) {
            const double z = 2.0 * uniform01(rng) - 1.0;
            const double phi = 2.0 * std::numbers::pi * uniform01(rng);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const Point3 p = net.center + net.radius * Point3{rho * std::cos(phi), rho * std::sin(phi), z};
            if (scene.in_region(p)) ++inside;
        }
        const double full = 4.0 * std::numbers::pi * net.radius * net.radius;
        const double frac = static_cast<double>(inside) / static_cast<double>(samples);
        total.value += full * frac;
        variance += full * full * frac * (1.0 - frac) / static_cast<double>(samples);
    }
    total.std_error = std::sqrt(variance);
    return total;
}

}  // namespace som3d
