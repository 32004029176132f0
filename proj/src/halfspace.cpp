#include "som3d/halfspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace som3d {
namespace {

constexpr double kNegligible = 1e-5;

struct Reduced {
    double w[3];
    int active = 0;  // number of significant components
    int inert = 0;   // dimensions the plane is parallel to
};

Reduced reduce(const std::array<double, 3>& w) {
    for (double v : w) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("half-space normal must be finite and non-negative");
    }
    const double top = std::max({w[0], w[1], w[2]});
    if (top <= 0.0) throw std::invalid_argument("half-space normal must be non-zero");
    Reduced r;
    for (double v : w) {
        if (v > kNegligible * top) {
            r.w[r.active++] = v;
        } else {
            ++r.inert;
        }
    }
    return r;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// sum_v (-1)^|v| (c - edge * w.v)_+^power over the 2^active vertices.
double vertex_sum(const Reduced& r, double c, double edge, int power) {
    double total = 0.0;
    for (int mask = 0; mask < (1 << r.active); ++mask) {
        double shift = 0.0;
        int parity = 0;
        for (int d = 0; d < r.active; ++d) {
            if (mask & (1 << d)) {
                shift += r.w[d] * edge;
                parity ^= 1;
            }
        }
        const double t = c - shift;
        double term = 0.0;
        if (t > 0.0) term = (power == 0) ? 1.0 : std::pow(t, power);
        total += parity ? -term : term;
    }
    return total;
}

double product(const Reduced& r) {
    double p = 1.0;
    for (int d = 0; d < r.active; ++d) p *= r.w[d];
    return p;
}

}  // namespace

double box_halfspace_volume(std::array<double, 3> w, double c, double edge) {
    const Reduced r = reduce(w);
    const double inert = std::pow(edge, r.inert);
    const double v = vertex_sum(r, c, edge, r.active) / (factorial(r.active) * product(r));
    return std::clamp(inert * v, 0.0, edge * edge * edge);
}

double box_plane_section_area(std::array<double, 3> w, double c, double edge) {
    const Reduced r = reduce(w);
    const double inert = std::pow(edge, r.inert);
    const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    const double dv = vertex_sum(r, c, edge, r.active - 1) / (factorial(r.active - 1) * product(r));
    return std::max(0.0, inert * dv * norm);
}

}  // namespace som3d
