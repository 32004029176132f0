#include "som3d/plane_cut.hpp"

#include "som3d/error.hpp"
#include "som3d/halfspace.hpp"
#include "som3d/random.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace som3d {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
// Below this tilt the 1/sin(alpha) terms are replaced by the vertical-prism form.
constexpr double kVerticalTilt = 1e-6;
constexpr double kOffsetSlack = 1e-12;

// Everything the piecewise formulas need, computed once per (theta, alpha, eps).
struct Frame {
    double eps, s, c, t, sin_a, cos_a;
    double x1, x2, a;
    double mid_chord;  // eps / cos(theta), chord across the middle band
    double far_start;  // x1 + 2 x2 = eps cos(theta)
    double far_end;    // eps (sin + cos): opposite bottom vertex
    CutFamily family;

    Frame(double theta, double alpha, double e)
        : eps(e),
          s(std::sin(theta)),
          c(std::cos(theta)),
          t(std::tan(alpha)),
          sin_a(std::sin(alpha)),
          cos_a(std::cos(alpha)),
          x1(e * s),
          x2(std::max(0.0, std::numbers::sqrt2 / 2.0 * e * std::sin(theta + kQuarterPi) - e * s)),
          a(e * t / 2.0),
          mid_chord(e / c),
          far_start(x1 + 2.0 * x2),
          far_end(e * (s + c)),
          family(a < x2 ? (2.0 * a < x1 ? CutFamily::narrow_shallow : CutFamily::narrow_steep)
                        : (2.0 * a < x1 ? CutFamily::wide_shallow : CutFamily::wide_steep)) {}

    double x_max() const { return x1 + x2 + a; }
    bool vertical() const { return sin_a < kVerticalTilt; }

    // d * (tan + cot) written as d / (sin cos) so theta = 0 never forms inf * 0.
    double corner_chord(double d) const { return d <= 0.0 ? 0.0 : d / (s * c); }

    // Trace length on the bottom face at distance d from O.
    double chord(double d) const {
        if (d <= 0.0 || d >= far_end) return 0.0;
        if (d <= x1) return corner_chord(d);
        if (d <= far_start) return mid_chord;
        return corner_chord(far_end - d);
    }

    // Integral of chord over [0, d].
    double chord_integral(double d) const {
        d = std::clamp(d, 0.0, far_end);
        if (d <= x1) return 0.5 * d * corner_chord(d);
        double total = 0.5 * x1 * mid_chord + (std::min(d, far_start) - x1) * mid_chord;
        if (d > far_start) total += 0.5 * (d - far_start) * (mid_chord + corner_chord(far_end - d));
        return total;
    }

    // Intermediate A: in-plane height of the corner-triangle band.
    double band_a(double x) const { return (x1 - (x - 2.0 * a)) / sin_a; }
    // Intermediate B: in-plane height of the far-corner band (zero until the
    // bottom trace passes eps cos(theta)).
    double band_b(double x) const { return std::max(0.0, x - far_start) / sin_a; }

    double triangle(double x) const { return 0.5 * x * corner_chord(x) / sin_a; }
    double trapezoid(double x) const { return corner_chord(x - a) * eps / cos_a; }
    double parallelogram() const { return mid_chord * eps / cos_a; }

    // Top trace inside the corner triangle, bottom trace in the middle band or beyond.
    double pentagon(double x) const {
        const double A = band_a(x);
        const double B = band_b(x);
        const double top_chord = corner_chord(x - 2.0 * a);
        double area = 0.5 * (top_chord + mid_chord) * A + mid_chord * (eps / cos_a - A - B);
        if (B > 0.0) area += 0.5 * (corner_chord(far_end - x) + mid_chord) * B;
        return area;
    }

    // Bottom trace past x1 before the plane reaches the top face.
    double open_wedge(double x) const {
        const double B = band_b(x);
        double area = 0.5 * x1 * mid_chord / sin_a + mid_chord * (x - x1) / sin_a - mid_chord * B;
        if (B > 0.0) area += 0.5 * (corner_chord(far_end - x) + mid_chord) * B;
        return area;
    }

    double area(double x) const {
        if (x <= 0.0) return 0.0;
        if (vertical()) return eps * chord(x) / cos_a;
        switch (family) {
            case CutFamily::narrow_shallow:
                if (x <= 2.0 * a) return triangle(x);
                if (x <= x1) return trapezoid(x);
                if (x <= x1 + 2.0 * a) return pentagon(x);
                return parallelogram();
            case CutFamily::narrow_steep:
                if (x <= x1) return triangle(x);
                if (x <= 2.0 * a) return open_wedge(x);
                if (x <= x1 + 2.0 * a) return pentagon(x);
                return parallelogram();
            case CutFamily::wide_shallow:
                if (x <= 2.0 * a) return triangle(x);
                if (x <= x1) return trapezoid(x);
                return pentagon(x);
            case CutFamily::wide_steep:
                if (x <= x1) return triangle(x);
                if (x <= 2.0 * a) return open_wedge(x);
                return pentagon(x);
        }
        return 0.0;
    }

    std::vector<double> breaks() const {
        std::vector<double> out;
        const double top = x_max();
        for (double b : {2.0 * a, x1, x1 + 2.0 * a, far_start}) {
            if (b > 0.0 && b < top) out.push_back(b);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // Staged volume: a pyramid up to the first break, then one prismatoid per
    // stage. The area is at most quadratic in x inside every stage, so the
    // prismatoid rule is exact there.
    double volume(double x) const {
        if (x <= 0.0) return 0.0;
        if (vertical()) return eps * chord_integral(x);
        const auto stops = breaks();
        double total = 0.0;
        double lo = 0.0;
        if (x1 > 0.0) {
            // Corner tetrahedron: a pyramid over the triangular section.
            lo = stops.empty() ? x : std::min(x, stops.front());
            total = frustum_volume(0.0, area(lo), lo * cos_a);
        }
        for (std::size_t i = 0; i <= stops.size() && lo < x; ++i) {
            const double hi = (i < stops.size()) ? std::min(x, stops[i]) : x;
            if (hi <= lo) continue;
            const double mid = 0.5 * (lo + hi);
            total += cos_a * (hi - lo) / 6.0 * (area(lo) + 4.0 * area(mid) + area(hi));
            lo = hi;
        }
        return total;
    }
};

void check_angles(double theta, double alpha, double eps, std::vector<std::string>& problems) {
    if (!(theta >= 0.0 && theta <= kQuarterPi)) problems.emplace_back("theta must lie in [0, pi/4]");
    if (!(alpha >= 0.0 && alpha <= kQuarterPi)) problems.emplace_back("alpha must lie in [0, pi/4]");
    if (!(std::isfinite(eps) && eps > 0.0)) problems.emplace_back("eps must be positive");
}

Frame checked_frame(const PlaneCutParams& p, double& x) {
    validate(p);
    Frame f(p.theta, p.alpha, p.eps);
    x = std::min(p.x, f.x_max());
    return f;
}

}  // namespace

CutGeometry CutGeometry::of(const PlaneCutParams& p) {
    const Frame f(p.theta, p.alpha, p.eps);
    return {f.x1, f.x2, f.a, p.x * f.cos_a};
}

CutFamily cut_family(double theta, double alpha) { return Frame(theta, alpha, 1.0).family; }

double max_offset(double theta, double alpha, double eps) { return Frame(theta, alpha, eps).x_max(); }

void validate(const PlaneCutParams& p) {
    std::vector<std::string> problems;
    check_angles(p.theta, p.alpha, p.eps, problems);
    if (problems.empty()) {
        const double top = max_offset(p.theta, p.alpha, p.eps);
        if (!(p.x >= 0.0 && p.x <= top * (1.0 + kOffsetSlack))) problems.emplace_back("x must lie in [0, x1 + x2 + a]");
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

double chord_length(const PlaneCutParams& p) {
    std::vector<std::string> problems;
    check_angles(p.theta, p.alpha, p.eps, problems);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    const Frame f(p.theta, p.alpha, p.eps);
    const double top = f.x1 + f.x2;
    if (!(p.x >= 0.0 && p.x <= top * (1.0 + kOffsetSlack))) throw ValidationError("chord_length: x must lie in [0, x1 + x2]");
    return f.chord(std::min(p.x, top));
}

double cut_area(const PlaneCutParams& p) {
    double x = 0.0;
    const Frame f = checked_frame(p, x);
    return f.area(x);
}

double frustum_volume(double top_area, double bottom_area, double height) {
    if (!(top_area >= 0.0 && bottom_area >= 0.0 && height >= 0.0)) {
        throw std::invalid_argument("frustum_volume: areas and height must be non-negative");
    }
    return height / 3.0 * (top_area + bottom_area + std::sqrt(top_area * bottom_area));
}

double small_side_volume(const PlaneCutParams& p) {
    double x = 0.0;
    const Frame f = checked_frame(p, x);
    return f.volume(x);
}

double cut_rpe(const PlaneCutParams& p) { return small_side_volume(p) / (p.eps * p.eps * p.eps); }

std::vector<double> branch_points(double theta, double alpha, double eps) {
    std::vector<std::string> problems;
    check_angles(theta, alpha, eps, problems);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return Frame(theta, alpha, eps).breaks();
}

CutEvaluation evaluate_cut(const PlaneCutParams& p) {
    double x = 0.0;
    const Frame f = checked_frame(p, x);
    CutEvaluation out;
    out.area = f.area(x);
    out.volume = f.volume(x);
    out.rpe = out.volume / (p.eps * p.eps * p.eps);
    out.above_half = out.rpe > 0.5 + 1e-12;
    return out;
}

ParameterDistributions ParameterDistributions::uniform() {
    ParameterDistributions d;
    d.x_upper = [](double theta, double eps) {
        return std::numbers::sqrt2 / 2.0 * eps * std::sin(theta + kQuarterPi);
    };
    d.pdf_x = [upper = d.x_upper](double x, double theta, double eps) {
        const double hi = upper(theta, eps);
        return (x >= 0.0 && x <= hi) ? 1.0 / hi : 0.0;
    };
    d.pdf_theta = [](double) { return 1.0 / kQuarterPi; };
    d.theta_lo = 0.0;
    d.theta_hi = kQuarterPi;
    d.pdf_alpha = [](double) { return 1.0 / kQuarterPi; };
    d.alpha_lo = 0.0;
    d.alpha_hi = kQuarterPi;
    return d;
}

ParameterDistributions ParameterDistributions::concentrated(const PlaneCutParams& at, double half_width) {
    som3d::validate(at);
    const double w = half_width;
    ParameterDistributions d;
    d.theta_lo = std::max(0.0, at.theta - w);
    d.theta_hi = std::min(kQuarterPi, at.theta + w);
    d.alpha_lo = std::max(0.0, at.alpha - w);
    d.alpha_hi = std::min(kQuarterPi, at.alpha + w);
    const double xw = w * at.eps;
    const double x_lo = std::max(0.0, at.x - xw);
    const double x_hi = at.x + xw;
    d.x_lower = [x_lo](double, double) { return x_lo; };
    d.x_upper = [x_hi](double, double) { return x_hi; };
    d.pdf_x = [x_lo, x_hi](double x, double, double) { return (x >= x_lo && x <= x_hi) ? 1.0 / (x_hi - x_lo) : 0.0; };
    d.pdf_theta = [lo = d.theta_lo, hi = d.theta_hi](double) { return 1.0 / (hi - lo); };
    d.pdf_alpha = [lo = d.alpha_lo, hi = d.alpha_hi](double) { return 1.0 / (hi - lo); };
    return d;
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr unsigned kMaxDepth = 12;

template <class F>
double integrate(F&& f, double lo, double hi, double tol) {
    if (!(hi > lo)) return 0.0;
    return Kronrod::integrate(f, lo, hi, kMaxDepth, tol);
}

double x_lower_of(const ParameterDistributions& d, double theta, double eps) {
    return d.x_lower ? d.x_lower(theta, eps) : 0.0;
}

}  // namespace

void ParameterDistributions::validate(double eps) const {
    std::vector<std::string> problems;
    if (!pdf_x || !x_upper || !pdf_theta || !pdf_alpha) {
        throw ValidationError("parameter distributions: every density must be set");
    }
    if (!(theta_lo >= 0.0 && theta_hi <= kQuarterPi && theta_lo < theta_hi)) problems.emplace_back("theta support must lie in [0, pi/4]");
    if (!(alpha_lo >= 0.0 && alpha_hi <= kQuarterPi && alpha_lo < alpha_hi)) problems.emplace_back("alpha support must lie in [0, pi/4]");
    if (!problems.empty()) throw ValidationError(std::move(problems));

    constexpr double kTol = 1e-3;
    const double theta_mass = integrate(pdf_theta, theta_lo, theta_hi, 1e-8);
    if (std::abs(theta_mass - 1.0) > kTol) problems.push_back("theta density integrates to " + std::to_string(theta_mass));
    const double alpha_mass = integrate(pdf_alpha, alpha_lo, alpha_hi, 1e-8);
    if (std::abs(alpha_mass - 1.0) > kTol) problems.push_back("alpha density integrates to " + std::to_string(alpha_mass));
    for (int i = 0; i < 5; ++i) {
        const double theta = theta_lo + (theta_hi - theta_lo) * (i + 0.5) / 5.0;
        const double lo = x_lower_of(*this, theta, eps);
        const double hi = x_upper(theta, eps);
        if (!(lo >= 0.0 && hi > lo)) {
            problems.emplace_back("x support must be a non-empty interval starting at or above 0");
            break;
        }
        if (hi > max_offset(theta, alpha_lo, eps) * (1.0 + 1e-9)) {
            problems.emplace_back("x support exceeds the half-cube offset");
            break;
        }
        const double mass = integrate([&](double x) { return pdf_x(x, theta, eps); }, lo, hi, 1e-8);
        if (std::abs(mass - 1.0) > kTol) {
            problems.push_back("x density integrates to " + std::to_string(mass));
            break;
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

CutExpectations expected_cut_quantities(const ParameterDistributions& dists, double eps, double rel_tol) {
    if (!(std::isfinite(eps) && eps > 0.0)) throw ValidationError("eps must be positive");
    dists.validate(eps);
    const double inner_tol = rel_tol * 1e-2;
    const double middle_tol = rel_tol * 1e-1;

    // E[field | theta, alpha], integrated piecewise between branch points.
    auto conditional = [&](double theta, double alpha, bool want_rpe) {
        const Frame f(theta, alpha, eps);
        const double lo = x_lower_of(dists, theta, eps);
        const double hi = std::min(dists.x_upper(theta, eps), f.x_max());
        std::vector<double> cuts{lo};
        for (double b : f.breaks()) {
            if (b > lo && b < hi) cuts.push_back(b);
        }
        cuts.push_back(hi);
        const double scale = want_rpe ? 1.0 / (eps * eps * eps) : 1.0;
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            total += integrate(
                [&](double x) {
                    const double value = want_rpe ? f.volume(x) * scale : f.area(x);
                    return value * dists.pdf_x(x, theta, eps);
                },
                cuts[i], cuts[i + 1], inner_tol);
        }
        return total;
    };

    // Every (theta, alpha) cell lands in exactly one family; integrate each
    // family's theta range separately so the integrand is smooth per piece.
    auto over_theta = [&](double alpha, bool want_rpe) {
        const double t = std::tan(alpha);
        std::vector<double> cuts{dists.theta_lo};
        if (t <= std::sin(kQuarterPi)) cuts.push_back(std::asin(t));                     // 2a = x1
        if (t <= std::numbers::sqrt2) cuts.push_back(std::acos(t / std::numbers::sqrt2) - kQuarterPi);  // a = x2
        cuts.push_back(dists.theta_hi);
        std::sort(cuts.begin() + 1, cuts.end() - 1);
        double total = 0.0;
        double lo = dists.theta_lo;
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            const double hi = std::clamp(cuts[i], dists.theta_lo, dists.theta_hi);
            if (hi <= lo) continue;
            total += integrate([&](double theta) { return conditional(theta, alpha, want_rpe) * dists.pdf_theta(theta); }, lo,
                               hi, middle_tol);
            lo = hi;
        }
        return total;
    };

    auto expectation = [&](bool want_rpe) {
        return integrate([&](double alpha) { return over_theta(alpha, want_rpe) * dists.pdf_alpha(alpha); }, dists.alpha_lo,
                         dists.alpha_hi, rel_tol);
    };

    return {expectation(false), expectation(true)};
}

double theorem2_constant(double eps) {
    const auto e = expected_cut_quantities(ParameterDistributions::uniform(), eps, 1e-6);
    return eps * eps * e.rpe / e.area;
}

ConstantEstimate theorem2_constant_sampled(std::uint64_t samples, std::uint64_t seed, double eps) {
    if (samples < 2) throw std::invalid_argument("theorem2_constant_sampled: need at least 2 samples");
    if (!(std::isfinite(eps) && eps > 0.0)) throw std::invalid_argument("eps must be positive");
    Rng rng(derive_seed(seed, {0x7468326dULL}));
    std::vector<double> areas(samples);
    std::vector<double> rpes(samples);
    const double cube = eps * eps * eps;
    double area_sum = 0.0;
    double rpe_sum = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double theta = kQuarterPi * uniform01(rng);
        const double alpha = kQuarterPi * uniform01(rng);
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        const double x = uniform01(rng) * eps * (s + c) / 2.0;
        const std::array<double, 3> w{s, c, std::tan(alpha)};
        areas[i] = box_plane_section_area(w, x, eps);
        rpes[i] = box_halfspace_volume(w, x, eps) / cube;
        area_sum += areas[i];
        rpe_sum += rpes[i];
    }
    const double n = static_cast<double>(samples);
    const double mean_area = area_sum / n;
    const double q = eps * eps * (rpe_sum / n) / mean_area;
    // Delta-method standard error of the ratio estimator.
    double resid_sq = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double r = rpes[i] - q * areas[i] / (eps * eps);
        resid_sq += r * r;
    }
    const double sd = std::sqrt(resid_sq / (n - 1.0));
    return {q, eps * eps * sd / (mean_area * std::sqrt(n))};
}

double predicted_rpe(double surface_area, double region_edge, double cube_count, double q) {
    if (!(surface_area > 0.0 && region_edge > 0.0 && cube_count > 0.0 && q > 0.0)) {
        throw std::invalid_argument("predicted_rpe: inputs must be positive");
    }
    return q * surface_area / (region_edge * region_edge) / std::cbrt(cube_count);
}

}  // namespace som3d
