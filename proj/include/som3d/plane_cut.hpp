#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace som3d {

/// A locally planar boundary slicing one cube of side `eps`.
///
/// The plane meets the cube's bottom face along a line at distance `x` from
/// the corner vertex O, turned by `theta` from the horizontal edge. `alpha`
/// is the plane's tilt away from the vertical, so the trace on the top face is
/// shifted towards O by eps*tan(alpha). In cube coordinates the small side is
///
///     sin(theta) px + cos(theta) py + tan(alpha) pz <= x.
///
/// Valid for theta, alpha in [0, pi/4] and 0 <= x <= x1 + x2 + a, the offset
/// at which the plane passes through the cube center.
struct PlaneCutParams {
    double x = 0.0;
    double theta = 0.0;
    double alpha = 0.0;
    double eps = 1.0;
};

/// Derived lengths of the cut.
struct CutGeometry {
    double x1 = 0.0;  // eps sin(theta): nearest bottom vertex besides O
    double x2 = 0.0;  // [sqrt(2)/2 eps sin(theta + pi/4) - eps sin(theta)]^+
    double a = 0.0;   // eps tan(alpha) / 2
    double h = 0.0;   // x cos(alpha): distance from O to the plane

    static CutGeometry of(const PlaneCutParams& p);

    double max_offset() const { return x1 + x2 + a; }
};

/// Shape families of the cut polygon, split on a vs x2 and 2a vs x1.
enum class CutFamily {
    narrow_shallow,  // a <  x2, 2a <  x1
    narrow_steep,    // a <  x2, 2a >= x1
    wide_shallow,    // a >= x2, 2a <  x1
    wide_steep,      // a >= x2, 2a >= x1
};

CutFamily cut_family(double theta, double alpha);

/// Largest valid offset for (theta, alpha, eps).
double max_offset(double theta, double alpha, double eps);

/// Throws ValidationError when the parameters are outside the valid region.
void validate(const PlaneCutParams& p);

/// Length of the plane's trace on the bottom face, for 0 <= x <= x1 + x2.
double chord_length(const PlaneCutParams& p);

/// Area of the cut polygon inside the cube.
double cut_area(const PlaneCutParams& p);

/// (h/3)(S_a + S_b + sqrt(S_a S_b)): frustum of a pyramid with similar faces.
double frustum_volume(double top_area, double bottom_area, double height);

/// Volume of the part of the cube on the vertex-O side of the plane.
double small_side_volume(const PlaneCutParams& p);

/// small_side_volume / eps^3.
double cut_rpe(const PlaneCutParams& p);

/// Offsets in (0, max_offset) where cut_area changes formula.
std::vector<double> branch_points(double theta, double alpha, double eps);

struct CutEvaluation {
    double area = 0.0;
    double volume = 0.0;
    double rpe = 0.0;
    bool above_half = false;  // rpe > 1/2 beyond rounding; signals a numerical problem
};

CutEvaluation evaluate_cut(const PlaneCutParams& p);

/// Densities of the cut parameters. The x density is conditional on theta
/// and supported on [x_lower(theta, eps), x_upper(theta, eps)]; an empty
/// x_lower means 0.
struct ParameterDistributions {
    std::function<double(double x, double theta, double eps)> pdf_x;
    std::function<double(double theta, double eps)> x_lower;
    std::function<double(double theta, double eps)> x_upper;
    std::function<double(double theta)> pdf_theta;
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    std::function<double(double alpha)> pdf_alpha;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;

    /// x uniform on [0, sqrt(2)/2 eps sin(theta + pi/4)], theta and alpha
    /// uniform on [0, pi/4].
    static ParameterDistributions uniform();

    /// Uniform on a small box around one valid (x, theta, alpha) point.
    static ParameterDistributions concentrated(const PlaneCutParams& at, double half_width);

    /// Throws ValidationError if a density does not integrate to 1.
    void validate(double eps) const;
};

struct CutExpectations {
    double area = 0.0;  // E[S_i]
    double rpe = 0.0;   // E[P_e,i]
};

/// E[cut_area] and E[cut_rpe] by nested adaptive Gauss-Kronrod quadrature,
/// split at case-family boundaries in theta and branch points in x.
CutExpectations expected_cut_quantities(const ParameterDistributions& dists, double eps, double rel_tol = 1e-4);

/// Published value of the uniform-density constant.
inline constexpr double kPublishedTheorem2Constant = 0.1649;

/// Q = eps^2 E[P_e,i] / E[S_i] under the uniform densities (quadrature).
double theorem2_constant(double eps = 1.0);

struct ConstantEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Sampling estimate of the same constant. Each draw is evaluated with the
/// closed-form cube/half-space measures rather than the piecewise formulas,
/// so it checks the quadrature path independently.
ConstantEstimate theorem2_constant_sampled(std::uint64_t samples, std::uint64_t seed, double eps = 1.0);

/// Q (S / L^2) M^(-1/3).
double predicted_rpe(double surface_area, double region_edge, double cube_count, double q);

}  // namespace som3d
