#pragma once

#include <array>

namespace som3d {

// Closed-form measures of an axis-aligned cube [0, edge]^3 cut by the
// half-space {p : w . p <= c}, via inclusion-exclusion over the cube's
// vertices. Requires w >= 0 componentwise; components that are negligible
// relative to the largest are treated as exactly zero.

double box_halfspace_volume(std::array<double, 3> w, double c, double edge);

/// Area of the section {w . p = c} through the cube.
double box_plane_section_area(std::array<double, 3> w, double c, double edge);

}  // namespace som3d
