#pragma once

#include "hypolymin/center.hpp"

namespace hypolymin {

// Topological type of a punctured surface: genus g >= 0 and p >= 1 punctures,
// with p >= 3 when g = 0 (negative Euler characteristic).
struct SurfaceType {
    int genus = 0;
    int punctures = 0;
};

// Throws std::domain_error for invalid (g, p).
void validate_surface(const SurfaceType& st);

// Edge count of a minimal spine: -3 chi = 3 (2g + p - 2).
int spine_edge_count(const SurfaceType& st);

// Lower bound for the total length of a spine: 3 (2g + p - 2) log 3, realized
// by trivalent geodesic graphs with all angles 2pi/3.
double spine_lower_bound(const SurfaceType& st);

// Minimal perimeter of an n-gon with all angles 2pi/3 around one end of the
// given kind: n log 3 for a cusp (closed form); for cone/geodesic ends the
// assembled optimal perimeter, which strictly exceeds the cusp value. Throws
// infeasible_spec when a cone angle violates feasibility for that n.
double per_end_minimum(int n, CenterKind kind);

} // namespace hypolymin
