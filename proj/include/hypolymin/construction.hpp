#pragma once

#include "hypolymin/optimizer.hpp"
#include "hypolymin/polygon.hpp"

namespace hypolymin {

// Edge length of the optimal cusp polygon at interior angle beta, independent
// of the number of edges: 2 asinh(cot(beta/2)). Strictly decreasing, +inf as
// beta -> 0, 0 as beta -> pi. Throws std::domain_error outside (0, pi).
double cusp_edge_length(double beta);

// Tangent length: distance from a vertex of interior angle beta to the point
// where either adjacent edge touches the inscribed equidistant at the given
// level. Kind-dependent right-triangle (cone), ideal-triangle (cusp), and
// Lambert-quadrilateral (geodesic) relations.
double block_tangent_length(CenterKind::Tag kind, EquidistantLevel level, double beta);

// Width one tangency block consumes around the center: the angle subtended at
// a cone point, the parabolic parameter for a cusp, the length along the core
// geodesic's axis for a geodesic. Level domains: c < 0 (cone, c = -sinh r),
// c < 0 (cusp, c = -h), c > 1 (geodesic, c = cosh a). Throws infeasible_block
// when the block cannot exist at that level (geodesic level |c| <= 1) and
// std::domain_error for out-of-range beta or a level sign outside the kind's
// domain.
double block_width(CenterKind::Tag kind, EquidistantLevel level, double beta);

// Level of the inscribed equidistant of the optimal polygon: the unique level
// whose block widths sum to one holonomy period (cone: sum = alpha, geodesic:
// sum = r, by monotone bisection with Newton polish; cusp: closed form
// c = -2 sum(cos(beta_i/2))). Solved-equation residual <= 1e-12.
EquidistantLevel solve_equidistant_level(const CenterFrame& cf, const AngleSpec& spec);

struct ConstructionResult {
    PolygonParams params;
    Polygon polygon;
    EquidistantLevel level;
    double perimeter = 0.0;
    double residual_norm = 0.0;   // closure residual of the assembly
    double tangency_spread = 0.0; // inscribed-equidistant certificate
};

// Assembles the optimal polygon directly from tangency blocks: solves the
// level, places vertex 0 above the bisector of its angle, develops, and
// certifies (closure residual, tangency spread, membership). Throws
// infeasible_spec for empty parameter spaces.
ConstructionResult construct_optimal(const CenterFrame& cf, const AngleSpec& spec);

// Recovers chart coordinates from edge lengths and angles: unfolds the open
// polygonal path, requires its end-to-end isometry to be conjugate to the
// center's holonomy (same type and parameter), normalizes the conjugacy to
// the canonical frame, and slides along the centralizer to put vertex 0 on
// the chart geodesic. Verifies closure and membership of the result. Throws
// reconstruction_infeasible when no holonomy of the prescribed type joins the
// end frames or the joined polygon fails membership (the input data is
// necessary, not sufficient).
PolygonParams reconstruct_from_lengths(CenterKind kind, const AngleSpec& spec,
                                       const std::vector<double>& lengths);

} // namespace hypolymin
