#pragma once

#include <string>
#include <vector>

#include "hypolymin/center.hpp"
#include "hypolymin/lorentz.hpp"

namespace hypolymin {

// Prescribed interior angles beta_1..beta_n, each in (0, pi), n >= 1.
struct AngleSpec {
    std::vector<double> beta;

    int n() const { return static_cast<int>(beta.size()); }
};

// Throws infeasible_spec when the angles are out of range or (cone case) the
// parameter space is empty: a cone center requires alpha + sum(beta) < n*pi.
void validate_spec(CenterKind kind, const AngleSpec& spec);

// Chart coordinates of a polygon around the center: basepoint position l0 on
// the chart geodesic, initial direction angle theta (measured clockwise from
// g'(l0), stored in [0, 2pi)), and edge lengths l_1..l_n >= 0. Interior
// points of the parameter space have all lengths positive; the closure allows
// zero lengths and, for a cone, l0 = 0.
struct PolygonParams {
    double l0 = 0.0;
    double theta = 0.0;
    std::vector<double> lengths;

    int n() const { return static_cast<int>(lengths.size()); }
    double perimeter() const;
};

// Normalizes theta into [0, 2pi).
double wrap_angle(double theta);

// Developed realization: n vertices (vertex 0 = q0 = g(l0)), oriented edge
// lines e_1..e_n (outward normals; edge i joins vertex i-1 to vertex i), the
// start frame v and end frame w of the development, and the perimeter.
struct Polygon {
    std::vector<Vec3L> vertices;
    std::vector<Vec3L> edge_lines;
    Isometry start_frame, end_frame;
    double perimeter = 0.0;
};

// Frame at g(l0) whose direction makes angle theta (clockwise) with g'(l0).
// theta = 0 gives the frame moving along the chart geodesic.
Isometry map_v(const CenterFrame& cf, double l0, double theta);

// Development of the polygonal path: from map_v, alternately translate by l_i
// and turn left by the exterior angle pi - beta_i, ending with the final turn.
Isometry map_w(const CenterFrame& cf, const PolygonParams& params, const AngleSpec& spec);

// Closure mismatch in logarithm coordinates: the polygon closes up around the
// center exactly when map_w equals gamma o map_v. Returns log of the error
// isometry, chosen so that its Jacobian is the matrix of jacobian_M below.
// Throws out_of_chart when the mismatch rotation is near a half-turn.
Vec3L closure_residual(const CenterFrame& cf, const PolygonParams& params, const AngleSpec& spec);

// Norm helper for residual vectors.
double norm3(const Vec3L& v);

// Derivative of the closure residual at a closed configuration, as the
// 3 x (n+2) matrix with columns
//   M_1 = (1 - gamma) e0,  M_2 = (1 - gamma) q0,  M_{2+i} = e_i.
// Away from closed points the same columns serve as the Gauss-Newton model.
struct JacobianM {
    std::vector<Vec3L> cols;  // n + 2 columns

    int n_cols() const { return static_cast<int>(cols.size()); }
};

JacobianM jacobian_M(const CenterFrame& cf, const PolygonParams& params, const AngleSpec& spec);

// Develops the polygon geometry. Requires closure residual <= eps_res (throws
// std::invalid_argument otherwise): the Polygon type represents closed
// polygons only.
Polygon develop_polygon(const CenterFrame& cf, const PolygonParams& params,
                        const AngleSpec& spec, double eps_res = 1e-9);

// Membership diagnostics for a developed polygon:
//   convex_side:     every edge line has the center on its convex side, i.e.
//                    sign(<e_i, x0>) = membership_sign(kind) strictly;
//   winding:         vertices strictly monotone in the angular coordinate
//                    around the center with total advance one period (the
//                    polygon winds once, all turns consistent);
//   positive_lengths: all l_i > 0 (boundary configurations fail this one).
// pass() is the conjunction; `violations` lists human-readable findings.
struct MembershipReport {
    bool convex_side = false;
    bool winding = false;
    bool positive_lengths = false;
    std::vector<std::string> violations;

    bool pass() const { return convex_side && winding && positive_lengths; }
};

MembershipReport validate_membership(const CenterFrame& cf, const Polygon& poly);

// Angular coordinate of a point around the center, used by the winding check
// and the boundary machinery: rotation angle about a cone point, horocyclic
// parameter (period 1) for a cusp, signed position along the axis for a
// geodesic center.
double angular_coordinate(const CenterFrame& cf, const Vec3L& point);

// One period of the angular coordinate under the holonomy.
double angular_period(const CenterFrame& cf);

} // namespace hypolymin
