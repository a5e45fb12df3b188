#pragma once

#include <vector>

#include "hypolymin/lorentz.hpp"

namespace hypolymin {

// The distinguished object a polygon encloses: a cusp, a cone point of angle
// alpha in (0, 2pi), or a closed geodesic of length r > 0.
struct CenterKind {
    enum class Tag { cusp, cone, geodesic };
    Tag tag = Tag::cusp;
    double param = 0.0;  // cone angle alpha, geodesic length r; unused for cusp

    static CenterKind cusp() { return {Tag::cusp, 0.0}; }
    static CenterKind cone(double alpha);     // requires 0 < alpha < 2pi
    static CenterKind geodesic(double r);     // requires r > 0
};

// Canonical Lorentz model of the center:
//   x0:    the center's representative (lightlike / the cone point itself /
//          the core geodesic's line vector),
//   e0:    base line with <e0, x0> = 0, fixed to (0,0,-1),
//   p0:    base point (1,0,0) on e0,
//   gamma: the holonomy fixing x0 (parabolic / rotation by alpha / loxodromic
//          of length r along the core geodesic).
// The chart geodesic g(s) = (cosh s, sinh s, 0) satisfies g(0) = p0 and lies
// on e0; for the cusp, g(-inf) is the ideal class of x0.
struct CenterFrame {
    CenterKind kind;
    Vec3L x0, e0, p0;
    Isometry gamma;
};

// Builds the canonical frame. Throws std::domain_error for out-of-range
// parameters (delegated to CenterKind constructors when used directly).
CenterFrame make_center(CenterKind kind);

// Chart interval for the basepoint coordinate l0: [0, inf) for a cone,
// (0, inf) for a geodesic, all of R for a cusp.
bool l0_in_domain(const CenterFrame& cf, double l0);

// q0 = g(l0), the polygon's first vertex position. Throws std::domain_error
// outside the chart interval.
Vec3L base_point(const CenterFrame& cf, double l0);

// Velocity g'(l0) of the chart geodesic, unit spacelike.
Vec3L base_velocity(const CenterFrame& cf, double l0);

// Tangency functional per line: <e_i, x0>. The lines are all tangent to a
// single equidistant of the center exactly when these values coincide,
// including sign. Expected sign of a polygon edge around the center: negative
// for cusp and cone (value -h resp. -sinh(distance)), positive for a geodesic
// (value +cosh(distance)).
std::vector<double> equidistant_values(const CenterFrame& cf, const std::vector<Vec3L>& lines);

// max - min of equidistant_values; zero iff an inscribed equidistant exists.
// Throws std::invalid_argument on an empty list.
double tangency_spread(const CenterFrame& cf, const std::vector<Vec3L>& lines);

// Signed tangency level c = <e_i, x0> of an equidistant. Valid domains:
// c < 0 for cusp and cone (c = -h resp. -sinh(distance)), c > 1 for a
// geodesic (c = cosh(distance)).
struct EquidistantLevel {
    double c = 0.0;
};

// Expected sign of <e_i, x0> for polygon edges around this center kind:
// -1 for cusp/cone, +1 for geodesic.
double membership_sign(CenterKind::Tag tag);

} // namespace hypolymin
