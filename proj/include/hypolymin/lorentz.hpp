#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace hypolymin {

// Vector of the Lorentz space R^{2,1} with bilinear form of signature (-,+,+).
// x0 is the timelike coordinate. Encodes, depending on its causal class:
//   timelike  (q < 0): a point of the hyperbolic plane when normalized to
//                      <v,v> = -1 on the upper sheet (x0 > 0),
//   spacelike (q > 0): an oriented geodesic line when normalized to <v,v> = +1
//                      (the vector is the outward normal of its halfplane),
//   lightlike (q = 0): a horocycle when future-pointing (x0 > 0); its
//                      projective class is an ideal point.
struct Vec3L {
    double x0 = 0.0, x1 = 0.0, x2 = 0.0;

    friend Vec3L operator+(Vec3L a, Vec3L b) { return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2}; }
    friend Vec3L operator-(Vec3L a, Vec3L b) { return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2}; }
    friend Vec3L operator*(double s, Vec3L v) { return {s * v.x0, s * v.x1, s * v.x2}; }
    friend Vec3L operator-(Vec3L v) { return {-v.x0, -v.x1, -v.x2}; }

    double operator[](int i) const { return i == 0 ? x0 : (i == 1 ? x1 : x2); }
};

enum class CausalClass { timelike, spacelike, lightlike };

// <u,v> = u^t J v with J = diag(-1, 1, 1).
double lorentz_dot(const Vec3L& u, const Vec3L& v);

// Euclidean norm, used only for scale-free classification and diagnostics.
double euclidean_norm(const Vec3L& v);

// Causal class of v, decided on v scaled to unit Euclidean norm so the test is
// scale-free. eps is the lightlike tolerance band around <v,v> = 0.
CausalClass classify(const Vec3L& v, double eps = 1e-9);

// Lorentz cross product, defined by <u (x) v, w> = det(u, v, w) for all w.
// Equals J applied to the Euclidean cross product.
Vec3L boxtimes(const Vec3L& u, const Vec3L& v);

// Orientation-preserving isometry of the hyperbolic plane as a matrix of
// SO_0(2,1) (preserves J, determinant one, preserves the upper sheet).
// Doubles as a frame of the unit tangent bundle: the identity is the frame at
// the point (1,0,0) with direction (0,1,0); columns are (point, direction,
// point (x) direction).
struct Isometry {
    std::array<std::array<double, 3>, 3> m{};

    static Isometry identity();

    Vec3L apply(const Vec3L& v) const;
    Vec3L column(int j) const { return {m[0][j], m[1][j], m[2][j]}; }

    // Inverse through the form: M^{-1} = J M^t J, exact for members of O(2,1).
    Isometry inverse() const;

    friend Isometry operator*(const Isometry& a, const Isometry& b);
};

// Defect diagnostics: max-norm of M^t J M - J and |det - 1|.
double form_defect(const Isometry& g);
double det_defect(const Isometry& g);

// One-parameter subgroup exp(t X_v) of SO_0(2,1) generated by v under the Lie
// algebra identification of R^{2,1} with so(2,1) (X_v w = w (x) v). Closed
// Rodrigues-type forms per causal class: trigonometric for timelike v
// (rotation about v), hyperbolic for spacelike v (translation along the line
// v), exact quadratic for lightlike v (parabolic fixing the ideal class of v).
// Fixes v as a vector. Normalization: exp_so21((0,1,0), t) maps (1,0,0) to
// (cosh t, 0, sinh t).
Isometry exp_so21(const Vec3L& v, double t);

// Principal logarithm in the same identification: returns u with
// exp_so21(u, 1) = g. Throws out_of_chart when the rotation part of g is too
// close to a half-turn (trace near -1), where the principal branch breaks down.
Vec3L log_so21(const Isometry& g);

// Incidence relations between normalized Lorentz vectors. The `value` field is
// always the raw product <u,v>; `measure` carries the derived distance/angle:
//   point_point:         measure = acosh(-value), the distance.
//   point_line:          measure = asinh(value), signed distance, negative
//                        exactly when the point lies in the line's halfplane.
//   horocycle_line:      measure = value; centered flag when value = 0 (line
//                        ends at the horocycle's ideal point), tangent flag
//                        when |value| = 1, negative sign when the halfplane
//                        contains the horodisc.
//   line_line_angle:     measure = acos(value), the oriented-normal angle of
//                        intersecting lines (|value| < 1).
//   line_line_disjoint:  measure = acosh(|value|), the distance; value > 0
//                        exactly when one halfplane contains the other
//                        (compatible orientations).
//   unclassified:        any pair involving a combination the table does not
//                        cover (e.g. point with horocycle); measure = value.
struct IncidenceReport {
    enum class Relation {
        point_point,
        point_line,
        horocycle_line,
        line_line_angle,
        line_line_disjoint,
        unclassified,
    };
    Relation relation;
    double value;    // raw Lorentz product
    double measure;  // distance / angle / signed quantity per relation
    bool tangent = false;   // horocycle_line: |value| = 1 within tolerance
    bool centered = false;  // horocycle_line: value = 0 within tolerance
};

// Requires both inputs normalized for their class (|<v,v>| = 1 or lightlike
// with x0 > 0); throws std::domain_error otherwise. Argument order is free.
IncidenceReport incidence(const Vec3L& u, const Vec3L& v);

// Projection of a normalized point to the Poincare disc: (x1, x2)/(1 + x0).
std::pair<double, double> poincare_project(const Vec3L& p);

// Stable inverse-hyperbolic helpers.
// acosh(1 + u) for u >= 0 without cancellation near u = 0.
double acosh1p(double u);

} // namespace hypolymin
