#include "hypolymin/center.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hypolymin {

CenterKind CenterKind::cone(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 2.0 * std::numbers::pi))
        throw std::domain_error("cone angle must lie in (0, 2*pi)");
    return {Tag::cone, alpha};
}

CenterKind CenterKind::geodesic(double r) {
    if (!(r > 0.0)) throw std::domain_error("geodesic length must be positive");
    return {Tag::geodesic, r};
}

CenterFrame make_center(CenterKind kind) {
    CenterFrame cf;
    cf.kind = kind;
    cf.e0 = {0.0, 0.0, -1.0};
    cf.p0 = {1.0, 0.0, 0.0};

    switch (kind.tag) {
        case CenterKind::Tag::cusp:
            // Ideal point at the negative end of the chart geodesic; scale
            // fixed by <x0, p0> = -1 (the horocycle {y . x0 = -1} through p0).
            cf.x0 = {1.0, -1.0, 0.0};
            // Parabolic moving p0 off the base line toward the positive side.
            cf.gamma = exp_so21(cf.x0, -1.0);
            break;
        case CenterKind::Tag::cone:
            cf.x0 = cf.p0;
            // Counterclockwise rotation by alpha about the cone point.
            cf.gamma = exp_so21(cf.x0, -kind.param);
            break;
        case CenterKind::Tag::geodesic:
            // x0 is the core geodesic's line vector; the chart geodesic g
            // leaves the axis perpendicularly with velocity x0 at p0.
            cf.x0 = {0.0, 1.0, 0.0};
            // Loxodromic of length r along the axis, toward the positive side.
            cf.gamma = exp_so21(cf.x0, kind.param);
            break;
    }
    return cf;
}

bool l0_in_domain(const CenterFrame& cf, double l0) {
    switch (cf.kind.tag) {
        case CenterKind::Tag::cone: return l0 >= 0.0;
        case CenterKind::Tag::geodesic: return l0 > 0.0;
        case CenterKind::Tag::cusp: return std::isfinite(l0);
    }
    return false;
}

Vec3L base_point(const CenterFrame& cf, double l0) {
    if (!l0_in_domain(cf, l0)) throw std::domain_error("base_point: l0 outside chart interval");
    return {std::cosh(l0), std::sinh(l0), 0.0};
}

Vec3L base_velocity(const CenterFrame& cf, double l0) {
    if (!l0_in_domain(cf, l0)) throw std::domain_error("base_velocity: l0 outside chart interval");
    return {std::sinh(l0), std::cosh(l0), 0.0};
}

std::vector<double> equidistant_values(const CenterFrame& cf, const std::vector<Vec3L>& lines) {
    std::vector<double> out;
    out.reserve(lines.size());
    for (const Vec3L& e : lines) out.push_back(lorentz_dot(e, cf.x0));
    return out;
}

double tangency_spread(const CenterFrame& cf, const std::vector<Vec3L>& lines) {
    if (lines.empty()) throw std::invalid_argument("tangency_spread: empty line list");
    auto vals = equidistant_values(cf, lines);
    double lo = vals[0], hi = vals[0];
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double membership_sign(CenterKind::Tag tag) {
    return tag == CenterKind::Tag::geodesic ? 1.0 : -1.0;
}

} // namespace hypolymin
