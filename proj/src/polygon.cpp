#include "hypolymin/polygon.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hypolymin/errors.hpp"

namespace hypolymin {

namespace {

constexpr double k_pi = std::numbers::pi;

Isometry translate(double l) {
    Isometry t = Isometry::identity();
    double c = std::cosh(l), s = std::sinh(l);
    t.m[0][0] = c; t.m[0][1] = s;
    t.m[1][0] = s; t.m[1][1] = c;
    return t;
}

Isometry rotate(double phi) {
    Isometry r = Isometry::identity();
    double c = std::cos(phi), s = std::sin(phi);
    r.m[1][1] = c; r.m[1][2] = -s;
    r.m[2][1] = s; r.m[2][2] = c;
    return r;
}

} // namespace

void validate_spec(CenterKind kind, const AngleSpec& spec) {
    if (spec.beta.empty()) throw infeasible_spec("angle spec must have n >= 1 angles");
    double sum = 0.0;
    for (double b : spec.beta) {
        if (!(b > 0.0) || !(b < k_pi))
            throw infeasible_spec("interior angles must lie in (0, pi)");
        sum += b;
    }
    if (kind.tag == CenterKind::Tag::cone) {
        double n = static_cast<double>(spec.beta.size());
        if (!(kind.param + sum < n * k_pi))
            throw infeasible_spec("cone spec infeasible: alpha + sum(beta) >= n*pi");
    }
}

double PolygonParams::perimeter() const {
    double s = 0.0;
    for (double l : lengths) s += l;
    return s;
}

double wrap_angle(double theta) {
    double two_pi = 2.0 * k_pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    return t;
}

Isometry map_v(const CenterFrame& cf, double l0, double theta) {
    if (!l0_in_domain(cf, l0)) throw std::domain_error("map_v: l0 outside chart interval");
    return translate(l0) * rotate(-theta);
}

Isometry map_w(const CenterFrame& cf, const PolygonParams& params, const AngleSpec& spec) {
    if (params.n() != spec.n()) throw std::invalid_argument("map_w: length/angle count mismatch");
    Isometry f = map_v(cf, params.l0, params.theta);
    for (int i = 0; i < spec.n(); ++i)
        f = f * translate(params.lengths[i]) * rotate(k_pi - spec.beta[i]);
    return f;
}

Vec3L closure_residual(const CenterFrame& cf, const PolygonParams& params, const AngleSpec& spec) {
    Isometry v = map_v(cf, params.l0, params.theta);
    Isometry w = map_w(cf, params, spec);
    // log of the error isometry w (gamma v)^{-1}; this ordering makes the
    // derivative at a closed point exactly the matrix of jacobian_M.
    return log_so21(w * (cf.gamma * v).inverse());
}

double norm3(const Vec3L& v) {
    return std::sqrt(v.x0 * v.x0 + v.x1 * v.x1 + v.x2 * v.x2);
}

JacobianM jacobian_M(const CenterFrame& cf, const PolygonParams& params, const AngleSpec& spec) {
    if (params.n() != spec.n()) throw std::invalid_argument("jacobian_M: size mismatch");
    JacobianM jm;
    jm.cols.reserve(spec.n() + 2);

    Vec3L q0 = base_point(cf, params.l0);
    auto one_minus_gamma = [&](const Vec3L& x) { return x - cf.gamma.apply(x); };
    jm.cols.push_back(one_minus_gamma(cf.e0));
    jm.cols.push_back(one_minus_gamma(q0));

    Isometry f = map_v(cf, params.l0, params.theta);
    for (int i = 0; i < spec.n(); ++i) {
        // The edge line of segment i is carried by the frame entering it; the
        // outward normal is the negated third frame column (translation along
        // the segment leaves that column unchanged).
        jm.cols.push_back(-f.column(2));
        f = f * translate(params.lengths[i]) * rotate(k_pi - spec.beta[i]);
    }
    return jm;
}

Polygon develop_polygon(const CenterFrame& cf, const PolygonParams& params,
                        const AngleSpec& spec, double eps_res) {
    Vec3L res = closure_residual(cf, params, spec);
    if (norm3(res) > eps_res) {
        std::ostringstream msg;
        msg << "develop_polygon: closure residual " << norm3(res) << " exceeds " << eps_res;
        throw std::invalid_argument(msg.str());
    }

    Polygon poly;
    poly.start_frame = map_v(cf, params.l0, params.theta);
    Isometry f = poly.start_frame;
    poly.vertices.reserve(spec.n());
    poly.edge_lines.reserve(spec.n());
    for (int i = 0; i < spec.n(); ++i) {
        poly.vertices.push_back(f.column(0));
        poly.edge_lines.push_back(-f.column(2));
        f = f * translate(params.lengths[i]) * rotate(k_pi - spec.beta[i]);
        poly.perimeter += params.lengths[i];
    }
    poly.end_frame = f;
    return poly;
}

double angular_coordinate(const CenterFrame& cf, const Vec3L& p) {
    switch (cf.kind.tag) {
        case CenterKind::Tag::cone:
            return std::atan2(p.x2, p.x1);
        case CenterKind::Tag::cusp:
            // Horocyclic parameter: unit-speed at the level through p0,
            // period 1 under the canonical parabolic holonomy.
            return p.x2 / (p.x0 + p.x1);
        case CenterKind::Tag::geodesic:
            // Signed position along the core axis.
            return std::atanh(p.x2 / p.x0);
    }
    return 0.0;
}

double angular_period(const CenterFrame& cf) {
    switch (cf.kind.tag) {
        case CenterKind::Tag::cone: return cf.kind.param;
        case CenterKind::Tag::cusp: return 1.0;
        case CenterKind::Tag::geodesic: return cf.kind.param;
    }
    return 0.0;
}

MembershipReport validate_membership(const CenterFrame& cf, const Polygon& poly) {
    MembershipReport rep;
    rep.convex_side = true;
    rep.winding = true;
    rep.positive_lengths = true;

    double expect = membership_sign(cf.kind.tag);
    auto vals = equidistant_values(cf, poly.edge_lines);
    for (size_t i = 0; i < vals.size(); ++i) {
        if (!(expect * vals[i] > 0.0)) {
            rep.convex_side = false;
            std::ostringstream msg;
            msg << "edge " << (i + 1) << ": center on the wrong side, <e,x0> = " << vals[i];
            rep.violations.push_back(msg.str());
        }
    }

    // Traverse vertices (plus the holonomy image of the first) in the angular
    // coordinate around the center: strictly increasing steps, one period in
    // total. Cone coordinates live on a circle, so steps are unwrapped to
    // (-pi, pi]; the other kinds have globally defined coordinates.
    int n = static_cast<int>(poly.vertices.size());
    std::vector<double> phi;
    phi.reserve(n + 1);
    for (const Vec3L& p : poly.vertices) phi.push_back(angular_coordinate(cf, p));
    phi.push_back(angular_coordinate(cf, cf.gamma.apply(poly.vertices[0])));

    bool cone = cf.kind.tag == CenterKind::Tag::cone;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double step = phi[i + 1] - phi[i];
        if (cone) {
            step = std::remainder(step, 2.0 * k_pi);
        }
        // Zero steps are the business of the positive-lengths check; winding
        // only rejects backward motion and wrong totals.
        if (!(step >= 0.0)) {
            rep.winding = false;
            std::ostringstream msg;
            msg << "vertex step " << i << " -> " << (i + 1) << " not forward (step " << step << ")";
            rep.violations.push_back(msg.str());
        }
        total += step;
    }
    if (std::abs(total - angular_period(cf)) > 1e-6) {
        rep.winding = false;
        std::ostringstream msg;
        msg << "total angular advance " << total << " != period " << angular_period(cf);
        rep.violations.push_back(msg.str());
    }

    for (size_t i = 0; i < poly.edge_lines.size(); ++i) {
        double li = (i + 1 < poly.vertices.size())
                        ? std::acosh(std::max(1.0, -lorentz_dot(poly.vertices[i], poly.vertices[i + 1])))
                        : std::acosh(std::max(1.0, -lorentz_dot(poly.vertices[i],
                                                                 cf.gamma.apply(poly.vertices[0]))));
        // A collapsed edge develops to a repeated vertex whose acosh distance
        // sits at the rounding floor near 1e-8, so compare against the same
        // stratum threshold the optimizer uses rather than strict positivity.
        if (!(li > 1e-7)) {
            rep.positive_lengths = false;
            std::ostringstream msg;
            msg << "edge " << (i + 1) << " has zero length";
            rep.violations.push_back(msg.str());
        }
    }
    return rep;
}

} // namespace hypolymin
