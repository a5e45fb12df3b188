#include "hypolymin/lorentz.hpp"

#include <cmath>
#include <stdexcept>

#include "hypolymin/errors.hpp"

namespace hypolymin {

double lorentz_dot(const Vec3L& u, const Vec3L& v) {
    return -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2;
}

double euclidean_norm(const Vec3L& v) {
    return std::sqrt(v.x0 * v.x0 + v.x1 * v.x1 + v.x2 * v.x2);
}

CausalClass classify(const Vec3L& v, double eps) {
    double n = euclidean_norm(v);
    if (n == 0.0) throw std::domain_error("classify: zero vector has no causal class");
    double q = lorentz_dot(v, v) / (n * n);
    if (q < -eps) return CausalClass::timelike;
    if (q > eps) return CausalClass::spacelike;
    return CausalClass::lightlike;
}

Vec3L boxtimes(const Vec3L& u, const Vec3L& v) {
    // J applied to the Euclidean cross product; <u (x) v, w> = det(u, v, w).
    double c0 = u.x1 * v.x2 - u.x2 * v.x1;
    double c1 = u.x2 * v.x0 - u.x0 * v.x2;
    double c2 = u.x0 * v.x1 - u.x1 * v.x0;
    return {-c0, c1, c2};
}

Isometry Isometry::identity() {
    Isometry g;
    g.m[0][0] = g.m[1][1] = g.m[2][2] = 1.0;
    return g;
}

Vec3L Isometry::apply(const Vec3L& v) const {
    return {m[0][0] * v.x0 + m[0][1] * v.x1 + m[0][2] * v.x2,
            m[1][0] * v.x0 + m[1][1] * v.x1 + m[1][2] * v.x2,
            m[2][0] * v.x0 + m[2][1] * v.x1 + m[2][2] * v.x2};
}

Isometry Isometry::inverse() const {
    // J M^t J; entry (i,j) picks up a sign when exactly one index is timelike.
    Isometry r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = ((i == 0) != (j == 0)) ? -1.0 : 1.0;
            r.m[i][j] = s * m[j][i];
        }
    return r;
}

Isometry operator*(const Isometry& a, const Isometry& b) {
    Isometry r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
            r.m[i][j] = s;
        }
    return r;
}

double form_defect(const Isometry& g) {
    // max-norm of g^t J g - J
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) {
                double jk = (k == 0) ? -1.0 : 1.0;
                s += g.m[k][i] * jk * g.m[k][j];
            }
            double target = (i == j) ? ((i == 0) ? -1.0 : 1.0) : 0.0;
            worst = std::max(worst, std::abs(s - target));
        }
    return worst;
}

double det_defect(const Isometry& g) {
    const auto& m = g.m;
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return std::abs(det - 1.0);
}

namespace {

// Matrix of the Lie algebra element associated with v: X_v w = w (x) v.
void fill_generator(const Vec3L& v, double x[3][3]) {
    x[0][0] = 0.0;    x[0][1] = -v.x2;  x[0][2] = v.x1;
    x[1][0] = -v.x2;  x[1][1] = 0.0;    x[1][2] = v.x0;
    x[2][0] = v.x1;   x[2][1] = -v.x0;  x[2][2] = 0.0;
}

} // namespace

Isometry exp_so21(const Vec3L& v, double t) {
    if (euclidean_norm(v) == 0.0) throw std::domain_error("exp_so21: zero generator");

    // X^3 = mu X with mu = <v,v> t^2, so the exponential closes in X and X^2
    // with coefficients that are entire functions of mu. One series covers
    // the near-lightlike band on both sides; outside it the trig/hyperbolic
    // closed forms apply (lightlike input lands exactly on c1=1, c2=1/2).
    double a[3][3];
    fill_generator(v, a);
    for (auto& row : a)
        for (double& e : row) e *= t;

    double mu = lorentz_dot(v, v) * t * t;
    double c1, c2;
    if (mu < -1e-8) {
        double w = std::sqrt(-mu);
        c1 = std::sin(w) / w;
        c2 = (1.0 - std::cos(w)) / (w * w);
    } else if (mu > 1e-8) {
        double w = std::sqrt(mu);
        c1 = std::sinh(w) / w;
        c2 = (std::cosh(w) - 1.0) / (w * w);
    } else {
        c1 = 1.0 + mu / 6.0 + mu * mu / 120.0;
        c2 = 0.5 + mu / 24.0 + mu * mu / 720.0;
    }

    Isometry r = Isometry::identity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double a2 = 0.0;
            for (int k = 0; k < 3; ++k) a2 += a[i][k] * a[k][j];
            r.m[i][j] += c1 * a[i][j] + c2 * a2;
        }
    return r;
}

Vec3L log_so21(const Isometry& g) {
    double tr = g.m[0][0] + g.m[1][1] + g.m[2][2];
    double s = (tr - 1.0) / 2.0;
    if (s <= -1.0 + 1e-6)
        throw out_of_chart("log_so21: rotation part too close to a half-turn");

    // The J-odd part of exp(X_u) is f(|u|) X_u; dividing out f through the
    // trace recovers u. f degenerates only at the excluded half-turn.
    Isometry odd;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double sgn = ((i == 0) != (j == 0)) ? -1.0 : 1.0;
            odd.m[i][j] = 0.5 * (g.m[i][j] - sgn * g.m[j][i]);
        }

    double u = s - 1.0;
    double gfac;
    if (std::abs(u) < 1e-6) {
        gfac = 1.0 - u / 3.0 + 2.0 * u * u / 15.0;
    } else if (s > 1.0) {
        double r = std::acosh(s);
        gfac = r / std::sinh(r);
    } else {
        double phi = std::acos(std::max(s, -1.0));
        gfac = phi / std::sin(phi);
    }

    double r0 = 0.5 * (odd.m[1][2] - odd.m[2][1]);
    double r1 = 0.5 * (odd.m[0][2] + odd.m[2][0]);
    double r2 = -0.5 * (odd.m[0][1] + odd.m[1][0]);
    return {gfac * r0, gfac * r1, gfac * r2};
}

namespace {

constexpr double k_norm_tol = 1e-6;

bool is_unit_point(const Vec3L& v) {
    return std::abs(lorentz_dot(v, v) + 1.0) <= k_norm_tol && v.x0 > 0.0;
}

bool is_unit_line(const Vec3L& v) {
    return std::abs(lorentz_dot(v, v) - 1.0) <= k_norm_tol;
}

bool is_horocycle(const Vec3L& v) {
    if (v.x0 <= 0.0) return false;
    double n = euclidean_norm(v);
    return n > 0.0 && std::abs(lorentz_dot(v, v)) / (n * n) <= 1e-9;
}

} // namespace

IncidenceReport incidence(const Vec3L& u, const Vec3L& v) {
    auto kind_of = [](const Vec3L& w) -> int {
        // 0 point, 1 line, 2 horocycle, -1 invalid
        if (is_horocycle(w)) return 2;
        if (is_unit_point(w)) return 0;
        if (is_unit_line(w)) return 1;
        return -1;
    };
    int ku = kind_of(u), kv = kind_of(v);
    if (ku < 0 || kv < 0)
        throw std::domain_error("incidence: inputs must be normalized points, lines, or horocycles");

    double value = lorentz_dot(u, v);
    IncidenceReport rep{};
    rep.value = value;

    int lo = std::min(ku, kv), hi = std::max(ku, kv);
    if (lo == 0 && hi == 0) {
        rep.relation = IncidenceReport::Relation::point_point;
        rep.measure = std::acosh(std::max(-value, 1.0));
    } else if (lo == 0 && hi == 1) {
        rep.relation = IncidenceReport::Relation::point_line;
        rep.measure = std::asinh(value);
    } else if (lo == 1 && hi == 2) {
        rep.relation = IncidenceReport::Relation::horocycle_line;
        rep.measure = value;
        rep.centered = std::abs(value) <= 1e-9;
        rep.tangent = std::abs(std::abs(value) - 1.0) <= 1e-9;
    } else if (lo == 1 && hi == 1) {
        if (std::abs(value) < 1.0 - 1e-12) {
            rep.relation = IncidenceReport::Relation::line_line_angle;
            rep.measure = std::acos(value);
        } else {
            rep.relation = IncidenceReport::Relation::line_line_disjoint;
            rep.measure = std::acosh(std::max(std::abs(value), 1.0));
        }
    } else {
        rep.relation = IncidenceReport::Relation::unclassified;
        rep.measure = value;
    }
    return rep;
}

std::pair<double, double> poincare_project(const Vec3L& p) {
    if (!is_unit_point(p)) throw std::domain_error("poincare_project: not a normalized point");
    double d = 1.0 + p.x0;
    return {p.x1 / d, p.x2 / d};
}

double acosh1p(double u) {
    if (u < 0.0) throw std::domain_error("acosh1p: negative argument");
    return std::log1p(u + std::sqrt(u * (2.0 + u)));
}

} // namespace hypolymin
