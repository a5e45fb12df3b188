#include "hypolymin/construction.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "hypolymin/errors.hpp"

namespace hypolymin {

namespace {

constexpr double k_pi = std::numbers::pi;

void check_beta(double beta) {
    if (!(beta > 0.0) || !(beta < k_pi))
        throw std::domain_error("interior angle must lie in (0, pi)");
}

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

double cusp_edge_length(double beta) {
    check_beta(beta);
    return 2.0 * std::asinh(1.0 / std::tan(beta / 2.0));
}

double block_tangent_length(CenterKind::Tag kind, EquidistantLevel level, double beta) {
    check_beta(beta);
    double u = std::cos(beta / 2.0);
    switch (kind) {
        case CenterKind::Tag::cone: {
            if (!(level.c < 0.0)) throw std::domain_error("cone level must be negative");
            double cosh_rho = std::sqrt(1.0 + level.c * level.c);
            double w2 = std::asin(u / cosh_rho);
            return std::acosh(std::max(1.0, std::cos(w2) / std::sin(beta / 2.0)));
        }
        case CenterKind::Tag::cusp:
            if (!(level.c < 0.0)) throw std::domain_error("cusp level must be negative");
            // Independent of the level: horocycle tangency slides with the vertex.
            return std::asinh(u / std::sin(beta / 2.0));
        case CenterKind::Tag::geodesic: {
            if (!(level.c > 1.0))
                throw infeasible_block("geodesic level must exceed 1 (cosh of the distance)");
            double sinh_a = std::sqrt(level.c * level.c - 1.0);
            double w2 = std::asinh(u / sinh_a);
            return std::atanh(level.c * std::tanh(w2));
        }
    }
    throw std::logic_error("unreachable");
}

double block_width(CenterKind::Tag kind, EquidistantLevel level, double beta) {
    check_beta(beta);
    double u = std::cos(beta / 2.0);
    switch (kind) {
        case CenterKind::Tag::cone:
            if (!(level.c < 0.0)) throw std::domain_error("cone level must be negative");
            return 2.0 * std::asin(u / std::sqrt(1.0 + level.c * level.c));
        case CenterKind::Tag::cusp:
            if (!(level.c < 0.0)) throw std::domain_error("cusp level must be negative");
            return 2.0 * u / (-level.c);
        case CenterKind::Tag::geodesic:
            if (!(level.c > 1.0))
                throw infeasible_block("geodesic level must exceed 1 (cosh of the distance)");
            return 2.0 * std::asinh(u / std::sqrt(level.c * level.c - 1.0));
    }
    throw std::logic_error("unreachable");
}

namespace {

// Bisection to absolute width 1e-13 followed by two Newton polish steps;
// f must be strictly decreasing with f(lo) > 0 > f(hi).
double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int k = 0; k < 2; ++k) {
        double d = df(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        double step = f(x) / d;
        double xn = x - step;
        if (xn > lo - (hi - lo) && xn < hi + (hi - lo) && std::isfinite(xn)) x = xn;
    }
    return x;
}

} // namespace

EquidistantLevel solve_equidistant_level(const CenterFrame& cf, const AngleSpec& spec) {
    validate_spec(cf.kind, spec);

    if (cf.kind.tag == CenterKind::Tag::cusp) {
        double h = 0.0;
        for (double b : spec.beta) h += 2.0 * std::cos(b / 2.0);
        return {-h};
    }

    double target = cf.kind.param;
    if (cf.kind.tag == CenterKind::Tag::cone) {
        // Width sum decreases from n*pi - sum(beta) (> alpha by feasibility)
        // at rho = 0 toward 0, so a root in rho exists and is unique.
        auto f = [&](double rho) {
            double s = -target;
            for (double b : spec.beta) s += 2.0 * std::asin(std::cos(b / 2.0) / std::cosh(rho));
            return s;
        };
        auto df = [&](double rho) {
            double s = 0.0, ch = std::cosh(rho), sh = std::sinh(rho);
            for (double b : spec.beta) {
                double u = std::cos(b / 2.0);
                s += -2.0 * u * sh / (ch * ch) / std::sqrt(1.0 - (u / ch) * (u / ch));
            }
            return s;
        };
        double hi = 1.0;
        while (f(hi) > 0.0) hi *= 2.0;
        double rho = solve_monotone(f, df, 0.0, hi);
        return {-std::sinh(rho)};
    }

    // Geodesic: width sum decreases from +inf (a -> 0) to 0, root unique.
    auto f = [&](double a) {
        double s = -target;
        for (double b : spec.beta) s += 2.0 * std::asinh(std::cos(b / 2.0) / std::sinh(a));
        return s;
    };
    auto df = [&](double a) {
        double s = 0.0, ch = std::cosh(a), sh = std::sinh(a);
        for (double b : spec.beta) {
            double u = std::cos(b / 2.0);
            s += -2.0 * u * ch / (sh * sh) / std::sqrt(1.0 + (u / sh) * (u / sh));
        }
        return s;
    };
    double lo = 1.0;
    while (f(lo) < 0.0) lo *= 0.5;
    double hi = std::max(2.0 * lo, 2.0);
    while (f(hi) > 0.0) hi *= 2.0;
    double a = solve_monotone(f, df, lo, hi);
    return {std::cosh(a)};
}

ConstructionResult construct_optimal(const CenterFrame& cf, const AngleSpec& spec) {
    validate_spec(cf.kind, spec);
    EquidistantLevel level = solve_equidistant_level(cf, spec);

    int n = spec.n();
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = block_tangent_length(cf.kind.tag, level, spec.beta[i]);

    // Edge i runs between the vertices of angles beta_{i-1} and beta_i (the
    // angle at vertex 0 is beta_n); the inscribed tangency point splits it
    // into the two adjacent tangent lengths.
    ConstructionResult out;
    out.level = level;
    out.params.lengths.resize(n);
    for (int i = 0; i < n; ++i)
        out.params.lengths[i] = t[(i + n - 1) % n] + t[i];

    // Vertex 0 sits on the bisector of its angle, above the tangency point of
    // the closing edge; the chart angle to the first edge is pi + beta_n / 2.
    double beta_last = spec.beta[n - 1];
    double t_last = t[n - 1];
    switch (cf.kind.tag) {
        case CenterKind::Tag::cone: {
            double cosh_rho = std::sqrt(1.0 + level.c * level.c);
            out.params.l0 = std::acosh(std::max(1.0, cosh_rho * std::cosh(t_last)));
            break;
        }
        case CenterKind::Tag::cusp:
            out.params.l0 = std::log(-level.c / std::sin(beta_last / 2.0));
            break;
        case CenterKind::Tag::geodesic: {
            double sinh_a = std::sqrt(level.c * level.c - 1.0);
            out.params.l0 = std::asinh(sinh_a * std::cosh(t_last));
            break;
        }
    }
    out.params.theta = wrap_angle(k_pi + beta_last / 2.0);

    out.residual_norm = norm3(closure_residual(cf, out.params, spec));
    // The parameters come from closed forms, but the attainable closure
    // residual grows with the frame magnitudes along the developed word,
    // roughly machine epsilon times the product of the cosh factors. A
    // nearly degenerate center (tiny cone angle, short geodesic) pushes the
    // chart translation far out, so widen the development gate accordingly.
    double word_scale = std::cosh(out.params.l0) * std::cosh(out.params.l0);
    for (double l : out.params.lengths) word_scale *= std::cosh(l);
    out.polygon = develop_polygon(cf, out.params, spec,
                                  std::max(1e-9, 64.0 * 2.2e-16 * word_scale));
    out.tangency_spread = tangency_spread(cf, out.polygon.edge_lines);
    out.perimeter = out.polygon.perimeter;

    MembershipReport rep = validate_membership(cf, out.polygon);
    if (!rep.pass()) {
        std::ostringstream msg;
        msg << "construct_optimal: assembled polygon failed membership:";
        for (const auto& v : rep.violations) msg << " [" << v << "]";
        throw std::runtime_error(msg.str());
    }
    return out;
}

namespace {

// Coordinates of the Lie algebra element X with X w = w (x) u, recovered from
// a matrix known to be J-antisymmetric.
Vec3L vee(const Isometry& x) {
    return {0.5 * (x.m[1][2] - x.m[2][1]), 0.5 * (x.m[0][2] + x.m[2][0]),
            -0.5 * (x.m[0][1] + x.m[1][0])};
}

Isometry odd_part(const Isometry& g) {
    Isometry odd;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double sgn = ((i == 0) != (j == 0)) ? -1.0 : 1.0;
            odd.m[i][j] = 0.5 * (g.m[i][j] - sgn * g.m[j][i]);
        }
    return odd;
}

// Kernel direction of the rank-2 matrix C - I, for elliptic axes near a
// half-turn where the odd part degenerates: the Euclidean cross product of
// the two most independent rows.
Vec3L kernel_direction(const Isometry& c) {
    std::array<std::array<double, 3>, 3> k{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k[i][j] = c.m[i][j] - (i == j ? 1.0 : 0.0);

    Vec3L best{0, 0, 0};
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Vec3L a{k[i][0], k[i][1], k[i][2]}, b{k[j][0], k[j][1], k[j][2]};
            Vec3L cr{a.x1 * b.x2 - a.x2 * b.x1, a.x2 * b.x0 - a.x0 * b.x2,
                     a.x0 * b.x1 - a.x1 * b.x0};
            double n = euclidean_norm(cr);
            if (n > best_norm) {
                best = cr;
                best_norm = n;
            }
        }
    return best;
}

} // namespace

PolygonParams reconstruct_from_lengths(CenterKind kind, const AngleSpec& spec,
                                       const std::vector<double>& lengths) {
    validate_spec(kind, spec);
    if (static_cast<int>(lengths.size()) != spec.n())
        throw std::invalid_argument("reconstruct_from_lengths: length/angle count mismatch");
    for (double l : lengths)
        if (!(l > 0.0)) throw std::invalid_argument("reconstruct_from_lengths: lengths must be positive");

    CenterFrame cf = make_center(kind);

    Isometry chain = Isometry::identity();
    for (int i = 0; i < spec.n(); ++i)
        chain = chain * translate(lengths[i]) * rotate(k_pi - spec.beta[i]);

    double tr = chain.m[0][0] + chain.m[1][1] + chain.m[2][2];
    double s = (tr - 1.0) / 2.0;
    double scale = std::max(1.0, std::abs(tr));
    Vec3L m = vee(odd_part(chain));

    constexpr double k_param_tol = 1e-6;

    // Conjugate the unfolded path's end-to-end isometry to the canonical
    // holonomy: first the normalizer S0 taking the fixed object to canonical
    // position, then a slide along the centralizer putting vertex 0 on the
    // chart geodesic.
    Isometry s0 = Isometry::identity();
    switch (kind.tag) {
        case CenterKind::Tag::cone: {
            if (s >= 1.0 - 1e-9 * scale)
                throw reconstruction_infeasible("end-to-end isometry is not elliptic");
            double phi;
            Vec3L p;
            if (s <= -1.0 + 1e-8) {
                // Near a half-turn the odd part vanishes; take the axis from
                // the kernel of C - I instead (orientation immaterial there).
                phi = std::acos(std::max(s, -1.0));
                p = kernel_direction(chain);
                double q = lorentz_dot(p, p);
                if (!(q < 0.0)) throw reconstruction_infeasible("elliptic axis not timelike");
                p = (1.0 / std::sqrt(-q)) * p;
                if (p.x0 < 0.0) p = -p;
            } else {
                phi = std::acos(std::min(1.0, std::max(s, -1.0)));
                Vec3L uv = (phi / std::sin(phi)) * m;
                p = (-1.0 / phi) * uv;
                if (p.x0 < 0.0) {
                    // Rotation by more than pi: same axis flipped, complement angle.
                    p = -p;
                    phi = 2.0 * k_pi - phi;
                }
                double q = lorentz_dot(p, p);
                if (!(q < 0.0)) throw reconstruction_infeasible("elliptic axis not timelike");
                p = (1.0 / std::sqrt(-q)) * p;
            }
            if (std::abs(phi - kind.param) > k_param_tol)
                throw reconstruction_infeasible("rotation angle does not match the cone angle");

            Vec3L d = Vec3L{0, 1, 0} + lorentz_dot(Vec3L{0, 1, 0}, p) * p;
            d = (1.0 / std::sqrt(lorentz_dot(d, d))) * d;
            Vec3L pd = boxtimes(p, d);
            Isometry a;
            for (int i = 0; i < 3; ++i) {
                a.m[i][0] = p[i];
                a.m[i][1] = d[i];
                a.m[i][2] = pd[i];
            }
            s0 = a.inverse();
            break;
        }
        case CenterKind::Tag::cusp: {
            if (std::abs(s - 1.0) > 1e-8 * scale)
                throw reconstruction_infeasible("end-to-end isometry is not parabolic");
            double dev = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    dev = std::max(dev, std::abs(chain.m[i][j] - (i == j ? 1.0 : 0.0)));
            if (dev <= 1e-8) throw reconstruction_infeasible("end-to-end isometry is the identity");

            Vec3L w = -m;  // must be the future-pointing parabolic direction
            if (!(w.x0 > 0.0))
                throw reconstruction_infeasible("parabolic direction points to the past (wrong side)");
            double psi = std::atan2(w.x2, w.x1);
            Isometry r1 = rotate(k_pi - psi);
            Vec3L w2 = r1.apply(w);
            s0 = translate(std::log(w2.x0)) * r1;
            break;
        }
        case CenterKind::Tag::geodesic: {
            if (!(s > 1.0 + 1e-10 * scale))
                throw reconstruction_infeasible("end-to-end isometry is not loxodromic");
            double r = std::acosh(s);
            if (std::abs(r - kind.param) > k_param_tol)
                throw reconstruction_infeasible("translation length does not match the geodesic length");
            Vec3L nvec = (1.0 / std::sinh(r)) * m;
            double q = lorentz_dot(nvec, nvec);
            if (std::abs(q - 1.0) > 1e-6)
                throw reconstruction_infeasible("loxodromic axis vector not unit spacelike");
            nvec = (1.0 / std::sqrt(q)) * nvec;

            Vec3L p = Vec3L{1, 0, 0} - lorentz_dot(Vec3L{1, 0, 0}, nvec) * nvec;
            p = (1.0 / std::sqrt(-lorentz_dot(p, p))) * p;
            Vec3L pn = boxtimes(p, nvec);
            Isometry a;
            for (int i = 0; i < 3; ++i) {
                a.m[i][0] = p[i];
                a.m[i][1] = nvec[i];
                a.m[i][2] = pn[i];
            }
            s0 = a.inverse();
            break;
        }
    }

    // Centralizer slide: move the image of the path's start vertex onto the
    // chart geodesic (the x2 = 0 locus within its orbit).
    Vec3L q = s0.apply(Vec3L{1, 0, 0});
    Isometry slide = Isometry::identity();
    double l0 = 0.0;
    switch (kind.tag) {
        case CenterKind::Tag::cone: {
            double psi = std::atan2(q.x2, q.x1);
            slide = rotate(-psi);
            Vec3L qs = slide.apply(q);
            l0 = std::acosh(std::max(1.0, qs.x0));
            break;
        }
        case CenterKind::Tag::cusp: {
            double u = q.x2 / (q.x0 + q.x1);
            slide = exp_so21(cf.x0, u);
            Vec3L qs = slide.apply(q);
            l0 = std::log(qs.x0 + qs.x1);
            break;
        }
        case CenterKind::Tag::geodesic: {
            double sl = std::atanh(q.x2 / q.x0);
            slide = exp_so21(cf.x0, -sl);
            Vec3L qs = slide.apply(q);
            if (!(qs.x1 > 0.0))
                throw reconstruction_infeasible("start vertex lands on the wrong side of the axis");
            l0 = std::asinh(qs.x1);
            break;
        }
    }

    Isometry frame = slide * s0;
    Vec3L q_final = frame.apply(Vec3L{1, 0, 0});
    if (std::abs(q_final.x2) > 1e-8)
        throw reconstruction_infeasible("slide failed to reach the chart geodesic");

    // frame = map_v(l0, theta) forces translate(-l0) * frame to be a rotation.
    Isometry rot = translate(-l0) * frame;
    if (std::abs(rot.m[0][0] - 1.0) > 1e-6)
        throw reconstruction_infeasible("start frame is not a chart frame");
    double theta = wrap_angle(std::atan2(-rot.m[2][1], rot.m[1][1]));

    PolygonParams params;
    params.l0 = l0;
    params.theta = theta;
    params.lengths = lengths;

    double res;
    try {
        res = norm3(closure_residual(cf, params, spec));
    } catch (const out_of_chart&) {
        throw reconstruction_infeasible("joined polygon does not close in the chart");
    }
    if (res > 1e-7) {
        std::ostringstream msg;
        msg << "joined polygon does not close (residual " << res << ")";
        throw reconstruction_infeasible(msg.str());
    }

    Polygon poly = develop_polygon(cf, params, spec, 1e-7);
    MembershipReport rep = validate_membership(cf, poly);
    if (!rep.pass()) {
        std::ostringstream msg;
        msg << "reconstructed polygon fails membership:";
        for (const auto& v : rep.violations) msg << " [" << v << "]";
        throw reconstruction_infeasible(msg.str());
    }
    return params;
}

} // namespace hypolymin
