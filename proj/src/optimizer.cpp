#include "hypolymin/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hypolymin/construction.hpp"
#include "hypolymin/errors.hpp"
#include "hypolymin/smallmat.hpp"

namespace hypolymin {

namespace {

constexpr double k_pi = std::numbers::pi;

// Coordinates below the stratum threshold count as sitting on the boundary
// of the polygon space (a collapsed edge, or the cone vertex at the center).
constexpr double k_stratum = 1e-7;

SmallMat jacobian_matrix(const CenterFrame& cf, const PolygonParams& params,
                         const AngleSpec& spec) {
    JacobianM jm = jacobian_M(cf, params, spec);
    SmallMat m(3, jm.n_cols());
    for (int j = 0; j < jm.n_cols(); ++j)
        for (int i = 0; i < 3; ++i) m.at(i, j) = jm.cols[j][i];
    return m;
}

// Same matrix rebuilt from a developed polygon; the edge lines stored there
// are exactly the per-length columns, and the first two columns involve only
// the first vertex and the fixed chart direction.
SmallMat matrix_from_polygon(const CenterFrame& cf, const Polygon& poly) {
    int n = static_cast<int>(poly.edge_lines.size());
    auto one_minus_gamma = [&](const Vec3L& x) { return x - cf.gamma.apply(x); };
    SmallMat m(3, n + 2);
    Vec3L c0 = one_minus_gamma(cf.e0);
    Vec3L c1 = one_minus_gamma(poly.vertices[0]);
    for (int i = 0; i < 3; ++i) {
        m.at(i, 0) = c0[i];
        m.at(i, 1) = c1[i];
        for (int j = 0; j < n; ++j) m.at(i, 2 + j) = poly.edge_lines[j][i];
    }
    return m;
}

PolygonParams apply_step(const PolygonParams& x, const std::vector<double>& d, double t) {
    PolygonParams y = x;
    y.l0 += t * d[0];
    y.theta = wrap_angle(y.theta + t * d[1]);
    for (size_t i = 0; i < y.lengths.size(); ++i) y.lengths[i] += t * d[2 + i];
    return y;
}

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

bool lengths_positive(const PolygonParams& p) {
    for (double l : p.lengths)
        if (!(l > 0.0)) return false;
    return true;
}

bool is_member(const CenterFrame& cf, const PolygonParams& p, const AngleSpec& spec,
               double eps_res) {
    if (!l0_in_domain(cf, p.l0) || !lengths_positive(p)) return false;
    try {
        Polygon poly = develop_polygon(cf, p, spec, eps_res);
        return validate_membership(cf, poly).pass();
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace

namespace {

// Endgame descent. Near stationarity the Armijo comparison drowns in the
// projection's perimeter jitter: re-projecting a candidate moves it by up to
// the residual tolerance, which beats the expected decrease t * pgn^2 once
// the gradient is small. The last stretch therefore runs fixed small steps
// against a much tighter projection and is judged on the gradient norm alone,
// allowing the perimeter to wobble at roundoff scale.
bool polish_to_stationarity(const CenterFrame& cf, const AngleSpec& spec,
                            const std::vector<double>& grad, PolygonParams& x,
                            const OptimizeOptions& options) {
    const double tight = std::min(options.tol_residual, 1e-12);
    try {
        x = project_to_constraint(cf, x, spec, tight, 80);
    } catch (const projection_failure&) {
        return false;
    }
    double t = 0.25;
    for (int it = 0; it < 400; ++it) {
        SmallMat m = jacobian_matrix(cf, x, spec);
        std::vector<double> pg = project_to_nullspace(m, grad);
        if (vec_norm(pg) <= options.tol_pgrad) return true;
        std::vector<double> d(pg.size());
        for (size_t k = 0; k < pg.size(); ++k) d[k] = -pg[k];

        PolygonParams cand = apply_step(x, d, t);
        bool ok = l0_in_domain(cf, cand.l0) && lengths_positive(cand);
        if (ok) {
            try {
                cand = project_to_constraint(cf, cand, spec, tight, 80);
            } catch (const projection_failure&) {
                ok = false;
            }
        }
        ok = ok && l0_in_domain(cf, cand.l0) && lengths_positive(cand) &&
             cand.perimeter() <= x.perimeter() + 1e-12;
        if (!ok) {
            t *= 0.5;
            if (t < 1e-6) return false;
            continue;
        }
        x = cand;
    }
    SmallMat m = jacobian_matrix(cf, x, spec);
    return vec_norm(project_to_nullspace(m, grad)) <= options.tol_pgrad;
}

} // namespace

std::uint64_t Rng::next() {
    state += 0x9E3779B97f4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) {
    return a + (b - a) * uniform();
}

PolygonParams project_to_constraint(const CenterFrame& cf, const PolygonParams& params,
                                    const AngleSpec& spec, double tol, int max_iter) {
    if (params.n() != spec.n())
        throw std::invalid_argument("project_to_constraint: length/angle count mismatch");

    PolygonParams x = params;
    for (int it = 0; it < max_iter; ++it) {
        Vec3L r;
        try {
            r = closure_residual(cf, x, spec);
        } catch (const out_of_chart&) {
            throw projection_failure("closure error left the log chart during projection");
        } catch (const std::domain_error&) {
            throw projection_failure("projection stepped outside the chart domain");
        }
        double rn = norm3(r);
        if (it == 0 && rn >= 8.0)
            throw projection_failure("start too far from the closure set for a local projection");
        if (rn <= tol) return x;

        SmallMat m = jacobian_matrix(cf, x, spec);
        std::vector<double> rhs = {-r.x0, -r.x1, -r.x2};
        std::vector<double> dx = solve_min_norm(m, rhs);
        x = apply_step(x, dx, 1.0);
    }
    throw projection_failure("projection did not converge within the iteration budget");
}

OptResult minimize_perimeter(const CenterFrame& cf, const AngleSpec& spec,
                             const PolygonParams& init, const OptimizeOptions& options) {
    validate_spec(cf.kind, spec);
    {
        double r0 = norm3(closure_residual(cf, init, spec));
        if (r0 > options.accept_residual) {
            std::ostringstream msg;
            msg << "minimize_perimeter: start residual " << r0 << " exceeds "
                << options.accept_residual;
            throw std::invalid_argument(msg.str());
        }
    }

    int n = spec.n();
    std::vector<double> grad(n + 2, 0.0);
    for (int i = 0; i < n; ++i) grad[2 + i] = 1.0;

    PolygonParams x = project_to_constraint(cf, init, spec, options.tol_residual);
    double step = 1.0;
    int escape_budget = 3;
    std::string stop = "max_iter";
    int it = 0;

    for (; it < options.max_iter; ++it) {
        double rn = norm3(closure_residual(cf, x, spec));
        SmallMat m = jacobian_matrix(cf, x, spec);
        std::vector<double> pg = project_to_nullspace(m, grad);
        double pgn = vec_norm(pg);
        if (pgn <= options.tol_pgrad && rn <= options.tol_residual) {
            stop = "stationary";
            break;
        }

        std::vector<double> d(pg.size());
        for (size_t k = 0; k < pg.size(); ++k) d[k] = -pg[k];

        bool accepted = false;
        double t = step;
        while (t > 1e-16) {
            PolygonParams cand = apply_step(x, d, t);
            PolygonParams proj;
            try {
                proj = project_to_constraint(cf, cand, spec, options.tol_residual);
            } catch (const projection_failure&) {
                t *= 0.5;
                continue;
            }
            if (l0_in_domain(cf, proj.l0) && lengths_positive(proj) &&
                proj.perimeter() < x.perimeter() - 1e-4 * t * pgn * pgn) {
                x = proj;
                accepted = true;
                break;
            }
            t *= 0.5;
        }

        if (accepted) {
            step = std::min(t * 1.6, 8.0);
            continue;
        }

        // Line search stalled with descent still available: either the
        // iterate is pinned against a boundary stratum, or local curvature
        // defeats this step rule. Boundary pins get one escape attempt.
        double lmin = *std::min_element(x.lengths.begin(), x.lengths.end());
        bool apex = cf.kind.tag == CenterKind::Tag::cone && x.l0 <= 10.0 * k_stratum;
        bool near_edge = lmin <= 10.0 * k_stratum;
        if ((apex || near_edge) && escape_budget > 0) {
            --escape_budget;
            PolygonParams snapped = x;
            if (apex) snapped.l0 = 0.0;
            for (double& l : snapped.lengths)
                if (l <= 10.0 * k_stratum) l = 0.0;
            try {
                PolygonParams moved = boundary_escape(cf, snapped, spec);
                if (moved.perimeter() < x.perimeter()) {
                    x = moved;
                    step = 1.0;
                    continue;
                }
            } catch (const std::exception&) {
                // fall through to the boundary report
            }
            stop = "boundary";
            break;
        }
        if (apex || near_edge) {
            stop = "boundary";
            break;
        }
        stop = polish_to_stationarity(cf, spec, grad, x, options) ? "stationary"
                                                                  : "line_search_stalled";
        break;
    }

    OptResult res;
    res.params = x;
    res.perimeter = x.perimeter();
    res.iterations = it;
    res.diagnostics = stop;
    res.residual_norm = norm3(closure_residual(cf, x, spec));
    {
        SmallMat m = jacobian_matrix(cf, x, spec);
        res.projected_gradient_norm = vec_norm(project_to_nullspace(m, grad));
    }
    res.converged = (stop == "stationary") && res.residual_norm <= options.tol_residual;
    try {
        Polygon poly = develop_polygon(cf, x, spec, options.accept_residual);
        CriticalityCertificate cert = criticality_certificate(cf, poly);
        res.tangency_spread = cert.spread;
        res.lambda = cert.lambda;
    } catch (const std::invalid_argument&) {
        res.tangency_spread = std::numeric_limits<double>::quiet_NaN();
    }
    return res;
}

CriticalityCertificate criticality_certificate(const CenterFrame& cf, const Polygon& poly,
                                               double sigma_tol) {
    int n = static_cast<int>(poly.edge_lines.size());
    if (n < 1) throw std::invalid_argument("criticality_certificate: empty polygon");

    CriticalityCertificate cert;
    SmallMat m = matrix_from_polygon(cf, poly);
    {
        std::vector<double> s = singular_values(m);
        cert.rank_m_ratio = s[0] > 0.0 ? s[2] / s[0] : 0.0;
    }

    if (n + 2 <= 3) {
        // One edge: the constraint matrix spans everything the stacked matrix
        // could, the polygon space is a point, and that point is critical.
        cert.critical = true;
        cert.sigma_ratio = 0.0;
    } else {
        SmallMat mbar(4, n + 2);
        for (int j = 0; j < n + 2; ++j) {
            for (int i = 0; i < 3; ++i) mbar.at(i, j) = m.at(i, j);
            mbar.at(3, j) = j >= 2 ? 1.0 : 0.0;
        }
        std::vector<double> s = singular_values(mbar);
        cert.sigma_ratio = s[0] > 0.0 ? s[3] / s[0] : 0.0;
        cert.critical = cert.sigma_ratio <= sigma_tol;
    }

    // Multiplier recovery: the least-squares z~ with M^t z~ = -gradient, read
    // back through the metric (z = J z~), must be a multiple of x0 exactly at
    // critical points; the common tangency value is then -1/lambda.
    std::vector<double> negc(n + 2, 0.0);
    for (int i = 0; i < n; ++i) negc[2 + i] = -1.0;
    std::vector<double> zt = solve_min_norm(m.transposed(), negc);
    Vec3L z{-zt[0], zt[1], zt[2]};
    double denom = lorentz_dot(cf.x0, cf.x0);
    // Euclidean alignment is the honest test here; x0 may be lightlike, where
    // the Lorentz pairing of x0 with itself vanishes.
    double x0n2 = cf.x0.x0 * cf.x0.x0 + cf.x0.x1 * cf.x0.x1 + cf.x0.x2 * cf.x0.x2;
    (void)denom;
    double zdotx0 = z.x0 * cf.x0.x0 + z.x1 * cf.x0.x1 + z.x2 * cf.x0.x2;
    cert.lambda = x0n2 > 0.0 ? zdotx0 / x0n2 : 0.0;
    Vec3L dev = z - cert.lambda * cf.x0;
    double zn = norm3(z);
    cert.lambda_residual = zn > 0.0 ? norm3(dev) / zn : 0.0;
    cert.spread = tangency_spread(cf, poly.edge_lines);
    return cert;
}

PolygonParams boundary_escape(const CenterFrame& cf, const PolygonParams& params,
                              const AngleSpec& spec) {
    if (params.n() != spec.n())
        throw std::invalid_argument("boundary_escape: length/angle count mismatch");
    int n = spec.n();

    bool apex = cf.kind.tag == CenterKind::Tag::cone && params.l0 <= k_stratum;
    std::vector<int> zeros;
    for (int i = 0; i < n; ++i)
        if (params.lengths[i] <= k_stratum) zeros.push_back(i);

    if (!apex && zeros.empty()) return params;

    PolygonParams x = params;
    std::vector<double> dir(n + 2, 0.0);
    double lambda = 0.0;

    if (apex) {
        if (n < 2) throw escape_failure("apex escape needs at least two edges");
        if (!zeros.empty())
            throw escape_failure("mixed apex and collapsed-edge strata are not handled");
        x.l0 = 0.0;

        // At the apex the whole polygon rotates with theta, so theta can be
        // realigned freely; align the bisector of the two edges at vertex 0
        // with the fixed direction (1 - gamma) e0, which makes the opening
        // move (l0, theta, l) = (1, 0, -lambda, 0, ..., 0, -lambda) tangent
        // to the closure constraint. Its perimeter derivative is -2 lambda.
        Polygon poly = develop_polygon(cf, x, spec, 1e-6);
        Vec3L a = cf.e0 - cf.gamma.apply(cf.e0);
        Vec3L b = poly.edge_lines[0] + poly.edge_lines[n - 1];
        double delta = std::atan2(b.x2, b.x1) - std::atan2(a.x2, a.x1);
        x.theta = wrap_angle(x.theta + delta);

        poly = develop_polygon(cf, x, spec, 1e-6);
        b = poly.edge_lines[0] + poly.edge_lines[n - 1];
        double bn = euclidean_norm(b);
        if (!(bn > 0.0)) throw escape_failure("degenerate edge bisector at the apex");
        lambda = euclidean_norm(a) / bn;
        Vec3L mis = a - lambda * b;
        if (euclidean_norm(mis) > 1e-6 * std::max(1.0, euclidean_norm(a)))
            throw escape_failure("apex bisector realignment failed to align");
        if (!(lambda > 0.0)) throw escape_failure("apex opening rate is not positive");

        dir[0] = 1.0;
        dir[2 + 0] = -lambda;
        dir[2 + (n - 1)] = -lambda;
    } else {
        // Collapsed edges: open all of them at unit rate along the closure
        // tangent space. Cutting a corner replaces two sides of a triangle
        // with the third, so the opening strictly decreases the perimeter
        // once the direction also descends within the stratum.
        Polygon poly = develop_polygon(cf, x, spec, 1e-6);
        SmallMat m = matrix_from_polygon(cf, poly);

        int nz = static_cast<int>(zeros.size());
        SmallMat stacked(3 + nz, n + 2);
        std::vector<double> rhs(3 + nz, 0.0);
        for (int j = 0; j < n + 2; ++j)
            for (int i = 0; i < 3; ++i) stacked.at(i, j) = m.at(i, j);
        for (int k = 0; k < nz; ++k) {
            stacked.at(3 + k, 2 + zeros[k]) = 1.0;
            rhs[3 + k] = 1.0;
        }
        dir = solve_min_norm(stacked, rhs);

        auto perimeter_rate = [&]() {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += dir[2 + i];
            return s;
        };
        if (perimeter_rate() >= -1e-12) {
            // The pure opening is not descending; add the steepest-descent
            // component tangent to the stratum (zero opening rates), which
            // exists whenever the stratum point is not itself critical.
            std::vector<double> negc(n + 2, 0.0);
            for (int i = 0; i < n; ++i) negc[2 + i] = -1.0;
            std::vector<double> within = project_to_nullspace(stacked, negc);
            for (int j = 0; j < n + 2; ++j) dir[j] += within[j];
            if (perimeter_rate() >= -1e-12)
                throw escape_failure("no strictly decreasing opening direction at this point");
        }
    }

    // Back-off line search: step, re-project, and demand an interior member
    // with a strictly smaller perimeter.
    double per0 = params.perimeter();
    double eps_max = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (dir[2 + i] < 0.0) eps_max = std::min(eps_max, x.lengths[i] / -dir[2 + i]);
    if (dir[0] < 0.0 && cf.kind.tag != CenterKind::Tag::cusp)
        eps_max = std::min(eps_max, std::max(x.l0, 0.0) / -dir[0]);
    double eps = std::min(0.25, 0.5 * eps_max);
    if (!(eps > 0.0)) throw escape_failure("no room to move off the stratum");

    for (int k = 0; k < 60; ++k, eps *= 0.5) {
        PolygonParams cand = apply_step(x, dir, eps);
        if (!l0_in_domain(cf, cand.l0)) continue;
        PolygonParams proj;
        try {
            proj = project_to_constraint(cf, cand, spec, 1e-9);
        } catch (const projection_failure&) {
            continue;
        }
        if (!lengths_positive(proj)) continue;
        if (cf.kind.tag == CenterKind::Tag::cone && !(proj.l0 > 0.0)) continue;
        if (!(proj.perimeter() < per0 - 1e-12)) continue;
        if (!is_member(cf, proj, spec, 1e-7)) continue;
        return proj;
    }
    throw escape_failure("line search found no interior improvement");
}

PolygonParams random_feasible(const CenterFrame& cf, const AngleSpec& spec, std::uint64_t seed) {
    validate_spec(cf.kind, spec);
    Rng rng(seed);
    int n = spec.n();
    const int budget = 600;

    // Raw chart draws rarely survive the projection once the polygon has more
    // than a handful of edges: the closure defect of a random open chain
    // usually exceeds what the Newton retraction recovers, and the projected
    // chain is rarely convex. Odd attempts therefore kick the optimal polygon
    // along a random constraint-tangent direction instead and retract that;
    // the even raw draws keep the accepted samples from clustering around the
    // base point.
    bool have_base = false;
    PolygonParams base;
    SmallMat m_base;
    try {
        base = construct_optimal(cf, spec).params;
        m_base = jacobian_matrix(cf, base, spec);
        have_base = true;
    } catch (const std::exception&) {
        // No closed-form base (degenerate spec); raw draws only.
    }

    for (int attempt = 0; attempt < budget; ++attempt) {
        PolygonParams x;
        if (attempt % 2 == 1 && have_base) {
            std::vector<double> d(static_cast<size_t>(n) + 2);
            for (double& v : d) v = rng.uniform(-1.0, 1.0);
            std::vector<double> tang = project_to_nullspace(m_base, d);
            double nrm = vec_norm(tang);
            if (nrm < 1e-12) continue;
            x = apply_step(base, tang, rng.uniform(0.15, 1.1) / nrm);
        } else {
            x.l0 = rng.uniform(0.2, 2.5);
            x.theta = rng.uniform(0.0, 2.0 * k_pi);
            x.lengths.resize(n);
            for (int i = 0; i < n; ++i) x.lengths[i] = rng.uniform(0.2, 2.5);
        }

        PolygonParams proj;
        try {
            proj = project_to_constraint(cf, x, spec);
        } catch (const projection_failure&) {
            continue;
        }
        if (!is_member(cf, proj, spec, 1e-7)) continue;
        return proj;
    }
    std::ostringstream msg;
    msg << "no feasible sample in " << budget << " attempts (seed " << seed << ")";
    throw sampler_exhaustion(msg.str());
}

} // namespace hypolymin
