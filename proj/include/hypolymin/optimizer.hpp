#pragma once

#include <cstdint>
#include <string>

#include "hypolymin/polygon.hpp"

namespace hypolymin {

struct OptimizeOptions {
    int max_iter = 500;
    double tol_residual = 1e-9;   // closure residual at accepted iterates
    double tol_pgrad = 1e-8;      // projected-gradient stationarity
    double accept_residual = 1e-7;  // looser residual allowed mid-search
};

struct OptResult {
    PolygonParams params;
    double perimeter = 0.0;
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
    double projected_gradient_norm = 0.0;
    double tangency_spread = 0.0;
    double lambda = 0.0;          // multiplier of the critical condition z = lambda x0
    std::string diagnostics;
};

// Newton retraction onto the closure constraint, moving params minimally in
// the least-squares sense (Gauss-Newton steps with the analytic Jacobian).
// Post: residual <= tol. Throws projection_failure on divergence, after
// max_iter steps, or for starts with residual norm >= 8 (no silent answers
// from infeasible starts).
PolygonParams project_to_constraint(const CenterFrame& cf, const PolygonParams& params,
                                    const AngleSpec& spec, double tol = 1e-9,
                                    int max_iter = 50);

// Projected-gradient descent of the perimeter over the closure manifold:
// the step carries across iterations (grown after acceptance, halved by the
// Armijo backtracking), each accepted iterate is re-projected, and the
// perimeter is strictly monotone across accepted iterates. Once perimeter
// comparisons drown in projection roundoff, a fixed-step polish against a
// tighter projection finishes the run, judged on the gradient norm alone.
// Stalls at the boundary (some l_i -> 0, or cone l0 -> 0) trigger
// boundary_escape. Requires the initial residual <= options.accept_residual.
OptResult minimize_perimeter(const CenterFrame& cf, const AngleSpec& spec,
                             const PolygonParams& init, const OptimizeOptions& options = {});

// Certificate of perimeter-criticality for a closed polygon. Criticality is
// rank(Mbar) = 3 where Mbar stacks the perimeter gradient row (0,0,1,...,1)
// under M; equivalently the multiplier z with M^t z = -gradient is
// proportional to x0, and the common tangency value is -1/lambda.
struct CriticalityCertificate {
    bool critical = false;
    double sigma_ratio = 0.0;     // sigma_4 / sigma_1 of Mbar (0 when n+2 <= 3)
    double rank_m_ratio = 0.0;    // sigma_3 / sigma_1 of M (rank-3 sanity)
    double lambda = 0.0;
    double lambda_residual = 0.0; // relative deviation of z from lambda * x0
    double spread = 0.0;          // tangency_spread of the edge lines
};

CriticalityCertificate criticality_certificate(const CenterFrame& cf, const Polygon& poly,
                                               double sigma_tol = 1e-7);

// Perturbs a boundary configuration (some l_i = 0 and/or cone l0 = 0) into the
// interior while strictly decreasing the perimeter:
//   cone vertex at the center: realign theta so (1-gamma)e0 = lambda(e1+en)
//   with lambda > 0, then move along (l0., theta., l.) = (1, 0, -lambda, 0,
//   ..., 0, -lambda), whose perimeter derivative is -2 lambda;
//   zero-length edges: open them along a nullspace direction of M with unit
//   opening rates; such a direction has strictly negative perimeter
//   derivative (corner cut), with a stratum descent component added when the
//   configuration is not stratum-critical.
// Interior input is returned unchanged. Throws escape_failure when no
// feasible strictly-decreasing perturbation is found.
PolygonParams boundary_escape(const CenterFrame& cf, const PolygonParams& params,
                              const AngleSpec& spec);

// Deterministic rejection sampler for members of the polygon space. Even
// attempts draw raw chart coordinates, odd attempts kick the optimal polygon
// along a random constraint-tangent direction; either way the draw is Newton
// projected and membership checked under a bounded retry budget. Identical
// output for identical (cf, spec, seed). Throws sampler_exhaustion after the
// budget.
PolygonParams random_feasible(const CenterFrame& cf, const AngleSpec& spec, std::uint64_t seed);

// splitmix64-based generator: tiny, portable, reproducible across platforms.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform();                      // [0, 1)
    double uniform(double a, double b);    // [a, b)
};

} // namespace hypolymin
