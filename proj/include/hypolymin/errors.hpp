#pragma once

#include <stdexcept>
#include <string>

namespace hypolymin {

// The holonomy mismatch of a polygon chart point is measured through the group
// logarithm; a mismatch whose rotation part reaches pi has no principal logarithm.
struct out_of_chart : std::runtime_error {
    explicit out_of_chart(const std::string& what) : std::runtime_error(what) {}
};

// Newton retraction onto the closure constraint did not reach tolerance.
struct projection_failure : std::runtime_error {
    explicit projection_failure(const std::string& what) : std::runtime_error(what) {}
};

// Angle/center data admits no polygon (empty parameter space).
struct infeasible_spec : std::domain_error {
    explicit infeasible_spec(const std::string& what) : std::domain_error(what) {}
};

// A single tangency block cannot exist at the requested equidistant level.
struct infeasible_block : std::domain_error {
    explicit infeasible_block(const std::string& what) : std::domain_error(what) {}
};

// No holonomy of the prescribed type joins the end frames of the unfolded path,
// or the joined polygon fails membership. Reconstruction input is necessary
// data, not sufficient data, so this is an expected outcome, not a bug.
struct reconstruction_infeasible : std::runtime_error {
    explicit reconstruction_infeasible(const std::string& what) : std::runtime_error(what) {}
};

// A boundary configuration where no perimeter-decreasing interior perturbation
// was found. Should not happen for valid specs; treated as a hard diagnostic.
struct escape_failure : std::runtime_error {
    explicit escape_failure(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic rejection sampler ran out of retries.
struct sampler_exhaustion : std::runtime_error {
    explicit sampler_exhaustion(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hypolymin
