#include "hypolymin/spine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hypolymin/construction.hpp"

namespace hypolymin {

void validate_surface(const SurfaceType& st) {
    if (st.genus < 0) throw std::domain_error("genus must be nonnegative");
    if (st.punctures < 1) throw std::domain_error("at least one puncture is required");
    if (st.genus == 0 && st.punctures < 3)
        throw std::domain_error("genus 0 needs at least three punctures");
}

int spine_edge_count(const SurfaceType& st) {
    validate_surface(st);
    return 3 * (2 * st.genus + st.punctures - 2);
}

double spine_lower_bound(const SurfaceType& st) {
    return static_cast<double>(spine_edge_count(st)) * std::log(3.0);
}

double per_end_minimum(int n, CenterKind kind) {
    if (n < 1) throw std::domain_error("per_end_minimum: n must be positive");
    if (kind.tag == CenterKind::Tag::cusp) {
        // Each edge of the optimal all-2pi/3 cusp polygon has length
        // 2 asinh(cot(pi/3)) = log 3.
        return static_cast<double>(n) * std::log(3.0);
    }
    AngleSpec spec;
    spec.beta.assign(static_cast<size_t>(n), 2.0 * std::numbers::pi / 3.0);
    CenterFrame cf = make_center(kind);
    return construct_optimal(cf, spec).perimeter;
}

} // namespace hypolymin
