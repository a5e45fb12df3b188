#pragma once

#include <optional>
#include <string>

#include "hypolymin/construction.hpp"
#include "hypolymin/polygon.hpp"

namespace hypolymin {

// Self-verifying polygon artifact: everything needed to re-check the result
// without re-running (chart coordinates, developed geometry, certificates).
struct PolygonDocument {
    CenterKind center;
    std::vector<double> angles;
    PolygonParams params;
    std::vector<Vec3L> vertices;
    std::vector<Vec3L> edge_lines;
    double perimeter = 0.0;
    double residual = 0.0;
    double tangency_spread = 0.0;
    bool critical = false;
    std::optional<double> level;  // inscribed-equidistant level when known
};

PolygonDocument make_document(const CenterFrame& cf, const AngleSpec& spec,
                              const PolygonParams& params, const Polygon& poly,
                              double residual, double spread, bool critical,
                              std::optional<double> level);

// JSON serialization; doubles round-trip bit-exactly (shortest decimal form
// that parses back to the identical value).
std::string document_to_json(const PolygonDocument& doc);
PolygonDocument document_from_json(const std::string& text);  // throws std::invalid_argument

struct RenderOptions {
    int size_px = 640;
    bool draw_vertices = true;
};

// Static Poincare-disc figure: unit circle, geodesic edges as circular arcs
// orthogonal to the boundary, the inscribed equidistant (circle around a cone
// point, horocycle for a cusp, equidistant arc for a geodesic), and the
// center marker. Deterministic text for fixed input; zero-length edges are
// annotated with a warning element.
std::string render_svg(const PolygonDocument& doc, const RenderOptions& options = {});

} // namespace hypolymin
