#include "hypolymin/document.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hypolymin/center.hpp"

namespace hypolymin {

namespace {

using nlohmann::json;

const char* kind_name(CenterKind::Tag tag) {
    switch (tag) {
        case CenterKind::Tag::cusp: return "cusp";
        case CenterKind::Tag::cone: return "cone";
        case CenterKind::Tag::geodesic: return "geodesic";
    }
    return "?";
}

json vec_to_json(const Vec3L& v) { return json::array({v.x0, v.x1, v.x2}); }

Vec3L vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

PolygonDocument make_document(const CenterFrame& cf, const AngleSpec& spec,
                              const PolygonParams& params, const Polygon& poly,
                              double residual, double spread, bool critical,
                              std::optional<double> level) {
    PolygonDocument doc;
    doc.center = cf.kind;
    doc.angles = spec.beta;
    doc.params = params;
    doc.vertices = poly.vertices;
    doc.edge_lines = poly.edge_lines;
    doc.perimeter = poly.perimeter;
    doc.residual = residual;
    doc.tangency_spread = spread;
    doc.critical = critical;
    doc.level = level;
    return doc;
}

std::string document_to_json(const PolygonDocument& doc) {
    json j;
    j["center"] = {{"kind", kind_name(doc.center.tag)}, {"param", doc.center.param}};
    j["angles"] = doc.angles;
    j["params"] = {{"l0", doc.params.l0},
                   {"theta", doc.params.theta},
                   {"lengths", doc.params.lengths}};
    j["vertices"] = json::array();
    for (const Vec3L& v : doc.vertices) j["vertices"].push_back(vec_to_json(v));
    j["edge_lines"] = json::array();
    for (const Vec3L& e : doc.edge_lines) j["edge_lines"].push_back(vec_to_json(e));
    j["perimeter"] = doc.perimeter;
    j["certificates"] = {{"residual", doc.residual},
                         {"tangency_spread", doc.tangency_spread},
                         {"critical", doc.critical}};
    if (doc.level) j["level"] = *doc.level;
    return j.dump(2) + "\n";
}

PolygonDocument document_from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        PolygonDocument doc;

        std::string kind = j.at("center").at("kind").get<std::string>();
        double param = j.at("center").at("param").get<double>();
        if (kind == "cusp")
            doc.center = CenterKind::cusp();
        else if (kind == "cone")
            doc.center = CenterKind::cone(param);
        else if (kind == "geodesic")
            doc.center = CenterKind::geodesic(param);
        else
            throw std::invalid_argument("unknown center kind '" + kind + "'");

        doc.angles = j.at("angles").get<std::vector<double>>();
        doc.params.l0 = j.at("params").at("l0").get<double>();
        doc.params.theta = j.at("params").at("theta").get<double>();
        doc.params.lengths = j.at("params").at("lengths").get<std::vector<double>>();
        for (const auto& v : j.at("vertices")) doc.vertices.push_back(vec_from_json(v));
        for (const auto& e : j.at("edge_lines")) doc.edge_lines.push_back(vec_from_json(e));
        doc.perimeter = j.at("perimeter").get<double>();
        doc.residual = j.at("certificates").at("residual").get<double>();
        doc.tangency_spread = j.at("certificates").at("tangency_spread").get<double>();
        doc.critical = j.at("certificates").at("critical").get<bool>();
        if (j.contains("level")) doc.level = j.at("level").get<double>();

        size_t n = doc.angles.size();
        if (doc.params.lengths.size() != n || doc.vertices.size() != n ||
            doc.edge_lines.size() != n)
            throw std::invalid_argument("inconsistent polygon sizes");
        return doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("document parse error: ") + e.what());
    } catch (const std::domain_error& e) {
        // Out-of-range center parameters are a parse problem here, not a
        // geometry problem.
        throw std::invalid_argument(std::string("document parse error: ") + e.what());
    }
}

namespace {

struct Px {
    double x, y;
};

} // namespace

std::string render_svg(const PolygonDocument& doc, const RenderOptions& options) {
    const int size = options.size_px;
    const double cx = size * 0.5, cy = size * 0.5;
    const double scale = size * 0.47;
    auto px = [&](double x, double y) { return Px{cx + scale * x, cy - scale * y}; };
    auto disc_point = [&](const Vec3L& p) {
        auto [x, y] = poincare_project(p);
        return px(x, y);
    };

    std::ostringstream s;
    s << std::fixed << std::setprecision(6);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    s << "  <defs><clipPath id=\"disc\"><circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\""
      << scale << "\"/></clipPath></defs>\n";
    s << "  <circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << scale
      << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\"/>\n";

    // Inscribed equidistant, clipped to the disc. The canonical frames put a
    // cone point at the origin, a cusp at the ideal point (-1, 0), and a
    // geodesic on the vertical diameter.
    if (doc.level) {
        double c = *doc.level;
        s << "  <g clip-path=\"url(#disc)\">";
        switch (doc.center.tag) {
            case CenterKind::Tag::cone: {
                double rho = std::asinh(-c);
                s << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\""
                  << scale * std::tanh(rho / 2.0) << "\"";
                break;
            }
            case CenterKind::Tag::cusp: {
                double tau = std::log(-c);
                double right = std::tanh(tau / 2.0);
                Px ctr = px((right - 1.0) / 2.0, 0.0);
                s << "<circle cx=\"" << ctr.x << "\" cy=\"" << ctr.y << "\" r=\""
                  << scale * (right + 1.0) / 2.0 << "\"";
                break;
            }
            case CenterKind::Tag::geodesic: {
                double a = std::acosh(c);
                Px ctr = px(-1.0 / std::sinh(a), 0.0);
                s << "<circle cx=\"" << ctr.x << "\" cy=\"" << ctr.y << "\" r=\""
                  << scale / std::tanh(a) << "\"";
                break;
            }
        }
        s << " fill=\"none\" stroke=\"#c07020\" stroke-width=\"1\" "
             "stroke-dasharray=\"4 3\"/></g>\n";
    }

    // Center marker.
    switch (doc.center.tag) {
        case CenterKind::Tag::cone:
            s << "  <circle cx=\"" << cx << "\" cy=\"" << cy
              << "\" r=\"3\" fill=\"#c07020\"/>\n";
            break;
        case CenterKind::Tag::cusp: {
            Px m = px(-1.0, 0.0);
            s << "  <circle cx=\"" << m.x << "\" cy=\"" << m.y
              << "\" r=\"3\" fill=\"#c07020\"/>\n";
            break;
        }
        case CenterKind::Tag::geodesic: {
            Px a = px(0.0, -1.0), b = px(0.0, 1.0);
            s << "  <line x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x << "\" y2=\""
              << b.y << "\" stroke=\"#c07020\" stroke-width=\"1\" stroke-dasharray=\"2 3\"/>\n";
            break;
        }
    }

    // Polygon edges, each the arc of the circle carrying its geodesic. The
    // closing edge runs to the holonomy image of the first vertex.
    CenterFrame cf = make_center(doc.center);
    size_t n = doc.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec3L& e = doc.edge_lines[i];
        Vec3L va = doc.vertices[i];
        Vec3L vb = (i + 1 < n) ? doc.vertices[i + 1] : cf.gamma.apply(doc.vertices[0]);
        Px a = disc_point(va), b = disc_point(vb);
        s << "  <path d=\"M " << a.x << " " << a.y;
        if (std::abs(e.x0) < 1e-9) {
            // The geodesic through the origin projects to a straight chord.
            s << " L " << b.x << " " << b.y;
        } else {
            Px c = px(e.x1 / e.x0, e.x2 / e.x0);
            double r = scale / std::abs(e.x0);
            double ux = a.x - c.x, uy = a.y - c.y, vx = b.x - c.x, vy = b.y - c.y;
            int sweep = (ux * vy - uy * vx) > 0.0 ? 1 : 0;
            s << " A " << r << " " << r << " 0 0 " << sweep << " " << b.x << " " << b.y;
        }
        s << "\" fill=\"none\" stroke=\"#20508c\" stroke-width=\"1.5\"/>\n";
    }

    if (options.draw_vertices) {
        for (size_t i = 0; i < n; ++i) {
            Px p = disc_point(doc.vertices[i]);
            s << "  <circle cx=\"" << p.x << "\" cy=\"" << p.y
              << "\" r=\"2.5\" fill=\"#20508c\"/>\n";
        }
    }

    int warn_row = 0;
    for (size_t i = 0; i < doc.params.lengths.size(); ++i) {
        if (doc.params.lengths[i] <= 1e-12) {
            s << "  <text x=\"8\" y=\"" << 16 + 14 * warn_row
              << "\" font-size=\"12\" fill=\"#a02020\">warning: edge " << (i + 1)
              << " has zero length</text>\n";
            ++warn_row;
        }
    }

    s << "</svg>\n";
    return s.str();
}

} // namespace hypolymin
