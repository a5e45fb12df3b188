#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hypolymin/construction.hpp"
#include "hypolymin/document.hpp"

using namespace hypolymin;

namespace {

const double kPi = 3.14159265358979323846;

PolygonDocument sample_document(CenterKind kind, const AngleSpec& spec) {
    CenterFrame cf = make_center(kind);
    ConstructionResult out = construct_optimal(cf, spec);
    return make_document(cf, spec, out.params, out.polygon, out.residual_norm,
                         out.tangency_spread, true, out.level.c);
}

PolygonDocument cusp_doc() {
    return sample_document(CenterKind::cusp(),
                           AngleSpec{{2.0 * kPi / 3.0, 2.0 * kPi / 3.0, 2.0 * kPi / 3.0}});
}

} // namespace

TEST_CASE("json round trip is exact") {
    PolygonDocument doc = cusp_doc();
    std::string text = document_to_json(doc);
    PolygonDocument back = document_from_json(text);

    CHECK(back.center.tag == doc.center.tag);
    CHECK(back.angles == doc.angles);
    CHECK(back.params.l0 == doc.params.l0);
    CHECK(back.params.theta == doc.params.theta);
    CHECK(back.params.lengths == doc.params.lengths);
    CHECK(back.perimeter == doc.perimeter);
    CHECK(back.residual == doc.residual);
    CHECK(back.tangency_spread == doc.tangency_spread);
    CHECK(back.critical == doc.critical);
    REQUIRE(back.level.has_value());
    CHECK(*back.level == *doc.level);
    for (size_t i = 0; i < doc.vertices.size(); ++i) {
        CHECK(back.vertices[i].x0 == doc.vertices[i].x0);
        CHECK(back.vertices[i].x1 == doc.vertices[i].x1);
        CHECK(back.vertices[i].x2 == doc.vertices[i].x2);
    }

    CHECK(document_to_json(back) == text);
}

TEST_CASE("json layout") {
    PolygonDocument doc = sample_document(CenterKind::geodesic(2.5),
                                          AngleSpec{{0.7, 1.2, 2.2, 1.0, 1.9, 1.5}});
    nlohmann::json j = nlohmann::json::parse(document_to_json(doc));
    CHECK(j["center"]["kind"] == "geodesic");
    CHECK(j["center"]["param"].get<double>() == doctest::Approx(2.5));
    CHECK(j["angles"].size() == 6);
    CHECK(j["params"]["lengths"].size() == 6);
    CHECK(j["vertices"].size() == 6);
    CHECK(j["edge_lines"].size() == 6);
    CHECK(j["certificates"]["critical"].get<bool>());
    CHECK(j.contains("level"));

    PolygonDocument bare = doc;
    bare.level.reset();
    nlohmann::json j2 = nlohmann::json::parse(document_to_json(bare));
    CHECK_FALSE(j2.contains("level"));
    PolygonDocument back = document_from_json(document_to_json(bare));
    CHECK_FALSE(back.level.has_value());
}

TEST_CASE("document parsing rejects malformed input") {
    CHECK_THROWS_AS(document_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(document_from_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS(document_from_json("[1,2,3]"), std::invalid_argument);

    std::string text = document_to_json(cusp_doc());

    auto patched = [&](auto&& edit) {
        nlohmann::json j = nlohmann::json::parse(text);
        edit(j);
        return j.dump();
    };

    CHECK_THROWS_AS(
        document_from_json(patched([](nlohmann::json& j) { j["center"]["kind"] = "orbifold"; })),
        std::invalid_argument);
    CHECK_THROWS_AS(
        document_from_json(patched([](nlohmann::json& j) { j["angles"] = "hello"; })),
        std::invalid_argument);
    CHECK_THROWS_AS(
        document_from_json(patched([](nlohmann::json& j) { j["vertices"].erase(0); })),
        std::invalid_argument);
    CHECK_THROWS_AS(
        document_from_json(patched([](nlohmann::json& j) { j.erase("params"); })),
        std::invalid_argument);
    CHECK_THROWS_AS(document_from_json(patched([](nlohmann::json& j) {
                        j["center"]["kind"] = "cone";
                        j["center"]["param"] = 7.0;  // no such cone angle
                    })),
                    std::invalid_argument);
}

TEST_CASE("svg output is deterministic and well formed") {
    PolygonDocument doc = cusp_doc();
    std::string svg = render_svg(doc);
    CHECK(render_svg(doc) == svg);
    CHECK(svg.rfind("<svg xmlns=", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("clipPath") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);  // inscribed equidistant
    CHECK(svg.find("warning") == std::string::npos);

    RenderOptions small;
    small.size_px = 400;
    small.draw_vertices = false;
    std::string svg2 = render_svg(doc, small);
    CHECK(svg2.find("width=\"400\"") != std::string::npos);
    CHECK(svg2.find("r=\"2.5\"") == std::string::npos);
    CHECK(svg.find("r=\"2.5\"") != std::string::npos);
}

TEST_CASE("svg flags zero-length edges") {
    PolygonDocument doc = cusp_doc();
    doc.params.lengths[1] = 0.0;
    std::string svg = render_svg(doc);
    CHECK(svg.find("warning: edge 2 has zero length") != std::string::npos);
}

TEST_CASE("disc geometry behind the renderer") {
    // The renderer draws each edge as an arc of the circle with center
    // (e1/e0, e2/e0) and radius 1/|e0| in disc coordinates. That circle is
    // determined here independently: it must be orthogonal to the unit circle
    // (|center|^2 - r^2 = 1) and pass through the projected endpoints.
    CenterKind kind = CenterKind::geodesic(2.5);
    AngleSpec spec{{0.7, 1.2, 2.2, 1.0, 1.9, 1.5}};
    CenterFrame cf = make_center(kind);
    ConstructionResult out = construct_optimal(cf, spec);

    size_t n = out.polygon.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec3L& e = out.polygon.edge_lines[i];
        REQUIRE(std::abs(e.x0) > 1e-9);
        double ocx = e.x1 / e.x0, ocy = e.x2 / e.x0;
        double r = 1.0 / std::abs(e.x0);
        CHECK(ocx * ocx + ocy * ocy - r * r == doctest::Approx(1.0).epsilon(1e-9));

        Vec3L va = out.polygon.vertices[i];
        Vec3L vb = (i + 1 < n) ? out.polygon.vertices[i + 1]
                               : cf.gamma.apply(out.polygon.vertices[0]);
        for (const Vec3L& v : {va, vb}) {
            auto [x, y] = poincare_project(v);
            double d = std::hypot(x - ocx, y - ocy);
            CHECK(d == doctest::Approx(r).epsilon(1e-9));
        }
    }
}

TEST_CASE("equidistant curves project to the drawn circles") {
    SUBCASE("cone: circle about the origin of radius tanh(rho/2)") {
        double rho = 0.85;
        CenterFrame cf = make_center(CenterKind::cone(1.2));
        Vec3L start{std::cosh(rho), std::sinh(rho), 0.0};
        for (double phi : {0.0, 0.7, 2.1, 4.4}) {
            Vec3L p = exp_so21(cf.x0, -phi).apply(start);
            auto [x, y] = poincare_project(p);
            CHECK(std::hypot(x, y) == doctest::Approx(std::tanh(rho / 2.0)).epsilon(1e-12));
        }
    }
    SUBCASE("cusp: horocycle circle through the ideal point") {
        double h = 3.0, tau = std::log(h);
        CenterFrame cf = make_center(CenterKind::cusp());
        double right = std::tanh(tau / 2.0);
        double ocx = (right - 1.0) / 2.0, r = (right + 1.0) / 2.0;
        Vec3L start{std::cosh(tau), std::sinh(tau), 0.0};
        for (double s : {0.0, 0.4, -1.3, 2.2}) {
            Vec3L p = exp_so21(cf.x0, s).apply(start);
            auto [x, y] = poincare_project(p);
            CHECK(std::hypot(x - ocx, y) == doctest::Approx(r).epsilon(1e-12));
        }
    }
    SUBCASE("geodesic: equidistant circle through the axis endpoints") {
        double a = 0.9;
        CenterFrame cf = make_center(CenterKind::geodesic(1.0));
        double ocx = -1.0 / std::sinh(a), r = 1.0 / std::tanh(a);
        Vec3L start{std::cosh(a), std::sinh(a), 0.0};
        for (double s : {0.0, 0.8, -1.6, 2.5}) {
            Vec3L p = exp_so21(cf.x0, s).apply(start);
            auto [x, y] = poincare_project(p);
            CHECK(std::hypot(x - ocx, y) == doctest::Approx(r).epsilon(1e-12));
        }
    }
}
