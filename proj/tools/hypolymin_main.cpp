#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hypolymin/center.hpp"
#include "hypolymin/construction.hpp"
#include "hypolymin/document.hpp"
#include "hypolymin/errors.hpp"
#include "hypolymin/optimizer.hpp"
#include "hypolymin/polygon.hpp"
#include "hypolymin/spine.hpp"

namespace {

using namespace hypolymin;

// Usage errors (malformed command line) exit 64, infeasible or invalid input
// values exit 2, internal failures exit 1.
constexpr int k_exit_usage = 64;
constexpr int k_exit_infeasible = 2;
constexpr int k_exit_internal = 1;

void strip(std::string& t) {
    size_t b = t.find_first_not_of(" \t");
    size_t e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? "" : t.substr(b, e - b + 1);
}

double parse_number(const std::string& t) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number '" + t + "'");
    }
    if (used != t.size()) throw std::invalid_argument("bad number '" + t + "'");
    return v;
}

// Accepts plain decimals and pi fractions: "1.2", "pi", "pi/3", "2*pi/3",
// "0.5*pi".
double parse_angle_token(std::string tok) {
    strip(tok);
    if (tok.empty()) throw std::invalid_argument("empty angle token");
    size_t pos = tok.find("pi");
    if (pos == std::string::npos) return parse_number(tok);

    std::string pre = tok.substr(0, pos), post = tok.substr(pos + 2);
    strip(pre);
    strip(post);
    double factor = 1.0, divisor = 1.0;
    if (!pre.empty()) {
        if (pre.back() != '*') throw std::invalid_argument("bad angle token '" + tok + "'");
        pre.pop_back();
        strip(pre);
        if (pre.empty()) throw std::invalid_argument("bad angle token '" + tok + "'");
        factor = parse_number(pre);
    }
    if (!post.empty()) {
        if (post.front() != '/') throw std::invalid_argument("bad angle token '" + tok + "'");
        divisor = parse_number(post.substr(1));
        if (divisor == 0.0) throw std::invalid_argument("division by zero in '" + tok + "'");
    }
    return factor * std::numbers::pi / divisor;
}

AngleSpec parse_angles(const std::string& text) {
    AngleSpec spec;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) spec.beta.push_back(parse_angle_token(tok));
    if (spec.beta.empty()) throw std::invalid_argument("no angles given");
    return spec;
}

CenterKind parse_center(const std::string& text) {
    if (text == "cusp") return CenterKind::cusp();
    size_t colon = text.find(':');
    if (colon != std::string::npos) {
        std::string head = text.substr(0, colon);
        double value = parse_number(text.substr(colon + 1));
        if (head == "cone") return CenterKind::cone(value);
        if (head == "geodesic") return CenterKind::geodesic(value);
    }
    throw std::invalid_argument("--center must be cusp, cone:<alpha>, or geodesic:<r>");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void emit_outputs(const PolygonDocument& doc, const std::string& out_path,
                  const std::string& svg_path) {
    if (!out_path.empty()) write_text_file(out_path, document_to_json(doc));
    if (!svg_path.empty()) write_text_file(svg_path, render_svg(doc));
}

void print_summary(std::ostream& os, const PolygonDocument& doc) {
    os << std::setprecision(17);
    os << "n=" << doc.angles.size() << "\n";
    os << "perimeter=" << doc.perimeter << "\n";
    os << "residual=" << doc.residual << "\n";
    os << "tangency_spread=" << doc.tangency_spread << "\n";
    os << "critical=" << (doc.critical ? "yes" : "no") << "\n";
    if (doc.level) os << "level=" << *doc.level << "\n";
}

int run_construct(const CenterKind& kind, const AngleSpec& spec, const std::string& out_path,
                  const std::string& svg_path) {
    CenterFrame cf = make_center(kind);
    ConstructionResult res = construct_optimal(cf, spec);
    CriticalityCertificate cert = criticality_certificate(cf, res.polygon);
    PolygonDocument doc = make_document(cf, spec, res.params, res.polygon, res.residual_norm,
                                        res.tangency_spread, cert.critical, res.level.c);
    print_summary(std::cout, doc);
    emit_outputs(doc, out_path, svg_path);
    return 0;
}

int run_optimize(const CenterKind& kind, const AngleSpec& spec, int starts, std::uint64_t seed,
                 const OptimizeOptions& options, const std::string& out_path,
                 const std::string& svg_path) {
    CenterFrame cf = make_center(kind);
    validate_spec(kind, spec);

    std::vector<OptResult> converged;
    int failures = 0;
    for (int s = 0; s < starts; ++s) {
        try {
            PolygonParams start = random_feasible(cf, spec, seed + static_cast<std::uint64_t>(s));
            OptResult r = minimize_perimeter(cf, spec, start, options);
            if (r.converged)
                converged.push_back(std::move(r));
            else
                ++failures;
        } catch (const sampler_exhaustion&) {
            ++failures;
        } catch (const projection_failure&) {
            ++failures;
        } catch (const escape_failure&) {
            ++failures;
        }
    }
    if (converged.empty()) {
        std::cerr << "error: none of " << starts << " starts converged\n";
        return k_exit_internal;
    }

    size_t best = 0;
    double lo = converged[0].perimeter, hi = converged[0].perimeter;
    for (size_t i = 1; i < converged.size(); ++i) {
        lo = std::min(lo, converged[i].perimeter);
        hi = std::max(hi, converged[i].perimeter);
        if (converged[i].perimeter < converged[best].perimeter) best = i;
    }
    const OptResult& r = converged[best];

    Polygon poly = develop_polygon(cf, r.params, spec, options.accept_residual);
    CriticalityCertificate cert = criticality_certificate(cf, poly);
    // At a certified optimum the tangency values agree; their mean is the
    // level of the inscribed equidistant.
    std::optional<double> level;
    if (cert.critical) {
        auto vals = equidistant_values(cf, poly.edge_lines);
        double mean = 0.0;
        for (double v : vals) mean += v;
        level = mean / static_cast<double>(vals.size());
    }
    PolygonDocument doc = make_document(cf, spec, r.params, poly, r.residual_norm,
                                        cert.spread, cert.critical, level);

    std::cout << std::setprecision(17);
    std::cout << "starts=" << starts << " converged=" << converged.size()
              << " failed=" << failures << "\n";
    std::cout << "perimeter_spread=" << (hi - lo) << "\n";
    print_summary(std::cout, doc);
    emit_outputs(doc, out_path, svg_path);
    return 0;
}

int run_spine(int genus, int punctures) {
    SurfaceType st{genus, punctures};
    int edges = spine_edge_count(st);
    double bound = spine_lower_bound(st);
    std::ostringstream line;
    line << "edges=" << edges << " bound=" << std::fixed << std::setprecision(9) << bound;
    std::cout << line.str() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal-perimeter hyperbolic polygons with prescribed angles enclosing a "
                 "cusp, cone point, or closed geodesic"};
    app.require_subcommand(1);
    app.footer("Environment: HYPOLYMIN_TOL overrides the optimizer residual tolerance "
               "(default 1e-9).");

    std::string center_str, angles_str, out_path, svg_path;
    int starts = 10;
    std::uint64_t seed = 1;
    double tol_residual = -1.0, tol_pgrad = -1.0;
    int max_iter = -1;
    int genus = 0, punctures = 0;

    CLI::App* c_construct =
        app.add_subcommand("construct", "assemble the optimal polygon in closed form");
    c_construct->add_option("--center", center_str, "cusp | cone:<alpha> | geodesic:<r>")
        ->required();
    c_construct
        ->add_option("--angles", angles_str,
                     "comma-separated interior angles; decimals or pi fractions like 2*pi/3")
        ->required();
    c_construct->add_option("--out", out_path, "write the polygon document (JSON)");
    c_construct->add_option("--svg", svg_path, "write a disc picture (SVG)");

    CLI::App* c_optimize =
        app.add_subcommand("optimize", "minimize the perimeter from random feasible starts");
    c_optimize->add_option("--center", center_str, "cusp | cone:<alpha> | geodesic:<r>")
        ->required();
    c_optimize
        ->add_option("--angles", angles_str,
                     "comma-separated interior angles; decimals or pi fractions like 2*pi/3")
        ->required();
    c_optimize->add_option("--starts", starts, "number of random starts (default 10)");
    c_optimize->add_option("--seed", seed, "base seed for the start sampler (default 1)");
    c_optimize->add_option("--tol-residual", tol_residual, "closure residual tolerance");
    c_optimize->add_option("--tol-pgrad", tol_pgrad, "projected-gradient tolerance");
    c_optimize->add_option("--max-iter", max_iter, "iteration budget per start");
    c_optimize->add_option("--out", out_path, "write the polygon document (JSON)");
    c_optimize->add_option("--svg", svg_path, "write a disc picture (SVG)");

    CLI::App* c_spine = app.add_subcommand("spine", "spine-length lower bound for a surface");
    c_spine->add_option("--genus", genus, "genus of the surface")->required();
    c_spine->add_option("--punctures", punctures, "number of punctures")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : k_exit_usage;
    }

    CenterKind kind = CenterKind::cusp();
    AngleSpec spec;
    if (c_construct->parsed() || c_optimize->parsed()) {
        try {
            kind = parse_center(center_str);
            spec = parse_angles(angles_str);
        } catch (const std::invalid_argument& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return k_exit_usage;
        } catch (const std::domain_error& e) {
            // The center parameter parsed as a number but lies outside the
            // accepted range, e.g. cone:7.
            std::cerr << "error: " << e.what() << "\n";
            return k_exit_infeasible;
        }
    }

    OptimizeOptions options;
    if (const char* env = std::getenv("HYPOLYMIN_TOL")) {
        try {
            options.tol_residual = parse_number(env);
        } catch (const std::invalid_argument&) {
            std::cerr << "usage error: HYPOLYMIN_TOL is not a number\n";
            return k_exit_usage;
        }
    }
    if (tol_residual > 0.0) options.tol_residual = tol_residual;
    if (tol_pgrad > 0.0) options.tol_pgrad = tol_pgrad;
    if (max_iter > 0) options.max_iter = max_iter;
    options.accept_residual = std::max(options.accept_residual, options.tol_residual);

    try {
        if (c_construct->parsed()) return run_construct(kind, spec, out_path, svg_path);
        if (c_optimize->parsed())
            return run_optimize(kind, spec, starts, seed, options, out_path, svg_path);
        if (c_spine->parsed()) return run_spine(genus, punctures);
    } catch (const std::domain_error& e) {
        // Covers infeasible_spec and infeasible_block.
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_infeasible;
    } catch (const reconstruction_infeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_infeasible;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return k_exit_internal;
    }
    return k_exit_usage;
}
