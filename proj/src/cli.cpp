#include "isothermic/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "isothermic/bianchi.hpp"
#include "isothermic/cmc.hpp"
#include "isothermic/fixtures.hpp"
#include "isothermic/io.hpp"
#include "isothermic/verify.hpp"

namespace isothermic::cli {

using curves::Grid;
using curves::PolarizedCurve;
using nlohmann::json;
using surface::SemiDiscreteSurface;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw UsageError(what + ": not a number: '" + text + "'");
    return v;
}

int parse_int(const std::string& text, const std::string& what) {
    int v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw UsageError(what + ": not an integer: '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(parse_double(p, what));
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

Eigen::VectorXd parse_point(const std::string& text, int dim, const std::string& what) {
    const auto values = parse_list(text, what);
    if (static_cast<int>(values.size()) != dim) {
        throw UsageError(what + ": expected " + std::to_string(dim) + " coordinates, got '" + text + "'");
    }
    return Eigen::Map<const Eigen::VectorXd>(values.data(), dim);
}

Grid parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("--grid: expected s0:s1:N");
    return Grid(parse_double(parts[0], "--grid"), parse_double(parts[1], "--grid"), parse_int(parts[2], "--grid"));
}

darboux::IntegrationOptions parse_step_policy(const std::string& text) {
    darboux::IntegrationOptions options;
    if (text == "grid") return options;
    if (text.rfind("substep:", 0) == 0) {
        options.substeps = parse_int(text.substr(8), "--step-policy");
        if (options.substeps < 1) throw UsageError("--step-policy: substep count must be >= 1");
        return options;
    }
    throw UsageError("--step-policy: expected grid or substep:k");
}

transforms::MetricCorrection parse_metric_correction(const std::string& text) {
    if (text == "on") return {};
    if (text == "off") return {0};
    if (text.rfind("every:", 0) == 0) {
        const int every = parse_int(text.substr(6), "--metric-correction");
        if (every < 1) throw UsageError("--metric-correction: interval must be >= 1");
        return {every};
    }
    throw UsageError("--metric-correction: expected on, off or every:k");
}

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(3) << v;
    return s.str();
}

void emit(const json& j, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << io::dump(j);
    } else {
        io::write_json(path, j);
    }
}

PolarizedCurve read_curve(const std::string& path) {
    const json j = io::read_json(path);
    if (io::is_surface_json(j)) throw io::DataError(path + ": expected a curve, found a surface");
    return io::curve_from_json(j);
}

SemiDiscreteSurface read_surface(const std::string& path) {
    const json j = io::read_json(path);
    if (!io::is_surface_json(j)) throw io::DataError(path + ": expected a surface");
    return io::surface_from_json(j);
}

// Surface files as they are, curve files as one-curve surfaces.
SemiDiscreteSurface read_any_as_surface(const std::string& path) {
    const json j = io::read_json(path);
    if (io::is_surface_json(j)) return io::surface_from_json(j);
    return SemiDiscreteSurface({io::curve_from_json(j)}, {});
}

struct Settings {
    std::string step_policy = "grid";
    std::string metric_correction = "on";

    darboux::IntegrationOptions integration() const { return parse_step_policy(step_policy); }
    transforms::MetricCorrection correction() const { return parse_metric_correction(metric_correction); }
};

// ---- curve

struct CurveArgs {
    std::string family = "circle";
    std::string fixture;
    double radius = 1.0;
    double pitch = 0.0;
    int dim = 2;
    std::string grid = "0:2:2001";
    std::optional<double> m;
    bool arc_length = false;
    bool no_xprime = false;
    std::string out;
};

int cmd_curve(const CurveArgs& a, std::ostream& out) {
    const Grid grid = parse_grid(a.grid);
    PolarizedCurve c = [&] {
        if (!a.fixture.empty()) return fixtures::curve_fixture(a.fixture, grid);
        if (a.family == "circle") return curves::make_curve(curves::family::Circle{a.radius, a.dim, {}}, grid);
        if (a.family == "helix") return curves::make_curve(curves::family::Helix{a.radius, a.pitch}, grid);
        if (a.family == "line") return curves::make_curve(curves::family::Line{a.dim}, grid);
        throw UsageError("--family: expected circle, helix or line");
    }();
    if (a.arc_length) c = curves::arc_length_polarization(c);
    if (a.m) c = c.with_polarization(Eigen::VectorXd::Constant(grid.size(), *a.m));
    emit(io::curve_to_json(c, !a.no_xprime), a.out, out);
    return kOk;
}

// ---- darboux

struct DarbouxArgs {
    std::string in;
    double mu = 0.0;
    std::string init;
    std::string route = "linear";
    std::string out;
    bool report = false;
};

int cmd_darboux(const DarbouxArgs& a, const Settings& settings, std::ostream& out) {
    const PolarizedCurve c = read_curve(a.in);
    const Eigen::VectorXd start = parse_point(a.init, c.dim(), "--init");
    PolarizedCurve transform = [&] {
        if (a.route == "riccati") return darboux::integrate_riccati(c, a.mu, start, settings.integration());
        if (a.route == "linear") {
            const auto frame = minkowski::Frame::canonical(c.dim());
            const auto section = darboux::integrate_parallel_section(c, a.mu, minkowski::euclidean_lift(start, frame),
                                                                     settings.integration());
            return darboux::project(section, c.m());
        }
        throw UsageError("--route: expected riccati or linear");
    }();
    if (!a.out.empty()) io::write_json(a.out, io::curve_to_json(transform));
    if (!a.report) {
        if (a.out.empty()) out << io::dump(io::curve_to_json(transform));
        return kOk;
    }
    const auto check = darboux::is_darboux_pair(c, transform);
    out << "route " << a.route << "\n";
    out << "fitted mu " << num(check.mu) << " (requested " << num(a.mu) << ")\n";
    out << "cross ratio constancy " << sci(check.residual) << "\n";
    out << "reality residual " << sci(check.reality_residual) << "\n";
    const bool ok = check.ok && std::abs(check.mu - a.mu) <= 1e-6 * std::max(1.0, std::abs(a.mu));
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kVerificationFailed;
}

// ---- bianchi

struct BianchiArgs {
    std::string in;
    std::string mu;
    std::vector<std::string> init;
    std::string out;
};

int cmd_bianchi(const BianchiArgs& a, const Settings& settings, std::ostream& out) {
    const PolarizedCurve c = read_curve(a.in);
    const auto mu = parse_list(a.mu, "--mu");
    if (mu.size() != 2 && mu.size() != 3) throw UsageError("--mu: give two (quad) or three (cube) parameters");
    if (a.init.size() != mu.size()) throw UsageError("--init: give one start point per parameter");
    const auto lift = darboux::lift(c);
    const auto frame = minkowski::Frame::canonical(c.dim());
    std::vector<darboux::LightConeSection> sections;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        sections.push_back(darboux::integrate_parallel_section(
            lift, mu[i], minkowski::euclidean_lift(parse_point(a.init[i], c.dim(), "--init"), frame),
            settings.integration()));
    }
    const auto xi01 = bianchi::bianchi_quad(lift, sections[0], mu[0], sections[1], mu[1]);
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int k = 0; k < c.size(); ++k) {
        const double cr = bianchi::moebius_cross_ratio(lift.xi.col(k), sections[0].at(k), xi01.at(k), sections[1].at(k));
        lo = std::min(lo, cr);
        hi = std::max(hi, cr);
    }
    const double res0 = bianchi::parallel_residual(darboux::lift(sections[0], c.m()), mu[1], xi01);
    const double res1 = bianchi::parallel_residual(darboux::lift(sections[1], c.m()), mu[0], xi01, true);
    out << "quad cross ratio " << num(0.5 * (lo + hi)) << " (expected " << num(mu[1] / mu[0]) << "), spread "
        << sci(hi - lo) << "\n";
    out << "section residual along xi0 " << sci(res0) << ", along xi1 " << sci(res1) << "\n";
    bool ok = hi - lo < 1e-8 && std::abs(0.5 * (lo + hi) - mu[1] / mu[0]) < 1e-8 && res0 < 1e-6 && res1 < 1e-6;
    json j;
    j["mu"] = mu;
    auto put = [&](const char* name, const darboux::LightConeSection& s) {
        j["vertices"][name] = io::curve_to_json(darboux::project(s, c.m()));
    };
    j["vertices"]["x"] = io::curve_to_json(c);
    put("x0", sections[0]);
    put("x1", sections[1]);
    put("x01", xi01);
    if (mu.size() == 3) {
        const auto cube =
            bianchi::bianchi_cube(lift, sections[0], mu[0], sections[1], mu[1], sections[2], mu[2]);
        out << "cube route agreement " << sci(cube.route_residual) << "\n";
        ok = ok && cube.route_residual < 1e-6;
        put("x2", sections[2]);
        put("x02", cube.xi02);
        put("x12", cube.xi12);
        put("x012", cube.xi012);
    }
    if (!a.out.empty()) io::write_json(a.out, j);
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kVerificationFailed;
}

// ---- surface

struct SurfaceArgs {
    std::string in;
    std::string fixture;
    std::string grid = "0:2:2001";
    std::vector<std::string> layers;
    std::string out;
    double tol = 1e-6;
};

int cmd_surface_build(const SurfaceArgs& a, const Settings& settings, std::ostream& out) {
    if (!a.fixture.empty()) {
        emit(io::surface_to_json(fixtures::surface_fixture(a.fixture, parse_grid(a.grid))), a.out, out);
        return kOk;
    }
    if (a.in.empty()) throw UsageError("surface build: give --in with --layer, or --fixture");
    const PolarizedCurve seed = read_curve(a.in);
    std::vector<surface::Layer> layers;
    for (const auto& spec : a.layers) {
        const auto parts = split(spec, ':');
        if (parts.size() != 2) throw UsageError("--layer: expected mu:x,y[,z]");
        layers.push_back({parse_double(parts[0], "--layer"), parse_point(parts[1], seed.dim(), "--layer")});
    }
    if (layers.empty()) throw UsageError("surface build: at least one --layer required");
    emit(io::surface_to_json(surface::build_surface(seed, layers, settings.integration())), a.out, out);
    return kOk;
}

int cmd_surface_check(const SurfaceArgs& a, std::ostream& out) {
    const SemiDiscreteSurface s = read_surface(a.in);
    const auto report = surface::check_isothermic(s, a.tol);
    out << "edge  mu  mu_fit  reality  constancy  mu_error  nu_factorization\n";
    for (const auto& e : report.edges) {
        out << e.edge << "  " << num(e.mu) << "  " << num(e.mu_fit) << "  " << sci(e.reality) << "  "
            << sci(e.constancy) << "  " << sci(e.mu_error) << "  "
            << (e.nu_factorization ? sci(*e.nu_factorization) : std::string("-")) << "\n";
    }
    out << (report.ok ? "PASS" : "FAIL") << "\n";
    return report.ok ? kOk : kVerificationFailed;
}

int cmd_surface_moutard(const SurfaceArgs& a, std::ostream& out) {
    const SemiDiscreteSurface s = read_surface(a.in);
    const auto lift = surface::moutard_lift(s);
    out << "normalization " << sci(lift.normalization) << "\n";
    bool ok = lift.sign_violations.empty();
    for (int i = 0; i < s.edge_count(); ++i) {
        out << "edge " << i << "  area " << sci(lift.area[i]) << "  pairing " << sci(lift.pairing[i]) << "\n";
        ok = ok && lift.area[i] < 1e-7 && lift.pairing[i] < 1e-8;
    }
    if (!lift.sign_violations.empty()) out << "sign violations on " << lift.sign_violations.size() << " edges\n";
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kVerificationFailed;
}

// ---- dual, calapso

struct TransformArgs {
    std::string in;
    std::string start;
    double t = 0.0;
    std::string out;
};

int cmd_dual(const TransformArgs& a, std::ostream& out, std::ostream& err) {
    const json j = io::read_json(a.in);
    if (io::is_surface_json(j)) {
        const SemiDiscreteSurface s = io::surface_from_json(j);
        const Eigen::VectorXd start = a.start.empty() ? Eigen::VectorXd() : parse_point(a.start, s.dim(), "--start");
        const auto dual = surface::surface_christoffel(s, start);
        double worst = 0.0;
        for (double r : dual.consistency) worst = std::max(worst, r);
        err << "edge/smooth consistency " << sci(worst) << "\n";
        emit(io::surface_to_json(dual.dual), a.out, out);
        return worst < 1e-7 ? kOk : kVerificationFailed;
    }
    const PolarizedCurve c = io::curve_from_json(j);
    const Eigen::VectorXd start = a.start.empty() ? Eigen::VectorXd() : parse_point(a.start, c.dim(), "--start");
    const PolarizedCurve dual = transforms::christoffel_dual(c, start);
    const double residual = transforms::dual_of_dual_residual(c, dual);
    err << "dual-of-dual residual " << sci(residual) << "\n";
    emit(io::curve_to_json(dual), a.out, out);
    return residual < 1e-9 ? kOk : kVerificationFailed;
}

int cmd_calapso(const TransformArgs& a, const Settings& settings, std::ostream& out, std::ostream& err) {
    const json j = io::read_json(a.in);
    if (io::is_surface_json(j)) {
        const SemiDiscreteSurface s = io::surface_from_json(j);
        const auto result = surface::surface_calapso(s, a.t, settings.correction(), settings.integration());
        double worst = 0.0;
        for (double r : result.trivialization) worst = std::max(worst, r);
        err << "trivialization " << sci(worst) << "\n";
        emit(io::surface_to_json(result.transform), a.out, out);
        return worst < 1e-6 ? kOk : kVerificationFailed;
    }
    const PolarizedCurve c = io::curve_from_json(j);
    const auto lift = darboux::lift(c);
    const auto field = transforms::integrate_calapso(lift, a.t, {}, settings.correction(), settings.integration());
    const auto moved = transforms::transformed_curve(field, lift);
    const darboux::LightConeSection section{c.grid(), moved.xi, moved.dxi};
    std::vector<minkowski::MinkVector> points;
    for (int k = 0; k < c.size(); ++k) points.push_back(section.at(k));
    const PolarizedCurve image = darboux::project(section, c.m(), minkowski::Chart::avoiding(points));
    err << "metric drift " << sci(field.metric_drift()) << "\n";
    emit(io::curve_to_json(image), a.out, out);
    return field.metric_drift() < 1e-8 ? kOk : kVerificationFailed;
}

// ---- cmc

struct CmcArgs {
    std::string in;
    std::string fixture = "cmc-cylinder";
    double radius = 1.0;
    double spacing = 0.5;
    int curves = 4;
    std::string grid = "0:2:2001";
};

int cmd_cmc(const CmcArgs& a, std::ostream& out) {
    if (!a.in.empty()) {
        const SemiDiscreteSurface s = read_surface(a.in);
        const auto x = cmc::lifted_net(s);
        const auto dual = cmc::lifted_christoffel_dual(s);
        const auto pair = cmc::is_christoffel_pair_mixed_area(x, dual);
        out << "mixed area A(x, x*) " << sci(pair.residual) << "\n";
        bool ok = pair.ok;
        if ((s.m().array() > 0.0).all()) {
            cmc::SampledNet z{dual.grid, {}, {}, true};
            for (int i = 0; i < dual.curve_count(); ++i) {
                z.f.push_back(-dual.f[i]);
                z.df.push_back(-dual.df[i]);
            }
            const auto k = cmc::verify_koenigs(x, z, cmc::koenigs_nu(s));
            out << "koenigs smooth " << sci(k.smooth) << " edge " << sci(k.edge) << " integrability "
                << sci(k.integrability) << " parallel-net " << sci(k.parallel_net) << "\n";
            ok = ok && k.max() < 1e-6;
        }
        out << (ok ? "PASS" : "FAIL") << "\n";
        return ok ? kOk : kVerificationFailed;
    }
    const Grid grid = parse_grid(a.grid);
    fixtures::CmcFixture fx = [&] {
        if (a.fixture == "cmc-cylinder") return fixtures::cmc_cylinder(grid, a.radius, a.spacing, a.curves);
        if (a.fixture == "sphere-latitudes") return fixtures::sphere_latitudes(grid, a.radius, {-0.5 * a.radius, 0.0, 0.5 * a.radius});
        if (a.fixture == "flat-strip") return fixtures::flat_strip(grid);
        throw UsageError("--fixture: expected cmc-cylinder, sphere-latitudes or flat-strip");
    }();
    const auto curvature = cmc::mean_curvature(cmc::lifted_net(fx.surface), fx.normal);
    out << "mean curvature " << num(curvature.value) << " spread " << sci(curvature.spread) << " parallelism "
        << sci(curvature.parallel) << "\n";
    bool ok = curvature.spread < 1e-8;
    if (a.fixture != "sphere-latitudes") {
        const auto cert = cmc::cmc_linear_cq(fx.surface, fx.normal, curvature.value);
        const auto& r = cert.report;
        out << "conserved quantity: q constancy " << sci(r.q_constancy) << ", z.xi " << sci(r.orthogonality)
            << ", edge " << sci(r.edge) << ", smooth " << sci(r.smooth) << "\n";
        out << "coefficient spreads " << sci(r.zz_spread) << " " << sci(r.zq_spread) << " " << sci(r.qq_spread)
            << ", H = -(z,q) " << num(r.H) << "\n";
        out << "|z|^2 - 1 " << sci(cert.unit) << ", mixed area A(x, z) " << sci(cert.mixed_area) << "\n";
        ok = ok && r.max() < 1e-6 && cert.unit < 1e-10 && cert.mixed_area < 1e-7;
    }
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kVerificationFailed;
}

// ---- verify, export

struct VerifyArgs {
    std::string suite = "all";
    std::string surface;
    std::string curve;
    std::vector<std::string> overrides;
    unsigned seed = 1;
    std::string csv;
    bool serial = false;
};

std::vector<verify::Check> run_verify(const VerifyArgs& a, const Settings& settings) {
    verify::Options options;
    options.suite = a.suite;
    options.seed = a.seed;
    options.integration = settings.integration();
    options.correction = settings.correction();
    options.parallel = !a.serial;
    for (const auto& o : a.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw UsageError("--tol-override: expected check=value");
        options.tolerance_overrides[o.substr(0, eq)] = parse_double(o.substr(eq + 1), "--tol-override");
    }
    verify::Input input;
    if (!a.surface.empty()) input.surface = read_surface(a.surface);
    if (!a.curve.empty()) input.curve = read_curve(a.curve);
    return verify::run(options, input);
}

std::vector<io::CsvRow> csv_rows(const std::vector<verify::Check>& checks) {
    std::vector<io::CsvRow> rows;
    for (const auto& c : checks) rows.push_back({c.name, c.where, c.residual, c.tolerance, c.pass});
    return rows;
}

int cmd_verify(const VerifyArgs& a, const Settings& settings, std::ostream& out, std::ostream& err) {
    const auto checks = run_verify(a, settings);
    std::size_t name_width = 5;
    std::size_t where_width = 5;
    for (const auto& c : checks) {
        name_width = std::max(name_width, c.name.size());
        where_width = std::max(where_width, c.where.size());
    }
    out << std::left << std::setw(static_cast<int>(name_width)) << "check" << "  " << std::setw(static_cast<int>(where_width))
        << "where" << "  residual    tolerance  result\n";
    int failed = 0;
    for (const auto& c : checks) {
        out << std::left << std::setw(static_cast<int>(name_width)) << c.name << "  "
            << std::setw(static_cast<int>(where_width)) << c.where << "  " << std::setw(10) << sci(c.residual) << "  "
            << std::setw(9) << sci(c.tolerance) << "  " << (c.pass ? "PASS" : "FAIL") << "\n";
        if (!c.pass) {
            ++failed;
            err << "failed: " << c.name << " [" << c.where << "] residual " << sci(c.residual) << " > "
                << sci(c.tolerance) << "\n";
        }
    }
    out << checks.size() << " checks, " << failed << " failed\n";
    if (!a.csv.empty()) {
        std::ofstream file(a.csv);
        if (!file) throw io::DataError("cannot write " + a.csv);
        io::write_csv(file, csv_rows(checks));
    }
    return failed == 0 ? kOk : kVerificationFailed;
}

struct ExportArgs {
    std::string in;
    std::string format = "obj";
    std::string out;
    std::string suite = "all";
};

int cmd_export(const ExportArgs& a, const Settings& settings, std::ostream& out) {
    std::ostringstream text;
    if (a.format == "obj") {
        io::write_obj(text, read_any_as_surface(a.in));
    } else if (a.format == "csv") {
        VerifyArgs v;
        v.suite = a.suite;
        const json j = io::read_json(a.in);
        if (io::is_surface_json(j)) {
            v.surface = a.in;
        } else {
            v.curve = a.in;
        }
        io::write_csv(text, csv_rows(run_verify(v, settings)));
    } else {
        throw UsageError("--format: expected obj or csv");
    }
    if (a.out.empty()) {
        out << text.str();
    } else {
        io::write_text(a.out, text.str());
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Darboux transforms of polarized curves and semi-discrete isothermic surfaces", "isothermic"};
    app.require_subcommand(1);
    Settings settings;
    app.add_option("--step-policy", settings.step_policy, "grid | substep:k");
    app.add_option("--metric-correction", settings.metric_correction, "on | off | every:k");

    CurveArgs curve_args;
    auto* curve = app.add_subcommand("curve", "Write a sampled polarized curve");
    curve->add_option("--family", curve_args.family, "circle | helix | line");
    curve->add_option("--fixture", curve_args.fixture, "Named fixture curve");
    curve->add_option("--radius", curve_args.radius);
    curve->add_option("--pitch", curve_args.pitch);
    curve->add_option("--dim", curve_args.dim);
    curve->add_option("--grid", curve_args.grid, "s0:s1:N");
    curve->add_option("--m", curve_args.m, "Constant polarization");
    curve->add_flag("--arc-length", curve_args.arc_length, "Use m = 1/(x', x')");
    curve->add_flag("--no-xprime", curve_args.no_xprime, "Omit derivative samples");
    curve->add_option("--out", curve_args.out);

    DarbouxArgs darboux_args;
    auto* darboux_cmd = app.add_subcommand("darboux", "Darboux transform of a curve");
    darboux_cmd->add_option("--in", darboux_args.in)->required();
    darboux_cmd->add_option("--mu", darboux_args.mu)->required();
    darboux_cmd->add_option("--init", darboux_args.init, "Start point x_hat(s0), comma separated")->required();
    darboux_cmd->add_option("--route", darboux_args.route, "riccati | linear");
    darboux_cmd->add_option("--out", darboux_args.out);
    darboux_cmd->add_flag("--report", darboux_args.report);

    BianchiArgs bianchi_args;
    auto* bianchi_cmd = app.add_subcommand("bianchi", "Bianchi quadrilateral or cube from a curve");
    bianchi_cmd->add_option("--in", bianchi_args.in)->required();
    bianchi_cmd->add_option("--mu", bianchi_args.mu, "mu0,mu1[,mu2]")->required();
    bianchi_cmd->add_option("--init", bianchi_args.init, "Start point per parameter")->required();
    bianchi_cmd->add_option("--out", bianchi_args.out);

    SurfaceArgs surface_args;
    auto* surface_cmd = app.add_subcommand("surface", "Semi-discrete isothermic surfaces");
    surface_cmd->require_subcommand(1);
    auto* build = surface_cmd->add_subcommand("build", "Layer Darboux transforms onto a seed curve");
    build->add_option("--in", surface_args.in, "Seed curve");
    build->add_option("--layer", surface_args.layers, "mu:x,y[,z], repeatable");
    build->add_option("--fixture", surface_args.fixture);
    build->add_option("--grid", surface_args.grid, "s0:s1:N for fixtures");
    build->add_option("--out", surface_args.out);
    auto* check = surface_cmd->add_subcommand("check", "Edge-wise isothermicity report");
    check->add_option("--in", surface_args.in)->required();
    check->add_option("--tol", surface_args.tol);
    auto* moutard = surface_cmd->add_subcommand("moutard", "Moutard lift certificates");
    moutard->add_option("--in", surface_args.in)->required();

    TransformArgs dual_args;
    auto* dual = app.add_subcommand("dual", "Christoffel dual of a curve or surface");
    dual->add_option("--in", dual_args.in)->required();
    dual->add_option("--start", dual_args.start, "Start point of the dual");
    dual->add_option("--out", dual_args.out);

    TransformArgs calapso_args;
    auto* calapso = app.add_subcommand("calapso", "Calapso transform of a curve or surface");
    calapso->add_option("--in", calapso_args.in)->required();
    calapso->add_option("--t", calapso_args.t)->required();
    calapso->add_option("--out", calapso_args.out);

    CmcArgs cmc_args;
    auto* cmc_cmd = app.add_subcommand("cmc", "Mixed area, mean curvature and conserved quantities");
    cmc_cmd->add_option("--in", cmc_args.in, "Surface: Christoffel and Koenigs certificates");
    cmc_cmd->add_option("--fixture", cmc_args.fixture, "cmc-cylinder | sphere-latitudes | flat-strip");
    cmc_cmd->add_option("--radius", cmc_args.radius);
    cmc_cmd->add_option("--spacing", cmc_args.spacing);
    cmc_cmd->add_option("--curves", cmc_args.curves);
    cmc_cmd->add_option("--grid", cmc_args.grid, "s0:s1:N");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "Run invariant suites");
    verify_cmd->add_option("--suite", verify_args.suite, "curve | darboux | bianchi | transforms | surface | cmc | all");
    verify_cmd->add_option("--surface", verify_args.surface);
    verify_cmd->add_option("--curve", verify_args.curve);
    verify_cmd->add_option("--tol-override", verify_args.overrides, "check=value, repeatable");
    verify_cmd->add_option("--seed", verify_args.seed);
    verify_cmd->add_option("--csv", verify_args.csv, "Also write the report as CSV");
    verify_cmd->add_flag("--serial", verify_args.serial, "Run suites one after another");

    ExportArgs export_args;
    auto* export_cmd = app.add_subcommand("export", "OBJ mesh or CSV verification report");
    export_cmd->add_option("--in", export_args.in)->required();
    export_cmd->add_option("--format", export_args.format, "obj | csv");
    export_cmd->add_option("--suite", export_args.suite);
    export_cmd->add_option("--out", export_args.out);

    for (auto* sub : {curve, darboux_cmd, bianchi_cmd, surface_cmd, build, check, moutard, dual, calapso, cmc_cmd,
                      verify_cmd, export_cmd}) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsageError;
    }

    try {
        if (curve->parsed()) return cmd_curve(curve_args, out);
        if (darboux_cmd->parsed()) return cmd_darboux(darboux_args, settings, out);
        if (bianchi_cmd->parsed()) return cmd_bianchi(bianchi_args, settings, out);
        if (build->parsed()) return cmd_surface_build(surface_args, settings, out);
        if (check->parsed()) return cmd_surface_check(surface_args, out);
        if (moutard->parsed()) return cmd_surface_moutard(surface_args, out);
        if (dual->parsed()) return cmd_dual(dual_args, out, err);
        if (calapso->parsed()) return cmd_calapso(calapso_args, settings, out, err);
        if (cmc_cmd->parsed()) return cmd_cmc(cmc_args, out);
        if (verify_cmd->parsed()) return cmd_verify(verify_args, settings, out, err);
        if (export_cmd->parsed()) return cmd_export(export_args, settings, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace isothermic::cli
