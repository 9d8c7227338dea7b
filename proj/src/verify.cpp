#include "isothermic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <random>

#include "isothermic/bianchi.hpp"
#include "isothermic/cmc.hpp"
#include "isothermic/errors.hpp"
#include "isothermic/fixtures.hpp"
#include "isothermic/numerics.hpp"

namespace isothermic::verify {

using curves::PolarizedCurve;
using surface::SemiDiscreteSurface;

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> table{
        {"bianchi.bigauge", 1e-10},
        {"bianchi.cube_routes", 1e-6},
        {"bianchi.quad_cross_ratio", 1e-8},
        {"bianchi.quad_cross_ratio_swap", 1e-8},
        {"bianchi.quad_section_mu0", 1e-6},
        {"bianchi.quad_section_mu1", 1e-6},
        {"cmc.H_agreement", 1e-8},
        {"cmc.H_spread", 1e-8},
        {"cmc.cq_coefficients", 1e-6},
        {"cmc.cq_edge", 1e-6},
        {"cmc.cq_orthogonality", 1e-6},
        {"cmc.cq_q_constancy", 1e-6},
        {"cmc.cq_smooth", 1e-6},
        {"cmc.koenigs", 1e-6},
        {"cmc.mixed_area", 1e-7},
        {"cmc.sphere_H", 1e-8},
        {"cmc.tangent_plane", 1e-10},
        {"cmc.unit", 1e-10},
        {"curve.derivative_consistency", 1e-6},
        {"curve.lift_lightlike", 1e-12},
        {"darboux.concentric_cr", 1e-12},
        {"darboux.edge_gauge_relation", 1e-6},
        {"darboux.edge_ribaucour", 1e-6},
        {"darboux.gauge_relation", 1e-6},
        {"darboux.riccati_vs_linear", 1e-6},
        {"darboux.tractrix_cr", 1e-8},
        {"darboux.tractrix_m", 1e-8},
        {"darboux.tractrix_pair", 1e-8},
        {"surface.calapso_trivialization", 1e-6},
        {"surface.christoffel_consistency", 1e-7},
        {"surface.christoffel_mixed_area", 1e-7},
        {"surface.darboux_transport", 1e-6},
        {"surface.darboux_vertical", 1e-6},
        {"surface.flatness", 1e-6},
        {"surface.isothermic", 1e-6},
        {"surface.moutard_area", 1e-7},
        {"surface.moutard_pairing", 1e-8},
        {"surface.moutard_sign", 0.0},
        {"surface.nu_factorization", 1e-8},
        {"transforms.calapso_composition", 1e-5},
        {"transforms.calapso_constancy", 1e-6},
        {"transforms.calapso_drift", 1e-8},
        {"transforms.calapso_gauge", 1e-5},
        {"transforms.calapso_permute", 1e-5},
        {"transforms.christoffel_darboux_dual", 1e-7},
        {"transforms.christoffel_darboux_pair", 1e-7},
        {"transforms.dual_of_dual", 1e-9},
    };
    return table;
}

std::vector<std::string> suite_names() { return {"bianchi", "cmc", "curve", "darboux", "surface", "transforms"}; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Recorder {
public:
    explicit Recorder(const std::map<std::string, double>& tolerances) : tolerances_(tolerances) {}

    void add(const std::string& name, const std::string& where, double residual) {
        const double tol = tolerances_.at(name);
        checks.push_back(Check{name, where, residual, tol, std::isfinite(residual) && residual <= tol});
    }

    // A construction that throws counts as a failure of the named check.
    void guard(const std::string& name, const std::string& where, const std::function<void()>& body) {
        try {
            body();
        } catch (const GeometryError& e) {
            add(name, where + " (" + e.what() + ")", kInf);
        }
    }

    std::vector<Check> checks;

private:
    const std::map<std::string, double>& tolerances_;
};

struct Context {
    const Options& options;
    const Input& input;
};

Eigen::VectorXd point2(double a, double b) { return Eigen::Vector2d(a, b); }

double max_abs_deviation(const std::vector<clifford::Multivector>& cr, double target) {
    double worst = 0.0;
    for (const auto& v : cr) worst = std::max(worst, std::abs(v.scalar_part() - target));
    return worst;
}

std::string edge_name(const std::string& label, int i) { return label + " edge " + std::to_string(i); }

// Spectral parameter for connection-based checks, away from every edge parameter.
double spectral_probe(const SemiDiscreteSurface& s) {
    for (double t : {0.5, 0.37, 0.71, -0.63}) {
        bool clear = true;
        for (double mu : s.mu()) clear = clear && std::abs(t - mu) > 0.05 * std::max(1.0, std::abs(mu));
        if (clear) return t;
    }
    return 1.93;
}

void curve_suite(Recorder& rec, const Context& ctx) {
    std::vector<std::pair<std::string, PolarizedCurve>> curves;
    if (ctx.input.curve) curves.emplace_back("input", *ctx.input.curve);
    if (ctx.input.surface) {
        for (int i = 0; i < ctx.input.surface->curve_count(); ++i) {
            curves.emplace_back("input curve " + std::to_string(i), ctx.input.surface->curve(i));
        }
    }
    if (curves.empty()) {
        for (const auto& name : fixtures::curve_fixture_names()) curves.emplace_back(name, fixtures::curve_fixture(name));
    }
    for (const auto& [label, c] : curves) {
        const Eigen::MatrixXd fd = numerics::differentiate(c.x(), c.grid().step());
        const double scale = c.xprime().colwise().norm().maxCoeff();
        rec.add("curve.derivative_consistency", label, (fd - c.xprime()).colwise().norm().maxCoeff() / scale);
        const auto lift = darboux::lift(c);
        double defect = 0.0;
        for (int k = 0; k < c.size(); ++k) {
            defect = std::max(defect, std::abs(minkowski::norm2(lift.xi.col(k))) / lift.xi.col(k).squaredNorm());
        }
        rec.add("curve.lift_lightlike", label, defect);
    }
}

void darboux_suite(Recorder& rec, const Context& ctx) {
    const auto& integration = ctx.options.integration;
    if (ctx.input.surface) {
        const SemiDiscreteSurface& s = *ctx.input.surface;
        const double t = spectral_probe(s);
        for (int i = 0; i < s.edge_count(); ++i) {
            const std::string where = edge_name("input", i);
            rec.guard("darboux.edge_ribaucour", where, [&] {
                rec.add("darboux.edge_ribaucour", where, darboux::is_ribaucour(s.curve(i), s.curve(i + 1)).residual);
            });
            rec.guard("darboux.edge_gauge_relation", where, [&] {
                rec.add("darboux.edge_gauge_relation", where,
                        darboux::verify_gauge_relation(s.lifts()[i], s.lifts()[i + 1], s.mu()[i], t));
            });
        }
    }

    const SemiDiscreteSurface concentric = fixtures::concentric_pair();
    rec.add("darboux.concentric_cr", "concentric",
            max_abs_deviation(darboux::tangent_cross_ratio(concentric.curve(0), concentric.curve(1)), -2.0));

    const SemiDiscreteSurface tractrix = fixtures::tractrix_pair();
    rec.add("darboux.tractrix_cr", "tractrix",
            max_abs_deviation(darboux::tangent_cross_ratio(tractrix.curve(0), tractrix.curve(1)), 0.5));
    rec.add("darboux.tractrix_m", "tractrix", (tractrix.m().array() - 0.5).abs().maxCoeff());
    const auto pair = darboux::is_darboux_pair(tractrix.curve(0), tractrix.curve(1), 1e-8);
    rec.add("darboux.tractrix_pair", "tractrix", std::max(pair.residual, std::abs(pair.mu - 0.25) / 0.25));

    const PolarizedCurve circle = fixtures::unit_circle();
    const Eigen::VectorXd start = point2(2.0, 0.0);
    rec.guard("darboux.riccati_vs_linear", "unit-circle mu=-2", [&] {
        const PolarizedCurve riccati = darboux::integrate_riccati(circle, -2.0, start, integration);
        const auto frame = minkowski::Frame::canonical(2);
        const auto section = darboux::integrate_parallel_section(circle, -2.0, minkowski::euclidean_lift(start, frame),
                                                                 integration);
        const PolarizedCurve linear = darboux::project(section, circle.m());
        rec.add("darboux.riccati_vs_linear", "unit-circle mu=-2", (riccati.x() - linear.x()).colwise().norm().maxCoeff());
        rec.add("darboux.gauge_relation", "unit-circle mu=-2 t=0.37",
                darboux::verify_gauge_relation(darboux::lift(circle), darboux::lift(section, circle.m()), -2.0, 0.37));
    });
}

void bianchi_suite(Recorder& rec, const Context& ctx) {
    const auto& integration = ctx.options.integration;
    const PolarizedCurve circle = fixtures::unit_circle();
    const auto lift = darboux::lift(circle);
    const auto frame = minkowski::Frame::canonical(2);
    auto section = [&](double mu, const Eigen::VectorXd& p) {
        return darboux::integrate_parallel_section(lift, mu, minkowski::euclidean_lift(p, frame), integration);
    };
    const std::string where = "unit-circle mu=(-2,1)";
    rec.guard("bianchi.quad_section_mu1", where, [&] {
        const auto s0 = section(-2.0, point2(2.0, 0.0));
        const auto s1 = section(1.0, point2(0.3, 0.4));
        const auto s01 = bianchi::bianchi_quad(lift, s0, -2.0, s1, 1.0);
        rec.add("bianchi.quad_section_mu1", where, bianchi::parallel_residual(darboux::lift(s0, circle.m()), 1.0, s01));
        rec.add("bianchi.quad_section_mu0", where,
                bianchi::parallel_residual(darboux::lift(s1, circle.m()), -2.0, s01, true));
        double cr = 0.0;
        double swap = 0.0;
        for (int k = 0; k < circle.size(); ++k) {
            cr = std::max(cr, std::abs(bianchi::moebius_cross_ratio(lift.xi.col(k), s0.at(k), s01.at(k), s1.at(k)) + 0.5));
            swap = std::max(swap,
                            std::abs(bianchi::moebius_cross_ratio(s0.at(k), s1.at(k), lift.xi.col(k), s01.at(k)) - 1.5));
        }
        rec.add("bianchi.quad_cross_ratio", where, cr);
        rec.add("bianchi.quad_cross_ratio_swap", where, swap);
    });

    std::mt19937 rng(ctx.options.seed);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> param(-3.0, 3.0);
    double bigauge = 0.0;
    rec.guard("bianchi.bigauge", "unit-circle", [&] {
        const int k = circle.size() / 4;
        const auto xi = lift.xi.col(k);
        const auto xi0 = section(-2.0, point2(2.0, 0.0)).at(k);
        const auto xi1 = section(1.0, point2(0.3, 0.4)).at(k);
        int draws = 0;
        while (draws < 20) {
            const double mu0 = param(rng);
            const double mu1 = param(rng);
            const double t = param(rng);
            if (std::min({std::abs(mu0), std::abs(mu1), std::abs(mu0 - mu1), std::abs(t - mu0), std::abs(t - mu1)}) <
                0.2) {
                continue;
            }
            const auto xi01 = bianchi::quad_point(xi, xi0, mu0, xi1, mu1);
            const auto r = bianchi::check_bigauge(xi, xi0, xi1, xi01, mu0, mu1, t);
            bigauge = std::max({bigauge, r.sides, r.middle});
            ++draws;
        }
    });
    rec.add("bianchi.bigauge", "unit-circle 20 draws seed " + std::to_string(ctx.options.seed), bigauge);

    const std::string cube_where = "unit-circle mu=(-2,1,3)";
    rec.guard("bianchi.cube_routes", cube_where + " fixed", [&] {
        const auto cube = bianchi::bianchi_cube(lift, section(-2.0, point2(2.0, 0.0)), -2.0,
                                                section(1.0, point2(0.3, 0.4)), 1.0,
                                                section(3.0, point2(-1.5, 0.8)), 3.0);
        rec.add("bianchi.cube_routes", cube_where + " fixed", cube.route_residual);
    });
    const std::string seeded = cube_where + " seed " + std::to_string(ctx.options.seed);
    rec.guard("bianchi.cube_routes", seeded, [&] {
        for (int attempt = 0;; ++attempt) {
            std::vector<Eigen::VectorXd> starts;
            while (starts.size() < 3) {
                const Eigen::VectorXd p = point2(coord(rng), coord(rng));
                if (std::abs(p.norm() - 1.0) > 0.3) starts.push_back(p);
            }
            try {
                const auto cube = bianchi::bianchi_cube(lift, section(-2.0, starts[0]), -2.0, section(1.0, starts[1]),
                                                        1.0, section(3.0, starts[2]), 3.0);
                rec.add("bianchi.cube_routes", seeded, cube.route_residual);
                return;
            } catch (const GeometryError&) {
                if (attempt == 20) throw;
            }
        }
    });
}

void transforms_suite(Recorder& rec, const Context& ctx) {
    const auto& integration = ctx.options.integration;
    const auto& correction = ctx.options.correction;
    const PolarizedCurve circle = fixtures::unit_circle();
    const auto lift = darboux::lift(circle);
    const auto frame = minkowski::Frame::canonical(2);
    const std::string where = "unit-circle";

    rec.guard("transforms.dual_of_dual", where, [&] {
        const PolarizedCurve dual = transforms::christoffel_dual(circle);
        rec.add("transforms.dual_of_dual", where, transforms::dual_of_dual_residual(circle, dual));
        const auto s0 =
            darboux::integrate_parallel_section(lift, -2.0, minkowski::euclidean_lift(point2(2.0, 0.0), frame), integration);
        const PolarizedCurve x0 = darboux::project(s0, circle.m());
        const PolarizedCurve x0_dual = transforms::christoffel_darboux_permute(circle, dual, x0, -2.0);
        const auto check = transforms::verify_christoffel_darboux(circle, dual, x0, x0_dual, -2.0);
        rec.add("transforms.christoffel_darboux_pair", where + " mu=-2",
                std::max(check.darboux.residual, std::abs(check.darboux.mu + 2.0) / 2.0));
        rec.add("transforms.christoffel_darboux_dual", where + " mu=-2", std::max(check.dual, check.identity));
    });

    rec.guard("transforms.calapso_drift", where, [&] {
        rec.add("transforms.calapso_drift", where + " t=1",
                transforms::integrate_calapso(lift, 1.0, {}, correction, integration).metric_drift());
        const auto s0 =
            darboux::integrate_parallel_section(lift, -2.0, minkowski::euclidean_lift(point2(2.0, 0.0), frame), integration);
        rec.add("transforms.calapso_constancy", where + " mu=-2",
                transforms::constancy_residual(transforms::integrate_calapso(lift, -2.0, {}, correction, integration), s0));
        rec.add("transforms.calapso_composition", where + " tau=0.5 t=0.7",
                transforms::verify_calapso_composition(lift, 0.5, 0.7, correction, integration));
        rec.add("transforms.calapso_gauge", where + " mu=-2 t=0.7",
                transforms::verify_calapso_gauge(lift, darboux::lift(s0, circle.m()), -2.0, 0.7, correction, integration));
        const auto moved = transforms::calapso_darboux_permute(lift, s0, -2.0, 1.0, correction, integration);
        const auto [a, b] = transforms::project_pair(
            darboux::LightConeSection{circle.grid(), moved.curve.xi, moved.curve.dxi}, moved.partner, circle.m());
        const auto pair = darboux::is_darboux_pair(a, b);
        rec.add("transforms.calapso_permute", where + " mu=-2 tau=1",
                std::max(std::abs(pair.mu + 3.0), pair.residual));
    });
}

void surface_checks(Recorder& rec, const Context& ctx, const std::string& label, const SemiDiscreteSurface& s,
                    bool with_darboux) {
    const auto report = surface::check_isothermic(s);
    for (const auto& e : report.edges) {
        rec.add("surface.isothermic", edge_name(label, e.edge), std::max({e.reality, e.constancy, e.mu_error}));
        if (e.nu_factorization) rec.add("surface.nu_factorization", edge_name(label, e.edge), *e.nu_factorization);
    }
    if ((s.m().array() > 0.0).all()) {
        rec.guard("surface.moutard_area", label, [&] {
            const auto lift = surface::moutard_lift(s);
            for (int i = 0; i < s.edge_count(); ++i) {
                rec.add("surface.moutard_area", edge_name(label, i), lift.area[i]);
                rec.add("surface.moutard_pairing", edge_name(label, i), lift.pairing[i]);
            }
            rec.add("surface.moutard_sign", label, static_cast<double>(lift.sign_violations.size()));
        });
    }
    const double t = spectral_probe(s);
    rec.guard("surface.flatness", label, [&] {
        const auto connection = surface::surface_connection(s, t);
        for (int i = 0; i < s.edge_count(); ++i) rec.add("surface.flatness", edge_name(label, i), connection.flatness[i]);
    });
    rec.guard("surface.christoffel_consistency", label, [&] {
        const auto dual = surface::surface_christoffel(s);
        for (int i = 0; i < s.edge_count(); ++i) {
            rec.add("surface.christoffel_consistency", edge_name(label, i), dual.consistency[i]);
        }
        rec.add("surface.christoffel_mixed_area", label,
                cmc::is_christoffel_pair_mixed_area(cmc::affine_net(s), cmc::affine_net(dual.dual)).residual);
    });
    rec.guard("surface.calapso_trivialization", label, [&] {
        const auto calapso = surface::surface_calapso(s, t, ctx.options.correction, ctx.options.integration);
        for (int i = 0; i < s.edge_count(); ++i) {
            rec.add("surface.calapso_trivialization", edge_name(label, i), calapso.trivialization[i]);
        }
    });
    if (with_darboux) {
        rec.guard("surface.darboux_transport", label, [&] {
            const auto d = surface::surface_darboux(s, 3.0, point2(-0.4, 0.9), ctx.options.integration);
            for (int i = 0; i < s.edge_count(); ++i) {
                rec.add("surface.darboux_transport", edge_name(label, i), d.transport_residual[i]);
            }
            double vertical = 0.0;
            for (int i = 0; i < s.curve_count(); ++i) {
                const auto pair = darboux::is_darboux_pair(s.curve(i), d.transform.curve(i));
                vertical = std::max({vertical, pair.residual, std::abs(pair.mu - 3.0) / 3.0});
            }
            rec.add("surface.darboux_vertical", label + " mu=3", vertical);
        });
    }
}

void surface_suite(Recorder& rec, const Context& ctx) {
    if (ctx.input.surface) {
        surface_checks(rec, ctx, "input", *ctx.input.surface, false);
        return;
    }
    surface_checks(rec, ctx, "layered", fixtures::layered_surface(), true);
    surface_checks(rec, ctx, "cylinder-patch", fixtures::cylinder_patch(), false);
    surface_checks(rec, ctx, "tractrix", fixtures::tractrix_pair(), false);
}

void koenigs_checks(Recorder& rec, const std::string& label, const SemiDiscreteSurface& s) {
    rec.guard("cmc.mixed_area", label, [&] {
        const auto x = cmc::lifted_net(s);
        const auto dual = cmc::lifted_christoffel_dual(s);
        rec.add("cmc.mixed_area", label, cmc::is_christoffel_pair_mixed_area(x, dual).residual);
        if ((s.m().array() > 0.0).all()) {
            cmc::SampledNet z{dual.grid, {}, {}, true};
            for (int i = 0; i < dual.curve_count(); ++i) {
                z.f.push_back(-dual.f[i]);
                z.df.push_back(-dual.df[i]);
            }
            rec.add("cmc.koenigs", label, cmc::verify_koenigs(x, z, cmc::koenigs_nu(s)).max());
        }
    });
}

void cmc_suite(Recorder& rec, const Context& ctx) {
    if (ctx.input.surface) {
        koenigs_checks(rec, "input", *ctx.input.surface);
        return;
    }
    const std::string label = "cmc-cylinder";
    rec.guard("cmc.H_spread", label, [&] {
        const auto fx = fixtures::cmc_cylinder();
        const auto frame = minkowski::Frame::canonical(3);
        const auto x = cmc::lifted_net(fx.surface);
        rec.add("cmc.tangent_plane", label, cmc::tangent_plane_defect(x, fx.normal, frame.q));
        const auto cert = cmc::cmc_linear_cq(fx.surface, fx.normal, fx.H);
        rec.add("cmc.H_spread", label, cert.curvature.spread);
        rec.add("cmc.H_agreement", label,
                std::max({cert.H_agreement, std::abs(cert.curvature.value - fx.H), std::abs(cert.report.H - fx.H)}));
        rec.add("cmc.cq_q_constancy", label, cert.report.q_constancy);
        rec.add("cmc.cq_orthogonality", label, cert.report.orthogonality);
        rec.add("cmc.cq_edge", label, cert.report.edge);
        rec.add("cmc.cq_smooth", label, cert.report.smooth);
        rec.add("cmc.cq_coefficients", label,
                std::max({cert.report.zz_spread, cert.report.zq_spread, cert.report.qq_spread}));
        rec.add("cmc.unit", label, cert.unit);
        rec.add("cmc.mixed_area", label, cert.mixed_area);
        // The Koenigs dual of the cylinder is -z with nu^2 = -1/H.
        cmc::SampledNet z{x.grid, {}, {}, true};
        for (int i = 0; i < x.curve_count(); ++i) {
            z.f.push_back(-cert.cq.z[i]);
            z.df.push_back(-(fx.normal.df[i] + fx.H * x.df[i]));
        }
        const std::vector<Eigen::VectorXd> nu(static_cast<std::size_t>(x.curve_count()),
                                              Eigen::VectorXd::Constant(x.grid.size(), std::sqrt(-1.0 / fx.H)));
        rec.add("cmc.koenigs", label, cmc::verify_koenigs(x, z, nu).max());
    });
    rec.guard("cmc.sphere_H", "sphere-latitudes", [&] {
        const auto fx = fixtures::sphere_latitudes(fixtures::default_grid(), 1.0, {-0.5, 0.0, 0.5});
        const auto h = cmc::mean_curvature(cmc::lifted_net(fx.surface), fx.normal);
        rec.add("cmc.sphere_H", "sphere-latitudes", std::max(h.spread, std::abs(h.value - fx.H)));
    });
    koenigs_checks(rec, "cylinder-patch", fixtures::cylinder_patch());
    koenigs_checks(rec, "layered", fixtures::layered_surface());
}

}  // namespace

std::vector<Check> run(const Options& options, const Input& input) {
    std::map<std::string, double> tolerances = default_tolerances();
    for (const auto& [name, value] : options.tolerance_overrides) {
        if (!tolerances.contains(name)) throw InvalidArgument("unknown check '" + name + "' in tolerance override");
        if (!(value >= 0.0) || !std::isfinite(value)) throw InvalidArgument("tolerance for '" + name + "' must be >= 0");
        tolerances[name] = value;
    }
    const std::map<std::string, void (*)(Recorder&, const Context&)> suites{
        {"bianchi", bianchi_suite}, {"cmc", cmc_suite},         {"curve", curve_suite},
        {"darboux", darboux_suite}, {"surface", surface_suite}, {"transforms", transforms_suite},
    };
    std::vector<std::string> selected;
    if (options.suite == "all") {
        selected = suite_names();
    } else if (suites.contains(options.suite)) {
        selected = {options.suite};
    } else {
        throw InvalidArgument("unknown suite '" + options.suite + "'");
    }

    const Context ctx{options, input};
    auto run_one = [&](const std::string& name) {
        Recorder rec(tolerances);
        suites.at(name)(rec, ctx);
        return std::move(rec.checks);
    };
    std::vector<Check> checks;
    if (options.parallel) {
        std::vector<std::future<std::vector<Check>>> jobs;
        for (const auto& name : selected) jobs.push_back(std::async(std::launch::async, run_one, name));
        for (auto& job : jobs) {
            auto part = job.get();
            checks.insert(checks.end(), part.begin(), part.end());
        }
    } else {
        for (const auto& name : selected) {
            auto part = run_one(name);
            checks.insert(checks.end(), part.begin(), part.end());
        }
    }
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) {
        return a.name != b.name ? a.name < b.name : a.where < b.where;
    });
    return checks;
}

}  // namespace isothermic::verify
