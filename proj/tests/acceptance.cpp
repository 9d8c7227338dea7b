#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isothermic/bianchi.hpp"
#include "isothermic/cmc.hpp"
#include "isothermic/fixtures.hpp"
#include "isothermic/io.hpp"
#include "isothermic/surface.hpp"
#include "isothermic/transforms.hpp"
#include "oracles.hpp"

#include <sys/wait.h>

using namespace isothermic;
using darboux::LightConeSection;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    bool pass = true;
    std::ostringstream detail;

    // Records "label value (< bound)" and folds the comparison into pass.
    void below(const std::string& label, double value, double bound) {
        const bool ok = value < bound;
        pass = pass && ok;
        detail << " " << label << "=" << value << (ok ? " < " : " >= ") << bound << ";";
    }
    void above(const std::string& label, double value, double bound) {
        const bool ok = value > bound;
        pass = pass && ok;
        detail << " " << label << "=" << value << (ok ? " > " : " <= ") << bound << ";";
    }
    void fail(const std::string& what) {
        pass = false;
        detail << " " << what << ";";
    }
};

int failures = 0;

void report(int number, const std::string& title, Criterion& c) {
    std::cout << "criterion " << number << " " << (c.pass ? "PASS" : "FAIL") << " " << title << ":" << c.detail.str()
              << std::endl;
    if (!c.pass) ++failures;
}

template <class F>
void run(int number, const std::string& title, F&& body) {
    Criterion c;
    c.detail.precision(3);
    try {
        body(c);
    } catch (const std::exception& e) {
        c.fail(std::string("exception: ") + e.what());
    }
    report(number, title, c);
}

double spread(const std::vector<double>& v) { return oracle::spread(v); }

// Scales <upper> by r and <lower> by 1/r, identity on their orthogonal complement.
Eigen::MatrixXd gauge(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, double r) {
    const auto size = lower.size();
    Eigen::MatrixXd G(size, size);
    const double pair = oracle::mink(lower, upper);
    for (Eigen::Index i = 0; i < size; ++i) {
        const Eigen::VectorXd e = Eigen::VectorXd::Unit(size, i);
        const Eigen::VectorXd on_lower = oracle::mink(e, upper) / pair * lower;
        const Eigen::VectorXd on_upper = oracle::mink(e, lower) / pair * upper;
        G.col(i) = on_lower / r + on_upper * r + (e - on_lower - on_upper);
    }
    return G;
}

LightConeSection section(const darboux::LiftedCurve& c, double mu, const Eigen::Vector2d& p) {
    return darboux::integrate_parallel_section(c, mu, oracle::lift(p));
}

double route_difference(int count, const Eigen::Vector2d& start) {
    const auto c = fixtures::unit_circle(curves::Grid(0.0, 2.0, count));
    const auto riccati = darboux::integrate_riccati(c, -2.0, start);
    const auto linear = darboux::project(darboux::integrate_parallel_section(c, -2.0, oracle::lift(start)), c.m());
    return (riccati.x() - linear.x()).colwise().norm().maxCoeff();
}

void criterion_riccati(Criterion& c) {
    const Eigen::Vector2d start(2.0, 0.0);
    c.below("max|riccati-linear| h=1e-3", route_difference(2001, start), 1e-6);
    // Difference of two fourth-order routes on coarse grids, h = 0.1 and 0.05.
    const double ratio = route_difference(21, start) / route_difference(41, start);
    c.above("ratio h->h/2", ratio, 14.0);
    c.below("ratio h->h/2", ratio, 18.0);
    const Eigen::Vector2d generic(1.7, 0.9);
    c.below("generic start max|riccati-linear|", route_difference(2001, generic), 1e-6);
}

void criterion_closed_form(Criterion& c) {
    const auto concentric = fixtures::concentric_pair();
    std::vector<double> cr;
    double reality = 0.0;
    for (const auto& v : darboux::tangent_cross_ratio(concentric.curve(0), concentric.curve(1))) {
        cr.push_back(v.scalar_part());
        reality = std::max(reality, v.non_scalar_magnitude());
    }
    c.below("concentric |cr+2|", std::abs(cr.front() + 2.0), 1e-12);
    c.below("concentric cr spread", spread(cr), 1e-12);
    c.below("concentric non-scalar", reality, 1e-12);

    // Independent planar oracle: cr = conj(x') d conj(x_hat') d / |d|^4 with d = x - x_hat.
    const auto tractrix = fixtures::tractrix_pair();
    const auto& x = tractrix.curve(0);
    const auto& y = tractrix.curve(1);
    std::vector<double> trcr, m;
    double imag = 0.0;
    for (int k = 0; k < x.size(); ++k) {
        const oracle::cplx d = oracle::cpx(x.point(k)) - oracle::cpx(y.point(k));
        const oracle::cplx v = std::conj(oracle::cpx(x.tangent(k))) * d * std::conj(oracle::cpx(y.tangent(k))) * d /
                               std::pow(std::abs(d), 4);
        trcr.push_back(v.real());
        imag = std::max(imag, std::abs(v.imag()));
        m.push_back(x.m()[k]);
    }
    std::vector<double> lib;
    for (const auto& v : darboux::tangent_cross_ratio(x, y)) lib.push_back(v.scalar_part());
    c.below("tractrix |cr-1/2|", std::abs(lib.front() - 0.5), 1e-8);
    c.below("tractrix cr spread", spread(lib), 1e-8);
    c.below("tractrix oracle cr spread", spread(trcr), 1e-8);
    c.below("tractrix oracle imag", imag, 1e-8);
    c.below("tractrix |m-1/2|", std::abs(m.front() - 0.5), 1e-8);
    c.below("tractrix m spread", spread(m), 1e-8);
    c.below("tractrix |oracle cr-1/2|", std::abs(trcr.front() - 0.5), 1e-8);
    c.below("tractrix |cr m - mu|", std::abs(lib.front() * m.front() - 0.25), 1e-8);
}

void criterion_quad(Criterion& c) {
    const auto circle = fixtures::unit_circle();
    const auto lift = darboux::lift(circle);
    const auto s0 = section(lift, -2.0, {2.0, 0.0});
    const auto s1 = section(lift, 1.0, {0.3, 0.4});
    const auto s01 = bianchi::bianchi_quad(lift, s0, -2.0, s1, 1.0);
    c.below("section residual along xi0", bianchi::parallel_residual(darboux::lift(s0, circle.m()), 1.0, s01), 1e-6);
    c.below("section residual along xi1",
            bianchi::parallel_residual(darboux::lift(s1, circle.m()), -2.0, s01, true), 1e-6);
    std::vector<double> cr;
    double oracle_gap = 0.0;
    for (int k = 0; k < circle.size(); ++k) {
        cr.push_back(bianchi::moebius_cross_ratio(lift.xi.col(k), s0.at(k), s01.at(k), s1.at(k)));
        const Eigen::VectorXd expected = gauge(lift.xi.col(k), s0.at(k), 1.0 - 1.0 / -2.0) * s1.at(k);
        oracle_gap = std::max(oracle_gap, minkowski::projective_distance(s01.at(k), expected));
    }
    c.below("|cr+0.5|", std::abs(cr.front() + 0.5), 1e-8);
    c.below("cr spread", spread(cr), 1e-8);
    c.below("oracle gauge gap", oracle_gap, 1e-10);
}

void criterion_bigauge(Criterion& c) {
    const auto circle = fixtures::unit_circle();
    const auto lift = darboux::lift(circle);
    const auto s0 = section(lift, -2.0, {2.0, 0.0});
    const auto s1 = section(lift, 1.0, {0.3, 0.4});
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> sample(0, circle.size() - 1);
    double library = 0.0;
    double independent = 0.0;
    for (int draws = 0; draws < 20;) {
        const double mu0 = u(rng);
        const double mu1 = u(rng);
        const double t = u(rng);
        if (std::min({std::abs(mu0), std::abs(mu1), std::abs(mu0 - mu1), std::abs(t - mu0), std::abs(t - mu1)}) < 0.2) {
            continue;
        }
        ++draws;
        const int k = sample(rng);
        const Eigen::VectorXd xi = lift.xi.col(k);
        const Eigen::VectorXd xi0 = s0.at(k);
        const Eigen::VectorXd xi1 = s1.at(k);
        const Eigen::VectorXd xi01 = gauge(xi, xi0, 1.0 - mu1 / mu0) * xi1;
        const Eigen::MatrixXd lhs = gauge(xi0, xi01, 1.0 - t / mu1) * gauge(xi, xi0, 1.0 - t / mu0);
        const Eigen::MatrixXd rhs = gauge(xi1, xi01, 1.0 - t / mu0) * gauge(xi, xi1, 1.0 - t / mu1);
        const Eigen::MatrixXd middle = gauge(xi0, xi1, (1.0 - t / mu1) / (1.0 - t / mu0));
        independent = std::max({independent, (lhs - rhs).norm() / middle.norm(), (lhs - middle).norm() / middle.norm()});
        const auto r = bianchi::check_bigauge(xi, xi0, xi1, xi01, mu0, mu1, t);
        library = std::max({library, r.sides, r.middle});
    }
    c.below("library residual over 20 draws", library, 1e-10);
    c.below("oracle residual over 20 draws", independent, 1e-10);
}

void criterion_cube(Criterion& c) {
    const auto circle = fixtures::unit_circle();
    const auto lift = darboux::lift(circle);
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 10; ++seed) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> radius(1.6, 3.0);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        std::vector<LightConeSection> sections;
        for (double mu : {-2.0, 1.0, 3.0}) {
            const double r = radius(rng);
            const double a = angle(rng);
            sections.push_back(section(lift, mu, {r * std::cos(a), r * std::sin(a)}));
        }
        const auto cube = bianchi::bianchi_cube(lift, sections[0], -2.0, sections[1], 1.0, sections[2], 3.0);
        double routes = 0.0;
        for (int k = 0; k < circle.size(); ++k) {
            routes = std::max({routes, minkowski::projective_distance(cube.xi012.at(k), cube.via1.at(k)),
                               minkowski::projective_distance(cube.xi012.at(k), cube.via2.at(k))});
        }
        worst = std::max({worst, routes, cube.route_residual});
    }
    c.below("max route distance over 10 seeds", worst, 1e-6);
}

void criterion_calapso(Criterion& c) {
    const auto circle = fixtures::unit_circle();
    const auto lift = darboux::lift(circle);
    const auto s0 = section(lift, -2.0, {2.0, 0.0});
    c.below("metric drift t=1", transforms::integrate_calapso(lift, 1.0).metric_drift(), 1e-8);
    c.below("metric drift t=-2", transforms::integrate_calapso(lift, -2.0).metric_drift(), 1e-8);
    c.below("constancy of T^mu xi_hat", transforms::constancy_residual(transforms::integrate_calapso(lift, -2.0), s0),
            1e-6);
    c.below("composition", transforms::verify_calapso_composition(lift, 0.5, 0.7), 1e-5);
    c.below("gauge intertwining", transforms::verify_calapso_gauge(lift, darboux::lift(s0, circle.m()), -2.0, 0.7),
            1e-5);
    for (double tau : {1.0, 0.5, -1.0}) {
        const auto moved = transforms::calapso_darboux_permute(lift, s0, -2.0, tau);
        const auto [a, b] = transforms::project_pair(LightConeSection{circle.grid(), moved.curve.xi, moved.curve.dxi},
                                                     moved.partner, circle.m());
        const auto fit = darboux::is_darboux_pair(a, b);
        std::ostringstream label;
        label << "|fit-(mu-tau)| tau=" << tau;
        c.below(label.str(), std::abs(fit.mu - (-2.0 - tau)), 1e-5);
    }
}

void criterion_christoffel(Criterion& c) {
    const curves::Grid grid(0.0, 2.0, 2001);
    Eigen::MatrixXd x(2, grid.size());
    Eigen::MatrixXd dx(2, grid.size());
    for (int k = 0; k < grid.size(); ++k) {
        const double s = grid.node(k);
        x.col(k) << 1.5 * std::cos(s), 0.6 * std::sin(s);
        dx.col(k) << -1.5 * std::sin(s), 0.6 * std::cos(s);
    }
    const curves::PolarizedCurve ellipse(grid, x, dx, Eigen::VectorXd::Ones(grid.size()), true);
    c.below("ellipse dual-of-dual", transforms::dual_of_dual_residual(ellipse, transforms::christoffel_dual(ellipse)),
            1e-9);

    const auto circle = fixtures::unit_circle();
    const auto circle2 = fixtures::circle(2.0, circle.grid());
    const auto dual = transforms::christoffel_dual(circle);
    const auto hat_dual = transforms::christoffel_darboux_permute(circle, dual, circle2, -2.0);
    const auto check = transforms::verify_christoffel_darboux(circle, dual, circle2, hat_dual, -2.0);
    c.below("double certificate darboux", check.darboux.residual, 1e-7);
    c.below("double certificate |mu+2|", std::abs(check.darboux.mu + 2.0), 1e-7);
    c.below("double certificate dual", check.dual, 1e-7);

    double consistency = 0.0;
    for (const auto& name : {"cylinder-patch", "layered"}) {
        for (double r : surface::surface_christoffel(fixtures::surface_fixture(name)).consistency) {
            consistency = std::max(consistency, r);
        }
    }
    c.below("surface consistency", consistency, 1e-7);

    double dual_area = 0.0;
    double control = std::numeric_limits<double>::infinity();
    for (const auto& name : {"cylinder-patch", "layered"}) {
        const auto s = fixtures::surface_fixture(name);
        const auto lifted = cmc::lifted_net(s);
        dual_area = std::max(dual_area,
                             cmc::is_christoffel_pair_mixed_area(lifted, cmc::lifted_christoffel_dual(s)).residual);
        control = std::min(control, cmc::is_christoffel_pair_mixed_area(lifted, lifted).residual);
    }
    c.below("mixed area on dual pairs", dual_area, 1e-7);
    c.above("mixed area negative control", control, 1e-3);
}

void criterion_moutard(Criterion& c) {
    double area = 0.0;
    double pairing = 0.0;
    for (const auto& name : {"cylinder-patch", "layered", "tractrix"}) {
        const auto s = fixtures::surface_fixture(name);
        const auto lift = surface::moutard_lift(s);
        for (double a : lift.area) area = std::max(area, a);
        // (xi_i, xi_j) + 1/(2 mu_ij) directly from the returned sections.
        for (int i = 0; i + 1 < s.curve_count(); ++i) {
            for (int k = 0; k < s.grid().size(); ++k) {
                const double p = oracle::mink(lift.xi[i].at(k), lift.xi[i + 1].at(k));
                pairing = std::max(pairing, std::abs(p + 1.0 / (2.0 * s.mu()[i])));
            }
        }
    }
    c.below("A(xi, xi)", area, 1e-7);
    c.below("|(xi_i, xi_j) + 1/(2 mu)|", pairing, 1e-8);
}

void criterion_cmc(Criterion& c) {
    const auto fx = fixtures::cmc_cylinder();
    const auto cert = cmc::cmc_linear_cq(fx.surface, fx.normal, fx.H);
    c.below("H spread", cert.curvature.spread, 1e-8);
    c.below("|H+1/(2r)|", std::abs(cert.curvature.value + 0.5), 1e-8);
    c.below("cq q constancy", cert.report.q_constancy, 1e-6);
    c.below("cq orthogonality", cert.report.orthogonality, 1e-6);
    c.below("cq edge", cert.report.edge, 1e-6);
    c.below("cq smooth", cert.report.smooth, 1e-6);
    c.below("cq coefficient spread", std::max({cert.report.zz_spread, cert.report.zq_spread, cert.report.qq_spread}),
            1e-6);
    c.below("H agreement", cert.H_agreement, 1e-8);

    // |z|^2 - 1 recomputed from z = n + H x with the explicit Minkowski form.
    const auto x = cmc::lifted_net(fx.surface);
    double unit = 0.0;
    for (int i = 0; i < x.curve_count(); ++i) {
        for (int k = 0; k < x.grid.size(); ++k) {
            const Eigen::VectorXd z = fx.normal.f[i].col(k) + fx.H * x.f[i].col(k);
            unit = std::max(unit, std::abs(oracle::mink(z, z) - 1.0));
        }
    }
    c.below("||z|^2-1|", unit, 1e-10);

    cmc::SampledNet z{x.grid, {}, {}, true};
    for (int i = 0; i < x.curve_count(); ++i) {
        z.f.push_back(-cert.cq.z[i]);
        z.df.push_back(-(fx.normal.df[i] + fx.H * x.df[i]));
    }
    const std::vector<Eigen::VectorXd> nu(static_cast<std::size_t>(x.curve_count()),
                                          Eigen::VectorXd::Constant(x.grid.size(), std::sqrt(-1.0 / fx.H)));
    c.below("koenigs cylinder", cmc::verify_koenigs(x, z, nu).max(), 1e-6);
    double koenigs = 0.0;
    for (const auto& name : {"cylinder-patch", "layered", "tractrix"}) {
        const auto s = fixtures::surface_fixture(name);
        koenigs = std::max(koenigs, cmc::verify_koenigs(cmc::lifted_net(s), [&] {
                                        auto d = cmc::lifted_christoffel_dual(s);
                                        for (auto& f : d.f) f = -f;
                                        for (auto& f : d.df) f = -f;
                                        return d;
                                    }(),
                                                        cmc::koenigs_nu(s))
                                        .max());
    }
    c.below("koenigs christoffel pairs", koenigs, 1e-6);
}

struct Command {
    int code;
    std::string out;
};

Command shell(const std::string& command) {
    Command result{-1, {}};
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) return result;
    char buffer[4096];
    while (std::fgets(buffer, sizeof buffer, pipe)) result.out += buffer;
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

void corrupt(const fs::path& in, const fs::path& out, unsigned seed) {
    auto j = io::read_json(in.string());
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 1e-3);
    auto perturb = [&](nlohmann::json& curve) {
        for (auto& p : curve["x"]) {
            for (auto& v : p) v = v.get<double>() + noise(rng);
        }
    };
    if (io::is_surface_json(j)) {
        for (auto& curve : j["curves"]) perturb(curve);
    } else {
        perturb(j);
    }
    io::write_json(out.string(), j);
}

std::vector<std::string> failing_checks(const std::string& table) {
    std::vector<std::string> names;
    std::istringstream in(table);
    for (std::string line; std::getline(in, line);) {
        if (line.size() >= 4 && line.compare(line.size() - 4, 4, "FAIL") == 0) {
            names.push_back(line.substr(0, line.find(' ')));
        }
    }
    return names;
}

void criterion_cli(Criterion& c, const std::string& cli, const fs::path& work) {
    fs::create_directories(work);
    struct Fixture {
        std::string name;
        std::string flag;
        std::string make;
    };
    std::vector<Fixture> fixtures;
    for (const auto& name : fixtures::curve_fixture_names()) fixtures.push_back({name, "--curve", "curve --fixture " + name});
    for (const auto& name : fixtures::surface_fixture_names()) {
        fixtures.push_back({name, "--surface", "surface build --fixture " + name});
    }
    const std::string exe = "'" + cli + "'";
    int clean_failures = 0;
    int undetected = 0;
    unsigned seed = 7;
    for (const auto& f : fixtures) {
        const fs::path file = work / (f.name + ".json");
        const fs::path noisy = work / (f.name + "-noisy.json");
        const auto made = shell(exe + " " + f.make + " --out " + quote(file));
        if (made.code != 0) {
            c.fail("could not write " + f.name + ": " + made.out);
            continue;
        }
        const auto clean = shell(exe + " verify --suite all " + f.flag + " " + quote(file));
        if (clean.code != 0) {
            ++clean_failures;
            c.fail(f.name + " exits " + std::to_string(clean.code));
        }
        corrupt(file, noisy, seed++);
        const auto bad = shell(exe + " verify --suite all " + f.flag + " " + quote(noisy));
        const auto named = failing_checks(bad.out);
        if (bad.code != 1 || named.empty()) {
            ++undetected;
            c.fail(f.name + " with noise exits " + std::to_string(bad.code));
        } else {
            c.detail << " " << f.name << " noisy -> 1 (" << named.front() << ");";
        }
    }
    c.below("clean fixtures failing", clean_failures, 1);
    c.below("corruptions not flagged", undetected, 1);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <isothermic-cli> <work-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path work = argv[2];

    run(1, "Riccati and linear routes agree", criterion_riccati);
    run(2, "closed-form Darboux pairs", criterion_closed_form);
    run(3, "Bianchi quadrilateral", criterion_quad);
    run(4, "bigauge identity", criterion_bigauge);
    run(5, "Bianchi cube routes", criterion_cube);
    run(6, "Calapso certificates", criterion_calapso);
    run(7, "Christoffel duality", criterion_christoffel);
    run(8, "Moutard lift", criterion_moutard);
    run(9, "constant mean curvature", criterion_cmc);
    run(10, "CLI verify gate", [&](Criterion& c) { criterion_cli(c, cli, work); });

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
