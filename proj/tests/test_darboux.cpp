#include <doctest.h>

#include <cmath>
#include <random>

#include "isothermic/darboux.hpp"
#include "isothermic/errors.hpp"
#include "isothermic/fixtures.hpp"
#include "oracles.hpp"

using namespace isothermic;
using namespace isothermic::darboux;
using curves::Grid;

namespace {

const Grid kGrid(0.0, 2.0, 2001);

PolarizedCurve unit_circle() { return curves::make_curve(curves::family::Circle{1.0, 2}, kGrid); }
PolarizedCurve circle2() { return curves::make_curve(curves::family::Circle{2.0, 2}, kGrid); }

double max_distance_to_circle(const PolarizedCurve& c, double radius) {
    double worst = 0.0;
    for (int k = 0; k < c.size(); ++k) {
        const double s = c.grid().node(k);
        worst = std::max(worst, (c.point(k) - radius * Eigen::Vector2d(std::cos(s), std::sin(s))).norm());
    }
    return worst;
}

}  // namespace

TEST_CASE("tangent cross ratio of concentric circles") {
    const auto cr = tangent_cross_ratio(unit_circle(), circle2());
    for (const auto& v : cr) {
        // -R / (R - 1)^2 with R = 2.
        CHECK(v.scalar_part() == doctest::Approx(-2.0).epsilon(1e-14));
        CHECK(v.non_scalar_magnitude() < 1e-14);
    }
    const auto back = tangent_cross_ratio(circle2(), unit_circle());
    for (std::size_t k = 0; k < cr.size(); ++k) CHECK((cr[k] - back[k]).norm() < 1e-13);
}

TEST_CASE("tangent cross ratio of the tractrix pair") {
    const auto [p, m] = curves::tractrix_pair(unit_circle(), 0.25);
    const auto cr = tangent_cross_ratio(p, m);
    const auto back = tangent_cross_ratio(m, p);
    for (std::size_t k = 0; k < cr.size(); ++k) {
        // mu (1 + kappa^2 / (4 mu)) = 1/2 for kappa = 1.
        CHECK(cr[k].scalar_part() == doctest::Approx(0.5).epsilon(1e-8));
        CHECK((cr[k] - back[k]).norm() < 1e-13);
    }
}

TEST_CASE("tangent cross ratio agrees with complex arithmetic") {
    // With vectors of R^2 as complex numbers and e12 as i, a b reads conj(a) b, so
    // cr = conj(x') d conj(x_hat') d / |d|^4 for d = x - x_hat.
    const auto x = unit_circle();
    const auto y = curves::make_curve(curves::family::Circle{0.7, 2, Eigen::Vector2d(0.4, -1.9)}, kGrid);
    const auto cr = tangent_cross_ratio(x, y);
    for (int k = 0; k < x.size(); k += 100) {
        const auto d = oracle::cpx(x.point(k)) - oracle::cpx(y.point(k));
        const auto expected =
            std::conj(oracle::cpx(x.tangent(k))) * d * std::conj(oracle::cpx(y.tangent(k))) * d / std::pow(std::abs(d), 4);
        CHECK(std::abs(cr[k].scalar_part() - expected.real()) < 1e-12);
        CHECK(std::abs(cr[k][3] - expected.imag()) < 1e-12);
    }
}

TEST_CASE("ribaucour pairs") {
    const auto concentric = is_ribaucour(unit_circle(), circle2());
    CHECK(concentric.ok);
    CHECK(concentric.residual < 1e-13);

    const auto shifted = curves::make_curve(curves::family::Circle{1.0, 2, Eigen::Vector2d(1.0, 0.0)}, kGrid);
    CHECK_FALSE(is_ribaucour(unit_circle(), shifted).ok);

    const auto line = curves::make_curve(curves::family::Line{2}, kGrid);
    Eigen::MatrixXd x = line.x();
    x.row(0).array() += 3.0;
    const curves::PolarizedCurve moved(kGrid, x, line.xprime(), line.m());
    const auto collinear = is_ribaucour(line, moved);
    CHECK(collinear.ok);
    CHECK(collinear.residual == 0.0);
}

TEST_CASE("darboux pairs") {
    const auto concentric = is_darboux_pair(unit_circle(), circle2());
    CHECK(concentric.ok);
    CHECK(concentric.mu == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(concentric.residual < 1e-12);

    const auto [p, m] = curves::tractrix_pair(unit_circle(), 0.25);
    const auto tractrix = is_darboux_pair(p, m);
    CHECK(tractrix.ok);
    CHECK(tractrix.mu == doctest::Approx(0.25).epsilon(1e-12));

    Eigen::VectorXd wobble(kGrid.size());
    for (int k = 0; k < kGrid.size(); ++k) wobble[k] = 1.0 + 0.5 * std::sin(kGrid.node(k));
    CHECK_FALSE(is_darboux_pair(unit_circle(), circle2(), wobble).ok);
}

TEST_CASE("riccati equation reproduces the concentric circle") {
    const auto x_hat = integrate_riccati(unit_circle(), -2.0, Eigen::Vector2d(2.0, 0.0));
    CHECK(max_distance_to_circle(x_hat, 2.0) < 1e-10);
    const auto check = is_darboux_pair(unit_circle(), x_hat);
    CHECK(check.mu == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("riccati equation agrees with an independent complex integrator") {
    // Ellipse with a non-constant polarization and a generic start point.
    const double a = 1.3;
    const double b = 0.8;
    Eigen::MatrixXd x(2, kGrid.size());
    Eigen::MatrixXd dx(2, kGrid.size());
    Eigen::VectorXd m(kGrid.size());
    for (int k = 0; k < kGrid.size(); ++k) {
        const double s = kGrid.node(k);
        x.col(k) << a * std::cos(s), b * std::sin(s);
        dx.col(k) << -a * std::sin(s), b * std::cos(s);
        m[k] = 1.0 + 0.3 * std::sin(s);
    }
    const curves::PolarizedCurve c(kGrid, x, dx, m, true);
    const double mu = 0.8;
    const Eigen::Vector2d start(2.0, 0.7);
    const auto x_hat = integrate_riccati(c, mu, start);
    const auto expected = oracle::planar_riccati([&](double s) { return oracle::cplx(a * std::cos(s), b * std::sin(s)); },
                                                 [&](double s) { return oracle::cplx(-a * std::sin(s), b * std::cos(s)); },
                                                 [](double s) { return 1.0 + 0.3 * std::sin(s); }, mu, {2.0, 0.7},
                                                 kGrid.s0(), kGrid.s1(), kGrid.size());
    double worst = 0.0;
    for (int k = 0; k < kGrid.size(); ++k) {
        worst = std::max(worst, (x_hat.point(k) - oracle::vec(expected[static_cast<std::size_t>(k)])).norm());
    }
    CHECK(worst < 1e-9);
    const auto check = is_darboux_pair(c, x_hat);
    CHECK(check.mu == doctest::Approx(mu).epsilon(1e-6));
    CHECK(check.residual < 5e-6);
}

TEST_CASE("riccati edge cases") {
    const auto still = riccati_trajectory(unit_circle(), 0.0, Eigen::Vector2d(3.0, 1.0));
    for (int k = 0; k < kGrid.size(); ++k) CHECK((still.points.col(k) - Eigen::Vector2d(3.0, 1.0)).norm() == 0.0);
    CHECK_THROWS_AS(integrate_riccati(unit_circle(), -2.0, Eigen::Vector2d(1.0, 0.0)), SingularEncounter);
    CHECK_THROWS_AS(integrate_riccati(unit_circle(), -2.0, Eigen::Vector3d(1.0, 0.0, 0.0)), DimensionMismatch);
}

TEST_CASE("connection coefficient") {
    std::mt19937 rng(8);
    const Eigen::Vector3d x(0.3, -0.2, 1.1);
    const Eigen::Vector3d v(0.8, 0.5, -0.4);
    const MinkVector xi = oracle::lift(x);
    // Derivative of the lift along a curve through x with velocity v.
    MinkVector dxi(5);
    dxi << v, -x.dot(v), x.dot(v);
    CHECK(connection_coeff(xi, dxi, 1.0, 0.0).matrix.norm() == 0.0);

    const double t = 0.7;
    const double m = 1.3;
    const auto A = connection_coeff(xi, dxi, m, t);
    const double n2 = oracle::mink(dxi, dxi);
    CHECK((A(xi) + (2 * t / m) * oracle::mink(xi, dxi) / n2 * xi).norm() < 1e-13);
    CHECK(A.skewness_defect() < 1e-13);
    CHECK((connection_coeff(2.0 * xi, 2.0 * dxi, m, t).matrix - A.matrix).norm() < 1e-13);

    // Lift invariance: (f xi)' = f' xi + f xi'.
    for (int trial = 0; trial < 5; ++trial) {
        const double f = std::uniform_real_distribution<double>(0.2, 3.0)(rng);
        const double df = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        const auto B = connection_coeff(f * xi, df * xi + f * dxi, m, t);
        CHECK((B.matrix - A.matrix).norm() < 1e-12 * A.matrix.norm());
    }
}

TEST_CASE("parallel section projects to the concentric circle") {
    const auto c = unit_circle();
    const auto section = integrate_parallel_section(c, -2.0, oracle::lift(Eigen::Vector2d(2.0, 0.0)));
    CHECK(section.lightlike_defect() < 1e-10);
    const auto x_hat = project(section, c.m());
    CHECK(max_distance_to_circle(x_hat, 2.0) < 1e-6);

    const MinkVector start = oracle::lift(Eigen::Vector2d(0.4, 3.0));
    const auto still = integrate_parallel_section(c, 0.0, start);
    for (int k = 0; k < still.size(); ++k) CHECK((still.at(k) - start).norm() < 1e-13);
    CHECK_THROWS_AS(integrate_parallel_section(c, 1.0, Eigen::Vector4d(1, 0, 0, 0)), InvalidArgument);
}

TEST_CASE("riccati and parallel-section routes agree") {
    const auto c = fixtures::unit_circle();
    const Eigen::Vector2d start(2.0, 0.0);
    const auto riccati = integrate_riccati(c, -2.0, start);
    const auto linear = project(integrate_parallel_section(c, -2.0, oracle::lift(start)), c.m());
    CHECK((riccati.x() - linear.x()).colwise().norm().maxCoeff() < 1e-6);

    const auto generic = integrate_riccati(c, -2.0, Eigen::Vector2d(1.7, 0.9));
    const auto generic_linear = project(integrate_parallel_section(c, -2.0, oracle::lift(Eigen::Vector2d(1.7, 0.9))), c.m());
    CHECK((generic.x() - generic_linear.x()).colwise().norm().maxCoeff() < 1e-6);
    const auto spread = is_darboux_pair(c, generic_linear);
    CHECK(spread.residual < 5e-6);
}

TEST_CASE("gauge map") {
    std::mt19937 rng(9);
    const MinkVector xi = oracle::lift(Eigen::Vector3d(0.5, 0.1, -0.3));
    const MinkVector xi_hat = oracle::lift(Eigen::Vector3d(-1.0, 0.7, 0.4));
    const auto id = gauge_map(xi, xi_hat, 1.0).matrix();
    CHECK((id.matrix - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-14);

    const double r = 2.5;
    const auto G = gauge_map(xi, xi_hat, r);
    CHECK((G(xi_hat) - r * xi_hat).norm() < 1e-13 * xi_hat.norm());
    CHECK((G(xi) - xi / r).norm() < 1e-13 * xi.norm());
    // A vector orthogonal to both lines.
    const MinkVector v = oracle::random_vector(rng, 5);
    const MinkVector perp = v - minkowski::line_projection(v, xi, xi_hat) - minkowski::line_projection(v, xi_hat, xi);
    CHECK((G(perp) - perp).norm() < 1e-13 * (1 + perp.norm()));
    CHECK(G.matrix().metric_drift() < 1e-13);
    CHECK(((G.matrix() * gauge_map(xi, xi_hat, 1.0 / r).matrix()).matrix - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-13);

    CHECK_THROWS_AS(gauge_map(xi, xi_hat, 0.0), InvalidArgument);
    CHECK_THROWS_AS(gauge_map(xi, 3.0 * xi, 2.0), NonComplementary);
}

TEST_CASE("gauge relation") {
    const auto c = lift(unit_circle());
    const auto c_hat = lift(circle2());
    CHECK(verify_gauge_relation(c, c_hat, -2.0, 1.0) < 1e-6);
    CHECK(verify_gauge_relation(c, c_hat, -2.0, 0.0) < 1e-6);
    CHECK_THROWS_AS(verify_gauge_relation(c, c_hat, -2.0, -2.0), InvalidArgument);

    // A Darboux pair from a parallel section of a non-circular curve.
    Eigen::MatrixXd x(3, kGrid.size());
    Eigen::MatrixXd dx(3, kGrid.size());
    for (int k = 0; k < kGrid.size(); ++k) {
        const double s = kGrid.node(k);
        x.col(k) << std::cos(s), 0.6 * std::sin(s), 0.3 * s;
        dx.col(k) << -std::sin(s), 0.6 * std::cos(s), 0.3;
    }
    const curves::PolarizedCurve helixish(kGrid, x, dx, Eigen::VectorXd::Ones(kGrid.size()), true);
    const double mu = 1.5;
    const auto section = integrate_parallel_section(helixish, mu, oracle::lift(Eigen::Vector3d(0.2, 1.4, -0.5)));
    const auto partner = lift(section, helixish.m());
    CHECK(verify_gauge_relation(lift(helixish), partner, mu, 0.4) < 1e-5);
    CHECK(verify_gauge_relation(lift(helixish), partner, mu, -1.1) < 1e-5);
}

TEST_CASE("tangent lines of a darboux pair meet as predicted") {
    const auto [p, m] = curves::tractrix_pair(unit_circle(), 0.25);
    int seen = 0;
    for (int k = 100; k < kGrid.size(); k += 400) {
        const auto hit = tangent_intersection(p, m, k);
        if (!hit) continue;
        ++seen;
        CHECK(hit->miss_distance < 1e-10);
        CHECK(hit->ratio == doctest::Approx(hit->predicted).epsilon(1e-8));
    }
    CHECK(seen > 0);
}
