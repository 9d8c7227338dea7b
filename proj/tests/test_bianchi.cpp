#include <doctest.h>

#include <cmath>
#include <random>

#include "isothermic/bianchi.hpp"
#include "isothermic/errors.hpp"
#include "isothermic/fixtures.hpp"
#include "oracles.hpp"

using namespace isothermic;
using namespace isothermic::bianchi;

namespace {

// Scales <upper> by r and <lower> by 1/r, fixing their orthogonal complement.
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

LightConeSection section(const LiftedCurve& c, double mu, const Eigen::Vector2d& p) {
    return darboux::integrate_parallel_section(c, mu, oracle::lift(p));
}

struct Quad {
    curves::PolarizedCurve circle = fixtures::unit_circle();
    LiftedCurve lift = darboux::lift(circle);
    LightConeSection s0 = section(lift, -2.0, {2.0, 0.0});
    LightConeSection s1 = section(lift, 1.0, {0.3, 0.4});
    LightConeSection s01 = bianchi_quad(lift, s0, -2.0, s1, 1.0);
};

Quad make_quad() { return Quad{}; }

// Three lifted points on a circle in R^3.
std::vector<Eigen::VectorXd> concircular(std::mt19937& rng, int count) {
    const Eigen::Vector3d center = oracle::random_vector(rng, 3);
    const Eigen::Vector3d u = oracle::random_vector(rng, 3).normalized();
    const Eigen::Vector3d v = u.cross(Eigen::Vector3d(oracle::random_vector(rng, 3))).normalized();
    const double radius = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    std::vector<Eigen::VectorXd> out;
    for (int i = 0; i < count; ++i) {
        const double a = 2.0 * i + std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        out.push_back(oracle::lift(center + radius * (std::cos(a) * u + std::sin(a) * v)));
    }
    return out;
}

}  // namespace

TEST_CASE("cross ratio round trip through the gauge map") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = concircular(rng, 3);
        const Eigen::VectorXd zeta = gauge(p[2], p[0], 3.0) * p[1];
        CHECK(moebius_cross_ratio(p[0], p[1], p[2], zeta) == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(moebius_cross_ratio(p[0], p[1], p[2], p[1]) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cross ratio rejects non-concircular points") {
    const Eigen::VectorXd a = oracle::lift(Eigen::Vector3d(0, 0, 0));
    const Eigen::VectorXd b = oracle::lift(Eigen::Vector3d(1, 0, 0));
    const Eigen::VectorXd c = oracle::lift(Eigen::Vector3d(0, 1, 0));
    const Eigen::VectorXd d = oracle::lift(Eigen::Vector3d(0, 0, 1));
    CHECK_THROWS_AS(moebius_cross_ratio(a, b, c, d), InvalidArgument);
}

TEST_CASE("bianchi quadrilateral") {
    const auto q = make_quad();
    CHECK(parallel_residual(darboux::lift(q.s0, q.circle.m()), 1.0, q.s01) < 1e-6);
    CHECK(parallel_residual(darboux::lift(q.s1, q.circle.m()), -2.0, q.s01, true) < 1e-6);

    std::vector<double> cr;
    std::vector<double> swapped;
    for (int k = 0; k < q.circle.size(); ++k) {
        cr.push_back(moebius_cross_ratio(q.lift.xi.col(k), q.s0.at(k), q.s01.at(k), q.s1.at(k)));
        swapped.push_back(moebius_cross_ratio(q.s0.at(k), q.s1.at(k), q.lift.xi.col(k), q.s01.at(k)));
    }
    CHECK(std::abs(cr.front() + 0.5) < 1e-8);
    CHECK(oracle::spread(cr) < 1e-8);
    for (double v : swapped) CHECK(v == doctest::Approx(1.5).epsilon(1e-8));

    for (int k = 0; k < q.circle.size(); k += 250) {
        const Eigen::VectorXd expected = gauge(q.lift.xi.col(k), q.s0.at(k), 1.0 - 1.0 / -2.0) * q.s1.at(k);
        CHECK(minkowski::projective_distance(q.s01.at(k), expected) < 1e-12);
    }
}

TEST_CASE("bianchi quadrilateral is symmetric and has equal opposite parameters") {
    const auto q = make_quad();
    const auto other = bianchi_quad(q.lift, q.s1, 1.0, q.s0, -2.0);
    double worst = 0.0;
    for (int k = 0; k < q.circle.size(); ++k) {
        worst = std::max(worst, minkowski::projective_distance(q.s01.at(k), other.at(k)));
    }
    CHECK(worst < 1e-8);

    const auto [a, b] = transforms::project_pair(q.s1, q.s01, q.circle.m());
    const auto check = darboux::is_darboux_pair(a, b, q.circle.m());
    CHECK(check.mu == doctest::Approx(-2.0).epsilon(1e-6));
    const auto [c, d] = transforms::project_pair(q.s0, q.s01, q.circle.m());
    CHECK(darboux::is_darboux_pair(c, d, q.circle.m()).mu == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(bianchi_quad(q.lift, q.s0, -2.0, q.s0, -2.0), InvalidArgument);
}

TEST_CASE("bigauge identity") {
    const auto q = make_quad();
    const int k = q.circle.size() / 4;
    const Eigen::VectorXd xi = q.lift.xi.col(k);
    const Eigen::VectorXd xi0 = q.s0.at(k);
    const Eigen::VectorXd xi1 = q.s1.at(k);

    const auto trivial = check_bigauge(xi, xi0, xi1, q.s01.at(k), -2.0, 1.0, 0.0);
    CHECK(trivial.sides < 1e-14);
    CHECK(trivial.middle < 1e-14);

    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int draws = 0; draws < 20;) {
        const double mu0 = u(rng);
        const double mu1 = u(rng);
        const double t = u(rng);
        if (std::min({std::abs(mu0), std::abs(mu1), std::abs(mu0 - mu1), std::abs(t - mu0), std::abs(t - mu1)}) < 0.2) {
            continue;
        }
        ++draws;
        const Eigen::VectorXd xi01 = gauge(xi, xi0, 1.0 - mu1 / mu0) * xi1;
        const Eigen::MatrixXd lhs = gauge(xi0, xi01, 1.0 - t / mu1) * gauge(xi, xi0, 1.0 - t / mu0);
        const Eigen::MatrixXd rhs = gauge(xi1, xi01, 1.0 - t / mu0) * gauge(xi, xi1, 1.0 - t / mu1);
        const Eigen::MatrixXd middle = gauge(xi0, xi1, (1.0 - t / mu1) / (1.0 - t / mu0));
        const double scale = middle.norm();
        CHECK((lhs - rhs).norm() < 1e-10 * scale);
        CHECK((lhs - middle).norm() < 1e-10 * scale);
        const auto r = check_bigauge(xi, xi0, xi1, xi01, mu0, mu1, t);
        CHECK(r.sides < 1e-10);
        CHECK(r.middle < 1e-10);
    }
    CHECK_THROWS_AS(check_bigauge(xi, xi0, xi1, q.s01.at(k), -2.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("bianchi cube") {
    const auto q = make_quad();
    const auto s2 = section(q.lift, 3.0, {-1.5, 0.8});
    const auto cube = bianchi_cube(q.lift, q.s0, -2.0, q.s1, 1.0, s2, 3.0);
    CHECK(cube.route_residual < 1e-6);

    double worst = 0.0;
    for (int k = 0; k < q.circle.size(); ++k) {
        worst = std::max({worst, minkowski::projective_distance(cube.xi012.at(k), cube.via1.at(k)),
                          minkowski::projective_distance(cube.xi012.at(k), cube.via2.at(k))});
    }
    CHECK(worst < 1e-6);

    const auto& m = q.circle.m();
    auto fitted = [&](const LightConeSection& a, const LightConeSection& b) {
        const auto [x, y] = transforms::project_pair(a, b, m);
        return darboux::is_darboux_pair(x, y, m).mu;
    };
    CHECK(fitted(q.s0, cube.xi01) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fitted(q.s0, cube.xi02) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fitted(q.s1, cube.xi12) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fitted(cube.xi01, cube.xi012) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fitted(cube.xi02, cube.xi012) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fitted(cube.xi12, cube.xi012) == doctest::Approx(-2.0).epsilon(1e-6));

    CHECK_THROWS_AS(bianchi_cube(q.lift, q.s0, -2.0, q.s1, 1.0, q.s1, 1.0), InvalidArgument);
}
