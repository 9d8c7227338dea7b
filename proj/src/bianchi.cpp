#include "isothermic/bianchi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "isothermic/errors.hpp"
#include "isothermic/numerics.hpp"

namespace isothermic::bianchi {

using darboux::gauge_map;
using minkowski::inner;

double moebius_cross_ratio(const MinkVector& p1, const MinkVector& p2, const MinkVector& p3, const MinkVector& p4,
                           double tol) {
    const std::array<MinkVector, 4> points{p1, p2, p3, p4};
    for (const auto& p : points) {
        if (p.size() != p1.size()) throw DimensionMismatch("moebius_cross_ratio: vectors of different size");
    }
    const minkowski::Chart chart = minkowski::Chart::avoiding(points);
    using clifford::Multivector;
    std::array<Multivector, 4> x{Multivector(chart.dim()), Multivector(chart.dim()), Multivector(chart.dim()),
                                 Multivector(chart.dim())};
    for (std::size_t i = 0; i < 4; ++i) x[i] = Multivector::vector(chart.point(points[i]));
    const Multivector cr = clifford::clifford_cross_ratio(x[0], x[1], x[2], x[3]);
    const double scalar = cr.scalar_part();
    const double rest = cr.non_scalar_magnitude();
    if (rest > tol * std::max(std::abs(scalar), 1.0)) {
        throw InvalidArgument("moebius_cross_ratio: points are not concircular (non-scalar part " +
                              std::to_string(rest) + ")");
    }
    return scalar;
}

double parallel_residual(const LiftedCurve& c, double t, const LightConeSection& section, bool projective) {
    if (!(c.grid == section.grid)) throw DimensionMismatch("parallel_residual: grids differ");
    const Eigen::MatrixXd d = numerics::differentiate(section.xi, section.grid.step());
    double worst = 0.0;
    for (int k = 0; k < c.size(); ++k) {
        const MinkVector y = section.xi.col(k);
        const auto a = darboux::connection_coeff(c.xi.col(k), c.dxi.col(k), c.m[k], t);
        MinkVector defect = d.col(k) - a(y);
        if (projective) defect -= (defect.dot(y) / y.squaredNorm()) * y;
        worst = std::max(worst, defect.norm() / y.norm());
    }
    return worst;
}

MinkVector quad_point(const MinkVector& xi, const MinkVector& xi0, double mu0, const MinkVector& xi1, double mu1) {
    return gauge_map(xi, xi0, 1.0 - mu1 / mu0)(xi1);
}

namespace {

void check_parameters(double mu0, double mu1) {
    if (mu0 == 0.0 || mu1 == 0.0) throw InvalidArgument("bianchi: spectral parameters must be non-zero");
    if (mu0 == mu1) throw InvalidArgument("bianchi: spectral parameters must differ");
}

void check_section(const LiftedCurve& c, const LightConeSection& s, double mu, double tol, const char* name) {
    if (!(c.grid == s.grid)) throw DimensionMismatch(std::string("bianchi: grid of ") + name + " differs");
    const double r = parallel_residual(c, mu, s);
    if (r > tol) {
        throw InvalidArgument(std::string("bianchi: ") + name + " is not a parallel section (residual " +
                              std::to_string(r) + ")");
    }
}

LightConeSection pointwise(const darboux::Grid& grid, int rows, auto&& f) {
    LightConeSection out{grid, Eigen::MatrixXd(rows, grid.size())};
    for (int k = 0; k < grid.size(); ++k) out.xi.col(k) = f(k);
    return out;
}

double operator_norm(const Eigen::MatrixXd& a) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()[0];
}

}  // namespace

LightConeSection bianchi_quad(const LiftedCurve& c, const LightConeSection& xi0, double mu0,
                              const LightConeSection& xi1, double mu1, const QuadOptions& options) {
    check_parameters(mu0, mu1);
    check_section(c, xi0, mu0, options.section_tol, "xi0");
    check_section(c, xi1, mu1, options.section_tol, "xi1");
    return pointwise(c.grid, static_cast<int>(c.xi.rows()),
                     [&](int k) { return quad_point(c.xi.col(k), xi0.at(k), mu0, xi1.at(k), mu1); });
}

BigaugeResidual check_bigauge(const MinkVector& xi, const MinkVector& xi0, const MinkVector& xi1,
                              const MinkVector& xi01, double mu0, double mu1, double t) {
    check_parameters(mu0, mu1);
    if (t == mu0 || t == mu1) throw InvalidArgument("check_bigauge: t at a pole of the gauge factors");
    const double r0 = 1.0 - t / mu0;
    const double r1 = 1.0 - t / mu1;
    const Eigen::MatrixXd left = (gauge_map(xi0, xi01, r1).matrix() * gauge_map(xi, xi0, r0).matrix()).matrix;
    const Eigen::MatrixXd right = (gauge_map(xi1, xi01, r0).matrix() * gauge_map(xi, xi1, r1).matrix()).matrix;
    const Eigen::MatrixXd middle = gauge_map(xi0, xi1, r1 / r0).matrix().matrix;
    const double scale = operator_norm(middle);
    return BigaugeResidual{operator_norm(left - right) / scale,
                           std::max(operator_norm(left - middle), operator_norm(right - middle)) / scale};
}

BigaugeResidual check_bigauge(const LightConeSection& xi, const LightConeSection& xi0, const LightConeSection& xi1,
                              const LightConeSection& xi01, double mu0, double mu1, double t) {
    BigaugeResidual worst;
    for (int k = 0; k < xi.size(); ++k) {
        const auto r = check_bigauge(xi.at(k), xi0.at(k), xi1.at(k), xi01.at(k), mu0, mu1, t);
        worst.sides = std::max(worst.sides, r.sides);
        worst.middle = std::max(worst.middle, r.middle);
    }
    return worst;
}

BianchiCube bianchi_cube(const LiftedCurve& c, const LightConeSection& xi0, double mu0, const LightConeSection& xi1,
                         double mu1, const LightConeSection& xi2, double mu2, const QuadOptions& options) {
    check_parameters(mu0, mu1);
    check_parameters(mu0, mu2);
    check_parameters(mu1, mu2);
    check_section(c, xi2, mu2, options.section_tol, "xi2");
    BianchiCube cube{bianchi_quad(c, xi0, mu0, xi1, mu1, options), bianchi_quad(c, xi0, mu0, xi2, mu2, options),
                     bianchi_quad(c, xi1, mu1, xi2, mu2, options), {c.grid, {}}, {c.grid, {}}, {c.grid, {}}};
    const int rows = static_cast<int>(c.xi.rows());
    cube.xi012 = pointwise(c.grid, rows, [&](int k) {
        return quad_point(xi0.at(k), cube.xi01.at(k), mu1, cube.xi02.at(k), mu2);
    });
    cube.via1 = pointwise(c.grid, rows, [&](int k) {
        return quad_point(xi1.at(k), cube.xi01.at(k), mu0, cube.xi12.at(k), mu2);
    });
    cube.via2 = pointwise(c.grid, rows, [&](int k) {
        return quad_point(xi2.at(k), cube.xi02.at(k), mu0, cube.xi12.at(k), mu1);
    });
    for (int k = 0; k < c.size(); ++k) {
        cube.route_residual = std::max({cube.route_residual,
                                        minkowski::projective_distance(cube.xi012.at(k), cube.via1.at(k)),
                                        minkowski::projective_distance(cube.xi012.at(k), cube.via2.at(k))});
    }
    return cube;
}

}  // namespace isothermic::bianchi
