#include "isothermic/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isothermic/errors.hpp"
#include "isothermic/numerics.hpp"
#include "sampling.hpp"

namespace isothermic::darboux {

using minkowski::Frame;
using minkowski::inner;

Eigen::MatrixXd LightConeSection::derivative() const {
    if (has_derivative()) return dxi;
    return numerics::differentiate(xi, grid.step());
}

double LightConeSection::lightlike_defect() const {
    double worst = 0.0;
    for (int k = 0; k < size(); ++k) {
        const MinkVector y = xi.col(k);
        worst = std::max(worst, std::abs(minkowski::norm2(y)) / y.squaredNorm());
    }
    return worst;
}

LiftedCurve lift(const PolarizedCurve& c) {
    const Frame frame = Frame::canonical(c.dim());
    LiftedCurve out{c.grid(), Eigen::MatrixXd(c.dim() + 2, c.size()), Eigen::MatrixXd(c.dim() + 2, c.size()), c.m()};
    for (int k = 0; k < c.size(); ++k) {
        out.xi.col(k) = minkowski::euclidean_lift(c.point(k), frame);
        out.dxi.col(k) = minkowski::euclidean_lift_derivative(c.point(k), c.tangent(k), frame);
    }
    return out;
}

LiftedCurve lift(const LightConeSection& section, const Eigen::VectorXd& m) {
    if (m.size() != section.size()) throw DimensionMismatch("lift: polarization does not match section grid");
    return LiftedCurve{section.grid, section.xi, section.derivative(), m};
}

LightConeSection euclidean_section(const PolarizedCurve& c) {
    LiftedCurve l = lift(c);
    return LightConeSection{c.grid(), std::move(l.xi), std::move(l.dxi), Normalization::euclidean, {}};
}

PolarizedCurve project(const LightConeSection& section, const Eigen::VectorXd& m, const minkowski::Chart& chart) {
    const int n = section.dim();
    Eigen::MatrixXd x(n, section.size());
    for (int k = 0; k < section.size(); ++k) {
        if (chart.clearance(section.at(k)) < 1e-8) {
            throw PointAtInfinity("project: section passes through the point at infinity at s = " +
                                  std::to_string(section.grid.node(k)));
        }
        x.col(k) = chart.point(section.at(k));
    }
    if (!section.has_derivative()) return PolarizedCurve::from_samples(section.grid, std::move(x), m);
    Eigen::MatrixXd dx(n, section.size());
    for (int k = 0; k < section.size(); ++k) dx.col(k) = chart.derivative(section.at(k), section.dxi.col(k));
    return PolarizedCurve(section.grid, std::move(x), std::move(dx), m);
}

PolarizedCurve project(const LightConeSection& section, const Eigen::VectorXd& m) {
    return project(section, m, minkowski::Chart::canonical(section.dim()));
}

namespace {

void require_same_grid(const PolarizedCurve& a, const PolarizedCurve& b) {
    if (!(a.grid() == b.grid())) throw DimensionMismatch("curves are sampled on different grids");
    if (a.dim() != b.dim()) throw DimensionMismatch("curves live in different dimensions");
}

double median(std::vector<double> values) {
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (values.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

}  // namespace

std::vector<clifford::Multivector> tangent_cross_ratio(const PolarizedCurve& x, const PolarizedCurve& x_hat) {
    require_same_grid(x, x_hat);
    using clifford::Multivector;
    std::vector<Multivector> out;
    out.reserve(x.size());
    for (int k = 0; k < x.size(); ++k) {
        const Eigen::VectorXd secant = x.point(k) - x_hat.point(k);
        const double scale = std::max({x.point(k).norm(), x_hat.point(k).norm(), 1.0});
        Multivector inv(x.dim());
        try {
            inv = clifford::vector_inverse(Multivector::vector(secant), scale);
        } catch (const DegenerateSecant&) {
            throw DegenerateSecant("tangent_cross_ratio: curves intersect at s = " + std::to_string(x.grid().node(k)));
        }
        out.push_back(Multivector::vector(x.tangent(k)) * inv * Multivector::vector(x_hat.tangent(k)) * inv);
    }
    return out;
}

RibaucourCheck is_ribaucour(const PolarizedCurve& x, const PolarizedCurve& x_hat, double tol) {
    RibaucourCheck check;
    for (const auto& cr : tangent_cross_ratio(x, x_hat)) {
        const double scalar = std::abs(cr.scalar_part());
        const double rest = cr.non_scalar_magnitude();
        check.residual = std::max(check.residual, scalar > 0.0 ? rest / scalar : (rest > 0.0 ? HUGE_VAL : 0.0));
    }
    check.ok = check.residual < tol;
    return check;
}

DarbouxCheck is_darboux_pair(const PolarizedCurve& x, const PolarizedCurve& x_hat, const Eigen::VectorXd& m,
                             double tol) {
    if (m.size() != x.size()) throw DimensionMismatch("is_darboux_pair: polarization length");
    const auto crs = tangent_cross_ratio(x, x_hat);
    std::vector<double> products(crs.size());
    DarbouxCheck check;
    for (std::size_t k = 0; k < crs.size(); ++k) {
        products[k] = crs[k].scalar_part() * m[static_cast<Eigen::Index>(k)];
        const double scalar = std::abs(crs[k].scalar_part());
        const double rest = crs[k].non_scalar_magnitude();
        check.reality_residual =
            std::max(check.reality_residual, scalar > 0.0 ? rest / scalar : (rest > 0.0 ? HUGE_VAL : 0.0));
    }
    check.mu = median(products);
    const double denom = check.mu != 0.0 ? std::abs(check.mu) : 1.0;
    for (double p : products) check.residual = std::max(check.residual, std::abs(p - check.mu) / denom);
    check.ok = check.residual < tol && check.reality_residual < tol;
    return check;
}

namespace {

using detail::sample;

void check_options(const IntegrationOptions& options) {
    if (options.substeps < 1) throw InvalidArgument("integration: substeps must be >= 1");
}

// (x_hat - x)(m x')^{-1}(x_hat - x) using a b a = 2 (a.b) a - |a|^2 b for vectors.
Eigen::VectorXd riccati_rhs(const detail::CurveSample& c, const Eigen::VectorXd& x_hat, double mu, double s) {
    const Eigen::VectorXd d = x_hat - c.x;
    const double d2 = d.squaredNorm();
    const double scale = std::max({c.x.norm(), x_hat.norm(), 1.0});
    if (std::sqrt(d2) <= 1e-12 * scale || !std::isfinite(d2)) {
        throw SingularEncounter("integrate_riccati: transform collides with the curve", s);
    }
    return (mu / (c.m * c.dx.squaredNorm())) * (2.0 * d.dot(c.dx) * d - d2 * c.dx);
}

// A(s, t) y without materializing the matrix.
MinkVector connection_apply(const detail::LiftSample& c, double t, const MinkVector& y) {
    const double speed2 = inner(c.dxi, c.dxi);
    return (2.0 * t / (c.m * speed2)) * (inner(y, c.xi) * c.dxi - inner(y, c.dxi) * c.xi);
}

void restore_light_cone(MinkVector& y, const Frame& frame) {
    const double yq = inner(y, frame.q);
    if (std::abs(yq) > 1e-8 * y.norm()) {
        y -= (minkowski::norm2(y) / (2.0 * yq)) * frame.q;
        return;
    }
    const double yo = inner(y, frame.o);
    if (yo != 0.0) y -= (minkowski::norm2(y) / (2.0 * yo)) * frame.o;
}


}  // namespace

RiccatiTrajectory riccati_trajectory(const PolarizedCurve& x, double mu, const Eigen::VectorXd& x_hat0,
                                      const IntegrationOptions& options) {
    check_options(options);
    if (x_hat0.size() != x.dim()) throw DimensionMismatch("integrate_riccati: initial point dimension");
    const Grid& grid = x.grid();
    auto rhs = [&](detail::GridPosition p, const Eigen::VectorXd& y) {
        return riccati_rhs(sample(x, p), y, mu, detail::position_s(grid, p));
    };
    const auto states = detail::rk4_on_grid<Eigen::VectorXd>(grid.size(), grid.step(), options.substeps, x_hat0, rhs,
                                                             [](Eigen::VectorXd&) {});
    RiccatiTrajectory out{Eigen::MatrixXd(x.dim(), grid.size()), Eigen::MatrixXd(x.dim(), grid.size())};
    for (int k = 0; k < grid.size(); ++k) {
        out.points.col(k) = states[k];
        out.tangents.col(k) = riccati_rhs(sample(x, {k, 0.0}), states[k], mu, grid.node(k));
    }
    return out;
}

PolarizedCurve integrate_riccati(const PolarizedCurve& x, double mu, const Eigen::VectorXd& x_hat0,
                                 const IntegrationOptions& options) {
    RiccatiTrajectory tr = riccati_trajectory(x, mu, x_hat0, options);
    // mu = 0 gives the constant curve, which the PolarizedCurve constructor rejects.
    return PolarizedCurve(x.grid(), std::move(tr.points), std::move(tr.tangents), x.m());
}

minkowski::SkewOp connection_coeff(const MinkVector& xi, const MinkVector& dxi, double m, double t) {
    const double speed2 = inner(dxi, dxi);
    if (std::abs(speed2) <= 1e-14 * dxi.squaredNorm() || speed2 == 0.0) {
        throw InvalidArgument("connection_coeff: isotropic derivative, curve not immersed");
    }
    if (m == 0.0) throw InvalidArgument("connection_coeff: polarization vanishes");
    return (2.0 * t / (m * speed2)) * minkowski::SkewOp::wedge(xi, dxi);
}

LightConeSection integrate_parallel_section(const LiftedCurve& c, double t, const MinkVector& xi_hat0,
                                            const IntegrationOptions& options) {
    check_options(options);
    if (xi_hat0.size() != c.xi.rows()) throw DimensionMismatch("integrate_parallel_section: initial vector size");
    if (!minkowski::is_lightlike(xi_hat0)) throw InvalidArgument("integrate_parallel_section: initial vector not lightlike");
    const Frame frame = Frame::canonical(c.dim());
    MinkVector start = xi_hat0;
    if (options.restore_light_cone) restore_light_cone(start, frame);
    auto rhs = [&](detail::GridPosition p, const MinkVector& y) { return connection_apply(sample(c, p), t, y); };
    auto after = [&](MinkVector& y) {
        if (options.restore_light_cone) restore_light_cone(y, frame);
    };
    const auto states = detail::rk4_on_grid<MinkVector>(c.size(), c.grid.step(), options.substeps, start, rhs, after);

    LightConeSection out{c.grid, Eigen::MatrixXd(c.xi.rows(), c.size()), Eigen::MatrixXd(c.xi.rows(), c.size()),
                         Normalization::raw, {}};
    for (int k = 0; k < c.size(); ++k) {
        out.xi.col(k) = states[k];
        out.dxi.col(k) = connection_apply(sample(c, {k, 0.0}), t, states[k]);
        if (std::abs(inner(states[k], frame.q)) < 1e-8 * states[k].norm()) out.unprojectable.push_back(k);
    }
    return out;
}

LightConeSection integrate_parallel_section(const PolarizedCurve& c, double t, const MinkVector& xi_hat0,
                                            const IntegrationOptions& options) {
    return integrate_parallel_section(lift(c), t, xi_hat0, options);
}

MinkVector GaugeMap::operator()(const MinkVector& y) const {
    const double pairing = inner(xi, xi_hat);
    const MinkVector on_xi = (inner(y, xi_hat) / pairing) * xi;
    const MinkVector on_hat = (inner(y, xi) / pairing) * xi_hat;
    return y + (1.0 / r - 1.0) * on_xi + (r - 1.0) * on_hat;
}

minkowski::OrthoMap GaugeMap::matrix() const {
    const int n = minkowski::euclidean_dim(xi);
    const Eigen::MatrixXd g = minkowski::metric(n);
    const double pairing = inner(xi, xi_hat);
    // pi = xi (G xi_hat)^t / (xi, xi_hat), pi_hat = xi_hat (G xi)^t / (xi, xi_hat)
    const Eigen::MatrixXd pi = xi * (g * xi_hat).transpose() / pairing;
    const Eigen::MatrixXd pi_hat = xi_hat * (g * xi).transpose() / pairing;
    return minkowski::OrthoMap{Eigen::MatrixXd::Identity(n + 2, n + 2) + (1.0 / r - 1.0) * pi + (r - 1.0) * pi_hat};
}

GaugeMap gauge_map(const MinkVector& xi, const MinkVector& xi_hat, double r) {
    if (xi.size() != xi_hat.size()) throw DimensionMismatch("gauge_map: vector sizes differ");
    if (r == 0.0 || !std::isfinite(r)) throw InvalidArgument("gauge_map: r must be finite and non-zero");
    if (std::abs(inner(xi, xi_hat)) <= 1e-12 * xi.norm() * xi_hat.norm()) {
        throw NonComplementary("gauge_map: lines <xi>, <xi_hat> are not complementary");
    }
    return GaugeMap{xi, xi_hat, r};
}

double verify_gauge_relation(const LiftedCurve& c, const LiftedCurve& c_hat, double mu, double t) {
    if (!(c.grid == c_hat.grid)) throw DimensionMismatch("verify_gauge_relation: grids differ");
    if (t == mu) throw InvalidArgument("verify_gauge_relation: t = mu makes the gauge degenerate");
    if (mu == 0.0) throw InvalidArgument("verify_gauge_relation: mu must be non-zero");
    const int dim = static_cast<int>(c.xi.rows());
    const int count = c.size();
    const double r = 1.0 - t / mu;
    Eigen::MatrixXd stacked(dim * dim, count);
    std::vector<Eigen::MatrixXd> gammas(count);
    for (int k = 0; k < count; ++k) {
        gammas[k] = gauge_map(c.xi.col(k), c_hat.xi.col(k), r).matrix().matrix;
        stacked.col(k) = Eigen::Map<const Eigen::VectorXd>(gammas[k].data(), dim * dim);
    }
    const Eigen::MatrixXd dstacked = numerics::differentiate(stacked, c.grid.step());
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const Eigen::Map<const Eigen::MatrixXd> dgamma(dstacked.col(k).data(), dim, dim);
        const Eigen::MatrixXd inv = minkowski::OrthoMap{gammas[k]}.inverse().matrix;
        const Eigen::MatrixXd a = connection_coeff(c.xi.col(k), c.dxi.col(k), c.m[k], t).matrix;
        const Eigen::MatrixXd a_hat = connection_coeff(c_hat.xi.col(k), c_hat.dxi.col(k), c.m[k], t).matrix;
        const Eigen::MatrixXd predicted = dgamma * inv + gammas[k] * a * inv;
        worst = std::max(worst, (a_hat - predicted).cwiseAbs().maxCoeff());
    }
    return worst;
}

std::optional<TangentIntersection> tangent_intersection(const PolarizedCurve& x, const PolarizedCurve& x_hat, int k) {
    require_same_grid(x, x_hat);
    const Eigen::VectorXd t = x.tangent(k);
    const Eigen::VectorXd t_hat = x_hat.tangent(k);
    const double sin_angle = std::sqrt(std::max(0.0, 1.0 - std::pow(t.dot(t_hat) / (t.norm() * t_hat.norm()), 2)));
    if (sin_angle < 1e-8) return std::nullopt;
    Eigen::MatrixXd system(x.dim(), 2);
    system.col(0) = t;
    system.col(1) = -t_hat;
    const Eigen::VectorXd rhs = x_hat.point(k) - x.point(k);
    const Eigen::Vector2d ab = system.colPivHouseholderQr().solve(rhs);
    TangentIntersection out;
    out.miss_distance = (system * ab - rhs).norm();
    // y = x + a x' = x_hat + b x_hat', so r = 1/a and r_hat = 1/b.
    out.ratio = ab[0] / ab[1];
    using clifford::Multivector;
    const Multivector inv = clifford::vector_inverse(Multivector::vector(Eigen::VectorXd(-rhs)));
    const Multivector cr = Multivector::vector(t) * inv * Multivector::vector(t_hat) * inv;
    out.predicted = -rhs.squaredNorm() * cr.scalar_part() / t.squaredNorm();
    return out;
}

}  // namespace isothermic::darboux
