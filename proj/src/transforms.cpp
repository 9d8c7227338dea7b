#include "isothermic/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isothermic/errors.hpp"
#include "sampling.hpp"

namespace isothermic::transforms {

using clifford::Multivector;

namespace {

Eigen::VectorXd dual_tangent(const Eigen::VectorXd& dx, double m) { return dx / (m * dx.squaredNorm()); }

}  // namespace

PolarizedCurve christoffel_dual(const PolarizedCurve& c, const Eigen::VectorXd& start) {
    for (int k = 0; k + 1 < c.size(); ++k) {
        if (c.m()[k] * c.m()[k + 1] < 0.0) {
            throw InvalidArgument("christoffel_dual: polarization changes sign near s = " +
                                  std::to_string(c.grid().node(k)));
        }
    }
    const Eigen::VectorXd x0 = start.size() == 0 ? Eigen::VectorXd::Zero(c.dim()) : start;
    if (x0.size() != c.dim()) throw DimensionMismatch("christoffel_dual: start point dimension");
    auto rhs = [&](detail::GridPosition p, const Eigen::VectorXd&) {
        const auto s = detail::sample(c, p);
        return Eigen::VectorXd(dual_tangent(s.dx, s.m));
    };
    const auto states =
        detail::rk4_on_grid<Eigen::VectorXd>(c.size(), c.grid().step(), 1, x0, rhs, [](Eigen::VectorXd&) {});
    Eigen::MatrixXd x(c.dim(), c.size());
    Eigen::MatrixXd dx(c.dim(), c.size());
    for (int k = 0; k < c.size(); ++k) {
        x.col(k) = states[k];
        dx.col(k) = dual_tangent(c.tangent(k), c.m()[k]);
    }
    return PolarizedCurve(c.grid(), std::move(x), std::move(dx), c.m());
}

double dual_of_dual_residual(const PolarizedCurve& c, const PolarizedCurve& dual) {
    if (!(c.grid() == dual.grid())) throw DimensionMismatch("dual_of_dual_residual: grids differ");
    double worst = 0.0;
    for (int k = 0; k < c.size(); ++k) {
        const Eigen::VectorXd back = dual_tangent(dual.tangent(k), c.m()[k]);
        worst = std::max(worst, (back - c.tangent(k)).norm() / c.tangent(k).norm());
    }
    return worst;
}

PolarizedCurve christoffel_darboux_permute(const PolarizedCurve& x, const PolarizedCurve& x_dual,
                                           const PolarizedCurve& x_hat, double mu) {
    if (mu == 0.0) throw InvalidArgument("christoffel_darboux_permute: mu must be non-zero");
    if (!(x.grid() == x_dual.grid()) || !(x.grid() == x_hat.grid())) {
        throw DimensionMismatch("christoffel_darboux_permute: grids differ");
    }
    Eigen::MatrixXd pts(x.dim(), x.size());
    Eigen::MatrixXd tangents(x.dim(), x.size());
    for (int k = 0; k < x.size(); ++k) {
        const Eigen::VectorXd v = x_hat.point(k) - x.point(k);
        const Eigen::VectorXd dv = x_hat.tangent(k) - x.tangent(k);
        const double v2 = v.squaredNorm();
        const double scale = std::max({x.point(k).norm(), x_hat.point(k).norm(), 1.0});
        if (std::sqrt(v2) <= 1e-12 * scale) {
            throw DegenerateSecant("christoffel_darboux_permute: curves meet at s = " + std::to_string(x.grid().node(k)));
        }
        pts.col(k) = x_dual.point(k) + v / (mu * v2);
        tangents.col(k) = x_dual.tangent(k) + (dv / v2 - 2.0 * v.dot(dv) / (v2 * v2) * v) / mu;
    }
    return PolarizedCurve(x.grid(), std::move(pts), std::move(tangents), x.m());
}

ChristoffelDarbouxCheck verify_christoffel_darboux(const PolarizedCurve& x, const PolarizedCurve& x_dual,
                                                   const PolarizedCurve& x_hat, const PolarizedCurve& x_hat_dual,
                                                   double mu) {
    ChristoffelDarbouxCheck check;
    check.darboux = darboux::is_darboux_pair(x_dual, x_hat_dual, x.m());
    for (int k = 0; k < x.size(); ++k) {
        const Multivector dual_tangent_mv = Multivector::vector(x_hat_dual.tangent(k));
        const Multivector product = dual_tangent_mv * (x.m()[k] * Multivector::vector(x_hat.tangent(k)));
        check.dual = std::max(check.dual, (product - Multivector::scalar(x.dim(), 1.0)).norm());
        const Multivector d = Multivector::vector(Eigen::VectorXd(x_hat_dual.point(k) - x_dual.point(k)));
        const Multivector rhs = mu * (d * Multivector::vector(x.tangent(k)) * d);
        check.identity = std::max(check.identity, (dual_tangent_mv - rhs).norm() / dual_tangent_mv.norm());
    }
    return check;
}

double CalapsoFrameField::metric_drift() const {
    double worst = 0.0;
    for (const auto& m : T) worst = std::max(worst, OrthoMap{m}.metric_drift());
    return worst;
}

CalapsoFrameField integrate_calapso(const LiftedCurve& c, double t, const Eigen::MatrixXd& T0,
                                    const MetricCorrection& correction, const darboux::IntegrationOptions& options) {
    if (options.substeps < 1) throw InvalidArgument("integrate_calapso: substeps must be >= 1");
    if (correction.every < 0) throw InvalidArgument("integrate_calapso: correction interval must be >= 0");
    const int size = static_cast<int>(c.xi.rows());
    const Eigen::MatrixXd start = T0.size() == 0 ? Eigen::MatrixXd::Identity(size, size) : T0;
    if (start.rows() != size || start.cols() != size) throw DimensionMismatch("integrate_calapso: T0 size");
    const Eigen::MatrixXd g = minkowski::metric(c.dim());
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(size, size);
    auto rhs = [&](detail::GridPosition p, const Eigen::MatrixXd& T) {
        const auto s = detail::sample(c, p);
        return Eigen::MatrixXd(-T * darboux::connection_coeff(s.xi, s.dxi, s.m, t).matrix);
    };
    int steps = 0;
    auto after = [&](Eigen::MatrixXd& T) {
        ++steps;
        if (correction.every > 0 && steps % correction.every == 0) {
            T = T * (3.0 * identity - g * T.transpose() * g * T) / 2.0;
        }
    };
    CalapsoFrameField field{c.grid, t, {}};
    field.T = detail::rk4_on_grid<Eigen::MatrixXd>(c.size(), c.grid.step(), options.substeps, start, rhs, after);
    return field;
}

LightConeSection apply(const CalapsoFrameField& field, const LiftedCurve& c, const LightConeSection& section) {
    if (!(field.grid == c.grid) || !(field.grid == section.grid)) throw DimensionMismatch("calapso apply: grids differ");
    const Eigen::MatrixXd d = section.derivative();
    LightConeSection out{c.grid, Eigen::MatrixXd(section.xi.rows(), c.size()),
                         Eigen::MatrixXd(section.xi.rows(), c.size())};
    for (int k = 0; k < c.size(); ++k) {
        const auto a = darboux::connection_coeff(c.xi.col(k), c.dxi.col(k), c.m[k], field.t);
        out.xi.col(k) = field.T[k] * section.xi.col(k);
        out.dxi.col(k) = field.T[k] * (d.col(k) - a(section.xi.col(k)));
    }
    return out;
}

LiftedCurve transformed_curve(const CalapsoFrameField& field, const LiftedCurve& c) {
    const LightConeSection own{c.grid, c.xi, c.dxi};
    LightConeSection moved = apply(field, c, own);
    return LiftedCurve{c.grid, std::move(moved.xi), std::move(moved.dxi), c.m};
}

double constancy_residual(const CalapsoFrameField& field, const LightConeSection& section) {
    const MinkVector v0 = field.T[0] * section.xi.col(0);
    double worst = 0.0;
    for (int k = 1; k < field.size(); ++k) {
        worst = std::max(worst, (field.T[k] * section.xi.col(k) - v0).norm() / v0.norm());
    }
    return worst;
}

namespace {

double constancy(const std::vector<Eigen::MatrixXd>& maps) {
    const double scale = maps.front().norm();
    double worst = 0.0;
    for (const auto& m : maps) worst = std::max(worst, (m - maps.front()).norm() / scale);
    return worst;
}

}  // namespace

double verify_calapso_composition(const LiftedCurve& c, double tau, double t, const MetricCorrection& correction,
                                  const darboux::IntegrationOptions& options) {
    const CalapsoFrameField t_tau = integrate_calapso(c, tau, {}, correction, options);
    const LiftedCurve moved = transformed_curve(t_tau, c);
    const CalapsoFrameField t_tilde = integrate_calapso(moved, t, {}, correction, options);
    const CalapsoFrameField t_sum = integrate_calapso(c, tau + t, {}, correction, options);
    std::vector<Eigen::MatrixXd> maps(static_cast<std::size_t>(c.size()));
    for (int k = 0; k < c.size(); ++k) {
        maps[k] = t_tilde.T[k] * t_tau.T[k] * t_sum.at(k).inverse().matrix;
    }
    return constancy(maps);
}

double verify_calapso_gauge(const LiftedCurve& c, const LiftedCurve& c_hat, double mu, double t,
                            const MetricCorrection& correction, const darboux::IntegrationOptions& options) {
    if (!(c.grid == c_hat.grid)) throw DimensionMismatch("verify_calapso_gauge: grids differ");
    if (mu == 0.0 || t == mu) throw InvalidArgument("verify_calapso_gauge: need mu != 0 and t != mu");
    const CalapsoFrameField field = integrate_calapso(c, t, {}, correction, options);
    const CalapsoFrameField field_hat = integrate_calapso(c_hat, t, {}, correction, options);
    std::vector<Eigen::MatrixXd> maps(static_cast<std::size_t>(c.size()));
    for (int k = 0; k < c.size(); ++k) {
        const auto gamma = darboux::gauge_map(c.xi.col(k), c_hat.xi.col(k), 1.0 - t / mu).matrix();
        maps[k] = field_hat.T[k] * gamma.matrix * field.at(k).inverse().matrix;
    }
    return constancy(maps);
}

CalapsoPair calapso_darboux_permute(const LiftedCurve& c, const LightConeSection& c_hat, double mu, double tau,
                                    const MetricCorrection& correction, const darboux::IntegrationOptions& options) {
    if (tau == mu) throw InvalidArgument("calapso_darboux_permute: tau = mu collapses the transform to a point");
    const CalapsoFrameField field = integrate_calapso(c, tau, {}, correction, options);
    return CalapsoPair{transformed_curve(field, c), apply(field, c, c_hat)};
}

std::pair<PolarizedCurve, PolarizedCurve> project_pair(const LightConeSection& a, const LightConeSection& b,
                                                       const Eigen::VectorXd& m) {
    std::vector<MinkVector> points;
    points.reserve(static_cast<std::size_t>(a.size() + b.size()));
    for (int k = 0; k < a.size(); ++k) points.push_back(a.at(k));
    for (int k = 0; k < b.size(); ++k) points.push_back(b.at(k));
    const auto chart = minkowski::Chart::avoiding(points);
    return {darboux::project(a, m, chart), darboux::project(b, m, chart)};
}

}  // namespace isothermic::transforms
