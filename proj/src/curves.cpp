#include "isothermic/curves.hpp"

#include <cmath>
#include <string>

#include "isothermic/errors.hpp"
#include "isothermic/numerics.hpp"

namespace isothermic::curves {

Grid::Grid(double s0, double s1, int count) : s0_(s0), s1_(s1), count_(count) {
    if (count < 5) throw InvalidArgument("Grid: at least 5 samples required, got " + std::to_string(count));
    if (!(s1 > s0) || !std::isfinite(s0) || !std::isfinite(s1)) {
        throw InvalidArgument("Grid: need finite s0 < s1");
    }
}

PolarizedCurve::PolarizedCurve(Grid grid, Eigen::MatrixXd x, Eigen::MatrixXd xprime, Eigen::VectorXd m,
                               bool analytic_derivative)
    : grid_(grid), x_(std::move(x)), xprime_(std::move(xprime)), m_(std::move(m)), analytic_(analytic_derivative) {
    const int n = static_cast<int>(x_.rows());
    if (n < 2 || n > 4) throw InvalidArgument("PolarizedCurve: ambient dimension must be in [2, 4]");
    if (x_.cols() != grid_.size() || xprime_.cols() != grid_.size() || m_.size() != grid_.size() ||
        xprime_.rows() != n) {
        throw DimensionMismatch("PolarizedCurve: sample arrays do not match the grid");
    }
    if (!x_.allFinite() || !xprime_.allFinite() || !m_.allFinite()) {
        throw InvalidArgument("PolarizedCurve: non-finite sample");
    }
    const double scale = std::max(1.0, x_.cwiseAbs().maxCoeff());
    for (int k = 0; k < grid_.size(); ++k) {
        if (xprime_.col(k).norm() <= 1e-12 * scale) {
            throw InvalidArgument("PolarizedCurve: not immersed at s = " + std::to_string(grid_.node(k)));
        }
        if (m_[k] == 0.0) {
            throw InvalidArgument("PolarizedCurve: polarization vanishes at s = " + std::to_string(grid_.node(k)));
        }
    }
}

PolarizedCurve PolarizedCurve::from_samples(Grid grid, Eigen::MatrixXd x, Eigen::VectorXd m) {
    Eigen::MatrixXd dx = numerics::differentiate(x, grid.step());
    return PolarizedCurve(grid, std::move(x), std::move(dx), std::move(m), false);
}

PolarizedCurve PolarizedCurve::with_polarization(Eigen::VectorXd m) const {
    return PolarizedCurve(grid_, x_, xprime_, std::move(m), analytic_);
}

namespace {

struct Builder {
    const Grid& grid;

    PolarizedCurve operator()(const family::Circle& c) const {
        if (!(c.radius > 0.0)) throw InvalidArgument("circle: radius must be positive");
        if (c.dim < 2 || c.dim > 4) throw InvalidArgument("circle: dimension must be in [2, 4]");
        const Eigen::VectorXd center = c.center.size() == 0 ? Eigen::VectorXd::Zero(c.dim) : c.center;
        if (center.size() != c.dim) throw DimensionMismatch("circle: center dimension");
        Eigen::MatrixXd x(c.dim, grid.size());
        Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(c.dim, grid.size());
        for (int k = 0; k < grid.size(); ++k) {
            const double s = grid.node(k);
            x.col(k) = center;
            x(0, k) += c.radius * std::cos(s);
            x(1, k) += c.radius * std::sin(s);
            dx(0, k) = -c.radius * std::sin(s);
            dx(1, k) = c.radius * std::cos(s);
        }
        return PolarizedCurve(grid, std::move(x), std::move(dx), Eigen::VectorXd::Ones(grid.size()), true);
    }

    PolarizedCurve operator()(const family::Helix& c) const {
        if (!(c.radius > 0.0) && c.pitch == 0.0) throw InvalidArgument("helix: degenerate parameters");
        Eigen::MatrixXd x(3, grid.size());
        Eigen::MatrixXd dx(3, grid.size());
        for (int k = 0; k < grid.size(); ++k) {
            const double s = grid.node(k);
            x.col(k) << c.radius * std::cos(s), c.radius * std::sin(s), c.pitch * s;
            dx.col(k) << -c.radius * std::sin(s), c.radius * std::cos(s), c.pitch;
        }
        return PolarizedCurve(grid, std::move(x), std::move(dx), Eigen::VectorXd::Ones(grid.size()), true);
    }

    PolarizedCurve operator()(const family::Line& c) const {
        if (c.dim < 2 || c.dim > 4) throw InvalidArgument("line: dimension must be in [2, 4]");
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(c.dim, grid.size());
        Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(c.dim, grid.size());
        for (int k = 0; k < grid.size(); ++k) {
            x(0, k) = grid.node(k);
            dx(0, k) = 1.0;
        }
        return PolarizedCurve(grid, std::move(x), std::move(dx), Eigen::VectorXd::Ones(grid.size()), true);
    }

    PolarizedCurve operator()(const family::Samples& c) const {
        if (c.x.cols() != grid.size()) throw DimensionMismatch("samples: column count differs from grid");
        return PolarizedCurve::from_samples(grid, c.x, Eigen::VectorXd::Ones(grid.size()));
    }
};

}  // namespace

PolarizedCurve make_curve(const Family& family, const Grid& grid) { return std::visit(Builder{grid}, family); }

PolarizedCurve arc_length_polarization(const PolarizedCurve& c) {
    Eigen::VectorXd m(c.size());
    for (int k = 0; k < c.size(); ++k) m[k] = 1.0 / c.xprime().col(k).squaredNorm();
    return c.with_polarization(std::move(m));
}

std::pair<PolarizedCurve, PolarizedCurve> tractrix_pair(const PolarizedCurve& y, double mu) {
    if (!(mu > 0.0)) throw InvalidArgument("tractrix_pair: mu must be positive");
    for (int k = 0; k < y.size(); ++k) {
        if (std::abs(y.xprime().col(k).norm() - 1.0) > 1e-8) {
            throw InvalidArgument("tractrix_pair: seed curve is not parametrized by arc length");
        }
    }
    const double offset = 1.0 / (2.0 * std::sqrt(mu));
    const Eigen::MatrixXd ddy = numerics::differentiate(y.xprime(), y.grid().step());
    PolarizedCurve plus(y.grid(), y.x() + offset * y.xprime(), y.xprime() + offset * ddy, y.m());
    PolarizedCurve minus(y.grid(), y.x() - offset * y.xprime(), y.xprime() - offset * ddy, y.m());
    // |x_+'| = |x_-'| since y'' is normal to y'; both share this polarization.
    PolarizedCurve plus_pol = arc_length_polarization(plus);
    return {plus_pol, minus.with_polarization(plus_pol.m())};
}

}  // namespace isothermic::curves
