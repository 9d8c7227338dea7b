#pragma once

#include <utility>
#include <variant>

#include <Eigen/Dense>

namespace isothermic::curves {

// Uniform sampling s_k = s0 + k h of the parameter interval [s0, s1].
class Grid {
public:
    Grid(double s0, double s1, int count);

    double s0() const { return s0_; }
    double s1() const { return s1_; }
    int size() const { return count_; }
    double step() const { return (s1_ - s0_) / (count_ - 1); }
    double node(int k) const { return s0_ + k * step(); }

    // Same bounds and sample count (exact comparison; grids are data, not approximations).
    bool operator==(const Grid& other) const = default;

private:
    double s0_;
    double s1_;
    int count_;
};

// Sampled immersed curve x: I -> R^n with polarization ds^2 / m.
//
// The polarization is stored as the denominator m and may take either sign;
// only m != 0 is required.
class PolarizedCurve {
public:
    // x and xprime are n x N (one column per node), m has N entries.
    PolarizedCurve(Grid grid, Eigen::MatrixXd x, Eigen::MatrixXd xprime, Eigen::VectorXd m,
                   bool analytic_derivative = false);

    // Derivatives from 4th-order finite differences.
    static PolarizedCurve from_samples(Grid grid, Eigen::MatrixXd x, Eigen::VectorXd m);

    int dim() const { return static_cast<int>(x_.rows()); }
    const Grid& grid() const { return grid_; }
    int size() const { return grid_.size(); }

    const Eigen::MatrixXd& x() const { return x_; }
    const Eigen::MatrixXd& xprime() const { return xprime_; }
    const Eigen::VectorXd& m() const { return m_; }
    Eigen::VectorXd point(int k) const { return x_.col(k); }
    Eigen::VectorXd tangent(int k) const { return xprime_.col(k); }
    bool analytic_derivative() const { return analytic_; }

    PolarizedCurve with_polarization(Eigen::VectorXd m) const;

private:
    Grid grid_;
    Eigen::MatrixXd x_;
    Eigen::MatrixXd xprime_;
    Eigen::VectorXd m_;
    bool analytic_;
};

namespace family {
// Circle of the given radius about `center` (origin if empty), parametrized by angle,
// in the e1 e2 plane of R^dim.
struct Circle {
    double radius = 1.0;
    int dim = 2;
    Eigen::VectorXd center{};
};
// (r cos s, r sin s, p s) in R^3.
struct Helix {
    double radius = 1.0;
    double pitch = 0.0;
};
// x(s) = s e1 in R^dim.
struct Line {
    int dim = 2;
};
// Arbitrary samples; derivatives by finite differences.
struct Samples {
    Eigen::MatrixXd x;
};
}  // namespace family

using Family = std::variant<family::Circle, family::Helix, family::Line, family::Samples>;

// Default polarization m = 1.
PolarizedCurve make_curve(const Family& family, const Grid& grid);

// m := 1 / (x', x')
PolarizedCurve arc_length_polarization(const PolarizedCurve& c);

// x_pm = y +- y' / (2 sqrt(mu)) for unit-speed y and mu > 0, both with their common
// arc-length polarization.
std::pair<PolarizedCurve, PolarizedCurve> tractrix_pair(const PolarizedCurve& y, double mu);

}  // namespace isothermic::curves
