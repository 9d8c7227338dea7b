#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "isothermic/clifford.hpp"
#include "isothermic/curves.hpp"
#include "isothermic/minkowski.hpp"

namespace isothermic::darboux {

using curves::Grid;
using curves::PolarizedCurve;
using minkowski::MinkVector;

enum class Normalization { euclidean, moutard, raw };

// Samples of a light cone map xi: I -> L^{n+1}, one column per grid node.
struct LightConeSection {
    Grid grid;
    Eigen::MatrixXd xi;
    // Derivative samples when the producer knows them (e.g. from the ODE right-hand
    // side); otherwise empty.
    Eigen::MatrixXd dxi{};
    Normalization normalization = Normalization::raw;
    // Nodes where |(xi, q)| < 1e-8 |xi|: the point is (numerically) at infinity and
    // has no affine image. Downstream consumers skip these.
    std::vector<int> unprojectable{};

    int dim() const { return static_cast<int>(xi.rows()) - 2; }
    int size() const { return grid.size(); }
    MinkVector at(int k) const { return xi.col(k); }
    bool has_derivative() const { return dxi.cols() == xi.cols(); }
    // Derivative samples, falling back to finite differences.
    Eigen::MatrixXd derivative() const;
    // max_k |(xi, xi)| / |xi|^2
    double lightlike_defect() const;
};

// A lift together with the polarization: everything the isothermic family of
// connections of a curve depends on.
struct LiftedCurve {
    Grid grid;
    Eigen::MatrixXd xi;
    Eigen::MatrixXd dxi;
    Eigen::VectorXd m;

    int dim() const { return static_cast<int>(xi.rows()) - 2; }
    int size() const { return grid.size(); }
};

LiftedCurve lift(const PolarizedCurve& c);
LiftedCurve lift(const LightConeSection& section, const Eigen::VectorXd& m);
LightConeSection euclidean_section(const PolarizedCurve& c);

// Affine image of a section in the given chart, carrying polarization m. Derivatives
// come from the section derivative when known, else from finite differences of the
// projected points. Throws PointAtInfinity if any node is unprojectable.
PolarizedCurve project(const LightConeSection& section, const Eigen::VectorXd& m,
                       const minkowski::Chart& chart);
PolarizedCurve project(const LightConeSection& section, const Eigen::VectorXd& m);

// cr = x' (x - x_hat)^{-1} x_hat' (x - x_hat)^{-1} at each node.
std::vector<clifford::Multivector> tangent_cross_ratio(const PolarizedCurve& x, const PolarizedCurve& x_hat);

struct RibaucourCheck {
    bool ok = false;
    // max_k |non-scalar part| / |scalar part|
    double residual = 0.0;
};
RibaucourCheck is_ribaucour(const PolarizedCurve& x, const PolarizedCurve& x_hat, double tol = 1e-8);

struct DarbouxCheck {
    bool ok = false;
    // median_k of cr m
    double mu = 0.0;
    // max_k |cr m - mu| / |mu| (absolute when mu == 0)
    double residual = 0.0;
    double reality_residual = 0.0;
};
DarbouxCheck is_darboux_pair(const PolarizedCurve& x, const PolarizedCurve& x_hat, const Eigen::VectorXd& m,
                             double tol = 1e-6);
inline DarbouxCheck is_darboux_pair(const PolarizedCurve& x, const PolarizedCurve& x_hat, double tol = 1e-6) {
    return is_darboux_pair(x, x_hat, x.m(), tol);
}

// Fixed-step classical RK4 on the grid. With substeps > 1 every grid interval is
// split evenly; curve data at off-grid points comes from cubic interpolation.
struct IntegrationOptions {
    int substeps = 1;
    bool restore_light_cone = true;
};

// x_hat' = mu (x_hat - x) (m x')^{-1} (x_hat - x). The raw trajectory is also
// available for mu = 0, where the solution is the constant curve x_hat0.
struct RiccatiTrajectory {
    Eigen::MatrixXd points;
    Eigen::MatrixXd tangents;
};
RiccatiTrajectory riccati_trajectory(const PolarizedCurve& x, double mu, const Eigen::VectorXd& x_hat0,
                                     const IntegrationOptions& options = {});
PolarizedCurve integrate_riccati(const PolarizedCurve& x, double mu, const Eigen::VectorXd& x_hat0,
                                 const IntegrationOptions& options = {});

// A(s, t) = (2t / m) xi ^ xi' / (xi', xi'); the connection is d/ds - A.
minkowski::SkewOp connection_coeff(const MinkVector& xi, const MinkVector& dxi, double m, double t);

// Solves xi_hat' = A(s, t) xi_hat from xi_hat0. After every step the section is pulled
// back onto the light cone along q (or o when (xi_hat, q) ~ 0); no rescaling.
LightConeSection integrate_parallel_section(const LiftedCurve& c, double t, const MinkVector& xi_hat0,
                                            const IntegrationOptions& options = {});
LightConeSection integrate_parallel_section(const PolarizedCurve& c, double t, const MinkVector& xi_hat0,
                                            const IntegrationOptions& options = {});

// Gamma(r): r on <xi_hat>, 1/r on <xi>, identity on <xi, xi_hat>^perp.
struct GaugeMap {
    MinkVector xi;
    MinkVector xi_hat;
    double r;

    MinkVector operator()(const MinkVector& y) const;
    minkowski::OrthoMap matrix() const;
    GaugeMap inverse() const { return GaugeMap{xi, xi_hat, 1.0 / r}; }
};
// Throws NonComplementary if (xi, xi_hat) ~ 0 and InvalidArgument if r == 0.
GaugeMap gauge_map(const MinkVector& xi, const MinkVector& xi_hat, double r);

// max_k |A_hat - (Gamma' Gamma^{-1} + Gamma A Gamma^{-1})| with
// Gamma = gauge_map(xi, xi_hat, 1 - t/mu) and Gamma' from finite differences.
double verify_gauge_relation(const LiftedCurve& c, const LiftedCurve& c_hat, double mu, double t);

// Where the tangents of a Ribaucour pair meet, x + x'/r = x_hat + x_hat'/r_hat; compares
// r_hat/r against -(x_hat - x)^2 cr / x'^2. Empty when the tangents are parallel.
struct TangentIntersection {
    double ratio = 0.0;
    double predicted = 0.0;
    double miss_distance = 0.0;
};
std::optional<TangentIntersection> tangent_intersection(const PolarizedCurve& x, const PolarizedCurve& x_hat, int k);

}  // namespace isothermic::darboux
