#pragma once

#include <Eigen/Dense>

// Fourth-order stencils on uniform grids. Samples are stored column-wise: one
// column per grid node.
namespace isothermic::numerics {

// Column-wise derivative: central 5-point stencil in the interior and 5-point
// one-sided stencils at the two nodes closest to each end. Needs >= 5 columns.
Eigen::MatrixXd differentiate(const Eigen::MatrixXd& samples, double h);
Eigen::VectorXd differentiate(const Eigen::VectorXd& samples, double h);

// Cubic Lagrange interpolation at s_k + theta h, theta in [0, 1], on the four
// nodes surrounding the interval (shifted inwards at the ends).
Eigen::VectorXd interpolate(const Eigen::MatrixXd& samples, int k, double theta);
double interpolate(const Eigen::VectorXd& samples, int k, double theta);

}  // namespace isothermic::numerics
