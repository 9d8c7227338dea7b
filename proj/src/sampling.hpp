#pragma once

#include <Eigen/Dense>

#include "isothermic/curves.hpp"
#include "isothermic/darboux.hpp"
#include "isothermic/numerics.hpp"
#include "rk4.hpp"

namespace isothermic::detail {

struct CurveSample {
    Eigen::VectorXd x;
    Eigen::VectorXd dx;
    double m;
};

inline CurveSample sample(const curves::PolarizedCurve& c, GridPosition p) {
    if (p.theta == 0.0) return {c.point(p.k), c.tangent(p.k), c.m()[p.k]};
    return {numerics::interpolate(c.x(), p.k, p.theta), numerics::interpolate(c.xprime(), p.k, p.theta),
            numerics::interpolate(c.m(), p.k, p.theta)};
}

struct LiftSample {
    Eigen::VectorXd xi;
    Eigen::VectorXd dxi;
    double m;
};

inline LiftSample sample(const darboux::LiftedCurve& c, GridPosition p) {
    if (p.theta == 0.0) return {c.xi.col(p.k), c.dxi.col(p.k), c.m[p.k]};
    return {numerics::interpolate(c.xi, p.k, p.theta), numerics::interpolate(c.dxi, p.k, p.theta),
            numerics::interpolate(c.m, p.k, p.theta)};
}

inline double position_s(const curves::Grid& grid, GridPosition p) { return grid.node(p.k) + p.theta * grid.step(); }

}  // namespace isothermic::detail
