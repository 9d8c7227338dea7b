#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isothermic/darboux.hpp"

namespace isothermic::transforms {

using curves::Grid;
using curves::PolarizedCurve;
using darboux::LiftedCurve;
using darboux::LightConeSection;
using minkowski::MinkVector;
using minkowski::OrthoMap;

// (x*)' = x' / (m |x'|^2) integrated by RK4 from x*(s0) = start (origin if empty).
// The dual carries the polarization of c. Throws InvalidArgument if m changes sign.
PolarizedCurve christoffel_dual(const PolarizedCurve& c, const Eigen::VectorXd& start = {});

// max_k |((m (x*)')^{-1}) - x'| / |x'|, the involution identity of the smooth direction.
double dual_of_dual_residual(const PolarizedCurve& c, const PolarizedCurve& dual);

// x_hat* = x* + (x_hat - x)^{-1} / mu, with its exact derivative.
PolarizedCurve christoffel_darboux_permute(const PolarizedCurve& x, const PolarizedCurve& x_dual,
                                           const PolarizedCurve& x_hat, double mu);

struct ChristoffelDarbouxCheck {
    // (x*, x_hat*) as a Darboux pair.
    darboux::DarbouxCheck darboux;
    // max_k |(x_hat*)' (m x_hat') - 1| in the Clifford algebra.
    double dual = 0.0;
    // max_k |(x_hat*)' - mu (x_hat* - x*) x' (x_hat* - x*)| / |(x_hat*)'|.
    double identity = 0.0;
};
ChristoffelDarbouxCheck verify_christoffel_darboux(const PolarizedCurve& x, const PolarizedCurve& x_dual,
                                                   const PolarizedCurve& x_hat, const PolarizedCurve& x_hat_dual,
                                                   double mu);

// Re-orthogonalization T <- T (3 I - G T^t G T) / 2 every `every` steps; 0 disables it.
struct MetricCorrection {
    int every = 50;
};

struct CalapsoFrameField {
    Grid grid;
    double t = 0.0;
    std::vector<Eigen::MatrixXd> T;

    OrthoMap at(int k) const { return OrthoMap{T[static_cast<std::size_t>(k)]}; }
    int size() const { return grid.size(); }
    // max_k metric_drift(T_k)
    double metric_drift() const;
};

// Solves T' = -T A(s, t) from T(s0) = T0 (identity if empty).
CalapsoFrameField integrate_calapso(const LiftedCurve& c, double t, const Eigen::MatrixXd& T0 = {},
                                    const MetricCorrection& correction = {},
                                    const darboux::IntegrationOptions& options = {});

// T xi with derivative T (xi' - A(t) xi).
LightConeSection apply(const CalapsoFrameField& field, const LiftedCurve& c, const LightConeSection& section);
// The Calapso transform <T^t xi> of the curve itself, as a lifted curve with the same m.
LiftedCurve transformed_curve(const CalapsoFrameField& field, const LiftedCurve& c);

// max_k |v_k - v_0| / |v_0| for v_k = T_k xi_hat_k. Zero for a t-parallel section xi_hat.
double constancy_residual(const CalapsoFrameField& field, const LightConeSection& section);

// max_k |M_k - M_0| / |M_0| for M = T~^t T^tau (T^{tau+t})^{-1}, where T~ is the
// Calapso transformation of <T^tau xi>.
double verify_calapso_composition(const LiftedCurve& c, double tau, double t, const MetricCorrection& correction = {},
                                  const darboux::IntegrationOptions& options = {});

// max_k |M_k - M_0| / |M_0| for M = T_hat^t Gamma(1 - t/mu) (T^t)^{-1}.
double verify_calapso_gauge(const LiftedCurve& c, const LiftedCurve& c_hat, double mu, double t,
                            const MetricCorrection& correction = {}, const darboux::IntegrationOptions& options = {});

// The Calapso transforms <T^tau xi>, <T^tau xi_hat> of a mu-Darboux pair, both moved by
// the Calapso transformation of xi. Throws InvalidArgument if tau == mu.
struct CalapsoPair {
    LiftedCurve curve;
    LightConeSection partner;
};
CalapsoPair calapso_darboux_permute(const LiftedCurve& c, const LightConeSection& c_hat, double mu, double tau,
                                    const MetricCorrection& correction = {},
                                    const darboux::IntegrationOptions& options = {});

// Projects a pair of sections through one chart that avoids both, so that their
// tangent cross ratio can be compared.
std::pair<PolarizedCurve, PolarizedCurve> project_pair(const LightConeSection& a, const LightConeSection& b,
                                                       const Eigen::VectorXd& m);

}  // namespace isothermic::transforms
