#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "isothermic/darboux.hpp"
#include "isothermic/transforms.hpp"

namespace isothermic::surface {

using curves::Grid;
using curves::PolarizedCurve;
using darboux::LiftedCurve;
using darboux::LightConeSection;
using minkowski::MinkVector;

// Curves x_0, ..., x_M on one grid with one polarization m, adjacent curves joined by
// edges (i, i+1) with parameters mu[i].
class SemiDiscreteSurface {
public:
    SemiDiscreteSurface(std::vector<PolarizedCurve> curves, std::vector<double> mu);

    const std::vector<PolarizedCurve>& curves() const { return curves_; }
    const PolarizedCurve& curve(int i) const { return curves_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& mu() const { return mu_; }
    const Grid& grid() const { return curves_.front().grid(); }
    const Eigen::VectorXd& m() const { return curves_.front().m(); }
    int dim() const { return curves_.front().dim(); }
    int curve_count() const { return static_cast<int>(curves_.size()); }
    int edge_count() const { return static_cast<int>(mu_.size()); }

    // Euclidean lifts of the curves.
    const std::vector<LiftedCurve>& lifts() const { return lifts_; }

private:
    std::vector<PolarizedCurve> curves_;
    std::vector<double> mu_;
    std::vector<LiftedCurve> lifts_;
};

struct Layer {
    double mu;
    Eigen::VectorXd start;
};

// Each layer is the mu-Darboux transform of the previous curve through `start`, obtained
// from a parallel section. Singular encounters are rethrown with the layer index.
SemiDiscreteSurface build_surface(const PolarizedCurve& seed, const std::vector<Layer>& layers,
                                  const darboux::IntegrationOptions& options = {});

struct EdgeReport {
    int edge = 0;
    double mu = 0.0;
    double mu_fit = 0.0;
    double reality = 0.0;
    // max_k |cr m - mu_fit| / |mu_fit|
    double constancy = 0.0;
    // |mu_fit - mu| / |mu|
    double mu_error = 0.0;
    // max_k | |mu| (x_j - x_i)^2 / (nu_i nu_j) - 1 |, only when m > 0.
    std::optional<double> nu_factorization;
};

struct IsothermicReport {
    std::vector<EdgeReport> edges;
    bool ok = true;

    std::vector<double> recovered_mu() const;
};
IsothermicReport check_isothermic(const SemiDiscreteSurface& s, double tol = 1e-6);

struct MoutardLift {
    std::vector<LightConeSection> xi;
    // Global sign pattern: xi_i = sign[i] X_i / nu_i.
    std::vector<int> sign;
    // max_k |m (xi', xi') - 1|
    double normalization = 0.0;
    // Per edge: max_k |xi'_ij ^ d_ij xi| / ((|xi_i'| + |xi_j'|) / 2 |d_ij xi|).
    std::vector<double> area;
    // Per edge: max_k |(xi_i, xi_j) + 1/(2 mu_ij)|.
    std::vector<double> pairing;
    // Edges where mu_ij (xi_i, xi_j) < 0 fails at some sample.
    std::vector<int> sign_violations;
};
// xi = +- X / sqrt(m (x', x')) with signs propagated so that mu_ij (xi_i, xi_j) < 0.
// Requires m > 0.
MoutardLift moutard_lift(const SemiDiscreteSurface& s);

struct SurfaceConnection {
    double t = 0.0;
    // edge_maps[i][k] = Gamma^t_{i,i+1}(s_k) = Gamma_{<xi_{i+1}>}^{<xi_i>}(1 - t/mu_i).
    std::vector<std::vector<minkowski::OrthoMap>> edge_maps;
    // curve_coeffs[i][k] = A_i(s_k, t)
    std::vector<std::vector<minkowski::SkewOp>> curve_coeffs;
    // Per edge: residual of Gamma_ij . nabla_j = nabla_i.
    std::vector<double> flatness;
};
SurfaceConnection surface_connection(const SemiDiscreteSurface& s, double t);

struct SurfaceDarboux {
    SemiDiscreteSurface transform;
    double mu;
    std::vector<LightConeSection> sections;
    // Per edge: max projective distance between the transported section on curve i+1 and
    // the section integrated along curve i+1 from the transported initial value.
    std::vector<double> transport_residual;
};
// Darboux transform of the whole surface: a parallel section along curve 0, carried
// across the edges by Gamma^mu.
SurfaceDarboux surface_darboux(const SemiDiscreteSurface& s, double mu, const Eigen::VectorXd& start,
                               const darboux::IntegrationOptions& options = {});

struct SurfaceCalapso {
    SemiDiscreteSurface transform;
    std::vector<transforms::CalapsoFrameField> frames;
    // Per edge: s-constancy of T_i Gamma_ij (T_j^direct)^{-1}, with T_j^direct integrated
    // along curve j on its own.
    std::vector<double> trivialization;
};
SurfaceCalapso surface_calapso(const SemiDiscreteSurface& s, double t,
                               const transforms::MetricCorrection& correction = {},
                               const darboux::IntegrationOptions& options = {});

struct SurfaceChristoffel {
    SemiDiscreteSurface dual;
    // Per edge: max_k |x*_j(edge) - x*_j(smooth)| / max(1, |x*_j|), where the smooth curve is
    // integrated along curve j from the edge-built start point.
    std::vector<double> consistency;
};
SurfaceChristoffel surface_christoffel(const SemiDiscreteSurface& s, const Eigen::VectorXd& start = {});

}  // namespace isothermic::surface
