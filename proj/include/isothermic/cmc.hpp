#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "isothermic/surface.hpp"

namespace isothermic::cmc {

using curves::Grid;
using darboux::LiftedCurve;
using minkowski::MinkVector;
using surface::SemiDiscreteSurface;

// A vector-valued function on a semi-discrete domain: one d x N sample matrix per curve
// together with its s-derivative. Inner products use the Minkowski form when `minkowski`
// is set and the Euclidean one otherwise.
struct SampledNet {
    Grid grid;
    std::vector<Eigen::MatrixXd> f;
    std::vector<Eigen::MatrixXd> df;
    bool minkowski = false;

    // Derivatives from finite differences.
    static SampledNet from_samples(Grid grid, std::vector<Eigen::MatrixXd> f, bool minkowski);

    int curve_count() const { return static_cast<int>(f.size()); }
    int edge_count() const { return curve_count() - 1; }
    int rows() const { return static_cast<int>(f.front().rows()); }
    double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
};

// The curves of s as points of R^n.
SampledNet affine_net(const SemiDiscreteSurface& s);
// Euclidean lifts X = o + x + |x|^2/2 q of the curves, so that (X, q) = -1.
SampledNet lifted_net(const SemiDiscreteSurface& s);
// Christoffel dual of the lifted net in R^{n+1,1}: Z' = X' / (m (X', X')) integrated from
// Z_0(s0) = start (zero if empty) and d_ij Z = d_ij X / (mu_ij (d_ij X, d_ij X)).
SampledNet lifted_christoffel_dual(const SemiDiscreteSurface& s, const MinkVector& start = {});

// 2-vectors are stored as antisymmetric coefficient matrices, a ^ b = a b^t - b a^t.
using TwoVector = Eigen::MatrixXd;
TwoVector wedge(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
// Inner product induced on 2-vectors of R^{n+1,1}: (a^b, c^d) = (a,c)(b,d) - (a,d)(b,c).
double induced_inner(const TwoVector& a, const TwoVector& b);

// area[i][k] = A(x, z)_{i,i+1}(s_k) = (x'_ij ^ d_ij z + z'_ij ^ d_ij x) / 2.
struct MixedArea {
    std::vector<std::vector<TwoVector>> area;
};
MixedArea mixed_area(const SampledNet& x, const SampledNet& z);

struct ChristoffelPairCheck {
    bool ok = false;
    // max |A(x, z)| / ((|x'_ij| |d z| + |z'_ij| |d x|) / 2), coefficient norms.
    double residual = 0.0;
};
ChristoffelPairCheck is_christoffel_pair_mixed_area(const SampledNet& x, const SampledNet& z, double tol = 1e-7);

struct KoenigsReport {
    // z_i' = -x_i' / nu_i^2
    double smooth = 0.0;
    // d_ij z = d_ij x / (nu_i nu_j)
    double edge = 0.0;
    // (d_ij z)' = d_ij (z')
    double integrability = 0.0;
    // (1/(nu_i nu_j))' d_ij x + (1/nu_i + 1/nu_j) d_ij(x'/nu) = 0
    double parallel_net = 0.0;
    // d_ij (1/m) = 0 with 1/m = (x', x') / nu^2
    double inverse_m = 0.0;
    // (1/mu_ij)' = 0 with 1/mu_ij = 2 (x_i, x_j) / (nu_i nu_j); lifted nets only.
    std::optional<double> inverse_mu;
    // alpha_ij^2 = a_i a_j for z_i' = a_i x_i', d_ij z = alpha_ij d_ij x.
    double factorization = 0.0;

    double max() const;
};
KoenigsReport verify_koenigs(const SampledNet& x, const SampledNet& z, const std::vector<Eigen::VectorXd>& nu);

// nu_i = +-sqrt(m (x_i', x_i')) with signs chosen so that nu_i nu_j and mu_ij have opposite
// signs; then the negated lifted Christoffel dual is the Koenigs dual. Requires m > 0.
std::vector<Eigen::VectorXd> koenigs_nu(const SemiDiscreteSurface& s);

// p(t) = z t + q, stored per curve and sample. Only degree 1 is supported.
struct ConservedQuantity {
    std::vector<Eigen::MatrixXd> z;
    std::vector<Eigen::MatrixXd> q;
    int degree = 1;

    static ConservedQuantity linear(std::vector<Eigen::MatrixXd> z, const MinkVector& q);
};

struct ConservedQuantityReport {
    // max |q - q(s0, curve 0)| / |q|
    double q_constancy = 0.0;
    // max |(z, xi)| / (|z| |xi|)
    double orthogonality = 0.0;
    // max |d_ij z - (pi_i - pi_j) q / mu_ij| / max(|z|, |q|)
    double edge = 0.0;
    // max |z' - 2 ((q, xi) xi' - (q, xi') xi) / (m (xi', xi'))| / max(|z|, |q|)
    double smooth = 0.0;
    // Spreads (max - min) of the coefficients (z, z), 2 (z, q), (q, q) of |z t + q|^2.
    double zz_spread = 0.0;
    double zq_spread = 0.0;
    double qq_spread = 0.0;
    // Mean of -(z, q).
    double H = 0.0;

    double max() const;
};
ConservedQuantityReport conserved_quantity_residual(const std::vector<LiftedCurve>& lifts,
                                                    const std::vector<double>& mu, const ConservedQuantity& cq);
ConservedQuantityReport conserved_quantity_residual(const SemiDiscreteSurface& s, const ConservedQuantity& cq);

// Unit normals n with n perp q and n perp x. Returns max of |(n,n) - 1|, |(n,q)|, |(n,x)|.
double tangent_plane_defect(const SampledNet& x, const SampledNet& n, const MinkVector& q);

struct TangentPlaneCongruence {
    SampledNet n;

    // Throws InvalidArgument if tangent_plane_defect exceeds tol.
    static TangentPlaneCongruence make(const SampledNet& x, SampledNet n, const MinkVector& q, double tol = 1e-10);
};

struct MeanCurvature {
    // H[i][k] on edge (i, i+1).
    std::vector<Eigen::VectorXd> H;
    double value = 0.0;
    double spread = 0.0;
    // max |A(x,n) + H A(x,x)| / |A(x,n)|, coefficient norms.
    double parallel = 0.0;
};
// H = -A(x,n)/A(x,x) from the projection onto A(x,x) in the induced inner product.
// Throws InvalidArgument for degenerate edges or when A(x,n) and A(x,x) are not parallel
// within tol.
MeanCurvature mean_curvature(const SampledNet& x, const SampledNet& n, double tol = 1e-6);
inline MeanCurvature mean_curvature(const SampledNet& x, const TangentPlaneCongruence& n, double tol = 1e-6) {
    return mean_curvature(x, n.n, tol);
}

struct CmcCertificate {
    ConservedQuantity cq;
    ConservedQuantityReport report;
    MeanCurvature curvature;
    // A(x, z) residual, as in is_christoffel_pair_mixed_area.
    double mixed_area = 0.0;
    // max |(z, z) - 1|
    double unit = 0.0;
    // max |H + (z, q)|
    double H_agreement = 0.0;
};
// z = n + H x for the Euclidean lift x of s, certified as a Christoffel dual and as a
// linear conserved quantity with q the frame vector.
CmcCertificate cmc_linear_cq(const SemiDiscreteSurface& s, const SampledNet& n, double H);

}  // namespace isothermic::cmc
