#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace isothermic::minkowski {

// Vectors of R^{n+1,1}: coordinates (y_1, ..., y_n, y_{n+1}, y_{n+2}) with
// (y, y) = y_1^2 + ... + y_{n+1}^2 - y_{n+2}^2. R^n sits in the first n slots.
using MinkVector = Eigen::VectorXd;

constexpr double kLightlikeTol = 1e-9;

inline int euclidean_dim(const MinkVector& y) { return static_cast<int>(y.size()) - 2; }

double inner(const MinkVector& a, const MinkVector& b);
inline double norm2(const MinkVector& a) { return inner(a, a); }

// Diagonal Gram matrix diag(1, ..., 1, -1) of size n+2.
Eigen::MatrixXd metric(int n);

// |(y, y)| <= tol * |y|^2 with |.| the coordinate norm.
bool is_lightlike(const MinkVector& y, double tol = kLightlikeTol);

// Lightlike pair with (o, o) = (q, q) = 0 and (o, q) = -1.
struct Frame {
    MinkVector o;
    MinkVector q;

    // o = (0, ..., 0, 1/2, 1/2), q = (0, ..., 0, -1, 1); exact in binary floating point.
    static Frame canonical(int n);
    int dim() const { return euclidean_dim(o); }
};

// xi = o + x + (x, x)/2 q
MinkVector euclidean_lift(const Eigen::VectorXd& x, const Frame& frame);
// Derivative of the Euclidean lift along a curve: xi' = x' + (x, x') q.
MinkVector euclidean_lift_derivative(const Eigen::VectorXd& x, const Eigen::VectorXd& dx,
                                     const Frame& frame);

// Inverse of euclidean_lift after rescaling to (xi, q) = -1; throws PointAtInfinity
// when |(xi, q)| <= eps * |xi|.
Eigen::VectorXd affine_point(const MinkVector& xi, const Frame& frame, double eps = 1e-14);

// (xi ^ eta)(y) = (y, xi) eta - (y, eta) xi
MinkVector wedge_action(const MinkVector& xi, const MinkVector& eta, const MinkVector& y);

// Skew endomorphism of R^{n+1,1}: (A v, w) + (v, A w) = 0.
struct SkewOp {
    Eigen::MatrixXd matrix;

    static SkewOp zero(int n);
    // Matrix of y -> (y, xi) eta - (y, eta) xi.
    static SkewOp wedge(const MinkVector& xi, const MinkVector& eta);

    MinkVector operator()(const MinkVector& y) const { return matrix * y; }
    SkewOp& operator*=(double k) {
        matrix *= k;
        return *this;
    }
    friend SkewOp operator*(double k, SkewOp a) { return a *= k; }
    friend SkewOp operator+(SkewOp a, const SkewOp& b) {
        a.matrix += b.matrix;
        return a;
    }

    // max |(A v, w) + (v, A w)| over the coordinate basis.
    double skewness_defect() const;
};

// Metric-orthogonal map of R^{n+1,1}.
struct OrthoMap {
    Eigen::MatrixXd matrix;

    static OrthoMap identity(int n);
    MinkVector operator()(const MinkVector& y) const { return matrix * y; }
    friend OrthoMap operator*(const OrthoMap& a, const OrthoMap& b) {
        return OrthoMap{a.matrix * b.matrix};
    }
    // T^{-1} = G T^t G for T orthogonal w.r.t. G.
    OrthoMap inverse() const;
    // max |(T e_i, T e_j) - (e_i, e_j)|
    double metric_drift() const;
};

// Projection onto <xi> along <xi_hat> + <xi, xi_hat>^perp:
// pi(v) = (v, xi_hat) / (xi, xi_hat) xi. Throws NonComplementary if (xi, xi_hat) ~ 0.
MinkVector line_projection(const MinkVector& v, const MinkVector& xi, const MinkVector& xi_hat);

// Line distance between <a> and <b>, measured on unit coordinate representatives
// and insensitive to sign.
double projective_distance(const MinkVector& a, const MinkVector& b);

// Stereographic chart of S^n = P(L^{n+1}) with a chosen lightlike point at infinity.
// The chart is the composite of an isometry of R^{n+1,1} sending `infinity` to q and
// the Euclidean identification of Q^n with R^n, so cross ratios and Darboux data are
// preserved.
class Chart {
public:
    // Chart with the frame's q at infinity; this is affine_point.
    static Chart canonical(int n);
    explicit Chart(const MinkVector& infinity);

    // The canonical chart when every line keeps a relative clearance of at least 1e-2 from
    // q; otherwise, among a fixed candidate set of points at infinity, the one that keeps
    // the given lines furthest from infinity.
    static Chart avoiding(std::span<const MinkVector> points);

    int dim() const { return static_cast<int>(basis_.size()); }
    const MinkVector& infinity() const { return infinity_; }

    Eigen::VectorXd point(const MinkVector& y) const;
    // Derivative of point(y(s)) given y and y'.
    Eigen::VectorXd derivative(const MinkVector& y, const MinkVector& dy) const;
    // Relative distance |(y, infinity)| / |y| used to decide projectability.
    double clearance(const MinkVector& y) const;

private:
    MinkVector infinity_;
    MinkVector origin_;
    std::vector<MinkVector> basis_;
};

}  // namespace isothermic::minkowski
