#include "isothermic/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "isothermic/errors.hpp"

namespace isothermic::minkowski {

double inner(const MinkVector& a, const MinkVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("minkowski: vectors of different size");
    const Eigen::Index last = a.size() - 1;
    return a.head(last).dot(b.head(last)) - a[last] * b[last];
}

Eigen::MatrixXd metric(int n) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n + 2, n + 2);
    g(n + 1, n + 1) = -1.0;
    return g;
}

bool is_lightlike(const MinkVector& y, double tol) {
    return std::abs(norm2(y)) <= tol * y.squaredNorm();
}

Frame Frame::canonical(int n) {
    Frame f{MinkVector::Zero(n + 2), MinkVector::Zero(n + 2)};
    f.o[n] = 0.5;
    f.o[n + 1] = 0.5;
    f.q[n] = -1.0;
    f.q[n + 1] = 1.0;
    return f;
}

MinkVector euclidean_lift(const Eigen::VectorXd& x, const Frame& frame) {
    const int n = frame.dim();
    if (x.size() != n) throw DimensionMismatch("euclidean_lift: point dimension differs from frame");
    MinkVector xi = frame.o + 0.5 * x.squaredNorm() * frame.q;
    xi.head(n) += x;
    return xi;
}

MinkVector euclidean_lift_derivative(const Eigen::VectorXd& x, const Eigen::VectorXd& dx,
                                     const Frame& frame) {
    const int n = frame.dim();
    MinkVector d = x.dot(dx) * frame.q;
    d.head(n) += dx;
    return d;
}

Eigen::VectorXd affine_point(const MinkVector& xi, const Frame& frame, double eps) {
    const double scale = inner(xi, frame.q);
    if (std::abs(scale) <= eps * xi.norm() || scale == 0.0) {
        throw PointAtInfinity("affine_point: (xi, q) = 0, point at infinity");
    }
    const MinkVector normalized = xi / -scale;
    // Remove the <o, q> part; the remainder is the R^n component.
    const MinkVector euclid = normalized + inner(normalized, frame.q) * frame.o +
                              inner(normalized, frame.o) * frame.q;
    return euclid.head(frame.dim());
}

MinkVector wedge_action(const MinkVector& xi, const MinkVector& eta, const MinkVector& y) {
    return inner(y, xi) * eta - inner(y, eta) * xi;
}

SkewOp SkewOp::zero(int n) { return SkewOp{Eigen::MatrixXd::Zero(n + 2, n + 2)}; }

SkewOp SkewOp::wedge(const MinkVector& xi, const MinkVector& eta) {
    // (y, xi) = xi^t G y, so the matrix is eta xi^t G - xi eta^t G.
    const int n = euclidean_dim(xi);
    MinkVector gxi = xi;
    MinkVector geta = eta;
    gxi[n + 1] = -gxi[n + 1];
    geta[n + 1] = -geta[n + 1];
    return SkewOp{eta * gxi.transpose() - xi * geta.transpose()};
}

double SkewOp::skewness_defect() const {
    const int n = static_cast<int>(matrix.rows()) - 2;
    const Eigen::MatrixXd g = metric(n);
    // (A v, w) + (v, A w) = v^t (A^t G + G A) w
    return (matrix.transpose() * g + g * matrix).cwiseAbs().maxCoeff();
}

OrthoMap OrthoMap::identity(int n) { return OrthoMap{Eigen::MatrixXd::Identity(n + 2, n + 2)}; }

OrthoMap OrthoMap::inverse() const {
    const int n = static_cast<int>(matrix.rows()) - 2;
    const Eigen::MatrixXd g = metric(n);
    return OrthoMap{g * matrix.transpose() * g};
}

double OrthoMap::metric_drift() const {
    const int n = static_cast<int>(matrix.rows()) - 2;
    const Eigen::MatrixXd g = metric(n);
    return (matrix.transpose() * g * matrix - g).cwiseAbs().maxCoeff();
}

MinkVector line_projection(const MinkVector& v, const MinkVector& xi, const MinkVector& xi_hat) {
    const double pairing = inner(xi, xi_hat);
    if (std::abs(pairing) <= 1e-14 * xi.norm() * xi_hat.norm()) {
        throw NonComplementary("line_projection: (xi, xi_hat) = 0");
    }
    return (inner(v, xi_hat) / pairing) * xi;
}

double projective_distance(const MinkVector& a, const MinkVector& b) {
    const MinkVector ua = a.normalized();
    const MinkVector ub = b.normalized();
    return std::min((ua - ub).norm(), (ua + ub).norm());
}

namespace {

// Lightlike partner with (origin, infinity) = -1, built from the timelike axis.
MinkVector partner_of(const MinkVector& infinity) {
    const int n = euclidean_dim(infinity);
    MinkVector e = MinkVector::Zero(n + 2);
    e[n + 1] = 1.0;
    const double ec = inner(e, infinity);
    const double alpha = -1.0 / ec;
    const double beta = alpha / (2.0 * ec);
    return alpha * e + beta * infinity;
}

}  // namespace

Chart Chart::canonical(int n) { return Chart(Frame::canonical(n).q); }

Chart::Chart(const MinkVector& infinity) : infinity_(infinity) {
    if (!is_lightlike(infinity, 1e-12)) throw InvalidArgument("Chart: point at infinity must be lightlike");
    const int n = euclidean_dim(infinity);
    const Frame canonical_frame = Frame::canonical(n);
    if ((infinity - canonical_frame.q).norm() == 0.0) {
        origin_ = canonical_frame.o;
        for (int k = 0; k < n; ++k) basis_.push_back(MinkVector::Unit(n + 2, k));
        return;
    }
    origin_ = partner_of(infinity);
    // Gram-Schmidt on the spacelike complement <origin, infinity>^perp.
    for (int k = 0; k < n + 2 && static_cast<int>(basis_.size()) < n; ++k) {
        MinkVector w = MinkVector::Unit(n + 2, k);
        w += inner(w, infinity_) * origin_ + inner(w, origin_) * infinity_;
        for (const MinkVector& b : basis_) w -= inner(w, b) * b;
        const double len2 = inner(w, w);
        if (len2 > 1e-8) basis_.push_back(w / std::sqrt(len2));
    }
    if (static_cast<int>(basis_.size()) != n) throw GeometryError("Chart: failed to build orthonormal basis");
}

Chart Chart::avoiding(std::span<const MinkVector> points) {
    if (points.empty()) throw InvalidArgument("Chart::avoiding: no points");
    const int n = euclidean_dim(points.front());
    const Frame f = Frame::canonical(n);
    std::vector<MinkVector> candidates{f.q, f.o};
    for (int k = 0; k < n; ++k) {
        for (double sign : {1.0, -1.0}) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
            x[k] = 3.0 * sign;
            candidates.push_back(euclidean_lift(x, f));
        }
    }
    double best_score = -1.0;
    const MinkVector* best = &candidates.front();
    for (const MinkVector& c : candidates) {
        double worst = std::numeric_limits<double>::infinity();
        for (const MinkVector& p : points) {
            worst = std::min(worst, std::abs(inner(p, c)) / (p.norm() * c.norm()));
        }
        // Keep the canonical chart while it is usable, otherwise only switch for a clear gain.
        if (&c == &candidates.front() && worst >= 1e-2) return Chart(c);
        if (worst > 1.5 * best_score) {
            best_score = worst;
            best = &c;
        }
    }
    return Chart(*best);
}

Eigen::VectorXd Chart::point(const MinkVector& y) const {
    const double scale = -inner(y, infinity_);
    if (std::abs(scale) <= 1e-14 * y.norm() || scale == 0.0) {
        throw PointAtInfinity("Chart::point: line through the point at infinity");
    }
    Eigen::VectorXd x(dim());
    for (int k = 0; k < dim(); ++k) x[k] = inner(y, basis_[k]) / scale;
    return x;
}

Eigen::VectorXd Chart::derivative(const MinkVector& y, const MinkVector& dy) const {
    const double scale = -inner(y, infinity_);
    const double dscale = -inner(dy, infinity_);
    if (std::abs(scale) <= 1e-14 * y.norm() || scale == 0.0) {
        throw PointAtInfinity("Chart::derivative: line through the point at infinity");
    }
    Eigen::VectorXd dx(dim());
    for (int k = 0; k < dim(); ++k) {
        dx[k] = inner(dy, basis_[k]) / scale - inner(y, basis_[k]) * dscale / (scale * scale);
    }
    return dx;
}

double Chart::clearance(const MinkVector& y) const {
    return std::abs(inner(y, infinity_)) / (y.norm() * infinity_.norm());
}

}  // namespace isothermic::minkowski
