#include "isothermic/numerics.hpp"

#include <algorithm>
#include <array>

#include "isothermic/errors.hpp"

namespace isothermic::numerics {

namespace {

struct Window {
    Eigen::Index start;
    std::array<double, 4> weights;
};

Window lagrange_window(Eigen::Index count, int k, double theta) {
    if (count < 4) throw InvalidArgument("interpolate: need at least 4 samples");
    const Eigen::Index start = std::clamp<Eigen::Index>(k - 1, 0, count - 4);
    const double p = static_cast<double>(k - start) + theta;
    Window w{start, {}};
    for (int j = 0; j < 4; ++j) {
        double l = 1.0;
        for (int i = 0; i < 4; ++i) {
            if (i != j) l *= (p - i) / static_cast<double>(j - i);
        }
        w.weights[j] = l;
    }
    return w;
}

}  // namespace

Eigen::MatrixXd differentiate(const Eigen::MatrixXd& f, double h) {
    const Eigen::Index n = f.cols();
    if (n < 5) throw InvalidArgument("differentiate: need at least 5 samples");
    Eigen::MatrixXd d(f.rows(), n);
    const double c = 1.0 / (12.0 * h);
    d.col(0) = c * (-25.0 * f.col(0) + 48.0 * f.col(1) - 36.0 * f.col(2) + 16.0 * f.col(3) - 3.0 * f.col(4));
    d.col(1) = c * (-3.0 * f.col(0) - 10.0 * f.col(1) + 18.0 * f.col(2) - 6.0 * f.col(3) + f.col(4));
    for (Eigen::Index k = 2; k < n - 2; ++k) {
        d.col(k) = c * (f.col(k - 2) - 8.0 * f.col(k - 1) + 8.0 * f.col(k + 1) - f.col(k + 2));
    }
    d.col(n - 2) = -c * (-3.0 * f.col(n - 1) - 10.0 * f.col(n - 2) + 18.0 * f.col(n - 3) -
                         6.0 * f.col(n - 4) + f.col(n - 5));
    d.col(n - 1) = -c * (-25.0 * f.col(n - 1) + 48.0 * f.col(n - 2) - 36.0 * f.col(n - 3) +
                         16.0 * f.col(n - 4) - 3.0 * f.col(n - 5));
    return d;
}

Eigen::VectorXd differentiate(const Eigen::VectorXd& f, double h) {
    const Eigen::MatrixXd row = f.transpose();
    return differentiate(row, h).transpose();
}

Eigen::VectorXd interpolate(const Eigen::MatrixXd& samples, int k, double theta) {
    const Window w = lagrange_window(samples.cols(), k, theta);
    Eigen::VectorXd out = w.weights[0] * samples.col(w.start);
    for (int j = 1; j < 4; ++j) out += w.weights[j] * samples.col(w.start + j);
    return out;
}

double interpolate(const Eigen::VectorXd& samples, int k, double theta) {
    const Window w = lagrange_window(samples.size(), k, theta);
    double out = 0.0;
    for (int j = 0; j < 4; ++j) out += w.weights[j] * samples[w.start + j];
    return out;
}

}  // namespace isothermic::numerics
