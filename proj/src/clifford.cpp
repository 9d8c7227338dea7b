#include "isothermic/clifford.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "isothermic/errors.hpp"

namespace isothermic::clifford {

namespace {

void check_dim(int n) {
    if (n < 2 || n > kMaxDim) {
        throw InvalidArgument("clifford: dimension " + std::to_string(n) +
                              " outside supported range [2, 4]");
    }
}

void check_same_dim(const Multivector& a, const Multivector& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch("clifford: operands of dimension " + std::to_string(a.dim()) +
                                " and " + std::to_string(b.dim()));
    }
}

}  // namespace

Multivector::Multivector(int n) : n_(n) { check_dim(n); }

Multivector Multivector::scalar(int n, double value) {
    Multivector m(n);
    m.coeffs_[0] = value;
    return m;
}

Multivector Multivector::vector(std::span<const double> components) {
    Multivector m(static_cast<int>(components.size()));
    for (std::size_t i = 0; i < components.size(); ++i) m.coeffs_[1u << i] = components[i];
    return m;
}

Multivector Multivector::vector(const Eigen::VectorXd& components) {
    return vector(std::span<const double>(components.data(), components.size()));
}

Multivector Multivector::basis(int n, int i) { return blade(n, {i}); }

Multivector Multivector::blade(int n, std::initializer_list<int> indices, double coeff) {
    // Multiply generators in the given order so that e.g. {2, 1} yields -e12.
    Multivector m = scalar(n, coeff);
    for (int i : indices) {
        if (i < 1 || i > n) throw InvalidArgument("clifford: generator index out of range");
        Multivector g(n);
        g.coeffs_[1u << (i - 1)] = 1.0;
        m = m * g;
    }
    return m;
}

Multivector Multivector::grade(int k) const {
    Multivector out(n_);
    for (int mask = 0; mask < size(); ++mask) {
        if (std::popcount(static_cast<unsigned>(mask)) == k) out.coeffs_[mask] = coeffs_[mask];
    }
    return out;
}

Eigen::VectorXd Multivector::vector_part() const {
    Eigen::VectorXd v(n_);
    for (int i = 0; i < n_; ++i) v[i] = coeffs_[1u << i];
    return v;
}

double Multivector::non_scalar_magnitude() const {
    double worst = 0.0;
    for (int mask = 1; mask < size(); ++mask) worst = std::max(worst, std::abs(coeffs_[mask]));
    return worst;
}

double Multivector::norm() const {
    double sum = 0.0;
    for (int mask = 0; mask < size(); ++mask) sum += coeffs_[mask] * coeffs_[mask];
    return std::sqrt(sum);
}

Multivector& Multivector::operator+=(const Multivector& other) {
    check_same_dim(*this, other);
    for (int mask = 0; mask < size(); ++mask) coeffs_[mask] += other.coeffs_[mask];
    return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
    check_same_dim(*this, other);
    for (int mask = 0; mask < size(); ++mask) coeffs_[mask] -= other.coeffs_[mask];
    return *this;
}

Multivector& Multivector::operator*=(double k) {
    for (int mask = 0; mask < size(); ++mask) coeffs_[mask] *= k;
    return *this;
}

int blade_sign(std::uint32_t a, std::uint32_t b) {
    // Count transpositions needed to move every generator of b left past the
    // higher generators of a.
    int swaps = 0;
    a >>= 1;
    while (a != 0) {
        swaps += std::popcount(a & b);
        a >>= 1;
    }
    return (swaps & 1) ? -1 : 1;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
    check_same_dim(a, b);
    Multivector out(a.dim());
    const auto count = static_cast<std::uint32_t>(a.size());
    for (std::uint32_t i = 0; i < count; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::uint32_t j = 0; j < count; ++j) {
            const double bj = b[j];
            if (bj == 0.0) continue;
            // e_i e_i = +1, so shared generators cancel and only the sign survives.
            out[i ^ j] += blade_sign(i, j) * ai * bj;
        }
    }
    return out;
}

Multivector vector_inverse(const Multivector& v, double scale, double eps_rel) {
    const Eigen::VectorXd comps = v.vector_part();
    if ((v - v.grade(1)).non_scalar_magnitude() != 0.0 || v.scalar_part() != 0.0) {
        throw InvalidArgument("clifford: vector_inverse expects a grade-1 element");
    }
    const double norm2 = comps.squaredNorm();
    const double tol = eps_rel * std::max(scale, 0.0);
    if (std::sqrt(norm2) <= tol || norm2 == 0.0) {
        throw DegenerateSecant("clifford: cannot invert near-zero vector (|v| = " +
                               std::to_string(std::sqrt(norm2)) + ")");
    }
    return v * (1.0 / norm2);
}

Multivector clifford_cross_ratio(const Multivector& p1, const Multivector& p2,
                                 const Multivector& p3, const Multivector& p4) {
    const double scale =
        std::max({p1.norm(), p2.norm(), p3.norm(), p4.norm(), 1.0});
    const Multivector d12 = p1 - p2;
    const Multivector d23 = p2 - p3;
    const Multivector d34 = p3 - p4;
    const Multivector d41 = p4 - p1;
    return d12 * vector_inverse(d23, scale) * d34 * vector_inverse(d41, scale);
}

}  // namespace isothermic::clifford
