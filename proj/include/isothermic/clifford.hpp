#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

#include <Eigen/Dense>

namespace isothermic::clifford {

constexpr int kMaxDim = 4;

// Element of the Clifford algebra of Euclidean R^n (e_i e_i = +1), 2 <= n <= 4.
//
// Coefficients are stored densely, one per basis blade. A blade e_{i1} ... e_{ik}
// with i1 < ... < ik is addressed by the bitmask (1 << i1) | ... | (1 << ik)
// (zero-based generator indices), so index 0 is the scalar and grade(blade) is
// the popcount of the mask.
class Multivector {
public:
    explicit Multivector(int n);

    static Multivector scalar(int n, double value);
    static Multivector vector(std::span<const double> components);
    static Multivector vector(const Eigen::VectorXd& components);
    // Basis generator e_{i}, one-based as in the usual notation (e1, e2, ...).
    static Multivector basis(int n, int i);
    // Basis blade from a one-based index set, e.g. {1, 2} -> e12.
    static Multivector blade(int n, std::initializer_list<int> indices, double coeff = 1.0);

    int dim() const { return n_; }
    int size() const { return 1 << n_; }

    double operator[](std::uint32_t mask) const { return coeffs_[mask]; }
    double& operator[](std::uint32_t mask) { return coeffs_[mask]; }

    double scalar_part() const { return coeffs_[0]; }
    Multivector grade(int k) const;
    Eigen::VectorXd vector_part() const;

    // Largest absolute coefficient outside grade 0.
    double non_scalar_magnitude() const;
    // Euclidean norm of the coefficient vector.
    double norm() const;

    Multivector& operator+=(const Multivector& other);
    Multivector& operator-=(const Multivector& other);
    Multivector& operator*=(double k);

    friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
    friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
    friend Multivector operator*(Multivector a, double k) { return a *= k; }
    friend Multivector operator*(double k, Multivector a) { return a *= k; }
    friend Multivector operator-(Multivector a) { return a *= -1.0; }

private:
    int n_;
    std::array<double, 1 << kMaxDim> coeffs_{};
};

// Sign picked up when reordering the product of two basis blades into canonical order.
int blade_sign(std::uint32_t a, std::uint32_t b);

Multivector geometric_product(const Multivector& a, const Multivector& b);
inline Multivector operator*(const Multivector& a, const Multivector& b) {
    return geometric_product(a, b);
}

// v^{-1} = v / |v|^2. Throws DegenerateSecant if |v| <= eps_rel * scale, where
// scale defaults to 1 and should be set to the magnitude of the data the vector
// was formed from (e.g. the endpoints of a secant).
Multivector vector_inverse(const Multivector& v, double scale = 1.0, double eps_rel = 1e-12);

// (p1 - p2)(p2 - p3)^{-1}(p3 - p4)(p4 - p1)^{-1}
Multivector clifford_cross_ratio(const Multivector& p1, const Multivector& p2,
                                 const Multivector& p3, const Multivector& p4);

}  // namespace isothermic::clifford
