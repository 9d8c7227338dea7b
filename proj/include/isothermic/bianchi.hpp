#pragma once

#include <Eigen/Dense>

#include "isothermic/darboux.hpp"

namespace isothermic::bianchi {

using darboux::LiftedCurve;
using darboux::LightConeSection;
using minkowski::MinkVector;

// Real cross ratio of four concircular points of S^n, computed as a Clifford cross
// ratio in a stereographic chart that keeps the points away from infinity. With this
// ordering, moebius_cross_ratio(xi_hat, eta, xi, gauge_map(xi, xi_hat, r)(eta)) = r.
// Throws InvalidArgument when the relative non-scalar part exceeds tol and
// DegenerateSecant for coincident points.
double moebius_cross_ratio(const MinkVector& p1, const MinkVector& p2, const MinkVector& p3, const MinkVector& p4,
                           double tol = 1e-7);

// max_k |xi' - A(t) xi| / |xi| with xi' from finite differences of the samples. With
// projective = true only the part of the defect transverse to xi counts, which tests
// whether some rescaling of the section is parallel.
double parallel_residual(const LiftedCurve& c, double t, const LightConeSection& section, bool projective = false);

// Gamma_{<xi>}^{<xi0>}(1 - mu1/mu0) xi1 at one parameter value.
MinkVector quad_point(const MinkVector& xi, const MinkVector& xi0, double mu0, const MinkVector& xi1, double mu1);

struct QuadOptions {
    // Largest parallel_residual accepted for the input sections.
    double section_tol = 1e-5;
};

// Fourth vertex of the Bianchi quadrilateral spanned by the mu0- and mu1-Darboux
// transforms xi0, xi1 of c: a mu1-parallel section along xi0 and, up to scale, a
// mu0-parallel section along xi1.
LightConeSection bianchi_quad(const LiftedCurve& c, const LightConeSection& xi0, double mu0,
                              const LightConeSection& xi1, double mu1, const QuadOptions& options = {});

// Operator 2-norm differences between the two gauge composites around a quadrilateral
// and between each of them and the diagonal gauge Gamma_{<xi0>}^{<xi1>}, relative to the
// norm of the diagonal gauge.
struct BigaugeResidual {
    double sides = 0.0;
    double middle = 0.0;
};
BigaugeResidual check_bigauge(const MinkVector& xi, const MinkVector& xi0, const MinkVector& xi1,
                              const MinkVector& xi01, double mu0, double mu1, double t);
BigaugeResidual check_bigauge(const LightConeSection& xi, const LightConeSection& xi0, const LightConeSection& xi1,
                              const LightConeSection& xi01, double mu0, double mu1, double t);

struct BianchiCube {
    LightConeSection xi01;
    LightConeSection xi02;
    LightConeSection xi12;
    // Canonical vertex, built over the face through xi0.
    LightConeSection xi012;
    // Same vertex built over the faces through xi1 and xi2.
    LightConeSection via1;
    LightConeSection via2;
    // max_k of the projective distances between the three constructions.
    double route_residual = 0.0;
};
BianchiCube bianchi_cube(const LiftedCurve& c, const LightConeSection& xi0, double mu0, const LightConeSection& xi1,
                         double mu1, const LightConeSection& xi2, double mu2, const QuadOptions& options = {});

}  // namespace isothermic::bianchi
