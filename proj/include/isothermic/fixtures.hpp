#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isothermic/cmc.hpp"
#include "isothermic/surface.hpp"

// Closed-form and generated test configurations.
namespace isothermic::fixtures {

using curves::Grid;
using curves::PolarizedCurve;
using surface::SemiDiscreteSurface;

// [0, 2] with h = 1e-3.
Grid default_grid();

// Unit circle in R^2, angle parameter, m = 1.
PolarizedCurve unit_circle(const Grid& grid = default_grid());

// Circle of radius `radius` about the origin in the e1 e2 plane of R^dim with constant m.
PolarizedCurve circle(double radius, const Grid& grid, double m = 1.0, int dim = 2);

// Unit circle and the circle of radius 2 with the same angle parameter and m = 1: a
// Darboux pair with mu = -2.
SemiDiscreteSurface concentric_pair(const Grid& grid = default_grid());

// Tractrix pair x_pm of the unit circle with mu = 1/4, m = 1/2.
SemiDiscreteSurface tractrix_pair(const Grid& grid = default_grid());

// The concentric pair read as a two-curve semi-discrete surface.
SemiDiscreteSurface cylinder_patch(const Grid& grid = default_grid());

// Unit circle followed by Darboux layers mu = -2 through (2, 0) and mu = 1 through (2.5, 0.7).
SemiDiscreteSurface layered_surface(const Grid& grid = default_grid());

struct CmcFixture {
    SemiDiscreteSurface surface;
    cmc::SampledNet normal;
    double H;
};

// Parallel circles of radius r at heights k delta, k < curves, in R^3 with m = -4/r and
// mu = 4 r / delta^2. The normal is N + r q for the outward unit normal N; H = -1/(2r).
CmcFixture cmc_cylinder(const Grid& grid = default_grid(), double r = 1.0, double delta = 0.5, int curves = 4);

// Latitude circles of the sphere of radius R about the origin at the given heights, with
// m = 1 and the edge parameters of coaxial circles. The normal is x/R + R q; H = -1/R.
CmcFixture sphere_latitudes(const Grid& grid, double R, const std::vector<double>& heights);

// x_0 = s e1, x_1 = s e1 + e2 in R^3 with m = 1 (mu = -1); normal e3, H = 0.
CmcFixture flat_strip(const Grid& grid = default_grid());

// Names accepted by curve_fixture and surface_fixture.
std::vector<std::string> curve_fixture_names();
std::vector<std::string> surface_fixture_names();
PolarizedCurve curve_fixture(const std::string& name, const Grid& grid = default_grid());
SemiDiscreteSurface surface_fixture(const std::string& name, const Grid& grid = default_grid());

}  // namespace isothermic::fixtures
