#include "isothermic/fixtures.hpp"

#include <cmath>

#include "isothermic/errors.hpp"

namespace isothermic::fixtures {

namespace {

// Coaxial circles (rho_a cos s, rho_a sin s, h_a), (rho_b cos s, rho_b sin s, h_b) with
// constant m form a Darboux pair: the tangents are parallel and orthogonal to the secant,
// so cr = -rho_a rho_b / |secant|^2.
double coaxial_mu(double rho_a, double h_a, double rho_b, double h_b, double m) {
    const double d2 = (rho_b - rho_a) * (rho_b - rho_a) + (h_b - h_a) * (h_b - h_a);
    return -m * rho_a * rho_b / d2;
}

PolarizedCurve coaxial_circle(double rho, double height, const Grid& grid, double m) {
    Eigen::MatrixXd x(3, grid.size());
    Eigen::MatrixXd dx(3, grid.size());
    for (int k = 0; k < grid.size(); ++k) {
        const double s = grid.node(k);
        x.col(k) << rho * std::cos(s), rho * std::sin(s), height;
        dx.col(k) << -rho * std::sin(s), rho * std::cos(s), 0.0;
    }
    return PolarizedCurve(grid, std::move(x), std::move(dx), Eigen::VectorXd::Constant(grid.size(), m), true);
}

}  // namespace

Grid default_grid() { return Grid(0.0, 2.0, 2001); }

PolarizedCurve unit_circle(const Grid& grid) { return circle(1.0, grid); }

PolarizedCurve circle(double radius, const Grid& grid, double m, int dim) {
    const PolarizedCurve c = curves::make_curve(curves::family::Circle{radius, dim, {}}, grid);
    return c.with_polarization(Eigen::VectorXd::Constant(grid.size(), m));
}

SemiDiscreteSurface concentric_pair(const Grid& grid) {
    return SemiDiscreteSurface({circle(1.0, grid), circle(2.0, grid)}, {-2.0});
}

SemiDiscreteSurface tractrix_pair(const Grid& grid) {
    auto [plus, minus] = curves::tractrix_pair(unit_circle(grid), 0.25);
    return SemiDiscreteSurface({plus, minus}, {0.25});
}

SemiDiscreteSurface cylinder_patch(const Grid& grid) { return concentric_pair(grid); }

SemiDiscreteSurface layered_surface(const Grid& grid) {
    return surface::build_surface(unit_circle(grid),
                                  {{-2.0, Eigen::Vector2d(2.0, 0.0)}, {1.0, Eigen::Vector2d(2.5, 0.7)}});
}

CmcFixture cmc_cylinder(const Grid& grid, double r, double delta, int curves) {
    if (r <= 0.0 || delta <= 0.0 || curves < 2) throw InvalidArgument("cmc_cylinder: need r > 0, delta > 0, curves >= 2");
    const auto frame = minkowski::Frame::canonical(3);
    std::vector<PolarizedCurve> cs;
    std::vector<double> mu;
    cmc::SampledNet normal{grid, {}, {}, true};
    for (int i = 0; i < curves; ++i) {
        cs.push_back(coaxial_circle(r, i * delta, grid, -4.0 / r));
        if (i > 0) mu.push_back(coaxial_mu(r, (i - 1) * delta, r, i * delta, -4.0 / r));
        Eigen::MatrixXd n(5, grid.size());
        Eigen::MatrixXd dn(5, grid.size());
        for (int k = 0; k < grid.size(); ++k) {
            const double s = grid.node(k);
            Eigen::VectorXd N = Eigen::VectorXd::Zero(5);
            Eigen::VectorXd dN = Eigen::VectorXd::Zero(5);
            N.head<2>() << std::cos(s), std::sin(s);
            dN.head<2>() << -std::sin(s), std::cos(s);
            n.col(k) = N + r * frame.q;
            dn.col(k) = dN;
        }
        normal.f.push_back(std::move(n));
        normal.df.push_back(std::move(dn));
    }
    return CmcFixture{SemiDiscreteSurface(std::move(cs), std::move(mu)), std::move(normal), -1.0 / (2.0 * r)};
}

CmcFixture sphere_latitudes(const Grid& grid, double R, const std::vector<double>& heights) {
    if (R <= 0.0 || heights.size() < 2) throw InvalidArgument("sphere_latitudes: need R > 0 and two heights");
    const auto frame = minkowski::Frame::canonical(3);
    std::vector<PolarizedCurve> cs;
    std::vector<double> mu;
    std::vector<double> rho;
    for (double h : heights) {
        if (std::abs(h) >= R) throw InvalidArgument("sphere_latitudes: heights must lie strictly inside (-R, R)");
        rho.push_back(std::sqrt(R * R - h * h));
        cs.push_back(coaxial_circle(rho.back(), h, grid, 1.0));
    }
    for (std::size_t i = 0; i + 1 < heights.size(); ++i) {
        mu.push_back(coaxial_mu(rho[i], heights[i], rho[i + 1], heights[i + 1], 1.0));
    }
    SemiDiscreteSurface s(std::move(cs), std::move(mu));
    cmc::SampledNet normal{grid, {}, {}, true};
    for (const auto& c : s.curves()) {
        Eigen::MatrixXd n(5, grid.size());
        Eigen::MatrixXd dn(5, grid.size());
        for (int k = 0; k < grid.size(); ++k) {
            Eigen::VectorXd N = Eigen::VectorXd::Zero(5);
            Eigen::VectorXd dN = Eigen::VectorXd::Zero(5);
            N.head<3>() = c.point(k) / R;
            dN.head<3>() = c.tangent(k) / R;
            n.col(k) = N + R * frame.q;
            dn.col(k) = dN;
        }
        normal.f.push_back(std::move(n));
        normal.df.push_back(std::move(dn));
    }
    return CmcFixture{std::move(s), std::move(normal), -1.0 / R};
}

CmcFixture flat_strip(const Grid& grid) {
    std::vector<PolarizedCurve> cs;
    cmc::SampledNet normal{grid, {}, {}, true};
    for (int i = 0; i < 2; ++i) {
        Eigen::MatrixXd x(3, grid.size());
        Eigen::MatrixXd dx(3, grid.size());
        for (int k = 0; k < grid.size(); ++k) {
            x.col(k) << grid.node(k), static_cast<double>(i), 0.0;
            dx.col(k) << 1.0, 0.0, 0.0;
        }
        cs.emplace_back(grid, std::move(x), std::move(dx), Eigen::VectorXd::Ones(grid.size()), true);
        Eigen::MatrixXd n = Eigen::MatrixXd::Zero(5, grid.size());
        n.row(2).setOnes();
        normal.f.push_back(n);
        normal.df.push_back(Eigen::MatrixXd::Zero(5, grid.size()));
    }
    return CmcFixture{SemiDiscreteSurface(std::move(cs), {-1.0}), std::move(normal), 0.0};
}

std::vector<std::string> curve_fixture_names() { return {"circle-2", "tractrix-minus", "tractrix-plus", "unit-circle"}; }

std::vector<std::string> surface_fixture_names() {
    return {"cmc-cylinder", "concentric", "cylinder-patch", "layered", "sphere-latitudes", "tractrix"};
}

PolarizedCurve curve_fixture(const std::string& name, const Grid& grid) {
    if (name == "unit-circle") return unit_circle(grid);
    if (name == "circle-2") return circle(2.0, grid);
    if (name == "tractrix-plus") return tractrix_pair(grid).curve(0);
    if (name == "tractrix-minus") return tractrix_pair(grid).curve(1);
    throw InvalidArgument("unknown curve fixture '" + name + "'");
}

SemiDiscreteSurface surface_fixture(const std::string& name, const Grid& grid) {
    if (name == "concentric") return concentric_pair(grid);
    if (name == "cylinder-patch") return cylinder_patch(grid);
    if (name == "tractrix") return tractrix_pair(grid);
    if (name == "layered") return layered_surface(grid);
    if (name == "cmc-cylinder") return cmc_cylinder(grid).surface;
    if (name == "sphere-latitudes") return sphere_latitudes(grid, 1.0, {-0.5, 0.0, 0.5}).surface;
    throw InvalidArgument("unknown surface fixture '" + name + "'");
}

}  // namespace isothermic::fixtures
