#include "isothermic/surface.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isothermic/errors.hpp"
#include "isothermic/numerics.hpp"

namespace isothermic::surface {

using minkowski::inner;

SemiDiscreteSurface::SemiDiscreteSurface(std::vector<PolarizedCurve> curves, std::vector<double> mu)
    : curves_(std::move(curves)), mu_(std::move(mu)) {
    if (curves_.empty()) throw InvalidArgument("SemiDiscreteSurface: no curves");
    if (mu_.size() + 1 != curves_.size()) {
        throw DimensionMismatch("SemiDiscreteSurface: need one edge parameter per pair of adjacent curves");
    }
    const PolarizedCurve& first = curves_.front();
    const double m_scale = first.m().cwiseAbs().maxCoeff();
    for (std::size_t i = 1; i < curves_.size(); ++i) {
        if (!(curves_[i].grid() == first.grid())) throw DimensionMismatch("SemiDiscreteSurface: curves on different grids");
        if (curves_[i].dim() != first.dim()) throw DimensionMismatch("SemiDiscreteSurface: curves in different dimensions");
        if ((curves_[i].m() - first.m()).cwiseAbs().maxCoeff() > 1e-12 * m_scale) {
            throw InvalidArgument("SemiDiscreteSurface: curves must share one polarization");
        }
    }
    for (double mu : mu_) {
        if (mu == 0.0 || !std::isfinite(mu)) {
            throw InvalidArgument("SemiDiscreteSurface: edge parameters must be finite and non-zero");
        }
    }
    lifts_.reserve(curves_.size());
    for (const auto& c : curves_) lifts_.push_back(darboux::lift(c));
}

SemiDiscreteSurface build_surface(const PolarizedCurve& seed, const std::vector<Layer>& layers,
                                  const darboux::IntegrationOptions& options) {
    std::vector<PolarizedCurve> curves{seed};
    std::vector<double> mu;
    const auto frame = minkowski::Frame::canonical(seed.dim());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const Layer& layer = layers[i];
        const PolarizedCurve& base = curves.back();
        const std::string where = "build_surface: layer " + std::to_string(i + 1);
        if (layer.start.size() != seed.dim()) throw DimensionMismatch(where + ": start point dimension");
        const double scale = std::max(1.0, base.point(0).norm());
        if ((layer.start - base.point(0)).norm() <= 1e-12 * scale) {
            throw DegenerateSecant(where + ": start point lies on the previous curve");
        }
        try {
            const auto section = darboux::integrate_parallel_section(darboux::lift(base), layer.mu,
                                                                     minkowski::euclidean_lift(layer.start, frame), options);
            if (!section.unprojectable.empty()) {
                throw SingularEncounter(where + ": transform passes through infinity",
                                        seed.grid().node(section.unprojectable.front()));
            }
            curves.push_back(darboux::project(section, seed.m()));
        } catch (const SingularEncounter& e) {
            if (std::string(e.what()).rfind("build_surface", 0) == 0) throw;
            throw SingularEncounter(where + ": " + e.what(), e.s());
        }
        mu.push_back(layer.mu);
    }
    return SemiDiscreteSurface(std::move(curves), std::move(mu));
}

std::vector<double> IsothermicReport::recovered_mu() const {
    std::vector<double> out;
    for (const auto& e : edges) out.push_back(e.mu_fit);
    return out;
}

IsothermicReport check_isothermic(const SemiDiscreteSurface& s, double tol) {
    IsothermicReport report;
    const bool positive = (s.m().array() > 0.0).all();
    for (int i = 0; i < s.edge_count(); ++i) {
        const PolarizedCurve& a = s.curve(i);
        const PolarizedCurve& b = s.curve(i + 1);
        const auto d = darboux::is_darboux_pair(a, b, s.m(), tol);
        EdgeReport e;
        e.edge = i;
        e.mu = s.mu()[static_cast<std::size_t>(i)];
        e.mu_fit = d.mu;
        e.reality = d.reality_residual;
        e.constancy = d.residual;
        e.mu_error = std::abs(d.mu - e.mu) / std::abs(e.mu);
        if (positive) {
            double worst = 0.0;
            for (int k = 0; k < s.grid().size(); ++k) {
                const double nu_a = std::sqrt(s.m()[k] * a.tangent(k).squaredNorm());
                const double nu_b = std::sqrt(s.m()[k] * b.tangent(k).squaredNorm());
                const double d2 = (b.point(k) - a.point(k)).squaredNorm();
                worst = std::max(worst, std::abs(std::abs(e.mu) * d2 / (nu_a * nu_b) - 1.0));
            }
            e.nu_factorization = worst;
        }
        const bool pass = e.reality < tol && e.constancy < tol && e.mu_error < tol &&
                          (!e.nu_factorization || *e.nu_factorization < tol);
        report.ok = report.ok && pass;
        report.edges.push_back(e);
    }
    return report;
}

namespace {

// |a ^ b| relative to scale |b|, with the 2-vector stored as a b^t - b a^t.
double wedge_ratio(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double scale) {
    const Eigen::MatrixXd w = a * b.transpose() - b * a.transpose();
    const double denom = std::sqrt(2.0) * scale * b.norm();
    return denom > 0.0 ? w.norm() / denom : 0.0;
}

}  // namespace

MoutardLift moutard_lift(const SemiDiscreteSurface& s) {
    if (!(s.m().array() > 0.0).all()) throw InvalidArgument("moutard_lift: requires m > 0");
    const int count = s.grid().size();
    MoutardLift out;
    int sign = 1;
    for (int i = 0; i < s.curve_count(); ++i) {
        if (i > 0) sign *= s.mu()[static_cast<std::size_t>(i - 1)] > 0.0 ? 1 : -1;
        out.sign.push_back(sign);
        const LiftedCurve& lift = s.lifts()[static_cast<std::size_t>(i)];
        LightConeSection section{s.grid(), Eigen::MatrixXd(lift.xi.rows(), count), {},
                                 darboux::Normalization::moutard};
        for (int k = 0; k < count; ++k) {
            const double nu = std::sqrt(s.m()[k] * s.curve(i).tangent(k).squaredNorm());
            section.xi.col(k) = (sign / nu) * lift.xi.col(k);
        }
        section.dxi = numerics::differentiate(section.xi, s.grid().step());
        for (int k = 0; k < count; ++k) {
            out.normalization = std::max(out.normalization,
                                         std::abs(s.m()[k] * minkowski::norm2(section.dxi.col(k)) - 1.0));
        }
        out.xi.push_back(std::move(section));
    }
    for (int i = 0; i < s.edge_count(); ++i) {
        const auto& a = out.xi[static_cast<std::size_t>(i)];
        const auto& b = out.xi[static_cast<std::size_t>(i + 1)];
        const double mu = s.mu()[static_cast<std::size_t>(i)];
        double area = 0.0;
        double pairing = 0.0;
        bool violated = false;
        for (int k = 0; k < count; ++k) {
            const Eigen::VectorXd edge_tangent = 0.5 * (a.dxi.col(k) + b.dxi.col(k));
            const Eigen::VectorXd difference = b.xi.col(k) - a.xi.col(k);
            const double scale = 0.5 * (a.dxi.col(k).norm() + b.dxi.col(k).norm());
            area = std::max(area, wedge_ratio(edge_tangent, difference, scale));
            const double p = inner(a.xi.col(k), b.xi.col(k));
            pairing = std::max(pairing, std::abs(p + 1.0 / (2.0 * mu)));
            violated = violated || !(mu * p < 0.0);
        }
        out.area.push_back(area);
        out.pairing.push_back(pairing);
        if (violated) out.sign_violations.push_back(i);
    }
    return out;
}

namespace {

void check_spectral(const SemiDiscreteSurface& s, double t, const char* what) {
    for (double mu : s.mu()) {
        if (t == mu) throw InvalidArgument(std::string(what) + ": parameter equals an edge parameter");
    }
}

}  // namespace

SurfaceConnection surface_connection(const SemiDiscreteSurface& s, double t) {
    check_spectral(s, t, "surface_connection");
    SurfaceConnection out;
    out.t = t;
    const int count = s.grid().size();
    for (const auto& lift : s.lifts()) {
        std::vector<minkowski::SkewOp> coeffs;
        coeffs.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) {
            coeffs.push_back(darboux::connection_coeff(lift.xi.col(k), lift.dxi.col(k), lift.m[k], t));
        }
        out.curve_coeffs.push_back(std::move(coeffs));
    }
    for (int i = 0; i < s.edge_count(); ++i) {
        const LiftedCurve& a = s.lifts()[static_cast<std::size_t>(i)];
        const LiftedCurve& b = s.lifts()[static_cast<std::size_t>(i + 1)];
        const double mu = s.mu()[static_cast<std::size_t>(i)];
        std::vector<minkowski::OrthoMap> maps;
        maps.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) {
            maps.push_back(darboux::gauge_map(b.xi.col(k), a.xi.col(k), 1.0 - t / mu).matrix());
        }
        out.edge_maps.push_back(std::move(maps));
        out.flatness.push_back(darboux::verify_gauge_relation(b, a, mu, t));
    }
    return out;
}

SurfaceDarboux surface_darboux(const SemiDiscreteSurface& s, double mu, const Eigen::VectorXd& start,
                               const darboux::IntegrationOptions& options) {
    if (mu == 0.0) throw InvalidArgument("surface_darboux: mu must be non-zero");
    check_spectral(s, mu, "surface_darboux");
    if (start.size() != s.dim()) throw DimensionMismatch("surface_darboux: start point dimension");
    const auto frame = minkowski::Frame::canonical(s.dim());
    std::vector<LightConeSection> sections;
    sections.push_back(
        darboux::integrate_parallel_section(s.lifts().front(), mu, minkowski::euclidean_lift(start, frame), options));
    std::vector<double> transport;
    for (int i = 0; i < s.edge_count(); ++i) {
        const LiftedCurve& a = s.lifts()[static_cast<std::size_t>(i)];
        const LiftedCurve& b = s.lifts()[static_cast<std::size_t>(i + 1)];
        const double r = 1.0 - mu / s.mu()[static_cast<std::size_t>(i)];
        const LightConeSection& prev = sections.back();
        LightConeSection next{s.grid(), Eigen::MatrixXd(prev.xi.rows(), s.grid().size())};
        for (int k = 0; k < s.grid().size(); ++k) {
            next.xi.col(k) = darboux::gauge_map(a.xi.col(k), b.xi.col(k), r)(prev.at(k));
        }
        const auto direct = darboux::integrate_parallel_section(b, mu, next.at(0), options);
        double worst = 0.0;
        for (int k = 0; k < s.grid().size(); ++k) {
            worst = std::max(worst, minkowski::projective_distance(next.at(k), direct.at(k)));
        }
        transport.push_back(worst);
        sections.push_back(std::move(next));
    }
    std::vector<PolarizedCurve> curves;
    for (const auto& section : sections) curves.push_back(darboux::project(section, s.m()));
    return SurfaceDarboux{SemiDiscreteSurface(std::move(curves), s.mu()), mu, std::move(sections), std::move(transport)};
}

namespace {

double relative_constancy(const std::vector<Eigen::MatrixXd>& maps) {
    const double scale = maps.front().norm();
    double worst = 0.0;
    for (const auto& m : maps) worst = std::max(worst, (m - maps.front()).norm() / scale);
    return worst;
}

}  // namespace

SurfaceCalapso surface_calapso(const SemiDiscreteSurface& s, double t, const transforms::MetricCorrection& correction,
                               const darboux::IntegrationOptions& options) {
    check_spectral(s, t, "surface_calapso");
    const int count = s.grid().size();
    std::vector<transforms::CalapsoFrameField> frames;
    frames.push_back(transforms::integrate_calapso(s.lifts().front(), t, {}, correction, options));
    std::vector<double> trivialization;
    for (int i = 0; i < s.edge_count(); ++i) {
        const LiftedCurve& a = s.lifts()[static_cast<std::size_t>(i)];
        const LiftedCurve& b = s.lifts()[static_cast<std::size_t>(i + 1)];
        const double r = 1.0 - t / s.mu()[static_cast<std::size_t>(i)];
        transforms::CalapsoFrameField next{s.grid(), t, {}};
        next.T.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) {
            next.T.push_back(frames.back().T[k] * darboux::gauge_map(b.xi.col(k), a.xi.col(k), r).matrix().matrix);
        }
        const auto direct = transforms::integrate_calapso(b, t, {}, correction, options);
        std::vector<Eigen::MatrixXd> maps(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) maps[k] = next.T[k] * direct.at(k).inverse().matrix;
        trivialization.push_back(relative_constancy(maps));
        frames.push_back(std::move(next));
    }
    std::vector<LightConeSection> moved;
    std::vector<MinkVector> points;
    for (int i = 0; i < s.curve_count(); ++i) {
        const LiftedCurve& lift = s.lifts()[static_cast<std::size_t>(i)];
        LightConeSection section{s.grid(), Eigen::MatrixXd(lift.xi.rows(), count)};
        for (int k = 0; k < count; ++k) {
            section.xi.col(k) = frames[static_cast<std::size_t>(i)].T[k] * lift.xi.col(k);
            points.push_back(section.xi.col(k));
        }
        if (i == 0) section = transforms::apply(frames.front(), lift, LightConeSection{s.grid(), lift.xi, lift.dxi});
        moved.push_back(std::move(section));
    }
    const auto chart = minkowski::Chart::avoiding(points);
    std::vector<PolarizedCurve> curves;
    for (const auto& section : moved) curves.push_back(darboux::project(section, s.m(), chart));
    std::vector<double> mu;
    for (double m : s.mu()) mu.push_back(m - t);
    return SurfaceCalapso{SemiDiscreteSurface(std::move(curves), std::move(mu)), std::move(frames),
                          std::move(trivialization)};
}

SurfaceChristoffel surface_christoffel(const SemiDiscreteSurface& s, const Eigen::VectorXd& start) {
    std::vector<PolarizedCurve> duals{transforms::christoffel_dual(s.curve(0), start)};
    std::vector<double> consistency;
    for (int i = 0; i < s.edge_count(); ++i) {
        const double mu = s.mu()[static_cast<std::size_t>(i)];
        PolarizedCurve next = transforms::christoffel_darboux_permute(s.curve(i), duals.back(), s.curve(i + 1), mu);
        const PolarizedCurve smooth = transforms::christoffel_dual(s.curve(i + 1), next.point(0));
        double worst = 0.0;
        for (int k = 0; k < s.grid().size(); ++k) {
            worst = std::max(worst, (next.point(k) - smooth.point(k)).norm() / std::max(1.0, next.point(k).norm()));
        }
        consistency.push_back(worst);
        duals.push_back(std::move(next));
    }
    return SurfaceChristoffel{SemiDiscreteSurface(std::move(duals), s.mu()), std::move(consistency)};
}

}  // namespace isothermic::surface
