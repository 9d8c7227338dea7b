#include "isothermic/cmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "isothermic/errors.hpp"
#include "isothermic/numerics.hpp"
#include "sampling.hpp"

namespace isothermic::cmc {

using minkowski::inner;

namespace {

void require_compatible(const SampledNet& a, const SampledNet& b, const char* where) {
    if (!(a.grid == b.grid) || a.curve_count() != b.curve_count() || a.rows() != b.rows()) {
        throw DimensionMismatch(std::string(where) + ": nets do not share grid, curves and dimension");
    }
}

double safe_ratio(double num, double denom) { return denom > 0.0 ? num / denom : (num > 0.0 ? num : 0.0); }

double spread(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

}  // namespace

SampledNet SampledNet::from_samples(Grid grid, std::vector<Eigen::MatrixXd> f, bool minkowski) {
    if (f.empty()) throw InvalidArgument("SampledNet: no curves");
    std::vector<Eigen::MatrixXd> df;
    df.reserve(f.size());
    for (const auto& c : f) {
        if (c.cols() != grid.size() || c.rows() != f.front().rows()) throw DimensionMismatch("SampledNet: sample shape");
        df.push_back(numerics::differentiate(c, grid.step()));
    }
    return SampledNet{grid, std::move(f), std::move(df), minkowski};
}

double SampledNet::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return minkowski ? minkowski::inner(a, b) : a.dot(b);
}

SampledNet affine_net(const SemiDiscreteSurface& s) {
    SampledNet net{s.grid(), {}, {}, false};
    for (const auto& c : s.curves()) {
        net.f.push_back(c.x());
        net.df.push_back(c.xprime());
    }
    return net;
}

SampledNet lifted_net(const SemiDiscreteSurface& s) {
    SampledNet net{s.grid(), {}, {}, true};
    for (const auto& l : s.lifts()) {
        net.f.push_back(l.xi);
        net.df.push_back(l.dxi);
    }
    return net;
}

SampledNet lifted_christoffel_dual(const SemiDiscreteSurface& s, const MinkVector& start) {
    const int rows = s.dim() + 2;
    const MinkVector z0 = start.size() == 0 ? MinkVector(MinkVector::Zero(rows)) : start;
    if (z0.size() != rows) throw DimensionMismatch("lifted_christoffel_dual: start dimension");
    for (int k = 0; k + 1 < s.grid().size(); ++k) {
        if (s.m()[k] * s.m()[k + 1] < 0.0) throw InvalidArgument("lifted_christoffel_dual: polarization changes sign");
    }
    auto dual_tangent = [](const MinkVector& dx, double m) { return MinkVector(dx / (m * minkowski::norm2(dx))); };
    const LiftedCurve& first = s.lifts().front();
    auto rhs = [&](detail::GridPosition p, const MinkVector&) {
        const auto sm = detail::sample(first, p);
        return dual_tangent(sm.dxi, sm.m);
    };
    const auto states =
        detail::rk4_on_grid<MinkVector>(s.grid().size(), s.grid().step(), 1, z0, rhs, [](MinkVector&) {});

    const int count = s.grid().size();
    SampledNet net{s.grid(), {}, {}, true};
    for (int i = 0; i < s.curve_count(); ++i) {
        const LiftedCurve& l = s.lifts()[static_cast<std::size_t>(i)];
        Eigen::MatrixXd z(rows, count);
        Eigen::MatrixXd dz(rows, count);
        for (int k = 0; k < count; ++k) {
            if (i == 0) {
                z.col(k) = states[static_cast<std::size_t>(k)];
            } else {
                const LiftedCurve& prev = s.lifts()[static_cast<std::size_t>(i - 1)];
                const MinkVector d = l.xi.col(k) - prev.xi.col(k);
                const double d2 = minkowski::norm2(d);
                if (std::abs(d2) <= 1e-14 * d.squaredNorm()) {
                    throw DegenerateSecant("lifted_christoffel_dual: lightlike edge " + std::to_string(i - 1));
                }
                z.col(k) = net.f.back().col(k) + d / (s.mu()[static_cast<std::size_t>(i - 1)] * d2);
            }
            dz.col(k) = dual_tangent(l.dxi.col(k), s.m()[k]);
        }
        net.f.push_back(std::move(z));
        net.df.push_back(std::move(dz));
    }
    return net;
}

TwoVector wedge(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a * b.transpose() - b * a.transpose(); }

double induced_inner(const TwoVector& a, const TwoVector& b) {
    const int n = static_cast<int>(a.rows()) - 2;
    const Eigen::VectorXd g = minkowski::metric(n).diagonal();
    return 0.5 * (a.cwiseProduct(b).array() * (g * g.transpose()).array()).sum();
}

MixedArea mixed_area(const SampledNet& x, const SampledNet& z) {
    require_compatible(x, z, "mixed_area");
    MixedArea out;
    for (int i = 0; i < x.edge_count(); ++i) {
        std::vector<TwoVector> edge;
        edge.reserve(static_cast<std::size_t>(x.grid.size()));
        for (int k = 0; k < x.grid.size(); ++k) {
            const Eigen::VectorXd xs = 0.5 * (x.df[i].col(k) + x.df[i + 1].col(k));
            const Eigen::VectorXd zs = 0.5 * (z.df[i].col(k) + z.df[i + 1].col(k));
            const Eigen::VectorXd dx = x.f[i + 1].col(k) - x.f[i].col(k);
            const Eigen::VectorXd dz = z.f[i + 1].col(k) - z.f[i].col(k);
            edge.push_back(0.5 * (wedge(xs, dz) + wedge(zs, dx)));
        }
        out.area.push_back(std::move(edge));
    }
    return out;
}

ChristoffelPairCheck is_christoffel_pair_mixed_area(const SampledNet& x, const SampledNet& z, double tol) {
    const MixedArea a = mixed_area(x, z);
    ChristoffelPairCheck check;
    for (int i = 0; i < x.edge_count(); ++i) {
        for (int k = 0; k < x.grid.size(); ++k) {
            const double xs = 0.5 * (x.df[i].col(k) + x.df[i + 1].col(k)).norm();
            const double zs = 0.5 * (z.df[i].col(k) + z.df[i + 1].col(k)).norm();
            const double dx = (x.f[i + 1].col(k) - x.f[i].col(k)).norm();
            const double dz = (z.f[i + 1].col(k) - z.f[i].col(k)).norm();
            const double scale = 0.5 * (xs * dz + zs * dx);
            check.residual = std::max(check.residual, safe_ratio(a.area[i][k].norm(), scale));
        }
    }
    check.ok = check.residual < tol;
    return check;
}

double KoenigsReport::max() const {
    double worst = std::max({smooth, edge, integrability, parallel_net, inverse_m, factorization});
    if (inverse_mu) worst = std::max(worst, *inverse_mu);
    return worst;
}

KoenigsReport verify_koenigs(const SampledNet& x, const SampledNet& z, const std::vector<Eigen::VectorXd>& nu) {
    require_compatible(x, z, "verify_koenigs");
    if (static_cast<int>(nu.size()) != x.curve_count()) throw DimensionMismatch("verify_koenigs: one nu per curve");
    const int count = x.grid.size();
    const double h = x.grid.step();
    for (const auto& v : nu) {
        if (v.size() != count) throw DimensionMismatch("verify_koenigs: nu samples");
        if (!(v.array().abs() > 0.0).all()) throw InvalidArgument("verify_koenigs: nu must not vanish");
    }
    KoenigsReport r;
    for (int i = 0; i < x.curve_count(); ++i) {
        for (int k = 0; k < count; ++k) {
            const Eigen::VectorXd target = -x.df[i].col(k) / (nu[i][k] * nu[i][k]);
            r.smooth = std::max(r.smooth, safe_ratio((z.df[i].col(k) - target).norm(), target.norm()));
        }
    }
    if (x.minkowski) r.inverse_mu = 0.0;
    for (int i = 0; i < x.edge_count(); ++i) {
        const int j = i + 1;
        const Eigen::MatrixXd dx = x.f[j] - x.f[i];
        const Eigen::MatrixXd dz = z.f[j] - z.f[i];
        const Eigen::MatrixXd dz_prime = numerics::differentiate(dz, h);
        const Eigen::VectorXd inv_nn = (nu[i].array() * nu[j].array()).inverse().matrix();
        const Eigen::VectorXd inv_nn_prime = numerics::differentiate(inv_nn, h);
        std::vector<double> inv_mu;
        for (int k = 0; k < count; ++k) {
            const Eigen::VectorXd target = dx.col(k) * inv_nn[k];
            r.edge = std::max(r.edge, safe_ratio((dz.col(k) - target).norm(), target.norm()));

            const Eigen::VectorXd d_of_prime = z.df[j].col(k) - z.df[i].col(k);
            const double iscale = std::max(z.df[i].col(k).norm(), z.df[j].col(k).norm());
            r.integrability = std::max(r.integrability, safe_ratio((dz_prime.col(k) - d_of_prime).norm(), iscale));

            const Eigen::VectorXd ti = x.df[i].col(k) / nu[i][k];
            const Eigen::VectorXd tj = x.df[j].col(k) / nu[j][k];
            const double sum_inv = 1.0 / nu[i][k] + 1.0 / nu[j][k];
            const Eigen::VectorXd lhs = inv_nn_prime[k] * dx.col(k) + sum_inv * (tj - ti);
            const double pscale = std::abs(inv_nn_prime[k]) * dx.col(k).norm() +
                                  (1.0 / std::abs(nu[i][k]) + 1.0 / std::abs(nu[j][k])) * (ti.norm() + tj.norm());
            r.parallel_net = std::max(r.parallel_net, safe_ratio(lhs.norm(), pscale));

            const double mi = x.inner(x.df[i].col(k), x.df[i].col(k)) / (nu[i][k] * nu[i][k]);
            const double mj = x.inner(x.df[j].col(k), x.df[j].col(k)) / (nu[j][k] * nu[j][k]);
            r.inverse_m = std::max(r.inverse_m, safe_ratio(std::abs(mj - mi), std::max(std::abs(mi), std::abs(mj))));

            if (x.minkowski) inv_mu.push_back(2.0 * x.inner(x.f[i].col(k), x.f[j].col(k)) * inv_nn[k]);

            const double ai = z.df[i].col(k).dot(x.df[i].col(k)) / x.df[i].col(k).squaredNorm();
            const double aj = z.df[j].col(k).dot(x.df[j].col(k)) / x.df[j].col(k).squaredNorm();
            const double alpha = dz.col(k).dot(dx.col(k)) / dx.col(k).squaredNorm();
            const double a2 = alpha * alpha;
            r.factorization =
                std::max(r.factorization, safe_ratio(std::abs(a2 - ai * aj), std::max(a2, std::abs(ai * aj))));
        }
        if (x.minkowski) {
            double mean = 0.0;
            for (double v : inv_mu) mean += v;
            mean /= static_cast<double>(inv_mu.size());
            r.inverse_mu = std::max(*r.inverse_mu, safe_ratio(spread(inv_mu), std::abs(mean)));
        }
    }
    return r;
}

std::vector<Eigen::VectorXd> koenigs_nu(const SemiDiscreteSurface& s) {
    if (!(s.m().array() > 0.0).all()) throw InvalidArgument("koenigs_nu: requires m > 0");
    std::vector<Eigen::VectorXd> out;
    double sign = 1.0;
    for (int i = 0; i < s.curve_count(); ++i) {
        if (i > 0 && s.mu()[static_cast<std::size_t>(i - 1)] > 0.0) sign = -sign;
        const auto& c = s.curve(i);
        out.push_back(sign * (s.m().array() * c.xprime().colwise().squaredNorm().transpose().array()).sqrt().matrix());
    }
    return out;
}

ConservedQuantity ConservedQuantity::linear(std::vector<Eigen::MatrixXd> z, const MinkVector& q) {
    ConservedQuantity cq;
    for (const auto& zi : z) {
        if (zi.rows() != q.size()) throw DimensionMismatch("ConservedQuantity: z and q dimensions differ");
        cq.q.push_back(q.replicate(1, zi.cols()));
    }
    cq.z = std::move(z);
    return cq;
}

double ConservedQuantityReport::max() const {
    return std::max({q_constancy, orthogonality, edge, smooth, zz_spread, zq_spread, qq_spread});
}

ConservedQuantityReport conserved_quantity_residual(const std::vector<LiftedCurve>& lifts,
                                                    const std::vector<double>& mu, const ConservedQuantity& cq) {
    if (cq.degree != 1) throw InvalidArgument("conserved_quantity_residual: only linear conserved quantities are supported");
    if (lifts.empty()) throw InvalidArgument("conserved_quantity_residual: no curves");
    if (cq.z.size() != lifts.size() || cq.q.size() != lifts.size()) {
        throw DimensionMismatch("conserved_quantity_residual: need z and q on every curve");
    }
    if (mu.size() + 1 != lifts.size()) throw DimensionMismatch("conserved_quantity_residual: one mu per edge");
    const Grid& grid = lifts.front().grid;
    const int count = grid.size();
    for (std::size_t i = 0; i < lifts.size(); ++i) {
        if (!(lifts[i].grid == grid)) throw DimensionMismatch("conserved_quantity_residual: grids differ");
        if (cq.z[i].rows() != lifts[i].xi.rows() || cq.z[i].cols() != count || cq.q[i].rows() != cq.z[i].rows() ||
            cq.q[i].cols() != count) {
            throw DimensionMismatch("conserved_quantity_residual: sample shape");
        }
    }
    ConservedQuantityReport r;
    const MinkVector q0 = cq.q.front().col(0);
    std::vector<double> zz, zq, qq;
    double h_sum = 0.0;
    for (std::size_t i = 0; i < lifts.size(); ++i) {
        const LiftedCurve& l = lifts[i];
        const Eigen::MatrixXd dz = numerics::differentiate(cq.z[i], grid.step());
        for (int k = 0; k < count; ++k) {
            const MinkVector z = cq.z[i].col(k);
            const MinkVector q = cq.q[i].col(k);
            const MinkVector xi = l.xi.col(k);
            const MinkVector dxi = l.dxi.col(k);
            const double scale = std::max(z.norm(), q.norm());
            r.q_constancy = std::max(r.q_constancy, safe_ratio((q - q0).norm(), q0.norm()));
            r.orthogonality = std::max(r.orthogonality, safe_ratio(std::abs(inner(z, xi)), z.norm() * xi.norm()));
            const MinkVector target =
                (2.0 / (l.m[k] * minkowski::norm2(dxi))) * (inner(q, xi) * dxi - inner(q, dxi) * xi);
            r.smooth = std::max(r.smooth, safe_ratio((dz.col(k) - target).norm(), scale));
            zz.push_back(inner(z, z));
            zq.push_back(2.0 * inner(z, q));
            qq.push_back(inner(q, q));
            h_sum -= inner(z, q);
        }
    }
    for (std::size_t i = 0; i + 1 < lifts.size(); ++i) {
        for (int k = 0; k < count; ++k) {
            const MinkVector xi = lifts[i].xi.col(k);
            const MinkVector xj = lifts[i + 1].xi.col(k);
            const MinkVector q = cq.q[i].col(k);
            const MinkVector target =
                (minkowski::line_projection(q, xi, xj) - minkowski::line_projection(q, xj, xi)) / mu[i];
            const MinkVector dz = cq.z[i + 1].col(k) - cq.z[i].col(k);
            const double scale = std::max({cq.z[i].col(k).norm(), cq.z[i + 1].col(k).norm(), q.norm()});
            r.edge = std::max(r.edge, safe_ratio((dz - target).norm(), scale));
        }
    }
    r.zz_spread = spread(zz);
    r.zq_spread = spread(zq);
    r.qq_spread = spread(qq);
    r.H = h_sum / static_cast<double>(zz.size());
    return r;
}

ConservedQuantityReport conserved_quantity_residual(const SemiDiscreteSurface& s, const ConservedQuantity& cq) {
    return conserved_quantity_residual(s.lifts(), s.mu(), cq);
}

double tangent_plane_defect(const SampledNet& x, const SampledNet& n, const MinkVector& q) {
    require_compatible(x, n, "tangent_plane_defect");
    double worst = 0.0;
    for (int i = 0; i < x.curve_count(); ++i) {
        for (int k = 0; k < x.grid.size(); ++k) {
            const MinkVector v = n.f[i].col(k);
            worst = std::max({worst, std::abs(inner(v, v) - 1.0), std::abs(inner(v, q)), std::abs(inner(v, x.f[i].col(k)))});
        }
    }
    return worst;
}

TangentPlaneCongruence TangentPlaneCongruence::make(const SampledNet& x, SampledNet n, const MinkVector& q, double tol) {
    if (!n.minkowski) throw InvalidArgument("TangentPlaneCongruence: expects a net in R^{n+1,1}");
    const double defect = tangent_plane_defect(x, n, q);
    if (defect > tol) {
        throw InvalidArgument("TangentPlaneCongruence: n is not a unit normal congruence (defect " +
                              std::to_string(defect) + ")");
    }
    return TangentPlaneCongruence{std::move(n)};
}

MeanCurvature mean_curvature(const SampledNet& x, const SampledNet& n, double tol) {
    require_compatible(x, n, "mean_curvature");
    if (!x.minkowski || !n.minkowski) throw InvalidArgument("mean_curvature: expects nets in R^{n+1,1}");
    const auto frame = minkowski::Frame::canonical(x.rows() - 2);
    for (int i = 0; i < x.curve_count(); ++i) {
        for (int k = 0; k < x.grid.size(); ++k) {
            if (std::abs(inner(x.f[i].col(k), frame.q) + 1.0) > 1e-9) {
                throw InvalidArgument("mean_curvature: expects a Euclidean lift with (x, q) = -1");
            }
        }
    }
    const MixedArea axx = mixed_area(x, x);
    const MixedArea axn = mixed_area(x, n);
    MeanCurvature out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    int samples = 0;
    for (int i = 0; i < x.edge_count(); ++i) {
        Eigen::VectorXd h(x.grid.size());
        for (int k = 0; k < x.grid.size(); ++k) {
            const TwoVector& a = axx.area[i][k];
            const TwoVector& b = axn.area[i][k];
            const double denom = induced_inner(a, a);
            if (std::abs(denom) <= 1e-12 * a.squaredNorm() || a.norm() == 0.0) {
                throw InvalidArgument("mean_curvature: degenerate mixed area on edge " + std::to_string(i) +
                                      " at s = " + std::to_string(x.grid.node(k)));
            }
            h[k] = -induced_inner(b, a) / denom;
            const double parallel = safe_ratio((b + h[k] * a).norm(), b.norm());
            if (parallel > tol) {
                throw InvalidArgument("mean_curvature: A(x, n) is not parallel to A(x, x) on edge " + std::to_string(i) +
                                      " at s = " + std::to_string(x.grid.node(k)) +
                                      " (residual " + std::to_string(parallel) + ")");
            }
            out.parallel = std::max(out.parallel, parallel);
            lo = std::min(lo, h[k]);
            hi = std::max(hi, h[k]);
            sum += h[k];
            ++samples;
        }
        out.H.push_back(std::move(h));
    }
    if (samples > 0) {
        out.value = sum / samples;
        out.spread = hi - lo;
    }
    return out;
}

CmcCertificate cmc_linear_cq(const SemiDiscreteSurface& s, const SampledNet& n, double H) {
    const SampledNet x = lifted_net(s);
    require_compatible(x, n, "cmc_linear_cq");
    const auto frame = minkowski::Frame::canonical(s.dim());
    SampledNet z{x.grid, {}, {}, true};
    for (int i = 0; i < x.curve_count(); ++i) {
        z.f.push_back(n.f[i] + H * x.f[i]);
        z.df.push_back(n.df[i] + H * x.df[i]);
    }
    CmcCertificate cert;
    cert.cq = ConservedQuantity::linear(z.f, frame.q);
    cert.report = conserved_quantity_residual(s, cert.cq);
    cert.curvature = mean_curvature(x, n);
    cert.mixed_area = is_christoffel_pair_mixed_area(x, z).residual;
    for (int i = 0; i < z.curve_count(); ++i) {
        for (int k = 0; k < z.grid.size(); ++k) {
            const MinkVector v = z.f[i].col(k);
            cert.unit = std::max(cert.unit, std::abs(inner(v, v) - 1.0));
            cert.H_agreement = std::max(cert.H_agreement, std::abs(H + inner(v, frame.q)));
        }
    }
    return cert;
}

}  // namespace isothermic::cmc
