#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wigner_opo/errors.hpp"
#include "wigner_opo/grid.hpp"
#include "wigner_opo/linearized.hpp"
#include "wigner_opo/rng.hpp"
#include "wigner_opo/steady_state.hpp"
#include "wigner_opo/types.hpp"

namespace wigner_opo {

/// The ten stationary second moments tracked throughout: six modal entries
/// and the four EPR combinations derived from them.
struct Moments10 {
    double x1sq = 0.0, y1sq = 0.0, x2sq = 0.0, y2sq = 0.0, x1x2 = 0.0, y1y2 = 0.0;
    double xpsq = 0.0, ypsq = 0.0, xmsq = 0.0, ymsq = 0.0;

    void derive_epr() {
        xpsq = 0.5 * (x1sq + x2sq) + x1x2;
        xmsq = 0.5 * (x1sq + x2sq) - x1x2;
        ypsq = 0.5 * (y1sq + y2sq) + y1y2;
        ymsq = 0.5 * (y1sq + y2sq) - y1y2;
    }
};

/// Second moments with per-entry error estimates. First moments vanish by
/// parity of the distribution and are asserted in tests, not computed.
struct MomentSet {
    Moments10 value;
    Moments10 error;
    double n_effective = 0.0;
};

/// MomentSet from linearized EPR variances (modal moments recovered from the
/// orthogonal EPR map; cross x-y moments vanish).
inline MomentSet from_epr_variances(const linearized::EprVariances& v) {
    MomentSet m;
    m.value.xpsq = v.xpsq;
    m.value.xmsq = v.xmsq;
    m.value.ypsq = v.ypsq;
    m.value.ymsq = v.ymsq;
    m.value.x1sq = m.value.x2sq = 0.5 * (v.xpsq + v.xmsq);
    m.value.y1sq = m.value.y2sq = 0.5 * (v.ypsq + v.ymsq);
    m.value.x1x2 = 0.5 * (v.xpsq - v.xmsq);
    m.value.y1y2 = 0.5 * (v.ypsq - v.ymsq);
    return m;
}

/// Second moments of the closed-form steady state by tensor-grid quadrature
/// in log-sum-exp form. Error estimate per entry: difference against a
/// half-resolution grid (the trapezoid rule converges much faster than that,
/// so this is conservative).
inline MomentSet quadrature_moments(const OpoParams& params, const GridSpec& grid) {
    const detail::GridSums fine = detail::grid_reduce(params, grid);
    detail::check_tail(fine, grid, params);

    auto to_moments = [](const detail::GridSums& s) {
        Moments10 m;
        m.x1sq = s.x1sq / s.z;
        m.y1sq = s.y1sq / s.z;
        m.x2sq = s.x2sq / s.z;
        m.y2sq = s.y2sq / s.z;
        m.x1x2 = s.x1x2 / s.z;
        m.y1y2 = s.y1y2 / s.z;
        m.derive_epr();
        return m;
    };

    GridSpec coarse = grid;
    coarse.points = std::max(16, grid.points / 2);
    if (coarse.points % 2 != 0) ++coarse.points;
    const Moments10 mf = to_moments(fine);
    const Moments10 mc = to_moments(detail::grid_reduce(params, coarse));

    MomentSet out;
    out.value = mf;
    out.error.x1sq = std::abs(mf.x1sq - mc.x1sq);
    out.error.y1sq = std::abs(mf.y1sq - mc.y1sq);
    out.error.x2sq = std::abs(mf.x2sq - mc.x2sq);
    out.error.y2sq = std::abs(mf.y2sq - mc.y2sq);
    out.error.x1x2 = std::abs(mf.x1x2 - mc.x1x2);
    out.error.y1y2 = std::abs(mf.y1y2 - mc.y1y2);
    out.error.xpsq = std::abs(mf.xpsq - mc.xpsq);
    out.error.xmsq = std::abs(mf.xmsq - mc.xmsq);
    out.error.ypsq = std::abs(mf.ypsq - mc.ypsq);
    out.error.ymsq = std::abs(mf.ymsq - mc.ymsq);
    out.n_effective = static_cast<double>(grid.points) * grid.points * grid.points * grid.points;
    return out;
}

namespace detail {

struct GaussComponent {
    Vec4 mean;
    Mat4 cov;
    Mat4 chol;     // lower Cholesky factor of cov
    Mat4 prec;     // cov^{-1}
    double log_det = 0.0;
};

inline GaussComponent make_component(const Vec4& mean, const Mat4& cov) {
    GaussComponent c;
    c.mean = mean;
    c.cov = cov;
    Eigen::LLT<Mat4> llt(cov);
    c.chol = llt.matrixL();
    c.prec = cov.inverse();
    c.log_det = 2.0 * c.chol.diagonal().array().log().sum();
    return c;
}

inline double log_density(const std::vector<GaussComponent>& mix, const Vec4& x) {
    constexpr double log_2pi = 1.83787706640934548356;
    double best = -1e300;
    std::vector<double> terms(mix.size());
    for (std::size_t k = 0; k < mix.size(); ++k) {
        const Vec4 d = x - mix[k].mean;
        terms[k] = -0.5 * d.dot(mix[k].prec * d) - 0.5 * mix[k].log_det - 2.0 * log_2pi;
        best = std::max(best, terms[k]);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - best);
    return best + std::log(s / static_cast<double>(mix.size()));
}

/// Radius of the diagonal mode of log_weight above threshold, by golden
/// section on x -> log_weight(x, 0, x, 0).
inline double diagonal_mode_radius(const OpoParams& params) {
    auto f = [&](double x) { return log_weight(PhasePoint{x, 0.0, x, 0.0}, params); };
    double a = 0.0, b = 2.0 * params.xstar() + 6.0;
    const double gr = 0.61803398874989484820;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
        if (f(c) > f(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    return 0.5 * (a + b);
}

inline Mat4 fd_hessian_logweight(const Vec4& p0, const OpoParams& params, double h = 1e-4) {
    Mat4 hess;
    auto f = [&](const Vec4& q) { return log_weight(PhasePoint(q), params); };
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            Vec4 ei = Vec4::Zero(), ej = Vec4::Zero();
            ei[i] = h;
            ej[j] = h;
            hess(i, j) = (f(p0 + ei + ej) - f(p0 + ei - ej) - f(p0 - ei + ej) + f(p0 - ei - ej)) /
                         (4.0 * h * h);
        }
    }
    return hess;
}

/// Proposal for the self-normalized importance sampler. Below and at
/// threshold: one Gaussian at the origin with the linearized covariance
/// (capped at mu = 0.95). Above threshold the stationary mass sits on the
/// counter-rotation ring through the distribution's diagonal mode, so the
/// proposal is a 12-component Gaussian ring mixture with covariances from
/// the local curvature; the flat ring direction gets a floored curvature.
inline std::vector<GaussComponent> build_proposal(const OpoParams& params, double scale) {
    std::vector<GaussComponent> mix;
    if (params.mu <= 1.0) {
        const double mu_c = std::min(params.mu, 0.95);
        const double anti = 1.0 / (1.0 - mu_c), sq = 1.0 / (1.0 + mu_c);
        Mat4 cov = Mat4::Zero();
        const double diag = 0.5 * (anti + sq), cross = 0.5 * (anti - sq);
        cov(0, 0) = cov(1, 1) = cov(2, 2) = cov(3, 3) = diag;
        cov(0, 2) = cov(2, 0) = cross;
        cov(1, 3) = cov(3, 1) = -cross;
        mix.push_back(make_component(Vec4::Zero(), cov * scale * scale));
        return mix;
    }
    const double rho = diagonal_mode_radius(params);
    const int n_ring = 12;
    for (int k = 0; k < n_ring; ++k) {
        const double phi = 2.0 * 3.14159265358979323846 * k / n_ring;
        const Vec4 center(rho * std::cos(phi), rho * std::sin(phi), rho * std::cos(phi),
                          -rho * std::sin(phi));
        const Mat4 prec_raw = -fd_hessian_logweight(center, params);
        Eigen::SelfAdjointEigenSolver<Mat4> es(prec_raw);
        Vec4 ev = es.eigenvalues();
        const double floor = 1.0 / (2.0 * rho * rho);  // flat ring direction
        for (int i = 0; i < 4; ++i) ev[i] = std::max(ev[i], floor);
        const Mat4 cov =
            es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
        mix.push_back(make_component(center, cov * scale * scale));
    }
    return mix;
}

}  // namespace detail

/// Self-normalized importance sampling of the steady-state second moments
/// (the unknown normalization constant cancels). Standard errors come from
/// 32 batch means; throws EffectiveSampleTooSmall if the effective sample
/// size drops under 1% of n_samples (proposal mismatch).
inline MomentSet importance_moments(const OpoParams& params, std::size_t n_samples,
                                    std::uint64_t seed, double proposal_scale = 1.2) {
    params.require_valid();
    if (n_samples < 10000)
        throw std::invalid_argument("importance_moments: need n_samples >= 1e4");

    const std::vector<detail::GaussComponent> mix = detail::build_proposal(params, proposal_scale);

    constexpr int kBatches = 32;
    constexpr int kQ = 10;
    // per batch: sum of weights and weighted sums for the ten moments
    std::vector<std::array<double, kQ + 1>> batch(kBatches);
    for (auto& b : batch) b.fill(0.0);
    std::vector<double> log_ratios(n_samples);

    // Pass 1: draw points, record log weight ratios to stabilize the scale.
    std::vector<Vec4> pts(n_samples);
    {
        NormalRng rng(derive_trajectory_seed(seed, 0x49535457ULL));
        double z[4];
        for (std::size_t i = 0; i < n_samples; ++i) {
            const std::size_t k = i % mix.size();
            rng.fill_normal(z, 4);
            const Vec4 zv(z[0], z[1], z[2], z[3]);
            const Vec4 x = mix[k].mean + mix[k].chol * zv;
            pts[i] = x;
            log_ratios[i] =
                log_weight(PhasePoint(x), params) - detail::log_density(mix, x);
        }
    }
    double lmax = -1e300;
    for (double lr : log_ratios) lmax = std::max(lmax, lr);

    double sum_w = 0.0, sum_w2 = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double w = std::exp(log_ratios[i] - lmax);
        sum_w += w;
        sum_w2 += w * w;
        const Vec4& x = pts[i];
        auto& b = batch[i % kBatches];
        const double q[kQ] = {x[0] * x[0],
                              x[1] * x[1],
                              x[2] * x[2],
                              x[3] * x[3],
                              x[0] * x[2],
                              x[1] * x[3],
                              0.5 * (x[0] + x[2]) * (x[0] + x[2]),
                              0.5 * (x[1] + x[3]) * (x[1] + x[3]),
                              0.5 * (x[0] - x[2]) * (x[0] - x[2]),
                              0.5 * (x[1] - x[3]) * (x[1] - x[3])};
        b[0] += w;
        for (int q_i = 0; q_i < kQ; ++q_i) b[q_i + 1] += w * q[q_i];
    }

    const double ess = sum_w * sum_w / sum_w2;
    if (ess < 0.01 * static_cast<double>(n_samples))
        throw EffectiveSampleTooSmall(ess, 0.01, n_samples);

    double total[kQ + 1] = {};
    for (const auto& b : batch)
        for (int j = 0; j <= kQ; ++j) total[j] += b[j];

    MomentSet out;
    double* vals[kQ] = {&out.value.x1sq, &out.value.y1sq, &out.value.x2sq, &out.value.y2sq,
                        &out.value.x1x2, &out.value.y1y2, &out.value.xpsq, &out.value.ypsq,
                        &out.value.xmsq, &out.value.ymsq};
    double* errs[kQ] = {&out.error.x1sq, &out.error.y1sq, &out.error.x2sq, &out.error.y2sq,
                        &out.error.x1x2, &out.error.y1y2, &out.error.xpsq, &out.error.ypsq,
                        &out.error.xmsq, &out.error.ymsq};
    for (int q_i = 0; q_i < kQ; ++q_i) {
        const double mean = total[q_i + 1] / total[0];
        *vals[q_i] = mean;
        // spread of the per-batch self-normalized estimates
        double var = 0.0;
        int used = 0;
        for (const auto& b : batch) {
            if (b[0] <= 0.0) continue;
            const double d = b[q_i + 1] / b[0] - mean;
            var += d * d;
            ++used;
        }
        *errs[q_i] = used > 1 ? std::sqrt(var / (used * (used - 1.0))) : 0.0;
    }
    out.n_effective = ess;
    return out;
}

struct DuanSimon {
    double S = 2.0;
    bool entangled = false;
};

/// Duan-Simon inseparability criterion: S = <x-^2> + <y+^2>, entangled iff
/// S < 2 (the vacuum sits exactly on the boundary in these units).
inline DuanSimon duan_simon(const MomentSet& m) {
    const double s = m.value.xmsq + m.value.ypsq;
    return DuanSimon{s, s < 2.0};
}

struct PhotonNumbers {
    double n1 = 0.0, n2 = 0.0;
    bool clamped = false;
};

/// Per-mode mean photon numbers with the symmetric-ordering correction,
/// n = (<x^2> + <y^2> - 2)/4. Slightly negative values (>= -0.01) at vacuum
/// are numerical and get clamped to zero with the flag set.
inline PhotonNumbers mean_photon(const MomentSet& m) {
    PhotonNumbers out;
    out.n1 = 0.25 * (m.value.x1sq + m.value.y1sq - 2.0);
    out.n2 = 0.25 * (m.value.x2sq + m.value.y2sq - 2.0);
    if (out.n1 < 0.0 || out.n2 < 0.0) {
        out.clamped = true;
        out.n1 = std::max(out.n1, 0.0);
        out.n2 = std::max(out.n2, 0.0);
    }
    return out;
}

}  // namespace wigner_opo
