#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wigner_opo/errors.hpp"
#include "wigner_opo/model.hpp"
#include "wigner_opo/moments.hpp"
#include "wigner_opo/parallel.hpp"
#include "wigner_opo/rng.hpp"
#include "wigner_opo/types.hpp"

namespace wigner_opo {

enum class SdeModel { Reduced, Full };

/// Integration controls. All times are in units of 1/gamma. t_burn < 0
/// selects the default burn-in: 20 below threshold, 50 in the critical
/// window 0.9 <= mu <= 1.1 (critical slowing down).
struct IntegratorConfig {
    double dt = 0.01;
    double t_burn = -1.0;
    double t_total = 200.0;
    long n_traj = 200;
    std::uint64_t seed = 12345;
    double record_stride = 0.5;  // limits autocorrelation in the error bars

    double resolve_burn(double mu) const {
        if (t_burn >= 0.0) return t_burn;
        return (mu >= 0.9 && mu <= 1.1) ? 50.0 : 20.0;
    }

    void require_valid(SdeModel model, const OpoParams& params) const {
        if (!(dt > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be positive");
        if (n_traj < 1) throw std::invalid_argument("IntegratorConfig: need n_traj >= 1");
        const double burn = resolve_burn(params.mu);
        if (!(t_total > burn)) throw std::invalid_argument("IntegratorConfig: t_total must exceed t_burn");
        if (model == SdeModel::Full) {
            const double bound = 0.1 / std::max(1.0, params.gamma0_ratio);
            if (dt > bound)
                throw std::invalid_argument("IntegratorConfig: full model needs dt <= 0.1 / (gamma0/gamma) = " +
                                            std::to_string(bound));
        }
    }
};

/// One Euler-Maruyama (Ito) step of the reduced two-mode SDE:
/// p' = p + A(p) dt + B(p) w sqrt(dt), w six standard normals.
inline PhasePoint em_step_reduced(const PhasePoint& p, const OpoParams& params, double dt,
                                  const double w[6]) {
    const double mu = params.mu, h = 0.5 * params.g2, gam = params.gamma;
    const double r1s = p.r1_sq(), r2s = p.r2_sq();
    const double sq = std::sqrt(2.0 * gam * dt);
    const double c = params.g() / std::sqrt(2.0);

    PhasePoint out;
    out.x1 = p.x1 + gam * dt * (-p.x1 + mu * p.x2 - h * p.x1 * r2s) +
             sq * (w[0] + c * (p.x2 * w[4] + p.y2 * w[5]));
    out.y1 = p.y1 + gam * dt * (-p.y1 - mu * p.y2 - h * p.y1 * r2s) +
             sq * (w[1] + c * (-p.y2 * w[4] + p.x2 * w[5]));
    out.x2 = p.x2 + gam * dt * (-p.x2 + mu * p.x1 - h * p.x2 * r1s) +
             sq * (w[2] + c * (p.x1 * w[4] + p.y1 * w[5]));
    out.y2 = p.y2 + gam * dt * (-p.y2 - mu * p.y1 - h * p.y2 * r1s) +
             sq * (w[3] + c * (-p.y1 * w[4] + p.x1 * w[5]));
    if (!out.finite()) throw NonFinite("em_step_reduced: non-finite state (dt too large?)");
    return out;
}

/// One Euler-Maruyama step of the full three-mode SDE. Each mode receives an
/// independent complex noise scaled so its quadratures carry the same
/// diffusion as in the reduced model.
inline ThreeModeState em_step_full(const ThreeModeState& s, const OpoParams& params, Complex E,
                                   double dt, const double w[6]) {
    const double gam = params.gamma, gam0 = params.gamma0(), chi = params.chi();
    const double s0 = std::sqrt(0.5 * gam0 * dt);
    const double s12 = std::sqrt(0.5 * gam * dt);
    ThreeModeState out;
    out.a0 = s.a0 + dt * (-gam0 * s.a0 + E - chi * s.a1 * s.a2) + s0 * Complex(w[0], w[1]);
    out.a1 = s.a1 + dt * (-gam * s.a1 + chi * s.a0 * std::conj(s.a2)) + s12 * Complex(w[2], w[3]);
    out.a2 = s.a2 + dt * (-gam * s.a2 + chi * s.a0 * std::conj(s.a1)) + s12 * Complex(w[4], w[5]);
    if (!out.finite()) throw NonFinite("em_step_full: non-finite state (dt too large?)");
    return out;
}

struct EnsembleMoments {
    MomentSet moments;
    long n_traj = 0;
    double t_averaged = 0.0;  // per-trajectory averaging window, units 1/gamma
    std::vector<std::string> warnings;
};

/// Time-and-ensemble averaged stationary second moments after burn-in.
/// Standard errors come from the between-trajectory spread. Deterministic
/// for a fixed seed: each trajectory derives its own stream from
/// (seed, index) and the reduction runs pairwise in index order, so thread
/// count and execution order do not matter.
inline EnsembleMoments simulate_ensemble(const OpoParams& params, const IntegratorConfig& cfg,
                                         SdeModel model) {
    params.require_valid();
    cfg.require_valid(model, params);

    const double dt_phys = cfg.dt / params.gamma;
    const double burn = cfg.resolve_burn(params.mu);
    const long n_burn = std::lround(burn / cfg.dt);
    const long n_run = std::lround((cfg.t_total - burn) / cfg.dt);
    const long stride = std::max(1L, std::lround(cfg.record_stride / cfg.dt));
    const long n_traj = cfg.n_traj;

    const Complex E(params.pump_drive(), 0.0);
    const double xstar = params.xstar();
    const bool above = params.mu > 1.0;

    std::vector<std::array<double, 10>> traj_mean(n_traj);

    parallel_for(static_cast<std::size_t>(n_traj), [&](std::size_t k) {
        NormalRng rng(derive_trajectory_seed(cfg.seed, k));
        double w[6];
        std::array<double, 10> acc{};
        long n_rec = 0;
        const double sign = above ? (rng.uniform() < 0.5 ? 1.0 : -1.0) : 1.0;

        auto record = [&](const PhasePoint& p) {
            acc[0] += p.x1 * p.x1;
            acc[1] += p.y1 * p.y1;
            acc[2] += p.x2 * p.x2;
            acc[3] += p.y2 * p.y2;
            acc[4] += p.x1 * p.x2;
            acc[5] += p.y1 * p.y2;
            acc[6] += 0.5 * (p.x1 + p.x2) * (p.x1 + p.x2);
            acc[7] += 0.5 * (p.y1 + p.y2) * (p.y1 + p.y2);
            acc[8] += 0.5 * (p.x1 - p.x2) * (p.x1 - p.x2);
            acc[9] += 0.5 * (p.y1 - p.y2) * (p.y1 - p.y2);
            ++n_rec;
        };

        try {
            if (model == SdeModel::Reduced) {
                double z[4];
                rng.fill_normal(z, 4);
                PhasePoint p{z[0] + sign * xstar, z[1], z[2] + sign * xstar, z[3]};
                for (long i = 0; i < n_burn; ++i) {
                    rng.fill_normal(w, 6);
                    p = em_step_reduced(p, params, dt_phys, w);
                }
                for (long i = 0; i < n_run; ++i) {
                    rng.fill_normal(w, 6);
                    p = em_step_reduced(p, params, dt_phys, w);
                    if (i % stride == 0) record(p);
                }
            } else {
                double z[6];
                rng.fill_normal(z, 6);
                // vacuum Wigner spread (variance 1/4 per real component) on
                // top of the deterministic operating point
                ThreeModeState s;
                const double a0_det = above ? params.gamma / params.chi()
                                            : params.pump_drive() / params.gamma0();
                const double a12_det = above ? sign * 0.5 * xstar : 0.0;
                s.a0 = Complex(a0_det + 0.5 * z[0], 0.5 * z[1]);
                s.a1 = Complex(a12_det + 0.5 * z[2], 0.5 * z[3]);
                s.a2 = Complex(a12_det + 0.5 * z[4], 0.5 * z[5]);
                for (long i = 0; i < n_burn; ++i) {
                    rng.fill_normal(w, 6);
                    s = em_step_full(s, params, E, dt_phys, w);
                }
                for (long i = 0; i < n_run; ++i) {
                    rng.fill_normal(w, 6);
                    s = em_step_full(s, params, E, dt_phys, w);
                    if (i % stride == 0) record(s.quadratures());
                }
            }
        } catch (const NonFinite& e) {
            throw NonFinite(e.what(), static_cast<long>(k));
        }
        for (double& a : acc) a /= static_cast<double>(n_rec);
        traj_mean[k] = acc;
    });

    // pairwise mean and between-trajectory standard error per entry
    EnsembleMoments out;
    std::vector<double> col(n_traj);
    std::array<double, 10> mean{}, sem{};
    for (int q = 0; q < 10; ++q) {
        for (long k = 0; k < n_traj; ++k) col[k] = traj_mean[k][q];
        mean[q] = pairwise_sum(col) / static_cast<double>(n_traj);
        for (long k = 0; k < n_traj; ++k) {
            const double d = traj_mean[k][q] - mean[q];
            col[k] = d * d;
        }
        sem[q] = n_traj > 1 ? std::sqrt(pairwise_sum(col) /
                                        (static_cast<double>(n_traj) * (n_traj - 1.0)))
                            : 0.0;
    }
    Moments10& v = out.moments.value;
    Moments10& e = out.moments.error;
    v.x1sq = mean[0];
    v.y1sq = mean[1];
    v.x2sq = mean[2];
    v.y2sq = mean[3];
    v.x1x2 = mean[4];
    v.y1y2 = mean[5];
    v.xpsq = mean[6];
    v.ypsq = mean[7];
    v.xmsq = mean[8];
    v.ymsq = mean[9];
    e.x1sq = sem[0];
    e.y1sq = sem[1];
    e.x2sq = sem[2];
    e.y2sq = sem[3];
    e.x1x2 = sem[4];
    e.y1y2 = sem[5];
    e.xpsq = sem[6];
    e.ypsq = sem[7];
    e.xmsq = sem[8];
    e.ymsq = sem[9];
    out.moments.n_effective = static_cast<double>(n_traj);
    out.n_traj = n_traj;
    out.t_averaged = cfg.t_total - burn;

    if (params.mu < 1.0) {
        const double relax = 1.0 / std::abs(1.0 - params.mu);
        if (burn < 5.0 * relax)
            out.warnings.push_back("Unconverged: burn-in " + std::to_string(burn) +
                                   " shorter than 5 relaxation times " + std::to_string(5.0 * relax));
    }
    return out;
}

}  // namespace wigner_opo
