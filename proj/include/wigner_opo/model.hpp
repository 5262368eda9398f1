#pragma once

#include <Eigen/Dense>

#include "wigner_opo/types.hpp"

namespace wigner_opo {

/// Deterministic drift A(X) of the reduced two-mode quadrature SDE,
/// dX/dt = A + B xi(t).
inline Vec4 drift(const PhasePoint& p, const OpoParams& params) {
    const double mu = params.mu, h = 0.5 * params.g2, gam = params.gamma;
    const double r1s = p.r1_sq(), r2s = p.r2_sq();
    return gam * Vec4(-p.x1 + mu * p.x2 - h * p.x1 * r2s,
                      -p.y1 - mu * p.y2 - h * p.y1 * r2s,
                      -p.x2 + mu * p.x1 - h * p.x2 * r1s,
                      -p.y2 - mu * p.y1 - h * p.y2 * r1s);
}

/// Noise matrix B(X), 4x6: columns 1-4 carry the signal/idler vacuum noise,
/// columns 5-6 the pump noise fed through the nonlinearity.
inline Mat46 noise_matrix(const PhasePoint& p, const OpoParams& params) {
    const double s = std::sqrt(2.0 * params.gamma);
    const double c = params.g() / std::sqrt(2.0);
    Mat46 b = Mat46::Zero();
    b.block<4, 4>(0, 0) = Mat4::Identity();
    b(0, 4) = c * p.x2;
    b(0, 5) = c * p.y2;
    b(1, 4) = -c * p.y2;
    b(1, 5) = c * p.x2;
    b(2, 4) = c * p.x1;
    b(2, 5) = c * p.y1;
    b(3, 4) = -c * p.y1;
    b(3, 5) = c * p.x1;
    return s * b;
}

/// Diffusion matrix D = B B^T = 2 gamma (I + (g2/2) S). S has eigenvalues
/// {r^2, r^2, 0, 0}, so D is symmetric with min eigenvalue 2 gamma.
inline Mat4 diffusion(const PhasePoint& p, const OpoParams& params) {
    const double r1s = p.r1_sq(), r2s = p.r2_sq();
    const double u = p.x1 * p.x2 + p.y1 * p.y2;
    const double v = p.x1 * p.y2 - p.y1 * p.x2;
    Mat4 s;
    s << r2s, 0.0, u, v,
         0.0, r2s, -v, u,
         u, -v, r1s, 0.0,
         v, u, 0.0, r1s;
    return 2.0 * params.gamma * (Mat4::Identity() + 0.5 * params.g2 * s);
}

/// Row divergence of D: (div D)_i = sum_j dD_ij/dX_j. The entries of D are
/// quadratic in X, so this is exact: div D = 2 gamma g2 X.
inline Vec4 diffusion_divergence(const PhasePoint& p, const OpoParams& params) {
    return 2.0 * params.gamma * params.g2 * p.vec();
}

/// Gradient of the effective stationary potential, Z = -D^{-1} (2A - div D),
/// so that the steady state is W ~ exp(-int Z . dX). In the g -> 0 limit
/// Z reduces to -A/gamma (the Ornstein-Uhlenbeck potential gradient).
inline Vec4 potential_gradient(const PhasePoint& p, const OpoParams& params) {
    const Vec4 rhs = 2.0 * drift(p, params) - diffusion_divergence(p, params);
    return -diffusion(p, params).partialPivLu().solve(rhs);
}

/// Deterministic part of the full three-mode SDEs in the rotating frame.
/// Every mode is damped on its own amplitude; E is the coherent pump drive.
inline void three_mode_drift(const ThreeModeState& s, const OpoParams& params, Complex E,
                             Complex out[3]) {
    const double gam = params.gamma, gam0 = params.gamma0(), chi = params.chi();
    out[0] = -gam0 * s.a0 + E - chi * s.a1 * s.a2;
    out[1] = -gam * s.a1 + chi * s.a0 * std::conj(s.a2);
    out[2] = -gam * s.a2 + chi * s.a0 * std::conj(s.a1);
}

}  // namespace wigner_opo
