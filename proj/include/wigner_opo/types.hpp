#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace wigner_opo {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat46 = Eigen::Matrix<double, 4, 6>;
using Complex = std::complex<double>;

/// Dimensionless control parameters of the nondegenerate OPO.
///
/// mu is the normalized pump amplitude (threshold at mu = 1), g2 the squared
/// nonlinear coupling, gamma the signal/idler damping rate (sets the time
/// unit), gamma0_ratio the pump-to-signal damping ratio of the full
/// three-mode model (adiabatic regime for gamma0_ratio >> 1).
struct OpoParams {
    double mu = 0.5;
    double g2 = 0.01;
    double gamma = 1.0;
    double gamma0_ratio = 100.0;

    double g() const { return std::sqrt(g2); }
    double gamma0() const { return gamma * gamma0_ratio; }

    /// chi in terms of (g, gamma, gamma0): g = chi / sqrt(2 gamma gamma0).
    double chi() const { return g() * std::sqrt(2.0 * gamma * gamma0()); }

    /// Pump drive amplitude consistent with mu (taken real and positive):
    /// mu = chi E / (gamma gamma0).
    double pump_drive() const { return mu * gamma * gamma0() / chi(); }

    /// Deterministic above-threshold quadrature amplitude, zero at or below
    /// threshold: x*^2 = 2 (mu - 1) / g2.
    double xstar() const { return mu > 1.0 ? std::sqrt(2.0 * (mu - 1.0) / g2) : 0.0; }

    bool valid() const {
        return mu >= 0.0 && g2 > 0.0 && gamma > 0.0 && gamma0_ratio >= 1.0;
    }

    void require_valid() const {
        if (!valid()) throw std::invalid_argument("OpoParams: need mu >= 0, g2 > 0, gamma > 0, gamma0_ratio >= 1");
    }
};

/// Quadrature phase-space point X = (x1, y1, x2, y2).
struct PhasePoint {
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;

    PhasePoint() = default;
    PhasePoint(double x1, double y1, double x2, double y2) : x1(x1), y1(y1), x2(x2), y2(y2) {}
    explicit PhasePoint(const Vec4& v) : x1(v[0]), y1(v[1]), x2(v[2]), y2(v[3]) {}

    Vec4 vec() const { return Vec4(x1, y1, x2, y2); }
    double r1_sq() const { return x1 * x1 + y1 * y1; }
    double r2_sq() const { return x2 * x2 + y2 * y2; }
    double r_sq() const { return r1_sq() + r2_sq(); }

    bool finite() const {
        return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2);
    }
};

/// Combined (EPR) quadratures x+- = (x1 +- x2)/sqrt(2), y+- likewise.
struct EprPoint {
    double xp = 0.0, yp = 0.0, xm = 0.0, ym = 0.0;
};

inline EprPoint to_epr(const PhasePoint& p) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return EprPoint{(p.x1 + p.x2) * inv_sqrt2, (p.y1 + p.y2) * inv_sqrt2,
                    (p.x1 - p.x2) * inv_sqrt2, (p.y1 - p.y2) * inv_sqrt2};
}

inline PhasePoint from_epr(const EprPoint& e) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return PhasePoint{(e.xp + e.xm) * inv_sqrt2, (e.yp + e.ym) * inv_sqrt2,
                      (e.xp - e.xm) * inv_sqrt2, (e.yp - e.ym) * inv_sqrt2};
}

/// Rotating-frame complex amplitudes of the full three-mode model
/// (pump, signal, idler).
struct ThreeModeState {
    Complex a0{0.0, 0.0};
    Complex a1{0.0, 0.0};
    Complex a2{0.0, 0.0};

    bool finite() const {
        auto ok = [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
        return ok(a0) && ok(a1) && ok(a2);
    }

    /// Signal/idler quadratures (x = a + a*, y = -i(a - a*)).
    PhasePoint quadratures() const {
        return PhasePoint{2.0 * a1.real(), 2.0 * a1.imag(), 2.0 * a2.real(), 2.0 * a2.imag()};
    }
};

}  // namespace wigner_opo
