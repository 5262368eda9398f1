#pragma once

#include <cmath>

#include "wigner_opo/errors.hpp"
#include "wigner_opo/types.hpp"

namespace wigner_opo::linearized {

/// Steady-state second moments of the EPR quadratures.
struct EprVariances {
    double xpsq = 1.0, xmsq = 1.0, ypsq = 1.0, ymsq = 1.0;
};

/// Below-threshold linearized variances:
/// <x+^2> = <y-^2> = 1/(1-mu), <x-^2> = <y+^2> = 1/(1+mu). Diverges at
/// threshold, which is the known failure of the linearization.
inline EprVariances variances_below(double mu) {
    if (mu < 0.0 || mu >= 1.0)
        throw DomainError("variances_below requires 0 <= mu < 1 (linearized theory diverges at threshold)");
    const double anti = 1.0 / (1.0 - mu);
    const double sq = 1.0 / (1.0 + mu);
    return EprVariances{anti, sq, sq, anti};
}

/// Above-threshold linearized variances:
/// <x+^2> = <y-^2> = 1/(mu-1) + (mu-1)/g2, <x-^2> = <y+^2> = 1/2.
inline EprVariances variances_above(double mu, double g2) {
    if (mu <= 1.0) throw DomainError("variances_above requires mu > 1");
    if (g2 <= 0.0) throw DomainError("variances_above requires g2 > 0");
    const double anti = 1.0 / (mu - 1.0) + (mu - 1.0) / g2;
    return EprVariances{anti, 0.5, 0.5, anti};
}

/// Exponent of the below-threshold Gaussian approximation W_L in EPR
/// variables: -1/2 [(1+mu)(x-^2 + y+^2) + (1-mu)(x+^2 + y-^2)].
inline double gaussian_logweight(const EprPoint& e, double mu) {
    if (mu < 0.0 || mu >= 1.0)
        throw DomainError("gaussian_logweight is normalizable only for 0 <= mu < 1");
    return -0.5 * ((1.0 + mu) * (e.xm * e.xm + e.yp * e.yp) +
                   (1.0 - mu) * (e.xp * e.xp + e.ym * e.ym));
}

}  // namespace wigner_opo::linearized
