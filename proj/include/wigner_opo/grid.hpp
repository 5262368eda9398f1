#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wigner_opo/types.hpp"

namespace wigner_opo {

/// Truncated tensor-product box [-bound, bound]^4 with `points` trapezoid
/// nodes per axis. `points` must be even so the node set is symmetric under
/// X -> -X without a node at the origin.
struct GridSpec {
    double bound = 6.0;
    int points = 96;
    double tail_epsilon = 1e-7;  // max allowed boundary-shell mass fraction

    void require_valid() const {
        if (!(bound > 0.0)) throw std::invalid_argument("GridSpec: bound must be positive");
        if (points < 16) throw std::invalid_argument("GridSpec: need at least 16 points per axis");
        if (points % 2 != 0) throw std::invalid_argument("GridSpec: points must be even");
        if (!(tail_epsilon > 0.0)) throw std::invalid_argument("GridSpec: tail_epsilon must be positive");
    }

    double step() const { return 2.0 * bound / (points - 1); }

    std::vector<double> axis() const {
        std::vector<double> xs(points);
        for (int i = 0; i < points; ++i) xs[i] = -bound + step() * i;
        return xs;
    }

    /// Per-node trapezoid weights (step included, halved at the endpoints).
    std::vector<double> weights() const {
        std::vector<double> w(points, step());
        w.front() *= 0.5;
        w.back() *= 0.5;
        return w;
    }
};

/// Default grid policy: covers the Gaussian bulk below threshold and the
/// displaced peaks above. The linearized standard deviation is capped at
/// mu = 0.95 to stay clear of the threshold divergence.
inline GridSpec default_grid(const OpoParams& params, int points = 96) {
    const double mu_capped = std::min(params.mu, 0.95);
    const double sigma_lin = 1.0 / std::sqrt(1.0 - mu_capped);
    const double bound = std::max(6.0, 1.5 * params.xstar() + 6.0 * sigma_lin);
    return GridSpec{bound, points};
}

}  // namespace wigner_opo
