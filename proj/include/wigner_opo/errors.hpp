#pragma once

#include <stdexcept>
#include <string>

namespace wigner_opo {

/// Grid bound too small: the boundary shell of the integration box holds a
/// non-negligible share of the total mass.
struct TailTooHeavy : std::runtime_error {
    explicit TailTooHeavy(const std::string& what) : std::runtime_error(what) {}
};

/// A trajectory produced a non-finite coordinate (usually the time step is
/// too large for the current noise amplitude).
struct NonFinite : std::runtime_error {
    NonFinite(const std::string& what, long trajectory)
        : std::runtime_error(what + " (trajectory " + std::to_string(trajectory) + ")"),
          trajectory_index(trajectory) {}
    explicit NonFinite(const std::string& what) : std::runtime_error(what), trajectory_index(-1) {}
    long trajectory_index;
};

/// Importance-sampling proposal mismatch: effective sample size collapsed.
struct EffectiveSampleTooSmall : std::runtime_error {
    EffectiveSampleTooSmall(double ess, double floor_frac, std::size_t n)
        : std::runtime_error("effective sample size " + std::to_string(ess) + " below " +
                             std::to_string(floor_frac) + " * " + std::to_string(n)),
          ess(ess) {}
    double ess;
};

/// Peak counting on a constant field is meaningless.
struct DegenerateField : std::runtime_error {
    explicit DegenerateField(const std::string& what) : std::runtime_error(what) {}
};

/// Parameter outside the validity domain of a closed-form expression
/// (e.g. the linearized variances at or beyond threshold).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace wigner_opo
