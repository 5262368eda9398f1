#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wigner_opo/grid.hpp"
#include "wigner_opo/linearized.hpp"
#include "wigner_opo/moments.hpp"
#include "wigner_opo/sde.hpp"

namespace wigner_opo {

enum class Method { Linearized, Quadrature, Importance, Sde };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Linearized: return "linearized";
        case Method::Quadrature: return "quadrature";
        case Method::Importance: return "importance";
        case Method::Sde: return "sde";
    }
    return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
    if (s == "linearized") return Method::Linearized;
    if (s == "quadrature") return Method::Quadrature;
    if (s == "importance") return Method::Importance;
    if (s == "sde") return Method::Sde;
    return std::nullopt;
}

struct SweepOptions {
    int points = 96;
    double bound = 0.0;  // 0 = default grid policy per mu
    std::size_t n_samples = 200000;
    IntegratorConfig sde_cfg{};
    SdeModel sde_model = SdeModel::Reduced;
};

struct SweepRow {
    double mu = 0.0;
    Method method = Method::Quadrature;
    bool ok = false;
    MomentSet moments;
    std::string error;
};

/// One MomentSet per mu; a failed row carries its error message instead of
/// aborting the sweep (the linearized method genuinely diverges at mu = 1).
inline std::vector<SweepRow> variance_sweep(const OpoParams& base, const std::vector<double>& mu_list,
                                            Method method, const SweepOptions& opt = {}) {
    if (mu_list.empty()) throw std::invalid_argument("variance_sweep: empty mu list");
    std::vector<SweepRow> rows;
    rows.reserve(mu_list.size());
    for (double mu : mu_list) {
        SweepRow row;
        row.mu = mu;
        row.method = method;
        OpoParams params = base;
        params.mu = mu;
        try {
            switch (method) {
                case Method::Linearized:
                    row.moments = from_epr_variances(mu < 1.0 ? linearized::variances_below(mu)
                                                              : linearized::variances_above(mu, params.g2));
                    break;
                case Method::Quadrature: {
                    GridSpec grid = default_grid(params, opt.points);
                    if (opt.bound > 0.0) grid.bound = opt.bound;
                    row.moments = quadrature_moments(params, grid);
                    break;
                }
                case Method::Importance:
                    row.moments = importance_moments(params, opt.n_samples, opt.sde_cfg.seed);
                    break;
                case Method::Sde:
                    row.moments = simulate_ensemble(params, opt.sde_cfg, opt.sde_model).moments;
                    break;
            }
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace wigner_opo
