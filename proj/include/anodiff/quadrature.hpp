#pragma once

#include "grid.hpp"
#include "kernels.hpp"
#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace anodiff {

/// Power-law exponents (near 0, near infinity) of the diffusion-coefficient
/// integrand in the substituted variable w:
///   heavy tail:  |w|^(2-beta) / (1 + w^2)
///   degenerate:  |w|^(-2/(2+beta)) / (1 + w^2)
struct KappaExponents {
    double at_zero;
    double at_infinity;
};

inline KappaExponents kappa_exponents(const ModelCase& model) {
    const double b = model.beta();
    if (model.kind() == CaseKind::HeavyTail) return {2.0 - b, -b};
    const double e = -2.0 / (2.0 + b);
    return {e, e - 2.0};
}

/// Substituted grid whose grading makes the kappa integrand behave like u and
/// (1-u) at the two ends of the unit interval, i.e. second-order midpoint error.
inline SubstitutedGrid make_substituted_grid(const ModelCase& model, double scale, std::size_t count) {
    const auto e = kappa_exponents(model);
    const double p = std::clamp(2.0 / (e.at_zero + 1.0), 1.0, 16.0);
    const double q = std::clamp(2.0 / (-e.at_infinity - 1.0), 1.0, 16.0);
    return SubstitutedGrid(scale, count, p, q);
}

/// Anomalous diffusion coefficient on the substituted grid (e = 1, d = 1).
inline double kappa(const ModelCase& model, const SubstitutedGrid& grid) {
    const auto e = kappa_exponents(model);
    const double integral =
        grid.even_bracket([&](double w) { return std::pow(w, e.at_zero) / (1.0 + w * w); });
    if (model.kind() == CaseKind::HeavyTail) return model.normalization() * integral;
    // M(0) nu0^(1-alpha) / (2+beta) times the bracket
    return model.normalization() * std::pow(model.nu0(), 1.0 - model.alpha()) / (2.0 + model.beta()) *
           integral;
}

/// Velocity point v(w) > 0 and Jacobian |dv/dw| for the substitution
///   heavy tail:  w = eps lambda |k| v
///   degenerate:  w = eps |k| v / nu(v)
/// evaluated at w > 0 (both maps are odd).
struct InverseMap {
    double v;
    double jacobian;
};

inline InverseMap inverse_substitution(const ModelCase& model, double w, double k_abs, double eps,
                                       double lambda_heavy) {
    if (model.kind() == CaseKind::HeavyTail) {
        const double s = eps * lambda_heavy * k_abs;
        return {w / s, 1.0 / s};
    }
    const double b = model.beta();
    const double v = std::pow(eps * k_abs / (model.nu0() * w), 1.0 / (2.0 + b));
    return {v, v / ((2.0 + b) * w)};
}

/// Fourier multiplier I(k) of the micro-macro density update,
///
///   I = eps^(2-alpha) < nu lambda^2 (k v)^2 / (nu^2 + eps^2 lambda^2 (k v)^2) M >,
///
/// evaluated after the change of variables so that the small-eps limit is
/// kappa |k|^alpha. `extra_lambda_power` multiplies the integrand by lambda^p
/// (p = 1 gives the stiff bracket of the direct implicit scheme divided by eps^alpha).
inline double transformed_I(const ModelCase& model, double k, double eps, double dt,
                            const SubstitutedGrid& grid, int extra_lambda_power = 0) {
    if (!(eps > 0.0) || !(dt > 0.0)) throw ConfigError("transformed_I needs eps > 0 and dt > 0");
    const double k_abs = std::abs(k);
    if (k_abs == 0.0) return 0.0;
    const double a = model.alpha();
    const double eps_a = std::pow(eps, a);

    if (model.kind() == CaseKind::HeavyTail) {
        const double lambda = dt / (eps_a + dt);
        const double s = eps * lambda * k_abs;
        const double integral = grid.even_bracket([&](double w) {
            return w * w / (1.0 + w * w) * model.equilibrium(w / s);
        });
        return std::pow(lambda, extra_lambda_power) * integral / (std::pow(eps, 1.0 + a) * lambda * k_abs);
    }

    const double integral = grid.even_bracket([&](double w) {
        const auto [v, jac] = inverse_substitution(model, w, k_abs, eps, 1.0);
        const double nu = model.collision_frequency(v);
        const double lambda = dt * nu / (eps_a + dt * nu);
        const double lw = lambda * w;
        return nu * std::pow(lambda, 2 + extra_lambda_power) * w * w / (1.0 + lw * lw) *
               model.equilibrium(v) * jac;
    });
    return integral / eps_a;
}

}  // namespace anodiff
