#pragma once

#include "errors.hpp"
#include "model.hpp"
#include "spectral.hpp"

#include <cmath>

namespace anodiff {

/// Exact solution of d/dt rho_hat + kappa |k|^alpha rho_hat = 0 at time t.
/// kappa is passed in so that the reference uses the same discrete value the
/// asymptotic-preserving schemes converge to.
inline SpectralDensity evolve(const SpectralDensity& rho0, const ModelCase& model, double kappa, double t) {
    if (t < 0.0) throw ConfigError("limit solver: negative time");
    if (kappa < 0.0) throw ConfigError("limit solver: negative kappa");
    SpectralDensity out = rho0;
    const double a = model.alpha();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double k = std::abs(out.wavenumber[i]);
        if (k == 0.0) continue;
        out.amplitude[i] *= std::exp(-kappa * std::pow(k, a) * t);
    }
    return out;
}

}  // namespace anodiff
