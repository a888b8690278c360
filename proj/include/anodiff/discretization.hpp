#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <iostream>

namespace anodiff {

/// Grids, step size, final time and scaling parameter shared by all schemes.
struct Discretization {
    SpatialGrid space{64};
    VelocityGrid velocity{5.0, 200};
    SubstitutedGrid substituted{1.0, 800};
    double eps = 1.0;
    double dt = 1e-3;
    double final_time = 0.1;

    /// Number of steps N with N dt = T. A non-integral ratio is rounded and
    /// reported on stderr.
    std::size_t steps() const {
        const double ratio = final_time / dt;
        const double n = std::round(ratio);
        if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
            std::cerr << "warning: T/dt = " << ratio << " is not an integer; using " << n << " steps\n";
        }
        return static_cast<std::size_t>(n);
    }

    void validate() const {
        if (!(eps > 0.0)) throw ConfigError("eps must be positive");
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
        if (!(final_time > 0.0)) throw ConfigError("T must be positive");
        if (final_time / dt < 0.5) throw ConfigError("T must be at least dt");
    }

    /// Default grids for a model (substituted grid graded for its kappa integrand).
    static Discretization for_model(const ModelCase& model, double eps, double dt, double final_time = 0.1,
                                    std::size_t nx = 64, double v_max = 5.0, std::size_t nv = 200,
                                    double w_scale = 1.0, std::size_t nw = 800) {
        Discretization d{SpatialGrid(nx), VelocityGrid(v_max, nv), make_substituted_grid(model, w_scale, nw),
                         eps, dt, final_time};
        d.validate();
        return d;
    }
};

}  // namespace anodiff
