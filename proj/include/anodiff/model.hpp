#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "phase_space.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace anodiff {

enum class CaseKind { HeavyTail, Degenerate };

inline std::string_view to_string(CaseKind kind) {
    return kind == CaseKind::HeavyTail ? "heavy_tail" : "degenerate";
}

/// One of the two anomalous-diffusion regimes in one space dimension:
///
///  - HeavyTail:  M(v) = m / (1 + |v|^beta), nu = 1,           1 < beta < 3.
///  - Degenerate: M(v) = exp(-v^2/2)/sqrt(2 pi), nu = nu0 |v|^(3+beta), beta > 0.
class ModelCase {
public:
    static ModelCase heavy_tail(double beta) {
        if (!(beta > kDim && beta < kDim + 2.0)) {
            throw ConfigError("heavy-tail case requires 1 < beta < 3, got " + std::to_string(beta));
        }
        return ModelCase(CaseKind::HeavyTail, beta, 1.0);
    }

    static ModelCase degenerate(double beta, double nu0 = 1.0) {
        if (!(beta > 0.0)) throw ConfigError("degenerate case requires beta > 0");
        if (!(nu0 > 0.0)) throw ConfigError("degenerate case requires nu0 > 0");
        return ModelCase(CaseKind::Degenerate, beta, nu0);
    }

    CaseKind kind() const noexcept { return kind_; }
    double beta() const noexcept { return beta_; }
    double nu0() const noexcept { return nu0_; }
    static constexpr int dimension() noexcept { return 1; }

    double alpha() const noexcept {
        if (kind_ == CaseKind::HeavyTail) return beta_ - kDim;
        return (2.0 + 2.0 * kDim + beta_) / (1.0 + kDim + beta_);
    }

    /// Analytic normalization: the full-line integral of M is one.
    double normalization() const noexcept {
        if (kind_ == CaseKind::HeavyTail) {
            const double r = std::numbers::pi / beta_;
            return 1.0 / (2.0 * r / std::sin(r));
        }
        return 1.0 / std::sqrt(2.0 * std::numbers::pi);
    }

    double equilibrium(double v) const noexcept {
        const double a = std::abs(v);
        if (kind_ == CaseKind::HeavyTail) return m_ / (1.0 + std::pow(a, beta_));
        return m_ * std::exp(-0.5 * a * a);
    }

    double collision_frequency(double v) const noexcept {
        if (kind_ == CaseKind::HeavyTail) return 1.0;
        return nu0_ * std::pow(std::abs(v), kDim + 2.0 + beta_);
    }

    friend bool operator==(const ModelCase& a, const ModelCase& b) {
        return a.kind_ == b.kind_ && a.beta_ == b.beta_ && a.nu0_ == b.nu0_;
    }

private:
    static constexpr double kDim = 1.0;

    ModelCase(CaseKind kind, double beta, double nu0)
        : kind_(kind), beta_(beta), nu0_(nu0), m_(0.0) {
        m_ = normalization();
    }

    CaseKind kind_;
    double beta_;
    double nu0_;
    double m_;
};

inline double alpha(const ModelCase& model) { return model.alpha(); }
inline double equilibrium(const ModelCase& model, double v) { return model.equilibrium(v); }
inline double collision_frequency(const ModelCase& model, double v) { return model.collision_frequency(v); }

/// lambda(v) = dt nu(v) / (eps^alpha + dt nu(v)), in [0, 1).
inline double relaxation_factor(const ModelCase& model, double v, double dt, double eps) {
    if (!(dt > 0.0) || !(eps > 0.0)) throw ConfigError("relaxation_factor needs dt > 0 and eps > 0");
    const double dnu = dt * model.collision_frequency(v);
    return dnu / (std::pow(eps, model.alpha()) + dnu);
}

/// Equilibrium sampled on the velocity grid and rescaled to unit discrete
/// mass. All plain-grid brackets use this table so that the projection
/// f -> <f> M is exact on the truncated grid; the analytic M is kept for
/// every integral taken in the substituted variable.
inline std::vector<double> discrete_equilibrium(const ModelCase& model, const VelocityGrid& grid) {
    std::vector<double> m(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) m[p] = model.equilibrium(grid.node(p));
    const double mass = grid.bracket_values(m);
    for (double& x : m) x /= mass;
    return m;
}

inline std::vector<double> sample_collision_frequency(const ModelCase& model, const VelocityGrid& grid) {
    std::vector<double> nu(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) nu[p] = model.collision_frequency(grid.node(p));
    return nu;
}

/// Q(f) = nu(v) (rho_nu M - f), rho_nu = <nu f> / <nu M>, per x.
inline PhaseSpaceField apply_collision(const ModelCase& model, const VelocityGrid& grid,
                                       const PhaseSpaceField& f) {
    std::vector<double> m(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) m[p] = model.equilibrium(grid.node(p));
    const auto nu = sample_collision_frequency(model, grid);
    std::vector<double> num(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) num[p] = nu[p] * m[p];
    const double nu_m = grid.bracket_values(num);

    PhaseSpaceField q(f.nx(), f.nv());
    const auto rho_nu = weighted_moment(f, nu, grid);
    for (std::size_t i = 0; i < f.nx(); ++i) {
        const double r = rho_nu[i] / nu_m;
        for (std::size_t p = 0; p < f.nv(); ++p) q(i, p) = nu[p] * (r * m[p] - f(i, p));
    }
    return q;
}

/// f0(x, v) = density(x) * M_h(v) + perturbation(x, v), with M_h the
/// discrete equilibrium. Well-prepared data has no perturbation.
struct InitialData {
    std::string name;
    std::function<double(double)> density;
    std::function<double(double, double)> perturbation;

    static InitialData well_prepared() {
        return {"well_prepared", [](double x) { return 1.0 + std::sin(std::numbers::pi * x); }, {}};
    }

    static InitialData constant(double value) {
        return {"constant", [value](double) { return value; }, {}};
    }

    bool is_well_prepared() const noexcept { return !perturbation; }

    PhaseSpaceField sample(const ModelCase& model, const SpatialGrid& xgrid, const VelocityGrid& vgrid) const {
        const auto m = discrete_equilibrium(model, vgrid);
        PhaseSpaceField f(xgrid.size(), vgrid.size());
        for (std::size_t i = 0; i < xgrid.size(); ++i) {
            const double x = xgrid.node(i);
            const double r = density(x);
            for (std::size_t p = 0; p < vgrid.size(); ++p) {
                f(i, p) = r * m[p] + (perturbation ? perturbation(x, vgrid.node(p)) : 0.0);
            }
        }
        if (!f.all_finite()) throw ConfigError("initial data '" + name + "' is not finite on the grid");
        return f;
    }
};

}  // namespace anodiff
