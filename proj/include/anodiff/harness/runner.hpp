#pragma once

#include "../duhamel.hpp"
#include "../implicit_scheme.hpp"
#include "../limit_solver.hpp"
#include "../micromacro.hpp"
#include "../quadrature.hpp"
#include "config.hpp"
#include "csv.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace anodiff::harness {

/// max |a - b| / max |b| on the x-grid.
inline double relative_linf(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || b.empty()) throw std::invalid_argument("relative_linf: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    if (den == 0.0) return num;
    return num / den;
}

struct RunResult {
    std::vector<double> x;
    DensitySeries series;
    std::string quantity;  // "rho" or "rho_nu": the density compared against the limit

    const std::vector<double>& final_density() const {
        return quantity == "rho_nu" ? series.final_rho_nu() : series.final_rho();
    }
};

inline std::vector<double> grid_nodes(const SpatialGrid& g) {
    std::vector<double> x(g.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = g.node(i);
    return x;
}

/// Limit-equation density at the recorded times, started from <f0>.
inline DensitySeries limit_series(const RunConfig& cfg, const Discretization& disc) {
    const auto model = cfg.model_case();
    const double kap = kappa(model, disc.substituted);
    const auto f0 = cfg.initial_data().sample(model, disc.space, disc.velocity);
    FourierTransform ft(disc.space);
    const auto rho0 = ft.forward(velocity_moment(f0, disc.velocity));
    const std::size_t steps = disc.steps();
    DensitySeries out;
    for (std::size_t n = 0; n <= steps; ++n) {
        if (!should_record(n, steps, cfg.record_every)) continue;
        const double t = static_cast<double>(n) * disc.dt;
        out.times.push_back(t);
        out.rho.push_back(ft.inverse(evolve(rho0, model, kap, t)));
    }
    out.rho_nu = out.rho;
    return out;
}

inline RunResult simulate(const RunConfig& cfg, double eps, double dt) {
    const auto model = cfg.model_case();
    const auto disc = cfg.discretization(eps, dt);
    RunResult r{grid_nodes(disc.space), {}, "rho"};
    switch (cfg.scheme) {
        case SchemeKind::MicroMacro:
            r.series = MicroMacroScheme(model, disc, cfg.closure).run(cfg.initial_data(), cfg.record_every);
            break;
        case SchemeKind::Implicit:
            r.series = ImplicitScheme(model, disc).run(cfg.initial_data(), cfg.record_every);
            break;
        case SchemeKind::Duhamel:
            r.series = DuhamelScheme(model, disc, cfg.initial_data()).run(cfg.record_every);
            r.quantity = "rho_nu";
            break;
        case SchemeKind::Limit:
            r.series = limit_series(cfg, disc);
            break;
    }
    return r;
}

/// Long-format table t, x, rho[, rho_nu].
inline CsvTable density_table(const RunResult& r) {
    CsvTable t;
    const bool rho = r.series.has_rho();
    const bool rho_nu = r.series.has_rho_nu();
    t.header = {"t", "x"};
    if (rho) t.header.emplace_back("rho");
    if (rho_nu) t.header.emplace_back("rho_nu");
    for (std::size_t n = 0; n < r.series.times.size(); ++n) {
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            std::vector<double> row{r.series.times[n], r.x[i]};
            if (rho) row.push_back(r.series.rho[n][i]);
            if (rho_nu) row.push_back(r.series.rho_nu[n][i]);
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

/// One run with the configured scheme; writes the density CSV when
/// cfg.output is set.
inline RunResult run_single(const RunConfig& cfg) {
    cfg.validate();
    auto r = simulate(cfg, cfg.eps, cfg.dt_value());
    if (!cfg.output.empty()) write_csv(density_table(r), cfg.output);
    return r;
}

}  // namespace anodiff::harness
