#pragma once

#include "config.hpp"
#include "csv.hpp"
#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace anodiff::harness {

struct SweepRow {
    double eps = 0.0;
    double dt = 0.0;
    double error = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN();  // against the previous dt; NaN on the first row
    double runtime_s = 0.0;
};

struct SweepResult {
    enum class Kind { Eps, Dt } kind = Kind::Eps;
    std::string quantity;  // density compared: rho or rho_nu
    std::vector<SweepRow> rows;

    /// Errors non-increasing as eps decreases (rows taken in order of decreasing eps).
    bool monotone_in_eps() const {
        std::vector<SweepRow> sorted = rows;
        std::stable_sort(sorted.begin(), sorted.end(), [](const SweepRow& a, const SweepRow& b) { return a.eps > b.eps; });
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            if (sorted[i].error > sorted[i - 1].error) return false;
        }
        return true;
    }

    /// Rows of one eps in a dt sweep, in the order run.
    std::vector<SweepRow> rows_for(double eps) const {
        std::vector<SweepRow> out;
        for (const auto& r : rows) {
            if (r.eps == eps) out.push_back(r);
        }
        return out;
    }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Run the configured scheme for every eps and compare with the limit
/// solution at T (relative L-infinity on the x-grid).
inline SweepResult sweep_eps(const RunConfig& cfg, const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw ConfigError("sweep-eps needs a non-empty eps list");
    cfg.validate();
    SweepResult out;
    out.kind = SweepResult::Kind::Eps;
    for (double eps : eps_list) {
        if (!(eps > 0.0)) throw ConfigError("eps values must be positive");
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = simulate(cfg, eps, cfg.dt_value());
        const double runtime = detail::seconds_since(t0);
        const auto limit = limit_series(cfg, cfg.discretization(eps, cfg.dt_value()));
        out.quantity = r.quantity;
        out.rows.push_back({eps, cfg.dt_value(), relative_linf(r.final_density(), limit.final_rho()),
                            std::numeric_limits<double>::quiet_NaN(), runtime});
    }
    return out;
}

inline void check_geometric(const std::vector<double>& dt_list) {
    if (dt_list.size() < 2) throw ConfigError("sweep-dt needs at least two time steps");
    const double ratio = dt_list[0] / dt_list[1];
    for (std::size_t i = 0; i + 1 < dt_list.size(); ++i) {
        const double r = dt_list[i] / dt_list[i + 1];
        if (!(r > 1.0) || std::abs(r - ratio) > 1e-9 * ratio) {
            throw ConfigError("dt list must be a decreasing geometric sequence");
        }
    }
}

/// Self-convergence: for every eps, error of each dt against a reference run
/// with dt_min/8, and the observed order log(e_prev/e)/log(dt_prev/dt).
inline SweepResult sweep_dt(const RunConfig& cfg, const std::vector<double>& eps_list,
                            const std::vector<double>& dt_list) {
    if (eps_list.empty()) throw ConfigError("sweep-dt needs a non-empty eps list");
    check_geometric(dt_list);
    cfg.validate();
    SweepResult out;
    out.kind = SweepResult::Kind::Dt;
    const double dt_ref = dt_list.back() / 8.0;
    for (double eps : eps_list) {
        if (!(eps > 0.0)) throw ConfigError("eps values must be positive");
        const auto reference = simulate(cfg, eps, dt_ref);
        double prev_error = 0.0;
        for (std::size_t i = 0; i < dt_list.size(); ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto r = simulate(cfg, eps, dt_list[i]);
            const double runtime = detail::seconds_since(t0);
            SweepRow row{eps, dt_list[i], relative_linf(r.final_density(), reference.final_density()),
                         std::numeric_limits<double>::quiet_NaN(), runtime};
            if (i > 0) row.order = std::log(prev_error / row.error) / std::log(dt_list[i - 1] / dt_list[i]);
            prev_error = row.error;
            out.quantity = r.quantity;
            out.rows.push_back(row);
        }
    }
    return out;
}

inline CsvTable sweep_table(const SweepResult& s) {
    CsvTable t;
    if (s.kind == SweepResult::Kind::Eps) {
        t.header = {"eps", "error_Linf", "runtime_s"};
        for (const auto& r : s.rows) t.rows.push_back({r.eps, r.error, r.runtime_s});
    } else {
        t.header = {"eps", "dt", "error_Linf", "observed_order", "runtime_s"};
        for (const auto& r : s.rows) t.rows.push_back({r.eps, r.dt, r.error, r.order, r.runtime_s});
    }
    return t;
}

inline void emit_csv(const SweepResult& s, const std::string& path) { write_csv(sweep_table(s), path); }
inline void emit_csv(const SweepResult& s, std::ostream& out) { write_csv(sweep_table(s), out); }

}  // namespace anodiff::harness
