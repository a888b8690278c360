#pragma once

#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace anodiff {

/// Real values on the N_x x N_v phase-space grid, stored x-major.
class PhaseSpaceField {
public:
    PhaseSpaceField() = default;
    PhaseSpaceField(std::size_t nx, std::size_t nv, double value = 0.0)
        : nx_(nx), nv_(nv), data_(nx * nv, value) {}

    std::size_t nx() const noexcept { return nx_; }
    std::size_t nv() const noexcept { return nv_; }

    double& operator()(std::size_t i, std::size_t p) noexcept { return data_[i * nv_ + p]; }
    double operator()(std::size_t i, std::size_t p) const noexcept { return data_[i * nv_ + p]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * nv_, nv_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * nv_, nv_}; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    double max_abs() const noexcept {
        double m = 0.0;
        for (double x : data_) m = std::max(m, std::abs(x));
        return m;
    }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
    }

    friend bool operator==(const PhaseSpaceField&, const PhaseSpaceField&) = default;

private:
    std::size_t nx_ = 0;
    std::size_t nv_ = 0;
    std::vector<double> data_;
};

/// First-order upwind difference of a periodic row for advection speed of
/// sign `sign`: backward for positive speed, forward for negative.
inline double upwind_difference(std::span<const double> u, std::size_t i, double sign, double dx) {
    const std::size_t n = u.size();
    if (sign > 0.0) return (u[i] - u[(i + n - 1) % n]) / dx;
    return (u[(i + 1) % n] - u[i]) / dx;
}

/// Per-x velocity bracket <f(x_i, .)> of a phase-space field.
inline std::vector<double> velocity_moment(const PhaseSpaceField& f, const VelocityGrid& grid) {
    std::vector<double> out(f.nx());
    for (std::size_t i = 0; i < f.nx(); ++i) out[i] = grid.bracket_values(f.row(i));
    return out;
}

/// Per-x weighted bracket <weight * f(x_i, .)>.
inline std::vector<double> weighted_moment(const PhaseSpaceField& f, std::span<const double> weight,
                                           const VelocityGrid& grid) {
    std::vector<double> out(f.nx());
    std::vector<double> tmp(f.nv());
    for (std::size_t i = 0; i < f.nx(); ++i) {
        const auto r = f.row(i);
        for (std::size_t p = 0; p < f.nv(); ++p) tmp[p] = weight[p] * r[p];
        out[i] = grid.bracket_values(std::span<const double>(tmp));
    }
    return out;
}

}  // namespace anodiff
