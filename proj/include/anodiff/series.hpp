#pragma once

#include <cstddef>
#include <vector>

namespace anodiff {

/// Densities on the x-grid at recorded times. `rho` or `rho_nu` is left
/// empty when a scheme does not produce that quantity.
struct DensitySeries {
    std::vector<double> times;
    std::vector<std::vector<double>> rho;
    std::vector<std::vector<double>> rho_nu;

    bool has_rho() const noexcept { return !rho.empty(); }
    bool has_rho_nu() const noexcept { return !rho_nu.empty(); }
    const std::vector<double>& final_rho() const { return rho.back(); }
    const std::vector<double>& final_rho_nu() const { return rho_nu.back(); }
};

/// Which steps of an N-step run get recorded: every `every`-th step and
/// always the first and last.
inline bool should_record(std::size_t n, std::size_t steps, std::size_t every) {
    if (n == 0 || n == steps) return true;
    return every != 0 && n % every == 0;
}

}  // namespace anodiff
