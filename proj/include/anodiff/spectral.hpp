#pragma once

#include "grid.hpp"
#include "kernels.hpp"
#include "phase_space.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <span>
#include <vector>

namespace anodiff {

/// Fourier amplitudes of a periodic function on the spatial grid, one per
/// mode k_j = 2 pi j / L, j = -N/2 .. N/2-1, stored in increasing j:
///
///     rho(x) = sum_j amplitude[j] exp(i k_j x).
struct SpectralDensity {
    std::vector<double> wavenumber;
    std::vector<cplx> amplitude;

    std::size_t size() const noexcept { return amplitude.size(); }

    /// Index of mode -j for the mode at index i, or size() for the unpaired Nyquist mode.
    std::size_t mirror(std::size_t i) const noexcept {
        const std::size_t n = size();
        if (i == 0) return n;
        return n - i;
    }
};

inline std::vector<double> wavenumbers(const SpatialGrid& grid) {
    const std::size_t n = grid.size();
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double j = static_cast<double>(i) - static_cast<double>(n / 2);
        k[i] = 2.0 * std::numbers::pi * j / grid.length();
    }
    return k;
}

/// Discrete Fourier transform between nodal values on a SpatialGrid and
/// SpectralDensity amplitudes (FFT backed by Eigen).
class FourierTransform {
public:
    explicit FourierTransform(const SpatialGrid& grid) : grid_(grid), k_(anodiff::wavenumbers(grid)) {
        const std::size_t n = grid.size();
        phase_.resize(n);
        for (std::size_t i = 0; i < n; ++i) phase_[i] = std::exp(cplx(0.0, -k_[i] * grid.x_min()));
        buffer_.resize(n);
        spectrum_.resize(n);
    }

    const SpatialGrid& grid() const noexcept { return grid_; }
    std::span<const double> wavenumbers() const noexcept { return k_; }

    SpectralDensity forward(std::span<const double> values) {
        std::vector<cplx> out(values.size());
        forward_into(values, out);
        return {k_, std::move(out)};
    }

    /// Amplitudes of `values` in increasing-j order.
    void forward_into(std::span<const double> values, std::span<cplx> out) {
        const std::size_t n = grid_.size();
        for (std::size_t b = 0; b < n; ++b) buffer_[b] = values[b];
        fft_.fwd(spectrum_, buffer_);
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = spectrum_[bin(i)] * phase_[i] * scale;
    }

    void forward_complex_into(std::span<const cplx> values, std::span<cplx> out) {
        const std::size_t n = grid_.size();
        for (std::size_t b = 0; b < n; ++b) buffer_[b] = values[b];
        fft_.fwd(spectrum_, buffer_);
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = spectrum_[bin(i)] * phase_[i] * scale;
    }

    /// Nodal values; the imaginary part is discarded.
    std::vector<double> inverse(const SpectralDensity& rho) { return inverse(std::span<const cplx>(rho.amplitude)); }

    std::vector<double> inverse(std::span<const cplx> amplitude) {
        const auto c = inverse_complex(amplitude);
        std::vector<double> out(c.size());
        for (std::size_t b = 0; b < c.size(); ++b) out[b] = c[b].real();
        return out;
    }

    std::vector<cplx> inverse_complex(std::span<const cplx> amplitude) {
        const std::size_t n = grid_.size();
        for (std::size_t i = 0; i < n; ++i) {
            spectrum_[bin(i)] = amplitude[i] * std::conj(phase_[i]) * static_cast<double>(n);
        }
        fft_.inv(buffer_, spectrum_);
        return buffer_;
    }

private:
    std::size_t bin(std::size_t i) const noexcept {
        const std::size_t n = grid_.size();
        return (i + n / 2) % n;
    }

    SpatialGrid grid_;
    std::vector<double> k_;
    std::vector<cplx> phase_;
    std::vector<cplx> buffer_;
    std::vector<cplx> spectrum_;
    Eigen::FFT<double> fft_;
};

/// Complex field on modes x velocity nodes, mode-major.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(std::size_t modes, std::size_t nv) : modes_(modes), nv_(nv), data_(modes * nv) {}

    std::size_t modes() const noexcept { return modes_; }
    std::size_t nv() const noexcept { return nv_; }
    cplx& operator()(std::size_t i, std::size_t p) noexcept { return data_[i * nv_ + p]; }
    cplx operator()(std::size_t i, std::size_t p) const noexcept { return data_[i * nv_ + p]; }
    std::span<cplx> row(std::size_t i) noexcept { return {data_.data() + i * nv_, nv_}; }
    std::span<const cplx> row(std::size_t i) const noexcept { return {data_.data() + i * nv_, nv_}; }
    bool all_finite() const noexcept {
        for (const auto& z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
        return true;
    }

private:
    std::size_t modes_ = 0;
    std::size_t nv_ = 0;
    std::vector<cplx> data_;
};

/// Transform every velocity column of f.
inline SpectralField to_spectral(const PhaseSpaceField& f, FourierTransform& ft) {
    if (f.nx() != ft.grid().size()) throw std::invalid_argument("to_spectral: grid size mismatch");
    SpectralField out(f.nx(), f.nv());
    std::vector<double> column(f.nx());
    std::vector<cplx> hat(f.nx());
    for (std::size_t p = 0; p < f.nv(); ++p) {
        for (std::size_t i = 0; i < f.nx(); ++i) column[i] = f(i, p);
        ft.forward_into(column, hat);
        for (std::size_t i = 0; i < f.nx(); ++i) out(i, p) = hat[i];
    }
    return out;
}

inline PhaseSpaceField to_physical(const SpectralField& f, FourierTransform& ft) {
    PhaseSpaceField out(f.modes(), f.nv());
    std::vector<cplx> hat(f.modes());
    for (std::size_t p = 0; p < f.nv(); ++p) {
        for (std::size_t i = 0; i < f.modes(); ++i) hat[i] = f(i, p);
        const auto column = ft.inverse(std::span<const cplx>(hat));
        for (std::size_t i = 0; i < f.modes(); ++i) out(i, p) = column[i];
    }
    return out;
}

}  // namespace anodiff
