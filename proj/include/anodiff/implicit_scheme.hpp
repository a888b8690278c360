#pragma once

#include "discretization.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "spectral.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace anodiff {

/// State of the direct implicit scheme: f in Fourier space plus the
/// collision-weighted density of the last step.
struct ImplicitState {
    SpectralField f_hat;
    std::vector<cplx> rho_nu_hat;
    std::size_t step = 0;
};

/// Fully implicit AP scheme, mode by mode:
///
///   f^{n+1} = lambda R rho_nu^{n+1} M + (1 - lambda) R f^n,
///   R = (1 + i eps lambda k v / nu)^{-1}.
///
/// rho_nu^{n+1} comes from the nu-bracket of the update; the stiff part of the
/// denominator, <nu lambda M (1 - R)>, goes through the substituted grid.
class ImplicitScheme {
public:
    ImplicitScheme(const ModelCase& model, const Discretization& disc)
        : model_(model), disc_(disc), fourier_(disc.space) {
        disc_.validate();
        const auto& vg = disc_.velocity;
        const std::size_t nv = vg.size();
        const double eps_a = std::pow(disc_.eps, model_.alpha());
        m_ = discrete_equilibrium(model_, vg);
        nu_ = sample_collision_frequency(model_, vg);
        lambda_.resize(nv);
        shift_.resize(nv);
        std::vector<double> tmp(nv);
        for (std::size_t p = 0; p < nv; ++p) {
            const double dnu = disc_.dt * nu_[p];
            lambda_[p] = dnu / (eps_a + dnu);
            shift_[p] = disc_.eps * disc_.dt / (eps_a + dnu) * vg.node(p);
            tmp[p] = nu_[p] * m_[p];
        }
        nu_m_ = vg.bracket_values(tmp);
        for (std::size_t p = 0; p < nv; ++p) tmp[p] = nu_[p] * m_[p] * (1.0 - lambda_[p]);
        const double plain = vg.bracket_values(tmp);

        const auto k = fourier_.wavenumbers();
        denominator_.resize(k.size());
        for (std::size_t i = 0; i < k.size(); ++i) {
            denominator_[i] =
                plain + eps_a * transformed_I(model_, k[i], disc_.eps, disc_.dt, disc_.substituted, 1);
        }
    }

    const Discretization& discretization() const noexcept { return disc_; }
    double nu_m() const noexcept { return nu_m_; }

    ImplicitState initial_state(const InitialData& f0) const {
        const auto f = f0.sample(model_, disc_.space, disc_.velocity);
        ImplicitState s{to_spectral(f, fourier_), {}, 0};
        s.rho_nu_hat = nu_moment(s.f_hat);
        return s;
    }

    /// One step; returns the next state (f_hat and rho_nu_hat).
    ImplicitState implicit_step(const ImplicitState& s) const {
        const auto k = fourier_.wavenumbers();
        const auto& vg = disc_.velocity;
        const std::size_t nv = vg.size();
        ImplicitState next{SpectralField(k.size(), nv), std::vector<cplx>(k.size()), s.step + 1};
        std::vector<cplx> resolvent(nv);
        std::vector<cplx> tmp(nv);
        for (std::size_t i = 0; i < k.size(); ++i) {
            const auto f = s.f_hat.row(i);
            for (std::size_t p = 0; p < nv; ++p) {
                resolvent[p] = 1.0 / cplx(1.0, k[i] * shift_[p]);
                tmp[p] = nu_[p] * (1.0 - lambda_[p]) * resolvent[p] * f[p];
            }
            const cplx rho_nu = vg.bracket_values(std::span<const cplx>(tmp)) / denominator_[i];
            next.rho_nu_hat[i] = rho_nu;
            auto out = next.f_hat.row(i);
            for (std::size_t p = 0; p < nv; ++p) {
                out[p] = resolvent[p] * (lambda_[p] * rho_nu * m_[p] + (1.0 - lambda_[p]) * f[p]);
            }
        }
        if (!next.f_hat.all_finite()) throw NumericalError("implicit step produced a non-finite field", next.step);
        return next;
    }

    std::vector<cplx> density(const SpectralField& f_hat) const {
        std::vector<cplx> out(f_hat.modes());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = disc_.velocity.bracket_values(f_hat.row(i));
        return out;
    }

    std::vector<cplx> nu_moment(const SpectralField& f_hat) const {
        const auto& vg = disc_.velocity;
        std::vector<cplx> out(f_hat.modes());
        std::vector<cplx> tmp(vg.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            const auto f = f_hat.row(i);
            for (std::size_t p = 0; p < vg.size(); ++p) tmp[p] = nu_[p] * f[p];
            out[i] = vg.bracket_values(std::span<const cplx>(tmp)) / nu_m_;
        }
        return out;
    }

    DensitySeries run(const InitialData& f0, std::size_t record_every = 1) const {
        return run(initial_state(f0), record_every);
    }

    DensitySeries run(ImplicitState s, std::size_t record_every = 1) const {
        const std::size_t steps = disc_.steps();
        DensitySeries out;
        auto record = [&] {
            out.times.push_back(static_cast<double>(s.step) * disc_.dt);
            out.rho.push_back(fourier_.inverse(std::span<const cplx>(density(s.f_hat))));
            out.rho_nu.push_back(fourier_.inverse(std::span<const cplx>(s.rho_nu_hat)));
        };
        record();
        for (std::size_t n = 0; n < steps; ++n) {
            s = implicit_step(s);
            if (should_record(n + 1, steps, record_every)) record();
        }
        return out;
    }

private:
    ModelCase model_;
    Discretization disc_;
    mutable FourierTransform fourier_;
    double nu_m_ = 1.0;
    std::vector<double> m_;
    std::vector<double> nu_;
    std::vector<double> lambda_;
    std::vector<double> shift_;
    std::vector<double> denominator_;
};

}  // namespace anodiff
