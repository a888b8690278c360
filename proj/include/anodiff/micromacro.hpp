#pragma once

#include "discretization.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "phase_space.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <span>
#include <vector>

namespace anodiff {

/// Choice of rho_hat^{n+1/2} in the density update.
enum class MacroClosure { Implicit, Explicit };

/// Macro density and micro remainder, f = rho M_h + g with <g> = 0.
struct MacroMicroState {
    std::vector<double> rho;
    PhaseSpaceField g;
    std::size_t step = 0;

    double time(double dt) const noexcept { return static_cast<double>(step) * dt; }
};

/// Micro-macro asymptotic-preserving scheme. The micro equation is advanced
/// with explicit upwind transport and implicit relaxation; the density is
/// advanced mode by mode with the substituted multiplier I(k).
class MicroMacroScheme {
public:
    MicroMacroScheme(const ModelCase& model, const Discretization& disc,
                     MacroClosure closure = MacroClosure::Implicit)
        : model_(model), disc_(disc), closure_(closure), fourier_(disc.space) {
        disc_.validate();
        const auto& vg = disc_.velocity;
        const std::size_t nv = vg.size();
        eps_alpha_ = std::pow(disc_.eps, model_.alpha());
        m_ = discrete_equilibrium(model_, vg);
        nu_ = sample_collision_frequency(model_, vg);
        lambda_.resize(nv);
        keep_.resize(nv);
        flux_.resize(nv);
        moment_weight_.resize(nv);
        std::vector<double> tmp(nv);
        for (std::size_t p = 0; p < nv; ++p) {
            const double dnu = disc_.dt * nu_[p];
            lambda_[p] = dnu / (eps_alpha_ + dnu);
            keep_[p] = eps_alpha_ / (eps_alpha_ + dnu);
            flux_[p] = disc_.eps * disc_.dt / (eps_alpha_ + dnu);
            moment_weight_[p] = vg.node(p) / (eps_alpha_ + dnu);
            tmp[p] = nu_[p] * m_[p];
        }
        nu_m_ = vg.bracket_values(tmp);
        for (std::size_t p = 0; p < nv; ++p) tmp[p] = nu_[p] * m_[p] * keep_[p];
        extraction_denominator_ = vg.bracket_values(tmp) / nu_m_;

        const auto k = fourier_.wavenumbers();
        multiplier_.resize(k.size());
        for (std::size_t i = 0; i < k.size(); ++i) {
            multiplier_[i] = transformed_I(model_, k[i], disc_.eps, disc_.dt, disc_.substituted);
        }
        warn_if_unstable();
    }

    const ModelCase& model() const noexcept { return model_; }
    const Discretization& discretization() const noexcept { return disc_; }
    std::span<const double> discrete_equilibrium_table() const noexcept { return m_; }
    std::span<const double> multipliers() const noexcept { return multiplier_; }
    double nu_m() const noexcept { return nu_m_; }

    /// rho0 = <f0>, g0 = f0 - rho0 M_h.
    MacroMicroState decompose(const InitialData& f0) const {
        const auto f = f0.sample(model_, disc_.space, disc_.velocity);
        return decompose(f);
    }

    MacroMicroState decompose(const PhaseSpaceField& f) const {
        MacroMicroState s{velocity_moment(f, disc_.velocity), f, 0};
        for (std::size_t i = 0; i < f.nx(); ++i) {
            for (std::size_t p = 0; p < f.nv(); ++p) s.g(i, p) -= s.rho[i] * m_[p];
        }
        return s;
    }

    PhaseSpaceField recompose(const MacroMicroState& s) const {
        PhaseSpaceField f = s.g;
        for (std::size_t i = 0; i < f.nx(); ++i) {
            for (std::size_t p = 0; p < f.nv(); ++p) f(i, p) += s.rho[i] * m_[p];
        }
        return f;
    }

    /// <nu g^{n+1}>(x) from the implicit micro equation, degenerate case only.
    std::vector<double> extract_nu_g(const MacroMicroState& s) const {
        if (model_.kind() != CaseKind::Degenerate) {
            throw ConfigError("extract_nu_g applies to the degenerate collision frequency only");
        }
        if (!(extraction_denominator_ > 0.0)) {
            throw NumericalError("non-positive extraction denominator", s.step);
        }
        const auto t = transport(s);
        const auto& vg = disc_.velocity;
        std::vector<double> out(s.rho.size());
        std::vector<double> tmp(vg.size());
        for (std::size_t i = 0; i < s.rho.size(); ++i) {
            // The denominator 1 - dt/(eps^a <nu M>) <nu^2 M/(1 + dt nu/eps^a)> is
            // evaluated as <nu M (1-lambda)> / <nu M>, which avoids cancellation.
            for (std::size_t p = 0; p < vg.size(); ++p) {
                tmp[p] = nu_[p] * (keep_[p] * s.g(i, p) - flux_[p] * t(i, p));
            }
            out[i] = vg.bracket_values(std::span<const double>(tmp)) / extraction_denominator_;
        }
        return out;
    }

    /// g^{n+1} from the micro equation.
    PhaseSpaceField micro_step(const MacroMicroState& s) const {
        const auto t = transport(s);
        std::vector<double> coupling(s.rho.size(), 0.0);
        if (model_.kind() == CaseKind::Degenerate) {
            coupling = extract_nu_g(s);
            for (double& c : coupling) c /= nu_m_;
        }
        PhaseSpaceField g(s.g.nx(), s.g.nv());
        for (std::size_t i = 0; i < g.nx(); ++i) {
            for (std::size_t p = 0; p < g.nv(); ++p) {
                g(i, p) = keep_[p] * s.g(i, p) - flux_[p] * t(i, p) + lambda_[p] * coupling[i] * m_[p];
            }
            // <g> vanishes in exact arithmetic; removing the rounding residue
            // keeps it from accumulating over steps.
            const auto row = g.row(i);
            const double mean = disc_.velocity.bracket_values(std::span<const double>(row));
            for (std::size_t p = 0; p < g.nv(); ++p) row[p] -= mean * m_[p];
        }
        if (!g.all_finite()) throw NumericalError("micro step produced a non-finite field", s.step + 1);
        return g;
    }

    /// rho^{n+1}, solved per Fourier mode.
    std::vector<double> macro_step(const MacroMicroState& s, const PhaseSpaceField& g_next) const {
        const auto& vg = disc_.velocity;
        const std::size_t nx = s.rho.size();
        const double dx = disc_.space.spacing();

        std::vector<double> coupling(nx, 0.0);
        if (model_.kind() == CaseKind::Degenerate) {
            coupling = weighted_moment(g_next, nu_, vg);
            for (double& c : coupling) c /= nu_m_;
        }
        std::vector<double> flux_moment(nx);
        std::vector<double> tmp(vg.size());
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t p = 0; p < vg.size(); ++p) {
                const double v = vg.node(p);
                tmp[p] = moment_weight_[p] * upwind_column(s.g, i, p, v, dx);
            }
            flux_moment[i] = disc_.eps * vg.bracket_values(std::span<const double>(tmp));
        }

        std::vector<cplx> rho_hat(nx), coupling_hat(nx), flux_hat(nx);
        fourier_.forward_into(s.rho, rho_hat);
        fourier_.forward_into(coupling, coupling_hat);
        fourier_.forward_into(flux_moment, flux_hat);
        const double dt = disc_.dt;
        for (std::size_t i = 0; i < nx; ++i) {
            const double mult = multiplier_[i];
            const cplx forcing = mult * coupling_hat[i] + flux_hat[i];
            if (closure_ == MacroClosure::Implicit) {
                rho_hat[i] = (rho_hat[i] - dt * forcing) / (1.0 + dt * mult);
            } else {
                rho_hat[i] = rho_hat[i] - dt * (mult * rho_hat[i] + forcing);
            }
        }
        auto rho = fourier_.inverse(std::span<const cplx>(rho_hat));
        if (!std::all_of(rho.begin(), rho.end(), [](double x) { return std::isfinite(x); })) {
            throw NumericalError("macro step produced a non-finite density", s.step + 1);
        }
        return rho;
    }

    MacroMicroState advance(const MacroMicroState& s) const {
        auto g_next = micro_step(s);
        auto rho_next = macro_step(s, g_next);
        return {std::move(rho_next), std::move(g_next), s.step + 1};
    }

    /// rho_nu = rho <nu M_h>/<nu M_h> + <nu g>/<nu M_h>.
    std::vector<double> rho_nu(const MacroMicroState& s) const {
        auto out = weighted_moment(s.g, nu_, disc_.velocity);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.rho[i] + out[i] / nu_m_;
        return out;
    }

    DensitySeries run(const InitialData& f0, std::size_t record_every = 1) const {
        return run(decompose(f0), record_every);
    }

    DensitySeries run(MacroMicroState s, std::size_t record_every = 1) const {
        const std::size_t steps = disc_.steps();
        DensitySeries out;
        auto record = [&] {
            out.times.push_back(s.time(disc_.dt));
            out.rho.push_back(s.rho);
            out.rho_nu.push_back(rho_nu(s));
        };
        record();
        for (std::size_t n = 0; n < steps; ++n) {
            s = advance(s);
            if (should_record(n + 1, steps, record_every)) record();
        }
        return out;
    }

private:
    static double upwind_column(const PhaseSpaceField& f, std::size_t i, std::size_t p, double v, double dx) {
        const std::size_t n = f.nx();
        if (v > 0.0) return (f(i, p) - f((i + n - 1) % n, p)) / dx;
        return (f((i + 1) % n, p) - f(i, p)) / dx;
    }

    /// (I - Pi)(v D(rho M) + v D g) with upwind D. The projection is applied to
    /// the rho term too: with a sign-dependent stencil <v M D rho> is not zero
    /// (it is the upwind numerical diffusion), and leaving it in lets <g> drift.
    PhaseSpaceField transport(const MacroMicroState& s) const {
        const auto& vg = disc_.velocity;
        const std::size_t nx = s.rho.size();
        const double dx = disc_.space.spacing();
        PhaseSpaceField t(nx, vg.size());
        for (std::size_t i = 0; i < nx; ++i) {
            const double back = (s.rho[i] - s.rho[(i + nx - 1) % nx]) / dx;
            const double fwd = (s.rho[(i + 1) % nx] - s.rho[i]) / dx;
            auto row = t.row(i);
            for (std::size_t p = 0; p < vg.size(); ++p) {
                const double v = vg.node(p);
                row[p] = v * m_[p] * (v > 0.0 ? back : fwd) + v * upwind_column(s.g, i, p, v, dx);
            }
            const double mean = vg.bracket_values(std::span<const double>(row));
            for (std::size_t p = 0; p < vg.size(); ++p) row[p] -= mean * m_[p];
        }
        return t;
    }

    void warn_if_unstable() const {
        const auto& vg = disc_.velocity;
        const double dx = disc_.space.spacing();
        const double eps_factor = disc_.dt * disc_.eps / eps_alpha_;
        for (std::size_t p = 0; p < vg.size(); ++p) {
            const double c = eps_factor * std::abs(vg.node(p)) / dx;
            const double d = disc_.dt * nu_[p] / eps_alpha_;
            if (c > 1.0 + 0.5 * d) {
                std::cerr << "warning: explicit micro transport may be unstable (Courant number " << c
                          << " at |v| = " << std::abs(vg.node(p)) << ")\n";
                return;
            }
        }
    }

    ModelCase model_;
    Discretization disc_;
    MacroClosure closure_;
    mutable FourierTransform fourier_;
    double eps_alpha_ = 1.0;
    double nu_m_ = 1.0;
    double extraction_denominator_ = 1.0;
    std::vector<double> m_;
    std::vector<double> nu_;
    std::vector<double> lambda_;
    std::vector<double> keep_;
    std::vector<double> flux_;
    std::vector<double> moment_weight_;
    std::vector<double> multiplier_;
};

}  // namespace anodiff
