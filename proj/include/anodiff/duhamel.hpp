#pragma once

#include "discretization.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "spectral.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace anodiff {

/// Per-mode coefficients of the Duhamel recursion. b[j], c[j] for lags
/// 0..N, the step denominator, and samples a0[n] = A0(t_n, k).
struct CoefficientTable {
    double wavenumber = 0.0;
    std::vector<cplx> b;
    std::vector<cplx> c;
    std::vector<cplx> a0;
    cplx denominator = 1.0;

    std::size_t lags() const noexcept { return c.size(); }
};

/// Stored rho_nu_hat^0 .. rho_nu_hat^n for every mode.
class HistoryBuffer {
public:
    explicit HistoryBuffer(std::size_t modes = 0) : values_(modes) {}

    std::size_t modes() const noexcept { return values_.size(); }
    std::size_t length(std::size_t mode) const noexcept { return values_[mode].size(); }
    void push(std::size_t mode, cplx value) { values_[mode].push_back(value); }
    cplx at(std::size_t mode, std::size_t n) const { return values_[mode].at(n); }
    std::span<const cplx> mode(std::size_t i) const noexcept { return values_[i]; }

    void reserve(std::size_t n) {
        for (auto& v : values_) v.reserve(n);
    }

private:
    std::vector<std::vector<cplx>> values_;
};

/// Work done so far; lets tests check the table/history cost model.
struct DuhamelCounters {
    std::size_t tables_built = 0;
    std::size_t table_entries = 0;     // (mode, lag, node) kernel evaluations
    std::size_t history_terms = 0;     // (mode, step, lag) products in the history sums
};

/// Uniformly accurate scheme from the Duhamel form of the kinetic equation,
/// with rho_nu linear in time on each step and the s-integrals done in
/// closed form. Works on rho_nu_hat only; f is recovered on demand.
class DuhamelScheme {
public:
    DuhamelScheme(const ModelCase& model, const Discretization& disc, const InitialData& f0)
        : model_(model), disc_(disc), fourier_(disc.space) {
        disc_.validate();
        const auto& vg = disc_.velocity;
        eps_a_ = std::pow(disc_.eps, model_.alpha());
        tau_ = disc_.dt / eps_a_;
        steps_ = disc_.steps();
        m_ = discrete_equilibrium(model_, vg);
        nu_ = sample_collision_frequency(model_, vg);
        std::vector<double> tmp(vg.size());
        for (std::size_t p = 0; p < vg.size(); ++p) tmp[p] = nu_[p] * m_[p];
        nu_m_ = vg.bracket_values(tmp);
        f0_hat_ = to_spectral(f0.sample(model_, disc_.space, vg), fourier_);
        tables_.resize(fourier_.wavenumbers().size());
        build_plain_brackets();
    }

    const Discretization& discretization() const noexcept { return disc_; }
    const DuhamelCounters& counters() const noexcept { return counters_; }
    double nu_m() const noexcept { return nu_m_; }
    std::size_t modes() const noexcept { return tables_.size(); }
    double wavenumber(std::size_t mode) const { return fourier_.wavenumbers()[mode]; }
    const SpectralField& initial_spectrum() const noexcept { return f0_hat_; }

    /// A0(t, k) = < exp(-(t/eps^alpha)(nu + i eps k v)) nu f0_hat > / <nu M>.
    cplx a0(double t, std::size_t mode) const {
        const auto& vg = disc_.velocity;
        const double k = wavenumber(mode);
        const double s = t / eps_a_;
        const auto f = f0_hat_.row(mode);
        std::vector<cplx> tmp(vg.size());
        for (std::size_t p = 0; p < vg.size(); ++p) {
            const cplx a(nu_[p], disc_.eps * k * vg.node(p));
            tmp[p] = std::exp(-a * s) * nu_[p] * f[p];
        }
        const cplx out = vg.bracket_values(std::span<const cplx>(tmp)) / nu_m_;
        return std::abs(out) < 1e-300 ? cplx(0.0) : out;
    }

    /// (b_j, c_j) for wavenumber k: plain-grid bracket at k = 0 plus the
    /// substituted-grid bracket of the k-dependent difference.
    std::pair<cplx, cplx> coefficients(std::size_t j, double k) const {
        if (j > steps_) throw ConfigError("duhamel coefficients: lag beyond the final time");
        const auto [sb, sc] = second_brackets(k, j, j + 1);
        return {plain_b_[j] + sb[0], plain_c_[j] + sc[0]};
    }

    /// Coefficient table for a mode, built on first use for lags 0..N.
    const CoefficientTable& table(std::size_t mode) const {
        auto& slot = tables_.at(mode);
        if (!slot) slot = build_table(mode);
        return *slot;
    }

    /// rho_nu_hat^{n+1} for one mode from the history through step n.
    cplx step(const HistoryBuffer& history, std::size_t mode, std::size_t n) const {
        const auto& t = table(mode);
        if (n + 1 >= t.lags()) throw ConfigError("duhamel step beyond the final time");
        if (history.length(mode) < n + 1) throw ConfigError("duhamel step: history too short");
        const auto rho = history.mode(mode);
        cplx sum = t.b[0] * rho[n];
        for (std::size_t j = 1; j <= n; ++j) sum += (t.c[j] - t.b[j]) * rho[n + 1 - j] + t.b[j] * rho[n - j];
        counters_.history_terms += n + 1;
        const cplx out = (t.a0[n + 1] + sum / nu_m_) / t.denominator;
        if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
            throw NumericalError("duhamel step produced a non-finite density", n + 1);
        }
        return out;
    }

    /// rho_nu_hat^0 for every mode, i.e. <nu f0_hat>/<nu M>.
    HistoryBuffer initial_history() const {
        HistoryBuffer h(modes());
        h.reserve(steps_ + 1);
        for (std::size_t i = 0; i < modes(); ++i) h.push(i, a0(0.0, i));
        return h;
    }

    /// Advance every mode to step `target`.
    void advance(HistoryBuffer& history, std::size_t target) const {
        for (std::size_t i = 0; i < modes(); ++i) {
            while (history.length(i) <= target) history.push(i, step(history, i, history.length(i) - 1));
        }
    }

    /// f_hat^n from the history: free transport-relaxation of f0 plus the
    /// gain term with the same piecewise-linear rho_nu and kernels.
    SpectralField reconstruct_f(const HistoryBuffer& history, std::size_t n) const {
        const auto& vg = disc_.velocity;
        SpectralField out(modes(), vg.size());
        const double t = static_cast<double>(n) * disc_.dt;
        for (std::size_t i = 0; i < modes(); ++i) {
            if (history.length(i) < n + 1) throw ConfigError("reconstruct_f: history too short");
            const auto rho = history.mode(i);
            const double k = wavenumber(i);
            for (std::size_t p = 0; p < vg.size(); ++p) {
                const cplx a(nu_[p], disc_.eps * k * vg.node(p));
                cplx value = std::exp(-a * (t / eps_a_)) * f0_hat_(i, p);
                if (n > 0) {
                    const cplx e0 = kernel_e0(a, tau_);
                    const cplx e1 = kernel_e1(a, tau_);
                    cplx gain = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        const cplx decay = std::exp(-a * (static_cast<double>(j) * tau_));
                        if (decay == 0.0) break;
                        gain += decay * ((e0 - e1) * rho[n - j] + e1 * rho[n - 1 - j]);
                    }
                    value += nu_[p] * m_[p] * gain;
                }
                out(i, p) = value;
            }
        }
        return out;
    }

    /// rho_nu on the x-grid at the recorded steps (`rho` stays empty).
    DensitySeries run(std::size_t record_every = 1) const {
        auto history = initial_history();
        advance(history, steps_);
        DensitySeries out;
        std::vector<cplx> hat(modes());
        for (std::size_t n = 0; n <= steps_; ++n) {
            if (!should_record(n, steps_, record_every)) continue;
            for (std::size_t i = 0; i < modes(); ++i) hat[i] = history.at(i, n);
            out.times.push_back(static_cast<double>(n) * disc_.dt);
            out.rho_nu.push_back(fourier_.inverse(std::span<const cplx>(hat)));
        }
        return out;
    }

private:
    // First brackets <nu^2 M e^{-nu s_j} E(nu, tau)> are k-independent. With
    // nu E0(nu, tau) = 1 - e^{-nu tau} the c_j form telescopes exactly.
    void build_plain_brackets() {
        const auto& vg = disc_.velocity;
        const std::size_t nv = vg.size();
        plain_b_.assign(steps_ + 1, 0.0);
        plain_c_.assign(steps_ + 1, 0.0);
        std::vector<double> tb(nv), tc(nv), tk(nv);
        for (std::size_t p = 0; p < nv; ++p) tk[p] = nu_[p] * m_[p] * std::exp(-nu_[p] * tau_);
        keep_bracket_ = vg.bracket_values(tk);
        for (std::size_t j = 0; j <= steps_; ++j) {
            const double s = static_cast<double>(j) * tau_;
            for (std::size_t p = 0; p < nv; ++p) {
                const double decay = std::exp(-nu_[p] * s);
                const double e1 = kernel_e1(cplx(nu_[p]), tau_).real();
                tc[p] = nu_[p] * m_[p] * decay * -std::expm1(-nu_[p] * tau_);
                tb[p] = nu_[p] * nu_[p] * m_[p] * decay * e1;
            }
            plain_b_[j] = vg.bracket_values(tb);
            plain_c_[j] = vg.bracket_values(tc);
        }
    }

    /// Per positive substituted node: weight * nu^2 M |dv/dw|, a(w) and nu(w).
    struct SubstitutedNode {
        double weight;
        double nu;
        cplx a;
    };

    std::vector<SubstitutedNode> substituted_nodes(double k) const {
        const auto& sg = disc_.substituted;
        const auto w = sg.positive_nodes();
        const auto wt = sg.positive_weights();
        const double k_abs = std::abs(k);
        const double sign = k < 0.0 ? -1.0 : 1.0;
        std::vector<SubstitutedNode> out(w.size());
        for (std::size_t q = 0; q < w.size(); ++q) {
            const auto [v, jac] = inverse_substitution(model_, w[q], k_abs, disc_.eps, 1.0);
            const double nu = model_.collision_frequency(v);
            // eps k v = sign(k) w (heavy tail) or sign(k) nu w (degenerate)
            const double im = model_.kind() == CaseKind::HeavyTail ? sign * w[q] : sign * nu * w[q];
            out[q] = {wt[q] * nu * nu * model_.equilibrium(v) * jac, nu, cplx(nu, im)};
        }
        return out;
    }

    /// Second brackets of (b_j, c_j) for lags [first, last). Nodes +w and -w
    /// carry conjugate a, so each pair sums to twice the real part.
    std::pair<std::vector<double>, std::vector<double>> second_brackets(double k, std::size_t first,
                                                                        std::size_t last) const {
        std::vector<double> sb(last - first, 0.0), sc(last - first, 0.0);
        if (k == 0.0) return {sb, sc};
        const auto nodes = substituted_nodes(k);
        std::vector<cplx> e0(nodes.size()), e1(nodes.size());
        std::vector<double> r0(nodes.size()), r1(nodes.size());
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            e0[q] = kernel_e0(nodes[q].a, tau_);
            e1[q] = kernel_e1(nodes[q].a, tau_);
            r0[q] = kernel_e0(cplx(nodes[q].nu), tau_).real();
            r1[q] = kernel_e1(cplx(nodes[q].nu), tau_).real();
        }
        for (std::size_t j = first; j < last; ++j) {
            const double s = static_cast<double>(j) * tau_;
            double b = 0.0, c = 0.0;
            for (std::size_t q = 0; q < nodes.size(); ++q) {
                const cplx decay = std::exp(-nodes[q].a * s);
                const double real_decay = std::exp(-nodes[q].nu * s);
                c += nodes[q].weight * ((decay * e0[q]).real() - real_decay * r0[q]);
                b += nodes[q].weight * ((decay * e1[q]).real() - real_decay * r1[q]);
            }
            sb[j - first] = 2.0 * b;
            sc[j - first] = 2.0 * c;
        }
        counters_.table_entries += (last - first) * nodes.size();
        return {sb, sc};
    }

    CoefficientTable build_table(std::size_t mode) const {
        const double k = wavenumber(mode);
        CoefficientTable t;
        t.wavenumber = k;
        const std::size_t lags = steps_ + 1;
        t.b.resize(lags);
        t.c.resize(lags);
        t.a0.resize(lags);
        for (std::size_t j = 0; j < lags; ++j) {
            t.b[j] = plain_b_[j];
            t.c[j] = plain_c_[j];
            t.a0[j] = a0(static_cast<double>(j) * disc_.dt, mode);
        }
        const auto [sb, sc] = second_brackets(k, 0, lags);
        for (std::size_t j = 0; j < lags; ++j) {
            t.b[j] += sb[j];
            t.c[j] += sc[j];
        }
        const double second_c0 = sc[0];
        // 1 - (c_0 - b_0)/<nu M> with the plain part of c_0 written as
        // <nu M> - <nu M e^{-nu tau}> to avoid cancellation when tau is large.
        t.denominator = (keep_bracket_ - second_c0 + t.b[0]) / nu_m_;
        if (std::abs(t.denominator) == 0.0 || !std::isfinite(std::abs(t.denominator))) {
            throw NumericalError("duhamel step denominator vanished", 0);
        }
        ++counters_.tables_built;
        return t;
    }

    ModelCase model_;
    Discretization disc_;
    mutable FourierTransform fourier_;
    double eps_a_ = 1.0;
    double tau_ = 1.0;
    std::size_t steps_ = 0;
    double nu_m_ = 1.0;
    double keep_bracket_ = 0.0;
    std::vector<double> m_;
    std::vector<double> nu_;
    std::vector<double> plain_b_;
    std::vector<double> plain_c_;
    SpectralField f0_hat_;
    mutable std::vector<std::optional<CoefficientTable>> tables_;
    mutable DuhamelCounters counters_;
};

}  // namespace anodiff
