#pragma once

#include "errors.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace anodiff {

namespace detail {

template <typename T>
bool is_finite_value(const T& x) {
    if constexpr (std::is_floating_point_v<T>) {
        return std::isfinite(x);
    } else {
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    }
}

}  // namespace detail

/// Uniform periodic grid x_i = x_min + i*dx on [x_min, x_min + length).
class SpatialGrid {
public:
    explicit SpatialGrid(std::size_t count, double x_min = -1.0, double length = 2.0)
        : count_(count), x_min_(x_min), length_(length) {
        if (count < 2 || count % 2 != 0) {
            throw ConfigError("spatial grid needs an even number of points >= 2");
        }
        if (!(length > 0.0)) throw ConfigError("spatial period must be positive");
    }

    std::size_t size() const noexcept { return count_; }
    double spacing() const noexcept { return length_ / static_cast<double>(count_); }
    double length() const noexcept { return length_; }
    double x_min() const noexcept { return x_min_; }
    double node(std::size_t i) const noexcept { return x_min_ + spacing() * static_cast<double>(i); }

private:
    std::size_t count_;
    double x_min_;
    double length_;
};

/// Midpoints of N_v uniform cells on [-v_max, v_max]. Node p and node
/// N_v-1-p are exact negatives of each other and 0 is never a node.
class VelocityGrid {
public:
    VelocityGrid(double v_max, std::size_t count) : v_max_(v_max), count_(count) {
        if (!(v_max > 0.0)) throw ConfigError("v_max must be positive");
        if (count < 2 || count % 2 != 0) throw ConfigError("N_v must be even and >= 2");
        const std::size_t half = count / 2;
        nodes_.resize(count);
        for (std::size_t i = 0; i < half; ++i) {
            const double v = (static_cast<double>(i) + 0.5) * spacing();
            nodes_[half + i] = v;
            nodes_[half - 1 - i] = -v;
        }
    }

    double v_max() const noexcept { return v_max_; }
    std::size_t size() const noexcept { return count_; }
    double spacing() const noexcept { return 2.0 * v_max_ / static_cast<double>(count_); }
    double node(std::size_t p) const noexcept { return nodes_[p]; }
    std::span<const double> nodes() const noexcept { return nodes_; }

    /// Midpoint sum dv * sum_p values[p], accumulated over mirror pairs so
    /// that odd integrands cancel exactly.
    template <typename T>
    T bracket_values(std::span<const T> values) const {
        const std::size_t n = count_;
        T sum{};
        for (std::size_t p = 0; p < n / 2; ++p) sum += values[n / 2 + p] + values[n / 2 - 1 - p];
        return sum * spacing();
    }

    template <typename T>
    T bracket_values(const std::vector<T>& values) const {
        return bracket_values(std::span<const T>(values));
    }

    /// Midpoint bracket of fn over the grid. Throws on non-finite samples.
    template <typename Fn>
    auto bracket(Fn&& fn) const {
        using T = std::decay_t<decltype(fn(0.0))>;
        const std::size_t half = count_ / 2;
        T sum{};
        for (std::size_t p = 0; p < half; ++p) {
            const T a = fn(nodes_[half + p]);
            const T b = fn(nodes_[half - 1 - p]);
            if (!detail::is_finite_value(a) || !detail::is_finite_value(b)) {
                throw std::domain_error("bracket: non-finite integrand at |v| = " +
                                        std::to_string(nodes_[half + p]));
            }
            sum += a + b;
        }
        return sum * spacing();
    }

private:
    double v_max_;
    std::size_t count_;
    std::vector<double> nodes_;
};

/// Symmetric graded midpoint rule on the whole real line for the substituted
/// velocity variable w. With u the midpoints of N_w/2 uniform cells of (0,1),
///
///     w(u) = scale * u^p / (1-u)^q,
///
/// mirrored to negative w. The exponents p, q grade the nodes toward 0 and
/// infinity so that power-law integrands |w|^a near 0 and |w|^b near infinity
/// become smooth in u (see make_substituted_grid). w = 0 is never a node.
class SubstitutedGrid {
public:
    SubstitutedGrid(double scale, std::size_t count, double grading_zero = 1.0,
                    double grading_infinity = 1.0)
        : scale_(scale), count_(count), p_(grading_zero), q_(grading_infinity) {
        if (!(scale > 0.0)) throw ConfigError("substituted grid scale must be positive");
        if (count < 2 || count % 2 != 0) throw ConfigError("N_w must be even and >= 2");
        if (!(p_ > 0.0) || !(q_ > 0.0)) throw ConfigError("grading exponents must be positive");
        const std::size_t half = count / 2;
        const double du = 1.0 / static_cast<double>(half);
        nodes_.resize(half);
        weights_.resize(half);
        for (std::size_t i = 0; i < half; ++i) {
            const double u = (static_cast<double>(i) + 0.5) * du;
            const double w = scale_ * std::pow(u, p_) / std::pow(1.0 - u, q_);
            nodes_[i] = w;
            weights_[i] = w * (p_ / u + q_ / (1.0 - u)) * du;
        }
    }

    double scale() const noexcept { return scale_; }
    std::size_t size() const noexcept { return count_; }
    double grading_zero() const noexcept { return p_; }
    double grading_infinity() const noexcept { return q_; }

    /// Positive half of the nodes, increasing; the grid also holds their negatives.
    std::span<const double> positive_nodes() const noexcept { return nodes_; }
    std::span<const double> positive_weights() const noexcept { return weights_; }

    /// Graded midpoint approximation of the full-line integral of fn.
    template <typename Fn>
    auto bracket(Fn&& fn) const {
        using T = std::decay_t<decltype(fn(0.0))>;
        T sum{};
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const T a = fn(nodes_[i]);
            const T b = fn(-nodes_[i]);
            if (!detail::is_finite_value(a) || !detail::is_finite_value(b)) {
                throw std::domain_error("bracket: non-finite integrand at |w| = " +
                                        std::to_string(nodes_[i]));
            }
            sum += weights_[i] * (a + b);
        }
        return sum;
    }

    /// Same as bracket() for integrands known to be even in w.
    template <typename Fn>
    auto even_bracket(Fn&& fn) const {
        using T = std::decay_t<decltype(fn(0.0))>;
        T sum{};
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const T a = fn(nodes_[i]);
            if (!detail::is_finite_value(a)) {
                throw std::domain_error("bracket: non-finite integrand at |w| = " +
                                        std::to_string(nodes_[i]));
            }
            sum += weights_[i] * a;
        }
        return T(2.0) * sum;
    }

private:
    double scale_;
    std::size_t count_;
    double p_;
    double q_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

}  // namespace anodiff
