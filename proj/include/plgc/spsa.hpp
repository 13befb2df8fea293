#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plgc/circuit.hpp"
#include "plgc/random.hpp"

namespace plgc {

struct SpsaConfig {
    int max_iterations = 300;
    double a0 = 0.0;  // <= 0 requests auto-calibration from probe gradients
    double c0 = 0.1;
    double alpha = 0.602;
    double gamma = 0.101;
    double stability_offset = -1.0;  // < 0 requests 0.1 * max_iterations
    uint64_t seed = 0;

    void validate() const {
        if (max_iterations < 1) {
            throw std::invalid_argument("spsa needs at least one iteration");
        }
        if (!(alpha > 0.0) || !(gamma > 0.0)) {
            throw std::invalid_argument("spsa decay exponents must be positive");
        }
        if (!(c0 > 0.0)) {
            throw std::invalid_argument("spsa perturbation scale c0 must be positive");
        }
    }
};

struct SpsaResult {
    ParamVector best_thetas;
    double best_value = 0.0;
    // Objective evaluated at the iterate after each update; length = max_iterations.
    std::vector<double> trace;
};

using Objective = std::function<double(const ParamVector&)>;

namespace detail {

inline double checked_eval(const Objective& objective, const std::vector<double>& raw,
                           int iteration) {
    const double value = objective(ParamVector(raw));
    if (!std::isfinite(value)) {
        throw std::runtime_error("objective returned non-finite value " +
                                 std::to_string(value) + " at iteration " +
                                 std::to_string(iteration));
    }
    return value;
}

}  // namespace detail

// Minimizes a deterministic objective with simultaneous-perturbation gradient
// estimates: theta_{k+1} = theta_k - a_k g_k, where g_k comes from two
// evaluations at theta_k +- c_k Delta_k with Rademacher Delta_k,
// a_k = a0 / (k+1+A)^alpha and c_k = c0 / (k+1)^gamma. Returns the lowest
// evaluated point seen anywhere, not the final iterate. Bit-reproducible for a
// fixed seed.
inline SpsaResult spsa_minimize(const Objective& objective, const ParamVector& theta0,
                                const SpsaConfig& cfg) {
    cfg.validate();
    const std::size_t dim = theta0.size();
    if (dim == 0) {
        throw std::invalid_argument("spsa needs at least one parameter");
    }
    const double offset =
        (cfg.stability_offset < 0.0) ? 0.1 * cfg.max_iterations : cfg.stability_offset;

    Rng rng(cfg.seed);
    std::vector<double> theta = theta0.thetas;
    std::vector<double> delta(dim), trial(dim);

    double best_value = detail::checked_eval(objective, theta, 0);
    std::vector<double> best_theta = theta;
    auto consider = [&](double value, const std::vector<double>& point) {
        if (value < best_value) {
            best_value = value;
            best_theta = point;
        }
    };

    // Probe gradients at theta0 calibrate a0 so the first step is about
    // 0.1 rad in the infinity norm.
    double a0 = cfg.a0;
    if (a0 <= 0.0) {
        double mean_g = 0.0;
        const int n_probes = 10;
        for (int probe = 0; probe < n_probes; ++probe) {
            for (std::size_t i = 0; i < dim; ++i) delta[i] = rng.rademacher();
            for (std::size_t i = 0; i < dim; ++i) trial[i] = theta[i] + cfg.c0 * delta[i];
            const double f_plus = detail::checked_eval(objective, trial, 0);
            consider(f_plus, trial);
            for (std::size_t i = 0; i < dim; ++i) trial[i] = theta[i] - cfg.c0 * delta[i];
            const double f_minus = detail::checked_eval(objective, trial, 0);
            consider(f_minus, trial);
            mean_g += std::abs(f_plus - f_minus) / (2.0 * cfg.c0);
        }
        mean_g /= n_probes;
        a0 = 0.1 * std::pow(1.0 + offset, cfg.alpha) / std::max(mean_g, 1e-6);
    }

    SpsaResult result;
    result.trace.reserve(cfg.max_iterations);
    for (int k = 0; k < cfg.max_iterations; ++k) {
        const double a_k = a0 / std::pow(k + 1.0 + offset, cfg.alpha);
        const double c_k = cfg.c0 / std::pow(k + 1.0, cfg.gamma);
        for (std::size_t i = 0; i < dim; ++i) delta[i] = rng.rademacher();

        for (std::size_t i = 0; i < dim; ++i) trial[i] = theta[i] + c_k * delta[i];
        const double f_plus = detail::checked_eval(objective, trial, k);
        consider(f_plus, trial);
        for (std::size_t i = 0; i < dim; ++i) trial[i] = theta[i] - c_k * delta[i];
        const double f_minus = detail::checked_eval(objective, trial, k);
        consider(f_minus, trial);

        const double slope = (f_plus - f_minus) / (2.0 * c_k);
        for (std::size_t i = 0; i < dim; ++i) theta[i] -= a_k * slope * delta[i];

        const double f_iter = detail::checked_eval(objective, theta, k);
        consider(f_iter, theta);
        result.trace.push_back(f_iter);
    }

    result.best_thetas = ParamVector(std::move(best_theta));
    result.best_value = best_value;
    return result;
}

}  // namespace plgc
