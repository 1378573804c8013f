#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "convdrift/errors.hpp"
#include "convdrift/kernel.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

/// One-class SVM: learns a boundary around the training window. nu upper
/// bounds the fraction of training points allowed outside.
struct OcSvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> alphas;  // non-negative, sum to 1
    double rho = 0.0;
    Kernel kernel;
    double nu = 0.3;

    bool converged = false;
    double final_violation = 0.0;
};

struct OcSvmTrainOptions {
    double tolerance = 1e-4;
    int max_sweeps = 2000;
};

namespace detail {

/// Core solver without the public window-size precondition; the drift
/// detector's short-conversation fallback fits reference halves of size 2.
inline OcSvmModel fit_ocsvm_unchecked(const std::vector<FeatureVector>& window, double nu,
                                      Kernel kernel, const OcSvmTrainOptions& opts) {
    const std::size_t n = window.size();
    if (n == 0) throw InsufficientWindow("fit_ocsvm: empty window");
    if (nu <= 0.0 || nu > 1.0) throw InvalidParams("fit_ocsvm: nu must be in (0, 1]");
    for (const auto& fv : window) {
        if (!all_finite(fv.values)) throw InvalidParams("fit_ocsvm: non-finite input");
    }

    std::vector<std::vector<double>> K(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            K[i][j] = K[j][i] = kernel(window[i].values, window[j].values);
        }
    }

    // Dual: min 1/2 a'Ka  s.t.  sum a = 1,  0 <= a_i <= 1/(nu n).
    const double cap = 1.0 / (nu * static_cast<double>(n));
    std::vector<double> alpha(n, 0.0);
    {
        double remaining = 1.0;
        for (std::size_t i = 0; i < n && remaining > 0.0; ++i) {
            alpha[i] = std::min(cap, remaining);
            remaining -= alpha[i];
        }
    }
    std::vector<double> grad(n, 0.0);  // g = K a
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += K[i][j] * alpha[j];
        grad[i] = s;
    }

    OcSvmModel model;
    model.kernel = kernel;
    model.nu = nu;

    double violation = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < opts.max_sweeps && !model.converged; ++sweep) {
        for (std::size_t step = 0; step < n; ++step) {
            // mass moves from the steepest ascent coordinate to the steepest
            // descent coordinate; optimal when max_{a>0} g - min_{a<cap} g <= tol
            double g_min = std::numeric_limits<double>::infinity();
            double g_max = -std::numeric_limits<double>::infinity();
            std::size_t i_min = n;
            std::size_t i_max = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (alpha[i] < cap && grad[i] < g_min) {
                    g_min = grad[i];
                    i_min = i;
                }
                if (alpha[i] > 0.0 && grad[i] > g_max) {
                    g_max = grad[i];
                    i_max = i;
                }
            }
            violation = g_max - g_min;
            if (i_min == n || i_max == n || violation <= opts.tolerance) {
                model.converged = violation <= opts.tolerance;
                break;
            }
            double quad = K[i_min][i_min] + K[i_max][i_max] - 2.0 * K[i_min][i_max];
            if (quad <= 1e-12) quad = 1e-12;
            double t = violation / quad;
            t = std::min({t, cap - alpha[i_min], alpha[i_max]});
            if (t <= 0.0) break;
            alpha[i_min] = std::min(alpha[i_min] + t, cap);
            alpha[i_max] = std::max(alpha[i_max] - t, 0.0);
            for (std::size_t k2 = 0; k2 < n; ++k2) {
                grad[k2] += t * (K[k2][i_min] - K[k2][i_max]);
            }
        }
    }
    model.final_violation = violation;

    // rho makes f vanish on the free support vectors. Within the solver
    // tolerance any free gradient is admissible; taking the smallest one puts
    // the boundary at the window's own least typical inlier, so only points
    // at the capped-dual level score negative and the nu bound on training
    // outliers holds with margin.
    double free_min = std::numeric_limits<double>::infinity();
    const double bound_eps = 1e-10;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > bound_eps && alpha[i] < cap - bound_eps) {
            free_min = std::min(free_min, grad[i]);
        }
    }
    if (std::isfinite(free_min)) {
        model.rho = free_min;
    } else {
        // no free duals: boundary at the level of the capped vectors
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] >= cap - bound_eps) hi = std::max(hi, grad[i]);
        }
        model.rho = std::isfinite(hi) ? hi : 0.0;
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 1e-12) {
            model.support_vectors.push_back(window[i].values);
            model.alphas.push_back(alpha[i]);
        }
    }
    return model;
}

}  // namespace detail

/// Solves the nu-parameterized one-class dual by sequential pairwise
/// optimization. Decision function: f(v) = sum_i alpha_i K(x_i, v) - rho;
/// f(v) < 0 marks v as an outlier.
inline OcSvmModel fit_ocsvm(const std::vector<FeatureVector>& window, double nu,
                            double gamma, const OcSvmTrainOptions& opts = {}) {
    if (window.size() < 3) {
        throw InsufficientWindow("fit_ocsvm: need at least 3 vectors");
    }
    return detail::fit_ocsvm_unchecked(window, nu, Kernel::rbf(gamma), opts);
}

inline double ocsvm_score(const OcSvmModel& model, std::span<const double> v) {
    double s = -model.rho;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        s += model.alphas[i] * model.kernel(model.support_vectors[i], v);
    }
    return s;
}

inline bool ocsvm_is_outlier(const OcSvmModel& model, std::span<const double> v) {
    return ocsvm_score(model, v) < 0.0;
}

}  // namespace convdrift
