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

/// Soft-margin binary SVM in dual form. Fake maps to +1, Real to -1, so a
/// positive decision score means Fake.
struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefs;  // alpha_i * y_i for the retained vectors
    double bias = 0.0;
    Kernel kernel;
    double C = 1.0;

    // solver diagnostics
    bool converged = false;
    double final_violation = 0.0;
    std::vector<double> sweep_objectives;  // dual objective after each sweep
};

struct SvmTrainOptions {
    double tolerance = 1e-3;
    int max_sweeps = 1000;  // one sweep = up to n pair updates
};

namespace detail {

inline int label_sign(Label l) { return l == Label::Fake ? 1 : -1; }

}  // namespace detail

/// Sequential pairwise optimization of the soft-margin dual:
///   min 1/2 a'Qa - e'a   s.t.  y'a = 0,  0 <= a_i <= C,   Q_ij = y_i y_j K_ij.
/// Each step picks the maximal violating pair and solves the two-variable
/// subproblem exactly, so the dual objective never decreases. Stops when the
/// KKT violation drops below tolerance or the sweep cap is reached (in which
/// case the best iterate is returned with converged=false).
inline SvmModel train_svm(const std::vector<FeatureVector>& vectors,
                          const std::vector<Label>& labels, double C, Kernel kernel,
                          const SvmTrainOptions& opts = {}) {
    const std::size_t n = vectors.size();
    if (n != labels.size()) throw LengthMismatch("train_svm: vectors vs labels");
    if (n < 2) throw InsufficientData("train_svm: need at least 2 points");
    if (C <= 0.0) throw InvalidParams("train_svm: C must be positive");
    bool has_pos = false;
    bool has_neg = false;
    for (const Label l : labels) (l == Label::Fake ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw SingleClassTrainingSet("train_svm: both classes required");

    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = detail::label_sign(labels[i]);

    // dense kernel matrix; training sets here are small
    std::vector<std::vector<double>> K(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            K[i][j] = K[j][i] = kernel(vectors[i].values, vectors[j].values);
        }
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // g = Qa - e

    auto dual_objective = [&] {
        // a'Qa = sum_i a_i (g_i + 1)
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) obj += alpha[i] * (1.0 - grad[i]);
        return 0.5 * obj;
    };

    SvmModel model;
    model.kernel = kernel;
    model.C = C;

    double violation = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < opts.max_sweeps && !model.converged; ++sweep) {
        for (std::size_t step = 0; step < n; ++step) {
            // maximal violating pair over -y_i g_i
            double up_best = -std::numeric_limits<double>::infinity();
            double low_best = std::numeric_limits<double>::infinity();
            std::size_t i_up = n;
            std::size_t i_low = n;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = -y[i] * grad[i];
                const bool in_up = (y[i] > 0 && alpha[i] < C) || (y[i] < 0 && alpha[i] > 0.0);
                const bool in_low = (y[i] < 0 && alpha[i] < C) || (y[i] > 0 && alpha[i] > 0.0);
                if (in_up && v > up_best) {
                    up_best = v;
                    i_up = i;
                }
                if (in_low && v < low_best) {
                    low_best = v;
                    i_low = i;
                }
            }
            violation = up_best - low_best;
            if (i_up == n || i_low == n || violation <= opts.tolerance) {
                model.converged = violation <= opts.tolerance;
                break;
            }

            const std::size_t i = i_up;
            const std::size_t j = i_low;
            double quad = K[i][i] + K[j][j] - 2.0 * K[i][j];
            if (quad <= 1e-12) quad = 1e-12;
            double t = violation / quad;
            t = std::min(t, y[i] > 0 ? C - alpha[i] : alpha[i]);
            t = std::min(t, y[j] > 0 ? alpha[j] : C - alpha[j]);
            if (t <= 0.0) break;  // numerically stuck at a bound

            alpha[i] = std::clamp(alpha[i] + y[i] * t, 0.0, C);
            alpha[j] = std::clamp(alpha[j] - y[j] * t, 0.0, C);
            for (std::size_t k = 0; k < n; ++k) {
                grad[k] += t * y[k] * (K[k][i] - K[k][j]);
            }
        }
        model.sweep_objectives.push_back(dual_objective());
    }
    model.final_violation = violation;

    // bias from the free support vectors, else the midpoint of the KKT gap
    double free_sum = 0.0;
    int free_count = 0;
    const double bound_eps = 1e-8 * C;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > bound_eps && alpha[i] < C - bound_eps) {
            free_sum += -y[i] * grad[i];
            ++free_count;
        }
    }
    if (free_count > 0) {
        model.bias = free_sum / free_count;
    } else {
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double v = -y[i] * grad[i];
            if ((y[i] > 0 && alpha[i] < C) || (y[i] < 0 && alpha[i] > 0.0)) {
                up_best = std::max(up_best, v);
            }
            if ((y[i] < 0 && alpha[i] < C) || (y[i] > 0 && alpha[i] > 0.0)) {
                low_best = std::min(low_best, v);
            }
        }
        model.bias = 0.5 * (up_best + low_best);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 1e-12) {
            model.support_vectors.push_back(vectors[i].values);
            model.dual_coefs.push_back(alpha[i] * y[i]);
        }
    }
    return model;
}

inline double svm_score(const SvmModel& model, std::span<const double> v) {
    double s = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        s += model.dual_coefs[i] * model.kernel(model.support_vectors[i], v);
    }
    return s;
}

inline Label predict_svm(const SvmModel& model, std::span<const double> v) {
    return svm_score(model, v) > 0.0 ? Label::Fake : Label::Real;
}

}  // namespace convdrift
