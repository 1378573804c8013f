#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "convdrift/errors.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

/// Gaussian naive Bayes over the PCA features; reference baseline only.
struct NaiveBayesModel {
    // index 0 = Real, 1 = Fake
    double log_prior[2] = {0.0, 0.0};
    std::vector<double> mean[2];
    std::vector<double> variance[2];  // floored at 1e-9
};

inline NaiveBayesModel train_naive_bayes(const std::vector<FeatureVector>& vectors,
                                         const std::vector<Label>& labels) {
    if (vectors.size() != labels.size()) throw LengthMismatch("train_naive_bayes: vectors vs labels");
    if (vectors.empty()) throw InsufficientData("train_naive_bayes: empty training set");
    const std::size_t d = vectors[0].dim();

    std::size_t counts[2] = {0, 0};
    for (const Label l : labels) counts[l == Label::Fake ? 1 : 0] += 1;
    if (counts[0] == 0 || counts[1] == 0) {
        throw SingleClassTrainingSet("train_naive_bayes: both classes required");
    }

    NaiveBayesModel model;
    for (int c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(static_cast<double>(counts[c]) /
                                      static_cast<double>(vectors.size()));
        model.mean[c].assign(d, 0.0);
        model.variance[c].assign(d, 0.0);
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const int c = labels[i] == Label::Fake ? 1 : 0;
        for (std::size_t j = 0; j < d; ++j) model.mean[c][j] += vectors[i].values[j];
    }
    for (int c = 0; c < 2; ++c) {
        for (std::size_t j = 0; j < d; ++j) model.mean[c][j] /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const int c = labels[i] == Label::Fake ? 1 : 0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = vectors[i].values[j] - model.mean[c][j];
            model.variance[c][j] += diff * diff;
        }
    }
    for (int c = 0; c < 2; ++c) {
        for (std::size_t j = 0; j < d; ++j) {
            model.variance[c][j] =
                std::max(model.variance[c][j] / static_cast<double>(counts[c]), 1e-9);
        }
    }
    return model;
}

inline double nb_log_posterior(const NaiveBayesModel& model, int c, std::span<const double> v) {
    double lp = model.log_prior[c];
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double var = model.variance[c][j];
        const double diff = v[j] - model.mean[c][j];
        lp += -0.5 * std::log(2.0 * std::numbers::pi * var) - diff * diff / (2.0 * var);
    }
    return lp;
}

inline Label predict_naive_bayes(const NaiveBayesModel& model, std::span<const double> v) {
    return nb_log_posterior(model, 1, v) >= nb_log_posterior(model, 0, v) ? Label::Fake
                                                                          : Label::Real;
}

}  // namespace convdrift
