#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "convdrift/errors.hpp"
#include "convdrift/math.hpp"
#include "convdrift/tfidf.hpp"

namespace convdrift {

/// How many principal components to keep: either a fixed count or the
/// smallest count whose cumulative explained variance reaches a fraction.
struct PcaTarget {
    enum class Kind { Count, VarianceFraction } kind = Kind::VarianceFraction;
    int count = 0;
    double fraction = 0.95;
    int max_dims = 0;  // 0 = uncapped; applies to both kinds

    static PcaTarget dims(int k) { return {Kind::Count, k, 0.0, 0}; }
    static PcaTarget variance(double f, int cap = 0) {
        return {Kind::VarianceFraction, 0, f, cap};
    }
};

struct PcaModel {
    std::vector<double> mean;                      // d
    std::vector<std::vector<double>> components;   // k rows, each of length d
    std::vector<double> explained_variance;        // k, non-increasing
    std::vector<double> projected_mean;            // components * mean, cached

    int input_dim() const { return static_cast<int>(mean.size()); }
    int output_dim() const { return static_cast<int>(components.size()); }

    void refresh_projected_mean() {
        projected_mean.assign(components.size(), 0.0);
        for (std::size_t k = 0; k < components.size(); ++k) {
            projected_mean[k] = dot(components[k], mean);
        }
    }
};

/// PCA via thin SVD of the centered data matrix. Rank deficiency is not an
/// error: the kept dimension is clamped to the numerical rank.
inline PcaModel fit_pca(const std::vector<std::vector<double>>& rows, PcaTarget target) {
    const std::size_t n = rows.size();
    if (n < 2) throw DegenerateInput("fit_pca: need at least 2 rows");
    const std::size_t d = rows[0].size();
    for (const auto& r : rows) {
        if (r.size() != d) throw DimensionMismatch("fit_pca: ragged input matrix");
    }
    if (target.kind == PcaTarget::Kind::Count &&
        (target.count < 1 ||
         target.count > static_cast<int>(std::min(n - 1, d)))) {
        throw InvalidParams("fit_pca: component count out of range");
    }

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();

    std::vector<double> variances(static_cast<std::size_t>(sigma.size()));
    double total_variance = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        variances[static_cast<std::size_t>(i)] =
            sigma(i) * sigma(i) / static_cast<double>(n - 1);
        total_variance += variances[static_cast<std::size_t>(i)];
    }

    // numerical rank
    const double rank_tol = sigma.size() > 0
        ? sigma(0) * static_cast<double>(std::max(n, d)) * 1e-14
        : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > rank_tol) ++rank;
    }
    rank = std::max(rank, 1);

    int k;
    if (target.kind == PcaTarget::Kind::Count) {
        k = std::min(target.count, rank);
    } else {
        k = rank;
        if (total_variance > 0.0) {
            double cum = 0.0;
            for (int i = 0; i < rank; ++i) {
                cum += variances[static_cast<std::size_t>(i)];
                // small slack so exact-boundary fractions are not lost to rounding
                if (cum / total_variance >= target.fraction - 1e-12) {
                    k = i + 1;
                    break;
                }
            }
        }
    }
    if (target.max_dims > 0) k = std::min(k, target.max_dims);
    k = std::max(k, 1);

    PcaModel model;
    model.mean.assign(mean.data(), mean.data() + mean.size());
    model.components.resize(static_cast<std::size_t>(k));
    model.explained_variance.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const auto col = svd.matrixV().col(i);
        model.components[static_cast<std::size_t>(i)].assign(col.data(), col.data() + col.size());
        model.explained_variance[static_cast<std::size_t>(i)] = variances[static_cast<std::size_t>(i)];
    }
    model.refresh_projected_mean();
    return model;
}

/// components * (v - mean)
inline std::vector<double> project(const PcaModel& model, std::span<const double> v) {
    if (static_cast<int>(v.size()) != model.input_dim()) {
        throw DimensionMismatch("project: vector dimension does not match model");
    }
    std::vector<double> out(model.components.size(), 0.0);
    for (std::size_t k = 0; k < model.components.size(); ++k) {
        out[k] = dot(model.components[k], v) - model.projected_mean[k];
    }
    return out;
}

inline std::vector<double> project(const PcaModel& model, const SparseVector& v) {
    if (v.dim != model.input_dim()) {
        throw DimensionMismatch("project: vector dimension does not match model");
    }
    std::vector<double> out(model.components.size(), 0.0);
    for (std::size_t k = 0; k < model.components.size(); ++k) {
        const auto& row = model.components[k];
        double s = 0.0;
        for (std::size_t i = 0; i < v.indices.size(); ++i) {
            s += row[static_cast<std::size_t>(v.indices[i])] * v.values[i];
        }
        out[k] = s - model.projected_mean[k];
    }
    return out;
}

/// mean + components^T * y; exact inverse of project() on the component span.
inline std::vector<double> reconstruct(const PcaModel& model, std::span<const double> y) {
    if (static_cast<int>(y.size()) != model.output_dim()) {
        throw DimensionMismatch("reconstruct: dimension does not match model");
    }
    std::vector<double> out = model.mean;
    for (std::size_t k = 0; k < model.components.size(); ++k) {
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] += model.components[k][j] * y[k];
        }
    }
    return out;
}

}  // namespace convdrift
