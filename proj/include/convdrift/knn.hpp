#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "convdrift/errors.hpp"
#include "convdrift/math.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

enum class Metric { Euclidean, Cosine };

inline const char* to_string(Metric m) {
    return m == Metric::Cosine ? "cosine" : "euclidean";
}

inline Metric metric_from_string(const std::string& s) {
    if (s == "euclidean") return Metric::Euclidean;
    if (s == "cosine") return Metric::Cosine;
    throw InvalidParams("unknown metric: '" + s + "'");
}

inline double metric_distance(Metric m, std::span<const double> a, std::span<const double> b) {
    return m == Metric::Cosine ? cosine_distance(a, b) : squared_distance(a, b);
}

/// Lazy learner: training just stores the data.
struct KnnModel {
    std::vector<FeatureVector> train_vectors;
    std::vector<Label> train_labels;
    int k = 5;
    Metric metric = Metric::Euclidean;
};

inline KnnModel train_knn(std::vector<FeatureVector> vectors, std::vector<Label> labels,
                          int k, Metric metric = Metric::Euclidean) {
    if (vectors.size() != labels.size()) throw LengthMismatch("train_knn: vectors vs labels");
    if (k < 1 || k % 2 == 0) throw InvalidParams("train_knn: k must be odd and positive");
    if (static_cast<std::size_t>(k) > vectors.size()) {
        throw InsufficientData("train_knn: need at least k labeled vectors");
    }
    const bool has_fake = std::find(labels.begin(), labels.end(), Label::Fake) != labels.end();
    const bool has_real = std::find(labels.begin(), labels.end(), Label::Real) != labels.end();
    if (!has_fake || !has_real) throw SingleClassTrainingSet("train_knn: both classes required");
    return KnnModel{std::move(vectors), std::move(labels), k, metric};
}

/// Majority label among the k nearest neighbors. Distance ties are broken by
/// the smaller training index, so predictions are deterministic.
inline Label predict_knn(const KnnModel& model, std::span<const double> v) {
    const std::size_t n = model.train_vectors.size();
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        dist[i] = metric_distance(model.metric, model.train_vectors[i].values, v);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto k = static_cast<std::size_t>(model.k);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (dist[a] != dist[b]) return dist[a] < dist[b];
                          return a < b;
                      });
    int fake_votes = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (model.train_labels[order[i]] == Label::Fake) ++fake_votes;
    }
    return 2 * fake_votes > model.k ? Label::Fake : Label::Real;
}

}  // namespace convdrift
