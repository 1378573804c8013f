#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "convdrift/errors.hpp"
#include "convdrift/kde.hpp"
#include "convdrift/math.hpp"
#include "convdrift/random.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

enum class KmeansInit { Kde, Random };

inline const char* to_string(KmeansInit i) {
    return i == KmeansInit::Kde ? "kde" : "random";
}

inline KmeansInit kmeans_init_from_string(const std::string& s) {
    if (s == "kde") return KmeansInit::Kde;
    if (s == "random") return KmeansInit::Random;
    throw InvalidParams("unknown kmeans init: '" + s + "'");
}

struct KmeansResult {
    std::vector<std::vector<double>> centroids;
    std::vector<int> assignment;  // cluster index per input point
    double kde_bandwidth = 0.0;   // 0 for random init
    int iterations = 0;
};

inline int nearest_centroid(const std::vector<std::vector<double>>& centroids,
                            std::span<const double> v) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(centroids[c], v);
        if (d < best_dist) {  // strict: ties keep the lower index
            best_dist = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

namespace detail {

/// Density-seeded initialization: take the K highest-density points subject
/// to a minimum pairwise separation of half the median pairwise distance,
/// halving the separation requirement until K seeds qualify. Fully
/// deterministic: density ties fall back to the lower point index.
inline std::vector<std::size_t> kde_seed_indices(
    const std::vector<std::vector<double>>& points, int k, double bandwidth) {
    const std::size_t n = points.size();
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i) {
        density[i] = kde_density(points, bandwidth, points[i]);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (density[a] != density[b]) return density[a] > density[b];
        return a < b;
    });

    std::vector<double> pairwise;
    pairwise.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairwise.push_back(euclidean_distance(points[i], points[j]));
        }
    }
    double separation = 0.5 * median(pairwise);

    for (int relax = 0; relax < 60; ++relax) {
        std::vector<std::size_t> chosen;
        for (const std::size_t idx : order) {
            bool ok = true;
            for (const std::size_t c : chosen) {
                if (euclidean_distance(points[idx], points[c]) < separation) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                chosen.push_back(idx);
                if (static_cast<int>(chosen.size()) == k) return chosen;
            }
        }
        separation *= 0.5;
    }
    // duplicate-heavy data: fill with the densest remaining points
    std::vector<std::size_t> chosen(order.begin(), order.begin() + k);
    return chosen;
}

}  // namespace detail

/// Lloyd iterations from either density-based (deterministic) or uniformly
/// random (seeded) starting centroids. Empty clusters keep their previous
/// centroid. Convergence: max centroid shift < 1e-6 or 300 iterations.
inline KmeansResult fit_kmeans(const std::vector<std::vector<double>>& points, int k,
                               KmeansInit init, std::uint64_t seed = 0) {
    if (k < 2) throw InvalidParams("fit_kmeans: k must be at least 2");
    if (points.size() < static_cast<std::size_t>(k)) {
        throw InsufficientData("fit_kmeans: need at least k points");
    }
    const std::size_t n = points.size();
    const std::size_t dim = points[0].size();

    KmeansResult result;
    if (init == KmeansInit::Kde) {
        result.kde_bandwidth = silverman_bandwidth(points);
        for (const std::size_t idx : detail::kde_seed_indices(points, k, result.kde_bandwidth)) {
            result.centroids.push_back(points[idx]);
        }
    } else {
        Rng rng(mix_seed(seed, 0x6b6d65616eULL, 0));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (int c = 0; c < k; ++c) result.centroids.push_back(points[order[static_cast<std::size_t>(c)]]);
    }

    result.assignment.assign(n, 0);
    for (int iter = 0; iter < 300; ++iter) {
        result.iterations = iter + 1;
        for (std::size_t i = 0; i < n; ++i) {
            result.assignment[i] = nearest_centroid(result.centroids, points[i]);
        }
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(result.assignment[i]);
            counts[c] += 1;
            for (std::size_t j = 0; j < dim; ++j) sums[c][j] += points[i][j];
        }
        double max_shift = 0.0;
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t j = 0; j < dim; ++j) sums[c][j] /= static_cast<double>(counts[c]);
            max_shift = std::max(max_shift, euclidean_distance(sums[c], result.centroids[c]));
            result.centroids[c] = std::move(sums[c]);
        }
        if (max_shift < 1e-6) break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        result.assignment[i] = nearest_centroid(result.centroids, points[i]);
    }
    return result;
}

/// k-means with labeled clusters. With init=kde this is the density-seeded
/// variant used in the ensemble; with init=random it reproduces plain
/// k-means as a baseline. Each cluster takes the majority gold label of its
/// members; ties (and empty clusters) go to Fake, the costlier miss.
struct ImpKmeansModel {
    std::vector<std::vector<double>> centroids;
    std::vector<Label> cluster_labels;
    double kde_bandwidth = 0.0;
    int k = 2;
    KmeansInit init = KmeansInit::Kde;
};

inline ImpKmeansModel train_impkmeans(const std::vector<FeatureVector>& vectors,
                                      const std::vector<Label>& labels, int k,
                                      KmeansInit init = KmeansInit::Kde,
                                      std::uint64_t seed = 0) {
    if (vectors.size() != labels.size()) throw LengthMismatch("train_impkmeans: vectors vs labels");
    std::vector<std::vector<double>> points;
    points.reserve(vectors.size());
    for (const auto& fv : vectors) {
        if (!all_finite(fv.values)) throw InvalidParams("train_impkmeans: non-finite input");
        points.push_back(fv.values);
    }
    const KmeansResult result = fit_kmeans(points, k, init, seed);

    ImpKmeansModel model;
    model.centroids = result.centroids;
    model.kde_bandwidth = result.kde_bandwidth;
    model.k = k;
    model.init = init;
    std::vector<int> fake_count(static_cast<std::size_t>(k), 0);
    std::vector<int> real_count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto c = static_cast<std::size_t>(result.assignment[i]);
        (labels[i] == Label::Fake ? fake_count[c] : real_count[c]) += 1;
    }
    model.cluster_labels.resize(static_cast<std::size_t>(k));
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        model.cluster_labels[c] = fake_count[c] >= real_count[c] ? Label::Fake : Label::Real;
    }
    return model;
}

inline int assign_impkmeans(const ImpKmeansModel& model, std::span<const double> v) {
    return nearest_centroid(model.centroids, v);
}

inline Label predict_impkmeans(const ImpKmeansModel& model, std::span<const double> v) {
    return model.cluster_labels[static_cast<std::size_t>(assign_impkmeans(model, v))];
}

}  // namespace convdrift
