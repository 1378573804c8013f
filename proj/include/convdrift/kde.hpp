#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "convdrift/errors.hpp"
#include "convdrift/math.hpp"

namespace convdrift {

/// Mean of isotropic Gaussian kernels in k dimensions:
///   (1/n) sum_i (2 pi h^2)^(-k/2) exp(-||q - x_i||^2 / (2 h^2))
inline double kde_density(const std::vector<std::vector<double>>& points, double h,
                          std::span<const double> query) {
    if (h <= 0.0) throw InvalidBandwidth("kde_density: bandwidth must be positive");
    if (points.empty()) throw InsufficientData("kde_density: need at least one point");
    const auto k = static_cast<double>(query.size());
    const double norm = std::pow(2.0 * std::numbers::pi * h * h, -0.5 * k);
    const double inv_two_h2 = 1.0 / (2.0 * h * h);
    double sum = 0.0;
    for (const auto& p : points) {
        sum += std::exp(-squared_distance(p, query) * inv_two_h2);
    }
    return norm * sum / static_cast<double>(points.size());
}

/// Silverman's rule with a single bandwidth for all dimensions:
///   h = sigma * (4 / ((d + 2) n))^(1/(d+4))
/// where sigma is the root of the mean per-dimension sample variance. Falls
/// back to a small floor for degenerate (constant) data.
inline double silverman_bandwidth(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw InsufficientData("silverman_bandwidth: no points");
    const std::size_t n = points.size();
    const std::size_t d = points[0].size();
    if (d == 0) throw DegenerateInput("silverman_bandwidth: zero-dimensional points");

    double var_sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i) column[i] = points[i][j];
        var_sum += sample_variance(column);
    }
    const double sigma = std::sqrt(var_sum / static_cast<double>(d));
    const double dd = static_cast<double>(d);
    const double factor = std::pow(4.0 / ((dd + 2.0) * static_cast<double>(n)), 1.0 / (dd + 4.0));
    const double h = sigma * factor;
    return h > 1e-9 ? h : 1e-9;
}

}  // namespace convdrift
