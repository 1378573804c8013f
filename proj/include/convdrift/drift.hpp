#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "convdrift/errors.hpp"
#include "convdrift/ocsvm.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

enum class DriftMode { IntraConversation, Stream };

inline const char* to_string(DriftMode m) {
    return m == DriftMode::Stream ? "stream" : "intra_conversation";
}

inline DriftMode drift_mode_from_string(const std::string& s) {
    if (s == "intra_conversation" || s == "intra") return DriftMode::IntraConversation;
    if (s == "stream") return DriftMode::Stream;
    throw InvalidParams("unknown drift mode: '" + s + "'");
}

struct OcddConfig {
    int window_size = 5;          // reference window W
    double nu = 0.3;
    double drift_threshold = 0.5; // outlier fraction that declares drift
    DriftMode mode = DriftMode::IntraConversation;
    double gamma = 0.0;           // 0 = 1/feature_dim
    OcSvmTrainOptions solver;

    void validate() const {
        if (window_size < 3) throw InvalidParams("OcddConfig: window_size must be >= 3");
        if (nu <= 0.0 || nu > 1.0) throw InvalidParams("OcddConfig: nu must be in (0, 1]");
        if (drift_threshold <= 0.0 || drift_threshold > 1.0) {
            throw InvalidParams("OcddConfig: drift_threshold must be in (0, 1]");
        }
    }
};

struct DriftReport {
    bool drift_detected = false;
    std::optional<int> drift_position;  // turn (or stream) index where drift starts
    double outlier_fraction = 0.0;      // breaching window's fraction, or max seen
    std::vector<double> scores;         // decision score per item after the reference
    int reference_size = 0;
    int test_window = 0;                // sliding window length over `scores`
    bool low_confidence = false;
};

namespace detail {

inline double resolve_gamma(const OcddConfig& cfg, std::size_t dim) {
    if (cfg.gamma > 0.0) return cfg.gamma;
    return dim > 0 ? 1.0 / static_cast<double>(dim) : 1.0;
}

/// Drift is a change of direction in embedding space, not of magnitude, so
/// the detector runs on unit-normalized copies (message length would
/// otherwise dominate the rbf distances). Zero vectors stay zero.
inline FeatureVector unit_normalized(const FeatureVector& v) {
    FeatureVector out = v;
    const double norm = l2_norm(out.values);
    if (norm > 0.0) {
        for (double& x : out.values) x /= norm;
    }
    return out;
}

inline std::vector<FeatureVector> unit_normalized(const std::vector<FeatureVector>& vs) {
    std::vector<FeatureVector> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(unit_normalized(v));
    return out;
}

inline int count_outliers(const std::vector<double>& scores, std::size_t begin, std::size_t len) {
    int out = 0;
    for (std::size_t i = begin; i < begin + len; ++i) {
        if (scores[i] < 0.0) ++out;
    }
    return out;
}

/// Onset estimate inside a breaching window: the first outlier that starts a
/// run of at least two consecutive outliers (a lone early outlier is treated
/// as noise). Falls back to the window's last index.
inline std::size_t drift_onset(const std::vector<double>& scores, std::size_t begin,
                               std::size_t len) {
    for (std::size_t i = begin; i < begin + len; ++i) {
        if (scores[i] < 0.0 && i + 1 < scores.size() && scores[i + 1] < 0.0) return i;
    }
    return begin + len - 1;
}

}  // namespace detail

/// Intra-conversation drift scan: fit the one-class model on the opening
/// messages, then slide a test window one message at a time over the rest;
/// drift is declared at the first window whose outlier fraction reaches the
/// threshold, and the reported position is the first outlier inside it.
///
/// Window sizing: W = min(cfg.window_size, n/2) with a floor of 3. Shorter
/// conversations (n in {4, 5}) fall back to a halves split, and anything
/// under 4 messages yields a low-confidence no-drift report.
inline DriftReport detect_drift(const Conversation& conv,
                                const std::vector<FeatureVector>& message_embeddings,
                                const OcddConfig& cfg) {
    cfg.validate();
    if (message_embeddings.size() != conv.messages.size()) {
        throw DimensionMismatch("detect_drift: one embedding per message required");
    }
    const std::vector<FeatureVector> embeddings = detail::unit_normalized(message_embeddings);
    const std::size_t n = embeddings.size();
    const double gamma = detail::resolve_gamma(cfg, n > 0 ? embeddings[0].dim() : 0);

    DriftReport report;
    if (n < 4) {
        report.low_confidence = true;
        if (n < 2) return report;
        const std::size_t ref = (n + 1) / 2;
        report.reference_size = static_cast<int>(ref);
        const auto model = detail::fit_ocsvm_unchecked(
            {embeddings.begin(), embeddings.begin() + static_cast<std::ptrdiff_t>(ref)},
            cfg.nu, Kernel::rbf(gamma), cfg.solver);
        int outliers = 0;
        for (std::size_t i = ref; i < n; ++i) {
            report.scores.push_back(ocsvm_score(model, embeddings[i].values));
            if (report.scores.back() < 0.0) ++outliers;
        }
        report.test_window = static_cast<int>(report.scores.size());
        if (!report.scores.empty()) {
            report.outlier_fraction =
                static_cast<double>(outliers) / static_cast<double>(report.scores.size());
        }
        return report;
    }

    std::size_t ref;
    if (n < 6) {
        ref = (n + 1) / 2;  // halves split
    } else {
        ref = std::min<std::size_t>(static_cast<std::size_t>(cfg.window_size), n / 2);
        ref = std::max<std::size_t>(ref, 3);
    }
    const std::size_t test_len = std::min(ref, n - ref);
    report.reference_size = static_cast<int>(ref);
    report.test_window = static_cast<int>(test_len);

    const auto model = detail::fit_ocsvm_unchecked(
        {embeddings.begin(), embeddings.begin() + static_cast<std::ptrdiff_t>(ref)},
        cfg.nu, Kernel::rbf(gamma), cfg.solver);
    report.scores.reserve(n - ref);
    for (std::size_t i = ref; i < n; ++i) {
        report.scores.push_back(ocsvm_score(model, embeddings[i].values));
    }

    double max_fraction = 0.0;
    for (std::size_t j = 0; j + test_len <= report.scores.size(); ++j) {
        const double fraction =
            static_cast<double>(detail::count_outliers(report.scores, j, test_len)) /
            static_cast<double>(test_len);
        max_fraction = std::max(max_fraction, fraction);
        if (fraction >= cfg.drift_threshold) {
            report.drift_detected = true;
            report.outlier_fraction = fraction;
            report.drift_position =
                static_cast<int>(ref + detail::drift_onset(report.scores, j, test_len));
            return report;
        }
    }
    report.outlier_fraction = max_fraction;
    return report;
}

/// Stream-level OCDD over conversation embeddings: the first W vectors fed
/// become the fixed reference; afterwards each feed scores the newest vector
/// and evaluates the sliding window that ends at it. Reports before the
/// reference fills are low-confidence no-drift.
class StreamDriftDetector {
public:
    explicit StreamDriftDetector(OcddConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

    DriftReport feed(const FeatureVector& raw, int stream_index) {
        const FeatureVector v = detail::unit_normalized(raw);
        DriftReport report;
        report.reference_size = cfg_.window_size;
        report.test_window = cfg_.window_size;
        if (!model_) {
            reference_.push_back(v);
            if (static_cast<int>(reference_.size()) >= cfg_.window_size) {
                model_ = detail::fit_ocsvm_unchecked(
                    reference_, cfg_.nu,
                    Kernel::rbf(detail::resolve_gamma(cfg_, v.dim())), cfg_.solver);
            }
            report.low_confidence = true;
            return report;
        }

        recent_scores_.push_back(ocsvm_score(*model_, v.values));
        recent_indices_.push_back(stream_index);
        if (recent_scores_.size() > static_cast<std::size_t>(cfg_.window_size)) {
            recent_scores_.pop_front();
            recent_indices_.pop_front();
        }
        report.scores.assign(recent_scores_.begin(), recent_scores_.end());

        int outliers = 0;
        for (const double s : recent_scores_) {
            if (s < 0.0) ++outliers;
        }
        report.outlier_fraction =
            static_cast<double>(outliers) / static_cast<double>(recent_scores_.size());
        if (recent_scores_.size() == static_cast<std::size_t>(cfg_.window_size) &&
            report.outlier_fraction >= cfg_.drift_threshold) {
            report.drift_detected = true;
            for (std::size_t i = 0; i < recent_scores_.size(); ++i) {
                if (recent_scores_[i] < 0.0) {
                    report.drift_position = recent_indices_[i];
                    break;
                }
            }
        }
        return report;
    }

    bool reference_ready() const { return model_.has_value(); }

private:
    OcddConfig cfg_;
    std::vector<FeatureVector> reference_;
    std::optional<OcSvmModel> model_;
    std::deque<double> recent_scores_;
    std::deque<int> recent_indices_;
};

}  // namespace convdrift
