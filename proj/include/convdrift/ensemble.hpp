#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "convdrift/embedding.hpp"
#include "convdrift/kmeans.hpp"
#include "convdrift/knn.hpp"
#include "convdrift/svm.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

/// The three member votes behind an ensemble decision, in fixed order.
struct VoteRecord {
    Label knn = Label::Real;
    Label svm = Label::Real;
    Label impkmeans = Label::Real;

    bool operator==(const VoteRecord&) const = default;
};

inline Label majority(Label a, Label b, Label c) {
    const int fakes = (a == Label::Fake) + (b == Label::Fake) + (c == Label::Fake);
    return fakes >= 2 ? Label::Fake : Label::Real;
}

inline Label majority(const VoteRecord& votes) {
    return majority(votes.knn, votes.svm, votes.impkmeans);
}

struct EnsembleConfig {
    int knn_k = 5;
    Metric knn_metric = Metric::Euclidean;
    double svm_c = 1.0;
    Kernel::Type svm_kernel = Kernel::Type::Rbf;
    double svm_gamma = 0.0;        // absolute; 0 defers to the scale rule
    double svm_gamma_scale = 1.0;  // gamma = scale / feature_dim when svm_gamma == 0
    int ikm_k = 2;
    KmeansInit ikm_init = KmeansInit::Kde;
    std::uint64_t seed = 0;

    double resolve_gamma(std::size_t feature_dim) const {
        if (svm_gamma > 0.0) return svm_gamma;
        return feature_dim > 0 ? svm_gamma_scale / static_cast<double>(feature_dim) : 1.0;
    }
};

struct EnsembleModel {
    KnnModel knn;
    SvmModel svm;
    ImpKmeansModel impkmeans;
};

/// All three members train on the same embedded feature matrix.
inline EnsembleModel train_ensemble(const std::vector<FeatureVector>& vectors,
                                    const std::vector<Label>& labels,
                                    const EnsembleConfig& cfg = {}) {
    if (vectors.empty()) throw InsufficientData("train_ensemble: empty training set");
    const Kernel kernel = cfg.svm_kernel == Kernel::Type::Linear
                              ? Kernel::linear()
                              : Kernel::rbf(cfg.resolve_gamma(vectors[0].dim()));
    EnsembleModel model;
    model.knn = train_knn(vectors, labels, cfg.knn_k, cfg.knn_metric);
    model.svm = train_svm(vectors, labels, cfg.svm_c, kernel);
    model.impkmeans = train_impkmeans(vectors, labels, cfg.ikm_k, cfg.ikm_init, cfg.seed);
    return model;
}

inline VoteRecord ensemble_votes(const EnsembleModel& model, std::span<const double> v) {
    return VoteRecord{
        predict_knn(model.knn, v),
        predict_svm(model.svm, v),
        predict_impkmeans(model.impkmeans, v),
    };
}

/// Majority of the three member votes; with three binary voters a tie is
/// impossible.
inline std::pair<Label, VoteRecord> predict_ensemble(const EnsembleModel& model,
                                                     std::span<const double> v) {
    const VoteRecord votes = ensemble_votes(model, v);
    return {majority(votes), votes};
}

/// Everything Phase 1 needs at inference time: the fitted text transforms
/// plus the trained voters.
struct Phase1Model {
    TextVectorizer vectorizer;
    EnsembleModel ensemble;
};

inline Phase1Model train_phase1(const Corpus& corpus, const EnsembleConfig& cfg = {},
                                const TextVectorizerConfig& tv_cfg = {}) {
    if (corpus.train.empty()) throw InsufficientData("train_phase1: empty training split");
    Phase1Model model;
    model.vectorizer = fit_text_vectorizer(corpus.train, tv_cfg);
    std::vector<Label> labels;
    labels.reserve(corpus.train.size());
    for (const auto& c : corpus.train) labels.push_back(*c.gold_label);
    model.ensemble = train_ensemble(embed_conversations(model.vectorizer, corpus.train),
                                    labels, cfg);
    return model;
}

}  // namespace convdrift
