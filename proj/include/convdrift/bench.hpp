#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "convdrift/embedding.hpp"
#include "convdrift/ensemble.hpp"
#include "convdrift/metrics.hpp"
#include "convdrift/naive_bayes.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

struct BenchConfig {
    EnsembleConfig ensemble;
    TextVectorizerConfig vectorizer;
    bool include_macro = true;
};

struct BenchResult {
    std::vector<EvalReport> reports;  // sorted by accuracy, ties by name
    std::vector<std::pair<std::string, std::string>> failures;  // model -> error
};

namespace detail {

struct BenchModel {
    std::string name;
    // returns a predictor over embedded test vectors
    std::function<std::function<Label(const FeatureVector&)>(
        const std::vector<FeatureVector>&, const std::vector<Label>&)>
        train;
};

}  // namespace detail

/// Trains and evaluates the candidate models plus the ensemble on one shared
/// embedding of the corpus. A model that fails to train becomes a failure
/// row instead of aborting the run.
inline BenchResult benchmark_phase1(const Corpus& corpus, const BenchConfig& cfg = {}) {
    if (corpus.train.empty() || corpus.test.empty()) {
        throw InsufficientData("benchmark_phase1: need non-empty train and test splits");
    }
    const TextVectorizer tv = fit_text_vectorizer(corpus.train, cfg.vectorizer);
    const std::vector<FeatureVector> train_x = embed_conversations(tv, corpus.train);
    const std::vector<FeatureVector> test_x = embed_conversations(tv, corpus.test);
    std::vector<Label> train_y;
    std::vector<Label> test_y;
    for (const auto& c : corpus.train) train_y.push_back(*c.gold_label);
    for (const auto& c : corpus.test) test_y.push_back(*c.gold_label);

    const EnsembleConfig& ec = cfg.ensemble;
    const Kernel kernel = ec.svm_kernel == Kernel::Type::Linear
                              ? Kernel::linear()
                              : Kernel::rbf(ec.resolve_gamma(train_x[0].dim()));

    std::vector<detail::BenchModel> models;
    models.push_back({"knn", [&](const auto& x, const auto& y) {
                          auto m = train_knn(x, y, ec.knn_k, ec.knn_metric);
                          return [m](const FeatureVector& v) { return predict_knn(m, v.values); };
                      }});
    models.push_back({"svm", [&](const auto& x, const auto& y) {
                          auto m = train_svm(x, y, ec.svm_c, kernel);
                          return [m](const FeatureVector& v) { return predict_svm(m, v.values); };
                      }});
    models.push_back({"impkmeans", [&](const auto& x, const auto& y) {
                          auto m = train_impkmeans(x, y, ec.ikm_k, KmeansInit::Kde, ec.seed);
                          return
                              [m](const FeatureVector& v) { return predict_impkmeans(m, v.values); };
                      }});
    models.push_back({"kmeans", [&](const auto& x, const auto& y) {
                          auto m = train_impkmeans(x, y, ec.ikm_k, KmeansInit::Random, ec.seed);
                          return
                              [m](const FeatureVector& v) { return predict_impkmeans(m, v.values); };
                      }});
    models.push_back({"naive_bayes", [&](const auto& x, const auto& y) {
                          auto m = train_naive_bayes(x, y);
                          return
                              [m](const FeatureVector& v) { return predict_naive_bayes(m, v.values); };
                      }});
    models.push_back({"ensemble", [&](const auto& x, const auto& y) {
                          auto m = train_ensemble(x, y, ec);
                          return [m](const FeatureVector& v) {
                              return predict_ensemble(m, v.values).first;
                          };
                      }});

    BenchResult result;
    for (const auto& model : models) {
        try {
            const auto timed = time_run([&] {
                const auto predict = model.train(train_x, train_y);
                std::vector<Label> preds;
                preds.reserve(test_x.size());
                for (const auto& v : test_x) preds.push_back(predict(v));
                return preds;
            });
            const ConfusionMatrix cm = confusion(timed.result, test_y);
            EvalReport binary = metrics(cm, Averaging::BinaryFakePositive);
            binary.model_name = model.name;
            binary.wall_time = timed.duration;
            result.reports.push_back(binary);
            if (cfg.include_macro) {
                EvalReport macro = metrics(cm, Averaging::Macro);
                macro.model_name = model.name + "/macro";
                macro.wall_time = timed.duration;
                result.reports.push_back(macro);
            }
        } catch (const Error& e) {
            result.failures.emplace_back(model.name, e.what());
        }
    }
    std::sort(result.reports.begin(), result.reports.end(),
              [](const EvalReport& a, const EvalReport& b) {
                  if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
                  return a.model_name < b.model_name;
              });
    return result;
}

/// Small hyperparameter sweep scored by k-fold cross-validation accuracy on
/// the training split (the vectorizer is refit per fold, so test text never
/// leaks into the vocabulary). Ties keep the first candidate in enumeration
/// order.
inline EnsembleConfig grid_search_phase1(const Corpus& corpus,
                                         const TextVectorizerConfig& tv_cfg = {},
                                         int folds = 5) {
    const std::size_t n = corpus.train.size();
    if (n < 4) throw InsufficientData("grid_search_phase1: training split too small");
    folds = std::min<int>(folds, static_cast<int>(n / 2));
    folds = std::max(folds, 2);

    struct Fold {
        std::vector<Conversation> fit;
        std::vector<Conversation> holdout;
    };
    std::vector<Fold> fold_data(static_cast<std::size_t>(folds));
    for (std::size_t i = 0; i < n; ++i) {
        const auto f = i % static_cast<std::size_t>(folds);
        for (std::size_t g = 0; g < fold_data.size(); ++g) {
            (g == f ? fold_data[g].holdout : fold_data[g].fit).push_back(corpus.train[i]);
        }
    }

    struct FoldEmbedding {
        std::vector<FeatureVector> fit_x;
        std::vector<Label> fit_y;
        std::vector<FeatureVector> holdout_x;
        std::vector<Label> holdout_y;
    };
    std::vector<FoldEmbedding> embedded;
    for (const auto& fold : fold_data) {
        if (fold.fit.empty() || fold.holdout.empty()) continue;
        FoldEmbedding fe;
        const TextVectorizer tv = fit_text_vectorizer(fold.fit, tv_cfg);
        fe.fit_x = embed_conversations(tv, fold.fit);
        fe.holdout_x = embed_conversations(tv, fold.holdout);
        for (const auto& c : fold.fit) fe.fit_y.push_back(*c.gold_label);
        for (const auto& c : fold.holdout) fe.holdout_y.push_back(*c.gold_label);
        embedded.push_back(std::move(fe));
    }

    auto cv_accuracy = [&](auto&& train_and_predict) {
        double correct = 0.0;
        double total = 0.0;
        for (const auto& fe : embedded) {
            try {
                const auto predict = train_and_predict(fe.fit_x, fe.fit_y);
                for (std::size_t i = 0; i < fe.holdout_x.size(); ++i) {
                    correct += predict(fe.holdout_x[i]) == fe.holdout_y[i] ? 1.0 : 0.0;
                    total += 1.0;
                }
            } catch (const Error&) {
                // candidate infeasible on this fold (e.g. k > fold size)
            }
        }
        return total > 0.0 ? correct / total : 0.0;
    };

    EnsembleConfig best;
    // kNN
    double best_acc = -1.0;
    for (const Metric metric : {Metric::Euclidean, Metric::Cosine}) {
        for (const int k : {1, 3, 5, 7}) {
            const double acc = cv_accuracy([&](const auto& x, const auto& y) {
                auto m = train_knn(x, y, k, metric);
                return [m](const FeatureVector& v) { return predict_knn(m, v.values); };
            });
            if (acc > best_acc) {
                best_acc = acc;
                best.knn_k = k;
                best.knn_metric = metric;
            }
        }
    }
    // SVM (rbf)
    best_acc = -1.0;
    for (const double c : {0.1, 1.0, 10.0}) {
        for (const double scale : {0.5, 1.0, 2.0}) {
            const double acc = cv_accuracy([&](const auto& x, const auto& y) {
                const double gamma = scale / static_cast<double>(x[0].dim());
                auto m = train_svm(x, y, c, Kernel::rbf(gamma));
                return [m](const FeatureVector& v) { return predict_svm(m, v.values); };
            });
            if (acc > best_acc) {
                best_acc = acc;
                best.svm_c = c;
                best.svm_gamma_scale = scale;  // resolved against the final dim later
            }
        }
    }
    // ImpKmeans
    best_acc = -1.0;
    for (const int k : {2, 3, 4}) {
        const double acc = cv_accuracy([&](const auto& x, const auto& y) {
            auto m = train_impkmeans(x, y, k, KmeansInit::Kde, 0);
            return [m](const FeatureVector& v) { return predict_impkmeans(m, v.values); };
        });
        if (acc > best_acc) {
            best_acc = acc;
            best.ikm_k = k;
        }
    }
    return best;
}

}  // namespace convdrift
