#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "convdrift/ensemble.hpp"
#include "convdrift/errors.hpp"

namespace convdrift {

// Versioned JSON bundle holding the fitted text transforms and the trained
// Phase-1 members. Doubles round-trip exactly through nlohmann's
// shortest-representation printing, so save/load is lossless.

inline constexpr int kBundleVersion = 1;

namespace detail {

inline nlohmann::json feature_vectors_to_json(const std::vector<FeatureVector>& vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back({{"values", v.values}, {"source_id", v.source_id}});
    return arr;
}

inline std::vector<FeatureVector> feature_vectors_from_json(const nlohmann::json& arr) {
    std::vector<FeatureVector> out;
    for (const auto& j : arr) {
        out.push_back({j.at("values").get<std::vector<double>>(),
                       j.at("source_id").get<std::string>()});
    }
    return out;
}

inline nlohmann::json labels_to_json(const std::vector<Label>& ls) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Label l : ls) arr.push_back(to_string(l));
    return arr;
}

inline std::vector<Label> labels_from_json(const nlohmann::json& arr) {
    std::vector<Label> out;
    for (const auto& j : arr) out.push_back(label_from_string(j.get<std::string>()));
    return out;
}

}  // namespace detail

inline nlohmann::json phase1_to_json(const Phase1Model& model) {
    nlohmann::json j;
    j["format_version"] = kBundleVersion;

    j["tokenizer"] = {{"remove_stopwords", model.vectorizer.tokenizer.remove_stopwords},
                      {"min_token_length", model.vectorizer.tokenizer.min_token_length}};

    // vocabulary as an ordered array of terms; the index is the position
    std::vector<std::string> terms(model.vectorizer.tfidf.vocabulary.size());
    for (const auto& [term, col] : model.vectorizer.tfidf.vocabulary) {
        terms[static_cast<std::size_t>(col)] = term;
    }
    j["tfidf"] = {{"terms", terms},
                  {"idf", model.vectorizer.tfidf.idf},
                  {"doc_count", model.vectorizer.tfidf.doc_count}};

    j["pca"] = {{"mean", model.vectorizer.pca.mean},
                {"components", model.vectorizer.pca.components},
                {"explained_variance", model.vectorizer.pca.explained_variance}};

    const auto& knn = model.ensemble.knn;
    j["knn"] = {{"vectors", detail::feature_vectors_to_json(knn.train_vectors)},
                {"labels", detail::labels_to_json(knn.train_labels)},
                {"k", knn.k},
                {"metric", to_string(knn.metric)}};

    const auto& svm = model.ensemble.svm;
    j["svm"] = {{"support_vectors", svm.support_vectors},
                {"dual_coefs", svm.dual_coefs},
                {"bias", svm.bias},
                {"kernel", to_string(svm.kernel.type)},
                {"gamma", svm.kernel.gamma},
                {"C", svm.C},
                {"converged", svm.converged}};

    const auto& ikm = model.ensemble.impkmeans;
    j["impkmeans"] = {{"centroids", ikm.centroids},
                      {"cluster_labels", detail::labels_to_json(ikm.cluster_labels)},
                      {"kde_bandwidth", ikm.kde_bandwidth},
                      {"k", ikm.k},
                      {"init", to_string(ikm.init)}};
    return j;
}

inline Phase1Model phase1_from_json(const nlohmann::json& j) {
    if (!j.contains("format_version") || j["format_version"].get<int>() != kBundleVersion) {
        throw MalformedFile("model bundle has an unsupported format_version");
    }
    Phase1Model model;
    try {
        model.vectorizer.tokenizer.remove_stopwords =
            j.at("tokenizer").at("remove_stopwords").get<bool>();
        model.vectorizer.tokenizer.min_token_length =
            j.at("tokenizer").at("min_token_length").get<std::size_t>();

        const auto terms = j.at("tfidf").at("terms").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < terms.size(); ++i) {
            model.vectorizer.tfidf.vocabulary.emplace(terms[i], static_cast<int>(i));
        }
        model.vectorizer.tfidf.idf = j.at("tfidf").at("idf").get<std::vector<double>>();
        model.vectorizer.tfidf.doc_count = j.at("tfidf").at("doc_count").get<int>();

        model.vectorizer.pca.mean = j.at("pca").at("mean").get<std::vector<double>>();
        model.vectorizer.pca.components =
            j.at("pca").at("components").get<std::vector<std::vector<double>>>();
        model.vectorizer.pca.explained_variance =
            j.at("pca").at("explained_variance").get<std::vector<double>>();
        model.vectorizer.pca.refresh_projected_mean();

        model.ensemble.knn.train_vectors =
            detail::feature_vectors_from_json(j.at("knn").at("vectors"));
        model.ensemble.knn.train_labels = detail::labels_from_json(j.at("knn").at("labels"));
        model.ensemble.knn.k = j.at("knn").at("k").get<int>();
        model.ensemble.knn.metric = metric_from_string(j.at("knn").at("metric").get<std::string>());

        model.ensemble.svm.support_vectors =
            j.at("svm").at("support_vectors").get<std::vector<std::vector<double>>>();
        model.ensemble.svm.dual_coefs = j.at("svm").at("dual_coefs").get<std::vector<double>>();
        model.ensemble.svm.bias = j.at("svm").at("bias").get<double>();
        model.ensemble.svm.kernel.type =
            kernel_type_from_string(j.at("svm").at("kernel").get<std::string>());
        model.ensemble.svm.kernel.gamma = j.at("svm").at("gamma").get<double>();
        model.ensemble.svm.C = j.at("svm").at("C").get<double>();
        model.ensemble.svm.converged = j.at("svm").at("converged").get<bool>();

        model.ensemble.impkmeans.centroids =
            j.at("impkmeans").at("centroids").get<std::vector<std::vector<double>>>();
        model.ensemble.impkmeans.cluster_labels =
            detail::labels_from_json(j.at("impkmeans").at("cluster_labels"));
        model.ensemble.impkmeans.kde_bandwidth =
            j.at("impkmeans").at("kde_bandwidth").get<double>();
        model.ensemble.impkmeans.k = j.at("impkmeans").at("k").get<int>();
        model.ensemble.impkmeans.init =
            kmeans_init_from_string(j.at("impkmeans").at("init").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw MalformedFile(std::string("model bundle is missing fields: ") + e.what());
    }
    return model;
}

inline void save_phase1(const Phase1Model& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model bundle: " + path);
    out << phase1_to_json(model).dump(2) << '\n';
}

inline Phase1Model load_phase1(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model bundle: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedFile("failed to parse model bundle '" + path + "': " + e.what());
    }
    return phase1_from_json(j);
}

}  // namespace convdrift
