#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "convdrift/errors.hpp"

namespace convdrift {

/// Sparse vector with strictly increasing indices.
struct SparseVector {
    int dim = 0;
    std::vector<int> indices;
    std::vector<double> values;

    std::size_t nnz() const { return indices.size(); }
    bool empty() const { return indices.empty(); }
};

struct TfIdfModel {
    std::unordered_map<std::string, int> vocabulary;  // term -> column
    std::vector<double> idf;                          // one entry per column
    int doc_count = 0;

    int dim() const { return static_cast<int>(idf.size()); }
};

/// Builds vocabulary and idf weights from the training documents only.
/// idf(t) = ln((1 + N) / (1 + df(t))) + 1, so every weight stays positive.
/// Column order is lexicographic over terms, which keeps models identical
/// across runs and platforms.
inline TfIdfModel fit_tfidf(const std::vector<std::vector<std::string>>& train_docs) {
    bool any_token = false;
    std::map<std::string, int> doc_freq;
    for (const auto& doc : train_docs) {
        if (doc.empty()) continue;
        any_token = true;
        std::map<std::string, int> seen;
        for (const auto& t : doc) seen[t] = 1;
        for (const auto& [t, _] : seen) doc_freq[t] += 1;
    }
    if (!any_token) throw EmptyCorpus("fit_tfidf: no non-empty documents");

    TfIdfModel model;
    model.doc_count = static_cast<int>(train_docs.size());
    model.idf.reserve(doc_freq.size());
    int col = 0;
    const double n = static_cast<double>(model.doc_count);
    for (const auto& [term, df] : doc_freq) {
        model.vocabulary.emplace(term, col++);
        model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0);
    }
    return model;
}

/// Raw term count times idf, then L2-normalized. Out-of-vocabulary tokens
/// are ignored; a document with no in-vocabulary tokens maps to the zero
/// vector.
inline SparseVector transform_tfidf(const TfIdfModel& model,
                                    const std::vector<std::string>& doc) {
    std::map<int, double> counts;  // ordered: output indices must increase
    for (const auto& t : doc) {
        auto it = model.vocabulary.find(t);
        if (it != model.vocabulary.end()) counts[it->second] += 1.0;
    }

    SparseVector v;
    v.dim = model.dim();
    v.indices.reserve(counts.size());
    v.values.reserve(counts.size());
    double norm_sq = 0.0;
    for (const auto& [col, count] : counts) {
        const double w = count * model.idf[static_cast<std::size_t>(col)];
        v.indices.push_back(col);
        v.values.push_back(w);
        norm_sq += w * w;
    }
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v.values) x *= inv;
    }
    return v;
}

inline std::vector<double> to_dense(const SparseVector& v) {
    std::vector<double> out(static_cast<std::size_t>(v.dim), 0.0);
    for (std::size_t i = 0; i < v.indices.size(); ++i) {
        out[static_cast<std::size_t>(v.indices[i])] = v.values[i];
    }
    return out;
}

}  // namespace convdrift
