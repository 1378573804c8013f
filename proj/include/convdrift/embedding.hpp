#pragma once

#include <string>
#include <vector>

#include "convdrift/pca.hpp"
#include "convdrift/tfidf.hpp"
#include "convdrift/tokenizer.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

/// Fitted text-to-vector stack. The vocabulary and PCA basis come from the
/// training split only; per-message embeddings for drift detection reuse the
/// same transforms so every vector lives in one fixed space.
struct TextVectorizer {
    TokenizerConfig tokenizer;
    TfIdfModel tfidf;
    PcaModel pca;

    int dim() const { return pca.output_dim(); }
};

struct TextVectorizerConfig {
    TokenizerConfig tokenizer;
    PcaTarget pca_target = PcaTarget::variance(0.95, 32);
};

inline TextVectorizer fit_text_vectorizer(const std::vector<Conversation>& train,
                                          const TextVectorizerConfig& cfg = {}) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train.size());
    for (const auto& conv : train) docs.push_back(tokenize(conv.joined_text(), cfg.tokenizer));

    TextVectorizer tv;
    tv.tokenizer = cfg.tokenizer;
    tv.tfidf = fit_tfidf(docs);

    std::vector<std::vector<double>> rows;
    rows.reserve(docs.size());
    for (const auto& doc : docs) rows.push_back(to_dense(transform_tfidf(tv.tfidf, doc)));
    tv.pca = fit_pca(rows, cfg.pca_target);
    return tv;
}

/// Documents with no in-vocabulary tokens embed to the zero vector rather
/// than to the projection of -mean, so "no content" stays a fixed point.
inline std::vector<double> embed_text(const TextVectorizer& tv, const std::string& text) {
    const SparseVector sv = transform_tfidf(tv.tfidf, tokenize(text, tv.tokenizer));
    if (sv.empty()) return std::vector<double>(static_cast<std::size_t>(tv.dim()), 0.0);
    return project(tv.pca, sv);
}

/// One vector for the whole conversation: message texts concatenated with
/// separators, then tokenize -> tf-idf -> project.
inline FeatureVector embed_conversation(const TextVectorizer& tv, const Conversation& conv) {
    return FeatureVector{embed_text(tv, conv.joined_text()), conv.id};
}

/// One vector per message, same transforms as embed_conversation.
inline std::vector<FeatureVector> embed_messages(const TextVectorizer& tv,
                                                 const Conversation& conv) {
    std::vector<FeatureVector> out;
    out.reserve(conv.messages.size());
    for (const auto& m : conv.messages) {
        out.push_back(FeatureVector{embed_text(tv, m.text),
                                    conv.id + "#" + std::to_string(m.turn_index)});
    }
    return out;
}

inline std::vector<FeatureVector> embed_conversations(const TextVectorizer& tv,
                                                      const std::vector<Conversation>& convs) {
    std::vector<FeatureVector> out;
    out.reserve(convs.size());
    for (const auto& c : convs) out.push_back(embed_conversation(tv, c));
    return out;
}

}  // namespace convdrift
