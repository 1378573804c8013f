#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace convdrift {

struct TokenizerConfig {
    // Off by default: second-person pronouns and similar filler carry
    // signal in manipulative conversations.
    bool remove_stopwords = false;
    std::size_t min_token_length = 2;
};

inline const std::unordered_set<std::string>& english_stopwords() {
    static const std::unordered_set<std::string> words = {
        "the", "and", "for", "are", "but", "not", "you", "your", "all", "can",
        "has", "had", "have", "was", "were", "she", "his", "her", "they",
        "them", "this", "that", "with", "from", "will", "would", "there",
        "their", "what", "when", "who", "how", "its", "our", "out", "about",
    };
    return words;
}

/// Lowercase, split on non-alphanumeric characters, drop short tokens.
inline std::vector<std::string> tokenize(std::string_view text,
                                         const TokenizerConfig& cfg = {}) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= cfg.min_token_length &&
            (!cfg.remove_stopwords || !english_stopwords().count(current))) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current += static_cast<char>(std::tolower(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

}  // namespace convdrift
