#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "convdrift/errors.hpp"

namespace convdrift {

/// Binary gold/predicted label. Fake is the positive class everywhere.
enum class Label { Real, Fake };

inline const char* to_string(Label l) { return l == Label::Fake ? "fake" : "real"; }

inline Label label_from_string(const std::string& s) {
    if (s == "fake" || s == "Fake") return Label::Fake;
    if (s == "real" || s == "Real") return Label::Real;
    throw SchemaViolation("unknown label: '" + s + "'");
}

inline Label flipped(Label l) { return l == Label::Fake ? Label::Real : Label::Fake; }

enum class Domain {
    AcademicCollaboration,
    AcademicFunding,
    Journalism,
    Recruitment,
    Synthetic,
};

inline const char* to_string(Domain d) {
    switch (d) {
        case Domain::AcademicCollaboration: return "academic_collaboration";
        case Domain::AcademicFunding: return "academic_funding";
        case Domain::Journalism: return "journalism";
        case Domain::Recruitment: return "recruitment";
        case Domain::Synthetic: return "synthetic";
    }
    return "synthetic";
}

inline Domain domain_from_string(const std::string& s) {
    if (s == "academic_collaboration") return Domain::AcademicCollaboration;
    if (s == "academic_funding") return Domain::AcademicFunding;
    if (s == "journalism") return Domain::Journalism;
    if (s == "recruitment") return Domain::Recruitment;
    if (s == "synthetic") return Domain::Synthetic;
    throw SchemaViolation("unknown domain: '" + s + "'");
}

struct Message {
    std::string speaker;
    int turn_index = 0;
    std::string text;
};

/// Optional per-conversation annotations. Known keys are typed; anything else
/// from the source file is kept verbatim in `extra`.
struct Annotations {
    std::optional<bool> pii_present;
    std::optional<double> ambiguity_score;
    std::optional<int> drift_turn;  // ground truth for synthetic fixtures
    nlohmann::json extra = nlohmann::json::object();

    bool empty() const {
        return !pii_present && !ambiguity_score && !drift_turn && extra.empty();
    }
};

struct Conversation {
    std::string id;
    Domain domain = Domain::Synthetic;
    std::vector<Message> messages;
    std::optional<Label> gold_label;
    Annotations annotations;

    /// All message texts joined by newlines, in turn order.
    std::string joined_text() const {
        std::string out;
        for (const auto& m : messages) {
            if (!out.empty()) out += '\n';
            out += m.text;
        }
        return out;
    }
};

struct Corpus {
    std::vector<Conversation> train;
    std::vector<Conversation> test;

    std::size_t size() const { return train.size() + test.size(); }
};

struct SplitStats {
    int train_fake = 0;
    int train_real = 0;
    int test_fake = 0;
    int test_real = 0;

    int total() const { return train_fake + train_real + test_fake + test_real; }
    bool operator==(const SplitStats&) const = default;
};

/// Dense embedding of a document or message after TF-IDF + PCA.
struct FeatureVector {
    std::vector<double> values;
    std::string source_id;

    std::size_t dim() const { return values.size(); }
};

}  // namespace convdrift
