#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "convdrift/errors.hpp"
#include "convdrift/random.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

enum class CorpusFormat { GenericJson, SeconvoJson };

inline CorpusFormat corpus_format_from_string(const std::string& s) {
    if (s == "generic") return CorpusFormat::GenericJson;
    if (s == "seconvo") return CorpusFormat::SeconvoJson;
    throw InvalidParams("unknown corpus format: '" + s + "'");
}

namespace detail {

inline std::string trimmed(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline Annotations parse_annotations(const nlohmann::json& j) {
    Annotations a;
    if (!j.is_object()) throw SchemaViolation("annotations must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "pii_present" && value.is_boolean()) {
            a.pii_present = value.get<bool>();
        } else if (key == "ambiguity_score" && value.is_number()) {
            a.ambiguity_score = value.get<double>();
        } else if (key == "drift_turn" && value.is_number_integer()) {
            a.drift_turn = value.get<int>();
        } else {
            a.extra[key] = value;
        }
    }
    return a;
}

inline nlohmann::json annotations_to_json(const Annotations& a) {
    nlohmann::json j = a.extra.is_object() ? a.extra : nlohmann::json::object();
    if (a.pii_present) j["pii_present"] = *a.pii_present;
    if (a.ambiguity_score) j["ambiguity_score"] = *a.ambiguity_score;
    if (a.drift_turn) j["drift_turn"] = *a.drift_turn;
    return j;
}

inline Conversation parse_generic_conversation(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaViolation("conversation must be an object");
    if (!j.contains("id") || !j["id"].is_string()) {
        throw SchemaViolation("conversation missing string 'id'");
    }
    Conversation conv;
    conv.id = j["id"].get<std::string>();
    if (!j.contains("label") || !j["label"].is_string()) {
        throw SchemaViolation("conversation '" + conv.id + "' missing string 'label'");
    }
    conv.gold_label = label_from_string(j["label"].get<std::string>());
    if (!j.contains("domain") || !j["domain"].is_string()) {
        throw SchemaViolation("conversation '" + conv.id + "' missing string 'domain'");
    }
    conv.domain = domain_from_string(j["domain"].get<std::string>());
    if (!j.contains("messages") || !j["messages"].is_array() || j["messages"].empty()) {
        throw SchemaViolation("conversation '" + conv.id + "' needs a non-empty 'messages' array");
    }
    int turn = 0;
    for (const auto& jm : j["messages"]) {
        if (!jm.is_object() || !jm.contains("speaker") || !jm.contains("text") ||
            !jm["speaker"].is_string() || !jm["text"].is_string()) {
            throw SchemaViolation("conversation '" + conv.id +
                                  "': each message needs string 'speaker' and 'text'");
        }
        Message m;
        m.speaker = jm["speaker"].get<std::string>();
        m.text = jm["text"].get<std::string>();
        if (trimmed(m.text).empty()) {
            throw SchemaViolation("conversation '" + conv.id + "' has an empty message text");
        }
        m.turn_index = turn++;
        conv.messages.push_back(std::move(m));
    }
    if (j.contains("annotations")) conv.annotations = parse_annotations(j["annotations"]);
    return conv;
}

// Field aliases for the published SEConvo release. Values are mapped onto the
// generic schema; anything unrecognized in annotations is passed through.
inline const nlohmann::json* find_field(const nlohmann::json& j,
                                        std::initializer_list<const char*> names) {
    for (const char* n : names) {
        if (j.contains(n)) return &j[n];
    }
    return nullptr;
}

inline Label parse_seconvo_label(const nlohmann::json& v) {
    if (v.is_boolean()) return v.get<bool>() ? Label::Fake : Label::Real;
    if (v.is_number_integer()) return v.get<int>() != 0 ? Label::Fake : Label::Real;
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (s == "fake" || s == "malicious" || s == "1" || s == "true") return Label::Fake;
        if (s == "real" || s == "benign" || s == "0" || s == "false") return Label::Real;
    }
    throw SchemaViolation("seconvo: unrecognized label value");
}

inline Domain parse_seconvo_domain(const nlohmann::json* v) {
    if (v == nullptr || !v->is_string()) {
        throw SchemaViolation("seconvo: conversation missing domain/category");
    }
    std::string s = v->get<std::string>();
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return c == ' ' || c == '-' ? '_' : static_cast<char>(std::tolower(c));
    });
    return domain_from_string(s);
}

inline Conversation parse_seconvo_conversation(const nlohmann::json& j, const std::string& fallback_id) {
    if (!j.is_object()) throw SchemaViolation("seconvo: conversation entry must be an object");
    Conversation conv;
    const auto* id = find_field(j, {"id", "conversation_id", "conv_id"});
    conv.id = (id != nullptr && id->is_string()) ? id->get<std::string>() : fallback_id;

    const auto* label = find_field(j, {"label", "is_malicious", "malicious", "is_fake"});
    if (label == nullptr) {
        // Unlabeled conversations are rejected rather than defaulted; inventing
        // labels would corrupt every downstream evaluation.
        throw SchemaViolation("seconvo: conversation '" + conv.id + "' has no label");
    }
    conv.gold_label = parse_seconvo_label(*label);
    conv.domain = parse_seconvo_domain(find_field(j, {"domain", "category", "scenario"}));

    const auto* msgs = find_field(j, {"messages", "dialogue", "conversation", "turns"});
    if (msgs == nullptr || !msgs->is_array() || msgs->empty()) {
        throw SchemaViolation("seconvo: conversation '" + conv.id + "' has no messages");
    }
    int turn = 0;
    for (const auto& jm : *msgs) {
        Message m;
        const auto* speaker = find_field(jm, {"speaker", "role", "name", "from", "agent"});
        const auto* text = find_field(jm, {"text", "message", "content", "utterance"});
        if (speaker == nullptr || text == nullptr || !text->is_string()) {
            throw SchemaViolation("seconvo: malformed message in '" + conv.id + "'");
        }
        m.speaker = speaker->is_string() ? speaker->get<std::string>() : speaker->dump();
        m.text = text->get<std::string>();
        if (trimmed(m.text).empty()) {
            throw SchemaViolation("seconvo: empty message text in '" + conv.id + "'");
        }
        m.turn_index = turn++;
        conv.messages.push_back(std::move(m));
    }

    const auto* ann = find_field(j, {"annotations", "annotation", "meta"});
    if (ann != nullptr && ann->is_object()) {
        nlohmann::json mapped = nlohmann::json::object();
        for (const auto& [key, value] : ann->items()) {
            if ((key == "ambiguity" || key == "ambiguity_score") && value.is_number()) {
                mapped["ambiguity_score"] = value;
            } else if ((key == "pii" || key == "pii_present" || key == "has_pii") &&
                       value.is_boolean()) {
                mapped["pii_present"] = value;
            } else {
                mapped[key] = value;
            }
        }
        conv.annotations = parse_annotations(mapped);
    }
    return conv;
}

inline void check_ids_and_labels(const Corpus& corpus) {
    std::unordered_set<std::string> ids;
    auto visit = [&](const std::vector<Conversation>& split) {
        for (const auto& c : split) {
            if (!ids.insert(c.id).second) {
                throw DuplicateId("duplicate conversation id: '" + c.id + "'");
            }
            if (!c.gold_label) {
                throw SchemaViolation("conversation '" + c.id + "' has no gold label");
            }
        }
    };
    visit(corpus.train);
    visit(corpus.test);
    if (corpus.size() == 0) throw SchemaViolation("corpus contains no conversations");
}

}  // namespace detail

inline Corpus parse_corpus_json(const nlohmann::json& root, CorpusFormat format) {
    Corpus corpus;
    if (format == CorpusFormat::GenericJson) {
        if (!root.is_object() || !root.contains("train") || !root.contains("test") ||
            !root["train"].is_array() || !root["test"].is_array()) {
            throw SchemaViolation("generic corpus must be {\"train\": [...], \"test\": [...]}");
        }
        for (const auto& j : root["train"]) corpus.train.push_back(detail::parse_generic_conversation(j));
        for (const auto& j : root["test"]) corpus.test.push_back(detail::parse_generic_conversation(j));
    } else {
        // Either {"train": [...], "test": [...]} or a flat array where every
        // entry carries a "split" field.
        auto entry_id = [](const char* split, std::size_t i) {
            return std::string("seconvo-") + split + "-" + std::to_string(i);
        };
        if (root.is_object() && root.contains("train") && root.contains("test")) {
            std::size_t i = 0;
            for (const auto& j : root["train"]) {
                corpus.train.push_back(detail::parse_seconvo_conversation(j, entry_id("train", i++)));
            }
            i = 0;
            for (const auto& j : root["test"]) {
                corpus.test.push_back(detail::parse_seconvo_conversation(j, entry_id("test", i++)));
            }
        } else if (root.is_array()) {
            std::size_t i = 0;
            for (const auto& j : root) {
                const auto* split = detail::find_field(j, {"split", "set"});
                if (split == nullptr || !split->is_string()) {
                    throw SchemaViolation("seconvo: flat array entries need a 'split' field");
                }
                const std::string s = split->get<std::string>();
                if (s == "train") {
                    corpus.train.push_back(detail::parse_seconvo_conversation(j, entry_id("train", i)));
                } else if (s == "test") {
                    corpus.test.push_back(detail::parse_seconvo_conversation(j, entry_id("test", i)));
                } else {
                    throw SchemaViolation("seconvo: split must be 'train' or 'test'");
                }
                ++i;
            }
        } else {
            throw SchemaViolation("seconvo: expected object with splits or flat array");
        }
    }
    detail::check_ids_and_labels(corpus);
    return corpus;
}

inline Corpus load_corpus(const std::string& path, CorpusFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path);
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedFile("failed to parse '" + path + "': " + e.what());
    }
    return parse_corpus_json(root, format);
}

inline nlohmann::json conversation_to_json(const Conversation& conv) {
    nlohmann::json j;
    j["id"] = conv.id;
    j["domain"] = to_string(conv.domain);
    j["label"] = conv.gold_label ? to_string(*conv.gold_label) : "";
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : conv.messages) {
        msgs.push_back({{"speaker", m.speaker}, {"text", m.text}});
    }
    j["messages"] = std::move(msgs);
    if (!conv.annotations.empty()) {
        j["annotations"] = detail::annotations_to_json(conv.annotations);
    }
    return j;
}

inline nlohmann::json corpus_to_json(const Corpus& corpus) {
    nlohmann::json root;
    root["train"] = nlohmann::json::array();
    root["test"] = nlohmann::json::array();
    for (const auto& c : corpus.train) root["train"].push_back(conversation_to_json(c));
    for (const auto& c : corpus.test) root["test"].push_back(conversation_to_json(c));
    return root;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write corpus file: " + path);
    out << corpus_to_json(corpus).dump(2) << '\n';
}

inline SplitStats split_counts(const Corpus& corpus) {
    SplitStats s;
    for (const auto& c : corpus.train) {
        (c.gold_label == Label::Fake ? s.train_fake : s.train_real) += 1;
    }
    for (const auto& c : corpus.test) {
        (c.gold_label == Label::Fake ? s.test_fake : s.test_real) += 1;
    }
    return s;
}

/// Amount-based windowing with one conversation per window: the stream is
/// simply the split in stable order.
inline std::span<const Conversation> as_stream(const std::vector<Conversation>& split) {
    return {split.data(), split.size()};
}

/// Re-split a synthetic corpus: pools both splits, then moves a stratified
/// fraction of each gold-label group into train. Only synthetic corpora may
/// be re-split; the published 40/360 split of real datasets is honored as-is.
inline Corpus resplit(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
    if (train_fraction < 0.0 || train_fraction > 1.0) {
        throw InvalidParams("resplit: train_fraction must be in [0, 1]");
    }
    std::vector<Conversation> pool;
    pool.reserve(corpus.size());
    for (const auto& c : corpus.train) pool.push_back(c);
    for (const auto& c : corpus.test) pool.push_back(c);
    for (const auto& c : pool) {
        if (c.domain != Domain::Synthetic) {
            throw InvalidParams("resplit is only supported for synthetic corpora");
        }
    }

    std::vector<std::size_t> fake_idx;
    std::vector<std::size_t> real_idx;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        (pool[i].gold_label == Label::Fake ? fake_idx : real_idx).push_back(i);
    }
    Rng rng(mix_seed(seed, 0x7e5f117ULL, 0));
    rng.shuffle(fake_idx);
    rng.shuffle(real_idx);

    Corpus out;
    auto distribute = [&](const std::vector<std::size_t>& idx) {
        const auto n_train = static_cast<std::size_t>(
            std::ceil(train_fraction * static_cast<double>(idx.size())));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < n_train ? out.train : out.test).push_back(pool[idx[i]]);
        }
    };
    distribute(fake_idx);
    distribute(real_idx);
    auto by_id = [](const Conversation& a, const Conversation& b) { return a.id < b.id; };
    std::sort(out.train.begin(), out.train.end(), by_id);
    std::sort(out.test.begin(), out.test.end(), by_id);
    return out;
}

}  // namespace convdrift
