#pragma once

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "convdrift/drift.hpp"
#include "convdrift/errors.hpp"
#include "convdrift/tokenizer.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

// ---------------------------------------------------------------------------
// sensitive-information phrase tables (token sequences, matched after the
// standard tokenizer so "feature" never matches "fee")

namespace sensitive {

using Phrase = std::vector<std::string>;

inline const std::vector<Phrase>& fraud_phrases() {
    static const std::vector<Phrase> v = {
        {"credit", "card"}, {"card", "details"}, {"card", "number"},
        {"billing", "address"}, {"wire", "transfer"}, {"social", "security"},
        {"ssn"}, {"bank", "account"}, {"routing", "number"}, {"password"},
    };
    return v;
}

inline const std::vector<Phrase>& birth_phrases() {
    static const std::vector<Phrase> v = {
        {"birth", "date"}, {"birth", "dates"}, {"birthdate"}, {"date", "of", "birth"},
    };
    return v;
}

inline const std::vector<std::string>& payment_context_tokens() {
    static const std::vector<std::string> v = {
        "payment", "fee", "billing", "card", "account", "invoice", "wire", "bank",
    };
    return v;
}

inline bool contains_phrase(const std::vector<std::string>& tokens, const Phrase& phrase) {
    if (phrase.empty() || tokens.size() < phrase.size()) return false;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < phrase.size(); ++j) {
            if (tokens[i + j] != phrase[j]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

inline std::optional<std::string> first_fraud_phrase(const std::vector<std::string>& tokens) {
    for (const auto& p : fraud_phrases()) {
        if (contains_phrase(tokens, p)) return join_tokens(p);
    }
    return std::nullopt;
}

inline bool mentions_birth(const std::vector<std::string>& tokens) {
    for (const auto& p : birth_phrases()) {
        if (contains_phrase(tokens, p)) return true;
    }
    return false;
}

inline bool mentions_payment_context(const std::vector<std::string>& tokens) {
    for (const auto& t : tokens) {
        for (const auto& p : payment_context_tokens()) {
            if (t == p) return true;
        }
    }
    return false;
}

/// Any phrase that marks a request for sensitive information, including
/// birth-date probes.
inline bool any_sensitive_phrase(const std::vector<std::string>& tokens) {
    return first_fraud_phrase(tokens).has_value() || mentions_birth(tokens);
}

}  // namespace sensitive

// ---------------------------------------------------------------------------
// prompt templates

inline constexpr const char* kPromptVersion = "v1";

inline constexpr const char* kJudgeSystemPrompt =
    "You are a fraud analyst reviewing chat conversations that a monitoring "
    "pipeline flagged as fake.";

inline constexpr const char* kClassifySystemPrompt =
    "You are a fraud analyst screening online chat conversations.";

inline constexpr const char* kJudgeInstruction =
    "Decide whether the shift is a fraudulent attempt to extract sensitive "
    "information or benign spam-like behavior.\n"
    "Answer with a single JSON object: "
    "{\"verdict\": \"fraud\" | \"spam\", \"explanation\": \"<1-3 sentences>\"}";

inline constexpr const char* kClassifyInstruction =
    "Classify the conversation as real or fake.\n"
    "Answer with a single JSON object: {\"label\": \"real\" | \"fake\"}";

inline constexpr const char* kDriftContextPrefix = "Detected topic shift at turn: ";

struct JudgePrompt {
    std::string system_text;
    std::string user_text;
};

inline std::string render_transcript(const Conversation& conv) {
    std::string out;
    for (const auto& m : conv.messages) {
        out += "[" + std::to_string(m.turn_index) + "] " + m.speaker + ": " + m.text + "\n";
    }
    return out;
}

/// Judge prompt: task framing, full transcript in turn order, the detected
/// drift position, and the JSON output instruction.
inline JudgePrompt build_judge_prompt(const Conversation& conv, const DriftReport& drift,
                                      bool include_drift_context = true) {
    if (!drift.drift_detected) {
        throw InvalidParams("build_judge_prompt: conversation has no detected drift");
    }
    std::string user = "A topic shift was detected in the flagged conversation below.\n";
    if (include_drift_context) {
        user += std::string(kDriftContextPrefix) +
                std::to_string(drift.drift_position.value_or(0)) + "\n";
    }
    user += "\nTranscript:\n" + render_transcript(conv) + "\n" + kJudgeInstruction;
    return {kJudgeSystemPrompt, std::move(user)};
}

inline JudgePrompt build_classify_prompt(const Conversation& conv) {
    std::string user = "Screen the conversation below.\n\nTranscript:\n" +
                       render_transcript(conv) + "\n" + kClassifyInstruction;
    return {kClassifySystemPrompt, std::move(user)};
}

// ---------------------------------------------------------------------------
// verdict parsing

enum class Verdict { Fraudulent, Spamming };

inline const char* to_string(Verdict v) {
    return v == Verdict::Fraudulent ? "fraud" : "spam";
}

struct JudgeVerdict {
    Verdict verdict = Verdict::Spamming;
    std::string explanation;
    std::string raw_response;
    std::string provider_id;
    std::chrono::microseconds latency{0};
};

/// First balanced JSON object embedded anywhere in the text, if any.
inline std::optional<nlohmann::json> extract_first_json_object(const std::string& text) {
    for (std::size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                --depth;
                if (depth == 0) {
                    const auto candidate = text.substr(start, i - start + 1);
                    auto parsed = nlohmann::json::parse(candidate, nullptr, false);
                    if (!parsed.is_discarded()) return parsed;
                    break;
                }
            }
        }
    }
    return std::nullopt;
}

inline std::string lowercased(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

/// Extracts the first JSON object in the response and maps its verdict.
/// Tolerates surrounding prose and case differences; anything without a
/// usable object is an UnparseableResponse.
inline JudgeVerdict parse_verdict(const std::string& raw) {
    const auto obj = extract_first_json_object(raw);
    if (!obj || !obj->is_object() || !obj->contains("verdict") ||
        !(*obj)["verdict"].is_string()) {
        throw UnparseableResponse("no verdict object in response");
    }
    const std::string v = lowercased((*obj)["verdict"].get<std::string>());
    JudgeVerdict verdict;
    if (v == "fraud" || v == "fraudulent") {
        verdict.verdict = Verdict::Fraudulent;
    } else if (v == "spam" || v == "spamming") {
        verdict.verdict = Verdict::Spamming;
    } else {
        throw UnparseableResponse("unknown verdict string: '" + v + "'");
    }
    if (obj->contains("explanation") && (*obj)["explanation"].is_string() &&
        !(*obj)["explanation"].get<std::string>().empty()) {
        verdict.explanation = (*obj)["explanation"].get<std::string>();
    } else {
        verdict.explanation = "(no explanation provided)";
    }
    verdict.raw_response = raw;
    return verdict;
}

inline Label parse_classification(const std::string& raw) {
    const auto obj = extract_first_json_object(raw);
    if (!obj || !obj->is_object() || !obj->contains("label") || !(*obj)["label"].is_string()) {
        throw UnparseableResponse("no label object in response");
    }
    const std::string v = lowercased((*obj)["label"].get<std::string>());
    if (v == "real") return Label::Real;
    if (v == "fake") return Label::Fake;
    throw UnparseableResponse("unknown label string: '" + v + "'");
}

// ---------------------------------------------------------------------------
// providers

struct ChatMessage {
    std::string role;
    std::string content;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string id() const = 0;
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

namespace detail {

struct ParsedTranscript {
    std::vector<std::pair<int, std::string>> turns;  // turn index, text
    int drift_turn = 0;
};

inline ParsedTranscript parse_prompt_transcript(const std::string& user_text) {
    ParsedTranscript out;
    std::size_t pos = 0;
    const std::string drift_marker = kDriftContextPrefix;
    if (const auto dp = user_text.find(drift_marker); dp != std::string::npos) {
        out.drift_turn = std::atoi(user_text.c_str() + dp + drift_marker.size());
    }
    while (pos < user_text.size()) {
        auto eol = user_text.find('\n', pos);
        if (eol == std::string::npos) eol = user_text.size();
        const std::string line = user_text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.size() > 2 && line[0] == '[') {
            const auto close = line.find(']');
            const auto colon = line.find(": ", close);
            if (close != std::string::npos && colon != std::string::npos) {
                out.turns.emplace_back(std::atoi(line.substr(1, close - 1).c_str()),
                                       line.substr(colon + 2));
            }
        }
    }
    return out;
}

}  // namespace detail

/// Deterministic offline stand-in for an LLM. It reads the same prompt an
/// HTTP provider would receive and answers from a fixed rule table:
///  - judge prompts: any sensitive-information phrase at or after the
///    reported drift turn (or a birth-date probe together with payment talk)
///    means fraud, otherwise spam;
///  - classification prompts: any sensitive-information phrase anywhere
///    means fake, otherwise real.
/// Pure function of the request; never touches the network.
class MockProvider : public ChatProvider {
public:
    std::string id() const override { return "mock"; }

    std::string complete(const std::vector<ChatMessage>& messages) override {
        std::string user_text;
        for (const auto& m : messages) {
            if (m.role == "user") user_text += m.content + "\n";
        }
        const auto transcript = detail::parse_prompt_transcript(user_text);
        if (user_text.find("\"verdict\"") != std::string::npos) {
            return judge_response(transcript);
        }
        if (user_text.find("\"label\"") != std::string::npos) {
            return classify_response(transcript);
        }
        return R"({"error": "unrecognized task"})";
    }

private:
    static std::string judge_response(const detail::ParsedTranscript& t) {
        std::vector<std::string> post_drift_tokens;
        for (const auto& [turn, text] : t.turns) {
            if (turn < t.drift_turn) continue;
            for (auto& tok : tokenize(text)) post_drift_tokens.push_back(std::move(tok));
        }
        const auto phrase = sensitive::first_fraud_phrase(post_drift_tokens);
        const bool birth_payment = sensitive::mentions_birth(post_drift_tokens) &&
                                   sensitive::mentions_payment_context(post_drift_tokens);
        nlohmann::json out;
        if (phrase || birth_payment) {
            out["verdict"] = "fraud";
            out["explanation"] = "After the topic shift the conversation requests " +
                                 phrase.value_or("a birth date in a payment context") + ".";
        } else {
            out["verdict"] = "spam";
            out["explanation"] =
                "The messages stay repetitive and promotional without asking for "
                "sensitive information.";
        }
        return out.dump();
    }

    static std::string classify_response(const detail::ParsedTranscript& t) {
        std::vector<std::string> tokens;
        for (const auto& [turn, text] : t.turns) {
            for (auto& tok : tokenize(text)) tokens.push_back(std::move(tok));
        }
        nlohmann::json out;
        out["label"] = sensitive::any_sensitive_phrase(tokens) ? "fake" : "real";
        return out.dump();
    }
};

struct ProviderConfig {
    std::string base_url = "http://127.0.0.1:8080";
    std::string chat_path = "/v1/chat/completions";
    std::string model_name = "llama";
    std::string api_key_env = "CONVDRIFT_API_KEY";
    double temperature = 0.0;  // deterministic decoding unless overridden
    std::chrono::milliseconds timeout{30000};
    int max_retries = 2;
};

struct HttpResult {
    int status = 0;
    std::string body;
    bool timed_out = false;
    std::string error;
};

/// Generic chat-completion client: messages array in, assistant text out.
/// The transport is injectable so tests can count or fail requests without a
/// socket; the default transport is cpp-httplib (see tools/).
class HttpProvider : public ChatProvider {
public:
    using Transport = std::function<HttpResult(const ProviderConfig&, const std::string& body)>;

    HttpProvider(ProviderConfig config, Transport transport)
        : config_(std::move(config)), transport_(std::move(transport)) {}

    std::string id() const override { return "http:" + config_.model_name; }

    std::string complete(const std::vector<ChatMessage>& messages) override {
        nlohmann::json request;
        request["model"] = config_.model_name;
        request["temperature"] = config_.temperature;
        request["messages"] = nlohmann::json::array();
        for (const auto& m : messages) {
            request["messages"].push_back({{"role", m.role}, {"content", m.content}});
        }
        const std::string body = request.dump();

        HttpResult result;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(50L * attempt));
            }
            result = transport_(config_, body);
            if (result.timed_out) continue;
            if (result.status >= 500) continue;  // transient server errors retry
            break;
        }
        if (result.timed_out) {
            throw ProviderTimeout("chat completion timed out after " +
                                  std::to_string(config_.max_retries + 1) + " attempts");
        }
        if (result.status < 200 || result.status >= 300) {
            throw ProviderHttpError(result.status,
                                    "chat completion failed with status " +
                                        std::to_string(result.status) +
                                        (result.error.empty() ? "" : ": " + result.error));
        }
        auto parsed = nlohmann::json::parse(result.body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty() ||
            !parsed["choices"][0].contains("message") ||
            !parsed["choices"][0]["message"].contains("content") ||
            !parsed["choices"][0]["message"]["content"].is_string()) {
            throw ProviderHttpError(result.status, "malformed chat completion body");
        }
        return parsed["choices"][0]["message"]["content"].get<std::string>();
    }

    const ProviderConfig& config() const { return config_; }

private:
    ProviderConfig config_;
    Transport transport_;
};

/// Wrapper that counts completions; used to assert call-count invariants.
class CountingProvider : public ChatProvider {
public:
    explicit CountingProvider(ChatProvider& inner) : inner_(inner) {}
    std::string id() const override { return inner_.id(); }
    std::string complete(const std::vector<ChatMessage>& messages) override {
        ++calls_;
        return inner_.complete(messages);
    }
    int calls() const { return calls_; }

private:
    ChatProvider& inner_;
    int calls_ = 0;
};

// ---------------------------------------------------------------------------
// judge operations

struct JudgeOptions {
    bool include_drift_context = true;
};

inline std::vector<ChatMessage> to_messages(const JudgePrompt& prompt) {
    return {{"system", prompt.system_text}, {"user", prompt.user_text}};
}

/// Build -> call -> parse. One retry with a "JSON only" reminder when the
/// first response cannot be parsed.
inline JudgeVerdict judge_conversation(ChatProvider& provider, const Conversation& conv,
                                       const DriftReport& drift, const JudgeOptions& opts = {}) {
    const JudgePrompt prompt = build_judge_prompt(conv, drift, opts.include_drift_context);
    auto messages = to_messages(prompt);
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&](JudgeVerdict v) {
        v.provider_id = provider.id();
        v.latency = std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - start);
        return v;
    };
    const std::string raw = provider.complete(messages);
    try {
        return finish(parse_verdict(raw));
    } catch (const UnparseableResponse&) {
        messages.push_back({"user", "Answer with JSON only."});
        return finish(parse_verdict(provider.complete(messages)));
    }
}

struct LlmClassification {
    Label label = Label::Real;
    std::string provider_id;
    std::string raw_response;
};

/// Phase-1 role in the dual-LLM pipeline: real-vs-fake straight from the
/// transcript, same retry and parse policy as the judge.
inline LlmClassification classify_conversation_llm(ChatProvider& provider,
                                                   const Conversation& conv) {
    const JudgePrompt prompt = build_classify_prompt(conv);
    auto messages = to_messages(prompt);
    LlmClassification out;
    out.provider_id = provider.id();
    out.raw_response = provider.complete(messages);
    try {
        out.label = parse_classification(out.raw_response);
    } catch (const UnparseableResponse&) {
        messages.push_back({"user", "Answer with JSON only."});
        out.raw_response = provider.complete(messages);
        out.label = parse_classification(out.raw_response);
    }
    return out;
}

}  // namespace convdrift
