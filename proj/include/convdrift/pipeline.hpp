#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "convdrift/drift.hpp"
#include "convdrift/ensemble.hpp"
#include "convdrift/errors.hpp"
#include "convdrift/judge.hpp"
#include "convdrift/types.hpp"

namespace convdrift {

/// Four-way outcome of either framework.
enum class FinalLabel { Real, SpamLike, SpammingDrift, FraudulentAttempt };

inline const char* to_string(FinalLabel l) {
    switch (l) {
        case FinalLabel::Real: return "real";
        case FinalLabel::SpamLike: return "spam_like";
        case FinalLabel::SpammingDrift: return "spamming_drift";
        case FinalLabel::FraudulentAttempt: return "fraudulent_attempt";
    }
    return "real";
}

inline FinalLabel final_label_from_string(const std::string& s) {
    if (s == "real") return FinalLabel::Real;
    if (s == "spam_like") return FinalLabel::SpamLike;
    if (s == "spamming_drift") return FinalLabel::SpammingDrift;
    if (s == "fraudulent_attempt") return FinalLabel::FraudulentAttempt;
    throw SchemaViolation("unknown final label: '" + s + "'");
}

/// SEConvo gold labels are binary, so everything that is not Real scores as
/// Fake.
inline Label binary_projection(FinalLabel l) {
    return l == FinalLabel::Real ? Label::Real : Label::Fake;
}

struct StageTimings {
    std::chrono::microseconds embed{0};
    std::chrono::microseconds phase1{0};
    std::chrono::microseconds drift{0};
    std::chrono::microseconds judge{0};
    std::chrono::microseconds total{0};
};

struct PipelineOutcome {
    std::string conversation_id;
    std::optional<FinalLabel> final_label;  // absent only for errored outcomes
    std::optional<VoteRecord> phase1_votes;
    std::optional<std::string> phase1_provider_id;  // dual-LLM mode
    std::optional<DriftReport> drift;
    std::optional<JudgeVerdict> verdict;
    StageTimings timings;
    bool errored = false;
    std::string error;
};

struct PipelineConfig {
    OcddConfig drift;
    JudgeOptions judge;
    int workers = 1;            // stream mode and timing checks need 1
    int judge_concurrency = 4;  // bound on in-flight judge calls
};

/// Consistency of one outcome with the routing rules; used by tests and
/// asserted across every run.
inline bool outcome_routing_valid(const PipelineOutcome& o) {
    if (o.errored) return !o.final_label.has_value();
    if (!o.final_label) return false;
    switch (*o.final_label) {
        case FinalLabel::Real:
            return !o.drift && !o.verdict;
        case FinalLabel::SpamLike:
            return o.drift && !o.drift->drift_detected && !o.verdict;
        case FinalLabel::SpammingDrift:
            return o.drift && o.drift->drift_detected && o.verdict &&
                   o.verdict->verdict == Verdict::Spamming;
        case FinalLabel::FraudulentAttempt:
            return o.drift && o.drift->drift_detected && o.verdict &&
                   o.verdict->verdict == Verdict::Fraudulent;
    }
    return false;
}

namespace detail {

class JudgeGate {
public:
    explicit JudgeGate(int limit) : limit_(limit > 0 ? limit : 1) {}

    void acquire() {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return in_flight_ < limit_; });
        ++in_flight_;
    }
    void release() {
        {
            std::lock_guard lk(mu_);
            --in_flight_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    int limit_;
    int in_flight_ = 0;
};

using Clock = std::chrono::steady_clock;

inline std::chrono::microseconds since(Clock::time_point& mark) {
    const auto now = Clock::now();
    const auto d = std::chrono::duration_cast<std::chrono::microseconds>(now - mark);
    mark = now;
    return d;
}

template <typename Phase1Fn, typename DriftFn>
PipelineOutcome process_conversation(const Conversation& conv, Phase1Fn&& phase1,
                                     DriftFn&& detect, ChatProvider& provider,
                                     const PipelineConfig& cfg, JudgeGate& gate) {
    PipelineOutcome outcome;
    outcome.conversation_id = conv.id;
    const auto start = Clock::now();
    auto mark = start;
    try {
        const Label flag = phase1(conv, outcome);
        outcome.timings.phase1 = since(mark);
        if (flag == Label::Real) {
            outcome.final_label = FinalLabel::Real;
        } else {
            outcome.drift = detect(conv);
            outcome.timings.drift = since(mark);
            if (!outcome.drift->drift_detected) {
                outcome.final_label = FinalLabel::SpamLike;
            } else {
                gate.acquire();
                try {
                    outcome.verdict = judge_conversation(provider, conv, *outcome.drift, cfg.judge);
                } catch (...) {
                    gate.release();
                    throw;
                }
                gate.release();
                outcome.timings.judge = since(mark);
                outcome.final_label = outcome.verdict->verdict == Verdict::Fraudulent
                                          ? FinalLabel::FraudulentAttempt
                                          : FinalLabel::SpammingDrift;
            }
        }
    } catch (const std::exception& e) {
        // quarantined, not dropped: the stream keeps going and the outcome
        // records what failed
        outcome.errored = true;
        outcome.error = e.what();
        outcome.final_label.reset();
        outcome.verdict.reset();
    }
    outcome.timings.total =
        std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
    return outcome;
}

template <typename PerConversation>
std::vector<PipelineOutcome> run_pool(std::span<const Conversation> stream, int workers,
                                      PerConversation&& fn) {
    std::vector<PipelineOutcome> outcomes(stream.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < stream.size(); ++i) outcomes[i] = fn(stream[i]);
        return outcomes;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < stream.size(); i = next.fetch_add(1)) {
            outcomes[i] = fn(stream[i]);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<int>(workers, static_cast<int>(stream.size()));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return outcomes;  // indexed by stream position, so order is preserved
}

}  // namespace detail

/// Joint framework: ensemble -> OCDD -> judge. Per conversation: embed and
/// vote; Real stops there; Fake goes through drift detection; only drifted
/// fakes reach the judge. Per-conversation errors quarantine that outcome
/// without aborting the stream.
inline std::vector<PipelineOutcome> run_joint(std::span<const Conversation> stream,
                                              const Phase1Model& model,
                                              ChatProvider& provider,
                                              const PipelineConfig& cfg = {}) {
    cfg.drift.validate();
    detail::JudgeGate gate(cfg.judge_concurrency);

    if (cfg.drift.mode == DriftMode::Stream) {
        // cross-conversation drift state forces sequential processing
        StreamDriftDetector detector(cfg.drift);
        std::vector<PipelineOutcome> outcomes;
        outcomes.reserve(stream.size());
        int index = 0;
        for (const auto& conv : stream) {
            const int stream_index = index++;
            auto phase1 = [&](const Conversation& c, PipelineOutcome& o) {
                auto mark = detail::Clock::now();
                const FeatureVector fv = embed_conversation(model.vectorizer, c);
                o.timings.embed = detail::since(mark);
                auto [label, votes] = predict_ensemble(model.ensemble, fv.values);
                o.phase1_votes = votes;
                return label;
            };
            auto detect = [&](const Conversation& c) {
                return detector.feed(embed_conversation(model.vectorizer, c), stream_index);
            };
            outcomes.push_back(
                detail::process_conversation(conv, phase1, detect, provider, cfg, gate));
        }
        return outcomes;
    }

    auto per_conversation = [&](const Conversation& conv) {
        auto phase1 = [&](const Conversation& c, PipelineOutcome& o) {
            auto mark = detail::Clock::now();
            const FeatureVector fv = embed_conversation(model.vectorizer, c);
            o.timings.embed = detail::since(mark);
            auto [label, votes] = predict_ensemble(model.ensemble, fv.values);
            o.phase1_votes = votes;
            return label;
        };
        auto detect = [&](const Conversation& c) {
            return detect_drift(c, embed_messages(model.vectorizer, c), cfg.drift);
        };
        return detail::process_conversation(conv, phase1, detect, provider, cfg, gate);
    };
    return detail::run_pool(stream, cfg.workers, per_conversation);
}

/// Dual-LLM framework: the same provider classifies in Phase 1 and, for
/// drifted fakes, judges in Phase 2. Drift detection still runs on the
/// TF-IDF/PCA embeddings.
inline std::vector<PipelineOutcome> run_dual_llm(std::span<const Conversation> stream,
                                                 const TextVectorizer& vectorizer,
                                                 ChatProvider& provider,
                                                 const PipelineConfig& cfg = {}) {
    cfg.drift.validate();
    detail::JudgeGate gate(cfg.judge_concurrency);

    auto per_conversation = [&](const Conversation& conv) {
        auto phase1 = [&](const Conversation& c, PipelineOutcome& o) {
            const LlmClassification cls = classify_conversation_llm(provider, c);
            o.phase1_provider_id = cls.provider_id;
            return cls.label;
        };
        auto detect = [&](const Conversation& c) {
            return detect_drift(c, embed_messages(vectorizer, c), cfg.drift);
        };
        return detail::process_conversation(conv, phase1, detect, provider, cfg, gate);
    };

    if (cfg.drift.mode == DriftMode::Stream) {
        StreamDriftDetector detector(cfg.drift);
        std::vector<PipelineOutcome> outcomes;
        outcomes.reserve(stream.size());
        int index = 0;
        for (const auto& conv : stream) {
            const int stream_index = index++;
            auto phase1 = [&](const Conversation& c, PipelineOutcome& o) {
                const LlmClassification cls = classify_conversation_llm(provider, c);
                o.phase1_provider_id = cls.provider_id;
                return cls.label;
            };
            auto detect = [&](const Conversation& c) {
                return detector.feed(embed_conversation(vectorizer, c), stream_index);
            };
            outcomes.push_back(
                detail::process_conversation(conv, phase1, detect, provider, cfg, gate));
        }
        return outcomes;
    }
    return detail::run_pool(stream, cfg.workers, per_conversation);
}

// ---------------------------------------------------------------------------
// JSON-lines serialization (one outcome object per line, stable field names)

inline nlohmann::json drift_report_to_json(const DriftReport& d) {
    nlohmann::json j;
    j["drift_detected"] = d.drift_detected;
    j["drift_position"] = d.drift_position ? nlohmann::json(*d.drift_position)
                                           : nlohmann::json(nullptr);
    j["outlier_fraction"] = d.outlier_fraction;
    j["scores"] = d.scores;
    j["reference_size"] = d.reference_size;
    j["test_window"] = d.test_window;
    j["low_confidence"] = d.low_confidence;
    return j;
}

inline DriftReport drift_report_from_json(const nlohmann::json& j) {
    DriftReport d;
    d.drift_detected = j.at("drift_detected").get<bool>();
    if (!j.at("drift_position").is_null()) d.drift_position = j["drift_position"].get<int>();
    d.outlier_fraction = j.at("outlier_fraction").get<double>();
    d.scores = j.at("scores").get<std::vector<double>>();
    d.reference_size = j.at("reference_size").get<int>();
    d.test_window = j.at("test_window").get<int>();
    d.low_confidence = j.at("low_confidence").get<bool>();
    return d;
}

inline nlohmann::json outcome_to_json(const PipelineOutcome& o) {
    nlohmann::json j;
    j["conversation_id"] = o.conversation_id;
    j["final_label"] = o.final_label ? nlohmann::json(to_string(*o.final_label))
                                     : nlohmann::json(nullptr);
    if (o.phase1_votes) {
        j["phase1_votes"] = {{"knn", to_string(o.phase1_votes->knn)},
                             {"svm", to_string(o.phase1_votes->svm)},
                             {"impkmeans", to_string(o.phase1_votes->impkmeans)}};
    }
    if (o.phase1_provider_id) j["phase1_provider_id"] = *o.phase1_provider_id;
    if (o.drift) j["drift"] = drift_report_to_json(*o.drift);
    if (o.verdict) {
        j["verdict"] = {{"verdict", to_string(o.verdict->verdict)},
                        {"explanation", o.verdict->explanation},
                        {"raw_response", o.verdict->raw_response},
                        {"provider_id", o.verdict->provider_id},
                        {"latency_us", o.verdict->latency.count()}};
    }
    j["timings_us"] = {{"embed", o.timings.embed.count()},
                       {"phase1", o.timings.phase1.count()},
                       {"drift", o.timings.drift.count()},
                       {"judge", o.timings.judge.count()},
                       {"total", o.timings.total.count()}};
    if (o.errored) j["error"] = o.error;
    return j;
}

inline PipelineOutcome outcome_from_json(const nlohmann::json& j) {
    PipelineOutcome o;
    o.conversation_id = j.at("conversation_id").get<std::string>();
    if (!j.at("final_label").is_null()) {
        o.final_label = final_label_from_string(j["final_label"].get<std::string>());
    }
    if (j.contains("phase1_votes")) {
        VoteRecord v;
        v.knn = label_from_string(j["phase1_votes"].at("knn").get<std::string>());
        v.svm = label_from_string(j["phase1_votes"].at("svm").get<std::string>());
        v.impkmeans = label_from_string(j["phase1_votes"].at("impkmeans").get<std::string>());
        o.phase1_votes = v;
    }
    if (j.contains("phase1_provider_id")) {
        o.phase1_provider_id = j["phase1_provider_id"].get<std::string>();
    }
    if (j.contains("drift")) o.drift = drift_report_from_json(j["drift"]);
    if (j.contains("verdict")) {
        JudgeVerdict v;
        const auto& jv = j["verdict"];
        v.verdict = jv.at("verdict").get<std::string>() == "fraud" ? Verdict::Fraudulent
                                                                   : Verdict::Spamming;
        v.explanation = jv.at("explanation").get<std::string>();
        v.raw_response = jv.at("raw_response").get<std::string>();
        v.provider_id = jv.at("provider_id").get<std::string>();
        v.latency = std::chrono::microseconds(jv.at("latency_us").get<long long>());
        o.verdict = v;
    }
    const auto& t = j.at("timings_us");
    o.timings.embed = std::chrono::microseconds(t.at("embed").get<long long>());
    o.timings.phase1 = std::chrono::microseconds(t.at("phase1").get<long long>());
    o.timings.drift = std::chrono::microseconds(t.at("drift").get<long long>());
    o.timings.judge = std::chrono::microseconds(t.at("judge").get<long long>());
    o.timings.total = std::chrono::microseconds(t.at("total").get<long long>());
    if (j.contains("error")) {
        o.errored = true;
        o.error = j["error"].get<std::string>();
    }
    return o;
}

inline void write_outcomes_jsonl(std::ostream& out,
                                 const std::vector<PipelineOutcome>& outcomes) {
    for (const auto& o : outcomes) out << outcome_to_json(o).dump() << '\n';
}

inline std::vector<PipelineOutcome> read_outcomes_jsonl(std::istream& in) {
    std::vector<PipelineOutcome> outcomes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw MalformedFile("invalid JSON line in outcomes file");
        outcomes.push_back(outcome_from_json(j));
    }
    return outcomes;
}

}  // namespace convdrift
