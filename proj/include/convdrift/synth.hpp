#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "convdrift/random.hpp"
#include "convdrift/types.hpp"

namespace convdrift {
namespace synth {

// Each generated message is a fixed per-role "core" passage plus one random
// "flair" sentence. The verbatim core keeps messages of the same kind close
// in TF-IDF space (a five-message reference window must generalize to unseen
// turns), while flair varies the surface. Fraudulent conversations keep
// every sensitive-information phrase strictly after the drift turn, and
// spam-like ones push personal questions without ever switching into payment
// territory.

inline const char* research_core() {
    return "The current draft of the %TOPIC% manuscript covers the study "
           "design, the experiments, and the methodology behind the results. "
           "Our analysis section still needs the evaluation tables merged "
           "before the review.";
}

inline const std::array<const char*, 8>& research_flair() {
    static const std::array<const char*, 8> v = {
        "Could you look at the notes this week?",
        "The deadline moved by a week.",
        "We should add one more baseline.",
        "The committee asked about the outline.",
        "I shared the new figures today.",
        "Two groups asked about the seminar.",
        "Let me know what you think of the plan.",
        "The last session went well.",
    };
    return v;
}

inline const char* spam_core() {
    return "You are doing amazing, brilliant work, and readers everywhere "
           "admire such wonderful, inspiring insight. Honestly, every story "
           "about your remarkable journey turns into pure gold for our audience.";
}

inline const std::array<const char*, 8>& spam_flair() {
    static const std::array<const char*, 8> v = {
        "Nobody explains things the way you do.",
        "Could you share your birth date for the piece?",
        "Another glowing feature about you is overdue.",
        "We would love to know your birth dates too.",
        "Everyone here talks about your work all the time.",
        "More readers ask about you every day.",
        "That last story was such a good one.",
        "You make this look easy every time.",
    };
    return v;
}

inline const char* payment_core() {
    return "Our billing team needs the payment verification finished before "
           "the account setup can continue processing. The onboarding system "
           "keeps the collaboration locked until the billing step clears.";
}

inline const std::array<const char*, 6>& payment_flair() {
    static const std::array<const char*, 6> v = {
        "Please provide your full name, birthdate, and billing address.",
        "We need your credit card details for a small registration fee.",
        "Send the card number and expiry over to finance.",
        "A small wire transfer activates your collaborator account.",
        "Reply with your social security number and bank account.",
        "Share the one time password to finish the billing step.",
    };
    return v;
}

// Responder acknowledgements echo the initiator's register, so every message
// of a phase shares vocabulary that varies between conversations and
// therefore survives the conversation-level PCA.
inline const char* research_ack_core() {
    return "Thanks, the %TOPIC% draft plan sounds good; happy to review the "
           "methodology and the experiments section of the manuscript.";
}

inline const char* spam_ack_core() {
    return "Thanks, such a wonderful spotlight sounds amazing; glad the "
           "readers enjoy the story of our journey.";
}

inline const std::array<const char*, 8>& ack_flair() {
    static const std::array<const char*, 8> v = {
        "Send over the notes when ready.",
        "I will take a look later this week.",
        "Happy to help with the next step.",
        "Let me get back to you tomorrow.",
        "Looking forward to it.",
        "I will follow up after the meeting.",
        "Feel free to ping me anytime.",
        "We can sync on the rest later.",
    };
    return v;
}

inline const char* refusal_core() {
    return "I am not comfortable sharing that kind of personal information, "
           "and I would rather not continue this way. This request feels "
           "unrelated to the collaboration we discussed.";
}

inline const std::array<const char*, 6>& refusal_flair() {
    static const std::array<const char*, 6> v = {
        "I need to see official documents first.",
        "Why is this required at all?",
        "This was supposed to be about the research.",
        "Please go through official channels.",
        "I will need to verify who you are.",
        "That seems unrelated to our discussion.",
    };
    return v;
}

inline const std::array<const char*, 8>& topics() {
    static const std::array<const char*, 8> v = {
        "streaming analytics", "graph embeddings", "speech enhancement",
        "protein folding", "soil moisture modeling", "market microstructure",
        "low power sensing", "educational data mining",
    };
    return v;
}

inline const std::array<const char*, 8>& initiator_names() {
    static const std::array<const char*, 8> v = {
        "Morgan", "Riley", "Jordan", "Casey", "Avery", "Quinn", "Hayden", "Parker",
    };
    return v;
}

inline const std::array<const char*, 8>& responder_names() {
    static const std::array<const char*, 8> v = {
        "Sam", "Alex", "Jamie", "Taylor", "Drew", "Robin", "Blake", "Reese",
    };
    return v;
}

template <std::size_t N>
const char* pick(Rng& rng, const std::array<const char*, N>& bank) {
    return bank[rng.bounded(N)];
}

/// Per-conversation flair rotation: each conversation commits to a small
/// subset of its bank up front and cycles through it, so the opening turns
/// (the drift detector's reference window) already exhibit every flair the
/// rest of the conversation will use.
template <std::size_t N>
class FlairCycle {
public:
    FlairCycle(Rng& rng, const std::array<const char*, N>& bank, std::size_t subset) {
        std::vector<std::size_t> order(N);
        for (std::size_t i = 0; i < N; ++i) order[i] = i;
        rng.shuffle(order);
        for (std::size_t i = 0; i < std::min(subset, N); ++i) {
            chosen_.push_back(bank[order[i]]);
        }
    }

    const char* next() {
        const char* out = chosen_[cursor_ % chosen_.size()];
        ++cursor_;
        return out;
    }

private:
    std::vector<const char*> chosen_;
    std::size_t cursor_ = 0;
};

inline std::string substitute_topic(std::string text, const std::string& topic) {
    const std::string marker = "%TOPIC%";
    for (auto pos = text.find(marker); pos != std::string::npos; pos = text.find(marker)) {
        text.replace(pos, marker.size(), topic);
    }
    return text;
}

enum class ConvKind { Real, SpamLike, FraudDrift };

/// Drift always lands on an initiator turn so the topic switch is the
/// attacker's move; with even turn counts this is exactly the midpoint.
inline int drift_turn_for(int turns_per_conv) {
    const int half = turns_per_conv / 2;
    return half % 2 == 0 ? half : half + 1;
}

inline Conversation make_conversation(ConvKind kind, std::uint64_t seed,
                                      std::uint64_t stream, int index,
                                      int turns_per_conv) {
    Rng rng(mix_seed(seed, stream, static_cast<std::uint64_t>(index)));
    const std::string topic = pick(rng, topics());
    const std::string initiator = pick(rng, initiator_names());
    const std::string responder = pick(rng, responder_names());
    const int drift = drift_turn_for(turns_per_conv);

    Conversation conv;
    conv.domain = Domain::Synthetic;
    switch (kind) {
        case ConvKind::Real:
            conv.id = "synth-real-" + std::to_string(index);
            conv.gold_label = Label::Real;
            break;
        case ConvKind::SpamLike:
            conv.id = "synth-spam-" + std::to_string(index);
            conv.gold_label = Label::Fake;
            break;
        case ConvKind::FraudDrift:
            conv.id = "synth-fraud-" + std::to_string(index);
            conv.gold_label = Label::Fake;
            conv.annotations.drift_turn = drift;
            break;
    }

    FlairCycle initiator_flair(rng,
                               kind == ConvKind::SpamLike ? spam_flair() : research_flair(), 3);
    FlairCycle ack_flairs(rng, ack_flair(), 2);
    FlairCycle payment_flairs(rng, payment_flair(), 3);
    FlairCycle refusal_flairs(rng, refusal_flair(), 2);

    for (int t = 0; t < turns_per_conv; ++t) {
        const bool initiator_turn = t % 2 == 0;
        const bool past_drift = kind == ConvKind::FraudDrift && t >= drift;
        std::string text;
        if (initiator_turn) {
            if (kind == ConvKind::SpamLike) {
                text = std::string(spam_core()) + " " + initiator_flair.next();
            } else if (past_drift) {
                text = std::string(payment_core()) + " " + payment_flairs.next();
            } else {
                text = substitute_topic(
                    std::string(research_core()) + " " + initiator_flair.next(), topic);
            }
        } else if (past_drift) {
            text = std::string(refusal_core()) + " " + refusal_flairs.next();
        } else if (kind == ConvKind::SpamLike) {
            text = std::string(spam_ack_core()) + " " + ack_flairs.next();
        } else {
            text = substitute_topic(
                std::string(research_ack_core()) + " " + ack_flairs.next(), topic);
        }
        conv.messages.push_back(Message{initiator_turn ? initiator : responder, t, std::move(text)});
    }
    return conv;
}

}  // namespace synth

/// Deterministic labeled fixture corpus. All conversations land in the test
/// split (use resplit() to carve out a training portion). Fraudulent
/// conversations switch from research chatter to sensitive-information
/// requests at the turn recorded in annotations.drift_turn; spam-like ones
/// stay on-topic but gushing throughout.
inline Corpus generate_synthetic(std::uint64_t seed, int n_real, int n_spamlike,
                                 int n_fraud_drift, int turns_per_conv) {
    if (n_real < 0 || n_spamlike < 0 || n_fraud_drift < 0) {
        throw InvalidParams("generate_synthetic: counts must be non-negative");
    }
    if (turns_per_conv < 4) {
        throw InvalidParams("generate_synthetic: turns_per_conv must be at least 4");
    }
    Corpus corpus;
    corpus.test.reserve(static_cast<std::size_t>(n_real + n_spamlike + n_fraud_drift));
    for (int i = 0; i < n_real; ++i) {
        corpus.test.push_back(synth::make_conversation(synth::ConvKind::Real, seed, 1, i, turns_per_conv));
    }
    for (int i = 0; i < n_spamlike; ++i) {
        corpus.test.push_back(synth::make_conversation(synth::ConvKind::SpamLike, seed, 2, i, turns_per_conv));
    }
    for (int i = 0; i < n_fraud_drift; ++i) {
        corpus.test.push_back(synth::make_conversation(synth::ConvKind::FraudDrift, seed, 3, i, turns_per_conv));
    }
    return corpus;
}

}  // namespace convdrift
