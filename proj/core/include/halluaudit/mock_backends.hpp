#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "halluaudit/gateway.hpp"

namespace halluaudit::mock {

// Signed feature-hashing bag-of-words embedding. Deterministic; identical
// texts map to identical unit-norm vectors, disjoint vocabularies are
// near-orthogonal in expectation.
class HashingEmbedBackend : public EmbedBackend {
public:
    explicit HashingEmbedBackend(std::size_t dimension = 256);
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    std::string id() const override { return "mock-embed-hashing"; }

private:
    std::size_t dimension_;
};

// Token-overlap reranker: |q ∩ p| / min(|q|, |p|) over unique token sets.
class OverlapRerankBackend : public RerankBackend {
public:
    std::vector<double> rerank(const std::string& query,
                               const std::vector<std::string>& passages) override;
    std::string id() const override { return "mock-rerank-overlap"; }
};

// Containment entailment: the premise entails the hypothesis when every
// hypothesis token occurs in the premise.
class ContainmentNliBackend : public NliBackend {
public:
    NliVerdict classify(const std::string& premise, const std::string& hypothesis) override;
    std::string id() const override { return "mock-nli-containment"; }
};

// Template-aware deterministic chat model. Covers every prompt asset the
// audit pipeline issues so that --mock-backends runs are bit-reproducible.
class HeuristicChatBackend : public ChatBackend {
public:
    std::string complete(const ChatRequest& request) override;
    std::string id() const override { return "mock-chat-heuristic"; }

private:
    std::string decompose_query(const ChatRequest& request) const;
    std::string decompose_reasoning(const ChatRequest& request) const;
    std::string decompose_report(const ChatRequest& request) const;
    std::string refine_units(const ChatRequest& request, bool actions) const;
    std::string verify_claim(const ChatRequest& request) const;
    std::string verify_action(const ChatRequest& request) const;
    std::string noise_impact(const ChatRequest& request) const;
    std::string root_cause(const ChatRequest& request) const;
};

// Fixed replies for unit tests: per-template FIFO queues with an optional
// catch-all default. Thread-safe.
class ScriptedChatBackend : public ChatBackend {
public:
    void enqueue(const std::string& template_id, std::string reply);
    void set_default(const std::string& template_id, std::string reply);
    std::string complete(const ChatRequest& request) override;
    std::string id() const override { return "scripted-chat"; }

private:
    std::mutex mutex_;
    std::map<std::string, std::deque<std::string>> queues_;
    std::map<std::string, std::string> defaults_;
};

// True when `sentence` reads as an imperative instruction (leading verb
// from the planning vocabulary, or an "I will ..." form).
bool looks_imperative(const std::string& sentence);

// Strips "I will ", "The agent will ", "Next, " style lead-ins and uppercases
// the first verb, yielding the imperative form.
std::string to_imperative(const std::string& sentence);

bool is_speculative(const std::string& sentence);

struct MockBackendSet {
    std::shared_ptr<ChatBackend> chat;
    std::shared_ptr<EmbedBackend> embed;
    std::shared_ptr<RerankBackend> rerank;
    std::shared_ptr<NliBackend> nli;
};

MockBackendSet make_default_mocks();

}  // namespace halluaudit::mock
