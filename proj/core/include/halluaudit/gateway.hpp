#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "halluaudit/errors.hpp"

namespace halluaudit {

struct ChatCall {
    std::string template_id;
    std::map<std::string, std::string> variables;
    double temperature = 0.0;
};

struct EmbeddingVector {
    std::vector<float> values;

    std::size_t dimension() const { return values.size(); }
};

struct NliVerdict {
    double p_entail = 0.0;
    double p_contradict = 0.0;
    double p_neutral = 0.0;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds backoff{100};
};

struct GatewayConfig {
    std::string chat_url;
    std::string embed_url;
    std::string rerank_url;
    std::string nli_url;
    std::string api_key;
    std::string cache_dir;  // empty disables the on-disk cache
    RetryPolicy retry;
    double nli_entail_threshold = 0.99;

    // Fills unset endpoint fields from HALLU_CHAT_URL, HALLU_EMBED_URL,
    // HALLU_RERANK_URL, HALLU_NLI_URL and HALLU_API_KEY.
    void apply_env();
};

// A rendered chat request as seen by a backend. Mock backends dispatch on
// template_id/variables; HTTP backends send `text`.
struct ChatRequest {
    std::string template_id;
    std::map<std::string, std::string> variables;
    std::string text;
    double temperature = 0.0;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual std::string id() const = 0;
};

class EmbedBackend {
public:
    virtual ~EmbedBackend() = default;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
    virtual std::string id() const = 0;
};

class RerankBackend {
public:
    virtual ~RerankBackend() = default;
    virtual std::vector<double> rerank(const std::string& query,
                                       const std::vector<std::string>& passages) = 0;
    virtual std::string id() const = 0;
};

class NliBackend {
public:
    virtual ~NliBackend() = default;
    virtual NliVerdict classify(const std::string& premise, const std::string& hypothesis) = 0;
    virtual std::string id() const = 0;
};

struct GatewayStats {
    std::atomic<std::uint64_t> chat_calls{0};
    std::atomic<std::uint64_t> embed_calls{0};
    std::atomic<std::uint64_t> rerank_calls{0};
    std::atomic<std::uint64_t> nli_calls{0};
    std::atomic<std::uint64_t> cache_hits{0};
    std::atomic<std::uint64_t> cache_misses{0};

    std::uint64_t chat_calls_for(const std::string& template_id) const;
    void count_chat_template(const std::string& template_id);

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::uint64_t> per_template_;
};

struct PromptTemplate {
    std::string id;
    std::string text;
    std::vector<std::string> variables;  // placeholders that must be bound
};

// Registry of prompt assets. Defaults are embedded; a directory of
// "<id>.txt" files overrides individual templates.
class PromptLibrary {
public:
    static PromptLibrary with_defaults();

    void register_template(PromptTemplate tmpl);
    void load_overrides(const std::filesystem::path& dir);
    const PromptTemplate& get(const std::string& id) const;
    bool contains(const std::string& id) const;
    // id -> sha256 of the active text, for the run manifest
    std::map<std::string, std::string> asset_hashes() const;

    // Substitutes {name} for every declared variable. Throws TemplateError
    // when a declared variable is missing from `variables`. Undeclared
    // brace groups are left untouched.
    static std::string render(const PromptTemplate& tmpl,
                              const std::map<std::string, std::string>& variables);

private:
    std::map<std::string, PromptTemplate> templates_;
};

// Content-addressed response cache; writes are atomic (temp file + rename).
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);
    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& value);

private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

// Uniform access to the four model capabilities with caching and retries.
// Safe to share across threads.
class Gateway {
public:
    Gateway(GatewayConfig config, PromptLibrary prompts,
            std::shared_ptr<ChatBackend> chat, std::shared_ptr<EmbedBackend> embed,
            std::shared_ptr<RerankBackend> rerank, std::shared_ptr<NliBackend> nli);

    std::string chat(const ChatCall& call);
    // chat() plus extraction of the first balanced JSON object; one repair
    // retry with an "Output JSON only." suffix before ModelFormatError.
    std::string chat_json(const ChatCall& call);

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts);
    std::vector<double> rerank(const std::string& query,
                               const std::vector<std::string>& passages);
    NliVerdict nli(const std::string& premise, const std::string& hypothesis);

    const GatewayConfig& config() const { return config_; }
    const PromptLibrary& prompts() const { return prompts_; }
    GatewayStats& stats() { return stats_; }
    const GatewayStats& stats() const { return stats_; }
    std::string backend_ids() const;

private:
    std::string chat_rendered(const ChatRequest& request);
    template <typename Fn>
    auto with_retry(Fn&& fn) -> decltype(fn());

    GatewayConfig config_;
    PromptLibrary prompts_;
    std::shared_ptr<ChatBackend> chat_;
    std::shared_ptr<EmbedBackend> embed_;
    std::shared_ptr<RerankBackend> rerank_;
    std::shared_ptr<NliBackend> nli_;
    std::unique_ptr<ResponseCache> cache_;
    GatewayStats stats_;
};

// First balanced top-level JSON object in `reply`, or std::nullopt.
// Brace balancing is string- and escape-aware.
std::optional<std::string> extract_first_json_object(const std::string& reply);

}  // namespace halluaudit
