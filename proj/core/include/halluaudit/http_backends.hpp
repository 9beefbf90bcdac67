#pragma once

#include <functional>
#include <memory>
#include <string>

#include "halluaudit/gateway.hpp"

namespace halluaudit::http {

struct HttpResponse {
    int status = 0;
    std::string body;
};

// POST json to url; implementations must throw TransportError on failure.
// Injectable so transports can be faked in tests.
using PostJsonFn = std::function<HttpResponse(const std::string& url, const std::string& body,
                                              const std::string& api_key)>;

// Default transport backed by cpp-httplib.
PostJsonFn default_transport();

// Chat endpoint, messages-in/text-out:
//   request  {"messages":[{"role":"user","content": prompt}], "temperature": t}
//   response {"choices":[{"message":{"content": text}}]}  or  {"text": ...}
class HttpChatBackend : public ChatBackend {
public:
    HttpChatBackend(std::string url, std::string api_key, PostJsonFn post = default_transport());
    std::string complete(const ChatRequest& request) override;
    std::string id() const override;

private:
    std::string url_;
    std::string api_key_;
    PostJsonFn post_;
};

// Embedding endpoint, texts-in/vectors-out:
//   request  {"input": [texts]}
//   response {"data":[{"embedding":[...]}, ...]}  or  {"embeddings":[[...], ...]}
class HttpEmbedBackend : public EmbedBackend {
public:
    HttpEmbedBackend(std::string url, std::string api_key, PostJsonFn post = default_transport());
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    std::string id() const override;

private:
    std::string url_;
    std::string api_key_;
    PostJsonFn post_;
};

// Rerank endpoint, query+passages-in/scores-out:
//   request  {"query": q, "documents": [passages]}
//   response {"results":[{"index":i,"relevance_score":s}, ...]}  or  {"scores":[...]}
// Raw logits are squashed through a sigmoid into [0,1].
class HttpRerankBackend : public RerankBackend {
public:
    HttpRerankBackend(std::string url, std::string api_key, PostJsonFn post = default_transport());
    std::vector<double> rerank(const std::string& query,
                               const std::vector<std::string>& passages) override;
    std::string id() const override;

private:
    std::string url_;
    std::string api_key_;
    PostJsonFn post_;
};

// NLI endpoint, pair-in/three-way-probabilities-out:
//   request  {"premise": p, "hypothesis": h}
//   response {"entailment": e, "contradiction": c, "neutral": n}  or  {"probs":[e,c,n]}
class HttpNliBackend : public NliBackend {
public:
    HttpNliBackend(std::string url, std::string api_key, PostJsonFn post = default_transport());
    NliVerdict classify(const std::string& premise, const std::string& hypothesis) override;
    std::string id() const override;

private:
    std::string url_;
    std::string api_key_;
    PostJsonFn post_;
};

}  // namespace halluaudit::http
