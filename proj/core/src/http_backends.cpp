#include "halluaudit/http_backends.hpp"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

namespace halluaudit::http {

using nlohmann::json;

namespace {

// "http://host:port/path" -> {"http://host:port", "/path"}
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw TransportError("malformed url: " + url);
    }
    auto path_begin = url.find('/', scheme_end + 3);
    if (path_begin == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_begin), url.substr(path_begin)};
}

json post_and_parse(const PostJsonFn& post, const std::string& url, const json& body,
                    const std::string& api_key) {
    HttpResponse resp = post(url, body.dump(), api_key);
    if (resp.status < 200 || resp.status >= 300) {
        throw TransportError("endpoint " + url + " returned status " +
                             std::to_string(resp.status));
    }
    json parsed = json::parse(resp.body, nullptr, false);
    if (parsed.is_discarded()) {
        throw TransportError("endpoint " + url + " returned non-JSON body");
    }
    return parsed;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

PostJsonFn default_transport() {
    return [](const std::string& url, const std::string& body, const std::string& api_key) {
        auto [host, path] = split_url(url);
        httplib::Client client(host);
        client.set_connection_timeout(10);
        client.set_read_timeout(120);
        httplib::Headers headers;
        if (!api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + api_key);
        }
        auto result = client.Post(path, headers, body, "application/json");
        if (!result) {
            throw TransportError("request to " + url + " failed: " +
                                 httplib::to_string(result.error()));
        }
        if (result->status >= 500) {
            throw TransportError("endpoint " + url + " returned status " +
                                 std::to_string(result->status));
        }
        return HttpResponse{result->status, result->body};
    };
}

HttpChatBackend::HttpChatBackend(std::string url, std::string api_key, PostJsonFn post)
    : url_(std::move(url)), api_key_(std::move(api_key)), post_(std::move(post)) {}

std::string HttpChatBackend::id() const { return "http-chat:" + url_; }

std::string HttpChatBackend::complete(const ChatRequest& request) {
    json body = {{"messages", json::array({{{"role", "user"}, {"content", request.text}}})},
                 {"temperature", request.temperature}};
    json reply = post_and_parse(post_, url_, body, api_key_);
    if (reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
        const json& choice = reply["choices"][0];
        if (choice.contains("message") && choice["message"].contains("content")) {
            return choice["message"]["content"].get<std::string>();
        }
        if (choice.contains("text")) return choice["text"].get<std::string>();
    }
    if (reply.contains("text") && reply["text"].is_string()) {
        return reply["text"].get<std::string>();
    }
    throw TransportError("chat endpoint reply has no recognizable text field");
}

HttpEmbedBackend::HttpEmbedBackend(std::string url, std::string api_key, PostJsonFn post)
    : url_(std::move(url)), api_key_(std::move(api_key)), post_(std::move(post)) {}

std::string HttpEmbedBackend::id() const { return "http-embed:" + url_; }

std::vector<EmbeddingVector> HttpEmbedBackend::embed(const std::vector<std::string>& texts) {
    json body = {{"input", texts}};
    json reply = post_and_parse(post_, url_, body, api_key_);
    std::vector<EmbeddingVector> out;
    if (reply.contains("data") && reply["data"].is_array()) {
        for (const auto& item : reply["data"]) {
            out.push_back({item.at("embedding").get<std::vector<float>>()});
        }
    } else if (reply.contains("embeddings") && reply["embeddings"].is_array()) {
        for (const auto& item : reply["embeddings"]) {
            out.push_back({item.get<std::vector<float>>()});
        }
    } else {
        throw TransportError("embed endpoint reply has no embeddings");
    }
    return out;
}

HttpRerankBackend::HttpRerankBackend(std::string url, std::string api_key, PostJsonFn post)
    : url_(std::move(url)), api_key_(std::move(api_key)), post_(std::move(post)) {}

std::string HttpRerankBackend::id() const { return "http-rerank:" + url_; }

std::vector<double> HttpRerankBackend::rerank(const std::string& query,
                                              const std::vector<std::string>& passages) {
    json body = {{"query", query}, {"documents", passages}};
    json reply = post_and_parse(post_, url_, body, api_key_);
    std::vector<double> out(passages.size(), 0.0);
    if (reply.contains("results") && reply["results"].is_array()) {
        for (const auto& item : reply["results"]) {
            std::size_t index = item.at("index").get<std::size_t>();
            if (index >= out.size()) {
                throw TransportError("rerank endpoint returned an out-of-range index");
            }
            double score = item.at("relevance_score").get<double>();
            out[index] = (score < 0.0 || score > 1.0) ? sigmoid(score) : score;
        }
        return out;
    }
    if (reply.contains("scores") && reply["scores"].is_array()) {
        auto scores = reply["scores"].get<std::vector<double>>();
        for (std::size_t i = 0; i < scores.size() && i < out.size(); ++i) {
            out[i] = (scores[i] < 0.0 || scores[i] > 1.0) ? sigmoid(scores[i]) : scores[i];
        }
        return out;
    }
    throw TransportError("rerank endpoint reply has no scores");
}

HttpNliBackend::HttpNliBackend(std::string url, std::string api_key, PostJsonFn post)
    : url_(std::move(url)), api_key_(std::move(api_key)), post_(std::move(post)) {}

std::string HttpNliBackend::id() const { return "http-nli:" + url_; }

NliVerdict HttpNliBackend::classify(const std::string& premise, const std::string& hypothesis) {
    json body = {{"premise", premise}, {"hypothesis", hypothesis}};
    json reply = post_and_parse(post_, url_, body, api_key_);
    if (reply.contains("entailment")) {
        return {reply.at("entailment").get<double>(), reply.value("contradiction", 0.0),
                reply.value("neutral", 0.0)};
    }
    if (reply.contains("probs") && reply["probs"].is_array() && reply["probs"].size() == 3) {
        return {reply["probs"][0].get<double>(), reply["probs"][1].get<double>(),
                reply["probs"][2].get<double>()};
    }
    throw TransportError("nli endpoint reply has no probabilities");
}

}  // namespace halluaudit::http
