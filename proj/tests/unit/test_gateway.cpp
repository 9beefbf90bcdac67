#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <unistd.h>
#include <thread>

#include <httplib.h>

#include <json.hpp>

#include "halluaudit/gateway.hpp"
#include "halluaudit/http_backends.hpp"
#include "halluaudit/mock_backends.hpp"

using namespace halluaudit;

namespace {

struct CountingChatBackend : ChatBackend {
    std::atomic<int> calls{0};
    std::string reply = "fixture text";
    std::string complete(const ChatRequest&) override {
        ++calls;
        return reply;
    }
    std::string id() const override { return "counting"; }
};

struct FlakyChatBackend : ChatBackend {
    int failures_left;
    std::atomic<int> attempts{0};
    explicit FlakyChatBackend(int failures) : failures_left(failures) {}
    std::string complete(const ChatRequest&) override {
        ++attempts;
        if (failures_left > 0) {
            --failures_left;
            throw TransportError("transient");
        }
        return "ok";
    }
    std::string id() const override { return "flaky"; }
};

Gateway make_gateway(std::shared_ptr<ChatBackend> chat, GatewayConfig cfg = {}) {
    PromptLibrary prompts = PromptLibrary::with_defaults();
    prompts.register_template({"claim_verify_test", "Verify: {claim}", {"claim"}});
    auto mocks = mock::make_default_mocks();
    return Gateway(cfg, std::move(prompts), std::move(chat), mocks.embed, mocks.rerank,
                   mocks.nli);
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("hallu_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("identical chat calls are served from cache after the first") {
    TempDir tmp;
    GatewayConfig cfg;
    cfg.cache_dir = tmp.path.string();
    auto backend = std::make_shared<CountingChatBackend>();
    Gateway gw = make_gateway(backend, cfg);
    ChatCall call{"claim_verify_test", {{"claim", "x"}}, 0.0};
    CHECK(gw.chat(call) == "fixture text");
    CHECK(gw.chat(call) == "fixture text");
    CHECK(backend->calls.load() == 1);
    CHECK(gw.stats().cache_hits.load() == 1);
}

TEST_CASE("unbound placeholder raises TemplateError") {
    Gateway gw = make_gateway(std::make_shared<CountingChatBackend>());
    ChatCall call{"claim_verify_test", {}, 0.0};
    CHECK_THROWS_AS(gw.chat(call), TemplateError);
}

TEST_CASE("unknown template raises TemplateError") {
    Gateway gw = make_gateway(std::make_shared<CountingChatBackend>());
    CHECK_THROWS_AS(gw.chat({"nope", {}, 0.0}), TemplateError);
}

TEST_CASE("two transient failures succeed under max_attempts=3") {
    GatewayConfig cfg;
    cfg.retry.max_attempts = 3;
    cfg.retry.backoff = std::chrono::milliseconds(1);
    auto backend = std::make_shared<FlakyChatBackend>(2);
    Gateway gw = make_gateway(backend, cfg);
    CHECK(gw.chat({"claim_verify_test", {{"claim", "x"}}, 0.0}) == "ok");
    CHECK(backend->attempts.load() == 3);
}

TEST_CASE("three transient failures exhaust max_attempts=3") {
    GatewayConfig cfg;
    cfg.retry.max_attempts = 3;
    cfg.retry.backoff = std::chrono::milliseconds(1);
    Gateway gw = make_gateway(std::make_shared<FlakyChatBackend>(3), cfg);
    CHECK_THROWS_AS(gw.chat({"claim_verify_test", {{"claim", "x"}}, 0.0}), TransportError);
}

TEST_CASE("embed is deterministic, order preserving, self-similar") {
    Gateway gw = make_gateway(std::make_shared<CountingChatBackend>());
    auto first = gw.embed({"a", "b", "c"});
    auto second = gw.embed({"a", "b", "c"});
    REQUIRE(first.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(first[i].values == second[i].values);
    }
    for (const auto& v : first) {
        double self = 0;
        for (float x : v.values) self += double(x) * x;
        CHECK(self == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(gw.embed({}), std::invalid_argument);
}

TEST_CASE("rerank clamps scores and rejects empty passages") {
    struct LogitRerank : RerankBackend {
        std::vector<double> rerank(const std::string&, const std::vector<std::string>& p) override {
            return std::vector<double>(p.size(), 3.7);
        }
        std::string id() const override { return "logit"; }
    };
    auto mocks = mock::make_default_mocks();
    Gateway gw(GatewayConfig{}, PromptLibrary::with_defaults(), mocks.chat, mocks.embed,
               std::make_shared<LogitRerank>(), mocks.nli);
    auto scores = gw.rerank("q", {"p1", "p2"});
    CHECK(scores == std::vector<double>{1.0, 1.0});
    CHECK_THROWS_AS(gw.rerank("q", {}), std::invalid_argument);
}

TEST_CASE("identical passages rerank identically under the mock") {
    auto mocks = mock::make_default_mocks();
    Gateway gw(GatewayConfig{}, PromptLibrary::with_defaults(), mocks.chat, mocks.embed,
               mocks.rerank, mocks.nli);
    auto scores = gw.rerank("solar capacity", {"solar capacity notes", "solar capacity notes"});
    CHECK(scores[0] == scores[1]);
}

TEST_CASE("nli verdicts are valid probability triples; echo entails") {
    auto mocks = mock::make_default_mocks();
    Gateway gw(GatewayConfig{}, PromptLibrary::with_defaults(), mocks.chat, mocks.embed,
               mocks.rerank, mocks.nli);
    NliVerdict v = gw.nli("The venue is Harbor Hall", "The venue is Harbor Hall");
    CHECK(v.p_entail >= 0.99);
    CHECK(v.p_entail + v.p_contradict + v.p_neutral == doctest::Approx(1.0).epsilon(1e-6));
    NliVerdict w = gw.nli("unrelated premise entirely", "different text altogether");
    CHECK(w.p_entail + w.p_contradict + w.p_neutral == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.p_entail < 0.99);
}

TEST_CASE("first balanced JSON object is extracted, string-aware") {
    auto got = extract_first_json_object("noise {\"a\": \"}{\", \"b\": {\"c\": 1}} trailing");
    REQUIRE(got.has_value());
    CHECK(nlohmann::json::parse(*got)["b"]["c"] == 1);
    CHECK_FALSE(extract_first_json_object("no json here").has_value());
    CHECK_FALSE(extract_first_json_object("{broken").has_value());
}

TEST_CASE("chat_json repairs once then fails with ModelFormatError") {
    auto scripted = std::make_shared<mock::ScriptedChatBackend>();
    scripted->enqueue("claim_verify", "prose only");
    scripted->enqueue("claim_verify", "still prose");
    auto mocks = mock::make_default_mocks();
    Gateway gw(GatewayConfig{}, PromptLibrary::with_defaults(), scripted, mocks.embed,
               mocks.rerank, mocks.nli);
    ChatCall call{"claim_verify", {{"query", "q"}, {"claim", "c"}, {"chunk", "k"}}, 0.0};
    CHECK_THROWS_AS(gw.chat_json(call), ModelFormatError);

    scripted->enqueue("claim_verify", "prose first");
    scripted->enqueue("claim_verify", "here: {\"judgment\": \"Support\"}");
    std::string reply = gw.chat_json(call);
    CHECK(nlohmann::json::parse(reply)["judgment"] == "Support");
}

TEST_CASE("http backends parse standard reply shapes via injected transport") {
    using http::HttpResponse;
    auto post = [](const std::string& url, const std::string& body,
                   const std::string&) -> HttpResponse {
        nlohmann::json req = nlohmann::json::parse(body);
        if (url.find("chat") != std::string::npos) {
            return {200, nlohmann::json{{"choices",
                                         {{{"message", {{"content", "hello"}}}}}}}
                             .dump()};
        }
        if (url.find("embed") != std::string::npos) {
            nlohmann::json data = nlohmann::json::array();
            for (std::size_t i = 0; i < req["input"].size(); ++i) {
                data.push_back({{"embedding", {0.6, 0.8}}});
            }
            return {200, nlohmann::json{{"data", data}}.dump()};
        }
        if (url.find("rerank") != std::string::npos) {
            return {200, nlohmann::json{{"results",
                                         {{{"index", 0}, {"relevance_score", 4.0}},
                                          {{"index", 1}, {"relevance_score", 0.25}}}}}
                             .dump()};
        }
        return {200, nlohmann::json{{"entailment", 0.7}, {"contradiction", 0.1},
                                    {"neutral", 0.2}}
                         .dump()};
    };
    http::HttpChatBackend chat("http://x/chat", "", post);
    ChatRequest request;
    request.text = "hi";
    CHECK(chat.complete(request) == "hello");

    http::HttpEmbedBackend embed("http://x/embed", "", post);
    auto vectors = embed.embed({"a", "b"});
    REQUIRE(vectors.size() == 2);
    CHECK(vectors[0].values.size() == 2);

    http::HttpRerankBackend rerank("http://x/rerank", "", post);
    auto scores = rerank.rerank("q", {"p", "r"});
    CHECK(scores[0] > 0.5);   // sigmoid of the raw logit 4.0
    CHECK(scores[0] <= 1.0);
    CHECK(scores[1] == doctest::Approx(0.25));

    http::HttpNliBackend nli("http://x/nli", "", post);
    NliVerdict v = nli.classify("p", "h");
    CHECK(v.p_entail == doctest::Approx(0.7));
}

TEST_CASE("http backend surfaces error statuses as TransportError") {
    auto post = [](const std::string&, const std::string&, const std::string&) {
        return http::HttpResponse{404, "not found"};
    };
    http::HttpChatBackend chat("http://x/chat", "", post);
    ChatRequest request;
    CHECK_THROWS_AS(chat.complete(request), TransportError);
}

TEST_CASE("gateway drives all four capabilities over a loopback server") {
    httplib::Server server;
    std::atomic<int> chat_hits{0};
    server.Post("/chat", [&](const httplib::Request& req, httplib::Response& res) {
        ++chat_hits;
        auto body = nlohmann::json::parse(req.body);
        CHECK(body["messages"][0]["role"] == "user");
        res.set_content(nlohmann::json{{"choices",
                                        {{{"message", {{"content", "loopback reply"}}}}}}}
                            .dump(),
                        "application/json");
    });
    server.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
        auto body = nlohmann::json::parse(req.body);
        nlohmann::json data = nlohmann::json::array();
        for (std::size_t i = 0; i < body["input"].size(); ++i) {
            data.push_back({{"embedding", {1.0, 0.0, 0.0}}});
        }
        res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
    });
    server.Post("/rerank", [](const httplib::Request& req, httplib::Response& res) {
        auto body = nlohmann::json::parse(req.body);
        nlohmann::json results = nlohmann::json::array();
        for (std::size_t i = 0; i < body["documents"].size(); ++i) {
            results.push_back({{"index", i}, {"relevance_score", 0.5}});
        }
        res.set_content(nlohmann::json{{"results", results}}.dump(), "application/json");
    });
    std::atomic<int> nli_hits{0};
    server.Post("/nli", [&](const httplib::Request&, httplib::Response& res) {
        // first attempt fails so the retry policy gets exercised end to end
        if (++nli_hits == 1) {
            res.status = 500;
            return;
        }
        res.set_content(nlohmann::json{{"entailment", 0.9},
                                       {"contradiction", 0.05},
                                       {"neutral", 0.05}}
                            .dump(),
                        "application/json");
    });

    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread listener([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    std::string base = "http://127.0.0.1:" + std::to_string(port);
    GatewayConfig cfg;
    cfg.retry.max_attempts = 3;
    cfg.retry.backoff = std::chrono::milliseconds(1);
    PromptLibrary prompts = PromptLibrary::with_defaults();
    prompts.register_template({"probe", "say: {word}", {"word"}});
    Gateway gw(cfg, std::move(prompts),
               std::make_shared<http::HttpChatBackend>(base + "/chat", "key"),
               std::make_shared<http::HttpEmbedBackend>(base + "/embed", "key"),
               std::make_shared<http::HttpRerankBackend>(base + "/rerank", "key"),
               std::make_shared<http::HttpNliBackend>(base + "/nli", "key"));

    CHECK(gw.chat({"probe", {{"word", "hello"}}, 0.0}) == "loopback reply");
    CHECK(gw.embed({"a", "b"}).size() == 2);
    CHECK(gw.rerank("q", {"p"}) == std::vector<double>{0.5});
    NliVerdict verdict = gw.nli("premise", "hypothesis");
    CHECK(verdict.p_entail == doctest::Approx(0.9));
    CHECK(nli_hits.load() == 2);  // one failure, one success

    server.stop();
    listener.join();
}

TEST_CASE("a fixed entailment triple passes through the gateway untouched") {
    struct FixedNli : NliBackend {
        NliVerdict classify(const std::string&, const std::string&) override {
            return {1.0, 0.0, 0.0};
        }
        std::string id() const override { return "fixed"; }
    };
    auto mocks = mock::make_default_mocks();
    Gateway gw(GatewayConfig{}, PromptLibrary::with_defaults(), mocks.chat, mocks.embed,
               mocks.rerank, std::make_shared<FixedNli>());
    NliVerdict v = gw.nli("p", "h");
    CHECK(v.p_entail == 1.0);
    CHECK(v.p_contradict == 0.0);
    CHECK(v.p_neutral == 0.0);
}
