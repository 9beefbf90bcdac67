#include <doctest.h>

#include <json.hpp>

#include "halluaudit/claim_verifier.hpp"
#include "halluaudit/mock_backends.hpp"
#include "halluaudit/summarization.hpp"

using namespace halluaudit;

namespace {

struct Setup {
    std::shared_ptr<mock::ScriptedChatBackend> scripted;
    std::unique_ptr<Gateway> gateway;
    ChunkIndex index;
    RetrievalConfig cfg;

    explicit Setup(std::vector<RetrievedDocument> docs, bool scripted_chat = false,
                   GatewayConfig gcfg = {}) {
        auto mocks = mock::make_default_mocks();
        std::shared_ptr<ChatBackend> chat = mocks.chat;
        if (scripted_chat) {
            scripted = std::make_shared<mock::ScriptedChatBackend>();
            chat = scripted;
        }
        gateway = std::make_unique<Gateway>(gcfg, PromptLibrary::with_defaults(), chat,
                                            mocks.embed, mocks.rerank, mocks.nli);
        std::vector<EvidenceChunk> chunks;
        int seq = 0;
        for (const auto& doc : docs) {
            auto dc = chunk_document(doc, cfg, "d" + std::to_string(seq++));
            chunks.insert(chunks.end(), dc.begin(), dc.end());
        }
        index.build(chunks, *gateway);
    }

    ClaimVerifier verifier(const std::string& query = "the query") {
        return ClaimVerifier(*gateway, index, cfg, query);
    }
};

RetrievedDocument doc_of(const std::string& url, const std::string& content, int loop = 1) {
    RetrievedDocument d;
    d.url = url;
    d.content = content;
    d.loop_index = loop;
    return d;
}

}  // namespace

TEST_CASE("verbatim claim resolves through the fast path with zero chat calls") {
    Setup s({doc_of("a", "The Vexel Summit venue is Harbor Hall. Tickets cost 40 euros.")});
    ClaimVerifier verifier = s.verifier();
    AtomicClaim claim{"c1", "The Vexel Summit venue is Harbor Hall", ClaimKind::intermediate,
                      1, 0, {}};
    RankedEvidence ev = retrieve_evidence(claim, s.index, {"a"}, s.cfg, *s.gateway);
    auto round1 = verifier.verify_round1(claim, ev);
    CHECK(round1.supported);
    CHECK(round1.route == VerifyRoute::nli_fast);
    REQUIRE(round1.evidence.size() == 1);
    CHECK(s.gateway->stats().chat_calls.load() == 0);
}

TEST_CASE("empty candidate list is unsupported without any model call") {
    Setup s({doc_of("a", "Entirely different material on other topics.")});
    ClaimVerifier verifier = s.verifier();
    AtomicClaim claim{"c1", "quantum flux capacitor readings", ClaimKind::intermediate, 1, 0, {}};
    RankedEvidence ev = retrieve_evidence(claim, s.index, {"a"}, s.cfg, *s.gateway);
    CHECK(ev.candidates.empty());
    auto round1 = verifier.verify_round1(claim, ev);
    CHECK_FALSE(round1.supported);
    CHECK(s.gateway->stats().chat_calls.load() == 0);
    CHECK(s.gateway->stats().nli_calls.load() == 0);
}

TEST_CASE("ambiguous candidates fall through to the judge; support lands on candidate 3") {
    // Five chunks share vocabulary with the claim but none contains it fully,
    // so the containment NLI stays low and every candidate queues for the LLM.
    std::string content;
    for (int i = 0; i < 5; ++i) {
        content += "Panel output figures row " + std::to_string(i) + " for the station. ";
    }
    Setup s({doc_of("a", content)}, /*scripted_chat=*/true);
    s.cfg.chunk_sentences = 1;
    s.index = ChunkIndex();
    std::vector<EvidenceChunk> chunks =
        chunk_document(doc_of("a", content), s.cfg, "d0");
    s.index.build(chunks, *s.gateway);

    using nlohmann::json;
    s.scripted->enqueue("claim_verify", json{{"judgment", "Unsupport"}}.dump());
    s.scripted->enqueue("claim_verify", json{{"judgment", "Unsupport"}}.dump());
    s.scripted->enqueue("claim_verify",
                        json{{"judgment", "Support"}, {"confidence", 0.88}}.dump());

    ClaimVerifier verifier = s.verifier();
    AtomicClaim claim{"c1", "Panel output figures for the station exceed plan",
                      ClaimKind::intermediate, 1, 0, {}};
    RankedEvidence ev = retrieve_evidence(claim, s.index, {"a"}, s.cfg, *s.gateway);
    REQUIRE(ev.candidates.size() == 5);
    auto round1 = verifier.verify_round1(claim, ev);
    CHECK(round1.supported);
    CHECK(round1.route == VerifyRoute::llm);
    REQUIRE(round1.evidence.size() == 1);
    CHECK(round1.evidence[0] == ev.candidates[2].chunk_id);
    CHECK(s.gateway->stats().chat_calls.load() == 3);
}

TEST_CASE("cited elsewhere: content in an uncited document is misattribution") {
    Setup s({doc_of("cited", "Unrelated filler material lives here."),
             doc_of("other", "The keynote speaker was Doctor Mira Chen.")});
    ClaimVerifier verifier = s.verifier();
    AtomicClaim claim{"c1", "The keynote speaker was Doctor Mira Chen", ClaimKind::report, 0, 0,
                      {"cited"}};
    Verdict v = verifier.verify(claim, {"cited"}, {"cited", "other"}, ClaimMemory{});
    CHECK(v.label == VerdictLabel::misattribution);
    CHECK(v.route == VerifyRoute::misattribution_check);
    REQUIRE(!v.evidence.empty());
    CHECK(s.index.find(v.evidence[0])->doc_url == "other");
}

TEST_CASE("supported nowhere: cited claim confirms as fabrication") {
    Setup s({doc_of("cited", "Unrelated filler material lives here."),
             doc_of("other", "Also unrelated content on different topics.")});
    ClaimVerifier verifier = s.verifier();
    AtomicClaim claim{"c1", "The keynote speaker was Doctor Mira Chen", ClaimKind::report, 0, 0,
                      {"cited"}};
    Verdict v = verifier.verify(claim, {"cited"}, {"cited", "other"}, ClaimMemory{});
    CHECK(v.label == VerdictLabel::fabrication);
}

TEST_CASE("an intermediate restatement of a stored claim passes the reflection check") {
    Setup s({doc_of("a", "Unrelated corpus text only.")});
    ClaimMemory memory;
    memory.add({"prior1", "The venue is Harbor Hall in Oslo", 1, false,
                s.gateway->embed({"The venue is Harbor Hall in Oslo"}).front()});
    ClaimVerifier verifier = s.verifier();
    AtomicClaim claim{"c9", "The venue is Harbor Hall", ClaimKind::intermediate, 2, 0, {}};
    Verdict v = verifier.verify(claim, {"a"}, {"a"}, memory);
    CHECK(v.label == VerdictLabel::supported);
    CHECK(v.route == VerifyRoute::reflection_check);
    CHECK(v.evidence == std::vector<std::string>{"prior1"});
}

TEST_CASE("intermediate claim with no documents and no priors is fabrication") {
    Setup s({doc_of("a", "Unrelated corpus text only.")});
    ClaimVerifier verifier = s.verifier();
    AtomicClaim claim{"c9", "Imaginary statistic of nineteen percent", ClaimKind::intermediate,
                      1, 0, {}};
    Verdict v = verifier.verify(claim, {"a"}, {"a"}, ClaimMemory{});
    CHECK(v.label == VerdictLabel::fabrication);
    CHECK(v.route == VerifyRoute::reflection_check);
}

TEST_CASE("unparseable judge replies degrade to unsupported with a tooling flag") {
    std::string content = "Panel output figures for the station listed here.";
    Setup s({doc_of("a", content)}, /*scripted_chat=*/true);
    s.scripted->set_default("claim_verify", "no json in this reply at all");
    ClaimVerifier verifier = s.verifier();
    AtomicClaim claim{"c1", "Panel output figures for the station exceed plan",
                      ClaimKind::intermediate, 1, 0, {}};
    RankedEvidence ev = retrieve_evidence(claim, s.index, {"a"}, s.cfg, *s.gateway);
    REQUIRE(!ev.candidates.empty());
    auto round1 = verifier.verify_round1(claim, ev);
    CHECK_FALSE(round1.supported);
    CHECK(round1.tooling_flag);
}

TEST_CASE("explicit summarization score follows the fabrication and misattribution ratio") {
    VerificationLedger ledger;
    auto record = [&](const std::string& id, VerdictLabel label) {
        Verdict v;
        v.claim_id = id;
        v.label = label;
        ledger.record(v, 1);
    };
    for (int i = 0; i < 7; ++i) record("s" + std::to_string(i), VerdictLabel::supported);
    record("f0", VerdictLabel::fabrication);
    record("f1", VerdictLabel::fabrication);
    record("m0", VerdictLabel::misattribution);
    bool degenerate = true;
    CHECK(score_explicit_summarization(ledger, &degenerate) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_FALSE(degenerate);

    VerificationLedger clean;
    for (int i = 0; i < 10; ++i) record("x" + std::to_string(i), VerdictLabel::supported);
    VerificationLedger empty;
    CHECK(score_explicit_summarization(empty, &degenerate) == 0.0);
    CHECK(degenerate);

    VerificationLedger all_bad;
    for (int i = 0; i < 5; ++i) {
        Verdict v;
        v.claim_id = "b" + std::to_string(i);
        v.label = VerdictLabel::fabrication;
        all_bad.record(v, 1);
    }
    CHECK(score_explicit_summarization(all_bad) == 1.0);
}

TEST_CASE("ledger keeps fabrication and misattribution disjoint within totals") {
    VerificationLedger ledger;
    Verdict fab;
    fab.claim_id = "a";
    fab.label = VerdictLabel::fabrication;
    Verdict mis;
    mis.claim_id = "b";
    mis.label = VerdictLabel::misattribution;
    ledger.record(fab, 1);
    ledger.record(mis, 2);
    CHECK(ledger.total.size() == 2);
    for (const auto& id : ledger.fabrication) CHECK(ledger.misattribution.count(id) == 0);
    CHECK(ledger.per_loop.at(1).fabrication.count("a") == 1);
    CHECK(ledger.per_loop.at(2).misattribution.count("b") == 1);
}

TEST_CASE("disabling the fast path reroutes but never relabels") {
    auto run_with_threshold = [&](double threshold) {
        GatewayConfig gcfg;
        gcfg.nli_entail_threshold = threshold;
        Setup s({doc_of("a", "The Vexel Summit venue is Harbor Hall. Tickets cost 40 euros."),
                 doc_of("b", "Grid permits were approved in March.")},
                false, gcfg);
        ClaimVerifier verifier = s.verifier();
        std::vector<AtomicClaim> claims = {
            {"c1", "The Vexel Summit venue is Harbor Hall", ClaimKind::intermediate, 1, 0, {}},
            {"c2", "Tickets cost 40 euros", ClaimKind::intermediate, 1, 0, {}},
            {"c3", "Grid permits were approved in March", ClaimKind::intermediate, 1, 0, {}},
            {"c4", "Completely invented fact about nothing", ClaimKind::intermediate, 1, 0, {}},
        };
        std::vector<VerdictLabel> labels;
        std::vector<VerifyRoute> routes;
        for (const auto& c : claims) {
            Verdict v = verifier.verify(c, {"a", "b"}, {"a", "b"}, ClaimMemory{});
            labels.push_back(v.label);
            routes.push_back(v.route);
        }
        return std::make_pair(labels, routes);
    };
    auto [fast_labels, fast_routes] = run_with_threshold(0.99);
    auto [slow_labels, slow_routes] = run_with_threshold(1.01);
    CHECK(fast_labels == slow_labels);
    CHECK(fast_routes != slow_routes);  // the supported claims now travel via the judge
    CHECK(fast_routes[0] == VerifyRoute::nli_fast);
    CHECK(slow_routes[0] == VerifyRoute::llm);
}
