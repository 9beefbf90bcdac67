#include <doctest.h>

#include <filesystem>
#include <unistd.h>

#include "halluaudit/evidence.hpp"
#include "halluaudit/mock_backends.hpp"

using namespace halluaudit;

namespace {

Gateway mock_gateway(GatewayConfig cfg = {}) {
    auto mocks = mock::make_default_mocks();
    return Gateway(cfg, PromptLibrary::with_defaults(), mocks.chat, mocks.embed, mocks.rerank,
                   mocks.nli);
}

std::string numbered_sentences(int n) {
    std::string out;
    for (int i = 1; i <= n; ++i) {
        out += "Fact number " + std::to_string(i) + " stands alone. ";
    }
    return out;
}

RetrievedDocument doc_with(const std::string& url, const std::string& content, int loop = 1) {
    RetrievedDocument doc;
    doc.url = url;
    doc.content = content;
    doc.loop_index = loop;
    return doc;
}

}  // namespace

TEST_CASE("31 sentences chunk into 15/15/1 disjoint windows") {
    RetrievalConfig cfg;
    auto chunks = chunk_document(doc_with("u", numbered_sentences(31)), cfg, "d0");
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].span_start == 1);
    CHECK(chunks[0].span_end == 15);
    CHECK(chunks[1].span_start == 16);
    CHECK(chunks[1].span_end == 30);
    CHECK(chunks[2].span_start == 31);
    CHECK(chunks[2].span_end == 31);
}

TEST_CASE("exactly 15 sentences form one chunk; single sentence too") {
    RetrievalConfig cfg;
    auto one = chunk_document(doc_with("u", numbered_sentences(15)), cfg, "d0");
    REQUIRE(one.size() == 1);
    CHECK(one[0].span_start == 1);
    CHECK(one[0].span_end == 15);
    auto single = chunk_document(doc_with("u", "Only one sentence here."), cfg, "d0");
    REQUIRE(single.size() == 1);
    CHECK(single[0].span_end == 1);
}

TEST_CASE("chunk coverage: concatenated chunks reconstruct the sentence sequence") {
    RetrievalConfig cfg;
    cfg.chunk_sentences = 4;
    std::string content = numbered_sentences(11);
    auto chunks = chunk_document(doc_with("u", content), cfg, "d0");
    std::string reassembled;
    for (const auto& c : chunks) {
        if (!reassembled.empty()) reassembled += " ";
        reassembled += c.text;
    }
    std::string expected = content;
    while (!expected.empty() && expected.back() == ' ') expected.pop_back();
    CHECK(reassembled == expected);
}

TEST_CASE("index embeds every chunk once and finds self-matches first") {
    Gateway gw = mock_gateway();
    RetrievalConfig cfg;
    std::vector<EvidenceChunk> chunks;
    for (auto& c : chunk_document(doc_with("a", "Solar capacity rose sharply."), cfg, "d0"))
        chunks.push_back(c);
    for (auto& c : chunk_document(doc_with("b", "Battery pricing fell steadily."), cfg, "d1"))
        chunks.push_back(c);
    ChunkIndex index;
    index.build(chunks, gw);
    REQUIRE(index.chunks().size() == 2);

    auto vec = *index.embedding_of(index.chunks()[1].chunk_id);
    auto hits = index.cosine_scan(vec, {}, 0.0);
    REQUIRE(!hits.empty());
    CHECK(index.chunks()[hits[0].index].chunk_id == index.chunks()[1].chunk_id);
    CHECK(hits[0].cosine == doctest::Approx(1.0));
}

TEST_CASE("rebuilding the index with a warm cache issues no new embed calls") {
    std::filesystem::path tmp = std::filesystem::temp_directory_path() /
                                ("hallu_embed_cache_" + std::to_string(::getpid()));
    std::filesystem::remove_all(tmp);
    GatewayConfig cfg;
    cfg.cache_dir = tmp.string();
    Gateway gw = mock_gateway(cfg);
    RetrievalConfig rcfg;
    auto chunks = chunk_document(doc_with("a", numbered_sentences(40)), rcfg, "d0");
    ChunkIndex first;
    first.build(chunks, gw);
    auto calls_after_first = gw.stats().embed_calls.load();
    ChunkIndex second;
    second.build(chunks, gw);
    CHECK(gw.stats().embed_calls.load() == calls_after_first);
    std::filesystem::remove_all(tmp);
}

TEST_CASE("retrieval respects threshold, truncation and scope") {
    Gateway gw = mock_gateway();
    RetrievalConfig cfg;
    cfg.chunk_sentences = 1;  // one chunk per sentence
    std::vector<EvidenceChunk> chunks;
    std::string shared = "";
    for (int i = 0; i < 12; ++i) {
        shared += "Harbor Hall venue detail item " + std::to_string(i) + " noted. ";
    }
    for (auto& c : chunk_document(doc_with("a", shared), cfg, "d0")) chunks.push_back(c);
    for (auto& c : chunk_document(doc_with("b", "Totally unrelated text block."), cfg, "d1"))
        chunks.push_back(c);
    ChunkIndex index;
    index.build(chunks, gw);

    AtomicClaim claim{"c1", "Harbor Hall venue detail", ClaimKind::intermediate, 1, 0, {}};

    SUBCASE("12 passing chunks truncate to verify_top_k, scores descending") {
        RankedEvidence ev = retrieve_evidence(claim, index, {"a"}, cfg, gw);
        REQUIRE(ev.candidates.size() == 5);
        for (std::size_t i = 1; i < ev.candidates.size(); ++i) {
            CHECK(ev.candidates[i - 1].rerank_score >= ev.candidates[i].rerank_score);
        }
    }
    SUBCASE("scope excludes other documents") {
        RankedEvidence ev = retrieve_evidence(claim, index, {"b"}, cfg, gw);
        CHECK(ev.candidates.empty());
    }
    SUBCASE("all chunks below the cosine floor yield empty candidates") {
        AtomicClaim unrelated{"c2", "quantum entanglement protocols", ClaimKind::intermediate,
                              1, 0, {}};
        RankedEvidence ev = retrieve_evidence(unrelated, index, {"a", "b"}, cfg, gw);
        CHECK(ev.candidates.empty());
    }
}

TEST_CASE("memories are append-only with back-references") {
    Gateway gw = mock_gateway();
    RetrievalConfig cfg;
    auto chunks = chunk_document(doc_with("a", "One fact. Another fact."), cfg, "d0");
    ChunkIndex index;
    index.build(chunks, gw);
    ClaimMemory cmem;
    ChunkMemory kmem;
    AtomicClaim c1{"T:loop1:p0:c0", "One fact", ClaimKind::intermediate, 1, 0, {}};
    AtomicClaim c2{"T:loop1:p0:c1", "Another fact", ClaimKind::intermediate, 1, 0, {}};
    std::string chunk_id = index.chunks()[0].chunk_id;

    record_supported(c1, {chunk_id}, 1, false, index, gw, cmem, kmem);
    record_supported(c2, {chunk_id}, 1, false, index, gw, cmem, kmem);
    CHECK(cmem.size() == 2);
    CHECK(kmem.size() == 1);  // one chunk entry, two back-refs
    CHECK(kmem.supported_claims(chunk_id).size() == 2);

    CHECK_THROWS_AS(record_supported(c1, {chunk_id}, 1, false, index, gw, cmem, kmem),
                    DuplicateClaimIdError);
}

TEST_CASE("prior-claim retrieval ranks the restatement first") {
    Gateway gw = mock_gateway();
    ClaimMemory memory;
    CHECK(retrieve_prior_claims("anything", memory, gw).empty());

    auto embed = [&](const std::string& s) { return gw.embed({s}).front(); };
    memory.add({"p1", "The venue is Harbor Hall", 1, false, embed("The venue is Harbor Hall")});
    memory.add({"p2", "Tickets cost 40 euros", 1, false, embed("Tickets cost 40 euros")});
    memory.add({"p3", "Doors open at nine", 2, false, embed("Doors open at nine")});

    auto priors = retrieve_prior_claims("The venue is Harbor Hall", memory, gw, 10);
    REQUIRE(priors.size() == 3);
    CHECK(priors[0].id == "p1");

    CHECK(retrieve_prior_claims("Tickets cost 40 euros", memory, gw, 2).size() == 2);
}

TEST_CASE("index persistence round-trips through disk") {
    Gateway gw = mock_gateway();
    RetrievalConfig cfg;
    auto chunks = chunk_document(doc_with("a", "Alpha one. Beta two. Gamma three."), cfg, "d0");
    ChunkIndex index;
    index.build(chunks, gw);

    std::filesystem::path tmp = std::filesystem::temp_directory_path() /
                                ("hallu_index_" + std::to_string(::getpid()));
    std::filesystem::remove_all(tmp);
    index.save(tmp);
    ChunkIndex loaded = ChunkIndex::load(tmp);
    REQUIRE(loaded.chunks().size() == index.chunks().size());
    for (std::size_t i = 0; i < index.chunks().size(); ++i) {
        const auto& id = index.chunks()[i].chunk_id;
        CHECK(loaded.chunks()[i].text == index.chunks()[i].text);
        CHECK(loaded.embedding_of(id)->values == index.embedding_of(id)->values);
    }
    std::filesystem::remove_all(tmp);
}
