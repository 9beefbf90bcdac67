#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "halluaudit/decomposer.hpp"
#include "halluaudit/gateway.hpp"
#include "halluaudit/trajectory.hpp"

namespace halluaudit {

struct EvidenceChunk {
    std::string chunk_id;
    std::string doc_url;
    int loop_index = 0;      // retrieval round of the chunk's document
    int span_start = 1;      // 1-based sentence indices, inclusive
    int span_end = 1;
    std::string text;
};

struct RetrievalConfig {
    int chunk_sentences = 15;
    double sim_threshold = 0.4;  // cosine floor for the coarse stage
    int verify_top_k = 5;
    int reflect_top_k = 10;
};

struct RankedCandidate {
    std::string chunk_id;
    double rerank_score = 0.0;
};

struct RankedEvidence {
    std::string claim_id;
    std::vector<RankedCandidate> candidates;  // rerank-descending, <= verify_top_k
};

// Consecutive disjoint windows of cfg.chunk_sentences sentences; the final
// window may be shorter. Skips documents with empty content upstream.
std::vector<EvidenceChunk> chunk_document(const RetrievedDocument& doc,
                                          const RetrievalConfig& cfg,
                                          const std::string& chunk_id_prefix);

// Exact-scan cosine index over embedded chunks.
class ChunkIndex {
public:
    void build(std::vector<EvidenceChunk> chunks, Gateway& gateway);

    const std::vector<EvidenceChunk>& chunks() const { return chunks_; }
    const EvidenceChunk* find(const std::string& chunk_id) const;
    const EmbeddingVector* embedding_of(const std::string& chunk_id) const;

    struct Hit {
        std::size_t index;
        double cosine;
    };
    // All chunks with cosine >= floor against `query_vector`, restricted to
    // doc urls in `scope` (empty scope = everything), cosine-descending.
    std::vector<Hit> cosine_scan(const EmbeddingVector& query_vector,
                                 const std::set<std::string>& scope, double floor) const;

    // Persistence: manifest.json + embeddings.f32 (little-endian float32
    // rows, row order = manifest order). Rebuildable without network.
    void save(const std::filesystem::path& dir) const;
    static ChunkIndex load(const std::filesystem::path& dir);

private:
    std::vector<EvidenceChunk> chunks_;
    std::vector<EmbeddingVector> embeddings_;
    std::map<std::string, std::size_t> by_id_;
};

// Coarse-to-fine retrieval: cosine filter at cfg.sim_threshold, then rerank,
// truncate to cfg.verify_top_k. Empty candidates is a valid outcome.
RankedEvidence retrieve_evidence(const AtomicClaim& claim, const ChunkIndex& index,
                                 const std::set<std::string>& scope,
                                 const RetrievalConfig& cfg, Gateway& gateway);

// Append-only store of utilized evidence chunks with claim back-references.
class ChunkMemory {
public:
    void add(const std::string& chunk_id, const std::string& claim_id);
    bool contains(const std::string& chunk_id) const;
    std::size_t size() const { return order_.size(); }
    const std::vector<std::string>& insertion_order() const { return order_; }
    const std::vector<std::string>& supported_claims(const std::string& chunk_id) const;

private:
    std::map<std::string, std::vector<std::string>> back_refs_;
    std::vector<std::string> order_;
};

struct StoredClaim {
    std::string id;
    std::string text;
    int loop_index = 0;  // loop whose verification stored it
    bool misattributed = false;
    EmbeddingVector embedding;
};

// Append-only store of supported claims, insertion-ordered.
class ClaimMemory {
public:
    void add(StoredClaim claim);  // throws DuplicateClaimIdError
    std::size_t size() const { return claims_.size(); }
    const std::vector<StoredClaim>& claims() const { return claims_; }
    bool contains(const std::string& id) const;

private:
    std::vector<StoredClaim> claims_;
    std::set<std::string> ids_;
};

// Supported (or, by configuration, misattributed) claim goes to ClaimMemory;
// its evidence chunk ids are unioned into ChunkMemory with back-references.
void record_supported(const AtomicClaim& claim, const std::vector<std::string>& chunk_ids,
                      int loop_index, bool misattributed, const ChunkIndex& index,
                      Gateway& gateway, ClaimMemory& claim_memory, ChunkMemory& chunk_memory);

// Top-K stored claims by embedding similarity to `query_text`, descending.
// The memory must contain only claims stored in strictly earlier loops than
// the unit being verified.
std::vector<StoredClaim> retrieve_prior_claims(const std::string& query_text,
                                               const ClaimMemory& memory, Gateway& gateway,
                                               int top_k = 10);

inline std::vector<StoredClaim> retrieve_prior_claims(const AtomicClaim& claim,
                                                      const ClaimMemory& memory,
                                                      Gateway& gateway, int top_k = 10) {
    return retrieve_prior_claims(claim.text, memory, gateway, top_k);
}

}  // namespace halluaudit
