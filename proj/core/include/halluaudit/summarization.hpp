#pragma once

#include <optional>
#include <string>
#include <vector>

#include "halluaudit/claim_verifier.hpp"
#include "halluaudit/clustering.hpp"
#include "halluaudit/evidence.hpp"
#include "halluaudit/noise.hpp"

namespace halluaudit {

// Ratio of fabricated and misattributed claims to the total set. An empty
// total yields 0 with `degenerate` set.
double score_explicit_summarization(const VerificationLedger& ledger, bool* degenerate = nullptr);

// Partitions the scope chunks (scope_loop = 0 means all) and fills member
// lists plus per-chunk relevance; relevance and ranks come from
// rank_clusters. Deterministic given embeddings and backend configuration.
ClusterPartition cluster_chunks(const ChunkIndex& index, const ClusteringBackend& backend,
                                int scope_loop);

// Chunk relevance = mean rerank score against every sub-query; cluster
// relevance = mean member relevance; ranks assigned descending with ties
// broken by size then cluster id.
void rank_clusters(ClusterPartition& partition, const ChunkIndex& index,
                   const std::vector<AtomicSubQuery>& sub_queries, Gateway& gateway);

void mark_memory(ClusterPartition& partition, const ChunkMemory& memory);

struct LocalNoiseEntry {
    int loop = 0;
    bool has_retrieval = false;  // false = null entry (loop retrieved nothing)
    ClusterPartition partition;
    PenaltyBreakdown breakdown;
};

std::vector<LocalNoiseEntry> compute_local_noise(const ChunkIndex& index,
                                                 const ClusteringBackend& backend,
                                                 const std::vector<AtomicSubQuery>& sub_queries,
                                                 const ChunkMemory& memory, Gateway& gateway,
                                                 int n_loops);

struct RetrievalQualityReport {
    struct DocScore {
        std::string url;
        double score = 0.0;  // max over the document's chunks
    };
    std::vector<DocScore> documents;     // score-descending
    std::vector<double> top_scores;      // up to five
    double task_mean = 0.0;              // mean of top_scores
    bool fewer_than_top_k = false;       // fewer than five documents existed
};

// Document score = max member-chunk relevance; task score = mean over the
// top five documents (all of them when fewer exist).
RetrievalQualityReport retrieval_quality(const ClusterPartition& global_partition,
                                         const ChunkIndex& index);

}  // namespace halluaudit
