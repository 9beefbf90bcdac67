#include "halluaudit/summarization.hpp"

#include <algorithm>
#include <map>

namespace halluaudit {

double score_explicit_summarization(const VerificationLedger& ledger, bool* degenerate) {
    if (ledger.total.empty()) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    if (degenerate) *degenerate = false;
    return static_cast<double>(ledger.fabrication.size() + ledger.misattribution.size()) /
           static_cast<double>(ledger.total.size());
}

ClusterPartition cluster_chunks(const ChunkIndex& index, const ClusteringBackend& backend,
                                int scope_loop) {
    ClusterPartition partition;
    partition.scope_loop = scope_loop;

    std::vector<std::size_t> scope_indices;
    std::vector<EmbeddingVector> embeddings;
    for (std::size_t i = 0; i < index.chunks().size(); ++i) {
        const EvidenceChunk& c = index.chunks()[i];
        if (scope_loop != 0 && c.loop_index != scope_loop) continue;
        scope_indices.push_back(i);
        embeddings.push_back(*index.embedding_of(c.chunk_id));
    }
    if (scope_indices.empty()) return partition;

    ClusterGroups groups = backend.cluster(embeddings);
    // deterministic cluster ids: order groups by their first member index
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        return a.front() < b.front();
    });
    const std::string prefix = scope_loop == 0 ? "g" : "l" + std::to_string(scope_loop);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        Cluster cluster;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%s-%03zu", prefix.c_str(), g);
        cluster.cluster_id = buf;
        for (std::size_t member : groups[g]) {
            cluster.member_chunk_ids.push_back(index.chunks()[scope_indices[member]].chunk_id);
        }
        partition.clusters.push_back(std::move(cluster));
    }
    return partition;
}

void rank_clusters(ClusterPartition& partition, const ChunkIndex& index,
                   const std::vector<AtomicSubQuery>& sub_queries, Gateway& gateway) {
    std::vector<std::string> chunk_ids;
    std::vector<std::string> texts;
    for (const auto& cluster : partition.clusters) {
        for (const auto& id : cluster.member_chunk_ids) {
            chunk_ids.push_back(id);
            texts.push_back(index.find(id)->text);
        }
    }
    if (chunk_ids.empty()) return;

    std::vector<double> mean_scores(chunk_ids.size(), 0.0);
    if (!sub_queries.empty()) {
        for (const auto& sq : sub_queries) {
            std::vector<double> scores = gateway.rerank(sq.text, texts);
            for (std::size_t i = 0; i < scores.size(); ++i) mean_scores[i] += scores[i];
        }
        for (auto& s : mean_scores) s /= static_cast<double>(sub_queries.size());
    }
    for (std::size_t i = 0; i < chunk_ids.size(); ++i) {
        partition.chunk_relevance[chunk_ids[i]] = mean_scores[i];
    }
    for (auto& cluster : partition.clusters) {
        double sum = 0.0;
        for (const auto& id : cluster.member_chunk_ids) {
            sum += partition.chunk_relevance[id];
        }
        cluster.relevance = cluster.member_chunk_ids.empty()
                                ? 0.0
                                : sum / static_cast<double>(cluster.member_chunk_ids.size());
    }
    assign_ranks(partition);
}

void mark_memory(ClusterPartition& partition, const ChunkMemory& memory) {
    for (auto& cluster : partition.clusters) {
        cluster.in_memory = std::any_of(
            cluster.member_chunk_ids.begin(), cluster.member_chunk_ids.end(),
            [&](const std::string& id) { return memory.contains(id); });
    }
}

std::vector<LocalNoiseEntry> compute_local_noise(const ChunkIndex& index,
                                                 const ClusteringBackend& backend,
                                                 const std::vector<AtomicSubQuery>& sub_queries,
                                                 const ChunkMemory& memory, Gateway& gateway,
                                                 int n_loops) {
    std::vector<LocalNoiseEntry> out;
    for (int loop = 1; loop <= n_loops; ++loop) {
        LocalNoiseEntry entry;
        entry.loop = loop;
        entry.partition = cluster_chunks(index, backend, loop);
        if (entry.partition.clusters.empty()) {
            entry.has_retrieval = false;
            out.push_back(std::move(entry));
            continue;
        }
        entry.has_retrieval = true;
        rank_clusters(entry.partition, index, sub_queries, gateway);
        mark_memory(entry.partition, memory);
        entry.breakdown = compute_noise(entry.partition);
        out.push_back(std::move(entry));
    }
    return out;
}

RetrievalQualityReport retrieval_quality(const ClusterPartition& global_partition,
                                         const ChunkIndex& index) {
    RetrievalQualityReport report;
    std::map<std::string, double> doc_max;
    for (const auto& [chunk_id, relevance] : global_partition.chunk_relevance) {
        const EvidenceChunk* chunk = index.find(chunk_id);
        if (chunk == nullptr) continue;
        auto [it, inserted] = doc_max.try_emplace(chunk->doc_url, relevance);
        if (!inserted) it->second = std::max(it->second, relevance);
    }
    for (const auto& [url, score] : doc_max) {
        report.documents.push_back({url, score});
    }
    std::stable_sort(report.documents.begin(), report.documents.end(),
                     [](const auto& a, const auto& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.url < b.url;
                     });
    constexpr std::size_t kTop = 5;
    report.fewer_than_top_k = report.documents.size() < kTop;
    std::size_t take = std::min(kTop, report.documents.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) {
        report.top_scores.push_back(report.documents[i].score);
        sum += report.documents[i].score;
    }
    report.task_mean = take == 0 ? 0.0 : sum / static_cast<double>(take);
    return report;
}

}  // namespace halluaudit
