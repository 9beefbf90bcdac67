#pragma once

#include <map>
#include <string>
#include <vector>

#include "halluaudit/errors.hpp"

namespace halluaudit {

struct Cluster {
    std::string cluster_id;
    std::vector<std::string> member_chunk_ids;
    double relevance = 0.0;  // mean member relevance to the sub-queries
    int rank = 0;            // 1 = highest importance; assigned by assign_ranks
    bool in_memory = false;  // contains any chunk in Chunk Memory

    std::size_t size() const { return member_chunk_ids.size(); }
};

struct ClusterPartition {
    int scope_loop = 0;  // 0 = global, otherwise the loop index
    std::vector<Cluster> clusters;
    // per-chunk relevance, kept for representative selection in diagnostics
    std::map<std::string, double> chunk_relevance;
};

// Sorts by relevance descending and assigns ranks 1..M. Ties break toward
// the larger cluster, then lexicographic cluster_id.
void assign_ranks(ClusterPartition& partition);

struct IgnoredClusterPenalty {
    std::string cluster_id;
    std::size_t size = 0;
    int rank = 0;
    int inversion_count = 0;  // utilized clusters ranked below this one
    double penalty = 0.0;     // size * inversion_count / rank
};

struct PenaltyBreakdown {
    std::vector<IgnoredClusterPenalty> ignored;
    double total_penalty = 0.0;   // sum of ignored-cluster penalties
    double worst_case = 0.0;      // rank-prefix worst-case normalizer
    int clusters_in_memory = 0;
    int clusters_out_memory = 0;
    double score = 0.0;           // normalized noise score in [0,1]
    bool degenerate = false;      // no utilized clusters, or no clusters at all
};

// Penalty arithmetic over a ranked partition. The normalizer assumes the
// worst case ignores the rank-1..N_out prefix while every utilized cluster
// sits below it; the ratio is clamped into [0,1] because varying sizes can
// push the true maximum above the prefix value.
PenaltyBreakdown compute_noise(const ClusterPartition& ranked);

// Exact maximum total penalty over all choices of N_out ignored clusters,
// recomputing inversion counts per subset. Guarded enumeration; throws
// TooManyClustersError above `guard` clusters.
double exact_worst_case(const ClusterPartition& ranked, std::size_t guard = 18);

}  // namespace halluaudit
