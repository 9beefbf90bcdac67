#include "halluaudit/noise.hpp"

#include <algorithm>
#include <cmath>

namespace halluaudit {

void assign_ranks(ClusterPartition& partition) {
    auto& cs = partition.clusters;
    std::sort(cs.begin(), cs.end(), [](const Cluster& a, const Cluster& b) {
        if (a.relevance != b.relevance) return a.relevance > b.relevance;
        if (a.size() != b.size()) return a.size() > b.size();
        return a.cluster_id < b.cluster_id;
    });
    for (std::size_t i = 0; i < cs.size(); ++i) {
        cs[i].rank = static_cast<int>(i + 1);
    }
}

PenaltyBreakdown compute_noise(const ClusterPartition& ranked) {
    PenaltyBreakdown out;
    for (const auto& c : ranked.clusters) {
        if (c.in_memory) ++out.clusters_in_memory;
        else ++out.clusters_out_memory;
    }

    for (const auto& c : ranked.clusters) {
        if (c.in_memory) continue;
        int inversions = 0;
        for (const auto& d : ranked.clusters) {
            if (d.in_memory && d.rank > c.rank) ++inversions;
        }
        IgnoredClusterPenalty p;
        p.cluster_id = c.cluster_id;
        p.size = c.size();
        p.rank = c.rank;
        p.inversion_count = inversions;
        p.penalty = static_cast<double>(c.size()) * inversions / c.rank;
        out.total_penalty += p.penalty;
        out.ignored.push_back(std::move(p));
    }

    if (out.clusters_out_memory == 0 || out.clusters_in_memory == 0) {
        // Nothing ignored, or nothing utilized: the ratio has no denominator.
        out.degenerate = ranked.clusters.empty() || out.clusters_in_memory == 0;
        out.score = 0.0;
        return out;
    }

    // Sizes of the rank-1..N_out clusters, taken in rank order.
    std::vector<const Cluster*> by_rank;
    by_rank.reserve(ranked.clusters.size());
    for (const auto& c : ranked.clusters) by_rank.push_back(&c);
    std::sort(by_rank.begin(), by_rank.end(),
              [](const Cluster* a, const Cluster* b) { return a->rank < b->rank; });
    double prefix = 0.0;
    for (int r = 1; r <= out.clusters_out_memory; ++r) {
        prefix += static_cast<double>(by_rank[r - 1]->size()) / r;
    }
    out.worst_case = out.clusters_in_memory * prefix;
    out.score = std::clamp(out.total_penalty / out.worst_case, 0.0, 1.0);
    return out;
}

double exact_worst_case(const ClusterPartition& ranked, std::size_t guard) {
    const auto& cs = ranked.clusters;
    if (cs.size() > guard) {
        throw TooManyClustersError(cs.size(), guard);
    }
    std::size_t n_out = 0;
    for (const auto& c : cs) {
        if (!c.in_memory) ++n_out;
    }
    if (n_out == 0 || cs.empty()) return 0.0;

    const std::size_t n = cs.size();
    std::vector<std::size_t> pick(n_out);
    for (std::size_t i = 0; i < n_out; ++i) pick[i] = i;

    double best = 0.0;
    while (true) {
        std::vector<bool> ignored(n, false);
        for (auto i : pick) ignored[i] = true;
        double total = 0.0;
        for (auto i : pick) {
            int inversions = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (!ignored[j] && cs[j].rank > cs[i].rank) ++inversions;
            }
            total += static_cast<double>(cs[i].size()) * inversions / cs[i].rank;
        }
        best = std::max(best, total);

        // next combination in lexicographic order
        std::size_t k = n_out;
        while (k > 0 && pick[k - 1] == n - n_out + k - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t j = k; j < n_out; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

}  // namespace halluaudit
