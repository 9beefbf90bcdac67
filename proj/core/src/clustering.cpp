#include "halluaudit/clustering.hpp"

#include <algorithm>

#include "halluaudit/text.hpp"

namespace halluaudit {

ClusterGroups AgglomerativeBackend::cluster(const std::vector<EmbeddingVector>& embeddings) const {
    const std::size_t n = embeddings.size();
    ClusterGroups groups;
    groups.reserve(n);
    for (std::size_t i = 0; i < n; ++i) groups.push_back({i});
    if (n < 2) return groups;

    // Pairwise average-linkage similarity, updated with cluster-size weights
    // on each merge (Lance-Williams for the average method).
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sim[i][j] = sim[j][i] = text::cosine(embeddings[i].values, embeddings[j].values);
        }
    }
    std::vector<bool> active(n, true);

    while (true) {
        double best = similarity_floor_;
        std::size_t bi = n, bj = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (sim[i][j] > best) {
                    best = sim[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == n) break;

        double wi = static_cast<double>(groups[bi].size());
        double wj = static_cast<double>(groups[bj].size());
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            double merged = (wi * sim[bi][k] + wj * sim[bj][k]) / (wi + wj);
            sim[bi][k] = sim[k][bi] = merged;
        }
        groups[bi].insert(groups[bi].end(), groups[bj].begin(), groups[bj].end());
        std::sort(groups[bi].begin(), groups[bi].end());
        groups[bj].clear();
        active[bj] = false;
    }

    ClusterGroups out;
    for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) out.push_back(std::move(groups[i]));
    }
    return out;
}

std::string AgglomerativeBackend::id() const {
    return "agglomerative-avg(floor=" + std::to_string(similarity_floor_) + ")";
}

std::shared_ptr<ClusteringBackend> make_clustering_backend(const std::string& name,
                                                           double similarity_floor) {
    if (name.empty() || name == "agglomerative") {
        return std::make_shared<AgglomerativeBackend>(similarity_floor);
    }
    throw std::invalid_argument("unknown clustering backend '" + name + "'");
}

}  // namespace halluaudit
