#pragma once

#include <memory>
#include <string>
#include <vector>

#include "halluaudit/gateway.hpp"

namespace halluaudit {

// Groups of item indices; every input index appears in exactly one group.
using ClusterGroups = std::vector<std::vector<std::size_t>>;

// Partition interface over embedded items. Implementations must be
// deterministic for fixed inputs and configuration.
class ClusteringBackend {
public:
    virtual ~ClusteringBackend() = default;
    virtual ClusterGroups cluster(const std::vector<EmbeddingVector>& embeddings) const = 0;
    virtual std::string id() const = 0;
};

// Average-linkage agglomerative merging on cosine similarity with a floor;
// singletons allowed. Merge ties resolve to the lowest index pair.
class AgglomerativeBackend : public ClusteringBackend {
public:
    explicit AgglomerativeBackend(double similarity_floor = 0.80)
        : similarity_floor_(similarity_floor) {}
    ClusterGroups cluster(const std::vector<EmbeddingVector>& embeddings) const override;
    std::string id() const override;

private:
    double similarity_floor_;
};

std::shared_ptr<ClusteringBackend> make_clustering_backend(const std::string& name,
                                                           double similarity_floor);

}  // namespace halluaudit
