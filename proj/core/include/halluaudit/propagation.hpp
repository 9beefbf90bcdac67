#pragma once

#include <array>
#include <string>
#include <vector>

#include "halluaudit/claim_verifier.hpp"
#include "halluaudit/decomposer.hpp"
#include "halluaudit/gateway.hpp"
#include "halluaudit/planning.hpp"

namespace halluaudit {

struct GraphNode {
    std::string id;
    std::string kind;   // "claim" | "action"
    std::string label;  // fabrication | misattribution | deviation | redundancy | propagation
    int loop = 0;       // report claims sit at the terminal loop
    std::string text;
    std::size_t order = 0;  // position in the trajectory's total unit order
};

enum class EdgeMechanism { homogeneous, heterogeneous };

std::string to_string(EdgeMechanism mechanism);

struct GraphEdge {
    std::string src;
    std::string dst;
    EdgeMechanism mechanism = EdgeMechanism::homogeneous;
    double confidence = 0.0;
};

struct PropagationGraph {
    std::vector<GraphNode> nodes;  // ascending `order`: already topologically sorted
    std::vector<GraphEdge> edges;  // src.order < dst.order structurally

    const GraphNode* find(const std::string& id) const;
    std::size_t in_degree(const std::string& id) const;
    std::size_t out_degree(const std::string& id) const;
    bool is_acyclic() const;
};

struct PropagationConfig {
    double propagation_threshold = 0.99;  // entailment bar for homogeneous links
    bool premise_earlier = true;          // earlier node as the NLI premise
};

// Hallucinated units become nodes; heterogeneous edges follow the
// Propagation judgments, homogeneous edges come from high-confidence
// entailment between same-kind errors ordered by trajectory position.
// Temporal unit order per loop: actions (plan) precede claims (summary);
// report claims come last.
PropagationGraph build_propagation_graph(const DecompositionBatch& batch,
                                         const VerificationLedger& ledger,
                                         const std::vector<ActionJudgment>& judgments,
                                         int n_loops, Gateway& gateway,
                                         const PropagationConfig& cfg);

struct StageProfile {
    std::array<int, 3> stage_loop_counts{};  // loops in Early/Middle/Late
    std::array<double, 3> src_dist{};        // out-degree >= 1, in-degree 0
    std::array<double, 3> desc_dist{};       // in-degree >= 1
    std::array<double, 3> hallu_dist{};      // every error counted at its root's stage
};

// Loops split into three stages as equally as possible, remainders to the
// earlier stages. hallu_dist backtracks each node to its in-degree-0
// ancestors; nodes with several roots are attributed fractionally.
StageProfile temporal_profile(const PropagationGraph& graph, int n_loops);

// Stage index (0..2) of a loop under the equal-thirds split.
int stage_of_loop(int loop, int n_loops);

std::string graph_to_json(const PropagationGraph& graph);
std::string graph_to_dot(const PropagationGraph& graph);

}  // namespace halluaudit
