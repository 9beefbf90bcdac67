#include "halluaudit/propagation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace halluaudit {

using nlohmann::json;

std::string to_string(EdgeMechanism mechanism) {
    return mechanism == EdgeMechanism::homogeneous ? "homogeneous" : "heterogeneous";
}

const GraphNode* PropagationGraph::find(const std::string& id) const {
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

std::size_t PropagationGraph::in_degree(const std::string& id) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(),
                      [&](const GraphEdge& e) { return e.dst == id; }));
}

std::size_t PropagationGraph::out_degree(const std::string& id) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(),
                      [&](const GraphEdge& e) { return e.src == id; }));
}

bool PropagationGraph::is_acyclic() const {
    std::map<std::string, std::size_t> order;
    for (const auto& n : nodes) order[n.id] = n.order;
    for (const auto& e : edges) {
        auto s = order.find(e.src);
        auto d = order.find(e.dst);
        if (s == order.end() || d == order.end()) return false;
        if (s->second >= d->second) return false;
    }
    return true;
}

PropagationGraph build_propagation_graph(const DecompositionBatch& batch,
                                         const VerificationLedger& ledger,
                                         const std::vector<ActionJudgment>& judgments,
                                         int n_loops, Gateway& gateway,
                                         const PropagationConfig& cfg) {
    PropagationGraph graph;

    // Total unit order: per loop, plan actions then summary claims; the
    // report's claims close the sequence.
    std::map<std::string, std::size_t> position;
    std::size_t next = 0;
    for (int loop = 1; loop <= n_loops; ++loop) {
        for (const auto* a : batch.actions_in_loop(loop)) position[a->id] = next++;
        for (const auto* c : batch.claims_in_loop(loop)) position[c->id] = next++;
    }
    for (const auto* c : batch.report_claims()) position[c->id] = next++;

    std::map<std::string, ActionLabel> action_labels;
    for (const auto& j : judgments) action_labels[j.action_id] = j.label;

    for (const auto& claim : batch.claims) {
        if (!ledger.is_hallucinated(claim.id)) continue;
        GraphNode node;
        node.id = claim.id;
        node.kind = "claim";
        node.label = ledger.fabrication.count(claim.id) ? "fabrication" : "misattribution";
        node.loop = claim.kind == ClaimKind::report ? n_loops : claim.loop_index;
        node.text = claim.text;
        node.order = position.at(claim.id);
        graph.nodes.push_back(std::move(node));
    }
    for (const auto& action : batch.actions) {
        auto it = action_labels.find(action.id);
        if (it == action_labels.end() || it->second == ActionLabel::support) continue;
        GraphNode node;
        node.id = action.id;
        node.kind = "action";
        node.label = to_string(it->second);
        node.loop = action.loop_index;
        node.text = action.text;
        node.order = position.at(action.id);
        graph.nodes.push_back(std::move(node));
    }
    std::sort(graph.nodes.begin(), graph.nodes.end(),
              [](const GraphNode& a, const GraphNode& b) { return a.order < b.order; });

    std::set<std::string> node_ids;
    for (const auto& n : graph.nodes) node_ids.insert(n.id);

    // Heterogeneous: hallucinated claim -> each action grounded in it.
    for (const auto& j : judgments) {
        if (j.label != ActionLabel::propagation) continue;
        if (!node_ids.count(j.source_claim_id) || !node_ids.count(j.action_id)) continue;
        const GraphNode* src = graph.find(j.source_claim_id);
        const GraphNode* dst = graph.find(j.action_id);
        if (src->order >= dst->order) continue;  // edges only point forward
        graph.edges.push_back({src->id, dst->id, EdgeMechanism::heterogeneous, j.confidence});
    }

    // Homogeneous: same-kind error pairs linked by high-confidence entailment.
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < graph.nodes.size(); ++j) {
            const GraphNode& earlier = graph.nodes[i];
            const GraphNode& later = graph.nodes[j];
            if (earlier.kind != later.kind) continue;
            const std::string& premise = cfg.premise_earlier ? earlier.text : later.text;
            const std::string& hypothesis = cfg.premise_earlier ? later.text : earlier.text;
            NliVerdict verdict = gateway.nli(premise, hypothesis);
            if (verdict.p_entail >= cfg.propagation_threshold) {
                graph.edges.push_back(
                    {earlier.id, later.id, EdgeMechanism::homogeneous, verdict.p_entail});
            }
        }
    }
    return graph;
}

int stage_of_loop(int loop, int n_loops) {
    int base = n_loops / 3;
    int rem = n_loops % 3;
    int early = base + (rem >= 1 ? 1 : 0);
    int middle = base + (rem >= 2 ? 1 : 0);
    if (loop <= early) return 0;
    if (loop <= early + middle) return 1;
    return 2;
}

StageProfile temporal_profile(const PropagationGraph& graph, int n_loops) {
    StageProfile profile;
    for (int loop = 1; loop <= n_loops; ++loop) {
        ++profile.stage_loop_counts[static_cast<std::size_t>(stage_of_loop(loop, n_loops))];
    }

    std::map<std::string, std::size_t> in_deg;
    std::map<std::string, std::size_t> out_deg;
    std::map<std::string, std::vector<std::string>> parents;
    for (const auto& n : graph.nodes) {
        in_deg[n.id] = 0;
        out_deg[n.id] = 0;
    }
    for (const auto& e : graph.edges) {
        ++in_deg[e.dst];
        ++out_deg[e.src];
        parents[e.dst].push_back(e.src);
    }

    std::map<std::string, const GraphNode*> by_id;
    for (const auto& n : graph.nodes) by_id[n.id] = &n;

    // Roots of each node: its in-degree-0 ancestors. Nodes ordered
    // topologically, so one forward pass suffices.
    std::map<std::string, std::set<std::string>> roots;
    for (const auto& n : graph.nodes) {
        if (in_deg[n.id] == 0) {
            roots[n.id] = {n.id};
            continue;
        }
        std::set<std::string> acc;
        for (const auto& p : parents[n.id]) {
            const auto& pr = roots.at(p);
            acc.insert(pr.begin(), pr.end());
        }
        roots[n.id] = std::move(acc);
    }

    for (const auto& n : graph.nodes) {
        std::size_t stage = static_cast<std::size_t>(stage_of_loop(n.loop, n_loops));
        if (out_deg[n.id] >= 1 && in_deg[n.id] == 0) profile.src_dist[stage] += 1.0;
        if (in_deg[n.id] >= 1) profile.desc_dist[stage] += 1.0;

        const auto& rs = roots.at(n.id);
        double weight = 1.0 / static_cast<double>(rs.size());
        for (const auto& r : rs) {
            std::size_t root_stage =
                static_cast<std::size_t>(stage_of_loop(by_id.at(r)->loop, n_loops));
            profile.hallu_dist[root_stage] += weight;
        }
    }
    return profile;
}

std::string graph_to_json(const PropagationGraph& graph) {
    json out;
    out["nodes"] = json::array();
    for (const auto& n : graph.nodes) {
        out["nodes"].push_back({{"id", n.id},
                                {"kind", n.kind},
                                {"label", n.label},
                                {"loop", n.loop},
                                {"text", n.text}});
    }
    out["edges"] = json::array();
    for (const auto& e : graph.edges) {
        out["edges"].push_back({{"src", e.src},
                                {"dst", e.dst},
                                {"mechanism", to_string(e.mechanism)},
                                {"confidence", e.confidence}});
    }
    return out.dump(2) + "\n";
}

std::string graph_to_dot(const PropagationGraph& graph) {
    std::ostringstream out;
    out << "digraph propagation {\n  rankdir=LR;\n";
    for (const auto& n : graph.nodes) {
        out << "  \"" << n.id << "\" [label=\"" << n.label << "\\nloop " << n.loop
            << "\", shape=" << (n.kind == "claim" ? "box" : "ellipse") << "];\n";
    }
    for (const auto& e : graph.edges) {
        out << "  \"" << e.src << "\" -> \"" << e.dst << "\" [style="
            << (e.mechanism == EdgeMechanism::homogeneous ? "solid" : "dashed") << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace halluaudit
