#include "halluaudit/planning.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "halluaudit/text.hpp"

namespace halluaudit {

using nlohmann::json;

std::string to_string(ActionLabel label) {
    switch (label) {
        case ActionLabel::support: return "support";
        case ActionLabel::deviation: return "deviation";
        case ActionLabel::redundancy: return "redundancy";
        case ActionLabel::propagation: return "propagation";
    }
    return "unknown";
}

namespace {

std::string render_claims_context(const std::vector<StoredClaim>& claims) {
    if (claims.empty()) return "(none)";
    std::ostringstream out;
    for (std::size_t i = 0; i < claims.size(); ++i) {
        out << "[" << i << "] " << claims[i].text << "\n";
    }
    return out.str();
}

std::string render_actions_context(const std::vector<std::string>& actions) {
    if (actions.empty()) return "(none)";
    std::ostringstream out;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        out << "[" << i << "] " << actions[i] << "\n";
    }
    return out.str();
}

}  // namespace

ActionJudgment verify_action(const AtomicAction& action, const std::string& query,
                             const std::vector<StoredClaim>& prior_claims,
                             const std::vector<std::string>& action_history, Gateway& gateway) {
    ActionJudgment judgment;
    judgment.action_id = action.id;

    ChatCall call{"action_verify",
                  {{"query", query},
                   {"claims_context", render_claims_context(prior_claims)},
                   {"actions_context", render_actions_context(action_history)},
                   {"action", action.text}},
                  0.0};

    auto conservative = [&](const char* reason) {
        judgment.label = ActionLabel::support;
        judgment.tooling_flag = true;
        judgment.explanation = reason;
        return judgment;
    };

    std::string label;
    std::string type;
    int source = -1;
    try {
        json reply = json::parse(gateway.chat_json(call));
        label = text::to_lower(reply.value("label", ""));
        if (reply.contains("type") && reply["type"].is_string()) {
            type = text::to_lower(reply["type"].get<std::string>());
        }
        if (reply.contains("source") && reply["source"].is_number_integer()) {
            source = reply["source"].get<int>();
        }
        judgment.confidence = reply.value("confidence", 0.0);
        judgment.explanation = reply.value("explanation", "");
    } catch (const ModelFormatError&) {
        return conservative("judge reply unparseable; conservatively kept as support");
    } catch (const json::exception&) {
        return conservative("judge reply had malformed fields; conservatively kept as support");
    }

    auto source_claim_id = [&]() -> std::string {
        if (source < 0 || source >= static_cast<int>(prior_claims.size())) return {};
        return prior_claims[static_cast<std::size_t>(source)].id;
    };

    if (label == "support") {
        judgment.label = ActionLabel::support;
        judgment.source_claim_id = source_claim_id();
        if (source >= static_cast<int>(prior_claims.size())) {
            judgment.unknown_source_flag = true;
        }
        return judgment;
    }
    if (label == "unsupport") {
        if (type == "deviation") {
            judgment.label = ActionLabel::deviation;
            judgment.source_claim_id.clear();  // deviation always detaches from claims
            return judgment;
        }
        if (type == "redundancy") {
            std::string id = source_claim_id();
            if (id.empty()) {
                // redundancy must point at the claim that satisfied it
                return conservative("redundancy verdict lacked a valid source claim");
            }
            judgment.label = ActionLabel::redundancy;
            judgment.source_claim_id = id;
            return judgment;
        }
        return conservative("unsupport verdict lacked a recognized type");
    }
    return conservative("judge returned an unknown label");
}

void classify_propagation(std::vector<ActionJudgment>& judgments,
                          const VerificationLedger& ledger) {
    for (auto& judgment : judgments) {
        if (judgment.label != ActionLabel::support) continue;  // explicit errors keep labels
        if (judgment.source_claim_id.empty()) continue;
        if (!ledger.total.count(judgment.source_claim_id)) {
            judgment.unknown_source_flag = true;
            continue;
        }
        if (ledger.is_hallucinated(judgment.source_claim_id)) {
            judgment.label = ActionLabel::propagation;
        }
    }
}

ActionAudit score_explicit_planning(const std::vector<ActionJudgment>& judgments) {
    ActionAudit audit;
    for (const auto& judgment : judgments) {
        audit.total.insert(judgment.action_id);
        switch (judgment.label) {
            case ActionLabel::deviation: audit.deviation.insert(judgment.action_id); break;
            case ActionLabel::redundancy: audit.redundancy.insert(judgment.action_id); break;
            case ActionLabel::propagation: audit.propagation.insert(judgment.action_id); break;
            case ActionLabel::support: break;
        }
    }
    if (audit.total.empty()) {
        audit.degenerate = true;
        audit.h_ep = 0.0;
        return audit;
    }
    audit.h_ep = static_cast<double>(audit.deviation.size() + audit.redundancy.size() +
                                     audit.propagation.size()) /
                 static_cast<double>(audit.total.size());
    return audit;
}

std::size_t elbow_cutoff(const std::vector<double>& descending_scores) {
    const std::size_t n = descending_scores.size();
    if (n <= 1) return n;
    double best_gap = 0.0;
    std::size_t best_prefix = n;  // no positive gap = keep all
    for (std::size_t i = 1; i < n; ++i) {
        double gap = descending_scores[i - 1] - descending_scores[i];
        if (gap > best_gap) {
            best_gap = gap;
            best_prefix = i;
        }
    }
    return best_prefix;
}

std::vector<std::string> match_action_restrictions(const AtomicAction& action,
                                                   const std::vector<AtomicSubQuery>& sub_queries,
                                                   Gateway& gateway,
                                                   const PlanningConfig& cfg) {
    std::vector<std::string> out;
    if (sub_queries.empty()) return out;
    std::vector<std::string> passages;
    passages.reserve(sub_queries.size());
    for (const auto& sq : sub_queries) passages.push_back(sq.text);
    std::vector<double> scores = gateway.rerank(action.text, passages);

    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<double> descending;
    descending.reserve(order.size());
    for (auto i : order) descending.push_back(scores[i]);
    std::size_t keep = elbow_cutoff(descending);
    for (std::size_t i = 0; i < keep; ++i) {
        if (descending[i] < cfg.min_match) break;
        out.push_back(sub_queries[order[i]].id);
    }
    return out;
}

RestrictionAudit score_implicit_planning(const std::vector<AtomicAction>& actions,
                                         const std::vector<AtomicSubQuery>& sub_queries,
                                         Gateway& gateway, const PlanningConfig& cfg) {
    RestrictionAudit audit;
    for (const auto& sq : sub_queries) audit.all_sub_queries.push_back(sq.id);
    if (sub_queries.empty()) {
        audit.degenerate = true;
        audit.h_ip = 0.0;
        return audit;
    }
    for (const auto& action : actions) {
        for (const auto& id : match_action_restrictions(action, sub_queries, gateway, cfg)) {
            audit.executed_sub_queries.insert(id);
        }
    }
    for (const auto& id : audit.all_sub_queries) {
        if (!audit.executed_sub_queries.count(id)) {
            audit.neglected_sub_queries.push_back(id);
        }
    }
    audit.h_ip = static_cast<double>(audit.neglected_sub_queries.size()) /
                 static_cast<double>(audit.all_sub_queries.size());
    return audit;
}

}  // namespace halluaudit
