#pragma once

#include <set>
#include <string>
#include <vector>

#include "halluaudit/claim_verifier.hpp"
#include "halluaudit/decomposer.hpp"
#include "halluaudit/evidence.hpp"
#include "halluaudit/gateway.hpp"

namespace halluaudit {

enum class ActionLabel { support, deviation, redundancy, propagation };

std::string to_string(ActionLabel label);

struct ActionJudgment {
    std::string action_id;
    ActionLabel label = ActionLabel::support;
    std::string source_claim_id;  // empty = derived from the query (-1)
    double confidence = 0.0;
    std::string explanation;
    bool tooling_flag = false;      // judge output unparseable, conservatively Support
    bool unknown_source_flag = false;
};

struct ActionAudit {
    std::set<std::string> total;
    std::set<std::string> deviation;
    std::set<std::string> redundancy;
    std::set<std::string> propagation;
    double h_ep = 0.0;
    bool degenerate = false;
};

struct RestrictionAudit {
    std::vector<std::string> all_sub_queries;       // Q_total ids
    std::set<std::string> executed_sub_queries;     // Q_executed ids
    std::vector<std::string> neglected_sub_queries; // Q_total \ Q_executed, stable order
    double h_ip = 0.0;
    bool degenerate = false;
};

struct PlanningConfig {
    int prior_claims_top_k = 5;   // context size for the history-aware judge
    double min_match = 0.30;      // floor below which no sub-query matches
};

// History-aware judge over one action: the prompt sees the query, the top-K
// prior findings from Claim Memory and the earlier actions. Unsupport maps
// to Deviation/Redundancy via the reply's type field; an unparseable reply
// degrades to Support with a tooling flag.
ActionJudgment verify_action(const AtomicAction& action, const std::string& query,
                             const std::vector<StoredClaim>& prior_claims,
                             const std::vector<std::string>& action_history, Gateway& gateway);

// Second pass once every claim verdict is final: a Support judgment whose
// source claim was verdicted fabrication or misattribution becomes
// Propagation. Explicit errors keep their labels.
void classify_propagation(std::vector<ActionJudgment>& judgments,
                          const VerificationLedger& ledger);

ActionAudit score_explicit_planning(const std::vector<ActionJudgment>& judgments);

// Keep everything before the largest successive drop in a descending score
// sequence; ties resolve toward the smaller prefix; all-equal keeps all.
std::size_t elbow_cutoff(const std::vector<double>& descending_scores);

// Sub-query ids the action effectively executes: rerank scores sorted
// descending, elbow prefix, entries below the min_match floor dropped.
std::vector<std::string> match_action_restrictions(const AtomicAction& action,
                                                   const std::vector<AtomicSubQuery>& sub_queries,
                                                   Gateway& gateway,
                                                   const PlanningConfig& cfg);

RestrictionAudit score_implicit_planning(const std::vector<AtomicAction>& actions,
                                         const std::vector<AtomicSubQuery>& sub_queries,
                                         Gateway& gateway, const PlanningConfig& cfg);

}  // namespace halluaudit
