#pragma once

#include <string>
#include <vector>

#include "halluaudit/gateway.hpp"
#include "halluaudit/trajectory.hpp"

namespace halluaudit {

struct AtomicSubQuery {
    std::string id;
    std::string text;  // one indivisible, objective, context-independent restriction
};

enum class ClaimKind { intermediate, report };

struct AtomicClaim {
    std::string id;
    std::string text;
    ClaimKind kind = ClaimKind::intermediate;
    int loop_index = 0;       // 0 for report claims
    int paragraph_index = 0;  // within the loop text or the report
    std::vector<std::string> citations;  // urls; report claims inherit their paragraph's
};

struct AtomicAction {
    std::string id;
    std::string text;  // imperative form
    int loop_index = 0;
    int paragraph_index = 0;
};

struct DecompositionBatch {
    std::vector<AtomicSubQuery> sub_queries;
    std::vector<AtomicClaim> claims;   // intermediate then report, source order
    std::vector<AtomicAction> actions;

    std::vector<const AtomicClaim*> claims_in_loop(int loop) const;
    std::vector<const AtomicAction*> actions_in_loop(int loop) const;
    std::vector<const AtomicClaim*> report_claims() const;
    const AtomicClaim* find_claim(const std::string& id) const;
};

class Decomposer {
public:
    explicit Decomposer(Gateway& gateway) : gateway_(gateway) {}

    std::vector<AtomicSubQuery> decompose_query(const std::string& task_id,
                                                const std::string& query);

    // One paragraph of a loop's plan_text or summary_text; reasoning may be
    // interleaved, so both claims and actions can come back. Claims inherit
    // the paragraph's resolvable citations.
    std::pair<std::vector<AtomicClaim>, std::vector<AtomicAction>> decompose_reasoning(
        const std::string& task_id, const std::string& query, const std::string& paragraph,
        int loop_index, int paragraph_index, const std::vector<std::string>& citations = {});

    std::vector<AtomicClaim> decompose_report_paragraph(const std::string& task_id,
                                                        const std::string& paragraph,
                                                        int paragraph_index,
                                                        const std::vector<std::string>& citations);

    // Second-pass double check. Unit count may change; ids are reassigned
    // within the unit's original provenance slot.
    std::vector<AtomicClaim> refine_claims(const std::vector<AtomicClaim>& claims);
    std::vector<AtomicAction> refine_actions(const std::vector<AtomicAction>& actions);

    // Full two-stage decomposition of a trajectory, ordered by
    // (loop, paragraph, seq) with report claims last. Model-format failures
    // degrade to skipped units recorded in `flags`; they never abort.
    DecompositionBatch decompose(const Trajectory& t, FlagList* flags = nullptr);

private:
    Gateway& gateway_;
};

// "- item" lines from a model reply. Throws ModelFormatError when
// `require_items` and no item lines are present.
std::vector<std::string> parse_dash_lines(const std::string& reply, bool require_items);

// True for the decomposition prompts' "No extractable content" sentinel.
bool is_no_content_reply(const std::string& reply);

// Unit id scheme: "{task}:{loop<N>|report}:p{paragraph}:{c|a}{seq}".
// Stable across re-runs with caching; diagnostics reference units by id.
std::string make_unit_id(const std::string& task_id, int loop_index, int paragraph_index,
                         char kind, int seq);

}  // namespace halluaudit
