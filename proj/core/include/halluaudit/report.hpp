#pragma once

#include <map>
#include <string>
#include <vector>

#include "halluaudit/diagnostics.hpp"

namespace halluaudit {

struct HallucinationReport {
    std::string schema_version = "1";
    std::string task_id;
    std::string query;
    std::string domain_tag;
    int n_loops = 0;

    double h_es = 0.0;
    double h_is = 0.0;  // global
    double h_ep = 0.0;
    double h_ip = 0.0;
    double h = 0.0;     // (h_es + h_is + h_ep + h_ip) / 4

    std::vector<Verdict> verdicts;
    VerificationLedger ledger;
    ClusterPartition global_partition;
    PenaltyBreakdown global_noise;
    std::vector<LocalNoiseEntry> local_noise;
    std::vector<ActionJudgment> judgments;
    ActionAudit action_audit;
    RestrictionAudit restriction_audit;
    RetrievalQualityReport retrieval;
    std::vector<ValidationIssue> validation;
    FlagList flags;

    bool diagnostics_enabled = false;
    PropagationGraph graph;
    StageProfile stage_profile;
    std::vector<SevereNoiseFlag> severe_noise;
    RootCauseFinding root_cause;
    BiasReport bias;

    // unit texts for rendering and downstream tooling
    std::map<std::string, std::string> claim_texts;
    std::map<std::string, std::string> action_texts;
    std::map<std::string, std::string> sub_query_texts;
};

// Arithmetic mean of the four sub-scores.
double composite_score(double h_es, double h_is, double h_ep, double h_ip);

std::string report_to_json(const HallucinationReport& report);
std::string report_to_markdown(const HallucinationReport& report);

// The scores/flags subset aggregation needs; parsed back from report JSON.
struct ReportDigest {
    std::string task_id;
    std::string domain_tag;
    double h_es = 0.0, h_is = 0.0, h_ep = 0.0, h_ip = 0.0, h = 0.0;
    double retrieval_quality = 0.0;
    std::size_t degenerate_flags = 0;
    std::size_t tooling_flags = 0;
};

ReportDigest digest_from_json(const std::string& json_text);

struct RunManifest {
    std::string task_id;
    std::string backend_ids;
    std::string config_json;
    std::map<std::string, std::string> prompt_hashes;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    std::uint64_t chat_calls = 0;
    std::uint64_t embed_calls = 0;
    std::uint64_t rerank_calls = 0;
    std::uint64_t nli_calls = 0;
    std::vector<std::pair<std::string, double>> phase_seconds;  // execution order

    std::string to_json() const;
};

}  // namespace halluaudit
