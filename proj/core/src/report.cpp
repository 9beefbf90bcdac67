#include "halluaudit/report.hpp"

#include <sstream>

#include <json.hpp>

namespace halluaudit {

using nlohmann::json;

double composite_score(double h_es, double h_is, double h_ep, double h_ip) {
    return (h_es + h_is + h_ep + h_ip) / 4.0;
}

namespace {

json verdict_to_json(const Verdict& v) {
    return {{"claim_id", v.claim_id},
            {"label", to_string(v.label)},
            {"route", to_string(v.route)},
            {"evidence", v.evidence},
            {"confidence", v.confidence},
            {"tooling_flag", v.tooling_flag}};
}

json judgment_to_json(const ActionJudgment& j) {
    return {{"action_id", j.action_id},
            {"label", to_string(j.label)},
            {"source", j.source_claim_id.empty() ? json(-1) : json(j.source_claim_id)},
            {"confidence", j.confidence},
            {"explanation", j.explanation},
            {"tooling_flag", j.tooling_flag},
            {"unknown_source_flag", j.unknown_source_flag}};
}

json partition_to_json(const ClusterPartition& p) {
    json clusters = json::array();
    for (const auto& c : p.clusters) {
        clusters.push_back({{"cluster_id", c.cluster_id},
                            {"members", c.member_chunk_ids},
                            {"size", c.size()},
                            {"relevance", c.relevance},
                            {"rank", c.rank},
                            {"in_memory", c.in_memory}});
    }
    return {{"scope_loop", p.scope_loop}, {"clusters", clusters}};
}

json breakdown_to_json(const PenaltyBreakdown& b) {
    json ignored = json::array();
    for (const auto& p : b.ignored) {
        ignored.push_back({{"cluster_id", p.cluster_id},
                           {"size", p.size},
                           {"rank", p.rank},
                           {"inversion_count", p.inversion_count},
                           {"penalty", p.penalty}});
    }
    return {{"ignored", ignored},
            {"total_penalty", b.total_penalty},
            {"worst_case", b.worst_case},
            {"clusters_in_memory", b.clusters_in_memory},
            {"clusters_out_memory", b.clusters_out_memory},
            {"score", b.score},
            {"degenerate", b.degenerate}};
}

json stage_profile_to_json(const StageProfile& p) {
    static const char* kStages[3] = {"early", "middle", "late"};
    json out = json::object();
    for (std::size_t s = 0; s < 3; ++s) {
        out[kStages[s]] = {{"loops", p.stage_loop_counts[s]},
                           {"src", p.src_dist[s]},
                           {"desc", p.desc_dist[s]},
                           {"hallu", p.hallu_dist[s]}};
    }
    return out;
}

}  // namespace

std::string report_to_json(const HallucinationReport& report) {
    json out;
    out["schema_version"] = report.schema_version;
    out["task_id"] = report.task_id;
    out["query"] = report.query;
    out["domain"] = report.domain_tag;
    out["n_loops"] = report.n_loops;

    out["scores"] = {{"h_es", report.h_es},
                     {"h_is", report.h_is},
                     {"h_ep", report.h_ep},
                     {"h_ip", report.h_ip},
                     {"h", report.h}};

    out["claims"] = json::array();
    for (const auto& v : report.verdicts) {
        json jv = verdict_to_json(v);
        auto it = report.claim_texts.find(v.claim_id);
        jv["text"] = it == report.claim_texts.end() ? "" : it->second;
        out["claims"].push_back(std::move(jv));
    }
    out["actions"] = json::array();
    for (const auto& j : report.judgments) {
        json jj = judgment_to_json(j);
        auto it = report.action_texts.find(j.action_id);
        jj["text"] = it == report.action_texts.end() ? "" : it->second;
        out["actions"].push_back(std::move(jj));
    }

    out["noise"] = {{"global", breakdown_to_json(report.global_noise)},
                    {"global_partition", partition_to_json(report.global_partition)}};
    out["noise"]["local"] = json::array();
    for (const auto& entry : report.local_noise) {
        if (!entry.has_retrieval) {
            out["noise"]["local"].push_back({{"loop", entry.loop}, {"retrieval", false}});
        } else {
            out["noise"]["local"].push_back({{"loop", entry.loop},
                                             {"retrieval", true},
                                             {"breakdown", breakdown_to_json(entry.breakdown)},
                                             {"cluster_count", entry.partition.clusters.size()}});
        }
    }

    out["restrictions"] = {{"total", report.restriction_audit.all_sub_queries},
                           {"executed", json::array()},
                           {"neglected", report.restriction_audit.neglected_sub_queries},
                           {"degenerate", report.restriction_audit.degenerate}};
    for (const auto& id : report.restriction_audit.executed_sub_queries) {
        out["restrictions"]["executed"].push_back(id);
    }
    out["sub_queries"] = json::object();
    for (const auto& [id, text] : report.sub_query_texts) out["sub_queries"][id] = text;

    out["retrieval_quality"] = {{"task_mean", report.retrieval.task_mean},
                                {"top_scores", report.retrieval.top_scores},
                                {"fewer_than_top_k", report.retrieval.fewer_than_top_k}};
    out["retrieval_quality"]["documents"] = json::array();
    for (const auto& d : report.retrieval.documents) {
        out["retrieval_quality"]["documents"].push_back({{"url", d.url}, {"score", d.score}});
    }

    out["validation"] = json::array();
    for (const auto& issue : report.validation) {
        out["validation"].push_back({{"kind", to_string(issue.kind)},
                                     {"detail", issue.detail},
                                     {"loop", issue.loop_index}});
    }
    out["flags"] = json::array();
    for (const auto& flag : report.flags) {
        out["flags"].push_back(
            {{"kind", to_string(flag.kind)}, {"code", flag.code}, {"context", flag.context}});
    }

    if (report.diagnostics_enabled) {
        json diag;
        diag["graph"] = json::parse(graph_to_json(report.graph));
        diag["stage_profile"] = stage_profile_to_json(report.stage_profile);
        diag["severe_noise"] = json::array();
        for (const auto& f : report.severe_noise) {
            diag["severe_noise"].push_back({{"loop", f.loop},
                                            {"cluster_id", f.cluster_id},
                                            {"representative_chunk", f.representative_chunk_id},
                                            {"impact_score", f.impact_score}});
        }
        diag["root_cause"] = {{"critical_step", report.root_cause.critical_step},
                              {"critical_module", report.root_cause.critical_module},
                              {"root_cause", report.root_cause.root_cause},
                              {"tooling_flag", report.root_cause.tooling_flag},
                              {"rejected_invalid_step", report.root_cause.rejected_invalid_step}};
        diag["root_cause"]["cascading_effects"] = json::array();
        for (const auto& e : report.root_cause.cascading_effects) {
            diag["root_cause"]["cascading_effects"].push_back(
                {{"step", e.step}, {"impact", e.impact}});
        }
        json bias;
        static const char* kStages[3] = {"early", "middle", "late"};
        for (std::size_t s = 0; s < 3; ++s) {
            bias[kStages[s]] = {
                {"utilized_chunks", report.bias.stages[s].utilized_chunks},
                {"mean_local_noise", report.bias.stages[s].mean_local_noise},
                {"mean_retrieval_quality", report.bias.stages[s].mean_retrieval_quality},
                {"loops", report.bias.stages[s].loops}};
        }
        bias["mean_in_memory_cluster_size"] = report.bias.mean_in_memory_cluster_size;
        bias["mean_out_memory_cluster_size"] = report.bias.mean_out_memory_cluster_size;
        if (report.bias.cluster_noise_spearman) {
            bias["cluster_noise_spearman"] = *report.bias.cluster_noise_spearman;
        } else {
            bias["cluster_noise_spearman"] = nullptr;
            bias["spearman_note"] = report.bias.spearman_note;
        }
        diag["bias"] = std::move(bias);
        out["diagnostics"] = std::move(diag);
    }
    return out.dump(2) + "\n";
}

std::string report_to_markdown(const HallucinationReport& report) {
    std::ostringstream md;
    auto pct = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };
    md << "# Hallucination audit: " << report.task_id << "\n\n";
    md << "Query: " << report.query << "\n\n";
    md << "| Metric | Score |\n|---|---|\n";
    md << "| Explicit summarization (H_ES) | " << pct(report.h_es) << " |\n";
    md << "| Implicit summarization (H_IS) | " << pct(report.h_is) << " |\n";
    md << "| Explicit planning (H_EP) | " << pct(report.h_ep) << " |\n";
    md << "| Implicit planning (H_IP) | " << pct(report.h_ip) << " |\n";
    md << "| Composite (H) | " << pct(report.h) << " |\n\n";

    md << "## Claims\n\n";
    md << "Total " << report.ledger.total.size() << ", fabricated "
       << report.ledger.fabrication.size() << ", misattributed "
       << report.ledger.misattribution.size() << ".\n\n";
    if (!report.ledger.fabrication.empty() || !report.ledger.misattribution.empty()) {
        md << "| Claim | Label | Route |\n|---|---|---|\n";
        for (const auto& v : report.verdicts) {
            if (v.label == VerdictLabel::supported) continue;
            auto it = report.claim_texts.find(v.claim_id);
            md << "| " << (it == report.claim_texts.end() ? v.claim_id : it->second) << " | "
               << to_string(v.label) << " | " << to_string(v.route) << " |\n";
        }
        md << "\n";
    }

    md << "## Actions\n\n";
    md << "Total " << report.action_audit.total.size() << ", deviation "
       << report.action_audit.deviation.size() << ", redundancy "
       << report.action_audit.redundancy.size() << ", propagation "
       << report.action_audit.propagation.size() << ".\n\n";

    md << "## Noise\n\n";
    md << "Global noise score " << pct(report.global_noise.score) << " (penalty "
       << pct(report.global_noise.total_penalty) << " / worst case "
       << pct(report.global_noise.worst_case) << ").\n\n";
    md << "| Loop | Retrieval | Noise score | Clusters |\n|---|---|---|---|\n";
    for (const auto& entry : report.local_noise) {
        if (!entry.has_retrieval) {
            md << "| " << entry.loop << " | none | - | - |\n";
        } else {
            md << "| " << entry.loop << " | yes | " << pct(entry.breakdown.score) << " | "
               << entry.partition.clusters.size() << " |\n";
        }
    }
    md << "\n";

    md << "## Restrictions\n\n";
    md << report.restriction_audit.all_sub_queries.size() << " sub-queries, "
       << report.restriction_audit.neglected_sub_queries.size() << " neglected.\n\n";
    for (const auto& id : report.restriction_audit.neglected_sub_queries) {
        auto it = report.sub_query_texts.find(id);
        md << "- neglected: " << (it == report.sub_query_texts.end() ? id : it->second) << "\n";
    }
    md << "\n## Retrieval quality\n\nTask mean " << pct(report.retrieval.task_mean) << " over "
       << report.retrieval.documents.size() << " documents.\n\n";

    if (report.diagnostics_enabled) {
        md << "## Diagnostics\n\n";
        md << "Propagation graph: " << report.graph.nodes.size() << " nodes, "
           << report.graph.edges.size() << " edges.\n\n";
        md << "Root cause: step " << report.root_cause.critical_step << " ("
           << report.root_cause.critical_module << ") - " << report.root_cause.root_cause
           << "\n\n";
        if (!report.severe_noise.empty()) {
            md << "Severe noise loops:";
            for (const auto& f : report.severe_noise) md << " " << f.loop;
            md << "\n\n";
        }
    }

    if (!report.flags.empty()) {
        md << "## Caveats\n\n";
        for (const auto& flag : report.flags) {
            md << "- [" << to_string(flag.kind) << "] " << flag.code;
            if (!flag.context.empty()) md << " (" << flag.context << ")";
            md << "\n";
        }
        md << "\n";
    }
    if (!report.validation.empty()) {
        md << "## Validation issues\n\n";
        for (const auto& issue : report.validation) {
            md << "- " << to_string(issue.kind) << " " << issue.detail;
            if (issue.loop_index > 0) md << " (loop " << issue.loop_index << ")";
            md << "\n";
        }
        md << "\n";
    }
    return md.str();
}

ReportDigest digest_from_json(const std::string& json_text) {
    json parsed = json::parse(json_text, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("scores")) {
        throw FormatError("not a report JSON document");
    }
    ReportDigest digest;
    digest.task_id = parsed.value("task_id", "");
    digest.domain_tag = parsed.value("domain", "");
    digest.h_es = parsed["scores"].value("h_es", 0.0);
    digest.h_is = parsed["scores"].value("h_is", 0.0);
    digest.h_ep = parsed["scores"].value("h_ep", 0.0);
    digest.h_ip = parsed["scores"].value("h_ip", 0.0);
    digest.h = parsed["scores"].value("h", 0.0);
    if (parsed.contains("retrieval_quality")) {
        digest.retrieval_quality = parsed["retrieval_quality"].value("task_mean", 0.0);
    }
    if (parsed.contains("flags")) {
        for (const auto& f : parsed["flags"]) {
            if (f.value("kind", "") == "degenerate") ++digest.degenerate_flags;
            else ++digest.tooling_flags;
        }
    }
    return digest;
}

std::string RunManifest::to_json() const {
    json out;
    out["task_id"] = task_id;
    out["backend_ids"] = backend_ids;
    out["config"] = json::parse(config_json.empty() ? "{}" : config_json);
    out["prompt_hashes"] = prompt_hashes;
    out["cache"] = {{"hits", cache_hits}, {"misses", cache_misses}};
    out["calls"] = {{"chat", chat_calls},
                    {"embed", embed_calls},
                    {"rerank", rerank_calls},
                    {"nli", nli_calls}};
    out["phases"] = json::array();
    for (const auto& [name, seconds] : phase_seconds) {
        out["phases"].push_back({{"name", name}, {"seconds", seconds}});
    }
    return out.dump(2) + "\n";
}

}  // namespace halluaudit
