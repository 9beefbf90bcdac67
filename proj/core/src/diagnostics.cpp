#include "halluaudit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "halluaudit/text.hpp"

namespace halluaudit {

using nlohmann::json;

namespace {

std::optional<double> parse_impact_score(const std::string& reply) {
    auto pos = reply.find("ImpactScore:");
    if (pos == std::string::npos) return std::nullopt;
    const char* start = reply.c_str() + pos + 12;
    char* end = nullptr;
    double value = std::strtod(start, &end);
    if (end == start) return std::nullopt;
    if (value < 0.0 || value > 1.0) return std::nullopt;
    return value;
}

std::string render_trajectory_text(const Trajectory& t) {
    std::ostringstream out;
    for (const auto& loop : t.loops) {
        out << "=== Iteration " << loop.index << " ===\n";
        out << "action_list_" << loop.index << " (plan):\n" << loop.plan_text << "\n";
        for (const auto& rec : loop.searches) {
            out << "search: " << rec.query_string << " (" << rec.documents.size()
                << " documents)\n";
        }
        out << "claim_list_" << loop.index << " (summary):\n" << loop.summary_text << "\n";
    }
    return out.str();
}

std::string render_report_text(const Trajectory& t) {
    std::ostringstream out;
    for (const auto& p : t.final_report.paragraphs) out << p << "\n";
    return out.str();
}

std::string render_timeline_text(const std::vector<TimelineEntry>& timeline) {
    if (timeline.empty()) return "(no hallucinations detected)";
    std::ostringstream out;
    for (const auto& e : timeline) {
        out << "step=" << e.step << " module=" << e.module << " unit=" << e.unit_id
            << " detail=" << e.detail << "\n";
    }
    return out.str();
}

}  // namespace

std::vector<SevereNoiseFlag> flag_severe_noise(const std::vector<LocalNoiseEntry>& local,
                                               const ChunkIndex& index, const std::string& query,
                                               Gateway& gateway, double impact_threshold,
                                               FlagList* flags) {
    std::vector<const LocalNoiseEntry*> scored;
    for (const auto& entry : local) {
        if (entry.has_retrieval) scored.push_back(&entry);
    }
    std::vector<SevereNoiseFlag> out;
    if (scored.empty()) return out;

    std::stable_sort(scored.begin(), scored.end(),
                     [](const LocalNoiseEntry* a, const LocalNoiseEntry* b) {
                         return a->breakdown.score > b->breakdown.score;
                     });
    std::vector<double> descending;
    descending.reserve(scored.size());
    for (const auto* e : scored) descending.push_back(e->breakdown.score);
    std::size_t keep = elbow_cutoff(descending);

    for (std::size_t i = 0; i < keep; ++i) {
        const LocalNoiseEntry& entry = *scored[i];
        if (entry.breakdown.score <= 0.0) continue;  // nothing was neglected

        // highest-ranked ignored cluster, then its most relevant member
        const Cluster* target = nullptr;
        for (const auto& c : entry.partition.clusters) {
            if (c.in_memory) continue;
            if (target == nullptr || c.rank < target->rank) target = &c;
        }
        if (target == nullptr) continue;
        std::string representative;
        double best_relevance = -1.0;
        for (const auto& id : target->member_chunk_ids) {
            auto it = entry.partition.chunk_relevance.find(id);
            double relevance = it == entry.partition.chunk_relevance.end() ? 0.0 : it->second;
            if (relevance > best_relevance) {
                best_relevance = relevance;
                representative = id;
            }
        }

        const EvidenceChunk* chunk = index.find(representative);
        if (chunk == nullptr) continue;
        ChatCall call{"noise_impact", {{"query", query}, {"chunk_text", chunk->text}}, 0.0};
        try {
            std::string reply = gateway.chat(call);
            auto impact = parse_impact_score(reply);
            if (!impact) {
                throw ModelFormatError("impact reply lacked an ImpactScore line");
            }
            if (*impact > impact_threshold) {
                out.push_back({entry.loop, target->cluster_id, representative, *impact});
            }
        } catch (const ModelFormatError& err) {
            if (flags) {
                flags->push_back({Flag::Kind::tooling, "severe_noise.unparseable_impact",
                                  "loop " + std::to_string(entry.loop) + ": " + err.what()});
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const SevereNoiseFlag& a, const SevereNoiseFlag& b) { return a.loop < b.loop; });
    return out;
}

std::vector<TimelineEntry> assemble_timeline(const DecompositionBatch& batch,
                                             const VerificationLedger& ledger,
                                             const std::vector<ActionJudgment>& judgments,
                                             const std::vector<SevereNoiseFlag>& noise_flags,
                                             const RestrictionAudit& restrictions,
                                             int n_loops) {
    std::vector<TimelineEntry> timeline;
    for (const auto& claim : batch.claims) {
        if (!ledger.is_hallucinated(claim.id)) continue;
        TimelineEntry entry;
        entry.step = claim.kind == ClaimKind::report ? n_loops : claim.loop_index;
        entry.module = "observation";
        entry.unit_id = claim.id;
        entry.detail = (ledger.fabrication.count(claim.id) ? "fabricated claim: "
                                                           : "misattributed claim: ") +
                       claim.text;
        timeline.push_back(std::move(entry));
    }
    std::map<std::string, const AtomicAction*> actions_by_id;
    for (const auto& a : batch.actions) actions_by_id[a.id] = &a;
    for (const auto& judgment : judgments) {
        if (judgment.label == ActionLabel::support) continue;
        auto it = actions_by_id.find(judgment.action_id);
        if (it == actions_by_id.end()) continue;
        TimelineEntry entry;
        entry.step = it->second->loop_index;
        entry.module = "planning";
        entry.unit_id = judgment.action_id;
        entry.detail = to_string(judgment.label) + " action: " + it->second->text;
        timeline.push_back(std::move(entry));
    }
    for (const auto& flag : noise_flags) {
        TimelineEntry entry;
        entry.step = flag.loop;
        entry.module = "noise_domination";
        entry.unit_id = flag.cluster_id;
        entry.detail = "high-value cluster ignored (impact " +
                       std::to_string(flag.impact_score) + ")";
        timeline.push_back(std::move(entry));
    }
    for (const auto& id : restrictions.neglected_sub_queries) {
        TimelineEntry entry;
        entry.step = 0;  // session level: not tied to one loop
        entry.module = "query_missed";
        entry.unit_id = id;
        entry.detail = "sub-query never executed";
        timeline.push_back(std::move(entry));
    }
    std::stable_sort(timeline.begin(), timeline.end(),
                     [](const TimelineEntry& a, const TimelineEntry& b) {
                         return a.step < b.step;
                     });
    return timeline;
}

RootCauseFinding detect_root_cause(const Trajectory& trajectory,
                                   const std::vector<TimelineEntry>& timeline,
                                   Gateway& gateway) {
    RootCauseFinding finding;
    if (timeline.empty()) {
        finding.root_cause = "No hallucination has strong linkage to the final failure.";
        return finding;
    }

    std::set<int> timeline_steps;
    for (const auto& e : timeline) timeline_steps.insert(e.step);

    ChatCall call{"root_cause",
                  {{"query", trajectory.query},
                   {"full_research_trajectory", render_trajectory_text(trajectory)},
                   {"report", render_report_text(trajectory)},
                   {"hallucination_timeline", render_timeline_text(timeline)}},
                  0.0};

    auto parse_finding = [&](const std::string& payload) -> std::optional<RootCauseFinding> {
        json reply = json::parse(payload, nullptr, false);
        if (reply.is_discarded() || !reply.is_object()) return std::nullopt;
        RootCauseFinding f;
        if (!reply.contains("critical_step") || !reply["critical_step"].is_number_integer()) {
            return std::nullopt;
        }
        f.critical_step = reply["critical_step"].get<int>();
        f.critical_module = reply.value("critical_module", "none");
        f.root_cause = reply.value("root_cause", "");
        if (reply.contains("cascading_effects") && reply["cascading_effects"].is_array()) {
            for (const auto& e : reply["cascading_effects"]) {
                if (e.is_object() && e.contains("step")) {
                    f.cascading_effects.push_back(
                        {e["step"].get<int>(), e.value("impact", "")});
                }
            }
        }
        return f;
    };

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string payload;
        try {
            payload = gateway.chat_json(call);
        } catch (const ModelFormatError&) {
            finding.tooling_flag = true;
            break;
        }
        auto parsed = parse_finding(payload);
        if (!parsed) {
            finding.tooling_flag = true;
            break;
        }
        bool valid = parsed->critical_step == -1 || timeline_steps.count(parsed->critical_step);
        if (valid) {
            parsed->rejected_invalid_step = finding.rejected_invalid_step;
            parsed->tooling_flag = finding.tooling_flag;
            if (parsed->critical_step == -1) parsed->critical_module = "none";
            return *parsed;
        }
        // Cited step has no timeline entry: reject and retry once with a
        // corrective reminder (also a fresh cache key).
        finding.rejected_invalid_step = true;
        call.variables["hallucination_timeline"] =
            render_timeline_text(timeline) +
            "\n(Reminder: cite only steps listed above; previous answer cited step " +
            std::to_string(parsed->critical_step) + " which is absent.)";
    }
    finding.critical_step = -1;
    finding.critical_module = "none";
    if (finding.root_cause.empty()) {
        finding.root_cause = "Downgraded: no valid finding could be extracted.";
    }
    return finding;
}

std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3) return std::nullopt;
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> order(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size(), 0.0);
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = mean_rank;
            i = j + 1;
        }
        return r;
    };
    std::vector<double> rx = ranks(xs);
    std::vector<double> ry = ranks(ys);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= rx.size();
    my /= ry.size();
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) return std::nullopt;  // constant series
    return cov / std::sqrt(vx * vy);
}

BiasReport semantic_bias_report(const ClusterPartition& global_partition,
                                const std::vector<LocalNoiseEntry>& local,
                                const ChunkIndex& index, const ChunkMemory& memory,
                                int n_loops) {
    BiasReport report;

    // utilized chunks per stage, by the loop each chunk was retrieved in
    for (const auto& chunk_id : memory.insertion_order()) {
        const EvidenceChunk* chunk = index.find(chunk_id);
        if (chunk == nullptr) continue;
        ++report.stages[static_cast<std::size_t>(stage_of_loop(chunk->loop_index, n_loops))]
              .utilized_chunks;
    }

    // per-loop noise and retrieval quality aggregated per stage
    std::array<double, 3> noise_sum{};
    std::array<double, 3> quality_sum{};
    std::array<int, 3> loop_count{};
    for (const auto& entry : local) {
        if (!entry.has_retrieval) continue;
        std::size_t stage = static_cast<std::size_t>(stage_of_loop(entry.loop, n_loops));
        noise_sum[stage] += entry.breakdown.score;
        double mean_relevance = 0.0;
        if (!entry.partition.chunk_relevance.empty()) {
            std::map<std::string, double> doc_max;
            for (const auto& [id, rel] : entry.partition.chunk_relevance) {
                const EvidenceChunk* chunk = index.find(id);
                if (chunk == nullptr) continue;
                auto [it, inserted] = doc_max.try_emplace(chunk->doc_url, rel);
                if (!inserted) it->second = std::max(it->second, rel);
            }
            for (const auto& [url, score] : doc_max) mean_relevance += score;
            if (!doc_max.empty()) mean_relevance /= static_cast<double>(doc_max.size());
        }
        quality_sum[stage] += mean_relevance;
        ++loop_count[stage];
    }
    for (std::size_t s = 0; s < 3; ++s) {
        report.stages[s].loops = loop_count[s];
        if (loop_count[s] > 0) {
            report.stages[s].mean_local_noise = noise_sum[s] / loop_count[s];
            report.stages[s].mean_retrieval_quality = quality_sum[s] / loop_count[s];
        }
    }

    // mean sizes of utilized vs ignored clusters (global partition)
    double in_sum = 0.0, out_sum = 0.0;
    int in_count = 0, out_count = 0;
    for (const auto& c : global_partition.clusters) {
        if (c.in_memory) {
            in_sum += static_cast<double>(c.size());
            ++in_count;
        } else {
            out_sum += static_cast<double>(c.size());
            ++out_count;
        }
    }
    report.mean_in_memory_cluster_size = in_count == 0 ? 0.0 : in_sum / in_count;
    report.mean_out_memory_cluster_size = out_count == 0 ? 0.0 : out_sum / out_count;

    // correlation of information heterogeneity vs noise, across loops
    std::vector<double> cluster_counts;
    std::vector<double> noise_scores;
    for (const auto& entry : local) {
        if (!entry.has_retrieval) continue;
        cluster_counts.push_back(static_cast<double>(entry.partition.clusters.size()));
        noise_scores.push_back(entry.breakdown.score);
    }
    report.cluster_noise_spearman = spearman(cluster_counts, noise_scores);
    if (!report.cluster_noise_spearman) {
        report.spearman_note = cluster_counts.size() < 3
                                   ? "omitted: fewer than three loops with retrieval"
                                   : "omitted: constant series";
    }
    return report;
}

}  // namespace halluaudit
