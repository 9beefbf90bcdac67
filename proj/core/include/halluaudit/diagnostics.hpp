#pragma once

#include <optional>
#include <string>
#include <vector>

#include "halluaudit/propagation.hpp"
#include "halluaudit/summarization.hpp"

namespace halluaudit {

struct TimelineEntry {
    int step = 0;  // loop index; 0 marks session-level entries (missed queries)
    std::string module;  // planning | observation | noise_domination | query_missed
    std::string unit_id;
    std::string detail;
};

struct SevereNoiseFlag {
    int loop = 0;
    std::string cluster_id;
    std::string representative_chunk_id;
    double impact_score = 0.0;
};

// Elbow over the descending local noise scores picks candidate loops; each
// candidate's highest-ranked ignored cluster sends its most relevant member
// to the impact judge; loops scoring above `impact_threshold` are flagged.
std::vector<SevereNoiseFlag> flag_severe_noise(const std::vector<LocalNoiseEntry>& local,
                                               const ChunkIndex& index, const std::string& query,
                                               Gateway& gateway, double impact_threshold = 0.5,
                                               FlagList* flags = nullptr);

struct RootCauseFinding {
    int critical_step = -1;
    std::string critical_module = "none";
    std::string root_cause;
    struct Effect {
        int step = 0;
        std::string impact;
    };
    std::vector<Effect> cascading_effects;
    bool tooling_flag = false;
    bool rejected_invalid_step = false;
};

// Timeline assembled from claim/action hallucinations, severe-noise loops
// and neglected sub-queries.
std::vector<TimelineEntry> assemble_timeline(const DecompositionBatch& batch,
                                             const VerificationLedger& ledger,
                                             const std::vector<ActionJudgment>& judgments,
                                             const std::vector<SevereNoiseFlag>& noise_flags,
                                             const RestrictionAudit& restrictions,
                                             int n_loops);

// Renders the trajectory, report and timeline into the root-cause prompt.
// Findings citing steps absent from the timeline are rejected and retried
// once, then downgraded to critical_step = -1.
RootCauseFinding detect_root_cause(const Trajectory& trajectory,
                                   const std::vector<TimelineEntry>& timeline,
                                   Gateway& gateway);

struct BiasReport {
    struct StageRow {
        int utilized_chunks = 0;
        double mean_local_noise = 0.0;
        double mean_retrieval_quality = 0.0;
        int loops = 0;
    };
    std::array<StageRow, 3> stages{};
    double mean_in_memory_cluster_size = 0.0;
    double mean_out_memory_cluster_size = 0.0;
    // Spearman rank correlation of (cluster count, noise score) across
    // loops; absent when under three points or a series is constant.
    std::optional<double> cluster_noise_spearman;
    std::string spearman_note;
};

BiasReport semantic_bias_report(const ClusterPartition& global_partition,
                                const std::vector<LocalNoiseEntry>& local,
                                const ChunkIndex& index, const ChunkMemory& memory,
                                int n_loops);

// Spearman rank correlation with average ranks on ties; nullopt when fewer
// than three pairs or a side has zero variance.
std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace halluaudit
