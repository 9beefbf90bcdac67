#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "halluaudit/clustering.hpp"
#include "halluaudit/report.hpp"

namespace halluaudit {

struct AuditConfig {
    GatewayConfig gateway;
    RetrievalConfig retrieval;
    PlanningConfig planning;
    PropagationConfig propagation;
    std::string clustering_backend = "agglomerative";
    double clustering_similarity_floor = 0.80;
    double impact_threshold = 0.5;
    bool memory_include_misattribution = true;
    bool diagnostics_enabled = true;
    std::string output_dir = "out";
    std::vector<std::string> formats = {"json", "md"};
    int concurrency = 8;
    std::string prompt_dir;
    std::string index_dir;  // persist the embedding index when set
    bool mock_backends = false;

    static AuditConfig from_json_file(const std::filesystem::path& path);
    static AuditConfig from_json(const std::string& text);
    std::string to_json() const;
    void validate() const;  // throws std::invalid_argument on out-of-range values
};

struct BackendSet {
    std::shared_ptr<ChatBackend> chat;
    std::shared_ptr<EmbedBackend> embed;
    std::shared_ptr<RerankBackend> rerank;
    std::shared_ptr<NliBackend> nli;
};

// End-to-end audit driver: sequencing, scoring, report and manifest
// emission. Construction wires the gateway from the config (mock or HTTP);
// tests may inject their own backends.
class AuditRunner {
public:
    explicit AuditRunner(AuditConfig config);
    AuditRunner(AuditConfig config, BackendSet backends);

    HallucinationReport run(const Trajectory& trajectory);

    // load -> run -> emit; returns the report.
    HallucinationReport run_file(const std::filesystem::path& trajectory_path);

    void emit(const HallucinationReport& report, const std::filesystem::path& out_dir) const;

    Gateway& gateway() { return *gateway_; }
    const RunManifest& manifest() const { return manifest_; }
    const AuditConfig& config() const { return config_; }

private:
    AuditConfig config_;
    std::unique_ptr<Gateway> gateway_;
    std::shared_ptr<ClusteringBackend> clustering_;
    RunManifest manifest_;
};

struct CorpusSummary {
    std::size_t report_count = 0;
    std::map<std::string, double> means;  // h_es, h_is, h_ep, h_ip, h, retrieval_quality
    std::map<std::string, std::map<std::string, double>> by_domain;
    std::map<std::string, std::size_t> domain_counts;
    std::size_t degenerate_flags = 0;
    std::size_t tooling_flags = 0;

    std::string to_json() const;
};

// Means of every metric over the given report JSON files, overall and
// grouped by domain tag ("untagged" when absent).
CorpusSummary aggregate_corpus(const std::vector<std::filesystem::path>& report_paths);

// Tidy CSVs for external plotting: metrics.csv (one row per task),
// stage_profile.csv (one row per distribution and stage), and
// bias_scatter.csv (one row per loop). Byte-stable across reruns.
void emit_plot_data(const std::vector<std::filesystem::path>& report_paths,
                    const std::filesystem::path& out_dir);

std::vector<std::filesystem::path> find_report_files(const std::filesystem::path& dir);

}  // namespace halluaudit
