#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "halluaudit/audit.hpp"
#include "halluaudit/bench_verify.hpp"
#include "halluaudit/mock_backends.hpp"
#include "halluaudit/noise.hpp"
#include "halluaudit/planning.hpp"

namespace fs = std::filesystem;
using namespace halluaudit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitTransport = 3;
constexpr int kExitInternal = 4;

AuditConfig load_config(const std::string& config_path) {
    AuditConfig cfg;
    if (!config_path.empty()) {
        cfg = AuditConfig::from_json_file(config_path);
    }
    return cfg;
}

int run_audit_command(const std::string& trajectory_path, const std::string& config_path,
                      const std::string& out_dir, bool no_diagnostics, bool mock_backends,
                      const std::string& formats) {
    AuditConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (no_diagnostics) cfg.diagnostics_enabled = false;
    if (mock_backends) cfg.mock_backends = true;
    if (!formats.empty()) {
        cfg.formats.clear();
        std::stringstream ss(formats);
        std::string format;
        while (std::getline(ss, format, ',')) {
            if (!format.empty()) cfg.formats.push_back(format);
        }
    }
    AuditRunner runner(cfg);
    HallucinationReport report = runner.run_file(trajectory_path);

    std::printf("task %s  H_ES=%.4f H_IS=%.4f H_EP=%.4f H_IP=%.4f H=%.4f\n",
                report.task_id.c_str(), report.h_es, report.h_is, report.h_ep, report.h_ip,
                report.h);
    bool warned = false;
    for (const auto& flag : report.flags) {
        std::fprintf(stderr, "warning: [%s] %s %s\n", to_string(flag.kind).c_str(),
                     flag.code.c_str(), flag.context.c_str());
        warned = true;
    }
    if (warned) {
        std::fprintf(stderr, "audit completed with %zu flagged caveats\n", report.flags.size());
    }
    return kExitOk;
}

int run_aggregate_command(const std::string& dir, const std::string& out_dir) {
    auto reports = find_report_files(dir);
    CorpusSummary summary = aggregate_corpus(reports);
    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "summary.json", std::ios::trunc);
        out << summary.to_json();
    }
    emit_plot_data(reports, out_dir);
    std::printf("aggregated %zu reports; mean H=%.4f\n", summary.report_count,
                summary.means.at("h"));
    return kExitOk;
}

int run_bench_verify_command(const std::string& fixtures, const std::string& out_dir,
                             bool mock_backends) {
    std::string corpus_ref;
    auto claims = load_labeled_claims(fixtures, &corpus_ref);
    fs::path corpus_dir = fs::path(fixtures).parent_path() / corpus_ref;
    auto corpus = load_bench_corpus(corpus_dir);

    AuditConfig cfg;
    cfg.mock_backends = mock_backends;
    AuditRunner runner(cfg);
    ValidationMetrics metrics =
        benchmark_verification(claims, corpus, cfg.retrieval, runner.gateway());

    nlohmann::json out = {{"claims", metrics.claim_count},
                          {"label_accuracy", metrics.label_accuracy},
                          {"strict_accuracy", metrics.strict_accuracy},
                          {"evidence_recall", metrics.evidence_recall}};
    fs::create_directories(out_dir);
    {
        std::ofstream file(fs::path(out_dir) / "bench_verify.json", std::ios::trunc);
        file << out.dump(2) << "\n";
    }
    std::printf("label_accuracy=%.4f strict_accuracy=%.4f evidence_recall=%.4f (%zu claims)\n",
                metrics.label_accuracy, metrics.strict_accuracy, metrics.evidence_recall,
                metrics.claim_count);
    return kExitOk;
}

// The hand-derived oracle checks, runnable anywhere the binary lands.
int run_selfcheck() {
    int failures = 0;
    auto check = [&](bool ok, const char* name) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };
    auto near = [](double a, double b, double tol) { return std::fabs(a - b) <= tol; };

    {
        ClusterPartition p;
        p.clusters = {{"c1", {"k1", "k2", "k3"}, 0.9, 1, false},
                      {"c2", {"k4", "k5"}, 0.8, 2, true},
                      {"c3", {"k6"}, 0.7, 3, false},
                      {"c4", {"k7"}, 0.6, 4, true}};
        PenaltyBreakdown b = compute_noise(p);
        check(near(b.total_penalty, 6.0 + 1.0 / 3.0, 1e-9), "noise worked example: P");
        check(near(b.worst_case, 8.0, 1e-9), "noise worked example: P_worst");
        check(near(b.score, 0.7917, 1e-4), "noise worked example: score");
        double exact = exact_worst_case(p);
        check(b.total_penalty <= exact + 1e-9, "noise worked example: oracle bound");
    }
    {
        check(near(composite_score(0.2171, 0.2786, 0.0170, 0.1866), 0.1748, 1e-4),
              "composite cross-check");
        check(composite_score(0, 0, 0, 0) == 0.0, "composite zero");
        check(composite_score(1, 1, 1, 1) == 1.0, "composite one");
    }
    {
        check(elbow_cutoff({0.9, 0.2}) == 1, "elbow single gap");
        check(elbow_cutoff({0.5, 0.5, 0.5}) == 3, "elbow all equal");
        check(elbow_cutoff({0.91, 0.88, 0.52, 0.10}) == 3, "elbow largest-drop prefix");
    }
    {
        // uniform sizes: prefix approximation equals the enumerated maximum
        ClusterPartition p;
        for (int i = 0; i < 6; ++i) {
            Cluster c;
            c.cluster_id = "u" + std::to_string(i);
            c.member_chunk_ids = {"m" + std::to_string(i)};
            c.rank = i + 1;
            c.in_memory = i >= 3;
            p.clusters.push_back(c);
        }
        PenaltyBreakdown b = compute_noise(p);
        check(near(exact_worst_case(p), b.worst_case, 1e-9), "uniform sizes: exact == approx");
        check(near(b.score, 1.0, 1e-9), "uniform worst arrangement scores 1");
    }
    return failures == 0 ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory-level hallucination auditor for deep-research agents"};
    app.require_subcommand(1);

    std::string trajectory_path, config_path, out_dir, formats, fixtures, dir;
    bool no_diagnostics = false;
    bool mock_backends = false;

    auto* audit = app.add_subcommand("audit", "Audit one trajectory file");
    audit->add_option("trajectory", trajectory_path, "Trajectory JSON file")->required();
    audit->add_option("--config", config_path, "Audit config JSON");
    audit->add_option("--out", out_dir, "Output directory");
    audit->add_flag("--no-diagnostics", no_diagnostics, "Skip propagation/root-cause analyses");
    audit->add_flag("--mock-backends", mock_backends, "Use the deterministic mock backends");
    audit->add_option("--formats", formats, "Comma-separated output formats (json,md)");

    auto* aggregate = app.add_subcommand("aggregate", "Aggregate a directory of reports");
    aggregate->add_option("dir", dir, "Directory containing *.report.json")->required();
    aggregate->add_option("--out", out_dir, "Output directory")->required();

    auto* bench = app.add_subcommand("bench-verify", "Score claim verification on fixtures");
    bench->add_option("fixtures", fixtures, "JSONL fixture file")->required();
    bench->add_option("--out", out_dir, "Output directory")->required();
    bench->add_flag("--mock-backends", mock_backends, "Use the deterministic mock backends");

    app.add_subcommand("selfcheck", "Run the built-in oracle suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("audit")) {
            return run_audit_command(trajectory_path, config_path, out_dir, no_diagnostics,
                                     mock_backends, formats);
        }
        if (app.got_subcommand("aggregate")) {
            return run_aggregate_command(dir, out_dir);
        }
        if (app.got_subcommand("bench-verify")) {
            return run_bench_verify_command(fixtures, out_dir, mock_backends);
        }
        if (app.got_subcommand("selfcheck")) {
            return run_selfcheck();
        }
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return kExitSchema;
    } catch (const TransportError& e) {
        std::fprintf(stderr, "transport error: %s\n", e.what());
        return kExitTransport;
    } catch (const InternalInvariantError& e) {
        std::fprintf(stderr, "internal invariant violated: %s\n", e.what());
        return kExitInternal;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitOk;
}
