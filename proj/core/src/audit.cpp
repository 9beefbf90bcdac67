#include "halluaudit/audit.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "halluaudit/decomposer.hpp"
#include "halluaudit/http_backends.hpp"
#include "halluaudit/mock_backends.hpp"
#include "halluaudit/parallel.hpp"
#include "halluaudit/text.hpp"

namespace halluaudit {

using nlohmann::json;

namespace {

std::string read_file_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open trajectory file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

class PhaseTimer {
public:
    explicit PhaseTimer(RunManifest& manifest) : manifest_(manifest) {}
    void mark(const std::string& name) {
        auto now = std::chrono::steady_clock::now();
        if (!current_.empty()) {
            manifest_.phase_seconds.emplace_back(
                current_, std::chrono::duration<double>(now - started_).count());
        }
        current_ = name;
        started_ = now;
    }
    void finish() { mark(""); current_.clear(); }

private:
    RunManifest& manifest_;
    std::string current_;
    std::chrono::steady_clock::time_point started_;
};

}  // namespace

AuditConfig AuditConfig::from_json_file(const std::filesystem::path& path) {
    return from_json(read_file_or_throw(path));
}

AuditConfig AuditConfig::from_json(const std::string& text) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw FormatError("config is not a JSON object");
    }
    AuditConfig cfg;
    if (root.contains("gateway")) {
        const json& g = root["gateway"];
        cfg.gateway.chat_url = g.value("chat_url", "");
        cfg.gateway.embed_url = g.value("embed_url", "");
        cfg.gateway.rerank_url = g.value("rerank_url", "");
        cfg.gateway.nli_url = g.value("nli_url", "");
        cfg.gateway.api_key = g.value("api_key", "");
        cfg.gateway.cache_dir = g.value("cache_dir", "");
        cfg.gateway.nli_entail_threshold = g.value("nli_entail_threshold", 0.99);
        cfg.gateway.retry.max_attempts = g.value("max_attempts", 3);
        cfg.gateway.retry.backoff =
            std::chrono::milliseconds(g.value("backoff_ms", 100));
    }
    if (root.contains("retrieval")) {
        const json& r = root["retrieval"];
        cfg.retrieval.chunk_sentences = r.value("chunk_sentences", 15);
        cfg.retrieval.sim_threshold = r.value("sim_threshold", 0.4);
        cfg.retrieval.verify_top_k = r.value("verify_top_k", 5);
        cfg.retrieval.reflect_top_k = r.value("reflect_top_k", 10);
    }
    if (root.contains("planning")) {
        const json& p = root["planning"];
        cfg.planning.prior_claims_top_k = p.value("prior_claims_top_k", 5);
        cfg.planning.min_match = p.value("min_match", 0.30);
    }
    if (root.contains("propagation")) {
        const json& p = root["propagation"];
        cfg.propagation.propagation_threshold = p.value("threshold", 0.99);
        cfg.propagation.premise_earlier = p.value("premise_earlier", true);
    }
    cfg.clustering_backend = root.value("clustering_backend", "agglomerative");
    cfg.clustering_similarity_floor = root.value("clustering_similarity_floor", 0.80);
    cfg.impact_threshold = root.value("impact_threshold", 0.5);
    cfg.memory_include_misattribution = root.value("memory_include_misattribution", true);
    cfg.diagnostics_enabled = root.value("diagnostics_enabled", true);
    cfg.output_dir = root.value("output_dir", "out");
    cfg.concurrency = root.value("concurrency", 8);
    cfg.prompt_dir = root.value("prompt_dir", "");
    cfg.index_dir = root.value("index_dir", "");
    cfg.mock_backends = root.value("mock_backends", false);
    if (root.contains("formats")) {
        cfg.formats = root["formats"].get<std::vector<std::string>>();
    }
    return cfg;
}

std::string AuditConfig::to_json() const {
    json out;
    out["gateway"] = {{"chat_url", gateway.chat_url},
                      {"embed_url", gateway.embed_url},
                      {"rerank_url", gateway.rerank_url},
                      {"nli_url", gateway.nli_url},
                      {"cache_dir", gateway.cache_dir},
                      {"nli_entail_threshold", gateway.nli_entail_threshold},
                      {"max_attempts", gateway.retry.max_attempts},
                      {"backoff_ms", gateway.retry.backoff.count()}};
    out["retrieval"] = {{"chunk_sentences", retrieval.chunk_sentences},
                        {"sim_threshold", retrieval.sim_threshold},
                        {"verify_top_k", retrieval.verify_top_k},
                        {"reflect_top_k", retrieval.reflect_top_k}};
    out["planning"] = {{"prior_claims_top_k", planning.prior_claims_top_k},
                       {"min_match", planning.min_match}};
    out["propagation"] = {{"threshold", propagation.propagation_threshold},
                          {"premise_earlier", propagation.premise_earlier}};
    out["clustering_backend"] = clustering_backend;
    out["clustering_similarity_floor"] = clustering_similarity_floor;
    out["impact_threshold"] = impact_threshold;
    out["memory_include_misattribution"] = memory_include_misattribution;
    out["diagnostics_enabled"] = diagnostics_enabled;
    out["output_dir"] = output_dir;
    out["formats"] = formats;
    out["concurrency"] = concurrency;
    out["prompt_dir"] = prompt_dir;
    out["index_dir"] = index_dir;
    out["mock_backends"] = mock_backends;
    return out.dump(2);
}

void AuditConfig::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (retrieval.chunk_sentences < 1) {
        throw std::invalid_argument("chunk_sentences must be >= 1");
    }
    if (!in_unit(retrieval.sim_threshold)) {
        throw std::invalid_argument("sim_threshold must be in [0,1]");
    }
    if (retrieval.verify_top_k < 1 || retrieval.reflect_top_k < 1) {
        throw std::invalid_argument("top-k values must be >= 1");
    }
    if (gateway.nli_entail_threshold <= 0.0) {
        throw std::invalid_argument("nli_entail_threshold must be positive");
    }
    if (gateway.retry.max_attempts < 1) {
        throw std::invalid_argument("max_attempts must be >= 1");
    }
    if (!in_unit(clustering_similarity_floor) || !in_unit(impact_threshold) ||
        !in_unit(planning.min_match)) {
        throw std::invalid_argument("similarity/impact/match thresholds must be in [0,1]");
    }
    if (concurrency < 1) {
        throw std::invalid_argument("concurrency must be >= 1");
    }
}

namespace {

BackendSet backends_from_config(const AuditConfig& cfg) {
    if (cfg.mock_backends) {
        auto mocks = mock::make_default_mocks();
        return {mocks.chat, mocks.embed, mocks.rerank, mocks.nli};
    }
    GatewayConfig g = cfg.gateway;
    g.apply_env();
    for (const auto& [name, url] :
         {std::pair<const char*, const std::string&>{"chat", g.chat_url},
          {"embed", g.embed_url},
          {"rerank", g.rerank_url},
          {"nli", g.nli_url}}) {
        if (url.empty()) {
            throw TransportError(std::string(name) +
                                 " endpoint not configured and mock backends are disabled");
        }
    }
    return {std::make_shared<http::HttpChatBackend>(g.chat_url, g.api_key),
            std::make_shared<http::HttpEmbedBackend>(g.embed_url, g.api_key),
            std::make_shared<http::HttpRerankBackend>(g.rerank_url, g.api_key),
            std::make_shared<http::HttpNliBackend>(g.nli_url, g.api_key)};
}

PromptLibrary prompts_from_config(const AuditConfig& cfg) {
    PromptLibrary prompts = PromptLibrary::with_defaults();
    if (!cfg.prompt_dir.empty()) prompts.load_overrides(cfg.prompt_dir);
    return prompts;
}

}  // namespace

AuditRunner::AuditRunner(AuditConfig config) : AuditRunner(config, backends_from_config(config)) {}

AuditRunner::AuditRunner(AuditConfig config, BackendSet backends) : config_(std::move(config)) {
    config_.validate();
    GatewayConfig g = config_.gateway;
    if (!config_.mock_backends) g.apply_env();
    gateway_ = std::make_unique<Gateway>(g, prompts_from_config(config_), backends.chat,
                                         backends.embed, backends.rerank, backends.nli);
    clustering_ =
        make_clustering_backend(config_.clustering_backend, config_.clustering_similarity_floor);
}

HallucinationReport AuditRunner::run(const Trajectory& trajectory) {
    HallucinationReport report;
    report.task_id = trajectory.task_id;
    report.query = trajectory.query;
    report.domain_tag = trajectory.domain_tag;
    report.n_loops = static_cast<int>(trajectory.loops.size());
    report.diagnostics_enabled = config_.diagnostics_enabled;

    manifest_ = RunManifest{};
    manifest_.task_id = trajectory.task_id;
    manifest_.backend_ids = gateway_->backend_ids();
    manifest_.config_json = config_.to_json();
    manifest_.prompt_hashes = gateway_->prompts().asset_hashes();
    PhaseTimer timer(manifest_);

    timer.mark("validate");
    report.validation = validate_trajectory(trajectory);

    timer.mark("decompose");
    Decomposer decomposer(*gateway_);
    DecompositionBatch batch = decomposer.decompose(trajectory, &report.flags);
    for (const auto& c : batch.claims) report.claim_texts[c.id] = c.text;
    for (const auto& a : batch.actions) report.action_texts[a.id] = a.text;
    for (const auto& sq : batch.sub_queries) report.sub_query_texts[sq.id] = sq.text;

    timer.mark("index");
    std::vector<EvidenceChunk> chunks;
    int doc_seq = 0;
    for (const auto& loop : trajectory.loops) {
        for (const auto& rec : loop.searches) {
            for (const auto& doc : rec.documents) {
                char prefix[16];
                std::snprintf(prefix, sizeof(prefix), "d%03d", doc_seq++);
                auto doc_chunks = chunk_document(doc, config_.retrieval, prefix);
                chunks.insert(chunks.end(), doc_chunks.begin(), doc_chunks.end());
            }
        }
    }
    ChunkIndex index;
    index.build(std::move(chunks), *gateway_);

    const int n_loops = report.n_loops;
    const std::set<std::string> all_urls = trajectory.urls_through_loop(n_loops);
    ClaimMemory claim_memory;
    ChunkMemory chunk_memory;
    ClaimVerifier verifier(*gateway_, index, config_.retrieval, trajectory.query);

    std::vector<std::string> action_history;  // texts, trajectory order

    for (int loop = 1; loop <= n_loops; ++loop) {
        const std::string tag = "loop" + std::to_string(loop);

        // Plan actions judged first (a loop plans before it summarizes),
        // against the memory frozen at the previous loop boundary.
        timer.mark(tag + ".actions");
        auto loop_actions = batch.actions_in_loop(loop);
        std::vector<std::vector<std::string>> histories(loop_actions.size());
        for (std::size_t i = 0; i < loop_actions.size(); ++i) {
            histories[i] = action_history;
            for (std::size_t k = 0; k < i; ++k) histories[i].push_back(loop_actions[k]->text);
        }
        std::vector<ActionJudgment> loop_judgments(loop_actions.size());
        parallel_for_index(loop_actions.size(), config_.concurrency, [&](std::size_t i) {
            auto priors = retrieve_prior_claims(loop_actions[i]->text, claim_memory, *gateway_,
                                                config_.planning.prior_claims_top_k);
            loop_judgments[i] = verify_action(*loop_actions[i], trajectory.query, priors,
                                              histories[i], *gateway_);
        });
        for (auto& j : loop_judgments) report.judgments.push_back(std::move(j));
        for (const auto* a : loop_actions) action_history.push_back(a->text);

        // Summary claims verified against the frozen memory snapshot.
        timer.mark(tag + ".claims");
        for (const auto& stored : claim_memory.claims()) {
            if (stored.loop_index >= loop) {
                throw InternalInvariantError("claim memory holds a unit from loop " +
                                             std::to_string(stored.loop_index) +
                                             " while verifying loop " + std::to_string(loop));
            }
        }
        auto loop_claims = batch.claims_in_loop(loop);
        const std::set<std::string> scope = trajectory.urls_through_loop(loop);
        std::vector<Verdict> loop_verdicts(loop_claims.size());
        parallel_for_index(loop_claims.size(), config_.concurrency, [&](std::size_t i) {
            loop_verdicts[i] = verifier.verify(*loop_claims[i], scope, all_urls, claim_memory);
        });

        // Memory appends happen only at the loop boundary.
        timer.mark(tag + ".memory");
        for (std::size_t i = 0; i < loop_claims.size(); ++i) {
            const Verdict& v = loop_verdicts[i];
            report.ledger.record(v, loop);
            bool store = v.label == VerdictLabel::supported ||
                         (v.label == VerdictLabel::misattribution &&
                          config_.memory_include_misattribution);
            if (store) {
                std::vector<std::string> chunk_ids;
                for (const auto& id : v.evidence) {
                    if (index.find(id) != nullptr) chunk_ids.push_back(id);
                }
                record_supported(*loop_claims[i], chunk_ids, loop,
                                 v.label == VerdictLabel::misattribution, index, *gateway_,
                                 claim_memory, chunk_memory);
            }
            report.verdicts.push_back(v);
        }
    }

    // The final report is the terminal summary: citation scope when cited,
    // full retrieval history otherwise.
    timer.mark("report.claims");
    auto report_claims = batch.report_claims();
    std::vector<Verdict> report_verdicts(report_claims.size());
    parallel_for_index(report_claims.size(), config_.concurrency, [&](std::size_t i) {
        const AtomicClaim& claim = *report_claims[i];
        std::set<std::string> scope = claim.citations.empty()
                                          ? all_urls
                                          : std::set<std::string>(claim.citations.begin(),
                                                                  claim.citations.end());
        report_verdicts[i] = verifier.verify(claim, scope, all_urls, claim_memory);
    });
    for (std::size_t i = 0; i < report_claims.size(); ++i) {
        const Verdict& v = report_verdicts[i];
        report.ledger.record(v, 0);
        bool store = v.label == VerdictLabel::supported ||
                     (v.label == VerdictLabel::misattribution &&
                      config_.memory_include_misattribution);
        if (store) {
            std::vector<std::string> chunk_ids;
            for (const auto& id : v.evidence) {
                if (index.find(id) != nullptr) chunk_ids.push_back(id);
            }
            record_supported(*report_claims[i], chunk_ids, n_loops,
                             v.label == VerdictLabel::misattribution, index, *gateway_,
                             claim_memory, chunk_memory);
        }
        report.verdicts.push_back(v);
    }

    // Propagation upgrades run once every claim verdict is final.
    timer.mark("propagation.classify");
    classify_propagation(report.judgments, report.ledger);
    report.action_audit = score_explicit_planning(report.judgments);

    timer.mark("noise.global");
    report.global_partition = cluster_chunks(index, *clustering_, 0);
    rank_clusters(report.global_partition, index, batch.sub_queries, *gateway_);
    mark_memory(report.global_partition, chunk_memory);
    report.global_noise = compute_noise(report.global_partition);

    timer.mark("noise.local");
    report.local_noise = compute_local_noise(index, *clustering_, batch.sub_queries,
                                             chunk_memory, *gateway_, n_loops);

    timer.mark("restrictions");
    report.restriction_audit =
        score_implicit_planning(batch.actions, batch.sub_queries, *gateway_, config_.planning);

    timer.mark("retrieval_quality");
    report.retrieval = retrieval_quality(report.global_partition, index);

    if (config_.diagnostics_enabled) {
        timer.mark("diagnostics");
        report.severe_noise = flag_severe_noise(report.local_noise, index, trajectory.query,
                                                *gateway_, config_.impact_threshold,
                                                &report.flags);
        report.graph = build_propagation_graph(batch, report.ledger, report.judgments, n_loops,
                                               *gateway_, config_.propagation);
        if (!report.graph.is_acyclic()) {
            throw InternalInvariantError("propagation graph is not acyclic");
        }
        report.stage_profile = temporal_profile(report.graph, n_loops);
        auto timeline = assemble_timeline(batch, report.ledger, report.judgments,
                                          report.severe_noise, report.restriction_audit,
                                          n_loops);
        report.root_cause = detect_root_cause(trajectory, timeline, *gateway_);
        report.bias = semantic_bias_report(report.global_partition, report.local_noise, index,
                                           chunk_memory, n_loops);
    }

    timer.mark("scores");
    bool es_degenerate = false;
    report.h_es = score_explicit_summarization(report.ledger, &es_degenerate);
    report.h_is = report.global_noise.score;
    report.h_ep = report.action_audit.h_ep;
    report.h_ip = report.restriction_audit.h_ip;
    report.h = composite_score(report.h_es, report.h_is, report.h_ep, report.h_ip);

    if (es_degenerate) {
        report.flags.push_back({Flag::Kind::degenerate, "h_es.no_claims", ""});
    }
    if (report.action_audit.degenerate) {
        report.flags.push_back({Flag::Kind::degenerate, "h_ep.no_actions", ""});
    }
    if (report.restriction_audit.degenerate) {
        report.flags.push_back({Flag::Kind::degenerate, "h_ip.no_sub_queries", ""});
    }
    if (report.global_noise.degenerate) {
        report.flags.push_back({Flag::Kind::degenerate, "h_is.global_degenerate", ""});
    }
    for (const auto& entry : report.local_noise) {
        if (entry.has_retrieval && entry.breakdown.degenerate) {
            report.flags.push_back({Flag::Kind::degenerate, "h_is.local_degenerate",
                                    "loop " + std::to_string(entry.loop)});
        }
    }
    for (const auto& v : report.verdicts) {
        if (v.tooling_flag) {
            report.flags.push_back({Flag::Kind::tooling, "claim_verify.unparseable", v.claim_id});
        }
    }
    for (const auto& j : report.judgments) {
        if (j.tooling_flag) {
            report.flags.push_back({Flag::Kind::tooling, "action_verify.unparseable",
                                    j.action_id});
        }
        if (j.unknown_source_flag) {
            report.flags.push_back({Flag::Kind::tooling, "action_verify.unknown_source",
                                    j.action_id});
        }
    }
    if (report.root_cause.tooling_flag) {
        report.flags.push_back({Flag::Kind::tooling, "root_cause.unparseable", ""});
    }
    if (report.root_cause.rejected_invalid_step) {
        report.flags.push_back({Flag::Kind::tooling, "root_cause.invalid_step_rejected", ""});
    }

    if (!config_.index_dir.empty()) {
        timer.mark("index.save");
        index.save(std::filesystem::path(config_.index_dir) / trajectory.task_id);
    }
    timer.finish();

    manifest_.cache_hits = gateway_->stats().cache_hits.load();
    manifest_.cache_misses = gateway_->stats().cache_misses.load();
    manifest_.chat_calls = gateway_->stats().chat_calls.load();
    manifest_.embed_calls = gateway_->stats().embed_calls.load();
    manifest_.rerank_calls = gateway_->stats().rerank_calls.load();
    manifest_.nli_calls = gateway_->stats().nli_calls.load();
    return report;
}

HallucinationReport AuditRunner::run_file(const std::filesystem::path& trajectory_path) {
    Trajectory trajectory = load_trajectory(read_file_or_throw(trajectory_path));
    HallucinationReport report = run(trajectory);
    emit(report, config_.output_dir);
    return report;
}

void AuditRunner::emit(const HallucinationReport& report,
                       const std::filesystem::path& out_dir) const {
    std::filesystem::create_directories(out_dir);
    bool want_json = std::find(config_.formats.begin(), config_.formats.end(), "json") !=
                     config_.formats.end();
    bool want_md = std::find(config_.formats.begin(), config_.formats.end(), "md") !=
                   config_.formats.end();
    if (want_json) {
        write_file(out_dir / (report.task_id + ".report.json"), report_to_json(report));
    }
    if (want_md) {
        write_file(out_dir / (report.task_id + ".report.md"), report_to_markdown(report));
    }
    write_file(out_dir / (report.task_id + ".manifest.json"), manifest_.to_json());
    if (report.diagnostics_enabled) {
        write_file(out_dir / (report.task_id + ".graph.json"), graph_to_json(report.graph));
        write_file(out_dir / (report.task_id + ".graph.dot"), graph_to_dot(report.graph));
    }
}

std::string CorpusSummary::to_json() const {
    json out;
    out["report_count"] = report_count;
    out["means"] = means;
    out["by_domain"] = json::object();
    for (const auto& [domain, metrics] : by_domain) {
        out["by_domain"][domain] = {{"count", domain_counts.at(domain)}, {"means", metrics}};
    }
    out["flags"] = {{"degenerate", degenerate_flags}, {"tooling", tooling_flags}};
    return out.dump(2) + "\n";
}

CorpusSummary aggregate_corpus(const std::vector<std::filesystem::path>& report_paths) {
    if (report_paths.empty()) {
        throw FormatError("no report files to aggregate");
    }
    CorpusSummary summary;
    std::map<std::string, std::vector<ReportDigest>> grouped;
    std::vector<ReportDigest> digests;
    for (const auto& path : report_paths) {
        ReportDigest digest = digest_from_json(read_file_or_throw(path));
        std::string domain = digest.domain_tag.empty() ? "untagged" : digest.domain_tag;
        grouped[domain].push_back(digest);
        digests.push_back(digest);
        summary.degenerate_flags += digest.degenerate_flags;
        summary.tooling_flags += digest.tooling_flags;
    }
    summary.report_count = digests.size();

    auto mean_of = [](const std::vector<ReportDigest>& ds) {
        std::map<std::string, double> m = {{"h_es", 0}, {"h_is", 0}, {"h_ep", 0},
                                           {"h_ip", 0}, {"h", 0},    {"retrieval_quality", 0}};
        for (const auto& d : ds) {
            m["h_es"] += d.h_es;
            m["h_is"] += d.h_is;
            m["h_ep"] += d.h_ep;
            m["h_ip"] += d.h_ip;
            m["h"] += d.h;
            m["retrieval_quality"] += d.retrieval_quality;
        }
        for (auto& [k, v] : m) v /= static_cast<double>(ds.size());
        return m;
    };
    summary.means = mean_of(digests);
    for (const auto& [domain, ds] : grouped) {
        summary.by_domain[domain] = mean_of(ds);
        summary.domain_counts[domain] = ds.size();
    }
    return summary;
}

std::vector<std::filesystem::path> find_report_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    if (!std::filesystem::is_directory(dir)) return out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() > 12 && name.substr(name.size() - 12) == ".report.json") {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void emit_plot_data(const std::vector<std::filesystem::path>& report_paths,
                    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::ostringstream metrics;
    metrics << "task_id,domain,h_es,h_is,h_ep,h_ip,h,retrieval_quality\n";
    std::ostringstream stages;
    stages << "task_id,distribution,stage,value\n";
    std::ostringstream scatter;
    scatter << "task_id,loop,cluster_count,noise_score\n";

    std::vector<std::filesystem::path> sorted = report_paths;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& path : sorted) {
        json doc = json::parse(read_file_or_throw(path), nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) continue;
        std::string task = doc.value("task_id", "");
        std::string domain = doc.value("domain", "");
        if (domain.empty()) domain = "untagged";
        const json& s = doc["scores"];
        metrics << task << "," << domain << "," << csv_number(s.value("h_es", 0.0)) << ","
                << csv_number(s.value("h_is", 0.0)) << "," << csv_number(s.value("h_ep", 0.0))
                << "," << csv_number(s.value("h_ip", 0.0)) << "," << csv_number(s.value("h", 0.0))
                << ","
                << csv_number(doc.contains("retrieval_quality")
                                  ? doc["retrieval_quality"].value("task_mean", 0.0)
                                  : 0.0)
                << "\n";

        if (doc.contains("diagnostics") && doc["diagnostics"].contains("stage_profile")) {
            const json& profile = doc["diagnostics"]["stage_profile"];
            for (const char* dist : {"src", "desc", "hallu"}) {
                for (const char* stage : {"early", "middle", "late"}) {
                    if (profile.contains(stage)) {
                        stages << task << "," << dist << "," << stage << ","
                               << csv_number(profile[stage].value(dist, 0.0)) << "\n";
                    }
                }
            }
        }
        if (doc.contains("noise") && doc["noise"].contains("local")) {
            for (const auto& local : doc["noise"]["local"]) {
                if (!local.value("retrieval", false)) continue;
                scatter << task << "," << local.value("loop", 0) << ","
                        << local.value("cluster_count", 0) << ","
                        << csv_number(local["breakdown"].value("score", 0.0)) << "\n";
            }
        }
    }

    write_file(out_dir / "metrics.csv", metrics.str());
    write_file(out_dir / "stage_profile.csv", stages.str());
    write_file(out_dir / "bias_scatter.csv", scatter.str());
}

}  // namespace halluaudit
