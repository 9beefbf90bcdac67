#include "halluaudit/bench_verify.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

namespace halluaudit {

using nlohmann::json;

std::vector<LabeledClaim> load_labeled_claims(const std::filesystem::path& jsonl,
                                              std::string* corpus_ref) {
    std::ifstream in(jsonl);
    if (!in) throw FormatError("cannot open fixture file " + jsonl.string());
    std::vector<LabeledClaim> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object()) {
            throw FormatError("fixture line " + std::to_string(lineno) + " is not a JSON object");
        }
        LabeledClaim claim;
        if (!row.contains("claim") || !row.contains("gold_label")) {
            throw FormatError("fixture line " + std::to_string(lineno) +
                              " lacks claim/gold_label");
        }
        claim.claim = row["claim"].get<std::string>();
        std::string label = row["gold_label"].get<std::string>();
        if (label == "supported") claim.gold_supported = true;
        else if (label == "unsupported") claim.gold_supported = false;
        else throw FormatError("fixture line " + std::to_string(lineno) +
                               " has unknown gold_label '" + label + "'");
        if (row.contains("gold_evidence_doc_ids")) {
            claim.gold_evidence_doc_ids =
                row["gold_evidence_doc_ids"].get<std::vector<std::string>>();
        }
        if (corpus_ref && row.contains("corpus_ref")) {
            *corpus_ref = row["corpus_ref"].get<std::string>();
        }
        out.push_back(std::move(claim));
    }
    return out;
}

std::vector<BenchCorpusDoc> load_bench_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw FormatError("corpus directory not found: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<BenchCorpusDoc> out;
    for (const auto& file : files) {
        std::ifstream in(file);
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.contains("doc_id") || !doc.contains("text")) {
            throw FormatError("malformed corpus file " + file.string());
        }
        out.push_back({doc["doc_id"].get<std::string>(), doc["text"].get<std::string>()});
    }
    return out;
}

ValidationMetrics benchmark_verification(const std::vector<LabeledClaim>& claims,
                                         const std::vector<BenchCorpusDoc>& corpus,
                                         const RetrievalConfig& cfg, Gateway& gateway) {
    std::vector<EvidenceChunk> chunks;
    std::set<std::string> scope;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        RetrievedDocument doc;
        doc.url = corpus[d].doc_id;
        doc.content = corpus[d].text;
        doc.loop_index = 1;
        auto doc_chunks = chunk_document(doc, cfg, "d" + std::to_string(d));
        chunks.insert(chunks.end(), doc_chunks.begin(), doc_chunks.end());
        scope.insert(doc.url);
    }
    ChunkIndex index;
    index.build(std::move(chunks), gateway);
    ClaimVerifier verifier(gateway, index, cfg, "");

    ValidationMetrics metrics;
    metrics.claim_count = claims.size();
    std::size_t label_hits = 0;
    std::size_t strict_hits = 0;
    std::size_t gold_supported = 0;
    std::size_t gold_supported_retrieved = 0;

    for (std::size_t i = 0; i < claims.size(); ++i) {
        const LabeledClaim& gold = claims[i];
        AtomicClaim unit;
        unit.id = "bench:" + std::to_string(i);
        unit.text = gold.claim;
        unit.kind = ClaimKind::intermediate;
        unit.loop_index = 1;

        RankedEvidence evidence = retrieve_evidence(unit, index, scope, cfg, gateway);
        auto round1 = verifier.verify_round1(unit, evidence);

        std::set<std::string> gold_docs(gold.gold_evidence_doc_ids.begin(),
                                        gold.gold_evidence_doc_ids.end());
        auto doc_of = [&](const std::string& chunk_id) {
            const EvidenceChunk* c = index.find(chunk_id);
            return c == nullptr ? std::string{} : c->doc_url;
        };

        bool label_correct = round1.supported == gold.gold_supported;
        if (label_correct) ++label_hits;

        bool evidence_hit = false;
        for (const auto& id : round1.evidence) {
            if (gold_docs.count(doc_of(id))) evidence_hit = true;
        }
        // Unsupported gold claims carry no evidence requirement.
        if (label_correct && (gold_docs.empty() || evidence_hit)) ++strict_hits;

        if (gold.gold_supported) {
            ++gold_supported;
            bool retrieved = false;
            for (const auto& candidate : evidence.candidates) {
                if (gold_docs.count(doc_of(candidate.chunk_id))) retrieved = true;
            }
            if (retrieved) ++gold_supported_retrieved;
        }
    }

    if (!claims.empty()) {
        metrics.label_accuracy = static_cast<double>(label_hits) / claims.size();
        metrics.strict_accuracy = static_cast<double>(strict_hits) / claims.size();
    }
    metrics.evidence_recall =
        gold_supported == 0
            ? 0.0
            : static_cast<double>(gold_supported_retrieved) / gold_supported;
    return metrics;
}

}  // namespace halluaudit
