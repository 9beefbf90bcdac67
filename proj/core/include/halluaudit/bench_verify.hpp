#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "halluaudit/claim_verifier.hpp"
#include "halluaudit/evidence.hpp"

namespace halluaudit {

struct LabeledClaim {
    std::string claim;
    bool gold_supported = false;
    std::vector<std::string> gold_evidence_doc_ids;
};

struct ValidationMetrics {
    double label_accuracy = 0.0;
    double strict_accuracy = 0.0;   // label correct and evidence intersects gold
    double evidence_recall = 0.0;   // gold-supported claims with gold evidence retrieved
    std::size_t claim_count = 0;
};

struct BenchCorpusDoc {
    std::string doc_id;
    std::string text;
};

// JSON-lines fixture: {"claim":..., "gold_label":"supported"|"unsupported",
// "gold_evidence_doc_ids":[...], "corpus_ref":...}. Throws FormatError on
// malformed lines.
std::vector<LabeledClaim> load_labeled_claims(const std::filesystem::path& jsonl,
                                              std::string* corpus_ref = nullptr);

// Corpus directory of JSON files, each {"doc_id":..., "text":...}.
std::vector<BenchCorpusDoc> load_bench_corpus(const std::filesystem::path& dir);

// Runs the Round-1 retrieve-then-verify pipeline over a labeled fixture set
// and scores it against the gold annotations.
ValidationMetrics benchmark_verification(const std::vector<LabeledClaim>& claims,
                                         const std::vector<BenchCorpusDoc>& corpus,
                                         const RetrievalConfig& cfg, Gateway& gateway);

}  // namespace halluaudit
