#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "halluaudit/errors.hpp"

namespace halluaudit {

struct RetrievedDocument {
    std::string url;
    std::string title;
    std::string content;  // empty on fetch failure; excluded from chunking
    int loop_index = 0;   // retrieval round
};

struct SearchRecord {
    std::string query_string;
    std::vector<RetrievedDocument> documents;  // deduplicated by url
};

struct ResearchLoop {
    int index = 0;  // 1-based, contiguous
    std::string plan_text;
    std::vector<SearchRecord> searches;
    std::string summary_text;
};

// marker ("[n]" or a bare url token) -> document url
using CitationMap = std::map<std::string, std::string>;

struct FinalReport {
    std::vector<std::string> paragraphs;
    CitationMap citations;
};

struct Trajectory {
    std::string task_id;
    std::string query;
    std::string domain_tag;  // optional category label
    std::vector<ResearchLoop> loops;
    FinalReport final_report;

    // urls of every retrieved document, in retrieval order, deduplicated
    std::vector<std::string> document_urls() const;
    // urls retrieved in loops <= max_loop
    std::set<std::string> urls_through_loop(int max_loop) const;
    const RetrievedDocument* find_document(const std::string& url) const;
};

struct ValidationIssue {
    enum class Kind { citation_dangling, empty_content, empty_plan_and_summary };
    Kind kind;
    std::string detail;  // marker / url
    int loop_index = 0;  // 0 when not loop-specific

    bool operator==(const ValidationIssue&) const = default;
};

std::string to_string(ValidationIssue::Kind kind);

// Parses and validates the canonical trajectory JSON. Throws SchemaError on
// structural problems (missing fields, non-contiguous loop indices) and
// EmptyTrajectoryError when loops is empty. Dangling citations are not
// fatal; they surface through validate_trajectory.
Trajectory load_trajectory(const std::string& bytes);

// Canonical serialization: load(serialize(t)) == t and serialize(load(x))
// is byte-identical for inputs already in canonical form.
std::string serialize_trajectory(const Trajectory& t);

std::vector<ValidationIssue> validate_trajectory(const Trajectory& t);

// Maps every bracketed numeric marker and every bare url token appearing in
// the report paragraphs to a retrieved document url. Markers that resolve to
// nothing are returned in `dangling`.
CitationMap canonicalize_citations(const FinalReport& report,
                                   const std::set<std::string>& document_urls,
                                   std::vector<std::string>* dangling = nullptr);

// Citation markers found in one paragraph, in order of appearance.
std::vector<std::string> extract_citation_markers(const std::string& paragraph);

}  // namespace halluaudit
