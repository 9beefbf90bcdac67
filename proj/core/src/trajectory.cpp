#include "halluaudit/trajectory.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include <json.hpp>

#include "halluaudit/text.hpp"

namespace halluaudit {

using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "1";

json require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError("missing required field '" + std::string(key) + "' in " + where);
    }
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    json v = require(obj, key, where);
    if (!v.is_string()) {
        throw SchemaError("field '" + std::string(key) + "' must be a string in " + where);
    }
    return v.get<std::string>();
}

bool looks_like_url(const std::string& token) {
    return token.rfind("http://", 0) == 0 || token.rfind("https://", 0) == 0;
}

std::string strip_trailing_punct(std::string token) {
    while (!token.empty()) {
        char c = token.back();
        if (c == '.' || c == ',' || c == ';' || c == ')' || c == ']' || c == '"' ||
            c == '\'' || c == '!' || c == '?') {
            token.pop_back();
        } else {
            break;
        }
    }
    return token;
}

}  // namespace

std::string to_string(ValidationIssue::Kind kind) {
    switch (kind) {
        case ValidationIssue::Kind::citation_dangling: return "citation_dangling";
        case ValidationIssue::Kind::empty_content: return "empty_content";
        case ValidationIssue::Kind::empty_plan_and_summary: return "empty_plan_and_summary";
    }
    return "unknown";
}

std::vector<std::string> Trajectory::document_urls() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& loop : loops) {
        for (const auto& rec : loop.searches) {
            for (const auto& doc : rec.documents) {
                if (seen.insert(doc.url).second) out.push_back(doc.url);
            }
        }
    }
    return out;
}

std::set<std::string> Trajectory::urls_through_loop(int max_loop) const {
    std::set<std::string> out;
    for (const auto& loop : loops) {
        if (loop.index > max_loop) continue;
        for (const auto& rec : loop.searches) {
            for (const auto& doc : rec.documents) out.insert(doc.url);
        }
    }
    return out;
}

const RetrievedDocument* Trajectory::find_document(const std::string& url) const {
    for (const auto& loop : loops) {
        for (const auto& rec : loop.searches) {
            for (const auto& doc : rec.documents) {
                if (doc.url == url) return &doc;
            }
        }
    }
    return nullptr;
}

Trajectory load_trajectory(const std::string& bytes) {
    json root = json::parse(bytes, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw SchemaError("trajectory file is not a JSON object");
    }
    std::string version = require_string(root, "schema_version", "trajectory");
    if (version != kSchemaVersion) {
        throw SchemaError("unsupported schema_version '" + version + "'");
    }

    Trajectory t;
    t.task_id = require_string(root, "task_id", "trajectory");
    t.query = require_string(root, "query", "trajectory");
    if (root.contains("domain") && root["domain"].is_string()) {
        t.domain_tag = root["domain"].get<std::string>();
    }

    json loops = require(root, "loops", "trajectory");
    if (!loops.is_array()) throw SchemaError("'loops' must be an array");
    if (loops.empty()) throw EmptyTrajectoryError();

    int expected_index = 1;
    for (const auto& jl : loops) {
        std::string where = "loop " + std::to_string(expected_index);
        ResearchLoop loop;
        json idx = require(jl, "index", where);
        if (!idx.is_number_integer()) throw SchemaError("loop index must be an integer");
        loop.index = idx.get<int>();
        if (loop.index != expected_index) {
            throw SchemaError("loop indices must be contiguous from 1; saw " +
                              std::to_string(loop.index) + " where " +
                              std::to_string(expected_index) + " was expected");
        }
        loop.plan_text = require_string(jl, "plan_text", where);
        loop.summary_text = require_string(jl, "summary_text", where);

        json searches = require(jl, "searches", where);
        if (!searches.is_array()) throw SchemaError("'searches' must be an array in " + where);
        for (const auto& js : searches) {
            SearchRecord rec;
            rec.query_string = require_string(js, "query_string", where);
            json docs = require(js, "documents", where);
            if (!docs.is_array()) throw SchemaError("'documents' must be an array in " + where);
            std::unordered_set<std::string> urls_in_record;
            for (const auto& jd : docs) {
                RetrievedDocument doc;
                doc.url = require_string(jd, "url", where);
                if (doc.url.empty()) throw SchemaError("document url must be nonempty in " + where);
                if (!urls_in_record.insert(doc.url).second) continue;  // first occurrence wins
                doc.title = jd.value("title", std::string{});
                doc.content = jd.value("content", std::string{});
                doc.loop_index = loop.index;
                rec.documents.push_back(std::move(doc));
            }
            loop.searches.push_back(std::move(rec));
        }
        t.loops.push_back(std::move(loop));
        ++expected_index;
    }

    json report = require(root, "final_report", "trajectory");
    json paragraphs = require(report, "paragraphs", "final_report");
    if (!paragraphs.is_array()) throw SchemaError("'paragraphs' must be an array");
    for (const auto& p : paragraphs) {
        if (!p.is_string()) throw SchemaError("report paragraphs must be strings");
        t.final_report.paragraphs.push_back(p.get<std::string>());
    }
    json citations = require(report, "citations", "final_report");
    if (!citations.is_object()) throw SchemaError("'citations' must be an object");
    for (auto it = citations.begin(); it != citations.end(); ++it) {
        if (!it.value().is_string()) throw SchemaError("citation values must be url strings");
        t.final_report.citations[it.key()] = it.value().get<std::string>();
    }
    return t;
}

std::string serialize_trajectory(const Trajectory& t) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["task_id"] = t.task_id;
    root["query"] = t.query;
    if (!t.domain_tag.empty()) root["domain"] = t.domain_tag;
    root["loops"] = json::array();
    for (const auto& loop : t.loops) {
        json jl;
        jl["index"] = loop.index;
        jl["plan_text"] = loop.plan_text;
        jl["summary_text"] = loop.summary_text;
        jl["searches"] = json::array();
        for (const auto& rec : loop.searches) {
            json js;
            js["query_string"] = rec.query_string;
            js["documents"] = json::array();
            for (const auto& doc : rec.documents) {
                js["documents"].push_back(
                    {{"url", doc.url}, {"title", doc.title}, {"content", doc.content}});
            }
            jl["searches"].push_back(std::move(js));
        }
        root["loops"].push_back(std::move(jl));
    }
    json report;
    report["paragraphs"] = t.final_report.paragraphs;
    report["citations"] = json::object();
    for (const auto& [marker, url] : t.final_report.citations) {
        report["citations"][marker] = url;
    }
    root["final_report"] = std::move(report);
    return root.dump(2) + "\n";
}

std::vector<std::string> extract_citation_markers(const std::string& paragraph) {
    std::vector<std::string> out;
    const std::string& s = paragraph;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '[') {
            std::size_t j = i + 1;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && s[j] == ']' && j > i + 1) {
                out.push_back(s.substr(i, j - i + 1));
                i = j;
            }
        } else if (s[i] == 'h' && (s.compare(i, 7, "http://") == 0 ||
                                   s.compare(i, 8, "https://") == 0)) {
            std::size_t j = i;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
            std::string token = strip_trailing_punct(s.substr(i, j - i));
            if (looks_like_url(token)) out.push_back(token);
            i = j;
        }
    }
    return out;
}

CitationMap canonicalize_citations(const FinalReport& report,
                                   const std::set<std::string>& document_urls,
                                   std::vector<std::string>* dangling) {
    CitationMap out;
    std::vector<std::string> missing;
    for (const auto& paragraph : report.paragraphs) {
        for (const auto& marker : extract_citation_markers(paragraph)) {
            if (out.count(marker)) continue;
            auto it = report.citations.find(marker);
            if (it != report.citations.end() && document_urls.count(it->second)) {
                out[marker] = it->second;
                continue;
            }
            if (looks_like_url(marker) && document_urls.count(marker)) {
                out[marker] = marker;
                continue;
            }
            missing.push_back(marker);
        }
    }
    if (dangling) *dangling = std::move(missing);
    return out;
}

std::vector<ValidationIssue> validate_trajectory(const Trajectory& t) {
    std::vector<ValidationIssue> issues;
    std::set<std::string> urls;
    for (const auto& u : t.document_urls()) urls.insert(u);

    for (const auto& loop : t.loops) {
        if (text::trim(loop.plan_text).empty() && text::trim(loop.summary_text).empty()) {
            issues.push_back({ValidationIssue::Kind::empty_plan_and_summary, "", loop.index});
        }
        for (const auto& rec : loop.searches) {
            for (const auto& doc : rec.documents) {
                if (doc.content.empty()) {
                    issues.push_back({ValidationIssue::Kind::empty_content, doc.url, loop.index});
                }
            }
        }
    }

    std::vector<std::string> dangling;
    canonicalize_citations(t.final_report, urls, &dangling);
    for (const auto& marker : dangling) {
        issues.push_back({ValidationIssue::Kind::citation_dangling, marker, 0});
    }
    return issues;
}

std::string to_string(Flag::Kind kind) {
    switch (kind) {
        case Flag::Kind::degenerate: return "degenerate";
        case Flag::Kind::tooling: return "tooling";
    }
    return "unknown";
}

}  // namespace halluaudit
