#include "halluaudit/mock_backends.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "halluaudit/hash.hpp"
#include "halluaudit/text.hpp"

namespace halluaudit::mock {

using nlohmann::json;

namespace {

const std::unordered_set<std::string>& imperative_verbs() {
    static const std::unordered_set<std::string> kVerbs = {
        "search",     "find",    "identify", "compare",  "analyze",  "check",
        "verify",     "investigate", "look", "examine",  "gather",   "collect",
        "review",     "explore", "determine", "confirm", "locate",   "query",
        "browse",     "fetch",   "download", "extract",  "compile",  "summarize",
        "cross",      "consult", "visit",    "scan",     "retrieve", "research",
        "run",        "list",    "filter",   "read",
    };
    return kVerbs;
}

const std::unordered_set<std::string>& connective_stopwords() {
    static const std::unordered_set<std::string> kStop = {
        "for", "the", "a", "an", "of", "in", "on", "to", "about",
        "more", "with", "and", "or", "at", "by", "from", "into", "further",
    };
    return kStop;
}

std::string first_token(const std::string& s) {
    auto toks = text::tokenize(s);
    return toks.empty() ? std::string{} : toks.front();
}

// Tokens that carry the action's content: leading imperative verb and
// connectives removed, deduplicated.
std::vector<std::string> action_content_tokens(const std::string& action) {
    auto toks = text::tokenize(action);
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i == 0 && imperative_verbs().count(toks[i])) continue;
        if (connective_stopwords().count(toks[i])) continue;
        if (seen.insert(toks[i]).second) out.push_back(toks[i]);
    }
    return out;
}

double coverage(const std::vector<std::string>& needles, const std::string& haystack) {
    if (needles.empty()) return 0.0;
    auto hs = text::tokenize(haystack);
    std::unordered_set<std::string> set(hs.begin(), hs.end());
    std::size_t hit = 0;
    for (const auto& n : needles) {
        if (set.count(n)) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(needles.size());
}

// "[i] text" lines -> ordered list of texts (index position = i).
std::vector<std::string> parse_indexed_lines(const std::string& block) {
    std::vector<std::string> out;
    std::istringstream in(block);
    std::string line;
    while (std::getline(in, line)) {
        line = text::trim(line);
        if (line.size() < 3 || line[0] != '[') continue;
        auto close = line.find(']');
        if (close == std::string::npos) continue;
        out.push_back(text::trim(line.substr(close + 1)));
    }
    return out;
}

std::string format_float(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string strip_bracket_markers(const std::string& s) {
    std::string cleaned;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '[') {
            auto close = s.find(']', i);
            bool numeric = close != std::string::npos && close > i + 1;
            for (std::size_t k = i + 1; numeric && k < close; ++k) {
                numeric = std::isdigit(static_cast<unsigned char>(s[k])) != 0;
            }
            if (numeric) {
                i = close;
                continue;
            }
        }
        cleaned.push_back(s[i]);
    }
    return text::trim(cleaned);
}

bool is_url_only(const std::string& sentence) {
    auto t = text::trim(sentence);
    return t.rfind("http://", 0) == 0 || t.rfind("https://", 0) == 0;
}

}  // namespace

bool is_speculative(const std::string& sentence) {
    static const std::unordered_set<std::string> kSpeculative = {
        "may", "might", "could", "possibly", "likely", "appears", "seems", "perhaps",
    };
    for (const auto& tok : text::tokenize(sentence)) {
        if (kSpeculative.count(tok)) return true;
    }
    return false;
}

bool looks_imperative(const std::string& sentence) {
    auto trimmed = text::trim(sentence);
    auto lower = text::to_lower(trimmed);
    if (lower.rfind("i will ", 0) == 0 || lower.rfind("i need to ", 0) == 0 ||
        lower.rfind("the agent will ", 0) == 0 || lower.rfind("next, ", 0) == 0 ||
        lower.rfind("next ", 0) == 0 || lower.rfind("then ", 0) == 0) {
        return true;
    }
    return imperative_verbs().count(first_token(trimmed)) > 0;
}

std::string to_imperative(const std::string& sentence) {
    std::string s = text::trim(sentence);
    while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.pop_back();
    static const std::vector<std::string> kLeadIns = {
        "i will ", "i need to ", "the agent will ", "next, ", "next ", "then ",
    };
    bool stripped = true;
    while (stripped) {
        stripped = false;
        std::string lower = text::to_lower(s);
        for (const auto& lead : kLeadIns) {
            if (lower.rfind(lead, 0) == 0) {
                s = text::trim(s.substr(lead.size()));
                stripped = true;
                break;
            }
        }
    }
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

HashingEmbedBackend::HashingEmbedBackend(std::size_t dimension) : dimension_(dimension) {}

std::vector<EmbeddingVector> HashingEmbedBackend::embed(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        std::vector<float> v(dimension_, 0.0f);
        for (const auto& tok : text::tokenize(t)) {
            std::uint64_t h = hash::fnv1a64(tok);
            std::size_t slot = h % dimension_;
            float sign = ((h >> 32) & 1) ? 1.0f : -1.0f;
            v[slot] += sign;
        }
        double norm = 0.0;
        for (float x : v) norm += double(x) * x;
        if (norm > 0.0) {
            float inv = static_cast<float>(1.0 / std::sqrt(norm));
            for (float& x : v) x *= inv;
        }
        out.push_back({std::move(v)});
    }
    return out;
}

std::vector<double> OverlapRerankBackend::rerank(const std::string& query,
                                                 const std::vector<std::string>& passages) {
    std::vector<double> out;
    out.reserve(passages.size());
    for (const auto& p : passages) {
        out.push_back(text::token_overlap_min(query, p));
    }
    return out;
}

NliVerdict ContainmentNliBackend::classify(const std::string& premise,
                                           const std::string& hypothesis) {
    double contained = text::token_containment(hypothesis, premise);
    if (contained >= 1.0) {
        return {0.999, 0.0005, 0.0005};
    }
    double entail = 0.5 * contained;
    return {entail, 0.1, 0.9 - entail};
}

std::string HeuristicChatBackend::complete(const ChatRequest& request) {
    const std::string& id = request.template_id;
    if (id == "query_decompose") return decompose_query(request);
    if (id == "reasoning_decompose") return decompose_reasoning(request);
    if (id == "report_decompose") return decompose_report(request);
    if (id == "claim_refine") return refine_units(request, false);
    if (id == "action_refine") return refine_units(request, true);
    if (id == "claim_verify") return verify_claim(request);
    if (id == "action_verify") return verify_action(request);
    if (id == "noise_impact") return noise_impact(request);
    if (id == "root_cause") return root_cause(request);
    return "No extractable content - unrecognized template.";
}

std::string HeuristicChatBackend::decompose_query(const ChatRequest& request) const {
    const std::string& query = request.variables.at("query");
    std::vector<std::string> parts;
    std::string cur;
    for (char c : query) {
        if (c == ';') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    std::ostringstream out;
    for (auto& p : parts) {
        std::string t = text::trim(p);
        while (!t.empty() && (t.back() == '.' || t.back() == '?')) t.pop_back();
        if (!t.empty()) out << "- " << t << "\n";
    }
    return out.str();
}

std::string HeuristicChatBackend::decompose_reasoning(const ChatRequest& request) const {
    const std::string& paragraph = request.variables.at("paragraph");
    std::ostringstream out;
    int fragment = 0;
    for (const auto& sentence : text::split_sentences(paragraph)) {
        if (is_speculative(sentence) || is_url_only(sentence)) continue;
        bool plan = looks_imperative(sentence);
        ++fragment;
        out << "Fragment " << fragment << ": " << sentence << "\n";
        out << "Classification: " << (plan ? "plan" : "summary") << "\n";
        out << (plan ? "Atomic Actions:" : "Atomic Claims:") << "\n";
        if (plan) {
            out << "- " << to_imperative(sentence) << "\n";
        } else {
            std::string claim = text::trim(sentence);
            while (!claim.empty() && claim.back() == '.') claim.pop_back();
            out << "- " << strip_bracket_markers(claim) << "\n";
        }
    }
    if (fragment == 0) {
        return "No extractable content - paragraph contains only vague descriptions or "
               "speculative language.";
    }
    return out.str();
}

std::string HeuristicChatBackend::decompose_report(const ChatRequest& request) const {
    const std::string& paragraph = request.variables.at("paragraph");
    std::ostringstream out;
    bool any = false;
    for (const auto& sentence : text::split_sentences(paragraph)) {
        if (is_speculative(sentence) || is_url_only(sentence)) continue;
        std::string claim = text::trim(sentence);
        while (!claim.empty() && claim.back() == '.') claim.pop_back();
        std::string cleaned = strip_bracket_markers(claim);
        if (cleaned.empty()) continue;
        out << "- " << cleaned << "\n";
        any = true;
    }
    if (!any) {
        return "No extractable content - paragraph contains only vague descriptions or "
               "speculative language.";
    }
    return out.str();
}

std::string HeuristicChatBackend::refine_units(const ChatRequest& request, bool actions) const {
    const std::string& units = request.variables.at("units");
    std::ostringstream out;
    std::istringstream in(units);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = text::trim(line);
        if (t.rfind("- ", 0) != 0) continue;
        std::string unit = text::trim(t.substr(2));
        if (unit.empty()) continue;
        if (actions && !looks_imperative(unit)) continue;  // facts are not actions
        out << "- " << (actions ? to_imperative(unit) : unit) << "\n";
    }
    return out.str();
}

std::string HeuristicChatBackend::verify_claim(const ChatRequest& request) const {
    const std::string& claim = request.variables.at("claim");
    const std::string& chunk = request.variables.at("chunk");
    bool support = text::token_containment(claim, chunk) >= 1.0;
    json reply = {
        {"judgment", support ? "Support" : "Unsupport"},
        {"evidence", support ? "Every element of the claim appears in the chunk."
                             : "The chunk lacks details required by the claim."},
        {"confidence", support ? 0.97 : 0.9},
    };
    return reply.dump();
}

std::string HeuristicChatBackend::verify_action(const ChatRequest& request) const {
    const std::string& query = request.variables.at("query");
    const std::string& action = request.variables.at("action");
    std::vector<std::string> claims = parse_indexed_lines(request.variables.at("claims_context"));

    auto content = action_content_tokens(action);
    double best = -1.0;
    int best_index = -1;
    for (std::size_t i = 0; i < claims.size(); ++i) {
        double c = coverage(content, claims[i]);
        if (c > best) {
            best = c;
            best_index = static_cast<int>(i);
        }
    }
    double query_cov = coverage(content, query);

    json reply;
    if (best >= 1.0 && !content.empty()) {
        reply = {{"label", "Unsupport"},
                 {"source", best_index},
                 {"type", "redundancy"},
                 {"confidence", 0.95},
                 {"explanation", "A previous claim already documents these results."}};
    } else if (query_cov == 0.0 && (best < 0.5 || claims.empty())) {
        reply = {{"label", "Unsupport"},
                 {"source", -1},
                 {"type", "deviation"},
                 {"confidence", 0.9},
                 {"explanation", "The action is unrelated to the user query."}};
    } else {
        int source = (best >= 0.5 && best_index >= 0) ? best_index : -1;
        reply = {{"label", "Support"},
                 {"source", source},
                 {"type", nullptr},
                 {"confidence", 0.88},
                 {"explanation", source >= 0 ? "Builds on a specific prior finding."
                                             : "Advances the user query."}};
    }
    return reply.dump();
}

std::string HeuristicChatBackend::noise_impact(const ChatRequest& request) const {
    const std::string& query = request.variables.at("query");
    const std::string& chunk = request.variables.at("chunk_text");
    double impact = text::token_overlap_min(chunk, query);
    std::ostringstream out;
    out << "Summary: The chunk carries signal overlapping the query terms.\n";
    out << "Impact: Omitting it removes " << format_float(impact)
        << " of the query vocabulary from the evidence base.\n";
    out << "ImpactScore: " << format_float(impact) << "\n";
    return out.str();
}

std::string HeuristicChatBackend::root_cause(const ChatRequest& request) const {
    const std::string& timeline = request.variables.at("hallucination_timeline");
    // Timeline lines look like: "step=N module=<m> detail=...".
    struct Entry {
        int step;
        std::string module;
        std::string detail;
    };
    std::vector<Entry> entries;
    std::istringstream in(timeline);
    std::string line;
    while (std::getline(in, line)) {
        auto spos = line.find("step=");
        auto mpos = line.find("module=");
        if (spos == std::string::npos || mpos == std::string::npos) continue;
        Entry e;
        e.step = std::atoi(line.c_str() + spos + 5);
        std::string rest = line.substr(mpos + 7);
        auto space = rest.find(' ');
        e.module = rest.substr(0, space);
        auto dpos = line.find("detail=");
        e.detail = dpos == std::string::npos ? "" : line.substr(dpos + 7);
        entries.push_back(std::move(e));
    }
    json reply;
    if (entries.empty()) {
        reply = {{"critical_step", -1},
                 {"critical_module", "none"},
                 {"root_cause", "No hallucination has strong linkage to the final failure."},
                 {"cascading_effects", json::array()}};
        return reply.dump();
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.step < b.step; });
    const Entry& root = entries.front();
    json effects = json::array();
    for (std::size_t i = 1; i < entries.size(); ++i) {
        effects.push_back({{"step", entries[i].step},
                           {"impact", entries[i].module + ": " + entries[i].detail}});
    }
    reply = {{"critical_step", root.step},
             {"critical_module", root.module},
             {"root_cause", root.detail.empty() ? "Earliest uncorrected error in the chain."
                                                : root.detail},
             {"cascading_effects", effects}};
    return reply.dump();
}

void ScriptedChatBackend::enqueue(const std::string& template_id, std::string reply) {
    std::lock_guard lock(mutex_);
    queues_[template_id].push_back(std::move(reply));
}

void ScriptedChatBackend::set_default(const std::string& template_id, std::string reply) {
    std::lock_guard lock(mutex_);
    defaults_[template_id] = std::move(reply);
}

std::string ScriptedChatBackend::complete(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    auto it = queues_.find(request.template_id);
    if (it != queues_.end() && !it->second.empty()) {
        std::string reply = std::move(it->second.front());
        it->second.pop_front();
        return reply;
    }
    auto dit = defaults_.find(request.template_id);
    if (dit != defaults_.end()) return dit->second;
    throw TransportError("scripted chat backend has no reply for template '" +
                         request.template_id + "'");
}

MockBackendSet make_default_mocks() {
    return {std::make_shared<HeuristicChatBackend>(),
            std::make_shared<HashingEmbedBackend>(),
            std::make_shared<OverlapRerankBackend>(),
            std::make_shared<ContainmentNliBackend>()};
}

}  // namespace halluaudit::mock
