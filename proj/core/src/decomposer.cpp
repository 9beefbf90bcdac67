#include "halluaudit/decomposer.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "halluaudit/text.hpp"

namespace halluaudit {

namespace {

// The refine prompts take the preliminary units as a dash list.
std::string to_dash_block(const std::vector<std::string>& units) {
    std::ostringstream out;
    for (const auto& u : units) out << "- " << u << "\n";
    return out.str();
}

struct FragmentItems {
    std::vector<std::string> claims;
    std::vector<std::string> actions;
};

// Parses the reasoning_decompose output format: fragment blocks with a
// Classification line followed by an "Atomic Claims:"/"Atomic Actions:" list.
FragmentItems parse_fragments(const std::string& reply) {
    FragmentItems out;
    std::istringstream in(reply);
    std::string line;
    enum class Section { none, claims, actions } section = Section::none;
    while (std::getline(in, line)) {
        std::string t = text::trim(line);
        if (t.rfind("Atomic Claims", 0) == 0) {
            section = Section::claims;
            continue;
        }
        if (t.rfind("Atomic Actions", 0) == 0) {
            section = Section::actions;
            continue;
        }
        if (t.rfind("Fragment", 0) == 0 || t.rfind("Classification", 0) == 0) {
            section = Section::none;
            continue;
        }
        if (t.rfind("- ", 0) == 0) {
            std::string item = text::trim(t.substr(2));
            if (item.empty()) continue;
            if (section == Section::claims) out.claims.push_back(std::move(item));
            else if (section == Section::actions) out.actions.push_back(std::move(item));
        }
    }
    return out;
}

}  // namespace

std::string make_unit_id(const std::string& task_id, int loop_index, int paragraph_index,
                         char kind, int seq) {
    std::string scope = loop_index > 0 ? "loop" + std::to_string(loop_index) : "report";
    return task_id + ":" + scope + ":p" + std::to_string(paragraph_index) + ":" + kind +
           std::to_string(seq);
}

bool is_no_content_reply(const std::string& reply) {
    return text::to_lower(text::trim(reply)).rfind("no extractable content", 0) == 0;
}

std::vector<std::string> parse_dash_lines(const std::string& reply, bool require_items) {
    std::vector<std::string> out;
    std::istringstream in(reply);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = text::trim(line);
        if (t.rfind("- ", 0) == 0) {
            std::string item = text::trim(t.substr(2));
            if (!item.empty()) out.push_back(std::move(item));
        }
    }
    if (out.empty() && require_items) {
        throw ModelFormatError("reply contains no '- ' item lines");
    }
    return out;
}

std::vector<const AtomicClaim*> DecompositionBatch::claims_in_loop(int loop) const {
    std::vector<const AtomicClaim*> out;
    for (const auto& c : claims) {
        if (c.kind == ClaimKind::intermediate && c.loop_index == loop) out.push_back(&c);
    }
    return out;
}

std::vector<const AtomicAction*> DecompositionBatch::actions_in_loop(int loop) const {
    std::vector<const AtomicAction*> out;
    for (const auto& a : actions) {
        if (a.loop_index == loop) out.push_back(&a);
    }
    return out;
}

std::vector<const AtomicClaim*> DecompositionBatch::report_claims() const {
    std::vector<const AtomicClaim*> out;
    for (const auto& c : claims) {
        if (c.kind == ClaimKind::report) out.push_back(&c);
    }
    return out;
}

const AtomicClaim* DecompositionBatch::find_claim(const std::string& id) const {
    for (const auto& c : claims) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

std::vector<AtomicSubQuery> Decomposer::decompose_query(const std::string& task_id,
                                                        const std::string& query) {
    ChatCall call{"query_decompose", {{"query", query}}, 0.0};
    std::string reply = gateway_.chat(call);
    std::vector<std::string> items;
    try {
        items = parse_dash_lines(reply, true);
    } catch (const ModelFormatError&) {
        // one repair retry with an explicit format reminder
        ChatCall retry = call;
        retry.variables["query"] = query + "\n\n(Output each restriction as '- ' lines only.)";
        items = parse_dash_lines(gateway_.chat(retry), true);
    }
    std::vector<AtomicSubQuery> out;
    int seq = 0;
    for (auto& item : items) {
        out.push_back({task_id + ":subquery:" + std::to_string(seq), std::move(item)});
        ++seq;
    }
    return out;
}

std::pair<std::vector<AtomicClaim>, std::vector<AtomicAction>> Decomposer::decompose_reasoning(
    const std::string& task_id, const std::string& query, const std::string& paragraph,
    int loop_index, int paragraph_index, const std::vector<std::string>& citations) {
    ChatCall call{"reasoning_decompose", {{"query", query}, {"paragraph", paragraph}}, 0.0};
    std::string reply = gateway_.chat(call);
    std::vector<AtomicClaim> claims;
    std::vector<AtomicAction> actions;
    if (is_no_content_reply(reply)) return {claims, actions};

    FragmentItems items = parse_fragments(reply);
    if (items.claims.empty() && items.actions.empty()) {
        throw ModelFormatError("reasoning decomposition reply had no parseable fragments");
    }
    int claim_seq = 0;
    for (auto& c : items.claims) {
        claims.push_back({make_unit_id(task_id, loop_index, paragraph_index, 'c', claim_seq++),
                          std::move(c), ClaimKind::intermediate, loop_index, paragraph_index,
                          citations});
    }
    int action_seq = 0;
    for (auto& a : items.actions) {
        actions.push_back({make_unit_id(task_id, loop_index, paragraph_index, 'a', action_seq++),
                           std::move(a), loop_index, paragraph_index});
    }
    return {claims, actions};
}

std::vector<AtomicClaim> Decomposer::decompose_report_paragraph(
    const std::string& task_id, const std::string& paragraph, int paragraph_index,
    const std::vector<std::string>& citations) {
    ChatCall call{"report_decompose", {{"paragraph", paragraph}}, 0.0};
    std::string reply = gateway_.chat(call);
    std::vector<AtomicClaim> out;
    if (is_no_content_reply(reply)) return out;
    std::vector<std::string> items = parse_dash_lines(reply, false);
    int seq = 0;
    for (auto& item : items) {
        out.push_back({make_unit_id(task_id, 0, paragraph_index, 'c', seq++), std::move(item),
                       ClaimKind::report, 0, paragraph_index, citations});
    }
    return out;
}

std::vector<AtomicClaim> Decomposer::refine_claims(const std::vector<AtomicClaim>& claims) {
    // Refine per provenance slot so ids stay attached to their source span.
    std::map<std::pair<int, int>, std::vector<const AtomicClaim*>> slots;
    for (const auto& c : claims) {
        slots[{c.loop_index, c.paragraph_index}].push_back(&c);
    }
    std::vector<AtomicClaim> out;
    for (const auto& c : claims) {
        auto key = std::make_pair(c.loop_index, c.paragraph_index);
        auto it = slots.find(key);
        if (it == slots.end()) continue;  // slot already flushed
        std::vector<std::string> unit_texts;
        for (const auto* u : it->second) unit_texts.push_back(u->text);
        ChatCall call{"claim_refine", {{"units", to_dash_block(unit_texts)}}, 0.0};
        std::vector<std::string> refined = parse_dash_lines(gateway_.chat(call), false);
        const AtomicClaim& archetype = *it->second.front();
        const std::string& task = archetype.id.substr(0, archetype.id.find(':'));
        int seq = 0;
        for (auto& t : refined) {
            out.push_back({make_unit_id(task, archetype.loop_index, archetype.paragraph_index,
                                        'c', seq++),
                           std::move(t), archetype.kind, archetype.loop_index,
                           archetype.paragraph_index, archetype.citations});
        }
        slots.erase(it);
    }
    return out;
}

std::vector<AtomicAction> Decomposer::refine_actions(const std::vector<AtomicAction>& actions) {
    std::map<std::pair<int, int>, std::vector<const AtomicAction*>> slots;
    for (const auto& a : actions) {
        slots[{a.loop_index, a.paragraph_index}].push_back(&a);
    }
    std::vector<AtomicAction> out;
    for (const auto& a : actions) {
        auto key = std::make_pair(a.loop_index, a.paragraph_index);
        auto it = slots.find(key);
        if (it == slots.end()) continue;
        std::vector<std::string> unit_texts;
        for (const auto* u : it->second) unit_texts.push_back(u->text);
        ChatCall call{"action_refine", {{"units", to_dash_block(unit_texts)}}, 0.0};
        std::vector<std::string> refined = parse_dash_lines(gateway_.chat(call), false);
        const AtomicAction& archetype = *it->second.front();
        const std::string& task = archetype.id.substr(0, archetype.id.find(':'));
        int seq = 0;
        for (auto& t : refined) {
            out.push_back({make_unit_id(task, archetype.loop_index, archetype.paragraph_index,
                                        'a', seq++),
                           std::move(t), archetype.loop_index, archetype.paragraph_index});
        }
        slots.erase(it);
    }
    return out;
}

DecompositionBatch Decomposer::decompose(const Trajectory& t, FlagList* flags) {
    DecompositionBatch batch;
    auto degrade = [&](const std::string& code, const std::string& context) {
        if (flags) flags->push_back({Flag::Kind::tooling, code, context});
    };
    try {
        batch.sub_queries = decompose_query(t.task_id, t.query);
    } catch (const ModelFormatError& err) {
        degrade("decompose.query_unparseable", err.what());
    }

    std::set<std::string> urls;
    for (const auto& u : t.document_urls()) urls.insert(u);

    // Resolves a paragraph's markers through the trajectory's citation map
    // (bracket markers) or directly (bare urls); unresolvable markers stay
    // out, surfacing as validation issues instead of fabricated scope.
    auto paragraph_citations = [&](const std::string& paragraph) {
        std::vector<std::string> out;
        for (const auto& marker : extract_citation_markers(paragraph)) {
            std::string url;
            auto it = t.final_report.citations.find(marker);
            if (it != t.final_report.citations.end() && urls.count(it->second)) {
                url = it->second;
            } else if (urls.count(marker)) {
                url = marker;  // bare url cited directly in the text
            } else {
                continue;
            }
            if (std::find(out.begin(), out.end(), url) == out.end()) out.push_back(url);
        }
        return out;
    };

    std::vector<AtomicClaim> claims;
    std::vector<AtomicAction> actions;
    for (const auto& loop : t.loops) {
        int paragraph_index = 0;
        for (const std::string* source : {&loop.plan_text, &loop.summary_text}) {
            for (const auto& paragraph : text::split_paragraphs(*source)) {
                try {
                    auto [c, a] = decompose_reasoning(t.task_id, t.query, paragraph, loop.index,
                                                      paragraph_index,
                                                      paragraph_citations(paragraph));
                    claims.insert(claims.end(), c.begin(), c.end());
                    actions.insert(actions.end(), a.begin(), a.end());
                } catch (const ModelFormatError& err) {
                    degrade("decompose.reasoning_unparseable",
                            "loop " + std::to_string(loop.index) + " paragraph " +
                                std::to_string(paragraph_index) + ": " + err.what());
                }
                ++paragraph_index;
            }
        }
    }

    std::vector<AtomicClaim> report_claims;
    for (std::size_t p = 0; p < t.final_report.paragraphs.size(); ++p) {
        const std::string& paragraph = t.final_report.paragraphs[p];
        try {
            auto units = decompose_report_paragraph(t.task_id, paragraph, static_cast<int>(p),
                                                    paragraph_citations(paragraph));
            report_claims.insert(report_claims.end(), units.begin(), units.end());
        } catch (const ModelFormatError& err) {
            degrade("decompose.report_unparseable",
                    "paragraph " + std::to_string(p) + ": " + err.what());
        }
    }

    try {
        claims = refine_claims(claims);
        actions = refine_actions(actions);
        report_claims = refine_claims(report_claims);
    } catch (const ModelFormatError& err) {
        // first-pass units stand when the double check cannot be parsed
        degrade("decompose.refine_unparseable", err.what());
    }

    batch.claims = std::move(claims);
    batch.claims.insert(batch.claims.end(), report_claims.begin(), report_claims.end());
    batch.actions = std::move(actions);
    return batch;
}

}  // namespace halluaudit
