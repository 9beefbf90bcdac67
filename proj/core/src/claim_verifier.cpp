#include "halluaudit/claim_verifier.hpp"

#include <json.hpp>

#include "halluaudit/text.hpp"

namespace halluaudit {

using nlohmann::json;

std::string to_string(VerdictLabel label) {
    switch (label) {
        case VerdictLabel::supported: return "supported";
        case VerdictLabel::fabrication: return "fabrication";
        case VerdictLabel::misattribution: return "misattribution";
    }
    return "unknown";
}

std::string to_string(VerifyRoute route) {
    switch (route) {
        case VerifyRoute::none: return "none";
        case VerifyRoute::nli_fast: return "nli_fast";
        case VerifyRoute::llm: return "llm";
        case VerifyRoute::misattribution_check: return "misattribution_check";
        case VerifyRoute::reflection_check: return "reflection_check";
    }
    return "unknown";
}

void VerificationLedger::record(const Verdict& verdict, int loop) {
    total.insert(verdict.claim_id);
    per_loop[loop].total.insert(verdict.claim_id);
    if (verdict.label == VerdictLabel::fabrication) {
        fabrication.insert(verdict.claim_id);
        per_loop[loop].fabrication.insert(verdict.claim_id);
    } else if (verdict.label == VerdictLabel::misattribution) {
        misattribution.insert(verdict.claim_id);
        per_loop[loop].misattribution.insert(verdict.claim_id);
    }
}

bool VerificationLedger::is_hallucinated(const std::string& claim_id) const {
    return fabrication.count(claim_id) > 0 || misattribution.count(claim_id) > 0;
}

bool ClaimVerifier::judge_with_llm(const std::string& claim_text, const std::string& chunk_text,
                                   double* confidence, bool* tooling_flag) {
    ChatCall call{"claim_verify",
                  {{"query", task_query_}, {"claim", claim_text}, {"chunk", chunk_text}},
                  0.0};
    try {
        json reply = json::parse(gateway_.chat_json(call));
        std::string judgment = text::to_lower(reply.value("judgment", ""));
        if (confidence) *confidence = reply.value("confidence", 0.0);
        if (judgment == "support") return true;
        if (judgment == "unsupport" || judgment == "unsupported") return false;
        throw ModelFormatError("claim judge returned unknown judgment '" + judgment + "'");
    } catch (const ModelFormatError&) {
        // unparseable judge output is not evidence of support
        if (tooling_flag) *tooling_flag = true;
        return false;
    } catch (const json::exception&) {
        if (tooling_flag) *tooling_flag = true;
        return false;
    }
}

ClaimVerifier::Round1Result ClaimVerifier::verify_round1(const AtomicClaim& claim,
                                                         const RankedEvidence& evidence) {
    Round1Result out;
    if (evidence.candidates.empty()) return out;  // no plausible evidence, no model calls

    std::vector<const EvidenceChunk*> queued;
    for (const auto& candidate : evidence.candidates) {
        const EvidenceChunk* chunk = index_.find(candidate.chunk_id);
        if (chunk == nullptr) continue;
        NliVerdict verdict = gateway_.nli(chunk->text, claim.text);
        if (verdict.p_entail > gateway_.config().nli_entail_threshold) {
            out.supported = true;
            out.route = VerifyRoute::nli_fast;
            out.evidence = {chunk->chunk_id};
            out.confidence = verdict.p_entail;
            return out;
        }
        queued.push_back(chunk);
    }
    for (const EvidenceChunk* chunk : queued) {
        double confidence = 0.0;
        if (judge_with_llm(claim.text, chunk->text, &confidence, &out.tooling_flag)) {
            out.supported = true;
            out.route = VerifyRoute::llm;
            out.evidence = {chunk->chunk_id};
            out.confidence = confidence;
            return out;
        }
    }
    return out;
}

Verdict ClaimVerifier::adjudicate_round2(const AtomicClaim& claim, const Round1Result& round1,
                                         const std::set<std::string>& all_urls,
                                         const ClaimMemory& memory) {
    Verdict verdict;
    verdict.claim_id = claim.id;
    verdict.tooling_flag = round1.tooling_flag;

    if (!claim.citations.empty()) {
        // Misattribution check: same cascade, scope widened to every
        // retrieved document.
        RankedEvidence expanded = retrieve_evidence(claim, index_, all_urls, cfg_, gateway_);
        Round1Result rerun = verify_round1(claim, expanded);
        verdict.tooling_flag = verdict.tooling_flag || rerun.tooling_flag;
        if (rerun.supported) {
            verdict.label = VerdictLabel::misattribution;
            verdict.route = VerifyRoute::misattribution_check;
            verdict.evidence = rerun.evidence;
            verdict.confidence = rerun.confidence;
        } else {
            verdict.label = VerdictLabel::fabrication;
            verdict.route = VerifyRoute::misattribution_check;
        }
        return verdict;
    }

    if (claim.kind == ClaimKind::intermediate) {
        // Reflection check against the claims validated in earlier loops.
        std::vector<StoredClaim> priors =
            retrieve_prior_claims(claim, memory, gateway_, cfg_.reflect_top_k);
        for (const auto& prior : priors) {
            NliVerdict nli = gateway_.nli(prior.text, claim.text);
            bool entailed = nli.p_entail > gateway_.config().nli_entail_threshold;
            double confidence = nli.p_entail;
            if (!entailed) {
                entailed = judge_with_llm(claim.text, prior.text, &confidence,
                                          &verdict.tooling_flag);
            }
            if (entailed) {
                verdict.label = VerdictLabel::supported;
                verdict.route = VerifyRoute::reflection_check;
                verdict.evidence = {prior.id};
                verdict.confidence = confidence;
                return verdict;
            }
        }
    }

    verdict.label = VerdictLabel::fabrication;
    verdict.route = claim.kind == ClaimKind::intermediate ? VerifyRoute::reflection_check
                                                          : VerifyRoute::none;
    return verdict;
}

Verdict ClaimVerifier::verify(const AtomicClaim& claim, const std::set<std::string>& scope,
                              const std::set<std::string>& all_urls,
                              const ClaimMemory& memory) {
    RankedEvidence evidence = retrieve_evidence(claim, index_, scope, cfg_, gateway_);
    Round1Result round1 = verify_round1(claim, evidence);
    if (round1.supported) {
        Verdict verdict;
        verdict.claim_id = claim.id;
        verdict.label = VerdictLabel::supported;
        verdict.route = round1.route;
        verdict.evidence = round1.evidence;
        verdict.confidence = round1.confidence;
        verdict.tooling_flag = round1.tooling_flag;
        return verdict;
    }
    return adjudicate_round2(claim, round1, all_urls, memory);
}

}  // namespace halluaudit
