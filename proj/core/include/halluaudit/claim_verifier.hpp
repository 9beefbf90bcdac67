#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "halluaudit/evidence.hpp"
#include "halluaudit/gateway.hpp"

namespace halluaudit {

enum class VerdictLabel { supported, fabrication, misattribution };
enum class VerifyRoute { none, nli_fast, llm, misattribution_check, reflection_check };

std::string to_string(VerdictLabel label);
std::string to_string(VerifyRoute route);

struct Verdict {
    std::string claim_id;
    VerdictLabel label = VerdictLabel::fabrication;
    VerifyRoute route = VerifyRoute::none;
    std::vector<std::string> evidence;  // chunk ids, or prior-claim ids for reflections
    double confidence = 0.0;
    bool tooling_flag = false;  // a judge reply was unparseable along the way
};

struct LoopClaimLedger {
    std::set<std::string> total;
    std::set<std::string> fabrication;
    std::set<std::string> misattribution;
};

struct VerificationLedger {
    std::set<std::string> total;
    std::set<std::string> fabrication;
    std::set<std::string> misattribution;
    std::map<int, LoopClaimLedger> per_loop;  // 0 holds the report claims

    void record(const Verdict& verdict, int loop);
    bool is_hallucinated(const std::string& claim_id) const;
};

class ClaimVerifier {
public:
    ClaimVerifier(Gateway& gateway, const ChunkIndex& index, RetrievalConfig cfg,
                  std::string task_query)
        : gateway_(gateway), index_(index), cfg_(cfg), task_query_(std::move(task_query)) {}

    struct Round1Result {
        bool supported = false;
        VerifyRoute route = VerifyRoute::none;
        std::vector<std::string> evidence;
        double confidence = 0.0;
        bool tooling_flag = false;
    };

    // NLI-then-LLM cascade over the ranked candidates: any candidate whose
    // entailment clears the threshold supports immediately; the rest queue
    // for the LLM judge in rerank order. Supported when at least one
    // candidate supports.
    Round1Result verify_round1(const AtomicClaim& claim, const RankedEvidence& evidence);

    // Unsupported claims branch: citation-bearing claims re-verify against
    // all retrieved documents (support there means misattribution);
    // intermediate claims check the top prior claims as reflections.
    Verdict adjudicate_round2(const AtomicClaim& claim, const Round1Result& round1,
                              const std::set<std::string>& all_urls,
                              const ClaimMemory& memory);

    // Full two-round pipeline for one claim against its evidence scope.
    Verdict verify(const AtomicClaim& claim, const std::set<std::string>& scope,
                   const std::set<std::string>& all_urls, const ClaimMemory& memory);

private:
    bool judge_with_llm(const std::string& claim_text, const std::string& chunk_text,
                        double* confidence, bool* tooling_flag);

    Gateway& gateway_;
    const ChunkIndex& index_;
    RetrievalConfig cfg_;
    std::string task_query_;
};

}  // namespace halluaudit
