#pragma once

#include <vector>

#include "halluaudit/gateway.hpp"

namespace halluaudit::prompt_assets {

// Built-in prompt templates, keyed:
//   query_decompose, reasoning_decompose, report_decompose,
//   claim_refine, action_refine, claim_verify, action_verify,
//   noise_impact, root_cause
const std::vector<PromptTemplate>& defaults();

}  // namespace halluaudit::prompt_assets
