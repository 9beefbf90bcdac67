#include "halluaudit/prompt_assets.hpp"

namespace halluaudit::prompt_assets {

namespace {

const char* kQueryDecompose = R"PROMPT(You are an expert query analysis system specialized in decomposing user queries into structured atomic restrictions.

## TASK
Extract concise, independent Atomic Restrictions from user queries.

## ATOMIC CONSTRAINT CRITERIA
Each extracted constraint must satisfy the following properties:
- Indivisibility: Must be a single, self-contained unit with clear meaning. Break down complex queries (linked by 'and', 'with', 'while') into separate items.
- Objectivity: Must contain objective conditions or criteria only. Exclude descriptive facts, background information, or subjective statements.
- Context Independence: Must be neutral and understandable in isolation. Remove personal references (e.g., 'I', 'me', 'my', 'for me') and ambiguous pronouns.

## EXTRACTION METHODOLOGY
1. Decompose: Split compound sentences into individual atomic units based on the criteria above.
2. Refine: Ensure strictly objective, neutral language.
3. Format: Output each constraint on its own line prefixed with '- '.

## USER QUERY
{query}
)PROMPT";

const char* kReasoningDecompose = R"PROMPT(You are an expert text decomposition system specialized in reconstructing research trajectories by disentangling reasoning text interleaved with plans and summaries.

## TASK
Deconstruct paragraphs to isolate and extract Atomic Claims (from summaries) and Atomic Actions (from plans). You must perform systematic fragmentation and classification to ensure every extracted item satisfies the criteria of Indivisibility, Semantic Integrity, Verifiability, and Context Independence.

## METHODOLOGY

### 1. Source Fidelity
- Use the provided paragraph as the single source of truth. The query is context only; never add details that are not explicitly written in the paragraph.
- Do not infer missing steps, reasons, or entities from background knowledge.

### 2. Step 1: Fragmentation (Minimal Splitting & Disentanglement)
- Produce the smallest set of fragments that faithfully reflect the paragraph's explicit sentences.
- Disentanglement: If a sentence mixes summaries and plan (interleaved reasoning), split *only* along that boundary; otherwise keep the sentence intact.
- Resolve pronouns using paragraph context immediately to ensure atoms are self-contained.

### 3. Step 2: Classification
Context reminder: The text may contain both discoveries and plans. Classify only what is explicitly written.

- `summaries`: Facts, findings, reflections, or summary statements (Output as Atomic Claims).
- `plan`: Actions the agent explicitly states it will take next (Output as Atomic Actions).

### 4. Step 3: Atomic Extraction (The 4 Essential Properties)
Refine the classified fragments into valid atomic units. Each unit must strictly satisfy the following four properties defined in the research trajectory:

1.  Indivisibility: The unit must represent a single, indivisible action or claim; further splitting would compromise its semantic meaning.
    * *Operational Rule:* Prefer to keep clauses together; only split truly parallel elements (e.g., clearly enumerated lists).
2.  Semantic Integrity: Each unit must retain sufficient detail to preclude ambiguity, including necessary conditions and clauses, ensuring the original intent is fully preserved.
    * *Operational Rule:* Keep integral conditions attached (e.g., 'Search for issues... *with the specified label*'). Do not fragment conditions from their actions.
3.  Verifiability: The unit must be objectively verifiable. Speculative language and subjective opinions are filtered out.
    * *Filtering Criteria:* EXCLUDE speculative language ('may', 'might', 'could', 'likely', 'seems'), subjective opinions ('effective', 'best'), and vague process descriptions.
4.  Context Independence: All coreferences (e.g., pronouns) must be explicitly resolved, ensuring the unit can be assessed in isolation without relying on preceding context.

### 5. Format Compliance (For Plans)
- Imperative Verbs: Atomic Actions must start with an imperative verb (e.g., 'Search', 'Analyze', 'Run').
- Ignore implied steps; strictly output the explicit action described.

## EXAMPLES

Decomposition & Context Independence:
- Input: I found some roles, but I need to search more.
- Output: Two fragments:
  - I found some roles (summary)
  - Search for more roles (plan)

Verifiability (Filtering):
- Input: This approach likely improved performance by 15%
- Output: No extractable content (Speculative likely).
- Input: The neural network optimization approach improved performance by 15%
- Output: The neural network optimization approach improved performance by 15%

Indivisibility (Atomic Extraction):
- Input: Meta's careers page lists 'Research Scientist' in Menlo Park, CA, and Seattle, WA.
- Output:
  - Meta's careers page lists 'Research Scientist' in Menlo Park, CA
  - Meta's careers page lists 'Research Scientist' in Seattle, WA

Semantic Integrity - DO NOT Split Conditions:
- Input: Search for issues within the target module that have the specified label.
- [Incorrect] Wrong Output:
  - Search for issues within the target module
  - Filter issues with the specified label
- [Correct] Output:
  - Search for issues within the target module that have the specified label

## OUTPUT FORMAT
Fragment 1: [Context-independent text]
Classification: [summary/plan]
Atomic [Claims/Actions]:
- [Atomic Unit 1]
- [Atomic Unit 2]

If no extractable content: `No extractable content - paragraph contains only vague descriptions or speculative language.`

## QUERY (CONTEXT ONLY)
{query}

## PARAGRAPH
{paragraph}
)PROMPT";

const char* kReportDecompose = R"PROMPT(You are an expert fact decomposition system specialized in extracting Atomic Claims from text.

## TASK
Extract ONLY concrete, verifiable observations or findings. You must decompose the text into Atomic Claims that satisfy the criteria of Indivisibility, Semantic Integrity, Verifiability, and Context Independence.

## ATOMIC CLAIM PROPERTIES (METHODOLOGY)

### 1. Indivisibility
The unit must represent a single, indivisible fact.
- Operational Rule: Only split truly parallel elements (e.g., X and Y where X and Y are independent facts).
- Constraint: Do NOT split complex sentences if doing so would compromise semantic meaning or disconnect a clause from its subject.

### 2. Semantic Integrity
Each unit must retain sufficient detail to preclude ambiguity.
- Operational Rule: Preserve all modifiers, conditions, and qualifiers that are semantically integral to the main clause.
- Constraint: Do NOT split prepositional phrases, relative clauses, or purpose clauses (e.g., 'to find...') from the entity they modify.

### 3. Verifiability
The unit must be objectively verifiable.
- Include: Specific facts, data, concrete entities, locations, numbers, and definitive results.
- FILTER OUT (Exclude):
    - Speculative language ('may', 'might', 'could', 'possibly', 'likely', 'appears', 'seems').
    - Subjective opinions ('effective', 'ideal', 'best', 'good', 'useful').
    - Vague process summaries ('Progress has been made...', 'We plan to...').
    - URLs.

### 4. Context Independence
All coreferences must be explicitly resolved ensuring the claim is self-contained.
- Operational Rule: Replace pronouns ('this', 'that', 'it', 'they') with specific referents using the paragraph context.
- Verification Test: Can someone verify this claim's truthfulness without reading the original surrounding text?

## EXAMPLES

Verifiability (Filtering Speculation):
- Input: This approach likely improved performance by 15%
- Output: No extractable content (Speculative likely).
- Input: The neural network optimization approach improved performance by 15%
- Output: - The neural network optimization approach improved performance by 15%

Context Independence (Resolution):
- Input: Google xxx. They offer remote positions.
- Output: - Google offers remote positions

Indivisibility (Parallel Elements):
- Input: Meta has roles in Menlo Park and Seattle.
- Output:
  - Meta has a role in Menlo Park
  - Meta has a role in Seattle

Semantic Integrity - DO NOT Split Conditions:
- Input: xxx to find information about the oldest closed issue in the target module with the specified label
- [Incorrect] Wrong Output:
  - xxx to find information about the oldest closed issue in the target module
  - The oldest closed issue in the target module has the specified label
- [Correct] Output:
  - xxx to find information about the oldest closed issue in the target module with the specified label

## OUTPUT FORMAT
- [Atomic Claim 1]
- [Atomic Claim 2]

If no extractable content: `No extractable content - paragraph contains only vague descriptions or speculative language.`

## PARAGRAPH
{paragraph}
)PROMPT";

const char* kClaimRefine = R"PROMPT(You are a quality control system specialized in validating and refining Atomic Claims as a secondary double-check layer.

## TASK
Review preliminary claims to rectify common errors in Divisibility (e.g., parallel structures) and Context Independence (e.g., unresolved pronouns).

## REFINEMENT CRITERIA

### 1. Indivisibility (Split Parallel Structures)
Ensure each claim represents a single, indivisible fact.
- Rule: Break compound statements linked by `and`, `or`, `but` ONLY when they represent independent, parallel facts that do not affect each other's meaning.
- Example: `Role available in Menlo Park and Seattle` -> Split into two separate claims.

### 2. Semantic Integrity (Do NOT Split Modifiers)
Preserve semantic detail to preclude ambiguity.
- CRITICAL: Do NOT split modifiers, conditions, or qualifiers from their main clauses.
- Preserve:
  - Prepositional phrases (e.g., `within the target module`).
  - Relative clauses (e.g., `that have the specified label`).
  - Purpose clauses and integral qualifiers.

### 3. Context Independence (Resolve Coreferences)
Ensure claims are verifiable in isolation without surrounding context.
- Resolve Pronouns: Replace `the`, `this`, `that`, `it`, `they` with specific entity names.
- Explicit References: If a claim references `the position` or `this role`, specify the exact entity using the broader context.
- Exclusion: If the context for a pronoun or reference cannot be determined, exclude the claim entirely.

## EXAMPLES

Indivisibility (Parallel Elements - OK to Split):
- Input: `Role available in Menlo Park, CA and Seattle, WA`
- Output:
  - Role available in Menlo Park, CA
  - Role available in Seattle, WA

Semantic Integrity - DO NOT Split Conditions:
- Input: `xxx to find information about the oldest closed issue in the target module with the specified label`
- [Incorrect] Wrong Output:
  - `xxx to find information about the oldest closed issue in the target module`
  - `The oldest closed issue in the target module has the specified label`
- [Correct] Output:
  - `xxx to find information about the oldest closed issue in the target module with the specified label`

Context Independence (Resolution):
- Input: `The position focuses on experimenting with neural network architectures.`
- Context: DeepMind Research Engineer/Scientist position
- Output: `DeepMind Research Engineer/Scientist position focuses on experimenting with neural network architectures`

## OUTPUT FORMAT
Return each refined, atomic claim on a new line with `- ` prefix.

## PRELIMINARY CLAIMS
{units}
)PROMPT";

const char* kActionRefine = R"PROMPT(You are a quality control system specialized in validating and refining Atomic Actions as a secondary double-check layer.

## TASK
Review preliminary actions to rectify common errors in Divisibility, Context Independence, and Format. Remove any items that are observations (facts) rather than actions.

## REFINEMENT CRITERIA

### 1. Indivisibility (Split Parallel Actions)
Ensure each action represents a single, indivisible task.
- Rule: Break compound statements linked by 'and', 'or', 'but' ONLY when they represent independent, parallel actions that do not affect each other's meaning.

### 2. Semantic Integrity (Do NOT Split Modifiers)
Preserve semantic detail to preclude ambiguity.
- CRITICAL: Do NOT split modifiers, conditions, or qualifiers from their main clauses.
- Preserve:
  - Prepositional phrases (e.g., 'with the specified label', 'within the target module').
  - Relative clauses (e.g., 'that have the specified label').
  - Purpose clauses and integral qualifiers.

### 3. Context Independence (Resolve Coreferences)
Ensure actions are executable in isolation without surrounding context.
- Resolve Pronouns: Replace 'the', 'this', 'that', 'it', 'they' with specific entity names.
- Context Integration: Use broader action list context to provide necessary specificity.
- Exclusion: If context cannot be determined, exclude the action entirely.

### 4. Format Compliance & Validity
- Imperative Form: Start with a verb. Remove subjects like 'I', 'the agent', 'the user'. (e.g., Transform 'I will search' to 'Search').
- Validity Check: If the item is a fact/claim (e.g., 'Ronnie Wood has four children') and not a plan/action, remove it.

## EXAMPLES

Basic Action Transformation:
- Input: The agent will search for authors and identify the ones that have the specified label
- Output:
  - Search for authors
  - Identify the ones that have the specified label

Semantic Integrity - Do NOT Split Conditions:
- Input: Search for issues within the target module that have the specified label
- [Incorrect] Wrong Output:
  - Search for issues within the target module
  - Filter issues with the specified label
- [Correct] Output:
  - Search for issues within the target module that have the specified label

Context Independence:
- Input: Confirm this information
- Context: Check the population data for Tokyo first -> Confirm this information
- Output: Confirm the population data for Tokyo

## OUTPUT FORMAT
Return each refined, atomic action on a new line with '- ' prefix.

## PRELIMINARY ACTIONS
{units}
)PROMPT";

const char* kClaimVerify = R"PROMPT(You are an expert claim verification system specialized in assessing the evidentiary relationship between a specific claim and a retrieved document chunk.

## TASK
Given a claim, a query, and a document chunk, classify the relationship as Support or Unsupport.

## CONTEXT & METHODOLOGY
- Source of Truth: The provided document chunk represents information explicitly retrieved by the agent during its research.
- Inference Rule: If a claim describes the agent's focus, actions, or conclusions that naturally follow from this chunk, treat it as Support unless the chunk clearly contradicts it.

Before showing your final answer, think step-by-step and show your specific reasoning.

## CLASSIFICATION CRITERIA

### 1. Support
The document validates the claim through explicit statement, reasonable inference, or logical abstraction.
- Explicit/Inferred: The claim is stated in the text or is a direct logical consequence of the facts presented.
- Resource Availability (IMPORTANT): If the claim describes the acquisition, access, or availability of information (e.g., 'The agent accessed the product page'), consider the presence of the document content itself as sufficient evidence that such access was established.

### 2. Unsupport
The document fails to validate the claim due to contradiction or insufficiency.
- Contradiction: The document contains information that directly refutes the claim.
- Insufficient Information: The document mentions related topics but lacks the specific data, numbers, or details required to verify the claim.

## EXAMPLES

Case 1: Support (High-level Abstraction)
- Document: 'Product specifications and pricing information for the new smartphone model...'
- Claim: 'The agent has successfully accessed the product page.'
- Judgment: Support (The claim about accessing the page is validated by the actual presence of content from that page.)

Case 2: Support (Reasonably Inferred)
- Document: 'Phase III trials reported an efficacy rate above 90%.'
- Claim: 'The vaccine was highly effective in trials.'
- Judgment: Support ('Highly effective' is a reasonable inference from 'efficacy above 90%'.)

Case 3: Unsupport (Contradiction)
- Document: 'The experiment was conducted with 100 participants aged 18-25.'
- Claim: 'The study included elderly participants over 65.'
- Judgment: Unsupport (The document explicitly defines a younger age range, contradicting the claim.)

Case 4: Unsupport (Insufficient Information)
- Document: 'The company announced a new product launch.'
- Claim: 'The product launch increased quarterly revenue by 15%.'
- Judgment: Unsupport (The document mentions the launch event but provides no financial data to verify the specific revenue figure.)

## INPUT
- Query: {query}
- Claim: {claim}
- Document Chunk: {chunk}

## OUTPUT FORMAT
After your reasoning, output ONLY the JSON object in this exact format:
```json
{
  "judgment": "Support|Unsupport",
  "evidence": "One-sentence explanation for your judgment",
  "confidence": 0.0-1.0
}
```
)PROMPT";

const char* kActionVerify = R"PROMPT(You are an expert action verification system specialized in assessing the coherence and necessity of a proposed action within a research trajectory.

## TASK
Evaluate whether the Action to Evaluate supports the User Query, considering the current context of Previous Claims (facts) and Previous Actions (plans).

## INPUT CONTEXT
- User Query: {query}
- Previous Claims: {claims_context}
- Previous Actions: {actions_context} (In-progress steps)
- Action to Evaluate: {action}

## METHODOLOGY & PRINCIPLES
1. Goal Coherence: Does the action align with the user's objectives?
2. Logical Continuity: Is the action a reasonable next step?
3. Assumption of Success (CRITICAL): Treat in-progress Previous Actions as if they will succeed and return ideal results. An action is NOT premature if it relies on prerequisites that are currently being fetched by previous steps.

## CLASSIFICATION CRITERIA

### 1. Support
The action makes reasonable progress toward the goal.
- Valid Extensions: The action uncovers new info, expands search space, or advances the task.
- Lightweight Operations: Actions like 'Extract', 'Format', 'Summarize', or 'Compile' based on existing data are always Support.
- Sequential Planning: If Action B depends on Action A (which is in progress), Action B is Support, not a deviation.

### 2. Unsupport
The action is either redundant or irrelevant.

Type A: Redundancy
- Definition: The action repeats a step that has *already produced concrete results*.
- Strict Rule: Mark as Redundancy ONLY if a Previous Claim documents the exact same search/tool execution with actual results.
- Exceptions (Not Redundant):
    - Different tools (e.g., Wikipedia vs. Google) or query phrasings.
    - Repeating a failed search (if the first attempt yielded nothing).
    - Actions dependent on prerequisites currently being fetched.

Type B: Deviation
- Definition: The action pursues a completely irrelevant tangent.
- Constraint: Do not mark as deviation if the action is an intermediate step toward the main goal.

## SOURCE ASSIGNMENT RULES
- If Support: Set source to -1 (derived from query) OR claim index [i] (if building upon a specific fact).
- If Redundancy: Set source to claim index [i] (the specific claim that makes this action unnecessary).
- If Deviation: ALWAYS set source to -1 (deviates from the query/goal).

## EXAMPLES

Case 1: Support (Alternative Search)
- Query: 'Find Python 3.12 features'
- Previous Claim [2]: 'Official docs lack 3.12 details'
- Action: 'Search GitHub for Python 3.12 features'
- Output: {"label": "Support", "source": 2, "type": null, "confidence": 0.9, "explanation": "Explores alternative sources after claim [2] confirmed a gap."}

Case 2: Unsupport (Redundancy)
- Query: 'Top Italian restaurants in Boston'
- Previous Claim [1]: 'Found top rated: Mamma Maria (4.8), Giulia (4.7)'
- Action: 'Search for best Italian restaurants in Boston'
- Output: {"label": "Unsupport", "source": 1, "type": "redundancy", "confidence": 0.95, "explanation": "Claim [1] already provides the exact results this action seeks."}

Case 3: Support (Lightweight Extraction)
- Query: 'Summarize Q3 sales'
- Previous Claim [2]: 'Q3 revenue up 15%'
- Action: 'Create a summary table of regional sales'
- Output: {"label": "Support", "source": 2, "type": null, "confidence": 0.85, "explanation": "Formatting data for analysis is a valid step."}

Case 4: Unsupport (Deviation)
- Query: 'Analyze 2008 financial crisis'
- Action: 'Research medieval banking regulations'
- Output: {"label": "Unsupport", "source": -1, "type": "deviation", "confidence": 0.9, "explanation": "Irrelevant historical tangent unrelated to the 2008 crisis."}

Case 5: Support (Sequential Planning - NOT Premature)
- Query: 'Calculate temp trends'
- Previous Actions: [0] Fetch NOAA data, [1] Download records
- Previous Claims: [0] 'Data not yet retrieved'
- Action: 'Run regression model on climate data'
- Output: {"label": "Support", "source": -1, "type": null, "confidence": 0.88, "explanation": "Valid next step assuming previous actions [0] and [1] succeed in fetching data."}

## OUTPUT FORMAT
Return JSON ONLY:
{
    "label": "Support" | "Unsupport",
    "source": -1 | integer index,
    "type": "deviation" | "redundancy" | null,
    "confidence": 0.0-1.0,
    "explanation": "One sentence justification."
}
)PROMPT";

const char* kNoiseImpact = R"PROMPT(You are an insight analyst reviewing retrieval chunks that were skipped in the final report. Each chunk may support hidden reasoning steps instead of answering the query directly. Infer subtle or implicit relationships between the chunk and the user query.

Instructions:
1. Provide a one-sentence summary that highlights any signal relevant to the query or its supporting sub-tasks (do not copy the chunk verbatim).
2. Provide a one-sentence explanation of the potential impact of omitting this chunk, even if the impact is indirect or speculative (it's acceptable to say the impact is negligible).
3. Output an impact score between 0 and 1 indicating how strongly the omission could hurt the query resolution (0 = none, 1 = critical).
4. Avoid absolute or exclusive claims unless the chunk explicitly states them; qualify statements with phrases like 'suggests', 'indicates', or 'one plausible candidate' when the evidence is indirect.
5. Mention remaining uncertainties or missing links when appropriate so the reader understands the limits of the evidence.
6. Be concise and analytical; reason about latent connections or missed opportunities.

Query/Task: {query}

Chunk Content: {chunk_text}

Respond EXACTLY in the following format:
Summary: <one sentence>
Impact: <one sentence>
ImpactScore: <float between 0 and 1>
)PROMPT";

const char* kRootCause = R"PROMPT(query: {query}
Scenario & Error Context:
Scenario Background:
- Chain-of-Research trajectory: Each iteration contains planning actions (`action_list_N`) and observations/claims (`claim_list_N`), culminating in a final report.
- The full trajectory shows the complete research chain; the hallucination timeline shows errors (hallucinated actions/claims verified as NotSupport), noise_domination (missed content with high possible impact), and potentially missed queries (unaddressed user intent) - all of these are hallucinations.
- Only timeline entries are hallucinations; steps without timeline entries stayed on track.

================================================================================
FULL TRAJECTORY - Complete Chain of Research:
================================================================================

CRITICAL: Carefully examine observations for strategy shift signals like:
"shift strategy", "change approach", "start over", "complete shift", "need a new strategy", "pivot", "abandon previous approach"

If you see such signals after an error, that error was CORRECTED and is NOT the root cause.

{full_research_trajectory}

================================================================================
FINAL REPORT - Research Results and Conclusions:
================================================================================

CRITICAL ANALYSIS INSTRUCTIONS:

The report below shows what the agent ACTUALLY concluded. Use it to REVERSE-ENGINEER the root cause:

1. Identify the FINAL ANSWER/CONCLUSION in the report
2. The final answer is INCORRECT and trace BACKWARDS from the final conclusion to find:
   - Which step's error directly led to this wrong conclusion?
   - Which early errors were ABANDONED (not mentioned in final report = were corrected/abandoned)

3. Root cause identification logic:
   - If an error is NOT reflected in the final report -> it was abandoned -> NOT root cause
   - If an error IS reflected in the final report -> it affected the conclusion -> POTENTIAL root cause
   - The EARLIEST error that directly led to the final wrong conclusion is the root cause

{report}

================================================================================
HALLUCINATION TIMELINE - Errors Detected:
================================================================================

Compare the timeline below with the full trajectory and final report above:
- If an error led to a strategy shift (mentioned in trajectory), it is NOT the root cause
- If an error is not reflected in the final report, it was likely abandoned and is NOT the root cause
- Only errors that directly led to the final incorrect conclusion are root causes
- Note: The timeline includes noise_domination (missed content) and query_missed entries when applicable

{hallucination_timeline}

Analysis Guidelines:
CRITICAL: Do NOT be dominated by early hallucinations. An early hallucination that was later recognized
and corrected by the agent is NOT the root cause.

1. Analysis process:
   - FIRST: Understand the ENTIRE trajectory to see how the agent's strategy evolved and when errors were recognized/corrected
   - THEN: Compare the hallucination timeline with the full trajectory to identify which errors were critical
   - Root cause = the earliest error that irreversibly doomed the final outcome (NOT corrected, NOT led to successful pivot)

2. Root cause criteria:
   - Must be an error that, if corrected, would have fundamentally changed the trajectory toward success
   - Must have STRONG LINKAGE between the error and the final wrong answer
   - Early exploration errors (steps 1-3) are often normal learning steps - only flag if never corrected
   - If agent recognized an early error and changed strategy, root cause is likely later in the chain
   - Trace backwards from final failure to find the earliest uncorrected error
   - If NO hallucinations have strong linkage to the final failure, output critical_step = -1

3. Never cite a step/module unless the timeline explicitly lists a hallucinated item there.

Modules:
- planning -> hallucinated actions in action_list_<step>
- observation -> hallucinated claims in claim_list_<step> or final report
- noise_domination -> missed content with high impact
- query_missed -> missed user intent/queries

root-cause error TYPES:
If there is a strong linkage between an error and the final failure, identify ONE of the following types as the root cause:
1. planning - Hallucinated planning actions that led to wrong search direction
2. observation - Hallucinated claims/observations that led to wrong conclusions
3. noise_domination - Critical content was retrieved but missed, directly causing failure
4. query_missed - Critical user intent/queries were not addressed, directly causing failure

If NO hallucinations have strong linkage to the final failure, set critical_step = -1 and critical_module = 'none'.

REQUIRED OUTPUT FORMAT (JSON):
{
"critical_step": <step_number or -1 if no strong linkage>,
"critical_module": "<module_name: planning|observation|noise_domination|query_missed>",
"root_cause": "Concise description of the fundamental problem",
"cascading_effects": [{ "step": <step_number>, "impact": "description" }]
}

Note: If no hallucinations have strong linkage to the final failure, set critical_step = -1.
)PROMPT";

}  // namespace

const std::vector<PromptTemplate>& defaults() {
    static const std::vector<PromptTemplate> kDefaults = {
        {"query_decompose", kQueryDecompose, {"query"}},
        {"reasoning_decompose", kReasoningDecompose, {"query", "paragraph"}},
        {"report_decompose", kReportDecompose, {"paragraph"}},
        {"claim_refine", kClaimRefine, {"units"}},
        {"action_refine", kActionRefine, {"units"}},
        {"claim_verify", kClaimVerify, {"query", "claim", "chunk"}},
        {"action_verify", kActionVerify, {"query", "claims_context", "actions_context", "action"}},
        {"noise_impact", kNoiseImpact, {"query", "chunk_text"}},
        {"root_cause", kRootCause, {"query", "full_research_trajectory", "report", "hallucination_timeline"}},
    };
    return kDefaults;
}

}  // namespace halluaudit::prompt_assets
