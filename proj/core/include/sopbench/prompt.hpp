#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sopbench/episode.hpp"
#include "sopbench/grounding.hpp"
#include "sopbench/ingest.hpp"
#include "sopbench/sop.hpp"

namespace sopbench {

// SOP modifies only the prompt; PLAN and PLAN_STATE modify only the response,
// so BASE and SOP responses are byte-identical per step.
enum class Variant { kBase, kPlan, kPlanState, kSop };

std::string_view variant_name(Variant v);  // "base" | "plan" | "plan_state" | "sop"
Variant variant_from_name(std::string_view name);

struct PromptSample {
    std::string episode_id;
    int step_index = 0;
    Variant variant = Variant::kBase;
    std::string prompt;
    std::string response;
    std::string sop_block;  // SOP variant only; appears verbatim inside prompt
    int prompt_tokens = 0;
    int response_tokens = 0;
};

// The per-entry state lines ("id:0 ...,state:finish"), newline-joined,
// no header and no trailing newline.
std::string render_sop_block(const SopPipeline& p, int t);

// Byte-exact prompt for step t. `canon_history` holds the canonical actions
// of steps [0, t); when max_history > 0 only the most recent max_history of
// them are rendered (ids stay absolute step indices). `pipeline` is required
// for the SOP variant and ignored otherwise.
std::string render_prompt(const Episode& e, int t, std::span<const CanonicalAction> canon_history,
                          const SopPipeline* pipeline, Variant v, int max_history = 0);

// Byte-exact response: optional PLAN:/PLAN&STATE: prefix plus the action tail.
// `pipeline` is required for PLAN and PLAN_STATE and ignored otherwise.
std::string render_response(const CanonicalAction& target, const SopPipeline* pipeline, int t,
                            Variant v);

// ParseFailure is a value, never an exception: batch evaluation scores it as
// an incorrect prediction instead of aborting.
struct ParsedResponse {
    bool ok = false;
    CanonicalAction action;  // meaningful iff ok
    std::optional<std::vector<std::string>> plan;  // entry descriptions, states stripped
    std::string error;       // reason iff !ok

    static ParsedResponse failure(std::string reason);
};

// Inverse of render_response. Tolerates the alternate keyword "action type:"
// as a synonym of "action:" on input, and ignores trailing junk lines.
ParsedResponse parse_response(std::string_view text);

struct BuildOptions {
    Variant variant = Variant::kBase;
    // SOP only: additionally emit the base-variant duplicate of each sample.
    bool mix = false;
    GroundingConfig grounding;
    int max_history = 0;  // 0 = full history
    int jobs = 1;
};

struct BuildStats {
    std::int64_t samples = 0;
    std::int64_t skipped_ungrounded_steps = 0;
    std::int64_t skipped_empty_pipeline_episodes = 0;
};

// One sample per (episode, step); ungrounded steps and (for pipeline-bearing
// variants) EmptyPipeline episodes are skipped and counted. Sample order is
// corpus order regardless of `jobs`.
std::vector<PromptSample> build_dataset(const Corpus& c, const RuleSet& rules,
                                        const BuildOptions& options, BuildStats* stats = nullptr);

std::string serialize_samples(std::span<const PromptSample> samples);
std::vector<PromptSample> parse_samples(std::string_view text);
void write_samples_file(const std::string& path, std::span<const PromptSample> samples);
std::vector<PromptSample> load_samples_file(const std::string& path);

}  // namespace sopbench
