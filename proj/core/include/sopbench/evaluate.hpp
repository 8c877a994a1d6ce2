#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sopbench/episode.hpp"
#include "sopbench/grounding.hpp"
#include "sopbench/ingest.hpp"
#include "sopbench/policy.hpp"
#include "sopbench/prompt.hpp"
#include "sopbench/replay.hpp"
#include "sopbench/sop.hpp"

namespace sopbench {

// exact_element compares grounded element ids; enlarged_containment also
// accepts a predicted element whose expanded box covers the gold touch
// point, so an exact match always implies a containment match.
enum class ClickMatchMode { kExactElement, kEnlargedContainment };

std::string_view click_match_mode_name(ClickMatchMode m);
ClickMatchMode click_match_mode_from_name(std::string_view name);

struct MatchConfig {
    ClickMatchMode click_mode = ClickMatchMode::kExactElement;
    bool normalize_text = true;  // TypeText payloads compared after normalize_text()
    GroundingConfig grounding;   // expansion used by containment matching
};

// True when `pred` reproduces `gold` on `screen`. Kinds must agree; scrolls
// compare directions, TypeText compares payloads, clicks follow click_mode.
// `gold_touch` is the raw gesture's touch point when known (containment mode
// falls back to id equality without it).
bool match_action(const CanonicalAction& pred, const CanonicalAction& gold,
                  std::span<const UiElement> screen, const MatchConfig& cfg,
                  const Point* gold_touch = nullptr);

// Fraction of the episode's recorded steps reproduced correctly. Steps that
// are unevaluated, unparsable, or past the recorded end never count as
// correct; the denominator is always the episode length.
double score_episode(const Episode& e, std::span<const ReplayStep> steps,
                     const MatchConfig& cfg);

struct EpisodeScore {
    std::string episode_id;
    std::string subset;
    double partial = 0.0;      // correct steps / episode length
    bool unevaluated = false;  // endpoint failure: excluded from the means
};

struct EvalCounts {
    long steps = 0;
    long correct = 0;
    long ungrounded_gold = 0;  // gold clicks no element resolved for
    long parse_failures = 0;
    long unevaluated_steps = 0;
    long unevaluated_episodes = 0;
};

struct VariantTokenStats {
    Variant variant = Variant::kBase;
    long samples = 0;
    double mean_prompt_tokens = 0.0;
    double mean_response_tokens = 0.0;
};

struct EvalReport {
    std::string model;
    std::map<std::string, double> subset_scores;  // subset -> percent
    double overall = 0.0;                         // unweighted mean over subsets
    EvalCounts counts;
    std::vector<EpisodeScore> episodes;
    std::vector<VariantTokenStats> token_stats;
    std::optional<bool> token_ordering_ok;  // set when the stats cover all variants
};

// Subset score = 100 x mean of its episode partials; overall = unweighted
// mean of the subset scores. Unevaluated episodes are excluded, and a subset
// whose episodes are all unevaluated is dropped entirely.
EvalReport aggregate(std::string model, std::span<const EpisodeScore> episodes);

// Per-variant token means over a prompt dataset.
std::vector<VariantTokenStats> token_stats(std::span<const PromptSample> samples);

// Checks the expected response-length ordering on the means: base == sop,
// base < plan, plan <= plan_state. Empty when a variant is missing.
std::optional<bool> check_token_ordering(std::span<const VariantTokenStats> stats);

struct EvalOptions {
    ReplayOptions replay;
    MatchConfig match;
    int jobs = 1;
};

// Replays and scores every episode (parallel across episodes). An
// EndpointUnavailable marks that episode unevaluated and the run continues.
EvalReport evaluate_corpus(const Corpus& corpus, Policy& policy, const RuleSet* rules,
                           const EvalOptions& options);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

// Fixed-width comparison table, one row per report; subsets a report lacks
// render as "-". Scores are printed with two decimals.
std::string render_report_table(std::span<const EvalReport> reports);

}  // namespace sopbench
