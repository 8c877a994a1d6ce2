#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "sopbench/episode.hpp"
#include "sopbench/sop.hpp"

namespace sopbench {

// What a policy sees at one step: teacher-forced callers pass the gold
// history, free-running callers the policy's own. history.size() == step.
struct PolicyContext {
    const Episode* episode = nullptr;
    int step = 0;
    std::span<const UiElement> screen;
    std::span<const CanonicalAction> history;
    const SopPipeline* pipeline = nullptr;  // null when the episode has none
};

// A prediction is a value even when it failed: parse failures score as
// incorrect and unevaluated steps are reported separately, so batch runs
// never abort on a single bad step.
struct PredictionOutcome {
    std::optional<CanonicalAction> action;
    bool parse_failure = false;
    std::string note;  // failure reason for the report

    static PredictionOutcome of(CanonicalAction a) {
        PredictionOutcome p;
        p.action = std::move(a);
        return p;
    }
};

class Policy {
  public:
    virtual ~Policy() = default;
    virtual std::string_view name() const = 0;
    // `gold` is non-null only under teacher forcing.
    virtual PredictionOutcome predict(const PolicyContext& ctx, const CanonicalAction* gold) = 0;
};

// Returns the gold action unchanged; the evaluation sanity anchor.
std::unique_ptr<Policy> make_oracle_policy();

// Inverts the rule table: the first unfinish entry decides the action kind;
// click entries resolve to the reading-order-first screen element that
// classifies identically, and Scroll{DOWN} is the exploration fallback.
// Throws MissingPipeline when ctx.pipeline is absent.
std::unique_ptr<Policy> make_rule_sop_policy(RuleSet rules);

// Uniform baseline: kind first, then parameters. Draws are keyed by
// (seed, episode_id, step) so results are scheduling-independent.
std::unique_ptr<Policy> make_random_policy(std::uint64_t seed);

}  // namespace sopbench
