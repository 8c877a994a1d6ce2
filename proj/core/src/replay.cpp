#include "sopbench/replay.hpp"

#include <span>

#include "sopbench/errors.hpp"

namespace sopbench {

std::vector<ReplayStep> replay_episode(const Episode& e, Policy& policy, const RuleSet* rules,
                                       const ReplayOptions& options) {
    if (e.steps.empty()) {
        throw EmptyEpisode("episode '" + e.episode_id + "' has no steps");
    }
    const std::vector<GroundingOutcome> outcomes = canonicalize_episode(e, options.grounding);
    std::vector<CanonicalAction> gold;
    gold.reserve(outcomes.size());
    for (const GroundingOutcome& o : outcomes) {
        gold.push_back(o.action);
    }
    std::optional<SopPipeline> pipeline;
    if (rules != nullptr) {
        try {
            pipeline = build_pipeline(e, gold, *rules);
        } catch (const EmptyPipeline&) {
            pipeline.reset();
        }
    }

    const size_t len = e.steps.size();
    const size_t cap = options.mode == ReplayMode::kFreeRunning
                           ? len * static_cast<size_t>(options.step_cap_factor)
                           : len;

    std::vector<ReplayStep> steps;
    steps.reserve(len);
    std::vector<CanonicalAction> predicted_history;

    for (size_t t = 0; t < cap; ++t) {
        ReplayStep step;
        step.step_index = static_cast<int>(t);
        if (t < len) {
            step.gold = gold[t];
        }

        // Past the recorded end the last screen keeps being shown.
        const size_t screen_step = t < len ? t : len - 1;
        PolicyContext ctx;
        ctx.episode = &e;
        ctx.step = static_cast<int>(t);
        ctx.screen = std::span<const UiElement>(e.steps[screen_step].screen);
        ctx.history = options.mode == ReplayMode::kTeacherForced
                          ? std::span<const CanonicalAction>(gold.data(), t)
                          : std::span<const CanonicalAction>(predicted_history);
        ctx.pipeline = pipeline ? &*pipeline : nullptr;

        try {
            step.prediction = policy.predict(ctx, step.gold ? &*step.gold : nullptr);
        } catch (const MissingPipeline& ex) {
            step.unevaluated = true;
            step.prediction = PredictionOutcome{};
            step.prediction.note = ex.what();
        }
        if (!step.prediction.action && !step.prediction.parse_failure) {
            step.unevaluated = true;
        }
        steps.push_back(step);

        if (options.mode == ReplayMode::kFreeRunning) {
            if (step.unevaluated || !step.prediction.action) {
                break;  // nothing to feed forward
            }
            predicted_history.push_back(*step.prediction.action);
            if (step.prediction.action->is_terminal()) {
                break;
            }
        }
    }
    return steps;
}

}  // namespace sopbench
