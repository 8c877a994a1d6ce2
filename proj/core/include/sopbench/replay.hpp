#pragma once

#include <optional>
#include <vector>

#include "sopbench/grounding.hpp"
#include "sopbench/policy.hpp"
#include "sopbench/sop.hpp"

namespace sopbench {

// teacher_forced scores each step against gold history (the paper's metric);
// free_running feeds the policy its own predictions.
enum class ReplayMode { kTeacherForced, kFreeRunning };

struct ReplayStep {
    int step_index = 0;
    // Absent past the recorded episode end (free-running overruns).
    std::optional<CanonicalAction> gold;
    PredictionOutcome prediction;
    bool unevaluated = false;  // policy error at this step
};

struct ReplayOptions {
    ReplayMode mode = ReplayMode::kTeacherForced;
    GroundingConfig grounding;
    // free_running stops at TaskComplete/TaskImpossible or at
    // step_cap_factor × episode length, whichever comes first.
    int step_cap_factor = 2;
};

// Grounds the episode, annotates it when `rules` is given (an episode whose
// steps are all excluded leaves ctx.pipeline null), and drives the policy
// step by step.  MissingPipeline marks the step unevaluated; EndpointUnavailable
// propagates so the caller can treat the whole episode as unevaluated; other
// exceptions propagate untouched.
std::vector<ReplayStep> replay_episode(const Episode& e, Policy& policy, const RuleSet* rules,
                                       const ReplayOptions& options);

}  // namespace sopbench
