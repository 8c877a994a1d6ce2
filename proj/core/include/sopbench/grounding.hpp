#pragma once

#include <span>
#include <vector>

#include "sopbench/episode.hpp"

namespace sopbench {

// Knobs for the enlarged-element transform. The expansion/threshold values
// are artifact defaults (the mechanism's constants are not published); all
// three are exposed in the CLI config as grounding.*.
struct GroundingConfig {
    // Per-side bbox growth as a fraction of the element's own width/height.
    double expand_fraction = 0.10;
    // Max touch/lift distance (normalized units) for a DUAL_POINT to count
    // as a click rather than a swipe.
    double click_threshold = 0.04;
    // Max center distance for the nearest-element fallback when no expanded
    // box contains the touch point.
    double max_fallback_distance = 0.15;
};

struct GroundingOutcome {
    CanonicalAction action;
    bool grounded = true;         // false only for click resolution failures
    int candidates_considered = 0;  // elements whose expanded box contained the point
};

// Each side moves outward by expand_fraction x (width for x-sides, height
// for y-sides), clamped to [0,1].
BBox expand_bbox(const UiElement& e, double expand_fraction);

// Total over all valid raw actions: presses and statuses map 1:1, TYPE maps
// to TypeText, and DUAL_POINT resolves to a Click on the containing expanded
// element (ties: nearest center, then lowest id; fallback: nearest center
// within max_fallback_distance) or to a Scroll along the dominant
// displacement axis. Failures are flagged, never thrown, so batch pipelines
// run to completion.
GroundingOutcome canonicalize(const RawAction& raw, std::span<const UiElement> screen,
                              const GroundingConfig& cfg);

// Convenience: canonicalize every step of an episode.
std::vector<GroundingOutcome> canonicalize_episode(const Episode& e, const GroundingConfig& cfg);

}  // namespace sopbench
