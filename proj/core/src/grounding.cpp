#include "sopbench/grounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sopbench {

namespace {

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

ScrollDirection swipe_direction(const Point& touch, const Point& lift) {
    double dx = lift.x - touch.x;
    double dy = lift.y - touch.y;
    // |dy| == |dx| resolves to the vertical axis
    if (std::abs(dy) >= std::abs(dx)) {
        return dy > 0 ? ScrollDirection::kDown : ScrollDirection::kUp;
    }
    return dx > 0 ? ScrollDirection::kRight : ScrollDirection::kLeft;
}

GroundingOutcome resolve_click(const Point& touch, std::span<const UiElement> screen,
                               const GroundingConfig& cfg) {
    const UiElement* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    int contained = 0;

    for (const UiElement& e : screen) {
        if (!expand_bbox(e, cfg.expand_fraction).contains(touch)) continue;
        ++contained;
        double d = distance(e.bbox.center(), touch);
        if (d < best_dist || (d == best_dist && best && e.id < best->id)) {
            best = &e;
            best_dist = d;
        }
    }

    if (!best) {
        // nearest-center fallback
        for (const UiElement& e : screen) {
            double d = distance(e.bbox.center(), touch);
            if (d > cfg.max_fallback_distance) continue;
            if (d < best_dist || (d == best_dist && best && e.id < best->id)) {
                best = &e;
                best_dist = d;
            }
        }
    }

    GroundingOutcome out;
    out.candidates_considered = contained;
    if (best) {
        out.action = CanonicalAction::click(best->id, best->text, best->ui_type);
        out.grounded = true;
    } else {
        out.action = CanonicalAction::click(-1, "", "");
        out.grounded = false;
    }
    return out;
}

}  // namespace

BBox expand_bbox(const UiElement& e, double expand_fraction) {
    double dx = e.bbox.width() * expand_fraction;
    double dy = e.bbox.height() * expand_fraction;
    return {std::max(0.0, e.bbox.x_min - dx), std::max(0.0, e.bbox.y_min - dy),
            std::min(1.0, e.bbox.x_max + dx), std::min(1.0, e.bbox.y_max + dy)};
}

GroundingOutcome canonicalize(const RawAction& raw, std::span<const UiElement> screen,
                              const GroundingConfig& cfg) {
    GroundingOutcome out;
    switch (raw.kind) {
        case RawActionKind::kType:
            out.action = CanonicalAction::type_text(raw.typed_text);
            return out;
        case RawActionKind::kPressBack:
            out.action = CanonicalAction::press_back();
            return out;
        case RawActionKind::kPressHome:
            out.action = CanonicalAction::press_home();
            return out;
        case RawActionKind::kPressEnter:
            out.action = CanonicalAction::press_enter();
            return out;
        case RawActionKind::kStatusTaskComplete:
            out.action = CanonicalAction::task_complete();
            return out;
        case RawActionKind::kStatusTaskImpossible:
            out.action = CanonicalAction::task_impossible();
            return out;
        case RawActionKind::kDualPoint:
            break;
    }
    if (distance(raw.touch, raw.lift) <= cfg.click_threshold) {
        return resolve_click(raw.touch, screen, cfg);
    }
    out.action = CanonicalAction::scroll(swipe_direction(raw.touch, raw.lift));
    return out;
}

std::vector<GroundingOutcome> canonicalize_episode(const Episode& e, const GroundingConfig& cfg) {
    std::vector<GroundingOutcome> out;
    out.reserve(e.steps.size());
    for (const Step& s : e.steps) {
        out.push_back(canonicalize(s.action, s.screen, cfg));
    }
    return out;
}

}  // namespace sopbench
