#include "sopbench/episode.hpp"

#include <algorithm>

#include "sopbench/errors.hpp"

namespace sopbench {

std::string_view raw_action_kind_name(RawActionKind kind) {
    switch (kind) {
        case RawActionKind::kDualPoint: return "DUAL_POINT";
        case RawActionKind::kType: return "TYPE";
        case RawActionKind::kPressBack: return "PRESS_BACK";
        case RawActionKind::kPressHome: return "PRESS_HOME";
        case RawActionKind::kPressEnter: return "PRESS_ENTER";
        case RawActionKind::kStatusTaskComplete: return "STATUS_TASK_COMPLETE";
        case RawActionKind::kStatusTaskImpossible: return "STATUS_TASK_IMPOSSIBLE";
    }
    return "DUAL_POINT";
}

RawActionKind raw_action_kind_from_name(std::string_view name) {
    if (name == "DUAL_POINT") return RawActionKind::kDualPoint;
    if (name == "TYPE") return RawActionKind::kType;
    if (name == "PRESS_BACK") return RawActionKind::kPressBack;
    if (name == "PRESS_HOME") return RawActionKind::kPressHome;
    if (name == "PRESS_ENTER") return RawActionKind::kPressEnter;
    if (name == "STATUS_TASK_COMPLETE") return RawActionKind::kStatusTaskComplete;
    if (name == "STATUS_TASK_IMPOSSIBLE") return RawActionKind::kStatusTaskImpossible;
    throw DataError("unknown raw action type: '" + std::string(name) + "'");
}

std::string_view scroll_direction_name(ScrollDirection d) {
    switch (d) {
        case ScrollDirection::kUp: return "UP";
        case ScrollDirection::kDown: return "DOWN";
        case ScrollDirection::kLeft: return "LEFT";
        case ScrollDirection::kRight: return "RIGHT";
    }
    return "DOWN";
}

CanonicalAction CanonicalAction::click(int element_id, std::string text, std::string ui_type) {
    CanonicalAction a;
    a.kind = ActionKind::kClick;
    a.element_id = element_id;
    a.text = std::move(text);
    a.ui_type = std::move(ui_type);
    return a;
}

CanonicalAction CanonicalAction::scroll(ScrollDirection d) {
    CanonicalAction a;
    a.kind = ActionKind::kScroll;
    a.direction = d;
    return a;
}

CanonicalAction CanonicalAction::type_text(std::string text) {
    CanonicalAction a;
    a.kind = ActionKind::kTypeText;
    a.text = std::move(text);
    return a;
}

CanonicalAction CanonicalAction::press_back() {
    CanonicalAction a;
    a.kind = ActionKind::kPressBack;
    return a;
}

CanonicalAction CanonicalAction::press_home() {
    CanonicalAction a;
    a.kind = ActionKind::kPressHome;
    return a;
}

CanonicalAction CanonicalAction::press_enter() {
    CanonicalAction a;
    a.kind = ActionKind::kPressEnter;
    return a;
}

CanonicalAction CanonicalAction::task_complete() {
    CanonicalAction a;
    a.kind = ActionKind::kTaskComplete;
    return a;
}

CanonicalAction CanonicalAction::task_impossible() {
    CanonicalAction a;
    a.kind = ActionKind::kTaskImpossible;
    return a;
}

std::string finding_to_string(const ValidationFinding& f) {
    std::string out;
    if (f.step_index >= 0) out += "step " + std::to_string(f.step_index) + " ";
    out += f.field + ": " + f.message;
    return out;
}

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

bool in_unit_square(const Point& p) { return in_unit(p.x) && in_unit(p.y); }

void validate_screen(const std::vector<UiElement>& screen, int step_index,
                     std::vector<ValidationFinding>& out) {
    for (size_t i = 0; i < screen.size(); ++i) {
        const UiElement& e = screen[i];
        const BBox& b = e.bbox;
        if (!(b.x_min >= 0.0 && b.x_min < b.x_max && b.x_max <= 1.0)) {
            out.push_back({step_index, "element " + std::to_string(e.id) + " bbox",
                           "x bounds must satisfy 0 <= x_min < x_max <= 1"});
        }
        if (!(b.y_min >= 0.0 && b.y_min < b.y_max && b.y_max <= 1.0)) {
            out.push_back({step_index, "element " + std::to_string(e.id) + " bbox",
                           "y bounds must satisfy 0 <= y_min < y_max <= 1"});
        }
        if (e.id != static_cast<int>(i)) {
            out.push_back({step_index, "element ids",
                           "ids must be unique and contiguous from 0 (element at position " +
                               std::to_string(i) + " has id " + std::to_string(e.id) + ")"});
        }
    }
}

void validate_action(const RawAction& a, int step_index, std::vector<ValidationFinding>& out) {
    if (a.kind == RawActionKind::kDualPoint) {
        if (!in_unit_square(a.touch) || !in_unit_square(a.lift)) {
            out.push_back({step_index, "action points",
                           "DUAL_POINT touch and lift must lie in the unit square"});
        }
    } else {
        if (a.touch != kSentinelPoint || a.lift != kSentinelPoint) {
            out.push_back({step_index, "action points",
                           "non-DUAL_POINT actions must carry the sentinel (-1,-1) points"});
        }
    }
    if (a.kind == RawActionKind::kType) {
        // typed_text may legitimately be empty; nothing to check here
    } else if (!a.typed_text.empty()) {
        out.push_back({step_index, "typed_text", "typed_text is only valid for TYPE actions"});
    }
}

}  // namespace

std::vector<ValidationFinding> validate_episode(const Episode& e) {
    std::vector<ValidationFinding> out;
    if (e.episode_id.empty()) {
        out.push_back({-1, "episode_id", "must be non-empty"});
    }
    if (e.subset.empty()) {
        out.push_back({-1, "subset", "must be non-empty"});
    }
    if (e.steps.empty()) {
        out.push_back({-1, "steps", "episode must have at least one step"});
        return out;
    }
    int terminal_count = 0;
    for (size_t i = 0; i < e.steps.size(); ++i) {
        const Step& s = e.steps[i];
        if (s.index != static_cast<int>(i)) {
            out.push_back({static_cast<int>(i), "index",
                           "step indices must be contiguous from 0 (found " +
                               std::to_string(s.index) + ")"});
        }
        validate_screen(s.screen, static_cast<int>(i), out);
        validate_action(s.action, static_cast<int>(i), out);
        bool terminal = s.action.kind == RawActionKind::kStatusTaskComplete ||
                        s.action.kind == RawActionKind::kStatusTaskImpossible;
        if (terminal) {
            ++terminal_count;
            if (i + 1 != e.steps.size()) {
                out.push_back({static_cast<int>(i), "action", "terminal status not final"});
            }
        }
    }
    if (terminal_count > 1) {
        out.push_back({-1, "steps", "at most one terminal status action is allowed"});
    }
    return out;
}

bool reading_order_less(const UiElement& a, const UiElement& b) {
    if (a.bbox.y_min != b.bbox.y_min) return a.bbox.y_min < b.bbox.y_min;
    if (a.bbox.x_min != b.bbox.x_min) return a.bbox.x_min < b.bbox.x_min;
    return a.id < b.id;
}

std::vector<const UiElement*> reading_order(std::span<const UiElement> elements) {
    std::vector<const UiElement*> out;
    out.reserve(elements.size());
    for (const UiElement& e : elements) out.push_back(&e);
    std::sort(out.begin(), out.end(),
              [](const UiElement* a, const UiElement* b) { return reading_order_less(*a, *b); });
    return out;
}

}  // namespace sopbench
