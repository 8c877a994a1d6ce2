#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sopbench {

// All domain types are immutable values after construction and safe to share
// across parallel workers.

struct Point {
    double x = -1.0;
    double y = -1.0;

    bool operator==(const Point&) const = default;
};

inline constexpr Point kSentinelPoint{-1.0, -1.0};

struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    Point center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
    bool contains(const Point& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    bool operator==(const BBox&) const = default;
};

// One screen element as exported by the environment; coordinates are
// normalized fractions of the screen, ui_type is an open vocabulary of
// uppercase tokens (TEXT, ICON_STAR, ...).
struct UiElement {
    int id = 0;
    std::string text;
    std::string ui_type;
    BBox bbox;

    bool operator==(const UiElement&) const = default;
};

enum class RawActionKind {
    kDualPoint,
    kType,
    kPressBack,
    kPressHome,
    kPressEnter,
    kStatusTaskComplete,
    kStatusTaskImpossible,
};

std::string_view raw_action_kind_name(RawActionKind kind);
// Throws DataError on unknown names.
RawActionKind raw_action_kind_from_name(std::string_view name);

// The gesture-level action as recorded: a touch/lift point pair for
// DUAL_POINT, the sentinel (-1,-1) pair otherwise.
struct RawAction {
    RawActionKind kind = RawActionKind::kDualPoint;
    Point touch = kSentinelPoint;
    Point lift = kSentinelPoint;
    std::string typed_text;  // non-empty only for kType

    bool operator==(const RawAction&) const = default;
};

struct Step {
    int index = 0;
    std::vector<UiElement> screen;
    RawAction action;

    bool operator==(const Step&) const = default;
};

struct Episode {
    std::string episode_id;
    std::string subset;
    std::string instruction;
    std::vector<Step> steps;

    bool operator==(const Episode&) const = default;
};

enum class ScrollDirection { kUp, kDown, kLeft, kRight };

std::string_view scroll_direction_name(ScrollDirection d);

enum class ActionKind {
    kClick,
    kScroll,
    kTypeText,
    kPressBack,
    kPressHome,
    kPressEnter,
    kTaskComplete,
    kTaskImpossible,
};

// Element-level action space: what models predict and what the evaluator
// scores. Construct through the factories so unused fields stay zeroed and
// structural equality matches semantic equality.
struct CanonicalAction {
    ActionKind kind = ActionKind::kClick;
    int element_id = -1;            // clicks only; -1 marks an unresolved click
    std::string text;               // click: element text; type: typed text
    std::string ui_type;            // clicks only
    ScrollDirection direction = ScrollDirection::kDown;  // scrolls only

    static CanonicalAction click(int element_id, std::string text, std::string ui_type);
    static CanonicalAction scroll(ScrollDirection d);
    static CanonicalAction type_text(std::string text);
    static CanonicalAction press_back();
    static CanonicalAction press_home();
    static CanonicalAction press_enter();
    static CanonicalAction task_complete();
    static CanonicalAction task_impossible();

    bool is_terminal() const {
        return kind == ActionKind::kTaskComplete || kind == ActionKind::kTaskImpossible;
    }

    bool operator==(const CanonicalAction&) const = default;
};

struct ValidationFinding {
    int step_index = -1;  // -1 for episode-level findings
    std::string field;
    std::string message;

    bool operator==(const ValidationFinding&) const = default;
};

std::string finding_to_string(const ValidationFinding& f);

// Pure: identical input yields identical findings in identical order.
// An empty result means every type invariant holds.
std::vector<ValidationFinding> validate_episode(const Episode& e);

// Visual reading order: top-to-bottom, then left-to-right, then id.
bool reading_order_less(const UiElement& a, const UiElement& b);
std::vector<const UiElement*> reading_order(std::span<const UiElement> elements);

}  // namespace sopbench
