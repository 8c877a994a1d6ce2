#include "doctest.h"
#include "sopbench/grounding.hpp"

using namespace sopbench;

namespace {

UiElement element(int id, std::string text, std::string ui_type, BBox box) {
    UiElement e;
    e.id = id;
    e.text = std::move(text);
    e.ui_type = std::move(ui_type);
    e.bbox = box;
    return e;
}

RawAction tap(double x, double y) {
    RawAction a;
    a.kind = RawActionKind::kDualPoint;
    a.touch = {x, y};
    a.lift = {x, y};
    return a;
}

RawAction swipe(Point touch, Point lift) {
    RawAction a;
    a.kind = RawActionKind::kDualPoint;
    a.touch = touch;
    a.lift = lift;
    return a;
}

const GroundingConfig kDefaults{};

}  // namespace

TEST_CASE("expand_bbox grows per side by a fraction of own size, clamped") {
    UiElement corner = element(0, "", "", {0.0, 0.0, 0.2, 0.2});
    BBox grown = expand_bbox(corner, 0.5);
    CHECK(grown.x_min == doctest::Approx(0.0));
    CHECK(grown.y_min == doctest::Approx(0.0));
    CHECK(grown.x_max == doctest::Approx(0.3));
    CHECK(grown.y_max == doctest::Approx(0.3));

    UiElement mid = element(1, "", "", {0.4, 0.4, 0.6, 0.6});
    BBox g2 = expand_bbox(mid, 0.1);
    CHECK(g2.x_min == doctest::Approx(0.38));
    CHECK(g2.y_min == doctest::Approx(0.38));
    CHECK(g2.x_max == doctest::Approx(0.62));
    CHECK(g2.y_max == doctest::Approx(0.62));

    UiElement edge = element(2, "", "", {0.9, 0.9, 1.0, 1.0});
    BBox g3 = expand_bbox(edge, 1.0);
    CHECK(g3.x_max == doctest::Approx(1.0));
    CHECK(g3.y_max == doctest::Approx(1.0));
}

TEST_CASE("dual point splits on the click threshold") {
    std::vector<UiElement> screen{element(0, "A", "TEXT", {0.4, 0.4, 0.6, 0.6})};

    GroundingOutcome click = canonicalize(swipe({0.5, 0.5}, {0.5, 0.53}), screen, kDefaults);
    CHECK(click.action.kind == ActionKind::kClick);  // dist 0.03 < threshold

    GroundingOutcome scroll = canonicalize(swipe({0.5, 0.5}, {0.5, 0.55}), screen, kDefaults);
    CHECK(scroll.action.kind == ActionKind::kScroll);  // dist 0.05 > threshold
}

TEST_CASE("swipe direction follows the dominant axis") {
    std::vector<UiElement> screen;
    auto dir = [&](Point t, Point l) {
        return canonicalize(swipe(t, l), screen, kDefaults).action.direction;
    };
    CHECK(dir({0.5, 0.2}, {0.5, 0.8}) == ScrollDirection::kDown);
    CHECK(dir({0.5, 0.8}, {0.5, 0.2}) == ScrollDirection::kUp);
    CHECK(dir({0.2, 0.5}, {0.8, 0.5}) == ScrollDirection::kRight);
    CHECK(dir({0.8, 0.5}, {0.2, 0.5}) == ScrollDirection::kLeft);
    // equal magnitudes resolve to the vertical axis
    CHECK(dir({0.2, 0.2}, {0.5, 0.5}) == ScrollDirection::kDown);
}

TEST_CASE("click resolves to the containing expanded element") {
    std::vector<UiElement> screen{
        element(0, "Menu", "ICON_THREE_DOTS", {0.05, 0.05, 0.15, 0.12}),
        element(1, "XXX", "ICON_STAR", {0.80, 0.55, 0.90, 0.64}),
        element(2, "Subscribe", "BUTTON", {0.30, 0.80, 0.70, 0.88}),
    };
    GroundingOutcome out = canonicalize(tap(0.8497, 0.5964), screen, kDefaults);
    CHECK(out.grounded);
    CHECK(out.candidates_considered == 1);
    CHECK(out.action == CanonicalAction::click(1, "XXX", "ICON_STAR"));

    GroundingOutcome scroll =
        canonicalize(swipe({0.8497, 0.5964}, {0.8497, 0.8964}), screen, kDefaults);
    CHECK(scroll.action == CanonicalAction::scroll(ScrollDirection::kDown));
}

TEST_CASE("containment ties break on center distance, then id") {
    // identical overlapping boxes: nearest center is a tie, lower id wins
    std::vector<UiElement> same{
        element(0, "A", "TEXT", {0.4, 0.4, 0.6, 0.6}),
        element(1, "B", "TEXT", {0.4, 0.4, 0.6, 0.6}),
    };
    GroundingOutcome tie = canonicalize(tap(0.5, 0.5), same, kDefaults);
    CHECK(tie.candidates_considered == 2);
    CHECK(tie.action.element_id == 0);

    // overlapping but offset: the nearer center wins regardless of id
    std::vector<UiElement> offset{
        element(0, "A", "TEXT", {0.30, 0.40, 0.60, 0.60}),
        element(1, "B", "TEXT", {0.45, 0.40, 0.62, 0.60}),
    };
    // touch inside both; closer to element 1's center (0.535) than 0's (0.45)
    GroundingOutcome near = canonicalize(tap(0.55, 0.5), offset, kDefaults);
    CHECK(near.candidates_considered == 2);
    CHECK(near.action.element_id == 1);
}

TEST_CASE("uncontained clicks fall back to the nearest center within range") {
    std::vector<UiElement> screen{element(0, "A", "TEXT", {0.40, 0.40, 0.50, 0.44})};
    // outside the expanded box (y reach 0.444) but center distance < 0.15
    GroundingOutcome near = canonicalize(tap(0.45, 0.50), screen, kDefaults);
    CHECK(near.grounded);
    CHECK(near.candidates_considered == 0);
    CHECK(near.action.element_id == 0);

    // beyond max_fallback_distance: ungrounded click
    GroundingOutcome far = canonicalize(tap(0.45, 0.60), screen, kDefaults);
    CHECK_FALSE(far.grounded);
    CHECK(far.action == CanonicalAction::click(-1, "", ""));

    // empty screens can never ground
    GroundingOutcome none = canonicalize(tap(0.5, 0.5), {}, kDefaults);
    CHECK_FALSE(none.grounded);
}

TEST_CASE("non-gesture raw kinds map one to one") {
    std::vector<UiElement> screen;
    RawAction a;
    a.kind = RawActionKind::kType;
    a.typed_text = "hello";
    CHECK(canonicalize(a, screen, kDefaults).action == CanonicalAction::type_text("hello"));
    a = RawAction{};
    a.kind = RawActionKind::kPressBack;
    CHECK(canonicalize(a, screen, kDefaults).action == CanonicalAction::press_back());
    a.kind = RawActionKind::kPressHome;
    CHECK(canonicalize(a, screen, kDefaults).action == CanonicalAction::press_home());
    a.kind = RawActionKind::kPressEnter;
    CHECK(canonicalize(a, screen, kDefaults).action == CanonicalAction::press_enter());
    a.kind = RawActionKind::kStatusTaskComplete;
    CHECK(canonicalize(a, screen, kDefaults).action == CanonicalAction::task_complete());
    a.kind = RawActionKind::kStatusTaskImpossible;
    CHECK(canonicalize(a, screen, kDefaults).action == CanonicalAction::task_impossible());
}

TEST_CASE("canonicalize_episode grounds step by step") {
    Episode e;
    e.episode_id = "ep";
    e.subset = "general";
    e.instruction = "do";
    Step s0;
    s0.index = 0;
    s0.screen.push_back(element(0, "A", "TEXT", {0.1, 0.1, 0.3, 0.2}));
    s0.action = tap(0.2, 0.15);
    e.steps.push_back(s0);
    Step s1;
    s1.index = 1;
    s1.screen.push_back(element(0, "B", "TEXT", {0.1, 0.1, 0.3, 0.2}));
    s1.action.kind = RawActionKind::kStatusTaskComplete;
    e.steps.push_back(s1);

    std::vector<GroundingOutcome> out = canonicalize_episode(e, kDefaults);
    REQUIRE(out.size() == 2);
    CHECK(out[0].action == CanonicalAction::click(0, "A", "TEXT"));
    CHECK(out[1].action == CanonicalAction::task_complete());
}
