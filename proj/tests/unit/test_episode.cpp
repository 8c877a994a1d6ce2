#include "doctest.h"
#include "sopbench/episode.hpp"
#include "sopbench/errors.hpp"

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

Episode one_click_episode() {
    Episode e;
    e.episode_id = "ep";
    e.subset = "general";
    e.instruction = "do";
    Step s;
    s.index = 0;
    s.screen.push_back(element(0, "A", "TEXT", {0.1, 0.1, 0.3, 0.2}));
    s.action.kind = RawActionKind::kDualPoint;
    s.action.touch = {0.2, 0.15};
    s.action.lift = {0.2, 0.15};
    e.steps.push_back(std::move(s));
    Step done;
    done.index = 1;
    done.screen.push_back(element(0, "B", "TEXT", {0.1, 0.1, 0.3, 0.2}));
    done.action.kind = RawActionKind::kStatusTaskComplete;
    e.steps.push_back(std::move(done));
    return e;
}

}  // namespace

TEST_CASE("BBox geometry") {
    BBox b{0.2, 0.4, 0.6, 0.5};
    CHECK(b.width() == doctest::Approx(0.4));
    CHECK(b.height() == doctest::Approx(0.1));
    CHECK(b.center().x == doctest::Approx(0.4));
    CHECK(b.center().y == doctest::Approx(0.45));
    CHECK(b.contains({0.2, 0.4}));   // boundary inclusive
    CHECK(b.contains({0.6, 0.5}));
    CHECK_FALSE(b.contains({0.61, 0.45}));
}

TEST_CASE("raw action kind names round-trip") {
    for (RawActionKind k : {RawActionKind::kDualPoint, RawActionKind::kType,
                            RawActionKind::kPressBack, RawActionKind::kPressHome,
                            RawActionKind::kPressEnter, RawActionKind::kStatusTaskComplete,
                            RawActionKind::kStatusTaskImpossible}) {
        CHECK(raw_action_kind_from_name(raw_action_kind_name(k)) == k);
    }
    CHECK_THROWS_AS(raw_action_kind_from_name("SWIPE"), DataError);
}

TEST_CASE("canonical action factories zero unused fields") {
    CanonicalAction c = CanonicalAction::click(3, "Open", "BUTTON");
    CHECK(c.kind == ActionKind::kClick);
    CHECK(c.element_id == 3);
    CanonicalAction t = CanonicalAction::type_text("hi");
    CHECK(t.kind == ActionKind::kTypeText);
    CHECK(t.element_id == -1);
    CHECK(t.ui_type.empty());
    CHECK(CanonicalAction::task_complete().is_terminal());
    CHECK(CanonicalAction::task_impossible().is_terminal());
    CHECK_FALSE(CanonicalAction::press_back().is_terminal());
    CHECK(CanonicalAction::scroll(ScrollDirection::kUp) ==
          CanonicalAction::scroll(ScrollDirection::kUp));
    CHECK_FALSE(CanonicalAction::scroll(ScrollDirection::kUp) ==
                CanonicalAction::scroll(ScrollDirection::kDown));
}

TEST_CASE("validate_episode accepts a well-formed episode") {
    CHECK(validate_episode(one_click_episode()).empty());
}

TEST_CASE("validate_episode flags broken invariants") {
    SUBCASE("element ids must be contiguous from zero in array order") {
        Episode e = one_click_episode();
        e.steps[0].screen[0].id = 1;
        CHECK_FALSE(validate_episode(e).empty());
    }
    SUBCASE("bbox must satisfy 0 <= min < max <= 1") {
        Episode e = one_click_episode();
        e.steps[0].screen[0].bbox = {0.5, 0.1, 0.4, 0.2};
        CHECK_FALSE(validate_episode(e).empty());
        e.steps[0].screen[0].bbox = {0.1, 0.1, 1.2, 0.2};
        CHECK_FALSE(validate_episode(e).empty());
    }
    SUBCASE("non-dual-point actions must carry the sentinel points") {
        Episode e = one_click_episode();
        e.steps[1].action.touch = {0.5, 0.5};
        CHECK_FALSE(validate_episode(e).empty());
    }
    SUBCASE("typed_text only accompanies TYPE") {
        Episode e = one_click_episode();
        e.steps[1].action.typed_text = "oops";
        CHECK_FALSE(validate_episode(e).empty());
    }
    SUBCASE("terminal status only at the final step") {
        Episode e = one_click_episode();
        e.steps[0].action.kind = RawActionKind::kStatusTaskComplete;
        e.steps[0].action.touch = kSentinelPoint;
        e.steps[0].action.lift = kSentinelPoint;
        CHECK_FALSE(validate_episode(e).empty());
    }
    SUBCASE("findings are deterministic") {
        Episode e = one_click_episode();
        e.steps[0].screen[0].id = 7;
        e.steps[1].action.typed_text = "oops";
        CHECK(validate_episode(e) == validate_episode(e));
    }
}

TEST_CASE("reading order sorts by y, then x, then id") {
    std::vector<UiElement> els;
    els.push_back(element(0, "bottom", "TEXT", {0.1, 0.8, 0.3, 0.9}));
    els.push_back(element(1, "top-right", "TEXT", {0.6, 0.1, 0.9, 0.2}));
    els.push_back(element(2, "top-left", "TEXT", {0.1, 0.1, 0.3, 0.2}));
    std::vector<const UiElement*> order = reading_order(els);
    REQUIRE(order.size() == 3);
    CHECK(order[0]->id == 2);
    CHECK(order[1]->id == 1);
    CHECK(order[2]->id == 0);

    // identical boxes fall back to id
    std::vector<UiElement> same;
    same.push_back(element(1, "b", "TEXT", {0.1, 0.1, 0.2, 0.2}));
    same.push_back(element(0, "a", "TEXT", {0.1, 0.1, 0.2, 0.2}));
    std::vector<const UiElement*> tie = reading_order(same);
    CHECK(tie[0]->id == 0);
    CHECK(tie[1]->id == 1);
}
