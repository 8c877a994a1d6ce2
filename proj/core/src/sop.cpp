#include "sopbench/sop.hpp"

#include <stdexcept>

#include "json.hpp"
#include "sopbench/errors.hpp"
#include "sopbench/io.hpp"
#include "sopbench/strings.hpp"

namespace sopbench {

namespace {

// Rule-file kind tokens, lowercase by convention.
std::string_view rule_kind_token(ActionKind k) {
    switch (k) {
        case ActionKind::kClick: return "click";
        case ActionKind::kScroll: return "scroll";
        case ActionKind::kTypeText: return "type";
        case ActionKind::kPressBack: return "press_back";
        case ActionKind::kPressHome: return "press_home";
        case ActionKind::kPressEnter: return "press_enter";
        case ActionKind::kTaskComplete: return "task_complete";
        case ActionKind::kTaskImpossible: return "task_impossible";
    }
    throw std::logic_error("unreachable action kind");
}

// text > ui_type > kind when priorities tie.
int specificity(MatchOn m) {
    switch (m) {
        case MatchOn::kText: return 3;
        case MatchOn::kUiType: return 2;
        case MatchOn::kKind: return 1;
    }
    return 0;
}

bool rule_matches(const SopRule& r, const CanonicalAction& a) {
    switch (r.match_on) {
        case MatchOn::kKind:
            return r.pattern == "*" || r.pattern == rule_kind_token(a.kind);
        case MatchOn::kText:
            if (a.kind != ActionKind::kClick) return false;
            if (r.exact) return normalize_text(a.text) == normalize_text(r.pattern);
            return contains_word_sequence(a.text, r.pattern);
        case MatchOn::kUiType:
            if (a.kind != ActionKind::kClick) return false;
            return to_lower(a.ui_type) == to_lower(r.pattern);
    }
    return false;
}

const SopRule& firing_rule(const CanonicalAction& a, const RuleSet& rules) {
    const SopRule* best = nullptr;
    for (const SopRule& r : rules.rules) {
        if (!rule_matches(r, a)) continue;
        if (!best || r.priority > best->priority ||
            (r.priority == best->priority &&
             specificity(r.match_on) > specificity(best->match_on))) {
            best = &r;
        }
    }
    if (!best) {
        throw DataError("rule set '" + rules.name + "' failed to classify an action; missing catch-all");
    }
    return *best;
}

SopRule rule_from_json(const nlohmann::json& j, int line_number) {
    if (!j.is_object()) throw ParseError(line_number, "rule record is not an object");
    SopRule r;
    try {
        r.match_on = match_on_from_name(j.at("match_on").get<std::string>());
        r.pattern = j.at("pattern").get<std::string>();
        r.description = j.value("description", std::string());
        r.excluded = j.value("excluded", false);
        r.exact = j.value("exact", true);
        r.priority = j.value("priority", 0);
        r.source = j.value("source", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_number, e.what());
    }
    if (r.pattern.empty()) throw ParseError(line_number, "rule pattern is empty");
    if (!r.excluded && r.description.empty()) {
        throw ParseError(line_number, "non-excluded rule lacks a description");
    }
    return r;
}

}  // namespace

std::string_view match_on_name(MatchOn m) {
    switch (m) {
        case MatchOn::kKind: return "kind";
        case MatchOn::kText: return "text";
        case MatchOn::kUiType: return "ui_type";
    }
    throw std::logic_error("unreachable match_on");
}

MatchOn match_on_from_name(std::string_view name) {
    if (name == "kind") return MatchOn::kKind;
    if (name == "text") return MatchOn::kText;
    if (name == "ui_type") return MatchOn::kUiType;
    throw DataError("unknown rule matcher '" + std::string(name) + "'");
}

std::string_view sop_state_name(SopState s) {
    return s == SopState::kFinish ? "finish" : "unfinish";
}

RuleSet RuleSet::parse(std::string_view text, std::string name) {
    RuleSet set;
    set.name = std::move(name);
    int line_number = 0;
    for (const std::string& line : split_lines(text)) {
        ++line_number;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError(line_number, "malformed JSON");
        set.rules.push_back(rule_from_json(j, line_number));
    }
    bool has_catch_all = false;
    for (const SopRule& r : set.rules) {
        if (r.match_on == MatchOn::kKind && r.pattern == "*") has_catch_all = true;
    }
    if (set.rules.empty()) throw DataError("rule set '" + set.name + "' is empty");
    if (!has_catch_all) throw DataError("rule set '" + set.name + "' lacks a catch-all rule");
    return set;
}

RuleSet RuleSet::builtin(std::string_view name) {
    return parse(builtin_rules_text(name), std::string(name));
}

RuleSet RuleSet::load_file(const std::string& path) {
    std::string text = read_text_file(path);
    return parse(text, path);
}

std::optional<std::string> classify_action(const CanonicalAction& a, const RuleSet& rules) {
    const SopRule& r = firing_rule(a, rules);
    if (r.excluded) return std::nullopt;
    if (r.description.find('*') != std::string::npos) {
        return replace_first(r.description, "*", a.text);
    }
    return r.description;
}

SopPipeline build_pipeline(const Episode& e, std::span<const CanonicalAction> canon,
                           const RuleSet& rules) {
    if (canon.size() != e.steps.size()) {
        throw DataError("episode '" + e.episode_id + "': canonical actions misaligned with steps");
    }
    SopPipeline p;
    for (size_t i = 0; i < canon.size(); ++i) {
        std::optional<std::string> desc = classify_action(canon[i], rules);
        if (!desc) continue;
        if (!p.entries.empty() && p.entries.back().description == *desc) {
            p.entries.back().last_step = static_cast<int>(i);
            continue;
        }
        SopEntry entry;
        entry.id = static_cast<int>(p.entries.size());
        entry.description = std::move(*desc);
        entry.first_step = static_cast<int>(i);
        entry.last_step = static_cast<int>(i);
        p.entries.push_back(std::move(entry));
    }
    if (p.entries.empty()) throw EmptyPipeline(e.episode_id);
    return p;
}

std::vector<SopState> states_at_step(const SopPipeline& p, int t) {
    std::vector<SopState> states;
    states.reserve(p.entries.size());
    for (const SopEntry& entry : p.entries) {
        states.push_back(entry.last_step < t ? SopState::kFinish : SopState::kUnfinish);
    }
    return states;
}

std::string RuleClickTextClassifier::classify(std::string_view text) const {
    return classify_click_text(text, rules_);
}

std::string classify_click_text(std::string_view text, const RuleSet& rules) {
    CanonicalAction probe = CanonicalAction::click(-1, std::string(text), "");
    const SopRule& r = firing_rule(probe, rules);
    return r.description.empty() ? "Others" : r.description;
}

}  // namespace sopbench
