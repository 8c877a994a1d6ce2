#include "sopbench/structured.hpp"

#include <algorithm>

#include "sopbench/errors.hpp"
#include "sopbench/strings.hpp"

#include "json.hpp"

namespace sopbench {

std::string_view structured_kind_name(StructuredKind k) {
    switch (k) {
        case StructuredKind::kPrivacyAuthorization: return "privacy_authorization";
        case StructuredKind::kNotificationConfirmation: return "notification_confirmation";
        case StructuredKind::kSlotSelection: return "slot_selection";
    }
    return "notification_confirmation";
}

StructuredKind structured_kind_from_name(std::string_view name) {
    if (name == "privacy_authorization") return StructuredKind::kPrivacyAuthorization;
    if (name == "notification_confirmation") return StructuredKind::kNotificationConfirmation;
    if (name == "slot_selection") return StructuredKind::kSlotSelection;
    throw ConfigError("unknown structured page kind: '" + std::string(name) + "'");
}

std::vector<std::string> default_affirmative_keywords() {
    return {"i understand", "confirm", "agree", "ok"};
}

namespace {

bool matches_any(std::string_view text, const std::vector<std::string>& keywords) {
    return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& k) {
        return contains_word_sequence(text, k);
    });
}

// Option candidates: explicit buttons, plus anything worded like one.
bool is_button_like(const UiElement& el, const StructuredConfig& cfg) {
    if (to_lower(el.ui_type).find("button") != std::string::npos) {
        return true;
    }
    return matches_any(el.text, cfg.affirmative) || matches_any(el.text, cfg.negative);
}

bool is_body_block(const UiElement& el, const StructuredConfig& cfg) {
    if (is_button_like(el, cfg)) {
        return false;
    }
    return trim(el.text).size() >= static_cast<size_t>(cfg.body_threshold);
}

}  // namespace

std::optional<StructuredKind> detect_structured_page(std::span<const UiElement> screen,
                                                     const StructuredConfig& cfg) {
    bool affirmative_option = false;
    bool body_block = false;
    bool authorization = false;
    int option_labels = 0;
    std::vector<std::string> seen_labels;
    for (const UiElement& el : screen) {
        const std::string label(trim(el.text));
        if (is_button_like(el, cfg) && !label.empty()) {
            if (std::find(seen_labels.begin(), seen_labels.end(), label) == seen_labels.end()) {
                seen_labels.push_back(label);
                ++option_labels;
            }
            if (matches_any(el.text, cfg.affirmative)) {
                affirmative_option = true;
            }
        } else if (is_body_block(el, cfg)) {
            body_block = true;
        }
        if (matches_any(el.text, cfg.authorization)) {
            authorization = true;
        }
    }
    if (affirmative_option && body_block) {
        return authorization ? StructuredKind::kPrivacyAuthorization
                             : StructuredKind::kNotificationConfirmation;
    }
    if (option_labels >= 2 && !body_block) {
        return StructuredKind::kSlotSelection;
    }
    return std::nullopt;
}

namespace {

class RuleDetector final : public StructuredDetector {
  public:
    explicit RuleDetector(StructuredConfig cfg) : cfg_(std::move(cfg)) {}
    std::optional<StructuredKind> detect(std::span<const UiElement> screen) const override {
        return detect_structured_page(screen, cfg_);
    }

  private:
    StructuredConfig cfg_;
};

}  // namespace

std::unique_ptr<StructuredDetector> make_rule_detector(StructuredConfig cfg) {
    return std::make_unique<RuleDetector>(std::move(cfg));
}

StructuredPayload extract_payload(std::span<const UiElement> screen, StructuredKind kind,
                                  const StructuredConfig& cfg) {
    StructuredPayload payload;
    payload.kind = kind;
    std::vector<std::string> longs;
    std::vector<std::string> shorts;
    for (const UiElement* el : reading_order(screen)) {
        const std::string label(trim(el->text));
        if (label.empty()) {
            continue;
        }
        if (is_button_like(*el, cfg)) {
            if (std::find(payload.options.begin(), payload.options.end(), label) ==
                payload.options.end()) {
                payload.options.push_back(label);
            }
        } else if (label.size() >= static_cast<size_t>(cfg.body_threshold)) {
            longs.push_back(label);
        } else {
            shorts.push_back(label);
        }
    }
    if (payload.options.empty()) {
        throw ExtractionFailure("no option labels found on a " +
                                std::string(structured_kind_name(kind)) + " page");
    }
    for (size_t i = 0; i < longs.size(); ++i) {
        if (i > 0) {
            payload.body += '\n';
        }
        payload.body += longs[i];
    }
    if (kind != StructuredKind::kSlotSelection && payload.body.empty()) {
        throw ExtractionFailure("confirmation page has no body text");
    }
    payload.title = shorts.empty() ? payload.options.front() : shorts.front();
    return payload;
}

std::string apply_user_script(const StructuredPayload& p, const UserResponseScript& s) {
    if (p.options.empty()) {
        throw LabelNotFound("(payload has no options)");
    }
    switch (s.strategy) {
        case ResponseStrategy::kFirstAffirmative:
            for (const std::string& opt : p.options) {
                if (matches_any(opt, s.affirmative_keywords)) {
                    return opt;
                }
            }
            return p.options.front();
        case ResponseStrategy::kFixedLabel:
            for (const std::string& opt : p.options) {
                if (normalize_text(opt) == normalize_text(s.label)) {
                    return opt;
                }
            }
            throw LabelNotFound(s.label);
        case ResponseStrategy::kIndexed:
            if (s.index < 0 || static_cast<size_t>(s.index) >= p.options.size()) {
                throw LabelNotFound("index " + std::to_string(s.index));
            }
            return p.options[static_cast<size_t>(s.index)];
    }
    throw LabelNotFound("(unknown strategy)");
}

std::optional<CanonicalAction> structured_click(std::span<const UiElement> screen,
                                                const UserResponseScript& script,
                                                const StructuredConfig& cfg) {
    const std::optional<StructuredKind> kind = detect_structured_page(screen, cfg);
    if (!kind) {
        return std::nullopt;
    }
    const StructuredPayload payload = extract_payload(screen, *kind, cfg);
    const std::string label = apply_user_script(payload, script);
    for (const UiElement* el : reading_order(screen)) {
        if (is_button_like(*el, cfg) && trim(el->text) == label) {
            return CanonicalAction::click(el->id, el->text, el->ui_type);
        }
    }
    throw LabelNotFound(label);  // unreachable: the label came from this screen
}

std::string payload_to_json(const StructuredPayload& p) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(structured_kind_name(p.kind));
    j["title"] = p.title;
    j["body"] = p.body;
    j["options"] = p.options;
    return j.dump();
}

}  // namespace sopbench
