#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sopbench/episode.hpp"

namespace sopbench {

enum class StructuredKind {
    kPrivacyAuthorization,
    kNotificationConfirmation,
    kSlotSelection,
};

std::string_view structured_kind_name(StructuredKind k);
StructuredKind structured_kind_from_name(std::string_view name);

std::vector<std::string> default_affirmative_keywords();

// Detection knobs. Keywords are matched case-insensitively on word
// boundaries, so "ok" hits "OK, got it" but not "booking". The bundled
// inventory is English; swap the lists for other locales.
struct StructuredConfig {
    // Minimum characters (after trimming) for a text element to count as a
    // body block rather than a label.
    int body_threshold = 40;
    std::vector<std::string> affirmative = default_affirmative_keywords();
    std::vector<std::string> negative = {"cancel", "close", "dismiss", "no", "deny"};
    std::vector<std::string> authorization = {"authorize", "privacy", "permission"};
};

// A noisy screen reduced to a message plus the choices offered to the user.
struct StructuredPayload {
    StructuredKind kind = StructuredKind::kNotificationConfirmation;
    std::string title;
    std::string body;                   // long blocks joined with '\n', reading order
    std::vector<std::string> options;   // distinct labels, reading order, never empty

    bool operator==(const StructuredPayload&) const = default;
};

// Rule-based page classification, checked in order:
//   privacy_authorization      affirmative option + body block + authorization keyword
//   notification_confirmation  affirmative option + body block
//   slot_selection             >= 2 option labels and no body block
// Returns nullopt for ordinary pages.
std::optional<StructuredKind> detect_structured_page(std::span<const UiElement> screen,
                                                     const StructuredConfig& cfg = {});

// Swappable detector so a learned classifier can replace the rules.
class StructuredDetector {
  public:
    virtual ~StructuredDetector() = default;
    virtual std::optional<StructuredKind> detect(std::span<const UiElement> screen) const = 0;
};

std::unique_ptr<StructuredDetector> make_rule_detector(StructuredConfig cfg = {});

// Title = first short non-option block (first option label when there is
// none); body = long blocks in reading order; options = button-like labels
// in reading order, deduplicated. ExtractionFailure when no options are
// found, or when a confirmation kind has no body text.
StructuredPayload extract_payload(std::span<const UiElement> screen, StructuredKind kind,
                                  const StructuredConfig& cfg = {});

enum class ResponseStrategy { kFirstAffirmative, kFixedLabel, kIndexed };

// Scripted stand-in for the human reply in batch runs.
struct UserResponseScript {
    ResponseStrategy strategy = ResponseStrategy::kFirstAffirmative;
    std::string label;  // fixed_label only
    int index = 0;      // indexed only
    std::vector<std::string> affirmative_keywords = default_affirmative_keywords();
};

// Deterministic option choice. first_affirmative falls back to the first
// option; fixed_label compares normalized and throws LabelNotFound on a
// miss (as does an out-of-range index).
std::string apply_user_script(const StructuredPayload& p, const UserResponseScript& s);

// detect -> extract -> apply -> Click on the chosen option's element, the
// whole loop in one call; nullopt when the screen is not a structured page.
std::optional<CanonicalAction> structured_click(std::span<const UiElement> screen,
                                                const UserResponseScript& script,
                                                const StructuredConfig& cfg = {});

// {"kind","title","body","options"} for chat-surface consumers.
std::string payload_to_json(const StructuredPayload& p);

}  // namespace sopbench
