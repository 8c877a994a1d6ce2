#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sopbench/episode.hpp"

namespace sopbench {

enum class MatchOn {
    kKind,    // canonical action kind token; "*" is the catch-all
    kText,    // click text keyword
    kUiType,  // click element ui_type
};

std::string_view match_on_name(MatchOn m);
MatchOn match_on_from_name(std::string_view name);

struct SopRule {
    MatchOn match_on = MatchOn::kKind;
    std::string pattern;
    // Subtask string; a '*' slot is filled with the action text. Empty only
    // for excluded rules.
    std::string description;
    bool excluded = false;
    // Text rules: exact (full-string, case-insensitive) vs contiguous
    // word-sequence containment.
    bool exact = true;
    int priority = 0;
    std::string source;
};

struct RuleSet {
    std::string name;
    std::vector<SopRule> rules;

    // Bundled sets: "aitw", "aia_medical". Unknown names raise ConfigError.
    static RuleSet builtin(std::string_view name);
    static RuleSet load_file(const std::string& path);
    static RuleSet parse(std::string_view text, std::string name);
};

// Embedded copy of a bundled rule file, byte-identical to the shipped data file.
std::string_view builtin_rules_text(std::string_view name);

struct SopEntry {
    int id = 0;
    std::string description;
    // Source raw-step index span covered by this entry (inclusive).
    int first_step = 0;
    int last_step = 0;

    bool operator==(const SopEntry&) const = default;
};

struct SopPipeline {
    std::vector<SopEntry> entries;
};

enum class SopState { kFinish, kUnfinish };

std::string_view sop_state_name(SopState s);

// Single firing rule's description with the '*' slot filled, or nullopt when
// the action is excluded from pipelines. Total for any rule set with a
// catch-all: highest priority wins, ties broken by matcher specificity
// (text > ui_type > kind), then file order.
std::optional<std::string> classify_action(const CanonicalAction& a, const RuleSet& rules);

// Excluded steps dropped, consecutive identical descriptions merged into one
// entry spanning all contributing steps. Raises EmptyPipeline when every step
// is excluded.
SopPipeline build_pipeline(const Episode& e, std::span<const CanonicalAction> canon,
                           const RuleSet& rules);

// states[i] applies to pipeline.entries[i]: finish iff entry.last_step < t,
// so the in-progress entry still reads unfinish.
std::vector<SopState> states_at_step(const SopPipeline& p, int t);

// Keyword stand-in for a trained click-text classifier; falls through to the
// excluded "Others" bucket.
class ClickTextClassifier {
  public:
    virtual ~ClickTextClassifier() = default;
    virtual std::string classify(std::string_view text) const = 0;
};

class RuleClickTextClassifier final : public ClickTextClassifier {
  public:
    explicit RuleClickTextClassifier(RuleSet rules) : rules_(std::move(rules)) {}
    std::string classify(std::string_view text) const override;

  private:
    RuleSet rules_;
};

std::string classify_click_text(std::string_view text, const RuleSet& rules);

}  // namespace sopbench
