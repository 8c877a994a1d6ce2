#include "sopbench/policy.hpp"

#include <array>

#include "sopbench/errors.hpp"
#include "sopbench/rng.hpp"

namespace sopbench {

namespace {

class OraclePolicy final : public Policy {
  public:
    std::string_view name() const override { return "oracle"; }

    PredictionOutcome predict(const PolicyContext&, const CanonicalAction* gold) override {
        if (!gold) {
            PredictionOutcome p;
            p.note = "oracle policy needs teacher forcing";
            return p;
        }
        return PredictionOutcome::of(*gold);
    }
};

class RuleSopPolicy final : public Policy {
  public:
    explicit RuleSopPolicy(RuleSet rules) : rules_(std::move(rules)) {
        for (const SopRule& r : rules_.rules) {
            if (r.match_on == MatchOn::kKind && r.pattern == "type" && !r.excluded) {
                size_t star = r.description.find('*');
                if (star != std::string::npos) {
                    type_prefix_ = r.description.substr(0, star);
                    type_suffix_ = r.description.substr(star + 1);
                }
            }
        }
        if (auto desc = classify_action(CanonicalAction::task_complete(), rules_)) {
            complete_description_ = *desc;
        }
    }

    std::string_view name() const override { return "rule_sop"; }

    PredictionOutcome predict(const PolicyContext& ctx, const CanonicalAction*) override {
        if (!ctx.pipeline) throw MissingPipeline();
        std::vector<SopState> states = states_at_step(*ctx.pipeline, ctx.step);
        const SopEntry* current = nullptr;
        for (size_t i = 0; i < states.size(); ++i) {
            if (states[i] == SopState::kUnfinish) {
                current = &ctx.pipeline->entries[i];
                break;
            }
        }
        if (!current) {
            // past the last entry; the task can only be done
            return PredictionOutcome::of(CanonicalAction::task_complete());
        }
        const std::string& desc = current->description;

        if (!type_prefix_.empty() && desc.size() > type_prefix_.size() + type_suffix_.size() &&
            desc.rfind(type_prefix_, 0) == 0 &&
            desc.compare(desc.size() - type_suffix_.size(), type_suffix_.size(), type_suffix_) == 0) {
            return PredictionOutcome::of(CanonicalAction::type_text(
                desc.substr(type_prefix_.size(),
                            desc.size() - type_prefix_.size() - type_suffix_.size())));
        }
        if (desc == complete_description_) {
            return PredictionOutcome::of(CanonicalAction::task_complete());
        }
        for (const UiElement* el : reading_order(ctx.screen)) {
            std::optional<std::string> classified =
                classify_action(CanonicalAction::click(el->id, el->text, el->ui_type), rules_);
            if (classified && *classified == desc) {
                return PredictionOutcome::of(CanonicalAction::click(el->id, el->text, el->ui_type));
            }
        }
        return PredictionOutcome::of(CanonicalAction::scroll(ScrollDirection::kDown));
    }

  private:
    RuleSet rules_;
    std::string type_prefix_;
    std::string type_suffix_;
    std::string complete_description_;
};

class RandomPolicy final : public Policy {
  public:
    explicit RandomPolicy(std::uint64_t seed) : seed_(seed) {}

    std::string_view name() const override { return "random"; }

    PredictionOutcome predict(const PolicyContext& ctx, const CanonicalAction*) override {
        std::uint64_t episode_key = ctx.episode ? fnv1a64(ctx.episode->episode_id) : 0;
        Rng rng(seed_ ^ episode_key ^
                (static_cast<std::uint64_t>(ctx.step) * 0x9E3779B97F4A7C15ull));
        switch (rng.index(8)) {
            case 0: {
                if (ctx.screen.empty()) {
                    return PredictionOutcome::of(CanonicalAction::click(-1, "", ""));
                }
                const UiElement& el = ctx.screen[rng.index(ctx.screen.size())];
                return PredictionOutcome::of(CanonicalAction::click(el.id, el.text, el.ui_type));
            }
            case 1: {
                static constexpr std::array<ScrollDirection, 4> kDirections = {
                    ScrollDirection::kUp, ScrollDirection::kDown, ScrollDirection::kLeft,
                    ScrollDirection::kRight};
                return PredictionOutcome::of(
                    CanonicalAction::scroll(kDirections[rng.index(4)]));
            }
            case 2: {
                static const std::vector<std::string> kWords = {"hello", "search", "next",
                                                                "open", "test"};
                return PredictionOutcome::of(CanonicalAction::type_text(rng.pick(kWords)));
            }
            case 3: return PredictionOutcome::of(CanonicalAction::press_back());
            case 4: return PredictionOutcome::of(CanonicalAction::press_home());
            case 5: return PredictionOutcome::of(CanonicalAction::press_enter());
            case 6: return PredictionOutcome::of(CanonicalAction::task_complete());
            default: return PredictionOutcome::of(CanonicalAction::task_impossible());
        }
    }

  private:
    std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<Policy> make_oracle_policy() { return std::make_unique<OraclePolicy>(); }

std::unique_ptr<Policy> make_rule_sop_policy(RuleSet rules) {
    return std::make_unique<RuleSopPolicy>(std::move(rules));
}

std::unique_ptr<Policy> make_random_policy(std::uint64_t seed) {
    return std::make_unique<RandomPolicy>(seed);
}

}  // namespace sopbench
