#include "sopbench/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "sopbench/errors.hpp"
#include "sopbench/parallel.hpp"
#include "sopbench/strings.hpp"

#include "json.hpp"

namespace sopbench {

using ordered_json = nlohmann::ordered_json;

std::string_view click_match_mode_name(ClickMatchMode m) {
    switch (m) {
        case ClickMatchMode::kExactElement: return "exact_element";
        case ClickMatchMode::kEnlargedContainment: return "enlarged_containment";
    }
    return "exact_element";
}

ClickMatchMode click_match_mode_from_name(std::string_view name) {
    if (name == "exact_element") return ClickMatchMode::kExactElement;
    if (name == "enlarged_containment") return ClickMatchMode::kEnlargedContainment;
    throw ConfigError("unknown click match mode: '" + std::string(name) + "'");
}

bool match_action(const CanonicalAction& pred, const CanonicalAction& gold,
                  std::span<const UiElement> screen, const MatchConfig& cfg,
                  const Point* gold_touch) {
    if (pred.kind != gold.kind) {
        return false;
    }
    switch (gold.kind) {
        case ActionKind::kClick: {
            if (pred.element_id == gold.element_id) {
                return true;
            }
            if (cfg.click_mode == ClickMatchMode::kExactElement) {
                return false;
            }
            if (gold_touch == nullptr || pred.element_id < 0) {
                return false;
            }
            for (const UiElement& el : screen) {
                if (el.id == pred.element_id) {
                    return expand_bbox(el, cfg.grounding.expand_fraction).contains(*gold_touch);
                }
            }
            return false;  // prediction names an element the screen lacks
        }
        case ActionKind::kScroll:
            return pred.direction == gold.direction;
        case ActionKind::kTypeText:
            if (cfg.normalize_text) {
                return normalize_text(pred.text) == normalize_text(gold.text);
            }
            return pred.text == gold.text;
        default:
            return true;  // presses and statuses carry no payload
    }
}

namespace {

long correct_steps(const Episode& e, std::span<const ReplayStep> steps, const MatchConfig& cfg) {
    long correct = 0;
    for (const ReplayStep& s : steps) {
        if (!s.gold || s.unevaluated || !s.prediction.action) {
            continue;
        }
        const auto t = static_cast<size_t>(s.step_index);
        const RawAction& raw = e.steps[t].action;
        const Point* touch = raw.kind == RawActionKind::kDualPoint ? &raw.touch : nullptr;
        if (match_action(*s.prediction.action, *s.gold, e.steps[t].screen, cfg, touch)) {
            ++correct;
        }
    }
    return correct;
}

}  // namespace

double score_episode(const Episode& e, std::span<const ReplayStep> steps,
                     const MatchConfig& cfg) {
    if (e.steps.empty()) {
        throw EmptyEpisode("episode '" + e.episode_id + "' has no steps to score");
    }
    return static_cast<double>(correct_steps(e, steps, cfg)) /
           static_cast<double>(e.steps.size());
}

EvalReport aggregate(std::string model, std::span<const EpisodeScore> episodes) {
    EvalReport report;
    report.model = std::move(model);
    report.episodes.assign(episodes.begin(), episodes.end());

    std::map<std::string, std::pair<double, long>> by_subset;  // sum, count
    for (const EpisodeScore& ep : episodes) {
        if (ep.unevaluated) {
            ++report.counts.unevaluated_episodes;
            continue;
        }
        auto& [sum, count] = by_subset[ep.subset];
        sum += ep.partial;
        ++count;
    }
    double total = 0.0;
    for (const auto& [subset, acc] : by_subset) {
        const double score = 100.0 * acc.first / static_cast<double>(acc.second);
        report.subset_scores[subset] = score;
        total += score;
    }
    report.overall = by_subset.empty() ? 0.0 : total / static_cast<double>(by_subset.size());
    return report;
}

std::vector<VariantTokenStats> token_stats(std::span<const PromptSample> samples) {
    struct Acc {
        long n = 0;
        double prompt = 0.0;
        double response = 0.0;
    };
    std::map<Variant, Acc> by_variant;
    for (const PromptSample& s : samples) {
        Acc& a = by_variant[s.variant];
        ++a.n;
        a.prompt += s.prompt_tokens;
        a.response += s.response_tokens;
    }
    std::vector<VariantTokenStats> out;
    for (const auto& [variant, acc] : by_variant) {
        VariantTokenStats st;
        st.variant = variant;
        st.samples = acc.n;
        st.mean_prompt_tokens = acc.prompt / static_cast<double>(acc.n);
        st.mean_response_tokens = acc.response / static_cast<double>(acc.n);
        out.push_back(st);
    }
    return out;
}

std::optional<bool> check_token_ordering(std::span<const VariantTokenStats> stats) {
    const VariantTokenStats* base = nullptr;
    const VariantTokenStats* plan = nullptr;
    const VariantTokenStats* plan_state = nullptr;
    const VariantTokenStats* sop = nullptr;
    for (const VariantTokenStats& st : stats) {
        switch (st.variant) {
            case Variant::kBase: base = &st; break;
            case Variant::kPlan: plan = &st; break;
            case Variant::kPlanState: plan_state = &st; break;
            case Variant::kSop: sop = &st; break;
        }
    }
    if (base == nullptr || plan == nullptr || plan_state == nullptr || sop == nullptr) {
        return std::nullopt;
    }
    // base and sop responses are byte-identical, so their means may only
    // drift when the variants cover different episode sets.
    constexpr double kEps = 1e-6;
    const bool ok =
        std::abs(base->mean_response_tokens - sop->mean_response_tokens) <= kEps &&
        base->mean_response_tokens < plan->mean_response_tokens &&
        plan->mean_response_tokens <= plan_state->mean_response_tokens + kEps;
    return ok;
}

EvalReport evaluate_corpus(const Corpus& corpus, Policy& policy, const RuleSet* rules,
                           const EvalOptions& options) {
    if (corpus.episodes.empty()) {
        throw EmptyCorpus();
    }
    struct PerEpisode {
        EpisodeScore score;
        EvalCounts counts;
    };
    auto results = parallel_map_indexed(
        corpus.episodes.size(), options.jobs, [&](size_t i) -> PerEpisode {
            const Episode& e = corpus.episodes[i];
            PerEpisode out;
            out.score.episode_id = e.episode_id;
            out.score.subset = e.subset;
            try {
                const std::vector<ReplayStep> steps =
                    replay_episode(e, policy, rules, options.replay);
                out.counts.correct = correct_steps(e, steps, options.match);
                out.score.partial = static_cast<double>(out.counts.correct) /
                                    static_cast<double>(e.steps.size());
                for (const ReplayStep& s : steps) {
                    ++out.counts.steps;
                    if (s.unevaluated) {
                        ++out.counts.unevaluated_steps;
                    }
                    if (s.prediction.parse_failure) {
                        ++out.counts.parse_failures;
                    }
                    if (s.gold && s.gold->kind == ActionKind::kClick && s.gold->element_id < 0) {
                        ++out.counts.ungrounded_gold;
                    }
                }
            } catch (const EndpointUnavailable&) {
                out.score.unevaluated = true;
            }
            return out;
        });

    std::vector<EpisodeScore> scores;
    scores.reserve(results.size());
    EvalCounts merged;
    for (const PerEpisode& r : results) {
        scores.push_back(r.score);
        merged.steps += r.counts.steps;
        merged.correct += r.counts.correct;
        merged.ungrounded_gold += r.counts.ungrounded_gold;
        merged.parse_failures += r.counts.parse_failures;
        merged.unevaluated_steps += r.counts.unevaluated_steps;
    }
    EvalReport report = aggregate(std::string(policy.name()), scores);
    merged.unevaluated_episodes = report.counts.unevaluated_episodes;
    report.counts = merged;
    return report;
}

std::string report_to_json(const EvalReport& report) {
    ordered_json j;
    j["model"] = report.model;
    j["overall"] = report.overall;
    ordered_json subsets = ordered_json::object();
    for (const auto& [name, score] : report.subset_scores) {
        subsets[name] = score;
    }
    j["subset_scores"] = std::move(subsets);
    j["counts"] = {
        {"steps", report.counts.steps},
        {"correct", report.counts.correct},
        {"ungrounded_gold", report.counts.ungrounded_gold},
        {"parse_failures", report.counts.parse_failures},
        {"unevaluated_steps", report.counts.unevaluated_steps},
        {"unevaluated_episodes", report.counts.unevaluated_episodes},
    };
    ordered_json eps = ordered_json::array();
    for (const EpisodeScore& ep : report.episodes) {
        eps.push_back({{"episode_id", ep.episode_id},
                       {"subset", ep.subset},
                       {"partial", ep.partial},
                       {"unevaluated", ep.unevaluated}});
    }
    j["episodes"] = std::move(eps);
    ordered_json tokens = ordered_json::array();
    for (const VariantTokenStats& st : report.token_stats) {
        tokens.push_back({{"variant", std::string(variant_name(st.variant))},
                          {"samples", st.samples},
                          {"mean_prompt_tokens", st.mean_prompt_tokens},
                          {"mean_response_tokens", st.mean_response_tokens}});
    }
    j["token_stats"] = std::move(tokens);
    if (report.token_ordering_ok) {
        j["token_ordering_ok"] = *report.token_ordering_ok;
    }
    return j.dump(2);
}

EvalReport report_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("report is not valid JSON: ") + ex.what());
    }
    try {
        EvalReport report;
        report.model = j.at("model").get<std::string>();
        report.overall = j.at("overall").get<double>();
        for (const auto& [name, score] : j.at("subset_scores").items()) {
            report.subset_scores[name] = score.get<double>();
        }
        const auto& counts = j.at("counts");
        report.counts.steps = counts.at("steps").get<long>();
        report.counts.correct = counts.at("correct").get<long>();
        report.counts.ungrounded_gold = counts.at("ungrounded_gold").get<long>();
        report.counts.parse_failures = counts.at("parse_failures").get<long>();
        report.counts.unevaluated_steps = counts.at("unevaluated_steps").get<long>();
        report.counts.unevaluated_episodes = counts.at("unevaluated_episodes").get<long>();
        for (const auto& ep : j.at("episodes")) {
            EpisodeScore score;
            score.episode_id = ep.at("episode_id").get<std::string>();
            score.subset = ep.at("subset").get<std::string>();
            score.partial = ep.at("partial").get<double>();
            score.unevaluated = ep.at("unevaluated").get<bool>();
            report.episodes.push_back(std::move(score));
        }
        if (j.contains("token_stats")) {
            for (const auto& st : j.at("token_stats")) {
                VariantTokenStats stats;
                stats.variant = variant_from_name(st.at("variant").get<std::string>());
                stats.samples = st.at("samples").get<long>();
                stats.mean_prompt_tokens = st.at("mean_prompt_tokens").get<double>();
                stats.mean_response_tokens = st.at("mean_response_tokens").get<double>();
                report.token_stats.push_back(stats);
            }
        }
        if (j.contains("token_ordering_ok") && !j.at("token_ordering_ok").is_null()) {
            report.token_ordering_ok = j.at("token_ordering_ok").get<bool>();
        }
        return report;
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("malformed report: ") + ex.what());
    }
}

namespace {

// AitW subset keys get their conventional display names; anything else
// (synthetic or medical subsets) is shown verbatim.
std::string subset_display_name(const std::string& subset) {
    if (subset == "general") return "General";
    if (subset == "install") return "Install";
    if (subset == "google_apps") return "GoogleApps";
    if (subset == "single") return "Single";
    if (subset == "web_shopping") return "WebShopping";
    return subset;
}

std::string format_score(double score) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", score);
    return buf;
}

}  // namespace

std::string render_report_table(std::span<const EvalReport> reports) {
    static const std::vector<std::string> kKnownOrder = {"general", "install", "google_apps",
                                                         "single", "web_shopping"};
    std::vector<std::string> subset_columns;
    for (const std::string& s : kKnownOrder) {
        subset_columns.push_back(s);
    }
    std::set<std::string> extras;
    for (const EvalReport& r : reports) {
        for (const auto& [subset, _] : r.subset_scores) {
            if (std::find(kKnownOrder.begin(), kKnownOrder.end(), subset) == kKnownOrder.end()) {
                extras.insert(subset);
            }
        }
    }
    subset_columns.insert(subset_columns.end(), extras.begin(), extras.end());

    std::vector<std::string> header = {"Model", "Overall"};
    for (const std::string& s : subset_columns) {
        header.push_back(subset_display_name(s));
    }
    std::vector<std::vector<std::string>> rows;
    for (const EvalReport& r : reports) {
        std::vector<std::string> row = {r.model, format_score(r.overall)};
        for (const std::string& s : subset_columns) {
            auto it = r.subset_scores.find(s);
            row.push_back(it == r.subset_scores.end() ? "-" : format_score(it->second));
        }
        rows.push_back(std::move(row));
    }

    std::vector<size_t> widths(header.size());
    for (size_t c = 0; c < header.size(); ++c) {
        widths[c] = header[c].size();
        for (const auto& row : rows) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string out;
    auto append_row = [&](const std::vector<std::string>& row) {
        for (size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) {
                out.append(widths[c] - row[c].size() + 2, ' ');
            }
        }
        out += '\n';
    };
    append_row(header);
    size_t rule_len = 0;
    for (size_t c = 0; c < widths.size(); ++c) {
        rule_len += widths[c] + (c + 1 < widths.size() ? 2 : 0);
    }
    out.append(rule_len, '-');
    out += '\n';
    for (const auto& row : rows) {
        append_row(row);
    }
    return out;
}

}  // namespace sopbench
