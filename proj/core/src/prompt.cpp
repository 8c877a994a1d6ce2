#include "sopbench/prompt.hpp"

#include <charconv>

#include "json.hpp"
#include "sopbench/errors.hpp"
#include "sopbench/io.hpp"
#include "sopbench/parallel.hpp"
#include "sopbench/strings.hpp"

namespace sopbench {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kHeader =
    "Given a mobile screen and a question, provide the action based on the screen information.";

// Token used both in history lines and as the response "action:" value.
std::string action_token(const CanonicalAction& a) {
    switch (a.kind) {
        case ActionKind::kClick: return "DUAL_POINT";
        case ActionKind::kScroll: return "SCROLL " + std::string(scroll_direction_name(a.direction));
        case ActionKind::kTypeText: return "TYPE";
        case ActionKind::kPressBack: return "PRESS_BACK";
        case ActionKind::kPressHome: return "PRESS_HOME";
        case ActionKind::kPressEnter: return "PRESS_ENTER";
        case ActionKind::kTaskComplete: return "TASK_COMPLETE";
        case ActionKind::kTaskImpossible: return "TASK_IMPOSSIBLE";
    }
    throw std::logic_error("unreachable action kind");
}

void append_plan_lines(std::string& out, const SopPipeline& p, int t, bool with_states) {
    std::vector<SopState> states;
    if (with_states) states = states_at_step(p, t);
    for (size_t i = 0; i < p.entries.size(); ++i) {
        const SopEntry& entry = p.entries[i];
        out += "id:" + std::to_string(entry.id) + " " + entry.description;
        if (with_states) {
            out += ",state:";
            out += sop_state_name(states[i]);
        }
        if (i + 1 < p.entries.size()) out += '\n';
    }
}

bool is_action_line(std::string_view line, std::string_view& value) {
    for (std::string_view keyword : {std::string_view("action type:"), std::string_view("action:")}) {
        if (line.rfind(keyword, 0) == 0) {
            value = trim(line.substr(keyword.size()));
            return true;
        }
    }
    return false;
}

// "{text} type: {ui_type} id:{id}", parsed from the right so element text may
// itself contain " type: ".
bool parse_click_payload(std::string_view payload, CanonicalAction& out) {
    size_t id_pos = payload.rfind(" id:");
    if (id_pos == std::string_view::npos) return false;
    std::string_view id_str = trim(payload.substr(id_pos + 4));
    int id = 0;
    auto [ptr, ec] = std::from_chars(id_str.data(), id_str.data() + id_str.size(), id);
    if (ec != std::errc() || ptr != id_str.data() + id_str.size()) return false;
    std::string_view head = payload.substr(0, id_pos);
    size_t type_pos = head.rfind(" type: ");
    if (type_pos == std::string_view::npos) return false;
    out = CanonicalAction::click(id, std::string(head.substr(0, type_pos)),
                                 std::string(head.substr(type_pos + 7)));
    return true;
}

// The line after "text:" keeps everything verbatim past one separator space.
bool text_payload(std::string_view line, std::string_view& payload) {
    if (line.rfind("text:", 0) != 0) return false;
    payload = line.substr(5);
    if (!payload.empty() && payload.front() == ' ') payload.remove_prefix(1);
    return true;
}

ordered_json sample_to_json(const PromptSample& s) {
    ordered_json j;
    j["episode_id"] = s.episode_id;
    j["step_index"] = s.step_index;
    j["variant"] = std::string(variant_name(s.variant));
    j["prompt"] = s.prompt;
    j["response"] = s.response;
    j["sop_block"] = s.sop_block;
    j["meta"] = {{"prompt_tokens", s.prompt_tokens}, {"response_tokens", s.response_tokens}};
    return j;
}

PromptSample sample_from_json_line(std::string_view line, int line_number) {
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(line_number, "malformed JSON");
    PromptSample s;
    try {
        s.episode_id = j.at("episode_id").get<std::string>();
        s.step_index = j.at("step_index").get<int>();
        s.variant = variant_from_name(j.at("variant").get<std::string>());
        s.prompt = j.at("prompt").get<std::string>();
        s.response = j.at("response").get<std::string>();
        s.sop_block = j.value("sop_block", std::string());
        if (j.contains("meta")) {
            s.prompt_tokens = j["meta"].value("prompt_tokens", 0);
            s.response_tokens = j["meta"].value("response_tokens", 0);
        }
    } catch (const ordered_json::exception& ex) {
        throw ParseError(line_number, ex.what());
    }
    return s;
}

}  // namespace

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::kBase: return "base";
        case Variant::kPlan: return "plan";
        case Variant::kPlanState: return "plan_state";
        case Variant::kSop: return "sop";
    }
    throw std::logic_error("unreachable variant");
}

Variant variant_from_name(std::string_view name) {
    if (name == "base") return Variant::kBase;
    if (name == "plan") return Variant::kPlan;
    if (name == "plan_state") return Variant::kPlanState;
    if (name == "sop") return Variant::kSop;
    throw ConfigError("unknown variant '" + std::string(name) + "'");
}

std::string render_sop_block(const SopPipeline& p, int t) {
    std::string out;
    append_plan_lines(out, p, t, /*with_states=*/true);
    return out;
}

std::string render_prompt(const Episode& e, int t, std::span<const CanonicalAction> canon_history,
                          const SopPipeline* pipeline, Variant v, int max_history) {
    if (t < 0 || static_cast<size_t>(t) >= e.steps.size()) {
        throw DataError("step index " + std::to_string(t) + " out of range for episode '" +
                        e.episode_id + "'");
    }
    std::string out(kHeader);
    out += '\n';
    if (v == Variant::kSop) {
        if (!pipeline) throw MissingPipeline();
        out += "SOP:\n";
        append_plan_lines(out, *pipeline, t, /*with_states=*/true);
        out += '\n';
    }
    out += "Previous Actions:\n";
    size_t first = 0;
    if (max_history > 0 && canon_history.size() > static_cast<size_t>(max_history)) {
        first = canon_history.size() - static_cast<size_t>(max_history);
    }
    for (size_t i = first; i < canon_history.size(); ++i) {
        const CanonicalAction& a = canon_history[i];
        out += "id:" + std::to_string(i) + ",type:" + action_token(a) + ",text:";
        if (a.kind == ActionKind::kClick || a.kind == ActionKind::kTypeText) out += a.text;
        out += ",ui_type:";
        if (a.kind == ActionKind::kClick) out += a.ui_type;
        out += '\n';
    }
    out += "Environment:\n";
    for (const UiElement& el : e.steps[t].screen) {
        out += "id:" + std::to_string(el.id) + ", text:" + el.text + ", type:" + el.ui_type + '\n';
    }
    out += "Instruction: " + e.instruction + '\n';
    out += "Answer:";
    return out;
}

std::string render_response(const CanonicalAction& target, const SopPipeline* pipeline, int t,
                            Variant v) {
    std::string out;
    if (v == Variant::kPlan || v == Variant::kPlanState) {
        if (!pipeline) throw MissingPipeline();
        out += v == Variant::kPlan ? "PLAN:\n" : "PLAN&STATE:\n";
        append_plan_lines(out, *pipeline, t, /*with_states=*/v == Variant::kPlanState);
        out += '\n';
    }
    out += "action: " + action_token(target);
    if (target.kind == ActionKind::kClick) {
        out += "\ntext: " + target.text + " type: " + target.ui_type +
               " id:" + std::to_string(target.element_id);
    } else if (target.kind == ActionKind::kTypeText) {
        out += "\ntext: " + target.text;
    }
    return out;
}

ParsedResponse ParsedResponse::failure(std::string reason) {
    ParsedResponse r;
    r.error = std::move(reason);
    return r;
}

ParsedResponse parse_response(std::string_view text) {
    std::vector<std::string> lines = split_lines(text);
    size_t i = 0;
    auto skip_blank = [&] {
        while (i < lines.size() && trim(lines[i]).empty()) ++i;
    };

    skip_blank();
    if (i >= lines.size()) return ParsedResponse::failure("empty response");

    std::optional<std::vector<std::string>> plan;
    std::string_view action_value;
    std::string_view first = trim(lines[i]);
    if (first == "PLAN:" || first == "PLAN&STATE:") {
        plan.emplace();
        ++i;
        while (true) {
            skip_blank();
            if (i >= lines.size()) return ParsedResponse::failure("plan block without action line");
            std::string_view line = trim(lines[i]);
            if (is_action_line(line, action_value)) break;
            if (line.rfind("id:", 0) != 0) {
                return ParsedResponse::failure("unexpected line in plan block");
            }
            size_t pos = 3;
            while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') ++pos;
            if (pos == 3 || pos >= line.size() || line[pos] != ' ') {
                return ParsedResponse::failure("malformed plan entry");
            }
            std::string desc(line.substr(pos + 1));
            for (std::string_view state : {std::string_view(",state:finish"),
                                           std::string_view(",state:unfinish")}) {
                if (desc.size() >= state.size() &&
                    std::string_view(desc).substr(desc.size() - state.size()) == state) {
                    desc.resize(desc.size() - state.size());
                    break;
                }
            }
            plan->push_back(std::move(desc));
            ++i;
        }
    } else if (!is_action_line(first, action_value)) {
        return ParsedResponse::failure("missing action line");
    }
    ++i;

    ParsedResponse result;
    result.plan = std::move(plan);
    std::string value = collapse_whitespace(to_lower(action_value));

    if (value == "dual_point") {
        skip_blank();
        if (i >= lines.size()) return ParsedResponse::failure("click without text line");
        std::string_view payload;
        if (!text_payload(lines[i], payload)) {
            return ParsedResponse::failure("click without text line");
        }
        if (!parse_click_payload(payload, result.action)) {
            return ParsedResponse::failure("malformed click payload");
        }
        result.ok = true;
        return result;
    }
    if (value == "type") {
        skip_blank();
        if (i >= lines.size()) return ParsedResponse::failure("type without text line");
        std::string_view payload;
        if (!text_payload(lines[i], payload)) {
            return ParsedResponse::failure("type without text line");
        }
        result.action = CanonicalAction::type_text(std::string(payload));
        result.ok = true;
        return result;
    }
    if (value.rfind("scroll", 0) == 0) {
        std::string dir = std::string(trim(value.substr(6)));
        if (dir == "up") result.action = CanonicalAction::scroll(ScrollDirection::kUp);
        else if (dir == "down") result.action = CanonicalAction::scroll(ScrollDirection::kDown);
        else if (dir == "left") result.action = CanonicalAction::scroll(ScrollDirection::kLeft);
        else if (dir == "right") result.action = CanonicalAction::scroll(ScrollDirection::kRight);
        else return ParsedResponse::failure("unknown scroll direction");
        result.ok = true;
        return result;
    }
    if (value == "press_back") result.action = CanonicalAction::press_back();
    else if (value == "press_home") result.action = CanonicalAction::press_home();
    else if (value == "press_enter") result.action = CanonicalAction::press_enter();
    else if (value == "task_complete" || value == "status_task_complete")
        result.action = CanonicalAction::task_complete();
    else if (value == "task_impossible" || value == "status_task_impossible")
        result.action = CanonicalAction::task_impossible();
    else return ParsedResponse::failure("unknown action '" + value + "'");
    result.ok = true;
    return result;
}

std::vector<PromptSample> build_dataset(const Corpus& c, const RuleSet& rules,
                                        const BuildOptions& options, BuildStats* stats) {
    if (options.mix && options.variant != Variant::kSop) {
        throw ConfigError("sample mixing requires the sop variant");
    }
    const bool needs_pipeline = options.variant != Variant::kBase;

    struct EpisodeOut {
        std::vector<PromptSample> samples;
        std::int64_t ungrounded = 0;
        bool empty_pipeline = false;
    };

    std::vector<EpisodeOut> outs =
        parallel_map_indexed(c.episodes.size(), options.jobs, [&](size_t idx) -> EpisodeOut {
            const Episode& e = c.episodes[idx];
            EpisodeOut out;
            std::vector<GroundingOutcome> outcomes = canonicalize_episode(e, options.grounding);
            std::vector<CanonicalAction> canon;
            canon.reserve(outcomes.size());
            for (const GroundingOutcome& o : outcomes) canon.push_back(o.action);

            SopPipeline pipeline;
            if (needs_pipeline) {
                try {
                    pipeline = build_pipeline(e, canon, rules);
                } catch (const EmptyPipeline&) {
                    out.empty_pipeline = true;
                    return out;
                }
            }
            const SopPipeline* p = needs_pipeline ? &pipeline : nullptr;

            for (size_t t = 0; t < e.steps.size(); ++t) {
                if (!outcomes[t].grounded) {
                    ++out.ungrounded;
                    continue;
                }
                std::span<const CanonicalAction> history(canon.data(), t);
                auto emit = [&](Variant v) {
                    PromptSample s;
                    s.episode_id = e.episode_id;
                    s.step_index = static_cast<int>(t);
                    s.variant = v;
                    s.prompt = render_prompt(e, static_cast<int>(t), history,
                                             v == Variant::kSop ? p : nullptr, v,
                                             options.max_history);
                    s.response = render_response(canon[t],
                                                 v == Variant::kPlan || v == Variant::kPlanState
                                                     ? p : nullptr,
                                                 static_cast<int>(t), v);
                    if (v == Variant::kSop) s.sop_block = render_sop_block(*p, static_cast<int>(t));
                    s.prompt_tokens = count_tokens(s.prompt);
                    s.response_tokens = count_tokens(s.response);
                    out.samples.push_back(std::move(s));
                };
                emit(options.variant);
                if (options.mix) emit(Variant::kBase);
            }
            return out;
        });

    std::vector<PromptSample> samples;
    for (EpisodeOut& out : outs) {
        if (stats) {
            stats->skipped_ungrounded_steps += out.ungrounded;
            if (out.empty_pipeline) ++stats->skipped_empty_pipeline_episodes;
        }
        for (PromptSample& s : out.samples) samples.push_back(std::move(s));
    }
    if (stats) stats->samples += static_cast<std::int64_t>(samples.size());
    return samples;
}

std::string serialize_samples(std::span<const PromptSample> samples) {
    std::string out;
    for (const PromptSample& s : samples) {
        out += sample_to_json(s).dump();
        out += '\n';
    }
    return out;
}

std::vector<PromptSample> parse_samples(std::string_view text) {
    std::vector<PromptSample> samples;
    int line_number = 0;
    for (const std::string& line : split_lines(text)) {
        ++line_number;
        if (trim(line).empty()) continue;
        samples.push_back(sample_from_json_line(line, line_number));
    }
    return samples;
}

void write_samples_file(const std::string& path, std::span<const PromptSample> samples) {
    write_text_file(path, serialize_samples(samples));
}

std::vector<PromptSample> load_samples_file(const std::string& path) {
    return parse_samples(read_text_file(path));
}

}  // namespace sopbench
