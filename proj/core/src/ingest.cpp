#include "sopbench/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>

#include "json.hpp"
#include "sopbench/errors.hpp"
#include "sopbench/io.hpp"
#include "sopbench/parallel.hpp"
#include "sopbench/rng.hpp"
#include "sopbench/strings.hpp"

namespace sopbench {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Point point_from_json(const json& j, int line_number, const char* field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError(line_number, std::string(field) + " must be a [x, y] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

UiElement element_from_json(const json& j, int line_number) {
    if (!j.is_object()) throw ParseError(line_number, "element is not an object");
    UiElement e;
    try {
        e.id = j.at("id").get<int>();
        e.text = j.at("text").get<std::string>();
        e.ui_type = j.at("ui_type").get<std::string>();
        const json& b = j.at("bbox");
        if (!b.is_array() || b.size() != 4) {
            throw ParseError(line_number, "bbox must hold four numbers");
        }
        e.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                  b[3].get<double>()};
    } catch (const json::exception& ex) {
        throw ParseError(line_number, ex.what());
    }
    return e;
}

Step step_from_json(const json& j, int index, int line_number) {
    if (!j.is_object()) throw ParseError(line_number, "step is not an object");
    Step s;
    s.index = index;
    try {
        const json& screen = j.at("screen");
        for (const json& el : screen.at("elements")) {
            s.screen.push_back(element_from_json(el, line_number));
        }
        const json& action = j.at("action");
        s.action.kind = raw_action_kind_from_name(action.at("type").get<std::string>());
        s.action.touch = point_from_json(action.at("touch"), line_number, "touch");
        s.action.lift = point_from_json(action.at("lift"), line_number, "lift");
        s.action.typed_text = action.value("typed_text", std::string());
    } catch (const json::exception& ex) {
        throw ParseError(line_number, ex.what());
    } catch (const DataError& ex) {
        throw ParseError(line_number, ex.what());
    }
    return s;
}

Episode episode_from_json_line(std::string_view line, int line_number) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(line_number, "malformed JSON");
    if (!j.is_object()) throw ParseError(line_number, "record is not an object");
    Episode e;
    try {
        e.episode_id = j.at("episode_id").get<std::string>();
        e.subset = j.at("subset").get<std::string>();
        e.instruction = j.at("instruction").get<std::string>();
        const json& steps = j.at("steps");
        if (!steps.is_array()) throw ParseError(line_number, "steps must be an array");
        int index = 0;
        for (const json& s : steps) {
            e.steps.push_back(step_from_json(s, index++, line_number));
        }
    } catch (const json::exception& ex) {
        throw ParseError(line_number, ex.what());
    }
    return e;
}

ordered_json episode_to_json(const Episode& e) {
    ordered_json j;
    j["episode_id"] = e.episode_id;
    j["subset"] = e.subset;
    j["instruction"] = e.instruction;
    j["steps"] = ordered_json::array();
    for (const Step& s : e.steps) {
        ordered_json elements = ordered_json::array();
        for (const UiElement& el : s.screen) {
            ordered_json je;
            je["id"] = el.id;
            je["text"] = el.text;
            je["ui_type"] = el.ui_type;
            je["bbox"] = {el.bbox.x_min, el.bbox.y_min, el.bbox.x_max, el.bbox.y_max};
            elements.push_back(std::move(je));
        }
        ordered_json action;
        action["type"] = std::string(raw_action_kind_name(s.action.kind));
        action["touch"] = {s.action.touch.x, s.action.touch.y};
        action["lift"] = {s.action.lift.x, s.action.lift.y};
        if (s.action.kind == RawActionKind::kType) action["typed_text"] = s.action.typed_text;
        ordered_json js;
        js["screen"] = ordered_json::object({{"elements", std::move(elements)}});
        js["action"] = std::move(action);
        j["steps"].push_back(std::move(js));
    }
    return j;
}

}  // namespace

Manifest compute_manifest(const std::vector<Episode>& episodes) {
    Manifest m;
    std::map<std::string, std::set<std::string_view>> per_subset_instructions;
    std::set<std::string_view> all_instructions;
    for (const Episode& e : episodes) {
        SubsetCounts& c = m.subsets[e.subset];
        ++c.episodes;
        c.screens += static_cast<std::int64_t>(e.steps.size());
        per_subset_instructions[e.subset].insert(e.instruction);
        all_instructions.insert(e.instruction);
        ++m.total.episodes;
        m.total.screens += static_cast<std::int64_t>(e.steps.size());
    }
    for (auto& [subset, instructions] : per_subset_instructions) {
        m.subsets[subset].instructions = static_cast<std::int64_t>(instructions.size());
    }
    m.total.instructions = static_cast<std::int64_t>(all_instructions.size());
    return m;
}

Corpus parse_corpus(std::string_view text, bool lenient, ParseStats* stats, int jobs) {
    std::vector<std::string> lines = split_lines(text);

    struct LineOutcome {
        std::optional<Episode> episode;
        std::string error;        // non-empty when the record was rejected (lenient only)
        bool parse_error = false;
    };

    std::vector<LineOutcome> outcomes =
        parallel_map_indexed(lines.size(), jobs, [&](size_t i) -> LineOutcome {
            LineOutcome out;
            if (trim(lines[i]).empty()) return out;
            int line_number = static_cast<int>(i) + 1;
            try {
                Episode e = episode_from_json_line(lines[i], line_number);
                std::vector<ValidationFinding> findings = validate_episode(e);
                if (!findings.empty()) {
                    std::vector<std::string> rendered;
                    rendered.reserve(findings.size());
                    for (const ValidationFinding& f : findings) {
                        rendered.push_back(finding_to_string(f));
                    }
                    throw ValidationError(e.episode_id, std::move(rendered));
                }
                out.episode = std::move(e);
            } catch (const ParseError& ex) {
                if (!lenient) throw;
                out.error = ex.what();
                out.parse_error = true;
            } catch (const ValidationError& ex) {
                if (!lenient) throw;
                out.error = ex.what();
            }
            return out;
        });

    Corpus corpus;
    std::set<std::string_view> seen_ids;
    for (size_t i = 0; i < outcomes.size(); ++i) {
        LineOutcome& out = outcomes[i];
        if (!out.error.empty()) {
            if (stats) {
                ++(out.parse_error ? stats->skipped_parse : stats->skipped_validation);
                stats->notes.push_back("line " + std::to_string(i + 1) + ": " + out.error);
            }
            continue;
        }
        if (!out.episode) continue;  // blank line
        Episode& e = *out.episode;
        if (!seen_ids.insert(e.episode_id).second) {
            if (!lenient) {
                throw ValidationError(e.episode_id, {"duplicate episode_id"});
            }
            if (stats) {
                ++stats->skipped_validation;
                stats->notes.push_back("line " + std::to_string(i + 1) + ": duplicate episode_id '" +
                                       e.episode_id + "'");
            }
            continue;
        }
        corpus.episodes.push_back(std::move(e));
    }
    corpus.manifest = compute_manifest(corpus.episodes);
    return corpus;
}

Corpus load_corpus_file(const std::string& path, bool lenient, ParseStats* stats, int jobs) {
    return parse_corpus(read_text_file(path), lenient, stats, jobs);
}

std::string serialize_episode(const Episode& e) {
    return episode_to_json(e).dump();
}

std::string serialize_corpus(const Corpus& c) {
    std::string out;
    for (const Episode& e : c.episodes) {
        out += serialize_episode(e);
        out += '\n';
    }
    return out;
}

void write_corpus_file(const std::string& path, const Corpus& c) {
    write_text_file(path, serialize_corpus(c));
}

std::string manifest_to_json(const Manifest& m) {
    ordered_json j;
    j["subsets"] = ordered_json::object();
    for (const auto& [subset, counts] : m.subsets) {
        j["subsets"][subset] = {{"episodes", counts.episodes},
                                {"screens", counts.screens},
                                {"instructions", counts.instructions}};
    }
    j["total"] = {{"episodes", m.total.episodes},
                  {"screens", m.total.screens},
                  {"instructions", m.total.instructions}};
    return j.dump();
}

SplitResult split_corpus(const Corpus& c, const SplitFractions& fractions, std::uint64_t seed) {
    if (c.episodes.empty()) throw EmptyCorpus();
    const double fs[3] = {fractions.train, fractions.val, fractions.test};
    double sum = fs[0] + fs[1] + fs[2];
    for (double f : fs) {
        if (f <= 0.0) throw ConfigError("split fractions must be positive");
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");

    const size_t n = c.episodes.size();
    size_t counts[3];
    double remainders[3];
    size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        double quota = static_cast<double>(n) * fs[i];
        counts[i] = static_cast<size_t>(quota);
        remainders[i] = quota - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    // Largest remainder gets the leftover episodes; ties go to the earlier split.
    while (assigned < n) {
        int best = 0;
        for (int i = 1; i < 3; ++i) {
            if (remainders[i] > remainders[best]) best = i;
        }
        ++counts[best];
        remainders[best] = -1.0;
        ++assigned;
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    SplitResult result;
    Corpus* outs[3] = {&result.train, &result.val, &result.test};
    size_t cursor = 0;
    for (int i = 0; i < 3; ++i) {
        std::vector<size_t> chosen(order.begin() + cursor, order.begin() + cursor + counts[i]);
        cursor += counts[i];
        std::sort(chosen.begin(), chosen.end());
        for (size_t idx : chosen) outs[i]->episodes.push_back(c.episodes[idx]);
        outs[i]->manifest = compute_manifest(outs[i]->episodes);
    }
    return result;
}

}  // namespace sopbench
