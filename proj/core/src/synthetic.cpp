#include "sopbench/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include "json.hpp"
#include "sopbench/errors.hpp"
#include "sopbench/grounding.hpp"
#include "sopbench/io.hpp"
#include "sopbench/rng.hpp"
#include "sopbench/strings.hpp"

namespace sopbench {

namespace {

using ordered_json = nlohmann::ordered_json;

SyntheticTemplate template_from_json(const ordered_json& j) {
    if (!j.is_object()) throw DataError("template record is not an object");
    SyntheticTemplate t;
    try {
        t.name = j.at("name").get<std::string>();
        t.subset = j.at("subset").get<std::string>();
        t.instruction_pattern = j.at("instruction_pattern").get<std::string>();
        if (j.contains("slots")) {
            for (const auto& [slot, values] : j.at("slots").items()) {
                t.slots[slot] = values.get<std::vector<std::string>>();
            }
        }
        t.sop_skeleton = j.at("sop_skeleton").get<std::vector<std::string>>();
        for (const auto& [pool, elements] : j.at("element_pools").items()) {
            std::vector<PoolElement> list;
            for (const ordered_json& el : elements) {
                list.push_back({el.at("text").get<std::string>(),
                                el.at("ui_type").get<std::string>()});
            }
            t.element_pools.emplace_back(pool, std::move(list));
        }
    } catch (const ordered_json::exception& ex) {
        throw DataError(std::string("malformed template: ") + ex.what());
    }
    if (t.name.empty()) throw DataError("template name is empty");
    if (t.sop_skeleton.empty()) throw DataError("template '" + t.name + "' has an empty skeleton");
    for (size_t i = 1; i < t.sop_skeleton.size(); ++i) {
        if (t.sop_skeleton[i] == t.sop_skeleton[i - 1]) {
            throw DataError("template '" + t.name +
                            "' skeleton repeats '" + t.sop_skeleton[i] +
                            "' consecutively; entries would merge");
        }
    }
    for (const auto& [slot, values] : t.slots) {
        if (values.empty()) throw DataError("template '" + t.name + "' slot '" + slot + "' is empty");
    }
    return t;
}

// target id slot -> disjoint grid cell; row-major placement keeps id order
// equal to reading order and expanded boxes non-overlapping.
BBox grid_cell(int slot) {
    int row = slot / 3;
    int col = slot % 3;
    double x_min = 0.05 + 0.325 * col;
    double y_min = 0.05 + 0.12 * row;
    return {x_min, y_min, x_min + 0.25, y_min + 0.08};
}

struct PoolEntry {
    PoolElement element;
    std::optional<std::string> description;  // classify_action of clicking it
};

struct EntryKind {
    // Exactly one of these forms realizes a skeleton entry.
    enum class Form { kType, kComplete, kClick, kScroll, kPressHome, kPressEnter };
    Form form = Form::kClick;
    std::string typed_text;               // kType
    std::vector<size_t> click_candidates;  // kClick: indices into the pool
};

}  // namespace

std::vector<SyntheticTemplate> parse_templates(std::string_view text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError("template file is not valid JSON");
    std::vector<SyntheticTemplate> out;
    if (j.is_object() && j.contains("templates")) {
        for (const ordered_json& t : j.at("templates")) out.push_back(template_from_json(t));
    } else if (j.is_array()) {
        for (const ordered_json& t : j) out.push_back(template_from_json(t));
    } else {
        out.push_back(template_from_json(j));
    }
    if (out.empty()) throw DataError("template file holds no templates");
    return out;
}

std::vector<SyntheticTemplate> load_templates_file(const std::string& path) {
    return parse_templates(read_text_file(path));
}

std::string fill_slots(std::string_view pattern,
                       const std::map<std::string, std::string>& values) {
    std::string out(pattern);
    for (const auto& [slot, value] : values) {
        std::string needle = "{" + slot + "}";
        size_t pos;
        while ((pos = out.find(needle)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
        }
    }
    if (out.find('{') != std::string::npos) {
        throw DataError("unfilled slot in pattern: '" + std::string(pattern) + "'");
    }
    return out;
}

Corpus generate_synthetic(const SyntheticTemplate& t, int n, std::uint64_t seed,
                          const RuleSet& rules,
                          std::vector<std::vector<std::string>>* filled_skeletons) {
    if (n < 1) throw ConfigError("synthetic episode count must be >= 1");

    // Rule-derived realization targets, computed once.
    const SopRule* type_rule = nullptr;
    for (const SopRule& r : rules.rules) {
        if (r.match_on == MatchOn::kKind && r.pattern == "type" && !r.excluded) type_rule = &r;
    }
    std::string type_prefix, type_suffix;
    if (type_rule) {
        size_t star = type_rule->description.find('*');
        if (star != std::string::npos) {
            type_prefix = type_rule->description.substr(0, star);
            type_suffix = type_rule->description.substr(star + 1);
        }
    }
    auto kind_desc = [&](const CanonicalAction& a) { return classify_action(a, rules); };
    std::optional<std::string> scroll_desc = kind_desc(CanonicalAction::scroll(ScrollDirection::kDown));
    std::optional<std::string> complete_desc = kind_desc(CanonicalAction::task_complete());
    std::optional<std::string> home_desc = kind_desc(CanonicalAction::press_home());
    std::optional<std::string> enter_desc = kind_desc(CanonicalAction::press_enter());

    std::vector<PoolEntry> pool;
    for (const auto& [pool_name, elements] : t.element_pools) {
        for (const PoolElement& el : elements) {
            PoolEntry entry;
            entry.element = el;
            entry.description = classify_action(CanonicalAction::click(0, el.text, el.ui_type), rules);
            pool.push_back(std::move(entry));
        }
    }

    // Resolve each skeleton entry's realization form against the rule set.
    // Slots never change an entry's form, only the typed text, so forms are
    // resolved on the unfilled skeleton with a per-episode text fill below.
    std::vector<EntryKind> forms(t.sop_skeleton.size());
    for (size_t i = 0; i < t.sop_skeleton.size(); ++i) {
        const std::string& entry = t.sop_skeleton[i];
        EntryKind& form = forms[i];
        if (type_rule && !type_prefix.empty() &&
            entry.size() > type_prefix.size() + type_suffix.size() &&
            entry.rfind(type_prefix, 0) == 0 &&
            entry.compare(entry.size() - type_suffix.size(), type_suffix.size(), type_suffix) == 0) {
            form.form = EntryKind::Form::kType;
            form.typed_text = entry.substr(type_prefix.size(),
                                           entry.size() - type_prefix.size() - type_suffix.size());
            continue;
        }
        if (complete_desc && entry == *complete_desc) {
            form.form = EntryKind::Form::kComplete;
            continue;
        }
        for (size_t p = 0; p < pool.size(); ++p) {
            if (pool[p].description && *pool[p].description == entry) {
                form.click_candidates.push_back(p);
            }
        }
        if (!form.click_candidates.empty()) {
            form.form = EntryKind::Form::kClick;
            continue;
        }
        if (scroll_desc && entry == *scroll_desc) {
            form.form = EntryKind::Form::kScroll;
            continue;
        }
        if (home_desc && entry == *home_desc) {
            form.form = EntryKind::Form::kPressHome;
            continue;
        }
        if (enter_desc && entry == *enter_desc) {
            form.form = EntryKind::Form::kPressEnter;
            continue;
        }
        throw UnrealizableTemplate("template '" + t.name + "': no pool element or action kind realizes '" +
                                   entry + "'");
    }

    Rng rng(seed ^ fnv1a64(t.name));
    Corpus corpus;
    for (int k = 0; k < n; ++k) {
        std::map<std::string, std::string> slot_values;
        for (const auto& [slot, values] : t.slots) slot_values[slot] = rng.pick(values);

        Episode e;
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "-%04d", k);
        e.episode_id = t.name + suffix;
        e.subset = t.subset;
        e.instruction = fill_slots(t.instruction_pattern, slot_values);

        std::vector<std::string> skeleton;
        skeleton.reserve(t.sop_skeleton.size());
        for (const std::string& entry : t.sop_skeleton) {
            skeleton.push_back(fill_slots(entry, slot_values));
        }

        for (size_t i = 0; i < skeleton.size(); ++i) {
            const EntryKind& form = forms[i];

            // Every step screen: target (clicks only) plus sampled distractors,
            // minus any pool element that classifies to the current entry —
            // those would either merge into the entry or break inversion.
            std::optional<size_t> target;
            if (form.form == EntryKind::Form::kClick) {
                target = form.click_candidates.size() == 1
                             ? form.click_candidates[0]
                             : form.click_candidates[rng.index(form.click_candidates.size())];
            }
            std::vector<size_t> distractor_ids;
            for (size_t p = 0; p < pool.size(); ++p) {
                if (target && p == *target) continue;
                if (pool[p].description && *pool[p].description == skeleton[i]) continue;
                distractor_ids.push_back(p);
            }
            rng.shuffle(distractor_ids);
            size_t want = static_cast<size_t>(rng.range(2, 4));
            if (distractor_ids.size() > want) distractor_ids.resize(want);

            std::vector<size_t> on_screen = distractor_ids;
            if (target) {
                on_screen.insert(on_screen.begin() + rng.index(on_screen.size() + 1), *target);
            }

            int repeats = form.form == EntryKind::Form::kScroll ? rng.range(1, 3) : 1;
            for (int r = 0; r < repeats; ++r) {
                Step s;
                s.index = static_cast<int>(e.steps.size());
                for (size_t slot = 0; slot < on_screen.size(); ++slot) {
                    UiElement el;
                    el.id = static_cast<int>(slot);
                    el.text = pool[on_screen[slot]].element.text;
                    el.ui_type = pool[on_screen[slot]].element.ui_type;
                    el.bbox = grid_cell(static_cast<int>(slot));
                    s.screen.push_back(std::move(el));
                }
                switch (form.form) {
                    case EntryKind::Form::kType:
                        s.action.kind = RawActionKind::kType;
                        s.action.typed_text = fill_slots(form.typed_text, slot_values);
                        break;
                    case EntryKind::Form::kComplete:
                        s.action.kind = RawActionKind::kStatusTaskComplete;
                        break;
                    case EntryKind::Form::kClick: {
                        size_t slot = static_cast<size_t>(
                            std::find(on_screen.begin(), on_screen.end(), *target) -
                            on_screen.begin());
                        Point center = s.screen[slot].bbox.center();
                        s.action.kind = RawActionKind::kDualPoint;
                        s.action.touch = center;
                        s.action.lift = center;
                        break;
                    }
                    case EntryKind::Form::kScroll:
                        s.action.kind = RawActionKind::kDualPoint;
                        s.action.touch = {0.5, 0.2};
                        s.action.lift = {0.5, 0.8};
                        break;
                    case EntryKind::Form::kPressHome:
                        s.action.kind = RawActionKind::kPressHome;
                        break;
                    case EntryKind::Form::kPressEnter:
                        s.action.kind = RawActionKind::kPressEnter;
                        break;
                }
                e.steps.push_back(std::move(s));
            }
        }

        if (filled_skeletons) filled_skeletons->push_back(std::move(skeleton));
        corpus.episodes.push_back(std::move(e));
    }
    corpus.manifest = compute_manifest(corpus.episodes);
    return corpus;
}

Corpus generate_suite(std::span<const SyntheticTemplate> templates, int n, std::uint64_t seed,
                      const RuleSet& rules,
                      std::vector<std::vector<std::string>>* filled_skeletons) {
    if (templates.empty()) throw ConfigError("no templates to generate from");
    if (n < 1) throw ConfigError("synthetic episode count must be >= 1");
    size_t k = templates.size();
    Corpus corpus;
    for (size_t i = 0; i < k; ++i) {
        int share = static_cast<int>(n / k) + (i < n % k ? 1 : 0);
        if (share == 0) continue;
        Corpus part = generate_synthetic(templates[i], share, seed, rules, filled_skeletons);
        for (Episode& e : part.episodes) corpus.episodes.push_back(std::move(e));
    }
    corpus.manifest = compute_manifest(corpus.episodes);
    return corpus;
}

}  // namespace sopbench
