#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sopbench/ingest.hpp"
#include "sopbench/sop.hpp"

namespace sopbench {

struct PoolElement {
    std::string text;
    std::string ui_type;
};

// Desk-scale episode factory: realizes an SOP skeleton back into raw gestures
// so the annotator can be tested against a known ground-truth pipeline.
struct SyntheticTemplate {
    std::string name;
    std::string subset;
    std::string instruction_pattern;  // "{slot}" placeholders
    std::map<std::string, std::vector<std::string>> slots;
    std::vector<std::string> sop_skeleton;  // entries may carry "{slot}" too
    // Insertion order kept so element sampling is file-order deterministic.
    std::vector<std::pair<std::string, std::vector<PoolElement>>> element_pools;
};

// Accepts a single template object, an array, or {"templates": [...]}.
std::vector<SyntheticTemplate> parse_templates(std::string_view text);
std::vector<SyntheticTemplate> load_templates_file(const std::string& path);

std::string fill_slots(std::string_view pattern,
                       const std::map<std::string, std::string>& values);

// Seed-deterministic. Every generated episode's canonical actions, annotated
// with `rules`, reproduce the (slot-filled) skeleton; `filled_skeletons[i]`
// receives episode i's expected entry descriptions when non-null.
Corpus generate_synthetic(const SyntheticTemplate& t, int n, std::uint64_t seed,
                          const RuleSet& rules,
                          std::vector<std::vector<std::string>>* filled_skeletons = nullptr);

// Distributes n episodes across templates as evenly as possible (suite order).
Corpus generate_suite(std::span<const SyntheticTemplate> templates, int n, std::uint64_t seed,
                      const RuleSet& rules,
                      std::vector<std::vector<std::string>>* filled_skeletons = nullptr);

}  // namespace sopbench
