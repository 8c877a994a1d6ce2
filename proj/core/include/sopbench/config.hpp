#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sopbench/evaluate.hpp"
#include "sopbench/grounding.hpp"
#include "sopbench/ingest.hpp"
#include "sopbench/prompt.hpp"
#include "sopbench/remote.hpp"
#include "sopbench/sop.hpp"

namespace sopbench {

// Everything a batch run needs, declaratively. Flag overrides are applied
// on top by the CLI (flags win over file keys).
struct RunConfig {
    std::string input;
    std::string output;
    std::string rules = "aitw";     // builtin set name or a rule-file path
    std::string golden;             // prompt dataset served by the stub
    std::string policy = "oracle";  // oracle | rule_sop | random | remote
    std::string model;              // report row label; defaults to the policy name
    Variant variant = Variant::kBase;
    bool mix = false;
    bool lenient = false;
    std::uint64_t seed = 0;
    int jobs = 1;
    int count = 50;        // episodes to generate per synthetic run
    int max_history = 0;   // prompt history cap; 0 = unlimited
    int port = 8000;       // stub server port
    GroundingConfig grounding;
    MatchConfig match;     // match.grounding is synced from `grounding` at load
    SplitFractions split;
    RemoteEndpoint endpoint;
};

// Flat `key = value` lines with dotted keys; '#' lines and blank lines are
// skipped (no inline comments). Unknown keys and unparsable values are
// ConfigErrors. `base` supplies the defaults being overridden.
RunConfig parse_config_text(std::string_view text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// One key/value assignment, shared by the file parser and flag overrides.
void apply_config_entry(RunConfig& cfg, std::string_view key, std::string_view value);

// SOPBENCH_CONFIG, when set and non-empty.
std::optional<std::string> default_config_path();

// "aitw" / "aia_medical" load the bundled tables; anything else is read as
// a rule-file path (ConfigError when the file does not exist).
RuleSet resolve_rules(const std::string& name_or_path);

}  // namespace sopbench
