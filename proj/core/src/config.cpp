#include "sopbench/config.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>

#include "sopbench/errors.hpp"
#include "sopbench/io.hpp"
#include "sopbench/strings.hpp"

namespace sopbench {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
    throw ConfigError("config key '" + std::string(key) + "': expected " + expected + ", got '" +
                      std::string(value) + "'");
}

bool parse_bool(std::string_view key, std::string_view value) {
    const std::string v = to_lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, value, "a boolean");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value, const char* expected) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        bad_value(key, value, expected);
    }
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    // from_chars<double> is still missing on some libc++ builds.
    const std::string text(value);
    char* end = nullptr;
    const double out = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty()) {
        bad_value(key, value, "a number");
    }
    return out;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, std::string_view key, std::string_view value) {
    if (key == "input") {
        cfg.input = value;
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "rules") {
        cfg.rules = value;
    } else if (key == "golden") {
        cfg.golden = value;
    } else if (key == "policy") {
        cfg.policy = value;
    } else if (key == "model") {
        cfg.model = value;
    } else if (key == "variant") {
        cfg.variant = variant_from_name(value);
    } else if (key == "mix") {
        cfg.mix = parse_bool(key, value);
    } else if (key == "lenient") {
        cfg.lenient = parse_bool(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value, "an unsigned integer");
    } else if (key == "jobs") {
        cfg.jobs = parse_number<int>(key, value, "an integer");
    } else if (key == "count") {
        cfg.count = parse_number<int>(key, value, "an integer");
    } else if (key == "max_history") {
        cfg.max_history = parse_number<int>(key, value, "an integer");
    } else if (key == "port") {
        cfg.port = parse_number<int>(key, value, "an integer");
    } else if (key == "grounding.expand_fraction") {
        cfg.grounding.expand_fraction = parse_double(key, value);
    } else if (key == "grounding.click_threshold") {
        cfg.grounding.click_threshold = parse_double(key, value);
    } else if (key == "grounding.max_fallback_distance") {
        cfg.grounding.max_fallback_distance = parse_double(key, value);
    } else if (key == "match.click_mode") {
        cfg.match.click_mode = click_match_mode_from_name(value);
    } else if (key == "match.normalize_text") {
        cfg.match.normalize_text = parse_bool(key, value);
    } else if (key == "split.train") {
        cfg.split.train = parse_double(key, value);
    } else if (key == "split.val") {
        cfg.split.val = parse_double(key, value);
    } else if (key == "split.test") {
        cfg.split.test = parse_double(key, value);
    } else if (key == "endpoint.url") {
        cfg.endpoint.url = value;
    } else if (key == "endpoint.timeout_ms") {
        cfg.endpoint.timeout_ms = parse_number<int>(key, value, "an integer");
    } else if (key == "endpoint.max_retries") {
        cfg.endpoint.max_retries = parse_number<int>(key, value, "an integer");
    } else if (key == "endpoint.max_concurrency") {
        cfg.endpoint.max_concurrency = parse_number<int>(key, value, "an integer");
    } else {
        throw ConfigError("unknown config key: '" + std::string(key) + "'");
    }
}

RunConfig parse_config_text(std::string_view text, RunConfig base) {
    int line_number = 0;
    for (const std::string& raw : split_lines(text)) {
        ++line_number;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_number) +
                              " is not 'key = value': '" + std::string(line) + "'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_number) + " has an empty key");
        }
        apply_config_entry(base, key, value);
    }
    base.match.grounding = base.grounding;
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    if (!std::filesystem::exists(path)) {
        throw ConfigError("config file does not exist: '" + path + "'");
    }
    return parse_config_text(read_text_file(path), std::move(base));
}

std::optional<std::string> default_config_path() {
    const char* env = std::getenv("SOPBENCH_CONFIG");
    if (env == nullptr || *env == '\0') {
        return std::nullopt;
    }
    return std::string(env);
}

RuleSet resolve_rules(const std::string& name_or_path) {
    if (name_or_path == "aitw" || name_or_path == "aia_medical") {
        return RuleSet::builtin(name_or_path);
    }
    if (!std::filesystem::exists(name_or_path)) {
        throw ConfigError("rule file does not exist: '" + name_or_path + "'");
    }
    return RuleSet::load_file(name_or_path);
}

}  // namespace sopbench
