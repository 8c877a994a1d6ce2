#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sopbench/config.hpp"
#include "sopbench/errors.hpp"
#include "sopbench/evaluate.hpp"
#include "sopbench/grounding.hpp"
#include "sopbench/ingest.hpp"
#include "sopbench/io.hpp"
#include "sopbench/parallel.hpp"
#include "sopbench/policy.hpp"
#include "sopbench/prompt.hpp"
#include "sopbench/remote.hpp"
#include "sopbench/replay.hpp"
#include "sopbench/sop.hpp"
#include "sopbench/synthetic.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace sopbench;

// Every command ends by printing one machine-readable line; keep it last on
// stdout so scripted callers can read it with tail -1.
void print_summary(const ordered_json& j) {
    std::cout << j.dump() << std::endl;
}

void require_single_input(const RunConfig& cfg) {
    if (cfg.input.empty()) {
        throw ConfigError("--input is required for this command");
    }
    if (!std::filesystem::exists(cfg.input)) {
        throw ConfigError("input path does not exist: '" + cfg.input + "'");
    }
}

void require_output(const RunConfig& cfg) {
    if (cfg.output.empty()) {
        throw ConfigError("--output is required for this command");
    }
}

// corpus.jsonl + "train" -> corpus.train.jsonl
std::string with_tag(const std::string& path, const std::string& tag,
                     const std::string& force_ext = "") {
    const std::filesystem::path p(path);
    const std::string ext = force_ext.empty() ? p.extension().string() : force_ext;
    return (p.parent_path() / (p.stem().string() + "." + tag + ext)).string();
}

std::unique_ptr<Policy> make_policy(const RunConfig& cfg, const RuleSet& rules) {
    if (cfg.policy == "oracle") {
        return make_oracle_policy();
    }
    if (cfg.policy == "rule_sop") {
        return make_rule_sop_policy(rules);
    }
    if (cfg.policy == "random") {
        return make_random_policy(cfg.seed);
    }
    if (cfg.policy == "remote") {
        if (cfg.endpoint.url.empty()) {
            throw ConfigError("--endpoint is required for --policy remote");
        }
        return make_remote_policy(cfg.endpoint, cfg.variant, cfg.max_history,
                                  cfg.model.empty() ? std::string("remote") : cfg.model);
    }
    throw ConfigError("unknown policy '" + cfg.policy +
                      "' (expected oracle|rule_sop|random|remote)");
}

int cmd_ingest(const RunConfig& cfg, bool do_split) {
    require_single_input(cfg);
    require_output(cfg);
    ParseStats stats;
    const Corpus corpus = load_corpus_file(cfg.input, cfg.lenient, &stats, cfg.jobs);
    write_corpus_file(cfg.output, corpus);
    const std::string manifest_path = with_tag(cfg.output, "manifest", ".json");
    write_text_file(manifest_path, manifest_to_json(corpus.manifest) + "\n");

    ordered_json summary;
    summary["command"] = "ingest";
    summary["episodes"] = corpus.episodes.size();
    summary["skipped_parse"] = stats.skipped_parse;
    summary["skipped_validation"] = stats.skipped_validation;
    summary["output"] = cfg.output;
    summary["manifest"] = ordered_json::parse(manifest_to_json(corpus.manifest));
    if (do_split) {
        const SplitResult split = split_corpus(corpus, cfg.split, cfg.seed);
        ordered_json sizes;
        const std::pair<const char*, const Corpus*> parts[] = {
            {"train", &split.train}, {"val", &split.val}, {"test", &split.test}};
        for (const auto& [tag, part] : parts) {
            write_corpus_file(with_tag(cfg.output, tag), *part);
            sizes[tag] = part->episodes.size();
        }
        summary["splits"] = std::move(sizes);
    }
    print_summary(summary);
    return 0;
}

int cmd_annotate(const RunConfig& cfg) {
    require_single_input(cfg);
    require_output(cfg);
    const RuleSet rules = resolve_rules(cfg.rules);
    const Corpus corpus = load_corpus_file(cfg.input, cfg.lenient, nullptr, cfg.jobs);

    auto lines = parallel_map_indexed(
        corpus.episodes.size(), cfg.jobs, [&](size_t i) -> std::pair<std::string, bool> {
            const Episode& e = corpus.episodes[i];
            std::vector<CanonicalAction> canon;
            for (const GroundingOutcome& o : canonicalize_episode(e, cfg.grounding)) {
                canon.push_back(o.action);
            }
            ordered_json j;
            j["episode_id"] = e.episode_id;
            ordered_json entries = ordered_json::array();
            bool empty = false;
            try {
                for (const SopEntry& entry : build_pipeline(e, canon, rules).entries) {
                    entries.push_back({{"id", entry.id},
                                       {"description", entry.description},
                                       {"first_step", entry.first_step},
                                       {"last_step", entry.last_step}});
                }
            } catch (const EmptyPipeline&) {
                empty = true;
            }
            j["pipeline"] = std::move(entries);
            return {j.dump(), empty};
        });

    std::string text;
    long empty_pipelines = 0;
    for (const auto& [line, empty] : lines) {
        text += line;
        text += '\n';
        empty_pipelines += empty ? 1 : 0;
    }
    write_text_file(cfg.output, text);
    print_summary({{"command", "annotate"},
                   {"episodes", corpus.episodes.size()},
                   {"empty_pipelines", empty_pipelines},
                   {"output", cfg.output}});
    return 0;
}

int cmd_build_prompts(const RunConfig& cfg) {
    require_single_input(cfg);
    require_output(cfg);
    const RuleSet rules = resolve_rules(cfg.rules);
    const Corpus corpus = load_corpus_file(cfg.input, cfg.lenient, nullptr, cfg.jobs);
    BuildOptions options;
    options.variant = cfg.variant;
    options.mix = cfg.mix;
    options.grounding = cfg.grounding;
    options.max_history = cfg.max_history;
    options.jobs = cfg.jobs;
    BuildStats stats;
    const std::vector<PromptSample> samples = build_dataset(corpus, rules, options, &stats);
    write_samples_file(cfg.output, samples);
    print_summary({{"command", "build-prompts"},
                   {"samples", stats.samples},
                   {"variant", std::string(variant_name(cfg.variant))},
                   {"mix", cfg.mix},
                   {"skipped_ungrounded_steps", stats.skipped_ungrounded_steps},
                   {"skipped_empty_pipeline_episodes", stats.skipped_empty_pipeline_episodes},
                   {"output", cfg.output}});
    return 0;
}

int cmd_gen_synthetic(const RunConfig& cfg) {
    require_single_input(cfg);
    require_output(cfg);
    const RuleSet rules = resolve_rules(cfg.rules);
    const std::vector<SyntheticTemplate> templates = load_templates_file(cfg.input);
    const Corpus corpus = generate_suite(templates, cfg.count, cfg.seed, rules);
    write_corpus_file(cfg.output, corpus);
    print_summary({{"command", "gen-synthetic"},
                   {"episodes", corpus.episodes.size()},
                   {"templates", templates.size()},
                   {"seed", cfg.seed},
                   {"output", cfg.output}});
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    require_single_input(cfg);
    const RuleSet rules = resolve_rules(cfg.rules);
    const std::unique_ptr<Policy> policy = make_policy(cfg, rules);
    const Corpus corpus = load_corpus_file(cfg.input, cfg.lenient, nullptr, cfg.jobs);
    EvalOptions options;
    options.replay.mode = ReplayMode::kTeacherForced;
    options.replay.grounding = cfg.grounding;
    options.match = cfg.match;
    options.jobs = cfg.jobs;
    EvalReport report = evaluate_corpus(corpus, *policy, &rules, options);
    if (!cfg.model.empty()) {
        report.model = cfg.model;
    }
    if (!cfg.output.empty()) {
        write_text_file(cfg.output, report_to_json(report) + "\n");
    }
    std::cout << render_report_table(std::span<const EvalReport>(&report, 1));
    ordered_json subsets;
    for (const auto& [name, score] : report.subset_scores) {
        subsets[name] = score;
    }
    ordered_json summary{{"command", "evaluate"},
                         {"model", report.model},
                         {"overall", report.overall},
                         {"episodes", report.episodes.size()},
                         {"subset_scores", std::move(subsets)}};
    if (!cfg.output.empty()) {
        summary["output"] = cfg.output;
    }
    print_summary(summary);
    return 0;
}

int cmd_replay(const RunConfig& cfg, bool free_running) {
    require_single_input(cfg);
    const RuleSet rules = resolve_rules(cfg.rules);
    const std::unique_ptr<Policy> policy = make_policy(cfg, rules);
    const Corpus corpus = load_corpus_file(cfg.input, cfg.lenient, nullptr, cfg.jobs);
    ReplayOptions options;
    options.mode = free_running ? ReplayMode::kFreeRunning : ReplayMode::kTeacherForced;
    options.grounding = cfg.grounding;

    // Remote policies already cap their own concurrency; everything else is
    // CPU-bound, so one in-flight episode per job is the right degree.
    auto per_episode = parallel_map_indexed(
        corpus.episodes.size(), cfg.jobs, [&](size_t i) -> std::pair<std::string, long> {
            const Episode& e = corpus.episodes[i];
            std::string text;
            long steps = 0;
            for (const ReplayStep& step : replay_episode(e, *policy, &rules, options)) {
                ordered_json j;
                j["episode_id"] = e.episode_id;
                j["step_index"] = step.step_index;
                j["gold"] = step.gold ? ordered_json(render_response(*step.gold, nullptr, 0,
                                                                     Variant::kBase))
                                      : ordered_json(nullptr);
                j["pred"] = step.prediction.action
                                ? ordered_json(render_response(*step.prediction.action, nullptr,
                                                               0, Variant::kBase))
                                : ordered_json(nullptr);
                j["parse_failure"] = step.prediction.parse_failure;
                j["unevaluated"] = step.unevaluated;
                if (!step.prediction.note.empty()) {
                    j["note"] = step.prediction.note;
                }
                text += j.dump();
                text += '\n';
                ++steps;
            }
            return {std::move(text), steps};
        });

    std::string text;
    long steps = 0;
    for (auto& [episode_text, episode_steps] : per_episode) {
        text += episode_text;
        steps += episode_steps;
    }
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        write_text_file(cfg.output, text);
    }
    ordered_json summary{{"command", "replay"},
                         {"episodes", corpus.episodes.size()},
                         {"steps", steps},
                         {"mode", free_running ? "free_running" : "teacher_forced"}};
    if (!cfg.output.empty()) {
        summary["output"] = cfg.output;
    }
    print_summary(summary);
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs) {
    if (inputs.empty()) {
        throw ConfigError("--input is required at least once for report");
    }
    std::vector<EvalReport> reports;
    for (const std::string& path : inputs) {
        if (!std::filesystem::exists(path)) {
            throw ConfigError("input path does not exist: '" + path + "'");
        }
        reports.push_back(report_from_json(read_text_file(path)));
    }
    std::cout << render_report_table(reports);
    print_summary({{"command", "report"}, {"reports", reports.size()}});
    return 0;
}

int cmd_serve_stub(const RunConfig& cfg, const std::string& garbage) {
    const std::string golden = cfg.golden.empty() ? cfg.input : cfg.golden;
    if (golden.empty()) {
        throw ConfigError("--golden (or --input) is required for serve-stub");
    }
    if (!std::filesystem::exists(golden)) {
        throw ConfigError("golden path does not exist: '" + golden + "'");
    }
    std::vector<PromptSample> samples = load_samples_file(golden);
    const size_t sample_count = samples.size();
    StubServer server(std::move(samples));
    if (!garbage.empty()) {
        server.set_fixed_response(garbage);
    }
    const int port = server.start(cfg.port);
    // Summary goes out before blocking so launchers can scrape the port.
    print_summary({{"command", "serve-stub"},
                   {"port", port},
                   {"url", server.url()},
                   {"samples", sample_count}});
    server.wait();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SOP-annotated mobile-agent data pipeline and evaluation harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> inputs;
    std::string output, variant, rules, policy, endpoint, seed, jobs, count, max_history, port,
        model, golden, timeout_ms, max_retries, max_concurrency;
    bool mix = false, lenient = false, free_running = false, do_split = false;
    std::string garbage;

    auto* opt_config =
        app.add_option("--config", config_path, "Config file (default: $SOPBENCH_CONFIG)");
    auto* opt_input = app.add_option("--input", inputs, "Input path (repeatable for report)");
    auto* opt_output = app.add_option("--output", output, "Output path");
    auto* opt_variant =
        app.add_option("--variant", variant, "Prompt variant: base|plan|plan_state|sop");
    auto* opt_rules = app.add_option("--rules", rules, "Rule set: aitw|aia_medical|<path>");
    auto* opt_policy =
        app.add_option("--policy", policy, "Policy: oracle|rule_sop|random|remote");
    auto* opt_endpoint = app.add_option("--endpoint", endpoint, "Remote endpoint URL (http://)");
    auto* opt_mix = app.add_flag("--mix", mix, "Emit base-variant duplicates alongside SOP");
    auto* opt_seed = app.add_option("--seed", seed, "RNG seed");
    auto* opt_jobs = app.add_option("--jobs", jobs, "Worker threads");
    auto* opt_lenient =
        app.add_flag("--lenient", lenient, "Skip unparsable/invalid records instead of aborting");
    auto* opt_count = app.add_option("--count", count, "Synthetic episodes to generate");
    auto* opt_max_history =
        app.add_option("--max-history", max_history, "Prompt history cap (0 = unlimited)");
    auto* opt_port = app.add_option("--port", port, "Stub server port");
    auto* opt_model = app.add_option("--model", model, "Report row label");
    auto* opt_golden = app.add_option("--golden", golden, "Golden prompt dataset for the stub");
    auto* opt_timeout =
        app.add_option("--timeout-ms", timeout_ms, "Remote request timeout in milliseconds");
    auto* opt_retries = app.add_option("--max-retries", max_retries, "Remote retry count");
    auto* opt_concurrency =
        app.add_option("--max-concurrency", max_concurrency, "Max in-flight remote requests");

    auto* sc_ingest =
        app.add_subcommand("ingest", "Parse, validate, and canonicalize a raw corpus");
    sc_ingest->add_flag("--split", do_split, "Also write train/val/test split files");
    auto* sc_annotate = app.add_subcommand("annotate", "Write SOP pipelines for each episode");
    auto* sc_build = app.add_subcommand("build-prompts", "Emit prompt/response samples");
    auto* sc_gen =
        app.add_subcommand("gen-synthetic", "Generate a synthetic corpus from templates");
    auto* sc_eval =
        app.add_subcommand("evaluate", "Replay a corpus under a policy and score it");
    auto* sc_replay = app.add_subcommand("replay", "Replay episodes and dump per-step outcomes");
    sc_replay->add_flag("--free-running", free_running,
                        "Feed the policy its own predictions instead of gold history");
    auto* sc_report =
        app.add_subcommand("report", "Render evaluation report files as a comparison table");
    auto* sc_serve =
        app.add_subcommand("serve-stub", "Serve a golden prompt->response table over HTTP");
    sc_serve->add_option("--garbage", garbage, "Serve this fixed text for every prompt");

    for (CLI::App* sub : app.get_subcommands({})) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems are config errors
    }

    try {
        RunConfig cfg;
        const std::string effective_config =
            opt_config->count() > 0 ? config_path : default_config_path().value_or("");
        if (!effective_config.empty()) {
            cfg = load_config_file(effective_config, std::move(cfg));
        }
        const std::pair<CLI::Option*, std::pair<const char*, const std::string*>> overrides[] = {
            {opt_output, {"output", &output}},
            {opt_variant, {"variant", &variant}},
            {opt_rules, {"rules", &rules}},
            {opt_policy, {"policy", &policy}},
            {opt_endpoint, {"endpoint.url", &endpoint}},
            {opt_seed, {"seed", &seed}},
            {opt_jobs, {"jobs", &jobs}},
            {opt_count, {"count", &count}},
            {opt_max_history, {"max_history", &max_history}},
            {opt_port, {"port", &port}},
            {opt_model, {"model", &model}},
            {opt_golden, {"golden", &golden}},
            {opt_timeout, {"endpoint.timeout_ms", &timeout_ms}},
            {opt_retries, {"endpoint.max_retries", &max_retries}},
            {opt_concurrency, {"endpoint.max_concurrency", &max_concurrency}},
        };
        for (const auto& [opt, entry] : overrides) {
            if (opt->count() > 0) {
                apply_config_entry(cfg, entry.first, *entry.second);
            }
        }
        if (opt_input->count() > 0 && !inputs.empty()) {
            cfg.input = inputs.front();
        }
        if (opt_mix->count() > 0) {
            cfg.mix = true;
        }
        if (opt_lenient->count() > 0) {
            cfg.lenient = true;
        }
        cfg.match.grounding = cfg.grounding;

        if (app.got_subcommand(sc_ingest)) return cmd_ingest(cfg, do_split);
        if (app.got_subcommand(sc_annotate)) return cmd_annotate(cfg);
        if (app.got_subcommand(sc_build)) return cmd_build_prompts(cfg);
        if (app.got_subcommand(sc_gen)) return cmd_gen_synthetic(cfg);
        if (app.got_subcommand(sc_eval)) return cmd_evaluate(cfg);
        if (app.got_subcommand(sc_replay)) return cmd_replay(cfg, free_running);
        if (app.got_subcommand(sc_report)) return cmd_report(inputs);
        if (app.got_subcommand(sc_serve)) return cmd_serve_stub(cfg, garbage);
        throw ConfigError("no command selected");
    } catch (const ConfigError& e) {
        std::cerr << "error (config): " << e.what() << '\n';
        return 2;
    } catch (const EndpointError& e) {
        std::cerr << "error (endpoint): " << e.what() << '\n';
        return 4;
    } catch (const DataError& e) {
        std::cerr << "error (data): " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
