#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sopbench/errors.hpp"
#include "sopbench/grounding.hpp"
#include "sopbench/ingest.hpp"
#include "sopbench/io.hpp"
#include "sopbench/prompt.hpp"
#include "sopbench/rng.hpp"

using namespace sopbench;

namespace {

const std::string kData = SOPBENCH_DATA_DIR;

const RuleSet& aitw() {
    static RuleSet rules = RuleSet::builtin("aitw");
    return rules;
}

struct AmazonFixture {
    Episode episode;
    std::vector<CanonicalAction> canon;
    SopPipeline pipeline;
};

const AmazonFixture& amazon() {
    static AmazonFixture f = [] {
        AmazonFixture out;
        Corpus c = load_corpus_file(kData + "/fixtures/amazon_episode.jsonl");
        REQUIRE(c.episodes.size() == 1);
        out.episode = c.episodes[0];
        for (const GroundingOutcome& o : canonicalize_episode(out.episode, GroundingConfig{})) {
            out.canon.push_back(o.action);
        }
        out.pipeline = build_pipeline(out.episode, out.canon, aitw());
        return out;
    }();
    return f;
}

// Single-line printable text; newlines and carriage returns never round-trip
// through the line-oriented response format, so the generator excludes them.
std::string random_text(Rng& rng, size_t max_len, bool allow_space = true) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        ":,.'|&()-_!?*#";
    size_t len = rng.index(max_len + 1);
    std::string out;
    for (size_t i = 0; i < len; ++i) {
        if (allow_space && rng.index(6) == 0) {
            out.push_back(' ');
        } else {
            out.push_back(alphabet[rng.index(alphabet.size())]);
        }
    }
    return out;
}

// ui_type is an uppercase token vocabulary; it never contains the " type: "
// separator that the click payload grammar reserves.
std::string random_ui_type(Rng& rng) {
    static const std::string alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    size_t len = rng.index(13);
    std::string out;
    for (size_t i = 0; i < len; ++i) out.push_back(alphabet[rng.index(alphabet.size())]);
    return out;
}

CanonicalAction random_action(Rng& rng) {
    switch (rng.index(8)) {
        case 0: {
            int id = static_cast<int>(rng.index(50)) - 1;  // includes -1
            return CanonicalAction::click(id, random_text(rng, 24), random_ui_type(rng));
        }
        case 1:
            return CanonicalAction::scroll(static_cast<ScrollDirection>(rng.index(4)));
        case 2: return CanonicalAction::type_text(random_text(rng, 24));
        case 3: return CanonicalAction::press_back();
        case 4: return CanonicalAction::press_home();
        case 5: return CanonicalAction::press_enter();
        case 6: return CanonicalAction::task_complete();
        default: return CanonicalAction::task_impossible();
    }
}

// Plan entry text must survive line trimming, so it is space-free.
SopPipeline random_pipeline(Rng& rng) {
    SopPipeline p;
    int n = 1 + static_cast<int>(rng.index(6));
    int step = 0;
    for (int i = 0; i < n; ++i) {
        SopEntry entry;
        entry.id = i;
        std::string desc;
        while (desc.empty()) desc = random_text(rng, 16, /*allow_space=*/false);
        entry.description = desc;
        entry.first_step = step;
        entry.last_step = step + static_cast<int>(rng.index(3));
        step = entry.last_step + 1;
        p.entries.push_back(std::move(entry));
    }
    return p;
}

}  // namespace

TEST_CASE("variant names round-trip") {
    for (Variant v : {Variant::kBase, Variant::kPlan, Variant::kPlanState, Variant::kSop}) {
        CHECK(variant_from_name(variant_name(v)) == v);
    }
    CHECK_THROWS_AS(variant_from_name("fancy"), ConfigError);
}

TEST_CASE("rendered prompts and responses match the stored goldens byte for byte") {
    const AmazonFixture& f = amazon();
    nlohmann::json golden =
        nlohmann::json::parse(read_text_file(kData + "/goldens/amazon_t2.json"));
    const int t = golden.at("step_index").get<int>();
    REQUIRE(t == 2);
    CHECK(golden.at("episode_id").get<std::string>() == f.episode.episode_id);

    REQUIRE(f.pipeline.entries.size() == golden.at("pipeline").size());
    for (size_t i = 0; i < f.pipeline.entries.size(); ++i) {
        CHECK(f.pipeline.entries[i].description ==
              golden.at("pipeline")[i].get<std::string>());
    }

    CHECK(render_sop_block(f.pipeline, t) == golden.at("sop_block").get<std::string>());

    std::span<const CanonicalAction> history(f.canon.data(), static_cast<size_t>(t));
    for (auto& [name, expected] : golden.at("variants").items()) {
        CAPTURE(name);
        Variant v = variant_from_name(name);
        std::string prompt = render_prompt(f.episode, t, history, &f.pipeline, v);
        std::string response = render_response(f.canon[t], &f.pipeline, t, v);
        CHECK(prompt == expected.at("prompt").get<std::string>());
        CHECK(response == expected.at("response").get<std::string>());
    }
}

TEST_CASE("base and sop responses are byte-identical at every step") {
    const AmazonFixture& f = amazon();
    for (int t = 0; t < static_cast<int>(f.episode.steps.size()); ++t) {
        CHECK(render_response(f.canon[t], &f.pipeline, t, Variant::kBase) ==
              render_response(f.canon[t], &f.pipeline, t, Variant::kSop));
    }
}

TEST_CASE("history lines keep absolute step ids under max_history") {
    const AmazonFixture& f = amazon();
    std::span<const CanonicalAction> history(f.canon.data(), 4);
    std::string full = render_prompt(f.episode, 4, history, nullptr, Variant::kBase);
    CHECK(full.find("id:0,type:DUAL_POINT") != std::string::npos);

    std::string capped = render_prompt(f.episode, 4, history, nullptr, Variant::kBase, 2);
    CHECK(capped.find("id:0,type:") == std::string::npos);
    CHECK(capped.find("id:1,type:") == std::string::npos);
    CHECK(capped.find("id:2,type:TYPE,text:best rated headphones,ui_type:\n") !=
          std::string::npos);
    CHECK(capped.find("id:3,type:DUAL_POINT") != std::string::npos);
}

TEST_CASE("pipeline-bearing variants demand a pipeline") {
    const AmazonFixture& f = amazon();
    std::span<const CanonicalAction> history(f.canon.data(), 2);
    CHECK_THROWS_AS(render_prompt(f.episode, 2, history, nullptr, Variant::kSop),
                    MissingPipeline);
    CHECK_THROWS_AS(render_response(f.canon[2], nullptr, 2, Variant::kPlan), MissingPipeline);
    CHECK_THROWS_AS(render_response(f.canon[2], nullptr, 2, Variant::kPlanState),
                    MissingPipeline);
    // base ignores it
    CHECK_NOTHROW(render_prompt(f.episode, 2, history, nullptr, Variant::kBase));
}

TEST_CASE("render_prompt validates the step index") {
    const AmazonFixture& f = amazon();
    CHECK_THROWS_AS(render_prompt(f.episode, 99, {}, nullptr, Variant::kBase), DataError);
    CHECK_THROWS_AS(render_prompt(f.episode, -1, {}, nullptr, Variant::kBase), DataError);
}

TEST_CASE("parse_response handles the response grammar") {
    ParsedResponse click = parse_response("action: DUAL_POINT\ntext: XXX type: ICON_STAR id:1");
    REQUIRE(click.ok);
    CHECK(click.action == CanonicalAction::click(1, "XXX", "ICON_STAR"));

    ParsedResponse type = parse_response("action: TYPE\ntext: best rated headphones");
    REQUIRE(type.ok);
    CHECK(type.action == CanonicalAction::type_text("best rated headphones"));

    ParsedResponse scroll = parse_response("action: SCROLL DOWN");
    REQUIRE(scroll.ok);
    CHECK(scroll.action == CanonicalAction::scroll(ScrollDirection::kDown));

    CHECK(parse_response("action: PRESS_BACK").action == CanonicalAction::press_back());
    CHECK(parse_response("action: TASK_COMPLETE").action == CanonicalAction::task_complete());
    CHECK(parse_response("action: STATUS_TASK_COMPLETE").action ==
          CanonicalAction::task_complete());

    // tolerated variations
    CHECK(parse_response("action type: PRESS_HOME").action == CanonicalAction::press_home());
    CHECK(parse_response("  action: scroll up  ").action ==
          CanonicalAction::scroll(ScrollDirection::kUp));
    CHECK(parse_response("\n\naction: PRESS_ENTER\ntrailing junk").ok);

    ParsedResponse planned = parse_response(
        "PLAN:\nid:0 first\nid:1 second\naction: TASK_COMPLETE");
    REQUIRE(planned.ok);
    REQUIRE(planned.plan.has_value());
    CHECK(*planned.plan == std::vector<std::string>{"first", "second"});

    ParsedResponse stated = parse_response(
        "PLAN&STATE:\nid:0 first,state:finish\nid:1 second,state:unfinish\naction: PRESS_BACK");
    REQUIRE(stated.ok);
    CHECK(*stated.plan == std::vector<std::string>{"first", "second"});
}

TEST_CASE("parse_response failures are values, not exceptions") {
    CHECK_FALSE(parse_response("").ok);
    CHECK_FALSE(parse_response("garbage").ok);
    CHECK_FALSE(parse_response("action: FLY").ok);
    CHECK_FALSE(parse_response("action: SCROLL SIDEWAYS").ok);
    CHECK_FALSE(parse_response("action: DUAL_POINT").ok);
    CHECK_FALSE(parse_response("action: DUAL_POINT\ntext: no payload").ok);
    CHECK_FALSE(parse_response("action: TYPE").ok);
    CHECK_FALSE(parse_response("PLAN:\nid:0 first").ok);
    CHECK_FALSE(parse_response("PLAN:\nnot an entry\naction: TYPE\ntext: x").ok);
    for (const char* bad : {"", "garbage", "action: FLY"}) {
        CHECK_FALSE(parse_response(bad).error.empty());
    }
}

TEST_CASE("parse inverts render over randomized actions") {
    Rng rng(20260822);
    int checked = 0;
    for (int i = 0; i < 1200; ++i) {
        CanonicalAction a = random_action(rng);
        std::string rendered = render_response(a, nullptr, 0, Variant::kBase);
        ParsedResponse parsed = parse_response(rendered);
        CAPTURE(rendered);
        REQUIRE(parsed.ok);
        CHECK(parsed.action == a);
        CHECK_FALSE(parsed.plan.has_value());
        ++checked;
    }
    CHECK(checked >= 1000);
}

TEST_CASE("parse inverts render over randomized plans") {
    Rng rng(4711);
    for (int i = 0; i < 400; ++i) {
        SopPipeline p = random_pipeline(rng);
        CanonicalAction a = random_action(rng);
        int t = static_cast<int>(rng.index(p.entries.back().last_step + 2));
        Variant v = rng.index(2) == 0 ? Variant::kPlan : Variant::kPlanState;
        std::string rendered = render_response(a, &p, t, v);
        ParsedResponse parsed = parse_response(rendered);
        CAPTURE(rendered);
        REQUIRE(parsed.ok);
        CHECK(parsed.action == a);
        REQUIRE(parsed.plan.has_value());
        REQUIRE(parsed.plan->size() == p.entries.size());
        for (size_t k = 0; k < p.entries.size(); ++k) {
            CHECK((*parsed.plan)[k] == p.entries[k].description);
        }
    }
}

TEST_CASE("build_dataset emits one sample per grounded step") {
    Corpus c = load_corpus_file(kData + "/fixtures/corpus_small.jsonl");
    BuildStats stats;
    std::vector<PromptSample> samples = build_dataset(c, aitw(), BuildOptions{}, &stats);
    REQUIRE(samples.size() == 5);
    CHECK(stats.samples == 5);
    CHECK(stats.skipped_ungrounded_steps == 0);
    CHECK(samples[0].episode_id == "general_001");
    CHECK(samples[0].step_index == 0);
    CHECK(samples[0].variant == Variant::kBase);
    CHECK(samples[4].episode_id == "single_001");
    for (const PromptSample& s : samples) {
        CHECK(s.prompt_tokens > 0);
        CHECK(s.response_tokens > 0);
        CHECK(s.sop_block.empty());
    }
}

TEST_CASE("build_dataset skips ungrounded steps and counts them") {
    Corpus c = parse_corpus(
        R"({"episode_id":"far","subset":"general","instruction":"tap","steps":[{"screen":{"elements":[{"id":0,"text":"A","ui_type":"TEXT","bbox":[0.05,0.05,0.15,0.12]}]},"action":{"type":"DUAL_POINT","touch":[0.9,0.9],"lift":[0.9,0.9]}},{"screen":{"elements":[{"id":0,"text":"A","ui_type":"TEXT","bbox":[0.05,0.05,0.15,0.12]}]},"action":{"type":"STATUS_TASK_COMPLETE","touch":[-1,-1],"lift":[-1,-1]}}]})");
    BuildStats stats;
    std::vector<PromptSample> samples = build_dataset(c, aitw(), BuildOptions{}, &stats);
    CHECK(samples.size() == 1);
    CHECK(stats.skipped_ungrounded_steps == 1);
}

TEST_CASE("mix doubles sop samples with base twins") {
    Corpus c = load_corpus_file(kData + "/fixtures/amazon_episode.jsonl");
    BuildOptions opts;
    opts.variant = Variant::kSop;
    opts.mix = true;
    BuildStats stats;
    std::vector<PromptSample> samples = build_dataset(c, aitw(), opts, &stats);
    REQUIRE(samples.size() == 10);
    for (size_t i = 0; i < samples.size(); i += 2) {
        CHECK(samples[i].variant == Variant::kSop);
        CHECK(samples[i + 1].variant == Variant::kBase);
        CHECK(samples[i].step_index == samples[i + 1].step_index);
        CHECK(samples[i].response == samples[i + 1].response);
        CHECK_FALSE(samples[i].sop_block.empty());
        CHECK(samples[i].prompt.find(samples[i].sop_block) != std::string::npos);
    }

    BuildOptions bad;
    bad.mix = true;  // base variant
    CHECK_THROWS_AS(build_dataset(c, aitw(), bad), ConfigError);
}

TEST_CASE("empty-pipeline episodes are skipped only for pipeline variants") {
    Corpus c = parse_corpus(
        R"({"episode_id":"all-excluded","subset":"general","instruction":"back out","steps":[{"screen":{"elements":[{"id":0,"text":"A","ui_type":"TEXT","bbox":[0.1,0.1,0.3,0.2]}]},"action":{"type":"PRESS_BACK","touch":[-1,-1],"lift":[-1,-1]}}]})");
    BuildOptions sop;
    sop.variant = Variant::kSop;
    BuildStats stats;
    std::vector<PromptSample> samples = build_dataset(c, aitw(), sop, &stats);
    CHECK(samples.empty());
    CHECK(stats.skipped_empty_pipeline_episodes == 1);

    BuildStats base_stats;
    std::vector<PromptSample> base = build_dataset(c, aitw(), BuildOptions{}, &base_stats);
    CHECK(base.size() == 1);
    CHECK(base_stats.skipped_empty_pipeline_episodes == 0);
}

TEST_CASE("samples serialize and parse losslessly") {
    Corpus c = load_corpus_file(kData + "/fixtures/amazon_episode.jsonl");
    BuildOptions opts;
    opts.variant = Variant::kSop;
    std::vector<PromptSample> samples = build_dataset(c, aitw(), opts);
    std::vector<PromptSample> again = parse_samples(serialize_samples(samples));
    REQUIRE(samples.size() == again.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i].episode_id == again[i].episode_id);
        CHECK(samples[i].step_index == again[i].step_index);
        CHECK(samples[i].variant == again[i].variant);
        CHECK(samples[i].prompt == again[i].prompt);
        CHECK(samples[i].response == again[i].response);
        CHECK(samples[i].sop_block == again[i].sop_block);
        CHECK(samples[i].prompt_tokens == again[i].prompt_tokens);
        CHECK(samples[i].response_tokens == again[i].response_tokens);
    }

    std::string path = (std::filesystem::temp_directory_path() / "sopbench_samples.jsonl").string();
    write_samples_file(path, samples);
    std::vector<PromptSample> loaded = load_samples_file(path);
    CHECK(loaded.size() == samples.size());
    std::filesystem::remove(path);

    CHECK_THROWS_AS(parse_samples("nonsense"), ParseError);
}

TEST_CASE("parallel dataset builds keep corpus order") {
    std::string text;
    Corpus small = load_corpus_file(kData + "/fixtures/corpus_small.jsonl");
    Corpus big;
    for (int rep = 0; rep < 6; ++rep) {
        for (Episode e : small.episodes) {
            e.episode_id += "-" + std::to_string(rep);
            big.episodes.push_back(std::move(e));
        }
    }
    big.manifest = compute_manifest(big.episodes);
    BuildOptions seq;
    seq.jobs = 1;
    BuildOptions par;
    par.jobs = 8;
    std::vector<PromptSample> a = build_dataset(big, aitw(), seq);
    std::vector<PromptSample> b = build_dataset(big, aitw(), par);
    CHECK(serialize_samples(a) == serialize_samples(b));
}
