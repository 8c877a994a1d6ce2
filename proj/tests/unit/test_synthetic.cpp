#include "doctest.h"
#include "sopbench/errors.hpp"
#include "sopbench/grounding.hpp"
#include "sopbench/synthetic.hpp"

using namespace sopbench;

namespace {

const std::string kTemplates = std::string(SOPBENCH_DATA_DIR) + "/templates";

const RuleSet& aitw() {
    static RuleSet rules = RuleSet::builtin("aitw");
    return rules;
}

std::vector<CanonicalAction> gold_actions(const Episode& e) {
    std::vector<CanonicalAction> out;
    for (const GroundingOutcome& o : canonicalize_episode(e, GroundingConfig{})) {
        out.push_back(o.action);
    }
    return out;
}

}  // namespace

TEST_CASE("parse_templates accepts all three shapes") {
    std::vector<SyntheticTemplate> suite = load_templates_file(kTemplates + "/aitw_suite.json");
    REQUIRE(suite.size() == 5);
    CHECK(suite[0].name == "web-shopping-search");
    CHECK(suite[0].subset == "web_shopping");
    CHECK(suite[4].slots.empty());

    std::vector<SyntheticTemplate> single = load_templates_file(kTemplates + "/amazon.json");
    REQUIRE(single.size() == 1);
    CHECK(single[0].name == "amazon-search");

    std::vector<SyntheticTemplate> arr = parse_templates(
        R"([{"name":"a","subset":"s","instruction_pattern":"p","sop_skeleton":["task complete"],"element_pools":{}}])");
    CHECK(arr.size() == 1);
}

TEST_CASE("parse_templates rejects consecutive duplicate skeleton entries") {
    CHECK_THROWS_AS(parse_templates(
        R"({"name":"a","subset":"s","instruction_pattern":"p","sop_skeleton":["task complete","task complete"],"element_pools":{}})"),
        DataError);
}

TEST_CASE("fill_slots substitutes every placeholder and rejects leftovers") {
    std::map<std::string, std::string> vals{{"query", "laptops"}};
    CHECK(fill_slots("Search for {query}.", vals) == "Search for laptops.");
    CHECK(fill_slots("no slots", vals) == "no slots");
    CHECK_THROWS_AS(fill_slots("missing {other}", vals), DataError);
}

TEST_CASE("generation is seed-deterministic") {
    std::vector<SyntheticTemplate> suite = load_templates_file(kTemplates + "/aitw_suite.json");
    Corpus a = generate_suite(suite, 20, 123, aitw());
    Corpus b = generate_suite(suite, 20, 123, aitw());
    Corpus c = generate_suite(suite, 20, 124, aitw());
    CHECK(serialize_corpus(a) == serialize_corpus(b));
    CHECK(serialize_corpus(a) != serialize_corpus(c));
}

TEST_CASE("generated episodes satisfy every schema invariant") {
    std::vector<SyntheticTemplate> suite = load_templates_file(kTemplates + "/aitw_suite.json");
    Corpus c = generate_suite(suite, 25, 9, aitw());
    REQUIRE(c.episodes.size() == 25);
    for (const Episode& e : c.episodes) {
        CAPTURE(e.episode_id);
        CHECK(validate_episode(e).empty());
        CHECK_FALSE(e.steps.empty());
        CHECK(e.steps.back().action.kind == RawActionKind::kStatusTaskComplete);
    }
}

TEST_CASE("annotating a generated episode reproduces the filled skeleton") {
    std::vector<SyntheticTemplate> suite = load_templates_file(kTemplates + "/aitw_suite.json");
    std::vector<std::vector<std::string>> skeletons;
    Corpus c = generate_suite(suite, 25, 31, aitw(), &skeletons);
    REQUIRE(c.episodes.size() == skeletons.size());
    for (size_t i = 0; i < c.episodes.size(); ++i) {
        const Episode& e = c.episodes[i];
        CAPTURE(e.episode_id);
        SopPipeline p = build_pipeline(e, gold_actions(e), aitw());
        REQUIRE(p.entries.size() == skeletons[i].size());
        for (size_t k = 0; k < skeletons[i].size(); ++k) {
            CHECK(p.entries[k].description == skeletons[i][k]);
        }
    }
}

TEST_CASE("every generated click grounds back to the intended element") {
    std::vector<SyntheticTemplate> suite = load_templates_file(kTemplates + "/aitw_suite.json");
    Corpus c = generate_suite(suite, 15, 77, aitw());
    for (const Episode& e : c.episodes) {
        for (const GroundingOutcome& o : canonicalize_episode(e, GroundingConfig{})) {
            CHECK(o.grounded);
        }
    }
}

TEST_CASE("generate_suite distributes counts evenly in suite order") {
    std::vector<SyntheticTemplate> suite = load_templates_file(kTemplates + "/aitw_suite.json");
    Corpus c = generate_suite(suite, 7, 5, aitw());
    REQUIRE(c.episodes.size() == 7);
    std::map<std::string, int> per_subset;
    for (const Episode& e : c.episodes) ++per_subset[e.subset];
    CHECK(per_subset["web_shopping"] == 2);
    CHECK(per_subset["install"] == 2);
    CHECK(per_subset["google_apps"] == 1);
    CHECK(per_subset["general"] == 1);
    CHECK(per_subset["single"] == 1);

    CHECK(c.manifest.total.episodes == 7);
}

TEST_CASE("episode ids are unique and template-tagged") {
    std::vector<SyntheticTemplate> suite = load_templates_file(kTemplates + "/aitw_suite.json");
    Corpus c = generate_suite(suite, 10, 3, aitw());
    std::map<std::string, int> seen;
    for (const Episode& e : c.episodes) {
        CHECK(++seen[e.episode_id] == 1);
    }
    CHECK(c.episodes[0].episode_id.rfind("web-shopping-search-", 0) == 0);
}

TEST_CASE("a skeleton no rule or pool realizes is rejected") {
    SyntheticTemplate t;
    t.name = "broken";
    t.subset = "general";
    t.instruction_pattern = "do";
    t.sop_skeleton = {"definitely not a rule description", "task complete"};
    CHECK_THROWS_AS(generate_synthetic(t, 1, 0, aitw()), UnrealizableTemplate);
}

TEST_CASE("generation validates the requested count") {
    std::vector<SyntheticTemplate> suite = load_templates_file(kTemplates + "/aitw_suite.json");
    CHECK_THROWS_AS(generate_suite(suite, 0, 1, aitw()), ConfigError);
    CHECK_THROWS_AS(generate_suite(std::span<const SyntheticTemplate>{}, 5, 1, aitw()),
                    ConfigError);
}
