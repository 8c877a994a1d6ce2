#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sopbench/episode.hpp"

namespace sopbench {

struct SubsetCounts {
    std::int64_t episodes = 0;
    std::int64_t screens = 0;
    std::int64_t instructions = 0;  // distinct instruction strings

    bool operator==(const SubsetCounts&) const = default;
};

struct Manifest {
    std::map<std::string, SubsetCounts> subsets;
    SubsetCounts total;

    bool operator==(const Manifest&) const = default;
};

struct Corpus {
    std::vector<Episode> episodes;
    Manifest manifest;
};

Manifest compute_manifest(const std::vector<Episode>& episodes);

// Lenient-mode skip accounting; notes are one human-readable line per skip.
struct ParseStats {
    std::int64_t skipped_parse = 0;
    std::int64_t skipped_validation = 0;
    std::vector<std::string> notes;
};

// One record per line. Strict mode (default) aborts with ParseError or
// ValidationError; lenient mode skips offending records and logs them into
// `stats`. Episode order equals input order regardless of `jobs`.
Corpus parse_corpus(std::string_view text, bool lenient = false, ParseStats* stats = nullptr,
                    int jobs = 1);
Corpus load_corpus_file(const std::string& path, bool lenient = false,
                        ParseStats* stats = nullptr, int jobs = 1);

std::string serialize_episode(const Episode& e);
std::string serialize_corpus(const Corpus& c);
void write_corpus_file(const std::string& path, const Corpus& c);

std::string manifest_to_json(const Manifest& m);

struct SplitFractions {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

struct SplitResult {
    Corpus train;
    Corpus val;
    Corpus test;
};

// Episode-wise partition: deterministic for a fixed seed, split sizes within
// ±1 of the exact proportions, episodes keep corpus order inside each split.
SplitResult split_corpus(const Corpus& c, const SplitFractions& fractions, std::uint64_t seed);

}  // namespace sopbench
