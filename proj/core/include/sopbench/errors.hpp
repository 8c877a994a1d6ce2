#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sopbench {

// Error categories map to CLI exit codes: config = 2, data = 3, endpoint = 4.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct EndpointError : std::runtime_error {
    explicit EndpointError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : DataError {
    int line_number;
    std::string reason;
    ParseError(int line, const std::string& why)
        : DataError("parse error at line " + std::to_string(line) + ": " + why),
          line_number(line),
          reason(why) {}
};

struct ValidationError : DataError {
    std::string episode_id;
    std::vector<std::string> findings;
    ValidationError(std::string id, std::vector<std::string> found)
        : DataError("episode '" + id + "' failed validation (" +
                    std::to_string(found.size()) + " finding(s): " +
                    (found.empty() ? std::string() : found.front()) + ")"),
          episode_id(std::move(id)),
          findings(std::move(found)) {}
};

struct EmptyCorpus : DataError {
    explicit EmptyCorpus(const std::string& what = "corpus has no episodes") : DataError(what) {}
};

struct UnrealizableTemplate : DataError {
    explicit UnrealizableTemplate(const std::string& what) : DataError(what) {}
};

struct EmptyPipeline : DataError {
    std::string episode_id;
    explicit EmptyPipeline(std::string id)
        : DataError("episode '" + id + "' has no SOP entries (all steps excluded)"),
          episode_id(std::move(id)) {}
};

struct MissingPipeline : DataError {
    explicit MissingPipeline(const std::string& what = "SOP pipeline required but absent")
        : DataError(what) {}
};

struct ExtractionFailure : DataError {
    explicit ExtractionFailure(const std::string& what) : DataError(what) {}
};

struct LabelNotFound : DataError {
    explicit LabelNotFound(const std::string& label)
        : DataError("option label not found: '" + label + "'") {}
};

struct EmptyEpisode : DataError {
    explicit EmptyEpisode(const std::string& what = "episode has no steps to score")
        : DataError(what) {}
};

struct EndpointUnavailable : EndpointError {
    explicit EndpointUnavailable(const std::string& what) : EndpointError(what) {}
};

}  // namespace sopbench
