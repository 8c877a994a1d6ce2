#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sopbench/policy.hpp"
#include "sopbench/prompt.hpp"

namespace sopbench {

struct RemoteEndpoint {
    std::string url;  // http:// only
    int timeout_ms = 30000;
    int max_retries = 2;  // attempts = 1 + max_retries
    int max_concurrency = 8;
};

struct ParsedHttpUrl {
    std::string host;
    int port = 80;
    std::string path = "/";
};

// Accepts http://host[:port][/path]; anything else — notably https — is a
// ConfigError.
ParsedHttpUrl parse_http_url(const std::string& url);

// Blocking completion client: POST {"prompt"} -> 200 {"text"}. Transport
// failures (connect/timeout, non-200 status, malformed reply JSON) retry
// with linear ~100ms backoff; EndpointUnavailable after the last attempt.
// Thread-safe; at most max_concurrency requests are in flight at once.
class RemoteClient {
  public:
    explicit RemoteClient(RemoteEndpoint endpoint);
    ~RemoteClient();

    RemoteClient(const RemoteClient&) = delete;
    RemoteClient& operator=(const RemoteClient&) = delete;

    std::string complete(const std::string& prompt);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Renders the variant prompt for the current step, asks the endpoint, and
// parses the reply. An unparsable reply is a parse failure (scored
// incorrect, never thrown); EndpointUnavailable propagates so the caller
// can mark the episode unevaluated. `display_name` labels report rows.
std::unique_ptr<Policy> make_remote_policy(RemoteEndpoint endpoint, Variant variant,
                                           int max_history = 0,
                                           std::string display_name = "remote");

// In-process test double: serves golden prompt -> response pairs taken from
// a prompt dataset; unknown prompts get a 404. A fixed response overrides
// the table for fault injection.
class StubServer {
  public:
    explicit StubServer(std::vector<PromptSample> golden);
    ~StubServer();

    StubServer(const StubServer&) = delete;
    StubServer& operator=(const StubServer&) = delete;

    void set_fixed_response(std::string text);

    // Binds 127.0.0.1 (any free port when port == 0) and serves from a
    // background thread; returns the bound port. EndpointError on failure.
    int start(int port = 0);
    void stop();
    // Blocks until stop() (for running the stub as a foreground process).
    void wait();

    std::string url() const;
    long requests() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace sopbench
