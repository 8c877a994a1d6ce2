#include "sopbench/remote.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <thread>
#include <unordered_map>

#include "sopbench/errors.hpp"
#include "sopbench/parallel.hpp"

#include "httplib.h"
#include "json.hpp"

namespace sopbench {

using json = nlohmann::json;

ParsedHttpUrl parse_http_url(const std::string& url) {
    constexpr std::string_view kHttp = "http://";
    constexpr std::string_view kHttps = "https://";
    if (url.rfind(kHttps, 0) == 0) {
        throw ConfigError("TLS endpoints are not supported, use http://: '" + url + "'");
    }
    if (url.rfind(kHttp, 0) != 0) {
        throw ConfigError("endpoint URL must start with http://: '" + url + "'");
    }
    std::string rest = url.substr(kHttp.size());
    ParsedHttpUrl parsed;
    const size_t slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    parsed.path = slash == std::string::npos ? "/" : rest.substr(slash);
    const size_t colon = hostport.rfind(':');
    if (colon == std::string::npos) {
        parsed.host = hostport;
    } else {
        parsed.host = hostport.substr(0, colon);
        const std::string port_text = hostport.substr(colon + 1);
        int port = 0;
        const auto [ptr, ec] =
            std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
        if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 1 ||
            port > 65535) {
            throw ConfigError("invalid port in endpoint URL: '" + url + "'");
        }
        parsed.port = port;
    }
    if (parsed.host.empty()) {
        throw ConfigError("endpoint URL has no host: '" + url + "'");
    }
    return parsed;
}

struct RemoteClient::Impl {
    RemoteEndpoint endpoint;
    ParsedHttpUrl url;
    Semaphore sem;

    explicit Impl(RemoteEndpoint ep)
        : endpoint(std::move(ep)),
          url(parse_http_url(endpoint.url)),
          sem(std::max(1, endpoint.max_concurrency)) {}
};

RemoteClient::RemoteClient(RemoteEndpoint endpoint)
    : impl_(std::make_unique<Impl>(std::move(endpoint))) {}

RemoteClient::~RemoteClient() = default;

std::string RemoteClient::complete(const std::string& prompt) {
    SemaphoreGuard guard(impl_->sem);
    const std::string payload = json{{"prompt", prompt}}.dump();
    const int attempts = 1 + std::max(0, impl_->endpoint.max_retries);
    std::string last_error;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100L * attempt));
        }
        httplib::Client cli(impl_->url.host, impl_->url.port);
        const time_t sec = impl_->endpoint.timeout_ms / 1000;
        const time_t usec = (impl_->endpoint.timeout_ms % 1000) * 1000;
        cli.set_connection_timeout(sec, usec);
        cli.set_read_timeout(sec, usec);
        cli.set_write_timeout(sec, usec);
        auto res = cli.Post(impl_->url.path, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "unexpected status " + std::to_string(res->status);
            continue;
        }
        try {
            return json::parse(res->body).at("text").get<std::string>();
        } catch (const json::exception& ex) {
            last_error = std::string("malformed reply body: ") + ex.what();
            continue;
        }
    }
    throw EndpointUnavailable("endpoint '" + impl_->endpoint.url + "' failed after " +
                              std::to_string(attempts) + " attempt(s): " + last_error);
}

namespace {

class RemotePolicy final : public Policy {
  public:
    RemotePolicy(RemoteEndpoint endpoint, Variant variant, int max_history, std::string name)
        : client_(std::move(endpoint)),
          variant_(variant),
          max_history_(max_history),
          name_(std::move(name)) {}

    std::string_view name() const override { return name_; }

    PredictionOutcome predict(const PolicyContext& ctx, const CanonicalAction*) override {
        const Episode& e = *ctx.episode;
        // Free-running overruns keep showing the last recorded screen.
        const int render_t =
            std::min(ctx.step, static_cast<int>(e.steps.size()) - 1);
        const std::string prompt =
            render_prompt(e, render_t, ctx.history, ctx.pipeline, variant_, max_history_);
        const std::string text = client_.complete(prompt);
        ParsedResponse parsed = parse_response(text);
        if (!parsed.ok) {
            PredictionOutcome out;
            out.parse_failure = true;
            out.note = parsed.error;
            return out;
        }
        return PredictionOutcome::of(std::move(parsed.action));
    }

  private:
    RemoteClient client_;
    Variant variant_;
    int max_history_;
    std::string name_;
};

}  // namespace

std::unique_ptr<Policy> make_remote_policy(RemoteEndpoint endpoint, Variant variant,
                                           int max_history, std::string display_name) {
    return std::make_unique<RemotePolicy>(std::move(endpoint), variant, max_history,
                                          std::move(display_name));
}

struct StubServer::Impl {
    std::unordered_map<std::string, std::string> by_prompt;
    std::string fixed_response;
    bool has_fixed = false;
    std::atomic<long> requests{0};
    int port = 0;
    httplib::Server server;
    std::thread listener;
};

StubServer::StubServer(std::vector<PromptSample> golden) : impl_(std::make_unique<Impl>()) {
    for (PromptSample& s : golden) {
        impl_->by_prompt[std::move(s.prompt)] = std::move(s.response);
    }
    impl_->server.Post(R"(/.*)", [impl = impl_.get()](const httplib::Request& req,
                                                      httplib::Response& res) {
        impl->requests.fetch_add(1, std::memory_order_relaxed);
        std::string prompt;
        try {
            prompt = json::parse(req.body).at("prompt").get<std::string>();
        } catch (const json::exception&) {
            res.status = 400;
            res.set_content(json{{"error", "body must be {\"prompt\": ...}"}}.dump(),
                            "application/json");
            return;
        }
        if (impl->has_fixed) {
            res.set_content(json{{"text", impl->fixed_response}}.dump(), "application/json");
            return;
        }
        const auto it = impl->by_prompt.find(prompt);
        if (it == impl->by_prompt.end()) {
            res.status = 404;
            res.set_content(json{{"error", "unknown prompt"}}.dump(), "application/json");
            return;
        }
        res.set_content(json{{"text", it->second}}.dump(), "application/json");
    });
}

StubServer::~StubServer() {
    stop();
}

void StubServer::set_fixed_response(std::string text) {
    impl_->fixed_response = std::move(text);
    impl_->has_fixed = true;
}

int StubServer::start(int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port("127.0.0.1");
        if (bound < 0) {
            throw EndpointError("stub server failed to bind to a free port");
        }
        impl_->port = bound;
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port)) {
            throw EndpointError("stub server failed to bind port " + std::to_string(port));
        }
        impl_->port = port;
    }
    impl_->listener = std::thread([impl = impl_.get()] { impl->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

void StubServer::stop() {
    if (impl_->listener.joinable()) {
        impl_->server.stop();
        impl_->listener.join();
    }
}

void StubServer::wait() {
    if (impl_->listener.joinable()) {
        impl_->listener.join();
    }
}

std::string StubServer::url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port) + "/";
}

long StubServer::requests() const {
    return impl_->requests.load(std::memory_order_relaxed);
}

}  // namespace sopbench
