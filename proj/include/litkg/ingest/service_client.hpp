#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "litkg/ingest/cache.hpp"
#include "litkg/ingest/rate_limiter.hpp"

namespace litkg::ingest {

struct ServiceConfig {
    /// e.g. "https://eutils.ncbi.nlm.nih.gov/entrez/eutils"
    std::string base_url;
    std::string api_key;
    double requests_per_second = 3.0;
    int max_attempts = 3;
    int backoff_ms = 500;
    int timeout_seconds = 30;
    std::optional<std::filesystem::path> cache_dir;
};

/// GET-only HTTP client with on-disk response cache, token-bucket rate
/// limiting and exponential-backoff retries.
class ServiceClient {
public:
    explicit ServiceClient(ServiceConfig config);
    ~ServiceClient();

    ServiceClient(const ServiceClient&) = delete;
    ServiceClient& operator=(const ServiceClient&) = delete;

    /// Returns the response body for `path` with `params` (sorted by key, so the
    /// cache key is stable). The API key is sent but never part of the cache key.
    std::string get(const std::string& path, const std::map<std::string, std::string>& params);

    /// Number of requests that actually went to the network.
    int network_calls() const { return network_calls_.load(); }
    int cache_hits() const { return cache_hits_.load(); }

    const ServiceConfig& config() const { return config_; }

private:
    ServiceConfig config_;
    std::string host_;
    std::string path_prefix_;
    TokenBucket bucket_;
    std::optional<DiskCache> cache_;
    std::atomic<int> network_calls_{0};
    std::atomic<int> cache_hits_{0};
};

std::string url_encode(std::string_view s);

} // namespace litkg::ingest
