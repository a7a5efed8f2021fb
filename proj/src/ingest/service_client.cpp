#include "litkg/ingest/service_client.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

#include "litkg/error.hpp"

namespace litkg::ingest {

std::string url_encode(std::string_view s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(s.size() * 3);
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

ServiceClient::ServiceClient(ServiceConfig config)
    : config_(std::move(config)), bucket_(config_.requests_per_second, 1.0) {
    const auto scheme_end = config_.base_url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("service base URL lacks a scheme: " + config_.base_url);
    const auto path_start = config_.base_url.find('/', scheme_end + 3);
    host_ = config_.base_url.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : config_.base_url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    if (config_.cache_dir) cache_.emplace(*config_.cache_dir);
    if (config_.max_attempts < 1) config_.max_attempts = 1;
}

ServiceClient::~ServiceClient() = default;

std::string ServiceClient::get(const std::string& path, const std::map<std::string, std::string>& params) {
    std::string query;
    for (const auto& [k, v] : params) {
        query += query.empty() ? "?" : "&";
        query += url_encode(k) + "=" + url_encode(v);
    }
    const std::string target = path_prefix_ + path + query;
    const std::string key = DiskCache::key_for(host_ + target);
    if (cache_) {
        if (auto hit = cache_->get(key)) {
            ++cache_hits_;
            return *hit;
        }
    }

    std::string request_target = target;
    if (!config_.api_key.empty()) {
        request_target += (query.empty() ? "?" : "&") + std::string("api_key=") + url_encode(config_.api_key);
    }

    httplib::Client http(host_);
    http.set_connection_timeout(config_.timeout_seconds, 0);
    http.set_read_timeout(config_.timeout_seconds, 0);
    http.set_follow_location(true);

    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        bucket_.acquire();
        ++network_calls_;
        auto res = http.Get(request_target);
        if (res && res->status == 200) {
            if (cache_) cache_->put(key, res->body);
            return res->body;
        }
        if (res && res->status != 429 && res->status < 500) {
            throw IngestError("request " + target + " failed with HTTP " + std::to_string(res->status), false,
                              attempt);
        }
        last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
        if (attempt < config_.max_attempts) {
            std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_ms << (attempt - 1)));
        }
    }
    throw IngestError("request " + host_ + target + " failed: " + last_error, true, config_.max_attempts);
}

} // namespace litkg::ingest
