#pragma once

#include <chrono>
#include <mutex>

namespace litkg::ingest {

/// Thread-safe token bucket. `acquire` blocks until a token is available.
class TokenBucket {
public:
    using Clock = std::chrono::steady_clock;

    explicit TokenBucket(double tokens_per_second = 3.0, double burst = 1.0);

    void acquire();
    /// Non-blocking variant; returns false when the bucket is empty.
    bool try_acquire();

    double rate() const { return rate_; }

private:
    void refill(Clock::time_point now);

    double rate_;
    double capacity_;
    double tokens_;
    Clock::time_point last_;
    std::mutex mutex_;
};

} // namespace litkg::ingest
