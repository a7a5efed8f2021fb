#include "litkg/ingest/rate_limiter.hpp"

#include <algorithm>
#include <thread>

namespace litkg::ingest {

TokenBucket::TokenBucket(double tokens_per_second, double burst)
    : rate_(tokens_per_second), capacity_(std::max(1.0, burst)), tokens_(capacity_), last_(Clock::now()) {}

void TokenBucket::refill(Clock::time_point now) {
    const std::chrono::duration<double> elapsed = now - last_;
    tokens_ = std::min(capacity_, tokens_ + elapsed.count() * rate_);
    last_ = now;
}

bool TokenBucket::try_acquire() {
    std::lock_guard lock(mutex_);
    if (rate_ <= 0.0) return true;
    refill(Clock::now());
    if (tokens_ < 1.0) return false;
    tokens_ -= 1.0;
    return true;
}

void TokenBucket::acquire() {
    while (true) {
        std::chrono::duration<double> wait{};
        {
            std::lock_guard lock(mutex_);
            if (rate_ <= 0.0) return;
            refill(Clock::now());
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
        }
        std::this_thread::sleep_for(wait);
    }
}

} // namespace litkg::ingest
