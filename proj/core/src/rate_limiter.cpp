#include "edsim/rate_limiter.hpp"

namespace edsim {

RateLimiter::RateLimiter(int requests_per_minute, int max_concurrent,
                         std::chrono::milliseconds window)
    : rpm_(requests_per_minute), max_concurrent_(max_concurrent), window_(window) {}

RateLimiter::Grant RateLimiter::try_acquire(LimiterClock::time_point now) {
    std::lock_guard lock(mutex_);
    return try_acquire_locked(now);
}

RateLimiter::Grant RateLimiter::try_acquire_locked(LimiterClock::time_point now) {
    while (!grant_log_.empty() && grant_log_.front() + window_ <= now) {
        grant_log_.pop_front();
    }

    if (in_flight_ >= max_concurrent_) {
        return Grant{false, std::chrono::milliseconds(0)};
    }
    if (rpm_ > 0 && static_cast<int>(grant_log_.size()) >= rpm_) {
        auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(
            grant_log_.front() + window_ - now);
        if (wait < std::chrono::milliseconds(1)) wait = std::chrono::milliseconds(1);
        return Grant{false, wait};
    }

    if (rpm_ > 0) grant_log_.push_back(now);
    ++in_flight_;
    return Grant{true, std::chrono::milliseconds(0)};
}

void RateLimiter::release() {
    {
        std::lock_guard lock(mutex_);
        --in_flight_;
    }
    cv_.notify_all();
}

void RateLimiter::acquire_blocking() {
    std::unique_lock lock(mutex_);
    const std::uint64_t ticket = next_ticket_++;

    for (;;) {
        if (serving_ticket_ == ticket) {
            Grant grant = try_acquire_locked(LimiterClock::now());
            if (grant.granted) {
                ++serving_ticket_;
                lock.unlock();
                cv_.notify_all();
                return;
            }
            if (grant.wait.count() > 0) {
                cv_.wait_for(lock, grant.wait);
            } else {
                cv_.wait(lock);  // concurrency slot; release() notifies
            }
        } else {
            cv_.wait(lock);
        }
    }
}

int RateLimiter::in_flight() const {
    std::lock_guard lock(mutex_);
    return in_flight_;
}

}  // namespace edsim
