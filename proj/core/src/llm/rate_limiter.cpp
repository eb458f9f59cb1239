#include "agreekit/llm/rate_limiter.hpp"

#include <cmath>
#include <thread>

#include "agreekit/errors.hpp"

namespace agreekit::llm {

ClockFn system_clock_fn() {
  return [] { return SteadyClock::now(); };
}

SleepFn system_sleep_fn() {
  return [](SteadyClock::duration d) { std::this_thread::sleep_for(d); };
}

RateLimiter::RateLimiter(double requests_per_minute, ClockFn clock, SleepFn sleep)
    : clock_(std::move(clock)), sleep_(std::move(sleep)) {
  if (!(requests_per_minute > 0.0)) throw ValidationError("rate limit must be positive");
  // A fractional limit still permits one request per window.
  capacity_ = static_cast<std::size_t>(std::max(1.0, std::floor(requests_per_minute)));
}

void RateLimiter::acquire() {
  constexpr auto window = std::chrono::seconds(60);
  std::unique_lock lock(mutex_);
  for (;;) {
    const auto now = clock_();
    while (!recent_.empty() && recent_.front() + window <= now) recent_.pop_front();
    if (recent_.size() < capacity_) {
      recent_.push_back(now);
      return;
    }
    const auto wait = recent_.front() + window - now;
    sleep_(wait);
  }
}

}  // namespace agreekit::llm
