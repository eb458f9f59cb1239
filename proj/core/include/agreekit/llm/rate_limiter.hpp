#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <mutex>

namespace agreekit::llm {

using SteadyClock = std::chrono::steady_clock;
using ClockFn = std::function<SteadyClock::time_point()>;
using SleepFn = std::function<void(SteadyClock::duration)>;

ClockFn system_clock_fn();
SleepFn system_sleep_fn();

/// Sliding-window limiter: at most `requests_per_minute` acquisitions in any
/// trailing 60 second window. acquire() blocks (through the sleep function)
/// until a slot frees up.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute, ClockFn clock = system_clock_fn(),
                       SleepFn sleep = system_sleep_fn());

  void acquire();

 private:
  std::size_t capacity_;
  ClockFn clock_;
  SleepFn sleep_;
  std::mutex mutex_;
  std::deque<SteadyClock::time_point> recent_;
};

}  // namespace agreekit::llm
