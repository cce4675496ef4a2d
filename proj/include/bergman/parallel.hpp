#pragma once

#include <cstddef>
#include <functional>

namespace bergman {

//! Worker count: BERGMAN_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

//! Runs body(i) for i in [0, n). Each index is handled exactly once; callers
//! write into per-index slots so results do not depend on the partition.
void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& body);

//! Neumaier-compensated accumulator.
template <typename T>
struct CompensatedSum {
  T sum{};
  T carry{};

  void add(const T& x) {
    const T t = sum + x;
    carry += absolute(sum) >= absolute(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  T value() const { return sum + carry; }

 private:
  template <typename U>
  static auto absolute(const U& u) {
    using std::abs;
    return abs(u);
  }
};

}  // namespace bergman
