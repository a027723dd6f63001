#pragma once

#include <cstddef>

namespace smaxwell {

/// Worker count used by line sweeps, pointwise maps and reductions. Results
/// never depend on it: every parallel loop writes disjoint outputs and every
/// reduction combines per-slab partials serially in slab order.
void set_thread_count(int threads);
int thread_count();

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace smaxwell
