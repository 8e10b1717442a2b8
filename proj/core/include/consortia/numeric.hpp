#pragma once

#include <cmath>
#include <cstddef>

namespace consortia {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double value) noexcept {
    const double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    ++count_;
  }

  void merge(const CompensatedSum& other) noexcept {
    const std::size_t count = count_ + other.count_;
    add(other.sum_);
    add(other.compensation_);
    count_ = count;
  }

  double value() const noexcept { return sum_ + compensation_; }
  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept {
    return count_ == 0 ? 0.0 : value() / static_cast<double>(count_);
  }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace consortia
