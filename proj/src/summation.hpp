#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace charsum {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct SumValue {
  std::complex<double> value{0.0, 0.0};
  std::uint64_t term_count = 0;
  double abs_term_sum = 0.0;

  double magnitude() const { return std::abs(value); }
};

// Accumulates complex terms together with the audit fields of SumValue.
// Zero terms are skipped so term_count counts nonzero summands.
class SumAccumulator {
 public:
  void add(std::complex<double> term) {
    if (term.real() == 0.0 && term.imag() == 0.0) return;
    re_.add(term.real());
    im_.add(term.imag());
    abs_.add(std::abs(term));
    ++count_;
  }

  void add(double term) { add(std::complex<double>(term, 0.0)); }

  void merge(const SumAccumulator& other) {
    re_.merge(other.re_);
    im_.merge(other.im_);
    abs_.merge(other.abs_);
    count_ += other.count_;
  }

  SumValue result() const {
    return SumValue{{re_.value(), im_.value()}, count_, abs_.value()};
  }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
  CompensatedSum abs_;
  std::uint64_t count_ = 0;
};

}  // namespace charsum
