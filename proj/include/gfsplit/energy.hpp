#pragma once

#include "gfsplit/errors.hpp"

namespace gfsplit {

// Extended-real energy value. +infinity is an explicit sentinel variant;
// it never enters floating-point arithmetic.
class Energy {
 public:
  Energy() = default;
  Energy(double v) : value_(v) {}  // implicit: finite values
  static Energy infinity() {
    Energy e;
    e.finite_ = false;
    return e;
  }

  bool is_finite() const { return finite_; }

  double value() const {
    if (!finite_) throw InvalidInput("Energy::value called on +infinity");
    return value_;
  }

  friend Energy operator+(Energy a, Energy b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return Energy(a.value_ + b.value_);
  }

  friend bool operator==(Energy a, Energy b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }

  // extended-real order: everything <= +infinity
  friend bool operator<=(Energy a, Energy b) {
    if (!b.finite_) return true;
    if (!a.finite_) return false;
    return a.value_ <= b.value_;
  }

 private:
  double value_ = 0.0;
  bool finite_ = true;
};

}  // namespace gfsplit
