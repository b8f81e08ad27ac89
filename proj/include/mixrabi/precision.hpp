// precision.hpp: working-precision types for the transcendental functions

#pragma once

#include <cmath>
#include <mutex>
#include <type_traits>

#include <boost/multiprecision/mpfr.hpp>

namespace mixrabi {

using Mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                         boost::multiprecision::et_off>;

// The Boost MPFR backend keeps its default precision in a process-wide
// static, so every multiprecision evaluation holds this lock for its whole
// duration and sets the precision it needs.
class MpScope {
 public:
  explicit MpScope(unsigned digits10);
  ~MpScope();
  MpScope(const MpScope&) = delete;
  MpScope& operator=(const MpScope&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_;
};

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x;
  } else {
    return x.template convert_to<double>();
  }
}

/// log10|x|, finite for magnitudes outside the double range; -inf for 0.
template <class Real>
double log10_abs(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return std::log10(std::abs(x));
  } else {
    if (x == 0) return -HUGE_VAL;
    return boost::multiprecision::log10(boost::multiprecision::abs(x)).template convert_to<double>();
  }
}

}  // namespace mixrabi
