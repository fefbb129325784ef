#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace adamcheck {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

inline double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    s += std::abs(x);
  }
  return s;
}

inline double l2_norm(std::span<const double> v) {
  return std::sqrt(dot(v, v));
}

inline double linf_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) {
    s = std::max(s, std::abs(x));
  }
  return s;
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      return false;
    }
  }
  return true;
}

}  // namespace adamcheck
