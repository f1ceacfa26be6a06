#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace testing_support {

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

inline double rel_err(double got, double want) { return rel_err(std::complex<double>(got), std::complex<double>(want)); }

}  // namespace testing_support
