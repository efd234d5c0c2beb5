#pragma once

#include <algorithm>
#include <cmath>

#include "tdirac/sampling.hpp"
#include "tdirac/spectral.hpp"

namespace testutil {

inline double max_abs_diff(const tdirac::SpinorField& a, const tdirac::SpinorField& b) {
  double m = 0.0;
  const auto x = a.coeffs();
  const auto y = b.coeffs();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

inline double max_abs(const tdirac::SpinorField& a) {
  double m = 0.0;
  for (const auto& z : a.coeffs()) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const tdirac::CMatrix& a, const tdirac::CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline bool bit_equal(const tdirac::SpinorField& a, const tdirac::SpinorField& b) {
  const auto x = a.coeffs();
  const auto y = b.coeffs();
  if (x.size() != y.size()) return false;
  return std::equal(x.begin(), x.end(), y.begin());
}

}  // namespace testutil
