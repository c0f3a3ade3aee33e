#pragma once

#include <vector>

namespace dfc {

/// Strength coefficients eps_1..eps_{N-1} of a delayed feedback control.
/// Empty means N = 1, i.e. no control.
struct GainVector {
  std::vector<double> eps;
  std::size_t order() const { return eps.size() + 1; }
};

/// Coefficients a_1..a_N of the closed-loop characteristic polynomial.
struct CoeffVector {
  std::vector<double> a;
  std::size_t order() const { return a.size(); }
};

/// Convolution weights alpha_1..alpha_N of past map values; sum is 1.
struct AlphaVector {
  std::vector<double> alpha;
  std::size_t order() const { return alpha.size(); }
};

}  // namespace dfc
