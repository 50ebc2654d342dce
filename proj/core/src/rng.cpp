#include "tampa/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tampa {

double Rng::normal(double mean, double stddev) {
  // Box-Muller, cosine branch only. One pair of uniforms per variate keeps
  // the draw count per call fixed.
  double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  double u2 = uniform01();
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

int Rng::uniform_below(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::uniform_below: n must be positive");
  // Rejection-free scaling; bias is ~n/2^53, irrelevant for the small n used here.
  int i = static_cast<int>(uniform01() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

}  // namespace tampa
