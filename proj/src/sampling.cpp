#include "tdirac/sampling.hpp"

#include <cmath>

namespace tdirac {
namespace {

SpinorField weighted(const FrequencyLattice& lattice, int d0, Rng& rng,
                     const auto& weight) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpinorField f(lattice, d0);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double w = weight(i);
    for (int k = 0; k < d0; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      f.at(i, k) = w * Complex(re, im);
    }
  }
  return f;
}

}  // namespace

SpinorField random_field(const FrequencyLattice& lattice, int d0, Rng& rng) {
  return weighted(lattice, d0, rng, [](std::size_t) { return 1.0; });
}

SpinorField random_smooth_field(const FrequencyLattice& lattice, int d0, Rng& rng,
                                double width) {
  const double inv = 1.0 / (2.0 * width * width);
  return weighted(lattice, d0, rng, [&](std::size_t i) {
    return std::exp(-lattice.norm_squared(i) * inv);
  });
}

SpinorField random_power_law_field(const FrequencyLattice& lattice, int d0, Rng& rng,
                                   double decay) {
  return weighted(lattice, d0, rng, [&](std::size_t i) {
    return std::pow(lattice.bracket(i), -decay);
  });
}

}  // namespace tdirac
