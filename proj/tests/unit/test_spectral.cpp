#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "tdirac/spectral.hpp"
#include "test_util.hpp"

using namespace tdirac;

TEST_CASE("lattice enumeration and negation") {
  for (int d = 1; d <= 3; ++d) {
    const FrequencyLattice lat(d, 4);
    std::size_t expect = 1;
    for (int a = 0; a < d; ++a) expect *= 9;
    CHECK(lat.size() == expect);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const auto xi = lat.point(i);
      CHECK(lat.index_of(xi) == i);
      const auto neg = lat.point(lat.negated(i));
      for (int a = 0; a < d; ++a) CHECK(neg[a] == -xi[a]);
    }
    std::vector<int> outside(d, 5);
    CHECK_FALSE(lat.contains(outside));
    CHECK_THROWS_AS(lat.index_of(outside), std::out_of_range);
  }
  const FrequencyLattice lat(2, 1);
  CHECK(lat.point(0)[0] == -1);
  CHECK(lat.point(0)[1] == -1);
  CHECK(lat.point(1)[1] == 0);  // last axis fastest
}

TEST_CASE("FFT synthesis matches direct summation") {
  Rng rng(1);
  for (int d = 1; d <= 3; ++d) {
    const FrequencyLattice lat(d, 3);
    const SpinorField f = random_field(lat, 2, rng);
    const int m = 8;
    const SpatialGrid fast = inverse_fourier(f, m);
    const SpatialGrid slow = oracle::naive_synthesis(f, m);
    double err = 0.0;
    for (std::size_t k = 0; k < fast.values.size(); ++k) {
      err = std::max(err, std::abs(fast.values[k] - slow.values[k]));
    }
    CHECK(err <= 1e-12);
    const SpinorField back = forward_fourier(fast, lat);
    CHECK(testutil::max_abs_diff(back, f) <= 1e-13);
    CHECK(testutil::max_abs_diff(oracle::naive_analysis(slow, lat), f) <= 1e-12);
  }
}

TEST_CASE("Parseval in the normalized measure") {
  Rng rng(9);
  const FrequencyLattice lat(2, 5);
  const SpinorField f = random_field(lat, 4, rng);
  const SpatialGrid g = inverse_fourier(f, 16);
  double mean = 0.0;
  for (const auto& z : g.values) mean += std::norm(z);
  mean /= static_cast<double>(g.points());
  CHECK(mean == doctest::Approx(f.l2_norm_squared()).epsilon(1e-13));
}

TEST_CASE("plane waves and aliasing guard") {
  const FrequencyLattice lat(1, 4);
  std::vector<int> xi{3};
  std::vector<Complex> c{2.0, Complex(0, 1)};
  const SpinorField f = SpinorField::plane_wave(lat, 2, xi, c);
  const SpatialGrid g = inverse_fourier(f, 9);
  for (std::size_t p = 0; p < g.points(); ++p) {
    const double x = g.coordinate(p)[0];
    CHECK(std::abs(g.at(p, 0) - 2.0 * std::polar(1.0, 3 * x)) <= 1e-13);
  }
  CHECK_THROWS_AS(inverse_fourier(f, 8), AliasingError);
  CHECK_THROWS_AS(forward_fourier(SpatialGrid(1, 8, 2), lat), AliasingError);
}

TEST_CASE("projector identities over random lattice points") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> coord(-30, 30);
  for (int d = 1; d <= 3; ++d) {
    const GammaSet g = build_gamma(d);
    const auto I = CMatrix::Identity(g.d0, g.d0);
    for (int t = 0; t < 120; ++t) {
      std::vector<int> xi(d);
      for (auto& x : xi) x = coord(rng);
      const CMatrix P = projector_symbol(g, xi, Sign::plus);
      const CMatrix M = projector_symbol(g, xi, Sign::minus);
      CHECK(testutil::max_abs_diff(P * P, P) <= 1e-12);
      CHECK(testutil::max_abs_diff(M * M, M) <= 1e-12);
      CHECK(testutil::max_abs_diff(P + M, I) <= 1e-12);
      CHECK((P * M).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(testutil::max_abs_diff(P, P.adjoint()) <= 1e-12);
      // Pi_+ - Pi_- = H / <xi>
      const CMatrix H = g.dirac_symbol(xi);
      double n2 = 1.0;
      for (int x : xi) n2 += x * x;
      CHECK(testutil::max_abs_diff((P - M) * std::sqrt(n2), H) <= 1e-11 * std::sqrt(n2));
    }
  }
}

TEST_CASE("pointwise projection equals the materialized multiplier") {
  Rng rng(6);
  const GammaSet g = build_gamma(2);
  const FrequencyLattice lat(2, 6);
  const SpinorField f = random_field(lat, g.d0, rng);
  for (Sign s : {Sign::plus, Sign::minus}) {
    const SpinorField a = project_pm(g, f, s, 1.3);
    const SpinorField b = apply_multiplier(projector_multiplier(g, lat, s, 1.3), f);
    CHECK(testutil::max_abs_diff(a, b) <= 1e-13);
  }
}

TEST_CASE("multipliers compose and derivatives carry xi") {
  Rng rng(8);
  const FrequencyLattice lat(2, 4);
  const SpinorField f = random_field(lat, 2, rng);
  const auto a = Multiplier::scalar(lat, [&](std::size_t i) { return Complex(lat.norm(i), 1.0); });
  const auto b = Multiplier::scalar(lat, [&](std::size_t i) { return Complex(0.0, lat.point(i)[0]); });
  const SpinorField two = apply_multiplier(a, apply_multiplier(b, f));
  const SpinorField one = apply_multiplier(a.compose(b), f);
  CHECK(testutil::max_abs_diff(one, two) <= 1e-13);
  const SpinorField d1 = partial_derivative(f, 1);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    CHECK(std::abs(d1.at(i, 0) - static_cast<double>(lat.point(i)[0]) * f.at(i, 0)) <= 1e-14);
  }
  CHECK_THROWS(partial_derivative(f, 3));
}

TEST_CASE("operands on different lattices are rejected") {
  const SpinorField a(FrequencyLattice(1, 2), 2);
  const SpinorField b(FrequencyLattice(1, 3), 2);
  const SpinorField c(FrequencyLattice(1, 2), 4);
  CHECK_THROWS_AS(a + b, LatticeMismatch);
  CHECK_THROWS_AS(a - c, LatticeMismatch);
  CHECK_THROWS_AS(l2_distance(a, b), LatticeMismatch);
}

TEST_CASE("trajectory validation") {
  Trajectory tr;
  CHECK_THROWS(tr.validate());
  tr.frames.emplace_back(FrequencyLattice(1, 2), 2);
  tr.dt = 0.0;
  CHECK_THROWS(tr.validate());
  tr.dt = 0.1;
  CHECK_NOTHROW(tr.validate());
  tr.frames.emplace_back(FrequencyLattice(1, 3), 2);
  CHECK_THROWS(tr.validate());
}
