#include "doctest.h"

#include "oracles.hpp"
#include "tdirac/norms.hpp"
#include "test_util.hpp"

using namespace tdirac;
using namespace tdirac::norms;

namespace {

Trajectory constant_trajectory(const SpinorField& f, std::size_t frames, double dt) {
  Trajectory tr;
  tr.dt = dt;
  tr.frames.assign(frames, f);
  return tr;
}

}  // namespace

TEST_CASE("H^s norm of a plane wave") {
  const FrequencyLattice lat(2, 5);
  std::vector<int> xi{3, -4};
  std::vector<Complex> c{3.0, Complex(0, 4)};
  const auto f = SpinorField::plane_wave(lat, 2, xi, c);
  CHECK(hs_norm(f, 0.0) == doctest::Approx(5.0));
  CHECK(hs_norm(f, 1.0) == doctest::Approx(5.0 * std::sqrt(26.0)));
}

TEST_CASE("Besov B^s_{2,2} against H^s") {
  Rng rng(4);
  for (int d = 1; d <= 3; ++d) {
    const FrequencyLattice lat(d, d == 3 ? 8 : 24);
    for (int t = 0; t < 10; ++t) {
      const SpinorField f = random_field(lat, 2, rng);
      const double b = besov_norm(f, 0.5 * d);
      const double h = hs_norm(f, 0.5 * d);
      CHECK(b / h >= 0.25);
      CHECK(b / h <= 4.0);
      // At s = 0 the overlapping annuli give L^2 / sqrt2 <= B <= L^2.
      const double b0 = besov_norm(f, 0.0);
      CHECK(b0 <= f.l2_norm() * (1.0 + 1e-12));
      CHECK(b0 >= f.l2_norm() / std::sqrt(2.0) * (1.0 - 1e-12));
    }
  }
  const SpinorField f(FrequencyLattice(1, 3), 2);
  CHECK_THROWS_AS(besov_norm(f, 1.0, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("Besov report breakdown adds up") {
  Rng rng(5);
  const FrequencyLattice lat(1, 40);
  const SpinorField f = random_field(lat, 2, rng);
  const auto rep = besov_report(f, 1.0);
  double sum = 0.0;
  for (const auto& [j, v] : rep.breakdown) sum += v;
  CHECK(std::sqrt(sum) == doctest::Approx(rep.value).epsilon(1e-13));
  CHECK(rep.to_json()["norm"] == "besov_2_2");
}

TEST_CASE("spatial L^q norms") {
  const FrequencyLattice lat(1, 6);
  std::vector<int> xi{5};
  std::vector<Complex> c{1.0, Complex(1.0, 1.0)};
  const auto w = SpinorField::plane_wave(lat, 2, xi, c);
  for (double q : {1.0, 2.0, 3.0, 4.0, kInf}) {
    CHECK(spatial_lq_norm(w, q) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }
  Rng rng(6);
  const SpinorField f = random_field(lat, 2, rng);
  const int m = 4 * lat.radius() + 1;
  const SpatialGrid g = oracle::naive_synthesis(f, m);
  double l4 = 0.0;
  for (std::size_t p = 0; p < g.points(); ++p) {
    l4 += std::pow(std::norm(g.at(p, 0)) + std::norm(g.at(p, 1)), 2.0);
  }
  l4 = std::pow(l4 / g.points(), 0.25);
  CHECK(spatial_lq_norm(f, 4.0) == doctest::Approx(l4).epsilon(1e-12));
  CHECK(spatial_lq_norm(f, 2.0) == doctest::Approx(f.l2_norm()).epsilon(1e-14));
  CHECK_THROWS(spatial_lq_norm(f, 0.5));
}

TEST_CASE("mixed norms use trapezoid weights in time") {
  const FrequencyLattice lat(1, 2);
  std::vector<int> xi{1};
  std::vector<Complex> c{2.0, 0.0};
  const auto tr = constant_trajectory(SpinorField::plane_wave(lat, 2, xi, c), 11, 0.1);
  CHECK(mixed_norm(tr, 2.0, 2.0) == doctest::Approx(2.0 * std::sqrt(1.0)).epsilon(1e-13));
  CHECK(mixed_norm(tr, 1.0, 4.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(mixed_norm(tr, kInf, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("cap/cube norm of a single plane wave") {
  const FrequencyLattice lat(2, 6);
  std::vector<int> xi{4, 0};
  std::vector<Complex> c{3.0, 4.0};
  const auto tr = constant_trajectory(SpinorField::plane_wave(lat, 2, xi, c), 5, 0.25);
  // Cap weights at xi sum to one and so do the cube weights, so the pieces
  // are multiples w of the wave and the sum of |w| |c| T^{1/p} is |c| T^{1/p}
  // when every weight is nonnegative.
  for (int l = 0; l <= 2; ++l) {
    for (int k = 0; k <= 2; ++k) {
      CHECK(cap_cube_norm(tr, l, k, 4.0, 4.0) == doctest::Approx(5.0).epsilon(1e-12));
    }
  }
  Trajectory t3;
  t3.frames.emplace_back(FrequencyLattice(4, 1), 4);
  CHECK_THROWS(cap_cube_norm(t3, 0, 0, 2.0, 2.0));
}

TEST_CASE("S_j and S^sigma surrogates") {
  const GammaSet g = build_gamma(2);
  const auto set = standard_probe_set(g, 6, 16, 0.1, 2, 1);
  for (const auto& tr : set) {
    const auto rep = sj_norm(tr, 1, Sign::plus);
    CHECK(rep.blocks.count("energy") == 1);
    CHECK(rep.blocks.at("energy") == doctest::Approx(mixed_norm(tr, kInf, 2.0)));
    CHECK(rep.value >= rep.blocks.at("energy"));
    const auto s = s_sigma_norm(tr, 1.0, Sign::plus);
    CHECK(s.value > 0.0);
    CHECK(!s.breakdown.empty());
  }
  Trajectory zero;
  zero.dt = 0.1;
  zero.frames.assign(4, SpinorField(FrequencyLattice(2, 4), 2));
  CHECK(s_sigma_norm(zero, 1.0, Sign::minus).value == 0.0);
}

TEST_CASE("X norm is monotone in b'") {
  const GammaSet g = build_gamma(1);
  const auto set = standard_probe_set(g, 8, 32, 0.05, 1, 3);
  const double a = xnorm(set[0], Sign::plus, 0.0, 2.0);
  const double b = xnorm(set[0], Sign::plus, 0.5, 2.0);
  CHECK(a > 0.0);
  CHECK(std::isfinite(b));
}

TEST_CASE("ceil index") {
  CHECK(ceil_index(2.0, 4.0, 3) == 9);    // ceil(1/4) = 1
  CHECK(ceil_index(4.0, 2.0, 3) == 6);    // ceil(-1/4) = 0
  CHECK(ceil_index(2.0, 2.0, 2) == 4);
  CHECK(ceil_index(1.0, kInf, 1) == 3);
  CHECK_THROWS(ceil_index(0.0, 1.0, 1));
}

TEST_CASE("multi-indices of fixed order") {
  CHECK(multi_indices_of_order(3, 2).size() == 6);
  CHECK(multi_indices_of_order(2, 3).size() == 4);
  for (const auto& a : multi_indices_of_order(3, 3)) {
    CHECK(a[0] + a[1] + a[2] == 3);
  }
}

TEST_CASE("Bernstein ratio on localized fields") {
  Rng rng(10);
  const int j = 2;
  const FrequencyLattice lat(2, 1 << (j + 2));
  for (int t = 0; t < 20; ++t) {
    const SpinorField f = lp::apply_Pj(random_field(lat, 2, rng), j);
    for (int k = 1; k <= 3; ++k) {
      for (const auto& alpha : multi_indices_of_order(2, k)) {
        CHECK(bernstein_ratio(f, j, alpha) <= std::pow(4.0, k));
      }
    }
  }
  const SpinorField wide = random_field(lat, 2, rng);
  std::vector<int> alpha{1, 0};
  CHECK_THROWS_AS(bernstein_ratio(wide, j, alpha), std::invalid_argument);
  CHECK_THROWS_AS(bernstein_ratio(SpinorField(lat, 2), j, alpha), std::invalid_argument);
}

TEST_CASE("measured Bernstein constant is stable across seeds") {
  const auto a = measure_bernstein_constant(2, 2, 40, 1);
  const auto b = measure_bernstein_constant(2, 2, 40, 2);
  CHECK(a.violations == 0);
  CHECK(b.violations == 0);
  CHECK(a.constant > 1.0);
  CHECK(std::abs(a.constant - b.constant) <= 0.05 * a.constant);
  CHECK(a.to_json()["samples"] == 40);
}

TEST_CASE("Gagliardo-Nirenberg probe") {
  Rng rng(12);
  const FrequencyLattice lat(2, 10);
  for (int t = 0; t < 5; ++t) {
    const SpinorField f = random_smooth_field(lat, 2, rng, 3.0);
    const auto r = gn_check(f, 4.0, 1);
    CHECK(r.theta == doctest::Approx(0.5));
    CHECK_FALSE(r.violated);
    CHECK(r.ratio > 0.0);
  }
  const SpinorField f(lat, 2);
  CHECK_THROWS(gn_check(f, kInf, 0));
  CHECK_THROWS(gn_check(SpinorField(FrequencyLattice(3, 2), 4), kInf, 1));  // theta = 3/2
}

TEST_CASE("projector probe on the standard set") {
  const GammaSet g = build_gamma(2);
  const auto set = standard_probe_set(g, 6, 16, 0.1, 3, 7);
  const double r = projector_norm_probe(g, set, 1.0, Sign::plus);
  CHECK(r > 0.0);
  CHECK(r <= 10.0);
}
