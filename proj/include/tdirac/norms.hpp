#pragma once

// Function-space norms on truncated spinor fields and sampled trajectories,
// plus empirical checks of the inequalities the existence theory relies on.
//
// Spatial norms use the normalized measure (2 pi)^{-d} dx, so the L^2 norm
// of a field equals the l^2 norm of its coefficients. Time integrals use the
// trapezoid rule on the frame grid.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tdirac/clifford.hpp"
#include "tdirac/littlewood_paley.hpp"
#include "tdirac/spectral.hpp"

namespace tdirac::norms {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormReport {
  std::string name;
  double value = 0.0;
  /// Per-scale contributions, ascending in j.
  std::vector<std::pair<int, double>> breakdown;
  /// Named sub-blocks (for S_j: energy, modulation, cap_cube).
  std::map<std::string, double> blocks;
  nlohmann::json parameters = nlohmann::json::object();

  nlohmann::json to_json() const;
  void write_breakdown_csv(std::ostream& out) const;
};

struct NormOptions {
  lp::ModulationOptions modulation;
};

/// (sum <xi>^{2s} |u_hat|^2)^{1/2}
double hs_norm(const SpinorField& f, double s);

/// B^s_{2,2}: (||rho(|D|) f||^2 + sum_{j>=0} 2^{2sj} ||P_j f||^2)^{1/2}.
/// Only p = q = 2 is supported; other values throw std::invalid_argument.
double besov_norm(const SpinorField& f, double s, double p = 2.0, double q = 2.0);
NormReport besov_report(const SpinorField& f, double s);

/// ((2 pi)^{-d} \int |u|^q)^{1/q}; exact lattice sum for q = 2, padded-grid
/// quadrature otherwise, max over the grid for q = infinity.
double spatial_lq_norm(const SpinorField& f, double q);

/// L^p_t L^q_x with trapezoid weights in time (max over frames for p = inf).
double mixed_norm(const Trajectory& tr, double p, double q);

/// sum_kappa sum_n ||Gamma_{k',n} P_kappa f||_{L^p_t L^q_x}; d <= 3.
double cap_cube_norm(const Trajectory& tr, int l, int k_prime, double p, double q);

/// l^p over representable j of 2^{b' j} ||Q_j^{sign} f||_{L^2_t L^2_x}.
NormReport xnorm_report(const Trajectory& tr, Sign sign, double b_prime, double p,
                        const NormOptions& opt = {});
double xnorm(const Trajectory& tr, Sign sign, double b_prime, double p,
             const NormOptions& opt = {});

/// ||f||_{S_j^{sign}}: energy block + X^{sign,1/2,inf} block + the cap/cube
/// sup over 0 <= k' <= j, (d+2)j/(2d-2) <= l <= j (empty sup, and d = 1, give 0).
NormReport sj_norm(const Trajectory& tr, int j, Sign sign, double a = 4.0,
                   double b = 4.0, const NormOptions& opt = {});

/// sum_{j>=0} 2^{sigma j} ||P_j f||_{S_{j+1}^{sign}}, P_j applied framewise.
NormReport s_sigma_norm(const Trajectory& tr, double sigma, Sign sign,
                        const NormOptions& opt = {});

/// min{z in Z : z >= 1/q1 - 1/q2} * d + 2d; pass kInf for q = infinity.
int ceil_index(double q1, double q2, int d);

/// ||D^alpha f|| / (2^{|alpha| j} ||f||) for f = P_j f. Throws
/// std::invalid_argument when f has mass outside 2^j < |xi| < 2^{j+2}
/// or vanishes.
double bernstein_ratio(const SpinorField& f, int j, std::span<const int> alpha);

struct BernsteinScan {
  int samples = 0;
  int violations = 0;
  /// max over samples of the ratio, per derivative order 1..max_order
  std::vector<double> max_ratio;
  /// max over samples and orders of ratio^{1/|alpha|}
  double constant = 0.0;
  nlohmann::json to_json() const;
};

BernsteinScan measure_bernstein_constant(int d, int j, int samples,
                                         std::uint64_t seed, int max_order = 3);

struct GagliardoNirenbergReport {
  double theta = 0.0;
  double lq = 0.0;
  double l2 = 0.0;
  double derivative_sum = 0.0;
  double ratio = 0.0;
  bool violated = false;
};

/// ||f||_{L^q} / (||f||^{1-theta} (sum_{|alpha|=k} ||D^alpha f||)^theta + ||f||)
/// with theta = d/(2k) - d/(qk). Throws when theta is outside [0, 1].
GagliardoNirenbergReport gn_check(const SpinorField& f, double q, int k,
                                  double constant = 10.0);

/// Fields of total order k in d variables, lexicographic.
std::vector<std::vector<int>> multi_indices_of_order(int d, int k);
/// D^alpha f, multiplying coefficients by prod xi_a^{alpha_a}.
SpinorField apply_derivative(const SpinorField& f, std::span<const int> alpha);

/// max over the set of S^{sign,sigma}(Pi_sign(D) tr) / S^{sign,sigma}(tr).
/// Zero-norm inputs are skipped.
double projector_norm_probe(const GammaSet& g, std::span<const Trajectory> set,
                            double sigma, Sign sign, const NormOptions& opt = {});

/// Free waves e^{-it<D>} u + e^{it<D>} v with random smooth u, v.
std::vector<Trajectory> standard_probe_set(const GammaSet& g, int radius,
                                           int frames, double dt, int count,
                                           std::uint64_t seed);

}  // namespace tdirac::norms
