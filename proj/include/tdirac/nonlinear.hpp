#pragma once

// Holomorphic power-series nonlinearities F(psi) = sum_p c_p psi^p with
// psi^p = psi_1^{p_1} ... psi_{d0}^{p_{d0}}, finitely supported.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdirac/clifford.hpp"
#include "tdirac/spectral.hpp"

namespace tdirac::nl {

using MultiIndex = std::vector<int>;

int degree(const MultiIndex& p);

/// How the represented coefficients continue past max_degree.
enum class Tail {
  none,       // the series is exactly the represented polynomial
  geometric,  // |c_p| keeps growing like rate^{|p|}
};

class PowerSeriesNonlinearity {
 public:
  PowerSeriesNonlinearity() = default;
  explicit PowerSeriesNonlinearity(int d0);

  /// Accepts a bare list [{p, c}, ...] (d0 taken from the entries) or an
  /// object {d0, terms, tail, tail_rate, vanishes_at_zero}. Complex entries
  /// are [re, im] pairs or plain numbers.
  static PowerSeriesNonlinearity from_json(const nlohmann::json& j);
  static PowerSeriesNonlinearity load(const std::string& path);
  nlohmann::json to_json() const;

  /// Adds c to the coefficient of psi^p. Throws on wrong lengths, negative
  /// exponents, or a constant term when vanishes_at_zero is set.
  void add_term(const MultiIndex& p, std::vector<Complex> c);

  int d0() const { return d0_; }
  int max_degree() const;
  bool empty() const { return terms_.empty(); }
  const std::map<MultiIndex, std::vector<Complex>>& terms() const { return terms_; }

  bool vanishes_at_zero() const { return vanishes_at_zero_; }
  void set_vanishes_at_zero(bool v);
  Tail tail() const { return tail_; }
  double tail_rate() const { return tail_rate_; }
  void set_tail(Tail t, double rate = 0.0);

  /// Every coefficient multiplied by s.
  PowerSeriesNonlinearity scaled(Complex s) const;

  /// F(psi); out has length d0.
  void evaluate(std::span<const Complex> psi, std::span<Complex> out) const;
  std::vector<Complex> evaluate(std::span<const Complex> psi) const;
  /// (dF_a / dpsi_b)(psi), d0 x d0.
  CMatrix jacobian(std::span<const Complex> psi) const;
  /// J(psi) w without forming J.
  void jacobian_apply(std::span<const Complex> psi, std::span<const Complex> w,
                      std::span<Complex> out) const;

 private:
  void fill_powers(std::span<const Complex> psi, std::vector<Complex>& table) const;

  int d0_ = 0;
  int max_exponent_ = 0;
  std::map<MultiIndex, std::vector<Complex>> terms_;
  bool vanishes_at_zero_ = true;
  Tail tail_ = Tail::none;
  double tail_rate_ = 0.0;
};

/// Smallest grid that evaluates a degree-q product of lattice fields without
/// aliasing back onto the lattice: (q + 1) N + 1.
int dealiased_grid(int lattice_radius, int degree);

/// Pointwise F on a physical grid.
SpatialGrid evaluate_grid(const PowerSeriesNonlinearity& F, const SpatialGrid& u,
                          Exec exec = Exec::parallel);
/// Pointwise J(u(x)) w(x).
SpatialGrid jacobian_apply_grid(const PowerSeriesNonlinearity& F, const SpatialGrid& u,
                                const SpatialGrid& w, Exec exec = Exec::parallel);

/// Lattice truncation of F(f). grid_m = 0 picks dealiased_grid; a smaller
/// explicit grid throws AliasingError.
SpinorField evaluate_F_field(const PowerSeriesNonlinearity& F, const SpinorField& f,
                             int grid_m = 0, Exec exec = Exec::parallel);

struct Split {
  MultiIndex m;
  MultiIndex n;
  std::uint64_t coefficient = 0;
};

/// All (m, n) with m + n = p and E_mn = prod_k binom(p_k, m_k); m ascends
/// lexicographically.
std::vector<Split> multinomial_split(const MultiIndex& p);

/// (p - e_i)^+ with 1-based i. Throws std::out_of_range for a bad i.
MultiIndex reduced_index(const MultiIndex& p, int i);

/// F(u1) - F(u2) evaluated from the integrated-Jacobian expansion over
/// i, (m_i, n_i) with weights c_p p_i c_{m_i n_i} / (|m_i| + 1), in the
/// variables u1 - u2 and u2.
std::vector<Complex> difference_expansion(const PowerSeriesNonlinearity& F,
                                          std::span<const Complex> u1,
                                          std::span<const Complex> u2);

/// Magnitudes of a coefficient vector used by both cases: |c|, |gamma^0 c|
/// and sum_k |gamma^k c|.
struct CoefficientWeights {
  double plain = 0.0;
  double gamma0 = 0.0;
  double spatial = 0.0;
};
CoefficientWeights coefficient_weights(const GammaSet& g, std::span<const Complex> c);

struct ConditionAOptions {
  /// Constant of the Bernstein-type bound entering the threshold.
  double bernstein_constant = 1.0;
  /// Lower bound on the tail growth rate supplied by the user; only used
  /// when the series carries a geometric tail.
  double tail_rate = 0.0;
};

struct DegreeQuantities {
  int r = 0;
  double B = 0.0;
  double A = 0.0;
  double root = 0.0;  // max{B_r, A_r}^{1/r}
};

struct ConditionAReport {
  int d = 0;
  int d0 = 0;
  std::vector<DegreeQuantities> degrees;  // r = 1 .. max represented degree (+1 for A)
  std::string tail;
  double max_root = 0.0;
  double proxy_limsup = 0.0;
  double bernstein_constant = 0.0;
  double threshold = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// C^{-d/2-1/4} 2^{-d/2} / 3
double condition_a_threshold(int d, double bernstein_constant);

/// B_r and A_r for every degree r carried by the series. B_r collects the
/// splits m + n = p with |p| = r; A_r the splits of (p - e_i)^+ with
/// |(p - e_i)^+| = r. The literal neighbour sums contribute
/// 3^{|m|+|n|} and 3^{r+1} identical terms. Throws on an empty series.
ConditionAReport condition_a_quantities(const PowerSeriesNonlinearity& F,
                                        const GammaSet& g,
                                        const ConditionAOptions& opt = {});

/// Partial sums S_K = sum_{|i| <= K} C^{-2^{-|i|} |p| / (|p| + 1)} for
/// K = 0..k_max. The terms tend to 1, so S_K grows without bound.
std::vector<double> r_partial_sums(double bernstein_constant, int p_degree, int k_max);

}  // namespace tdirac::nl
