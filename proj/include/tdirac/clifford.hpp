#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "tdirac/types.hpp"

namespace tdirac {

/// Dirac matrices gamma^0..gamma^d for spatial dimension d, together with the
/// Hermitian generators alpha^j = gamma^0 gamma^j and beta = gamma^0.
///
/// The set is stored by its Hermitian generators; `gamma` is derived from
/// them (gamma^0 = beta, gamma^j = beta alpha^j), so modifying `alpha` or
/// `beta` in place leaves `gamma` stale until `from_alpha_beta` is rebuilt.
struct GammaSet {
  int d = 0;
  int d0 = 0;
  std::vector<CMatrix> gamma;
  std::vector<CMatrix> alpha;  // alpha[j - 1] holds alpha^j
  CMatrix beta;

  static GammaSet from_alpha_beta(std::vector<CMatrix> alpha, CMatrix beta);

  /// sum_j alpha^j xi_j + mass * beta
  CMatrix dirac_symbol(std::span<const int> xi, double mass = 1.0) const;

  /// Applies the Dirac symbol to one spinor without forming the matrix.
  void apply_dirac_symbol(std::span<const int> xi, double mass,
                          std::span<const Complex> in,
                          std::span<Complex> out) const;
};

/// 2^floor((d+1)/2)
int spinor_dimension(int d);

inline constexpr int kMaxSpinorDimension = 1024;

/// Recursive tensor-product representation. Throws std::invalid_argument for
/// d < 1 or when the spinor dimension would exceed `max_d0`.
GammaSet build_gamma(int d, int max_d0 = kMaxSpinorDimension);

/// Largest Frobenius-norm violation of the Clifford relations of alpha, beta.
double anticommutator_defect(const GammaSet& g);

/// Largest Frobenius norm of (alpha^j - alpha^j^*) and (beta - beta^*).
double hermiticity_defect(const GammaSet& g);

nlohmann::json gamma_to_json(const GammaSet& g);
GammaSet gamma_from_json(const nlohmann::json& j);

}  // namespace tdirac
