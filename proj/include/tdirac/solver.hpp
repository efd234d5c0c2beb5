#pragma once

// Cauchy solver for the nonlinear Dirac system
//   d_t psi = -i (alpha . D + m beta) psi + i beta F(psi)
// on the truncated lattice (Galerkin: F(psi) is truncated back to the
// lattice after dealiased evaluation).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdirac/clifford.hpp"
#include "tdirac/nonlinear.hpp"
#include "tdirac/spectral.hpp"

namespace tdirac::solver {

struct SplitState {
  SpinorField plus;
  SpinorField minus;
  GammaSet g;
  double mass = 1.0;

  SpinorField combined() const { return plus + minus; }
};

/// psi_+- = Pi_+-(D) psi0.
SplitState split(const SpinorField& psi0, const GammaSet& g, double mass = 1.0);

/// u_hat(xi) -> e^{-+ i t <xi>_m} u_hat(xi) for sign = plus / minus.
SpinorField half_wave(const SpinorField& f, double t, Sign sign, double mass = 1.0,
                      Exec exec = Exec::parallel);

struct SolveConfig {
  int d = 1;
  int radius = 32;
  double dt = 1.0 / 256.0;
  double horizon = 1.0;
  double tolerance = 1e-13;
  int max_iterations = 50;
  double epsilon = 1e-3;
  /// Sobolev index of the data size; negative selects d/2.
  double sobolev_s = -1.0;
  double mass = 1.0;
  /// Frames per Picard window (including the shared first frame); 0 solves
  /// the whole horizon as one window.
  int window = 0;
  /// Evaluate the S^{+-,d/2} surrogates of the converged branches.
  bool monitor_norms = false;
  std::string nonlinearity;

  double sobolev_index() const { return sobolev_s < 0.0 ? 0.5 * d : sobolev_s; }
  /// Number of frames t_k = k dt covering [0, horizon].
  std::size_t frames() const;
  /// Throws std::invalid_argument on non-positive dt / horizon / tolerance or
  /// a horizon that is not a whole number of steps.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Random smooth field (Gaussian envelope of width 2 in frequency) scaled to
/// ||psi0||_{H^s} = epsilon.
SpinorField standard_initial_data(const FrequencyLattice& lattice, int d0,
                                  double epsilon, double s, std::uint64_t seed);

/// i beta F(psi) truncated to the lattice, split into its +- projections at
/// every frame: returns the cumulative trapezoid integrals
///   I_+-(t_k) = int_0^{t_k} e^{-+ i (t_k - s) <D>} Pi_+-(D) beta F(psi(s)) ds.
struct DuhamelIntegrals {
  Trajectory plus;
  Trajectory minus;
};
DuhamelIntegrals duhamel_integrals(const Trajectory& psi,
                                   const nl::PowerSeriesNonlinearity& F,
                                   const GammaSet& g, double mass = 1.0);

/// Both branch integrals at frame time t. Throws std::out_of_range when t
/// is not a frame time of the window.
std::pair<SpinorField, SpinorField> duhamel_rhs(const Trajectory& psi,
                                                const nl::PowerSeriesNonlinearity& F,
                                                const GammaSet& g, double t,
                                                double mass = 1.0);

/// One application of the fixed-point map to a trajectory starting at
/// split data: psi_+-(t) = e^{-+ it<D>} psi_+-(0) + i I_+-(t).
struct BranchPair {
  Trajectory plus;
  Trajectory minus;
};
BranchPair apply_T(const SplitState& data, const Trajectory& psi,
                   const nl::PowerSeriesNonlinearity& F);

enum class PicardStatus { converged, non_contraction, max_iterations };
const char* status_name(PicardStatus s);

struct IterationRecord {
  int window = 0;
  int iteration = 0;
  double distance = 0.0;  // sup_k ||psi^{n+1}_k - psi^n_k|| / sup_k ||psi^{n+1}_k||
  double ratio = 0.0;     // distance / previous distance, 0 on the first iteration
};

struct PicardDiagnostics {
  std::vector<IterationRecord> iterations;
  int windows = 0;
  int total_iterations = 0;
  /// Largest ratio over iterations >= 2 of every window.
  double max_ratio_after_first = 0.0;
  /// Relative sup-frame distance between the result and T(result).
  double duhamel_residual = 0.0;
  /// Largest pointwise projector leakage ||Pi_-+ psi_+-|| over frames.
  double branch_leakage = 0.0;
  std::optional<double> surrogate_plus;
  std::optional<double> surrogate_minus;

  nlohmann::json to_json() const;
};

struct PicardResult {
  PicardStatus status = PicardStatus::converged;
  Trajectory trajectory;
  Trajectory plus;
  Trajectory minus;
  PicardDiagnostics diagnostics;
};

/// Iterates the fixed-point map on the frame grid, window by window, from
/// the free evolution. Non-convergence is reported through status.
PicardResult picard_solve(const SolveConfig& cfg, const SpinorField& psi0,
                          const nl::PowerSeriesNonlinearity& F, const GammaSet& g);

struct KGState {
  SpinorField u;
  SpinorField v;
};

/// (psi0, d_t psi(0)) with d_t psi(0) = -i(alpha.xi + m beta) psi0 + i beta F(psi0).
KGState kg_reduce(const SpinorField& psi0, const nl::PowerSeriesNonlinearity& F,
                  const GammaSet& g, double mass = 1.0);

/// Right-hand side of d_t^2 psi - Delta psi + m^2 psi = G(psi, d psi):
///   G = mF + i gamma^j J d_j psi - i gamma^0 J gamma^0 gamma^j d_j psi
///       + m gamma^0 J gamma^0 psi - gamma^0 J gamma^0 F,
/// J the Jacobian of F at psi, every product formed on a dealiased grid and
/// truncated to the lattice. F in the last term is the truncated F.
SpinorField kg_source(const SpinorField& psi, const nl::PowerSeriesNonlinearity& F,
                      const GammaSet& g, double mass = 1.0);

/// Gautschi scheme (summed two-step form) with filter sinc^2(h w / 2), w = <xi>_m; exact
/// for G = 0. Throws when dt * max w > pi.
Trajectory kg_evolve(const KGState& state, const nl::PowerSeriesNonlinearity& F,
                     const GammaSet& g, double mass, double dt, double horizon);

/// V(t_k) = int |i gamma^mu d_mu psi - m psi + F(psi)|^2 with d_t by second
/// order differences (central inside, one-sided at the ends). Needs >= 3 frames.
std::vector<double> dirac_defect(const Trajectory& tr, const nl::PowerSeriesNonlinearity& F,
                                 const GammaSet& g, double mass = 1.0);

/// max_k V(t_k) / int |psi(t_k)|^2
double relative_defect(const Trajectory& tr, const std::vector<double>& defect);

struct HsMonitor {
  std::vector<double> series;
  double initial = 0.0;
  double sup = 0.0;
  double ratio = 0.0;
  double bound = 3.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

HsMonitor hs_monitor(const Trajectory& tr, double s, double bound = 3.0);

/// sup_k ||a_k - b_k|| / sup_k ||b_k||; frames and lattices must match.
double relative_sup_distance(const Trajectory& a, const Trajectory& b);

}  // namespace tdirac::solver
