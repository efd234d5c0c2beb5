#pragma once

// Frequency localization: dyadic annuli P_j, widened annuli, modulation
// cutoffs Q_j^{+-}, angular caps P_kappa and lattice cubes Gamma_{k,n}.

#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tdirac/spectral.hpp"

namespace tdirac::lp {

/// The cutoff family. rho is the exp-based smooth step: 1 on [-1,1], 0 off
/// [-2,2], C^infinity in between.
struct CutoffProfile {
  static double rho(double s);
  /// rho(s/2) - rho(s), supported in 1 <= |s| <= 4, equal to 1 only at |s| = 2.
  static double phi(double s);
  /// phi(2^{-j} s)
  static double phi_j(int j, double s);
  /// Three-annulus cover phi_{j-2} + phi_{j-1} + phi_j. Identically 1 on the
  /// support of phi_{j-1}, so P_j tilde P_{j+1} = P_j.
  static double phi_tilde(int j, double s);
  /// rho(2^{-j-1}|mu|) - rho(2^{-j}|mu|); equals phi_j(|mu|).
  static double modulation(int j, double mu) { return phi_j(j, std::abs(mu)); }
};

SpinorField apply_Pj(const SpinorField& f, int j, Exec exec = Exec::parallel);
SpinorField apply_Pj_tilde(const SpinorField& f, int j, Exec exec = Exec::parallel);

/// Low-frequency remainder rho(|D|) f = f - sum_{j >= 0} P_j f.
SpinorField apply_low(const SpinorField& f, Exec exec = Exec::parallel);

struct ModulationOptions {
  /// Multiply the window by a periodic Hann taper (normalized to unit mean
  /// square) before the time transform. Reduces leakage for non-periodic input.
  bool hann_taper = false;
  double mass = 1.0;
};

/// Time-frequency grid representation of a trajectory. The window is treated
/// as periodic: tau_n = 2 pi n / (M dt), n in [-M/2, M/2).
class ModulationTransform {
 public:
  ModulationTransform(const Trajectory& tr, const ModulationOptions& opt = {});

  /// Q_j^{sign} applied to the (optionally tapered) trajectory.
  Trajectory filtered(int j, Sign sign) const;
  /// Applies an arbitrary symbol s(tau, lattice index) and transforms back.
  Trajectory filtered(const std::function<double(double, std::size_t)>& symbol) const;

  double tau(std::size_t bin) const;
  std::size_t bins() const { return frames_; }
  /// Scales j for which Q_j can see anything on this grid.
  int min_scale() const;
  int max_scale() const;

 private:
  FrequencyLattice lattice_;
  int d0_;
  std::size_t frames_;
  double t0_, dt_, mass_;
  std::vector<Complex> spectrum_;  // [series][bin], series = index * d0 + k
};

/// Throws std::invalid_argument for fewer than two frames.
Trajectory apply_Qj_pm(const Trajectory& tr, int j, Sign sign,
                       const ModulationOptions& opt = {});

/// Angular partition of unity on R^d \ {0}.
struct CapCover {
  int d = 0;
  int l = 0;
  std::vector<std::vector<double>> centers;  // unit vectors, closed under negation
  double support_radius = 0.0;               // angular radius of each bump
  int overlap_bound = 4;

  std::size_t size() const { return centers.size(); }
  /// All cap weights at direction xi (need not be normalized); zeros at xi = 0.
  std::vector<double> weights(std::span<const double> xi) const;
  double weight(std::size_t kappa, std::span<const double> xi) const;
};

/// d in {1,2,3}; throws std::invalid_argument otherwise.
CapCover build_cap_cover(int d, int l);

/// Throws std::out_of_range for an invalid cap id.
SpinorField apply_Pkappa(const SpinorField& f, const CapCover& cover,
                         std::size_t kappa);

/// Nonzero normalized cap weights of every lattice point, grouped by cap.
/// One pass over the lattice; use it when applying many caps.
struct CapSymbols {
  FrequencyLattice lattice;
  std::vector<std::vector<std::pair<std::size_t, double>>> by_cap;  // (index, weight)
};
CapSymbols cap_symbols(const FrequencyLattice& lattice, const CapCover& cover);
SpinorField apply_Pkappa(const SpinorField& f, const CapSymbols& symbols, std::size_t kappa);

/// The even bump gamma^(0) supported on [-1,1].
double cube_bump(double t);
/// gamma^(0) normalized so its integer translates sum to one.
double cube_bump_normalized(double t);

/// Cubes of half-side 2^k centred on 2^k Z^d. Centres are all multiples of
/// 2^k whose open cube meets the lattice, so the pieces sum to the identity
/// on the whole lattice.
struct CubeCover {
  int k = 0;
  FrequencyLattice lattice;
  std::vector<std::vector<int>> centers;

  double weight(std::span<const int> center, std::span<const int> xi) const;
  bool is_center(std::span<const int> n) const;
};

CubeCover build_cube_cover(const FrequencyLattice& lattice, int k);

/// Throws std::invalid_argument when n is not a centre of the cover.
SpinorField apply_cube(const SpinorField& f, const CubeCover& cover,
                       std::span<const int> n);

/// CSV dump of phi_j and tilde phi_j for j in [j_min, j_max] on every
/// lattice point: index, xi_1..xi_d, abs_xi, phi_<j>..., phi_tilde_<j>...
void write_symbol_csv(std::ostream& out, const FrequencyLattice& lattice,
                      int j_min, int j_max);

}  // namespace tdirac::lp
