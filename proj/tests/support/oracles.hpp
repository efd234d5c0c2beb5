#pragma once

// Independent reference computations for the test suites. Nothing here
// calls the FFT wrapper, the power-table evaluator or the solver.

#include <cstdint>
#include <vector>

#include "tdirac/clifford.hpp"
#include "tdirac/nonlinear.hpp"
#include "tdirac/spectral.hpp"

namespace oracle {

using tdirac::Complex;

/// Direct O(M^d * lattice) synthesis of the series on the m^d grid.
tdirac::SpatialGrid naive_synthesis(const tdirac::SpinorField& f, int m);
/// Direct analysis of grid samples onto the lattice.
tdirac::SpinorField naive_analysis(const tdirac::SpatialGrid& g,
                                   const tdirac::FrequencyLattice& lattice);

/// F(psi) as a plain sum of std::pow monomials.
std::vector<Complex> naive_F(const tdirac::nl::PowerSeriesNonlinearity& F,
                             const std::vector<Complex>& psi);

/// Lattice truncation of F(f) through naive synthesis/analysis on a grid of
/// (deg + 1) N + 1 points per axis.
tdirac::SpinorField naive_F_field(const tdirac::nl::PowerSeriesNonlinearity& F,
                                  const tdirac::SpinorField& f);

/// Classical RK4 on d_t psi = -i(alpha.xi + m beta) psi + i beta F(psi),
/// `substeps` steps per frame. Returns frames 0..horizon/dt.
std::vector<tdirac::SpinorField> rk4_dirac(const tdirac::SpinorField& psi0,
                                           const tdirac::nl::PowerSeriesNonlinearity& F,
                                           const tdirac::GammaSet& g, double mass,
                                           double dt, int frames, int substeps);

/// E_mn counted by choosing u1 or u2 for each factor of psi^p.
std::uint64_t counted_split(const tdirac::nl::MultiIndex& m, const tdirac::nl::MultiIndex& n);

struct LiteralCondition {
  std::vector<double> B;  // indexed by r
  std::vector<double> A;
};

/// B_r and A_r by literal enumeration of every neighbour index in
/// {i-1, i, i+1} for a few i, and every (k, l), (r, s) split.
/// Needs integer-valued coefficient magnitudes for exact comparison.
LiteralCondition literal_condition_a(const tdirac::nl::PowerSeriesNonlinearity& F,
                                     const tdirac::GammaSet& g);

}  // namespace oracle
