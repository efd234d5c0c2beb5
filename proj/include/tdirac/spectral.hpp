#pragma once

// Truncated Fourier series on the flat torus T^d = (R / 2 pi Z)^d.
//
// Normalization: forward coefficients carry the (2 pi)^{-d} factor
//   u_hat(xi) = (2 pi)^{-d} \int e^{-i x.xi} u(x) dx,
// and the inverse is the plain sum u(x) = sum_xi e^{i x.xi} u_hat(xi), so
// (2 pi)^{-d} \int |u|^2 = sum_xi |u_hat(xi)|^2.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "tdirac/clifford.hpp"
#include "tdirac/types.hpp"

namespace tdirac {

/// {xi in Z^d : |xi_a| <= radius for every axis}, enumerated
/// lexicographically in (xi_1, ..., xi_d) with xi_1 most significant.
/// With this order the index of -xi is size() - 1 - index(xi).
class FrequencyLattice {
 public:
  FrequencyLattice() = default;
  FrequencyLattice(int d, int radius);

  int dim() const { return d_; }
  int radius() const { return radius_; }
  int side() const { return 2 * radius_ + 1; }
  std::size_t size() const { return size_; }

  std::span<const int> point(std::size_t index) const {
    return {tables_->coords.data() + index * static_cast<std::size_t>(d_),
            static_cast<std::size_t>(d_)};
  }
  double norm_squared(std::size_t index) const { return tables_->norm2[index]; }
  double norm(std::size_t index) const;
  /// (mass^2 + |xi|^2)^{1/2}
  double bracket(std::size_t index, double mass = 1.0) const;

  bool contains(std::span<const int> xi) const;
  /// Throws std::out_of_range when xi is not on the lattice.
  std::size_t index_of(std::span<const int> xi) const;
  std::size_t negated(std::size_t index) const { return size_ - 1 - index; }

  friend bool operator==(const FrequencyLattice& a, const FrequencyLattice& b) {
    return a.d_ == b.d_ && a.radius_ == b.radius_;
  }

 private:
  struct Tables {
    std::vector<int> coords;
    std::vector<double> norm2;
  };
  int d_ = 0;
  int radius_ = 0;
  std::size_t size_ = 0;
  std::shared_ptr<const Tables> tables_;
};

inline constexpr std::size_t kMaxLatticeEntries = std::size_t{1} << 27;

/// C^{d0}-valued truncated Fourier series; coefficients are stored
/// point-major: coeffs[index * d0 + component].
class SpinorField {
 public:
  SpinorField() = default;
  SpinorField(FrequencyLattice lattice, int d0);

  static SpinorField plane_wave(const FrequencyLattice& lattice, int d0,
                                std::span<const int> xi,
                                std::span<const Complex> spinor);

  const FrequencyLattice& lattice() const { return lattice_; }
  int d0() const { return d0_; }

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> spinor(std::size_t index) {
    return {coeffs_.data() + index * d0_, static_cast<std::size_t>(d0_)};
  }
  std::span<const Complex> spinor(std::size_t index) const {
    return {coeffs_.data() + index * d0_, static_cast<std::size_t>(d0_)};
  }
  Complex& at(std::size_t index, int k) { return coeffs_[index * d0_ + k]; }
  const Complex& at(std::size_t index, int k) const {
    return coeffs_[index * d0_ + k];
  }

  double l2_norm_squared() const;
  /// (sum_xi |u_hat(xi)|^2)^{1/2}, the normalized-measure L^2 norm.
  double l2_norm() const;

  SpinorField& operator+=(const SpinorField& other);
  SpinorField& operator-=(const SpinorField& other);
  SpinorField& operator*=(Complex s);

  friend SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
  friend SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
  friend SpinorField operator*(Complex s, SpinorField a) { return a *= s; }
  friend SpinorField operator*(SpinorField a, Complex s) { return a *= s; }

 private:
  FrequencyLattice lattice_;
  int d0_ = 0;
  std::vector<Complex> coeffs_;
};

void require_compatible(const SpinorField& a, const SpinorField& b);

/// L^2 distance sum_xi |a - b|^2 without forming the difference.
double l2_distance(const SpinorField& a, const SpinorField& b);

/// Samples of a C^{d0}-valued function at x_g = 2 pi g / m, g in {0..m-1}^d
/// (row-major, axis 1 slowest). Storage is component-major:
/// values[k * points() + g].
struct SpatialGrid {
  int d = 0;
  int m = 0;
  int d0 = 0;
  std::vector<Complex> values;

  SpatialGrid() = default;
  SpatialGrid(int d, int m, int d0);

  std::size_t points() const { return values.size() / static_cast<std::size_t>(d0); }
  Complex& at(std::size_t g, int k) { return values[k * points() + g]; }
  const Complex& at(std::size_t g, int k) const { return values[k * points() + g]; }
  /// Coordinates of grid point g.
  std::vector<double> coordinate(std::size_t g) const;
};

/// Throws AliasingError when samples.m < 2N + 1. Exact on band-limited input.
SpinorField forward_fourier(const SpatialGrid& samples,
                            const FrequencyLattice& lattice);

/// Evaluates the finite series at the m^d grid points; m >= 2N + 1.
SpatialGrid inverse_fourier(const SpinorField& f, int m);

/// (1 + |xi|^2)^{1/2}
double japanese_bracket(std::span<const int> xi);

/// Diagonal-in-frequency symbol: one scalar or one d0 x d0 matrix per point.
class Multiplier {
 public:
  enum class Kind { scalar, matrix };

  static Multiplier scalar(FrequencyLattice lattice, std::vector<Complex> values);
  static Multiplier scalar(const FrequencyLattice& lattice,
                           const std::function<Complex(std::size_t)>& symbol);
  /// values holds size() row-major d0 x d0 blocks.
  static Multiplier matrix(FrequencyLattice lattice, int d0,
                           std::vector<Complex> values);
  static Multiplier matrix(const FrequencyLattice& lattice, int d0,
                           const std::function<CMatrix(std::size_t)>& symbol);

  Kind kind() const { return kind_; }
  const FrequencyLattice& lattice() const { return lattice_; }
  int d0() const { return d0_; }
  std::span<const Complex> values() const { return values_; }

  /// Symbol product (this applied after other).
  Multiplier compose(const Multiplier& other) const;

 private:
  Multiplier() = default;
  Kind kind_ = Kind::scalar;
  FrequencyLattice lattice_;
  int d0_ = 0;
  std::vector<Complex> values_;
};

SpinorField apply_multiplier(const Multiplier& m, const SpinorField& f,
                             Exec exec = Exec::parallel);

/// Applies a real radial-type symbol given as a function of the lattice index.
SpinorField apply_real_symbol(const SpinorField& f,
                              const std::function<double(std::size_t)>& symbol,
                              Exec exec = Exec::parallel);

/// (I +- (sum alpha^j xi_j + mass beta) / <xi>_mass) / 2
CMatrix projector_symbol(const GammaSet& g, std::span<const int> xi, Sign sign,
                         double mass = 1.0);

Multiplier projector_multiplier(const GammaSet& g, const FrequencyLattice& lattice,
                                Sign sign, double mass = 1.0);

/// Pi_{+-}(D) f, evaluated pointwise without materializing the matrices.
SpinorField project_pm(const GammaSet& g, const SpinorField& f, Sign sign,
                       double mass = 1.0, Exec exec = Exec::parallel);

/// D_j f = -i d f / d x^j, i.e. u_hat(xi) * xi_j. Axis is 1-based.
SpinorField partial_derivative(const SpinorField& f, int axis);

/// Uniformly sampled sequence of fields t_k = t0 + k dt.
struct Trajectory {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<SpinorField> frames;

  std::size_t size() const { return frames.size(); }
  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
  double window() const { return dt * static_cast<double>(frames.size()); }
  /// Throws when empty, dt <= 0, or frames disagree on lattice/d0.
  void validate() const;
};

/// Applies a spatial operator framewise.
Trajectory map_frames(const Trajectory& tr,
                      const std::function<SpinorField(const SpinorField&)>& op);

}  // namespace tdirac
