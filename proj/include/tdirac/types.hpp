#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tdirac {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Branch selector for the half-wave splitting: plus evolves as e^{-it<D>},
/// minus as e^{+it<D>}.
enum class Sign { plus, minus };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline const char* sign_name(Sign s) { return s == Sign::plus ? "+" : "-"; }

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path the OpenMP path is tested against.
enum class Exec { serial, parallel };

/// Two operands live on different frequency lattices or spinor dimensions.
class LatticeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A physical grid is too coarse to represent the lattice without aliasing.
class AliasingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tdirac
