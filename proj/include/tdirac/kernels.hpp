#pragma once

// Data-parallel inner loops. Every kernel takes an Exec policy; the serial
// branch is the reference implementation and the OpenMP branch must agree
// with it bit for bit (no reductions are performed in parallel).

#include <cstddef>
#include <cstdint>
#include <span>

#include "tdirac/types.hpp"

namespace tdirac::kernels {

template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::parallel) {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

/// data[i*width + k] *= factors[i]
void scale_rows(std::span<Complex> data, int width,
                std::span<const Complex> factors, Exec exec);
void scale_rows(std::span<Complex> data, int width,
                std::span<const double> factors, Exec exec);

/// data row i <- M_i * (data row i), with M_i row-major width x width
/// stored at matrices[i*width*width].
void apply_block_matrices(std::span<Complex> data, int width,
                          std::span<const Complex> matrices, Exec exec);

/// out[i] = a[i] + s * b[i]
void axpy(std::span<Complex> out, std::span<const Complex> a, Complex s,
          std::span<const Complex> b, Exec exec);

}  // namespace tdirac::kernels
