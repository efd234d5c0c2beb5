#include "tdirac/kernels.hpp"

#include <vector>

namespace tdirac::kernels {

void scale_rows(std::span<Complex> data, int width,
                std::span<const Complex> factors, Exec exec) {
  const auto w = static_cast<std::size_t>(width);
  for_each_index(factors.size(), exec, [&](std::size_t i) {
    const Complex f = factors[i];
    Complex* row = data.data() + i * w;
    for (std::size_t k = 0; k < w; ++k) row[k] *= f;
  });
}

void scale_rows(std::span<Complex> data, int width,
                std::span<const double> factors, Exec exec) {
  const auto w = static_cast<std::size_t>(width);
  for_each_index(factors.size(), exec, [&](std::size_t i) {
    const double f = factors[i];
    Complex* row = data.data() + i * w;
    for (std::size_t k = 0; k < w; ++k) row[k] *= f;
  });
}

void apply_block_matrices(std::span<Complex> data, int width,
                          std::span<const Complex> matrices, Exec exec) {
  const auto w = static_cast<std::size_t>(width);
  const std::size_t rows = data.size() / w;
  for_each_index(rows, exec, [&](std::size_t i) {
    Complex* row = data.data() + i * w;
    const Complex* m = matrices.data() + i * w * w;
    std::vector<Complex> tmp(w);
    for (std::size_t r = 0; r < w; ++r) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < w; ++c) acc += m[r * w + c] * row[c];
      tmp[r] = acc;
    }
    for (std::size_t r = 0; r < w; ++r) row[r] = tmp[r];
  });
}

void axpy(std::span<Complex> out, std::span<const Complex> a, Complex s,
          std::span<const Complex> b, Exec exec) {
  for_each_index(out.size(), exec,
                 [&](std::size_t i) { out[i] = a[i] + s * b[i]; });
}

}  // namespace tdirac::kernels
