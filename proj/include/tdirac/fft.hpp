#pragma once

#include <span>

#include "tdirac/types.hpp"

namespace tdirac::fft {

/// In-place unnormalized batched DFT over a row-major array of shape `dims`,
/// repeated `howmany` times with the batches stored contiguously.
/// direction = -1 computes sum e^{-2 pi i k n / M}; +1 the conjugate sum.
/// Plans are cached; execution is safe from multiple threads.
void transform(std::span<Complex> data, std::span<const int> dims, int howmany,
               int direction);

}  // namespace tdirac::fft
