#pragma once

#include <span>
#include <vector>

#include "fbmc/types.hpp"

namespace fbmc {

/// In-place iterative radix-2 FFT. Size must be a power of two.
/// sign = -1: forward (e^{-j2*pi*km/N}), sign = +1: inverse kernel (unscaled).
void fft_pow2(std::span<cplx> data, int sign);

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Out-of-place DFT for arbitrary sizes (reference fallback, O(N^2)).
std::vector<cplx> dft_ref(std::span<const cplx> in, int sign);

}  // namespace fbmc
