#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tieq::detail {

/// Unscaled DFT of arbitrary length n:
///   forward:  X_k = sum_j x_j e(-jk/n)
///   inverse:  X_k = sum_j x_j e(+jk/n)
/// Power-of-two sizes use iterative radix-2; other sizes go through Bluestein
/// (chirp phases taken mod 2n so angles stay small and exact).
void dft(std::vector<std::complex<double>>& a, bool inverse);

/// In-place radix-2 transform; n must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace tieq::detail
