#pragma once

#include <complex>
#include <vector>

namespace prnuforge::detail {

// In-place 1-D DFT of arbitrary length: radix-2 for powers of two, Bluestein
// otherwise. Unnormalized in both directions; callers divide by n as needed.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace prnuforge::detail
