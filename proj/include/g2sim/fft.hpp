// Thin FFTW wrapper: deterministic plans, thread-safe planning.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace g2sim::fft {

/// In-place DFT, X_k = sum_n x_n exp(-2*pi*i*k*n/N). Unnormalized.
void forward(std::vector<std::complex<double>>& data);

/// In-place inverse kernel, x_n = sum_k X_k exp(+2*pi*i*k*n/N). Unnormalized.
void backward(std::vector<std::complex<double>>& data);

/// Signed angular frequency of FFT bin k for record length n and sample step dt.
inline double bin_frequency(std::size_t k, std::size_t n, double dt) {
    const double two_pi = 6.283185307179586476925286766559;
    const long long kk = static_cast<long long>(k);
    const long long nn = static_cast<long long>(n);
    const long long signed_k = 2 * kk < nn ? kk : kk - nn;
    return two_pi * static_cast<double>(signed_k) / (static_cast<double>(nn) * dt);
}

} // namespace g2sim::fft
