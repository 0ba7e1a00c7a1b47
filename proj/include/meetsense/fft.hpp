#ifndef MEETSENSE_FFT_HPP
#define MEETSENSE_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace meetsense::fft {

/// Forward complex DFT of a real signal, length n (no padding).
std::vector<std::complex<double>> forward(std::span<const double> x);

/// Forward complex DFT.
std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& x);

/// Inverse complex DFT, scaled by 1/n.
std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& x);

/// Smallest size >= n whose factors are all in {2, 3, 5, 7}.
std::size_t next_fast_size(std::size_t n);

/// Linear cross-correlation c[m] = sum_n x[n] * y[n + m] computed via FFT.
/// The returned vector holds lags m = -(x.size()-1) .. (y.size()-1), so
/// c[m] lives at index m + x.size() - 1.
std::vector<double> cross_correlate(std::span<const double> x, std::span<const double> y);

}  // namespace meetsense::fft

#endif
