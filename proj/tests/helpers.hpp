#ifndef MEETSENSE_TEST_HELPERS_HPP
#define MEETSENSE_TEST_HELPERS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "meetsense/fft.hpp"
#include "meetsense/types.hpp"

namespace test_helpers {

inline meetsense::AudioTrace make_trace(std::string id, int fs, std::vector<double> samples,
                                        double start_s = 0.0) {
    meetsense::AudioTrace t;
    t.subject_id = std::move(id);
    t.sample_rate_hz = fs;
    t.start_time_s = start_s;
    t.samples = std::move(samples);
    return t;
}

inline std::vector<double> sine(double freq_hz, int fs, double duration_s, double amp = 1.0) {
    const auto n = static_cast<std::size_t>(duration_s * fs);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = amp * std::sin(2.0 * std::numbers::pi * freq_hz * i / fs);
    }
    return out;
}

inline std::vector<double> white_noise(std::size_t n, unsigned seed, double amp = 1.0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, amp);
    std::vector<double> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

// A non-periodic band-limited burst: noise shaped by a slow random envelope.
inline std::vector<double> noise_burst(std::size_t n, unsigned seed) {
    auto x = white_noise(n, seed);
    std::mt19937 rng(seed + 17);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    const std::size_t block = 512;
    for (std::size_t i = 0; i < n; i += block) {
        const double e = u(rng);
        for (std::size_t j = i; j < std::min(n, i + block); ++j) x[j] *= e;
    }
    return x;
}

inline double rms(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

// Independent reference filter for the bandpass oracle: zero every FFT bin
// outside [low_hz, high_hz] and invert.
inline std::vector<double> brickwall_bandpass(const std::vector<double>& x, int fs,
                                              double low_hz, double high_hz) {
    auto spectrum = meetsense::fft::forward(std::span<const double>(x));
    const std::size_t n = spectrum.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double f = static_cast<double>(k <= n / 2 ? k : n - k) * fs / n;
        if (f < low_hz || f > high_hz) spectrum[k] = {0.0, 0.0};
    }
    const auto y = meetsense::fft::inverse(spectrum);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i].real();
    return out;
}

}  // namespace test_helpers

#endif
