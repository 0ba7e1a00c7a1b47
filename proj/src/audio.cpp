#include "meetsense/audio.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

#include "meetsense/fft.hpp"

namespace meetsense::audio {
namespace {

constexpr double kPi = std::numbers::pi;

struct Biquad {
    double b0, b1, b2;  // numerator
    double a1, a2;      // denominator (a0 normalized to 1)
};

// Butterworth bandpass as cascaded biquads: analog prototype -> bandpass
// transform -> bilinear. prototype_order 2 yields a 4-pole bandpass, the
// telephony-band workhorse used throughout.
std::vector<Biquad> design_butter_bandpass(int prototype_order, double low_hz,
                                           double high_hz, double fs) {
    const double k = 2.0 * fs;
    const double wl = k * std::tan(kPi * low_hz / fs);
    const double wh = k * std::tan(kPi * high_hz / fs);
    const double bw = wh - wl;
    const double w0sq = wl * wh;

    // Analog bandpass poles: each prototype pole p maps to the two roots of
    // s^2 - bw*p*s + w0sq = 0.
    std::vector<std::complex<double>> poles;
    for (int i = 0; i < prototype_order; ++i) {
        const double theta = kPi * (2.0 * i + prototype_order + 1.0) / (2.0 * prototype_order);
        const std::complex<double> p{std::cos(theta), std::sin(theta)};
        const std::complex<double> bp = bw * p;
        const std::complex<double> disc = std::sqrt(bp * bp - 4.0 * w0sq);
        poles.push_back((bp + disc) / 2.0);
        poles.push_back((bp - disc) / 2.0);
    }

    // Bilinear transform; zeros land at z = +1 (from s=0) and z = -1 (s=inf).
    std::vector<std::complex<double>> zpoles;
    for (const auto& s : poles) zpoles.push_back((k + s) / (k - s));

    // Pair conjugates into real second-order sections.
    std::vector<std::complex<double>> upper;
    std::vector<double> reals;
    for (const auto& z : zpoles) {
        if (z.imag() > 1e-12) {
            upper.push_back(z);
        } else if (z.imag() >= -1e-12) {
            reals.push_back(z.real());
        }
    }
    std::vector<Biquad> sections;
    for (const auto& z : upper) {
        sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
    }
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
        sections.push_back({1.0, 0.0, -1.0, -(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]});
    }

    // Normalize to unit gain at the (warped) center frequency.
    const double theta0 = 2.0 * std::atan(std::sqrt(w0sq) / k);
    const std::complex<double> zi{std::cos(theta0), std::sin(theta0)};
    const std::complex<double> zi1 = 1.0 / zi, zi2 = 1.0 / (zi * zi);
    std::complex<double> h{1.0, 0.0};
    for (const auto& s : sections) {
        h *= (s.b0 + s.b1 * zi1 + s.b2 * zi2) / (1.0 + s.a1 * zi1 + s.a2 * zi2);
    }
    const double gain = std::pow(1.0 / std::abs(h), 1.0 / sections.size());
    for (auto& s : sections) {
        s.b0 *= gain;
        s.b1 *= gain;
        s.b2 *= gain;
    }
    return sections;
}

void sos_filter_inplace(const std::vector<Biquad>& sections, std::vector<double>& x) {
    if (x.empty()) return;
    double level = x.front();  // steady-state level entering each section
    for (const auto& s : sections) {
        // Initial conditions for a constant input at `level`, so edge
        // transients start from the steady state rather than from zero.
        const double denom = 1.0 + s.a1 + s.a2;
        double z1 = 0.0, z2 = 0.0;
        if (std::fabs(denom) > 1e-12) {
            z1 = (s.b1 + s.b2 - (s.a1 + s.a2) * s.b0) / denom * level;
            z2 = s.b2 * level - s.a2 * (s.b0 * level + z1);
        }
        for (double& v : x) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
        const double h1 = (s.b0 + s.b1 + s.b2) / denom;
        level *= h1;
    }
}

// Zero-phase filtering with odd-reflection padding at both ends.
std::vector<double> sos_filtfilt(const std::vector<Biquad>& sections,
                                 const std::vector<double>& x, std::size_t pad) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    pad = std::min(pad, n - 1);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * x[0] - x[pad - i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 0; i < pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 2 - i]);

    sos_filter_inplace(sections, ext);
    std::reverse(ext.begin(), ext.end());
    sos_filter_inplace(sections, ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + pad, ext.begin() + pad + n);
}

bool all_zero(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

long long abs_sample_offset(const AudioTrace& t) {
    return std::llround(t.start_time_s * t.sample_rate_hz);
}

}  // namespace

AudioTrace bandpass(const AudioTrace& trace, double low_hz, double high_hz) {
    if (trace.sample_rate_hz <= 0) throw ParameterError("bandpass: sample rate must be positive");
    const double nyquist = trace.sample_rate_hz / 2.0;
    if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist)) {
        throw ParameterError("bandpass: need 0 < low < high < fs/2");
    }
    AudioTrace out = trace;
    if (trace.samples.empty()) return out;

    const auto sections = design_butter_bandpass(2, low_hz, high_hz, trace.sample_rate_hz);
    // Reflection padding long enough for the slowest edge transient (the
    // low band edge pole) to die below 1e-6.
    const auto pad = static_cast<std::size_t>(
        std::max(24.0, std::ceil(12.0 * trace.sample_rate_hz / low_hz)));
    out.samples = sos_filtfilt(sections, trace.samples, pad);
    return out;
}

AudioTrace normalize(const AudioTrace& trace) {
    if (trace.samples.empty()) throw ParameterError("normalize: empty trace");
    AudioTrace out = trace;
    double peak = 0.0;
    for (double v : out.samples) peak = std::max(peak, std::fabs(v));
    if (peak == 0.0) return out;
    for (double& v : out.samples) v /= peak;
    return out;
}

DriftEstimate estimate_drift(const AudioTrace& reference, const AudioTrace& target,
                             double max_shift_s) {
    if (reference.sample_rate_hz != target.sample_rate_hz) {
        throw ParameterError("estimate_drift: sample rates differ");
    }
    if (reference.samples.empty() || target.samples.empty()) {
        throw ParameterError("estimate_drift: empty trace");
    }
    if (max_shift_s <= 0.0) throw ParameterError("estimate_drift: max_shift_s must be positive");

    const long long fs = reference.sample_rate_hz;
    const long long nx = static_cast<long long>(reference.samples.size());
    const long long ny = static_cast<long long>(target.samples.size());
    const long long ax = abs_sample_offset(reference);
    const long long ay = abs_sample_offset(target);
    const long long start_delta = ay - ax;
    const long long max_lag = std::llround(max_shift_s * fs);
    const long long min_overlap = fs;  // one second

    // Shift in absolute samples m relates to the array lag k by m = k + (ay - ax).
    const long long k_lo = std::max(-(nx - 1), -max_lag - start_delta);
    const long long k_hi = std::min(ny - 1, max_lag - start_delta);
    if (k_lo > k_hi) throw AlignmentError("estimate_drift: search window excludes all overlaps");

    const auto c = fft::cross_correlate(reference.samples, target.samples);

    std::vector<double> px(nx + 1, 0.0), py(ny + 1, 0.0);
    for (long long i = 0; i < nx; ++i)
        px[i + 1] = px[i] + reference.samples[i] * reference.samples[i];
    for (long long i = 0; i < ny; ++i)
        py[i + 1] = py[i] + target.samples[i] * target.samples[i];

    bool found = false;
    double best_r = -2.0;
    long long best_m = 0;
    for (long long k = k_lo; k <= k_hi; ++k) {
        const long long n0 = std::max<long long>(0, -k);
        const long long n1 = std::min(nx, ny - k);
        if (n1 - n0 < min_overlap) continue;
        found = true;
        const double ex = px[n1] - px[n0];
        const double ey = py[n1 + k] - py[n0 + k];
        double r = 0.0;
        if (ex > 0.0 && ey > 0.0) {
            r = c[k + nx - 1] / std::sqrt(ex * ey);
        }
        r = std::clamp(r, -1.0, 1.0);
        if (r > best_r) {
            best_r = r;
            best_m = k + start_delta;
        }
    }
    if (!found) throw AlignmentError("estimate_drift: less than one second of overlap at every shift");

    return DriftEstimate{reference.subject_id, target.subject_id,
                         static_cast<double>(best_m) / static_cast<double>(fs), best_r};
}

std::vector<AudioTrace> align(const std::vector<AudioTrace>& traces,
                              const std::string& reference_id, double max_shift_s) {
    auto ref_it = std::find_if(traces.begin(), traces.end(), [&](const AudioTrace& t) {
        return t.subject_id == reference_id;
    });
    if (ref_it == traces.end()) throw ParameterError("align: reference id not present");
    if (traces.size() == 1) return traces;

    const long long fs = ref_it->sample_rate_hz;
    std::vector<long long> shift_samples(traces.size(), 0);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (traces[i].subject_id == reference_id) continue;
        const auto est = estimate_drift(*ref_it, traces[i], max_shift_s);
        shift_samples[i] = std::llround(est.shift_s * fs);
    }

    // After removing the drift, trace i occupies world samples
    // [a_i - m_i, a_i - m_i + n_i); keep the intersection.
    long long lo = std::numeric_limits<long long>::min();
    long long hi = std::numeric_limits<long long>::max();
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const long long w0 = abs_sample_offset(traces[i]) - shift_samples[i];
        lo = std::max(lo, w0);
        hi = std::min(hi, w0 + static_cast<long long>(traces[i].samples.size()));
    }
    if (hi <= lo) throw AlignmentError("align: no common span after drift removal");

    std::vector<AudioTrace> out;
    out.reserve(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const long long w0 = abs_sample_offset(traces[i]) - shift_samples[i];
        AudioTrace t;
        t.subject_id = traces[i].subject_id;
        t.sample_rate_hz = traces[i].sample_rate_hz;
        t.start_time_s = static_cast<double>(lo) / static_cast<double>(fs);
        t.samples.assign(traces[i].samples.begin() + (lo - w0),
                         traces[i].samples.begin() + (hi - w0));
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<double> ccep(std::span<const double> segment_samples) {
    const std::size_t n = segment_samples.size();
    if (n == 0) throw ParameterError("ccep: empty segment");
    if (all_zero(segment_samples)) throw DegenerateInputError("ccep: all-zero segment");

    auto spectrum = fft::forward(segment_samples);

    double max_mag = 0.0;
    for (const auto& v : spectrum) max_mag = std::max(max_mag, std::abs(v));
    const double floor_mag = max_mag * 1e-15;  // relative, so gain moves only coefficient 0

    std::vector<double> log_mag(n), phase(n);
    for (std::size_t i = 0; i < n; ++i) {
        log_mag[i] = std::log(std::max(std::abs(spectrum[i]), floor_mag));
        phase[i] = std::arg(spectrum[i]);
    }

    // Unwrap, then remove the linear phase trend (the j*2*pi*l term: l per
    // bin is fixed by continuity, and the residual circular-shift slope is
    // subtracted so the cepstrum does not depend on segment rotation).
    std::vector<double> unwrapped(n);
    unwrapped[0] = phase[0];
    for (std::size_t i = 1; i < n; ++i) {
        double d = phase[i] - phase[i - 1];
        d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
        unwrapped[i] = unwrapped[i - 1] + d;
    }
    if (n >= 2) {
        const std::size_t nh = (n + 1) / 2;
        const double nd = std::round(unwrapped[nh] / kPi);
        for (std::size_t i = 0; i < n; ++i) {
            unwrapped[i] -= kPi * nd * static_cast<double>(i) / static_cast<double>(nh);
        }
    }

    std::vector<std::complex<double>> log_spectrum(n);
    for (std::size_t i = 0; i < n; ++i) log_spectrum[i] = {log_mag[i], unwrapped[i]};
    auto cep = fft::inverse(log_spectrum);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = cep[i].real();
    return out;
}

std::vector<std::optional<CepstrumSegment>> segment_cepstra(const AudioTrace& trace,
                                                            double segment_len_s) {
    if (segment_len_s <= 0.0) throw ParameterError("segment_cepstra: segment length must be positive");
    const auto seg = static_cast<std::size_t>(std::llround(segment_len_s * trace.sample_rate_hz));
    if (seg == 0) throw ParameterError("segment_cepstra: segment shorter than one sample");

    const std::size_t count = trace.samples.size() / seg;
    std::vector<std::optional<CepstrumSegment>> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::span<const double> window{trace.samples.data() + k * seg, seg};
        if (all_zero(window)) continue;  // silent: absent, not zero
        CepstrumSegment cs;
        cs.subject_id = trace.subject_id;
        cs.segment_index = static_cast<long>(k);
        cs.sample_rate_hz = trace.sample_rate_hz;
        cs.coefficients = ccep(window);
        out[k] = std::move(cs);
    }
    return out;
}

double cepstrum_correlation(const CepstrumSegment& a, const CepstrumSegment& b,
                            double pitch_min_hz, double pitch_max_hz) {
    if (a.coefficients.size() != b.coefficients.size()) {
        throw AlignmentError("cepstrum_correlation: coefficient counts differ");
    }
    const std::size_t n = a.coefficients.size();
    if (n < 4) return 0.0;

    // Quefrency window covering the first rahmonic of the pitch band.
    const double fs = a.sample_rate_hz;
    auto lo = static_cast<std::size_t>(std::llround(fs / pitch_max_hz));
    auto hi = static_cast<std::size_t>(std::llround(fs / pitch_min_hz)) + 1;
    lo = std::max<std::size_t>(lo, 1);
    hi = std::min(hi, n / 2);
    if (hi <= lo + 1) {  // degenerate window (very short segments)
        lo = 1;
        hi = n / 2;
    }

    // Even component = the log-magnitude cepstrum.
    auto even = [n](const CepstrumSegment& c, std::size_t k) {
        return 0.5 * (c.coefficients[k] + c.coefficients[n - k]);
    };

    double ma = 0.0, mb = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        ma += even(a, i);
        mb += even(b, i);
    }
    const double count = static_cast<double>(hi - lo);
    ma /= count;
    mb /= count;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double da = even(a, i) - ma;
        const double db = even(b, i) - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

PairFeatureSeries acoustic_similarity(const AudioTrace& trace_i, const AudioTrace& trace_j,
                                      double segment_len_s) {
    if (trace_i.sample_rate_hz != trace_j.sample_rate_hz) {
        throw AlignmentError("acoustic_similarity: sample rates differ");
    }
    const double half_sample = 0.5 / trace_i.sample_rate_hz;
    if (std::fabs(trace_i.start_time_s - trace_j.start_time_s) > half_sample ||
        trace_i.samples.size() != trace_j.samples.size()) {
        throw AlignmentError("acoustic_similarity: traces cover mismatched spans");
    }
    return acoustic_similarity(segment_cepstra(trace_i, segment_len_s),
                               segment_cepstra(trace_j, segment_len_s),
                               trace_i.subject_id, trace_j.subject_id);
}

PairFeatureSeries acoustic_similarity(const std::vector<std::optional<CepstrumSegment>>& cep_i,
                                      const std::vector<std::optional<CepstrumSegment>>& cep_j,
                                      const std::string& id_i, const std::string& id_j) {
    PairFeatureSeries series;
    series.subject_i = id_i;
    series.subject_j = id_j;
    const std::size_t count = std::min(cep_i.size(), cep_j.size());
    for (std::size_t k = 0; k < count; ++k) {
        if (!cep_i[k] || !cep_j[k]) continue;
        series.values.emplace_back(static_cast<long>(k),
                                   cepstrum_correlation(*cep_i[k], *cep_j[k]));
    }
    return series;
}

}  // namespace meetsense::audio
