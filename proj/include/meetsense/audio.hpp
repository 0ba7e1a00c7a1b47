#ifndef MEETSENSE_AUDIO_HPP
#define MEETSENSE_AUDIO_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meetsense/types.hpp"

namespace meetsense::audio {

/// Complex-cepstrum coefficients of one fixed-length segment.
/// Coefficient 0 carries the gain term (log of the spectral mean level);
/// the remaining coefficients describe spectral shape only.
struct CepstrumSegment {
    std::string subject_id;
    long segment_index = 0;  // in segment_len_s units from the trace start
    int sample_rate_hz = 44100;  // fixes the quefrency axis
    std::vector<double> coefficients;
};

/// Voice pitch band assumed by the tone correlation: the first rahmonic of
/// a fundamental in [min, max] Hz falls in quefrency [fs/max, fs/min].
constexpr double kPitchMinHz = 88.0;
constexpr double kPitchMaxHz = 300.0;

/// Result of cross-correlation drift estimation between two traces.
/// shift_s > 0 means the target's content lags the reference (the target
/// must be pulled back by shift_s to line up).
struct DriftEstimate {
    std::string reference_id;
    std::string target_id;
    double shift_s = 0.0;
    double peak_correlation = 0.0;
};

/// Butterworth bandpass (zero phase: applied forward then backward).
/// Defaults to the speech band 300-3400 Hz. Same length and timebase out.
AudioTrace bandpass(const AudioTrace& trace, double low_hz = 300.0, double high_hz = 3400.0);

/// Peak normalization: divide by max |sample|. All-zero input is returned
/// unchanged.
AudioTrace normalize(const AudioTrace& trace);

/// Maximize normalized cross-correlation over integer-sample shifts within
/// +/- max_shift_s. Candidate shifts must leave at least one second of
/// overlap; otherwise AlignmentError.
DriftEstimate estimate_drift(const AudioTrace& reference, const AudioTrace& target,
                             double max_shift_s = 30.0);

/// Shift every trace by its estimated drift against the reference and
/// truncate all outputs to the common overlapping span.
std::vector<AudioTrace> align(const std::vector<AudioTrace>& traces,
                              const std::string& reference_id,
                              double max_shift_s = 30.0);

/// Complex cepstrum of one segment: IFT(log|FT| + j*unwrapped phase), with
/// the linear phase trend removed before unwrapping. Output is real, same
/// length as the input. All-zero input -> DegenerateInputError.
std::vector<double> ccep(std::span<const double> segment_samples);

/// Per-segment cepstra for a whole trace. Trailing partial segments are
/// discarded; all-zero (silent) segments come back as nullopt.
std::vector<std::optional<CepstrumSegment>> segment_cepstra(const AudioTrace& trace,
                                                            double segment_len_s = 1.0);

/// Zero-lag Pearson correlation of two cepstra over the pitch quefrency
/// band, taken on the even (log-magnitude) cepstral component. The gain
/// coefficient 0 and the low-quefrency spectral envelope sit below the
/// band and never enter the correlation; the odd (unwrapped-phase) part is
/// noise-driven on real microphone signals and is left out of the tone
/// measure.
double cepstrum_correlation(const CepstrumSegment& a, const CepstrumSegment& b,
                            double pitch_min_hz = kPitchMinHz,
                            double pitch_max_hz = kPitchMaxHz);

/// Per-segment acoustic-context similarity of two aligned, preprocessed
/// traces. Segments where either side is silent are absent from the series.
PairFeatureSeries acoustic_similarity(const AudioTrace& trace_i, const AudioTrace& trace_j,
                                      double segment_len_s = 1.0);

/// Same, from precomputed cepstra (the pipeline computes cepstra once per
/// subject and correlates pairwise).
PairFeatureSeries acoustic_similarity(const std::vector<std::optional<CepstrumSegment>>& cep_i,
                                      const std::vector<std::optional<CepstrumSegment>>& cep_j,
                                      const std::string& id_i, const std::string& id_j);

}  // namespace meetsense::audio

#endif
