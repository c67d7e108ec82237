// Synthetic scanner noise, test utterances, and SNR-controlled mixing.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "descan/types.hpp"

namespace descan {

/// One damped-sinusoid component of the per-slice noise pulse.
struct PulseComponent {
    double frequency_hz = 0.0;
    double amplitude = 0.0;
    double decay_rate = 0.0;  // 1/s amplitude decay of the exponential envelope
};

/// Quasi-periodic gradient-noise model: identical pulses launched every
/// period_s, each onset perturbed by a seeded uniform jitter, over a seeded
/// broadband background floor.
struct NoiseModel {
    double period_s = 0.1;
    double jitter_s = 0.0;
    std::vector<PulseComponent> pulses = default_pulses();
    double background_level = 0.0;
    std::uint64_t seed = 1;

    /// 600/1100/1900 Hz damped sinusoids; keeps energy concentrated well
    /// below 3 kHz.
    static std::vector<PulseComponent> default_pulses();

    /// Throws InvalidModel (jitter >= period/4, component at/above Nyquist,
    /// negative background, nonpositive period).
    void validate(double sample_rate) const;
};

/// Deterministic per seed. Pulse tails from before t=0 are included so a
/// jitter-free model is exactly periodic from the first sample on.
/// Throws InvalidModel; duration must cover at least two periods.
SampleVector gen_gradient_noise(const NoiseModel& model, double duration_s, double sample_rate);

/// Silence / voiced segment / silence. Harmonic source with an f0 glide
/// 110 -> 90 Hz shaped by slowly drifting formant-like resonances; soft
/// onset/offset; peak normalized to 1; leading/trailing 10% exactly zero.
SampleVector gen_test_utterance(double duration_s, double sample_rate, std::uint64_t seed);

struct Mixture {
    SampleVector y;         // g with the scaled utterance added at offset
    SampleVector v_scaled;  // the utterance after SNR scaling
    SampleVector g;         // the noise actually used
    std::size_t offset_samples = 0;
};

/// Scales v so snr_db(v_scaled, g) equals the target, then adds it into g
/// starting at offset_samples. Throws OutOfRange (utterance does not fit),
/// ZeroSignal (silent v or g), SampleRateMismatch.
Mixture mix_at_snr(const SampleVector& v, const SampleVector& g, double target_snr_db,
                   std::size_t offset_samples);

}  // namespace descan
