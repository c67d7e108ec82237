// Evaluation metrics: NS, SNR, ISNR, utterance mask, Welch PSD.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "descan/types.hpp"

namespace descan {

/// 20*log10(||g - g_hat|| / ||g||), clamped to [-120, 120] dB.
/// Throws LengthMismatch and ZeroReference (||g|| == 0).
double noise_suppression_db(std::span<const double> g, std::span<const double> g_hat);

/// 20*log10(||v|| / ||g||). Throws ZeroOperand when either norm is zero.
double snr_db(std::span<const double> v, std::span<const double> g);

/// 20*log10(||g|| / ||v - v_hat||), clamped to [-120, 120] dB. The numerator
/// is the noise norm, not a before/after ratio. Throws LengthMismatch (v vs
/// v_hat) and ZeroReference (||g|| == 0).
double isnr_db(std::span<const double> g, std::span<const double> v,
               std::span<const double> v_hat);

/// Conventional improvement: post-suppression SNR minus input SNR, with the
/// residual v - v_hat as the output-noise estimate. Algebraically equal to
/// isnr_db; kept as an independent cross-check route.
double isnr_conventional_db(std::span<const double> g, std::span<const double> v,
                            std::span<const double> v_hat);

/// Per-sample speech mask, frame-constant: a frame is speech when its RMS
/// exceeds energy_fraction * peak frame RMS of v_ref. Throws EmptyInput.
std::vector<std::uint8_t> utterance_mask(std::span<const double> v_ref, std::size_t frame_len,
                                         double energy_fraction);

struct PsdPoint {
    double frequency_hz = 0.0;
    double power_density = 0.0;  // amplitude^2 per Hz
};

/// Welch averaged periodogram, Hann window, one-sided. Defaults: 100 ms
/// window, 80% overlap. Throws TooShort when x is shorter than one window.
std::vector<PsdPoint> welch_psd(std::span<const double> x, double sample_rate,
                                double window_s = 0.1, double overlap_frac = 0.8);

}  // namespace descan
