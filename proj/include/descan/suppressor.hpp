// Weighted spectral magnitude subtraction, phase reconstruction, template update.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "descan/dsp.hpp"
#include "descan/types.hpp"

namespace descan {

/// Per-bin weights applied to the template magnitude spectrum before
/// subtraction. Zero: all 0. LinearFreq: |f| / f_nyquist, so 0 at DC,
/// 1 at Nyquist, symmetric across conjugate bins.
struct WeightingFunction {
    Weighting kind = Weighting::Zero;
    std::vector<double> values;
};

WeightingFunction make_weighting(Weighting kind, std::size_t bins, double sample_rate);

/// Ideal brick-wall 0/1 mask, 1 where |bin frequency| <= cutoff.
struct DigitalFilterMask {
    std::vector<double> values;
    double cutoff_hz = 0.0;
};

/// Throws InvalidCutoff unless 0 < cutoff <= sample_rate / 2.
DigitalFilterMask make_lowpass(double cutoff_hz, std::size_t bins, double sample_rate);

/// All-ones mask (no band limiting), cutoff reported as Nyquist.
DigitalFilterMask make_allpass(std::size_t bins, double sample_rate);

/// Rectified weighted magnitude subtraction:
/// max(residual_mag[k] - alpha * weight[k] * template_mag[k], 0) per bin.
std::vector<double> subtract_weighted_magnitude(std::span<const double> residual_mag,
                                                std::span<const double> template_mag,
                                                std::span<const double> weight, double alpha);

/// Full suppression of one matched segment: time-domain template subtraction,
/// weighted magnitude subtraction in the frequency domain, reconstruction
/// with the residual's phase through the filter mask. Output length equals
/// the template length. Throws LengthMismatch.
std::vector<double> subtract_and_reconstruct(std::span<const double> x_b, const NoiseTemplate& tpl,
                                             const WeightingFunction& wfun,
                                             const DigitalFilterMask& dmask, double alpha);

/// Blends x_b into the template (gamma * old + (1-gamma) * x_b) when
/// rms(v_hat) < theta_rms; otherwise returns the template unchanged.
/// An update recomputes the magnitude spectrum and bumps update_count.
NoiseTemplate maybe_update_template(const NoiseTemplate& tpl, std::span<const double> x_b,
                                    std::span<const double> v_hat, double gamma, double theta_rms);

}  // namespace descan
