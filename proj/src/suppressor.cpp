#include "descan/suppressor.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace descan {
namespace {

// |frequency| of bin k on a length-n grid, in Hz.
double bin_abs_freq(std::size_t k, std::size_t n, double sample_rate) {
    const std::size_t m = std::min(k, n - k);
    return static_cast<double>(m) * sample_rate / static_cast<double>(n);
}

}  // namespace

WeightingFunction make_weighting(Weighting kind, std::size_t bins, double sample_rate) {
    WeightingFunction w;
    w.kind = kind;
    w.values.assign(bins, 0.0);
    if (kind == Weighting::LinearFreq) {
        const double nyquist = sample_rate / 2.0;
        for (std::size_t k = 0; k < bins; ++k) {
            w.values[k] = bin_abs_freq(k, bins, sample_rate) / nyquist;
        }
    }
    return w;
}

DigitalFilterMask make_lowpass(double cutoff_hz, std::size_t bins, double sample_rate) {
    if (!(cutoff_hz > 0.0 && cutoff_hz <= sample_rate / 2.0))
        throw InvalidCutoff("make_lowpass: cutoff must lie in (0, sample_rate/2]");
    DigitalFilterMask mask;
    mask.cutoff_hz = cutoff_hz;
    mask.values.assign(bins, 0.0);
    for (std::size_t k = 0; k < bins; ++k) {
        if (bin_abs_freq(k, bins, sample_rate) <= cutoff_hz) mask.values[k] = 1.0;
    }
    return mask;
}

DigitalFilterMask make_allpass(std::size_t bins, double sample_rate) {
    DigitalFilterMask mask;
    mask.cutoff_hz = sample_rate / 2.0;
    mask.values.assign(bins, 1.0);
    return mask;
}

std::vector<double> subtract_weighted_magnitude(std::span<const double> residual_mag,
                                                std::span<const double> template_mag,
                                                std::span<const double> weight, double alpha) {
    if (residual_mag.size() != template_mag.size() || residual_mag.size() != weight.size())
        throw LengthMismatch("subtract_weighted_magnitude: bin counts differ");
    std::vector<double> out(residual_mag.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = std::max(residual_mag[k] - alpha * weight[k] * template_mag[k], 0.0);
    }
    return out;
}

std::vector<double> subtract_and_reconstruct(std::span<const double> x_b, const NoiseTemplate& tpl,
                                             const WeightingFunction& wfun,
                                             const DigitalFilterMask& dmask, double alpha) {
    const std::size_t L = tpl.length();
    if (x_b.size() != L) throw LengthMismatch("subtract_and_reconstruct: segment vs template");
    if (wfun.values.size() != L) throw LengthMismatch("subtract_and_reconstruct: weighting bins");
    if (dmask.values.size() != L) throw LengthMismatch("subtract_and_reconstruct: filter bins");

    std::vector<double> x_res(L);
    for (std::size_t i = 0; i < L; ++i) x_res[i] = x_b[i] - tpl.samples[i];

    Spectrum spec = forward_transform(x_res, tpl.sample_rate);
    std::vector<double> mags(L);
    for (std::size_t k = 0; k < L; ++k) mags[k] = std::abs(spec.bins[k]);

    const std::vector<double> gamma =
        subtract_weighted_magnitude(mags, tpl.magnitude_spectrum, wfun.values, alpha);

    // Rebuild with the residual's phase, band-limited by the mask.
    for (std::size_t k = 0; k < L; ++k) {
        spec.bins[k] = std::polar(dmask.values[k] * gamma[k], std::arg(spec.bins[k]));
    }
    return inverse_transform(spec);
}

NoiseTemplate maybe_update_template(const NoiseTemplate& tpl, std::span<const double> x_b,
                                    std::span<const double> v_hat, double gamma, double theta_rms) {
    if (x_b.size() != tpl.length())
        throw LengthMismatch("maybe_update_template: segment vs template");
    if (rms(v_hat) >= theta_rms) return tpl;

    std::vector<double> blended(tpl.length());
    for (std::size_t i = 0; i < blended.size(); ++i) {
        blended[i] = gamma * tpl.samples[i] + (1.0 - gamma) * x_b[i];
    }
    NoiseTemplate updated = NoiseTemplate::from_samples(std::move(blended), tpl.sample_rate);
    updated.update_count = tpl.update_count + 1;
    return updated;
}

}  // namespace descan
