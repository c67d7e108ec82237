#include "descan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "descan/dsp.hpp"

namespace descan {
namespace {

double l2_norm(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
}

double clamp_db(double db) { return std::clamp(db, -120.0, 120.0); }

double ratio_db(double num, double den) {
    if (num == 0.0) return -120.0;
    if (den == 0.0) return 120.0;
    return clamp_db(20.0 * std::log10(num / den));
}

}  // namespace

double noise_suppression_db(std::span<const double> g, std::span<const double> g_hat) {
    if (g.size() != g_hat.size()) throw LengthMismatch("noise_suppression_db: lengths differ");
    const double ref = l2_norm(g);
    if (ref == 0.0) throw ZeroReference("noise_suppression_db: reference noise is silent");
    std::vector<double> diff(g.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = g[i] - g_hat[i];
    return ratio_db(l2_norm(diff), ref);
}

double snr_db(std::span<const double> v, std::span<const double> g) {
    const double nv = l2_norm(v);
    const double ng = l2_norm(g);
    if (nv == 0.0) throw ZeroOperand("snr_db: speech operand is silent");
    if (ng == 0.0) throw ZeroOperand("snr_db: noise operand is silent");
    return 20.0 * std::log10(nv / ng);
}

double isnr_db(std::span<const double> g, std::span<const double> v,
               std::span<const double> v_hat) {
    if (v.size() != v_hat.size()) throw LengthMismatch("isnr_db: v vs v_hat lengths differ");
    const double ng = l2_norm(g);
    if (ng == 0.0) throw ZeroReference("isnr_db: reference noise is silent");
    std::vector<double> resid(v.size());
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = v[i] - v_hat[i];
    return ratio_db(ng, l2_norm(resid));
}

double isnr_conventional_db(std::span<const double> g, std::span<const double> v,
                            std::span<const double> v_hat) {
    if (v.size() != v_hat.size())
        throw LengthMismatch("isnr_conventional_db: v vs v_hat lengths differ");
    std::vector<double> resid(v.size());
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = v[i] - v_hat[i];
    // Output SNR (residual as the remaining noise) minus input SNR.
    return snr_db(v, resid) - snr_db(v, g);
}

std::vector<std::uint8_t> utterance_mask(std::span<const double> v_ref, std::size_t frame_len,
                                         double energy_fraction) {
    if (v_ref.empty()) throw EmptyInput("utterance_mask: empty reference");
    if (frame_len == 0) throw OutOfRange("utterance_mask: frame_len must be positive");
    if (!(energy_fraction > 0.0 && energy_fraction < 1.0))
        throw OutOfRange("utterance_mask: energy_fraction must lie in (0, 1)");

    const std::size_t n = v_ref.size();
    const std::size_t frames = (n + frame_len - 1) / frame_len;
    std::vector<double> frame_rms(frames, 0.0);
    double peak = 0.0;
    for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t begin = f * frame_len;
        const std::size_t len = std::min(frame_len, n - begin);
        frame_rms[f] = rms(v_ref.subspan(begin, len));
        peak = std::max(peak, frame_rms[f]);
    }

    std::vector<std::uint8_t> mask(n, 0);
    const double threshold = energy_fraction * peak;
    for (std::size_t f = 0; f < frames; ++f) {
        if (frame_rms[f] > threshold) {
            const std::size_t begin = f * frame_len;
            const std::size_t len = std::min(frame_len, n - begin);
            std::fill(mask.begin() + begin, mask.begin() + begin + len, 1);
        }
    }
    return mask;
}

std::vector<PsdPoint> welch_psd(std::span<const double> x, double sample_rate, double window_s,
                                double overlap_frac) {
    if (!(sample_rate > 0.0)) throw OutOfRange("welch_psd: sample_rate must be positive");
    if (!(overlap_frac >= 0.0 && overlap_frac < 1.0))
        throw OutOfRange("welch_psd: overlap_frac must lie in [0, 1)");
    const std::size_t win = static_cast<std::size_t>(std::llround(window_s * sample_rate));
    if (win < 2) throw OutOfRange("welch_psd: window too short");
    if (x.size() < win) throw TooShort("welch_psd: signal shorter than one window");

    // Periodic Hann window and its power normalization.
    std::vector<double> window(win);
    double win_power = 0.0;
    for (std::size_t i = 0; i < win; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(win)));
        win_power += window[i] * window[i];
    }

    const std::size_t overlap = static_cast<std::size_t>(
        std::llround(overlap_frac * static_cast<double>(win)));
    const std::size_t hop = win > overlap ? win - overlap : 1;

    const std::size_t half = win / 2;  // one-sided bins 0..half
    std::vector<double> avg(half + 1, 0.0);
    std::size_t segments = 0;
    std::vector<double> seg(win);
    for (std::size_t start = 0; start + win <= x.size(); start += hop) {
        for (std::size_t i = 0; i < win; ++i) seg[i] = x[start + i] * window[i];
        Spectrum s = forward_transform(seg, sample_rate);
        for (std::size_t k = 0; k <= half; ++k) avg[k] += std::norm(s.bins[k]);
        ++segments;
    }

    const double scale = 1.0 / (sample_rate * win_power * static_cast<double>(segments));
    std::vector<PsdPoint> psd(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        double p = avg[k] * scale;
        const bool nyquist = (win % 2 == 0) && (k == half);
        if (k != 0 && !nyquist) p *= 2.0;  // fold the conjugate half
        psd[k].frequency_hz = static_cast<double>(k) * sample_rate / static_cast<double>(win);
        psd[k].power_density = p;
    }
    return psd;
}

}  // namespace descan
