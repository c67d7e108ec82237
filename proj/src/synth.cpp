#include "descan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace descan {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double l2_norm(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
}

// One pulse waveform, truncated where every component's envelope has decayed
// below 1e-14 of the loudest amplitude. Reusing a single precomputed pulse for
// every onset is what makes a jitter-free train exactly periodic.
std::vector<double> render_pulse(const std::vector<PulseComponent>& comps, double sample_rate) {
    double amp_max = 0.0;
    for (const auto& c : comps) amp_max = std::max(amp_max, std::abs(c.amplitude));
    if (amp_max == 0.0) return {};
    double t_cut = 0.0;
    for (const auto& c : comps) {
        if (c.amplitude == 0.0) continue;
        t_cut = std::max(t_cut, std::log(std::abs(c.amplitude) / (1e-14 * amp_max)) / c.decay_rate);
    }
    const std::size_t len = static_cast<std::size_t>(std::ceil(t_cut * sample_rate));
    std::vector<double> pulse(len, 0.0);
    for (const auto& c : comps) {
        for (std::size_t j = 0; j < len; ++j) {
            const double t = static_cast<double>(j) / sample_rate;
            pulse[j] += c.amplitude * std::exp(-c.decay_rate * t) * std::sin(kTwoPi * c.frequency_hz * t);
        }
    }
    return pulse;
}

}  // namespace

std::vector<PulseComponent> NoiseModel::default_pulses() {
    return {{600.0, 0.50, 40.0}, {1100.0, 0.35, 50.0}, {1900.0, 0.22, 60.0}};
}

void NoiseModel::validate(double sample_rate) const {
    if (!(sample_rate > 0.0)) throw InvalidModel("sample_rate: must be positive");
    if (!(period_s > 0.0)) throw InvalidModel("period_s: must be positive");
    if (!(jitter_s >= 0.0 && jitter_s < period_s / 4.0))
        throw InvalidModel("jitter_s: requires 0 <= jitter < period/4");
    if (!(background_level >= 0.0)) throw InvalidModel("background_level: must be nonnegative");
    for (const auto& c : pulses) {
        if (!(c.frequency_hz > 0.0 && c.frequency_hz < sample_rate / 2.0))
            throw InvalidModel("pulse frequency: must lie in (0, sample_rate/2)");
        if (!(c.decay_rate > 0.0)) throw InvalidModel("pulse decay_rate: must be positive");
    }
}

SampleVector gen_gradient_noise(const NoiseModel& model, double duration_s, double sample_rate) {
    model.validate(sample_rate);
    if (!(duration_s >= 2.0 * model.period_s))
        throw InvalidModel("duration: must cover at least two periods");

    const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    const std::size_t period = static_cast<std::size_t>(std::llround(model.period_s * sample_rate));
    std::vector<double> x(n, 0.0);

    const std::vector<double> pulse = render_pulse(model.pulses, sample_rate);
    if (!pulse.empty()) {
        // Onsets start far enough in the past that every tail crossing t=0 is
        // present; that keeps the first samples on the same periodic orbit.
        const std::int64_t k_min =
            -static_cast<std::int64_t>((pulse.size() + period - 1) / period);
        const std::int64_t k_max = static_cast<std::int64_t>(n / period) + 1;
        std::mt19937_64 jitter_rng(model.seed);
        std::uniform_real_distribution<double> jitter_dist(-model.jitter_s, model.jitter_s);
        for (std::int64_t k = k_min; k <= k_max; ++k) {
            std::int64_t onset = k * static_cast<std::int64_t>(period);
            if (model.jitter_s > 0.0) onset += std::llround(jitter_dist(jitter_rng) * sample_rate);
            const std::int64_t j_lo = std::max<std::int64_t>(0, -onset);
            const std::int64_t j_hi =
                std::min<std::int64_t>(static_cast<std::int64_t>(pulse.size()),
                                       static_cast<std::int64_t>(n) - onset);
            for (std::int64_t j = j_lo; j < j_hi; ++j) {
                x[static_cast<std::size_t>(onset + j)] += pulse[static_cast<std::size_t>(j)];
            }
        }
    }

    if (model.background_level > 0.0) {
        std::mt19937_64 bg_rng(model.seed ^ 0x9e3779b97f4a7c15ULL);
        std::normal_distribution<double> bg(0.0, model.background_level);
        for (double& v : x) v += bg(bg_rng);
    }

    return {std::move(x), sample_rate};
}

SampleVector gen_test_utterance(double duration_s, double sample_rate, std::uint64_t seed) {
    const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    std::vector<double> x(n, 0.0);
    const std::size_t margin = (n + 9) / 10;
    if (n == 0 || n <= 2 * margin) return {std::move(x), sample_rate};
    const std::size_t nv = n - 2 * margin;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    struct Formant {
        double center, bandwidth, drift;
    };
    Formant formants[3] = {
        {520.0 * (1.0 + 0.04 * unit(rng)), 80.0, 0.015 * unit(rng)},
        {1450.0 * (1.0 + 0.04 * unit(rng)), 120.0, 0.015 * unit(rng)},
        {2600.0 * (1.0 + 0.04 * unit(rng)), 160.0, 0.015 * unit(rng)},
    };

    // Harmonic source with a falling f0 glide, then three slowly drifting
    // two-pole resonators in cascade for a vowel-like spectral envelope.
    std::vector<double> voiced(nv, 0.0);
    const double f0_start = 110.0, f0_end = 90.0;
    const int harmonics = std::min(24, static_cast<int>((0.45 * sample_rate) / f0_start));
    double phase = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(nv);
        const double f0 = f0_start + (f0_end - f0_start) * frac;
        phase += kTwoPi * f0 / sample_rate;
        double s = 0.0;
        for (int h = 1; h <= harmonics; ++h) s += std::sin(h * phase) / h;
        voiced[i] = s;
    }

    for (const auto& fm : formants) {
        double y1 = 0.0, y2 = 0.0;
        double a1 = 0.0, a2 = 0.0;
        const std::size_t update = 160;
        for (std::size_t i = 0; i < nv; ++i) {
            if (i % update == 0) {
                const double frac = static_cast<double>(i) / static_cast<double>(nv);
                const double fc = fm.center * (1.0 + fm.drift * frac);
                const double r = std::exp(-std::numbers::pi * fm.bandwidth / sample_rate);
                a1 = 2.0 * r * std::cos(kTwoPi * fc / sample_rate);
                a2 = -r * r;
            }
            const double y = voiced[i] + a1 * y1 + a2 * y2;
            y2 = y1;
            y1 = y;
            voiced[i] = y;
        }
    }

    // Raised-cosine onset/offset, 50 ms or whatever fits.
    const std::size_t ramp =
        std::min(nv / 2, static_cast<std::size_t>(std::llround(0.05 * sample_rate)));
    for (std::size_t i = 0; i < ramp; ++i) {
        const double e = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) /
                                               static_cast<double>(ramp)));
        voiced[i] *= e;
        voiced[nv - 1 - i] *= e;
    }

    double peak = 0.0;
    for (double v : voiced) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
        for (std::size_t i = 0; i < nv; ++i) x[margin + i] = voiced[i] / peak;
    }
    return {std::move(x), sample_rate};
}

Mixture mix_at_snr(const SampleVector& v, const SampleVector& g, double target_snr_db,
                   std::size_t offset_samples) {
    if (v.sample_rate != g.sample_rate)
        throw SampleRateMismatch("mix_at_snr: utterance vs noise sample rate");
    if (offset_samples + v.size() > g.size())
        throw OutOfRange("mix_at_snr: utterance does not fit at this offset");
    const double nv = l2_norm(v.samples);
    const double ng = l2_norm(g.samples);
    if (nv == 0.0) throw ZeroSignal("mix_at_snr: utterance is silent");
    if (ng == 0.0) throw ZeroSignal("mix_at_snr: noise is silent");

    const double scale = ng * std::pow(10.0, target_snr_db / 20.0) / nv;
    Mixture mix;
    mix.offset_samples = offset_samples;
    mix.v_scaled.sample_rate = v.sample_rate;
    mix.v_scaled.samples.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mix.v_scaled.samples[i] = scale * v.samples[i];
    mix.g = g;
    mix.y = g;
    for (std::size_t i = 0; i < v.size(); ++i) {
        mix.y.samples[offset_samples + i] += mix.v_scaled.samples[i];
    }
    return mix;
}

}  // namespace descan
