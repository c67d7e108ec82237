#include "descan/types.hpp"

#include <algorithm>

namespace descan {

SuppressionParams SuppressionParams::defaults(double sample_rate) {
    SuppressionParams p;
    p.s_r = sample_rate;
    p.frame_len = static_cast<std::size_t>(std::llround(0.02 * sample_rate));
    // Keep the stock cutoff legal at low sampling rates.
    if (sample_rate > 0.0) {
        p.lowpass_cutoff = std::min(5000.0, sample_rate / 2.0);
    }
    return p;
}

void SuppressionParams::validate() const {
    if (!(s_r > 0.0)) throw ValidationError("s_r: must be positive");
    if (!(l_est > 0.0)) throw ValidationError("l_est: must be positive");
    if (!(w > 0.0 && w < l_est)) throw ValidationError("w: requires 0 < w < l_est");
    if (frame_len == 0) throw ValidationError("frame_len: must be positive");
    if (!(theta_xcorr >= 0.0 && theta_xcorr <= 1.0))
        throw ValidationError("theta_xcorr: must lie in [0, 1]");
    if (!(theta_corr >= 0.0 && theta_corr <= 1.0))
        throw ValidationError("theta_corr: must lie in [0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("gamma: must lie in [0, 1]");
    if (!(alpha >= 0.0)) throw ValidationError("alpha: must be nonnegative");
    if (!(theta_rms >= 0.0)) throw ValidationError("theta_rms: must be nonnegative");
    if (lowpass_cutoff && !(*lowpass_cutoff > 0.0 && *lowpass_cutoff <= s_r / 2.0))
        throw ValidationError("lowpass_cutoff: must lie in (0, s_r/2]");
    if (min_period() == 0) throw ValidationError("l_est: period search range reaches zero samples");
}

const char* to_string(Weighting kind) {
    switch (kind) {
        case Weighting::Zero: return "zero";
        case Weighting::LinearFreq: return "linear";
    }
    return "zero";
}

Weighting weighting_from_string(const std::string& name) {
    if (name == "zero") return Weighting::Zero;
    if (name == "linear") return Weighting::LinearFreq;
    throw ParseError("unknown weighting '" + name + "' (expected zero or linear)");
}

}  // namespace descan
