// Template alignment within a buffer, correlation restricted to lags N+1..2N.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "descan/dsp.hpp"
#include "descan/types.hpp"

namespace descan {

struct MatchResult {
    bool matched = false;  // peak score reached theta_corr
    std::size_t lag = 0;   // best lag seen (valid even when !matched)
    double score = -2.0;   // best score seen

    explicit operator bool() const { return matched; }
};

/// Scores ncc(template, buffer[lag : lag+L]) for every lag in
/// [frame_len+1, 2*frame_len]. Returns the peak lag when the peak score
/// reaches theta_corr; otherwise matched=false with the best lag/score kept
/// as diagnostics. Ties break toward the smallest lag; zero-variance buffer
/// windows are skipped.
/// Throws BufferTooShort when buffer.size() < 2*frame_len + L, and
/// DegenerateInput for an all-constant template.
MatchResult match_template(std::span<const double> buffer, const NoiseTemplate& tpl,
                           const SuppressionParams& params);

/// buffer[lag : lag+len] as an owned copy. Throws OutOfRange.
std::vector<double> extract_matched_segment(std::span<const double> buffer, std::size_t lag,
                                            std::size_t len);

}  // namespace descan
