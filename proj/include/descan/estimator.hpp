// Noise template initialization via double sliding-window cross-correlation.
#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "descan/dsp.hpp"
#include "descan/types.hpp"

namespace descan {

/// One (offset, period) pair scored during the search.
struct TemplateCandidate {
    std::size_t offset = 0;
    std::size_t period = 0;
    double score = -2.0;  // below any valid correlation until a candidate is scored
};

struct EstimateResult {
    std::optional<NoiseTemplate> tpl;  // engaged iff best.score >= theta_xcorr
    TemplateCandidate best;            // kept for diagnostics on NotFound

    bool found() const { return tpl.has_value(); }
};

/// Scores ncc(buffer[o : o+L], buffer[o+L : o+2L]) for every period L in
/// [min_period, max_period] and every admissible offset, and returns the
/// first window of the best candidate when its score reaches theta_xcorr.
/// Ties break toward the smallest offset, then the smallest period.
/// Windows with zero variance are skipped rather than scored.
///
/// coarse_stride > 1 scans offsets at that stride first and then refines
/// around the coarse winner; 1 (the default) is the exhaustive scan.
/// Throws BufferTooShort when the buffer cannot hold two max-length windows.
EstimateResult estimate_template(std::span<const double> buffer, const SuppressionParams& params,
                                 std::size_t coarse_stride = 1);

}  // namespace descan
