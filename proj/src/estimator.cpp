#include "descan/estimator.hpp"

#include <algorithm>

namespace descan {
namespace {

// Scores one (offset, period) pair. Zero-variance windows (silence) are
// unusable rather than an error at this level.
bool score_candidate(std::span<const double> buffer, std::size_t o, std::size_t L, double& out) {
    try {
        out = ncc(buffer.subspan(o, L), buffer.subspan(o + L, L));
        return true;
    } catch (const DegenerateInput&) {
        return false;
    }
}

}  // namespace

EstimateResult estimate_template(std::span<const double> buffer, const SuppressionParams& params,
                                 std::size_t coarse_stride) {
    const std::size_t min_L = params.min_period();
    const std::size_t max_L = params.max_period();
    if (min_L == 0) throw BufferTooShort("estimate_template: period search range reaches zero");
    if (buffer.size() < 2 * max_L)
        throw BufferTooShort("estimate_template: buffer shorter than two maximum-period windows");
    if (coarse_stride == 0) coarse_stride = 1;

    const std::size_t last_offset = buffer.size() - 2 * min_L;

    // Offsets outer, periods inner: a strict > keeps the lexicographically
    // first (offset, period) among ties, which is the documented tie-break.
    auto scan = [&](std::size_t first, std::size_t last, std::size_t stride,
                    TemplateCandidate& best) {
        for (std::size_t o = first; o <= last; o += stride) {
            for (std::size_t L = min_L; L <= max_L; ++L) {
                if (o + 2 * L > buffer.size()) break;
                double score;
                if (!score_candidate(buffer, o, L, score)) continue;
                if (score > best.score) best = {o, L, score};
            }
        }
    };

    TemplateCandidate best;
    scan(0, last_offset, coarse_stride, best);
    if (coarse_stride > 1 && best.score >= -1.0) {
        // Refine around the coarse winner; the window contains it, so the
        // refined result can only improve or stay put.
        const std::size_t lo = best.offset >= coarse_stride - 1 ? best.offset - (coarse_stride - 1) : 0;
        const std::size_t hi = std::min(best.offset + coarse_stride - 1, last_offset);
        TemplateCandidate refined;
        scan(lo, hi, 1, refined);
        best = refined;
    }

    EstimateResult res;
    res.best = best;
    if (best.score >= -1.0 && best.score >= params.theta_xcorr) {
        std::vector<double> first_window(buffer.begin() + best.offset,
                                         buffer.begin() + best.offset + best.period);
        res.tpl = NoiseTemplate::from_samples(std::move(first_window), params.s_r);
    }
    return res;
}

}  // namespace descan
