#include "descan/matcher.hpp"

namespace descan {

MatchResult match_template(std::span<const double> buffer, const NoiseTemplate& tpl,
                           const SuppressionParams& params) {
    const std::size_t N = params.frame_len;
    const std::size_t L = tpl.length();
    if (buffer.size() < 2 * N + L)
        throw BufferTooShort("match_template: buffer shorter than 2*frame_len + template length");

    const double head = tpl.samples.front();
    bool constant = true;
    for (double v : tpl.samples) {
        if (v != head) {
            constant = false;
            break;
        }
    }
    if (constant) throw DegenerateInput("match_template: template has zero variance");

    MatchResult best;
    for (std::size_t lag = N + 1; lag <= 2 * N; ++lag) {
        double score;
        try {
            score = ncc(tpl.samples, buffer.subspan(lag, L));
        } catch (const DegenerateInput&) {
            continue;  // silent stretch of the buffer
        }
        if (score > best.score) {
            best.lag = lag;
            best.score = score;
        }
    }
    best.matched = best.score >= -1.0 && best.score >= params.theta_corr;
    return best;
}

std::vector<double> extract_matched_segment(std::span<const double> buffer, std::size_t lag,
                                            std::size_t len) {
    if (lag + len > buffer.size())
        throw OutOfRange("extract_matched_segment: segment exceeds buffer");
    return {buffer.begin() + lag, buffer.begin() + lag + len};
}

}  // namespace descan
